// HTTP client for the annotation service. Every mutation in the UI flows
// through this interface; nothing else touches project data.

import type {
  AssociateRequest,
  ColorInfo,
  EditSummary,
  FrameDict,
  ModifyRequest,
  NavigateResult,
  ProjectInfo,
  SessionInfo,
  SessionRequest,
} from './types';

export class ApiError extends Error {
  constructor(readonly status: number, detail: string) {
    super(detail);
    this.name = 'ApiError';
  }
}

export interface ApiClient {
  getProject(): Promise<ProjectInfo>;
  getFrame(index: number): Promise<FrameDict>;
  putFrame(index: number, frame: FrameDict): Promise<void>;
  imageUrl(index: number): string;
  navigate(frame: number): Promise<NavigateResult>;
  createSession(req: SessionRequest): Promise<SessionInfo>;
  finishSession(sessionId: string): Promise<EditSummary>;
  cancelSession(sessionId: string): Promise<void>;
  associate(req: AssociateRequest): Promise<EditSummary>;
  modify(req: ModifyRequest): Promise<EditSummary>;
  getColor(label: string, trackId: number | null): Promise<ColorInfo>;
}

async function parse<T>(response: Response): Promise<T> {
  if (!response.ok) {
    let detail = response.statusText;
    try {
      const body = (await response.json()) as { detail?: string };
      if (body.detail) detail = body.detail;
    } catch {
      // non-JSON error body; keep the status text
    }
    throw new ApiError(response.status, detail);
  }
  return (await response.json()) as T;
}

export class HttpApiClient implements ApiClient {
  constructor(private readonly base = '') {}

  private url(path: string): string {
    return `${this.base}${path}`;
  }

  private async get<T>(path: string): Promise<T> {
    return parse<T>(await fetch(this.url(path)));
  }

  private async send<T>(method: string, path: string, body?: unknown): Promise<T> {
    return parse<T>(
      await fetch(this.url(path), {
        method,
        headers: { 'Content-Type': 'application/json' },
        body: body === undefined ? undefined : JSON.stringify(body),
      }),
    );
  }

  getProject(): Promise<ProjectInfo> {
    return this.get('/api/project');
  }

  getFrame(index: number): Promise<FrameDict> {
    return this.get(`/api/frames/${index}`);
  }

  async putFrame(index: number, frame: FrameDict): Promise<void> {
    await this.send('PUT', `/api/frames/${index}`, frame);
  }

  imageUrl(index: number): string {
    return this.url(`/api/frames/${index}/image`);
  }

  navigate(frame: number): Promise<NavigateResult> {
    return this.send('POST', '/api/navigate', { frame });
  }

  createSession(req: SessionRequest): Promise<SessionInfo> {
    return this.send('POST', '/api/interpolation/sessions', req);
  }

  finishSession(sessionId: string): Promise<EditSummary> {
    return this.send('POST', `/api/interpolation/sessions/${sessionId}/finish`);
  }

  async cancelSession(sessionId: string): Promise<void> {
    await this.send('DELETE', `/api/interpolation/sessions/${sessionId}`);
  }

  associate(req: AssociateRequest): Promise<EditSummary> {
    return this.send('POST', '/api/associate', req);
  }

  modify(req: ModifyRequest): Promise<EditSummary> {
    return this.send('POST', '/api/modify', req);
  }

  getColor(label: string, trackId: number | null): Promise<ColorInfo> {
    const params = new URLSearchParams({ label });
    if (trackId !== null) params.set('id', String(trackId));
    return this.get(`/api/colors?${params.toString()}`);
  }
}
