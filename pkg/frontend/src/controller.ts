// Application state and actions. Pure TypeScript over the ApiClient so the
// whole behavior is testable without a DOM; views subscribe and re-render.

import { ApiError, type ApiClient } from './api';
import type {
  AssociateRequest,
  FrameDict,
  ModifyRequest,
  ProjectInfo,
  SessionRequest,
  ShapeDict,
} from './types';

export interface Notice {
  kind: 'error' | 'info';
  text: string;
}

export interface AppState {
  project: ProjectInfo | null;
  frameIndex: number;
  frame: FrameDict | null;
  selectedShape: number | null;
  drawMode: boolean;
  notices: Notice[];
}

type Listener = (state: AppState) => void;

export class AnnotationController {
  readonly state: AppState = {
    project: null,
    frameIndex: 0,
    frame: null,
    selectedShape: null,
    drawMode: false,
    notices: [],
  };

  private listeners: Listener[] = [];

  constructor(private readonly api: ApiClient) {}

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  private emit(): void {
    for (const listener of this.listeners) listener(this.state);
  }

  private notify(kind: Notice['kind'], text: string): void {
    this.state.notices.push({ kind, text });
    this.emit();
  }

  dismissNotice(index: number): void {
    this.state.notices.splice(index, 1);
    this.emit();
  }

  private async fail(err: unknown): Promise<void> {
    const text = err instanceof ApiError ? `${err.status}: ${err.message}`
      : err instanceof Error ? err.message : String(err);
    this.notify('error', text);
  }

  // --- loading -------------------------------------------------------------

  async open(): Promise<void> {
    this.state.project = await this.api.getProject();
    this.state.frameIndex = this.state.project.navigation.current_frame;
    await this.loadFrame();
  }

  async refreshProject(): Promise<void> {
    this.state.project = await this.api.getProject();
    this.emit();
  }

  private async loadFrame(): Promise<void> {
    this.state.frame = await this.api.getFrame(this.state.frameIndex);
    this.state.selectedShape = null;
    this.emit();
  }

  get session() {
    return this.state.project?.session ?? null;
  }

  get navigation() {
    return this.state.project?.navigation ?? null;
  }

  /** Finish is offered only when the server reports the session ready. */
  get canFinish(): boolean {
    return this.session !== null
      && this.navigation?.pending_confirmation === true;
  }

  // --- navigation ----------------------------------------------------------

  /** Go to a frame via the server, following its redirect during sessions. */
  async goTo(frame: number): Promise<void> {
    const total = this.state.project?.frame_count ?? 0;
    const target = Math.min(Math.max(frame, 0), Math.max(total - 1, 0));
    try {
      const result = await this.api.navigate(target);
      this.state.frameIndex = result.frame;
      if (this.state.project) this.state.project.navigation = result.navigation;
      await this.loadFrame();
    } catch (err) {
      await this.fail(err);
    }
  }

  /** Next frame; inside a session, the next keyframe of the plan. */
  async next(): Promise<void> {
    await this.goTo(this.stepTarget(+1));
  }

  /** Previous frame; inside a session, the previous keyframe of the plan. */
  async prev(): Promise<void> {
    await this.goTo(this.stepTarget(-1));
  }

  private stepTarget(direction: 1 | -1): number {
    const current = this.state.frameIndex;
    const session = this.session;
    if (session === null) return current + direction;
    const frames = [...session.keyframes].sort((a, b) => a - b);
    if (direction > 0) {
      const later = frames.filter((k) => k > current);
      return later.length ? later[0] : current;
    }
    const earlier = frames.filter((k) => k < current);
    return earlier.length ? earlier[earlier.length - 1] : current;
  }

  // --- shape editing (optimistic, rolled back on rejection) -----------------

  selectShape(index: number | null): void {
    this.state.selectedShape = index;
    this.emit();
  }

  setDrawMode(on: boolean): void {
    this.state.drawMode = on;
    this.emit();
  }

  private async putShapes(mutate: (shapes: ShapeDict[]) => ShapeDict[]): Promise<boolean> {
    const frame = this.state.frame;
    if (!frame || !this.state.project) return false;
    const before = frame.shapes;
    const after = mutate(before.map((s) => ({ ...s, points: s.points.map((p) => [...p]) })));
    this.state.frame = { ...frame, shapes: after };
    this.emit(); // optimistic render
    try {
      await this.api.putFrame(this.state.frameIndex, this.state.frame);
      this.state.project.frames[this.state.frameIndex].annotated = true;
      this.emit();
      return true;
    } catch (err) {
      this.state.frame = { ...frame, shapes: before }; // roll back
      await this.fail(err);
      return false;
    }
  }

  async moveShape(index: number, points: number[][]): Promise<void> {
    await this.putShapes((shapes) => {
      shapes[index] = { ...shapes[index], points };
      return shapes;
    });
  }

  async createShape(label: string, trackId: number | null, points: number[][]): Promise<void> {
    const ok = await this.putShapes((shapes) => {
      shapes.push({
        label,
        points,
        group_id: trackId,
        shape_type: 'rectangle',
        flags: {},
      });
      return shapes;
    });
    if (ok && this.state.frame) {
      this.state.selectedShape = this.state.frame.shapes.length - 1;
      this.emit();
    }
  }

  async deleteSelected(): Promise<void> {
    const index = this.state.selectedShape;
    if (index === null) return;
    const ok = await this.putShapes((shapes) => {
      shapes.splice(index, 1);
      return shapes;
    });
    if (ok) {
      this.state.selectedShape = null;
      this.emit();
    }
  }

  // --- engine features -------------------------------------------------------

  async startSession(req: SessionRequest): Promise<void> {
    try {
      await this.api.createSession(req);
      await this.refreshProject();
      await this.goTo(this.navigation?.current_frame ?? req.start_frame);
    } catch (err) {
      await this.fail(err);
    }
  }

  /** The "Finish" action: exactly one interpolation run, then refresh. */
  async finishSession(): Promise<void> {
    const session = this.session;
    if (session === null) return;
    try {
      const result = await this.api.finishSession(session.session_id);
      await this.refreshProject();
      await this.loadFrame(); // generated boxes become visible immediately
      this.notify('info', `interpolation done: ${JSON.stringify(result.summary)}`);
    } catch (err) {
      await this.fail(err); // 422 (not enough keyframes) stays visible
      await this.refreshProject();
    }
  }

  async cancelSession(): Promise<void> {
    const session = this.session;
    if (session === null) return;
    try {
      await this.api.cancelSession(session.session_id);
    } catch (err) {
      await this.fail(err);
    }
    await this.refreshProject();
  }

  async runAssociation(req: AssociateRequest): Promise<void> {
    try {
      const result = await this.api.associate(req);
      this.notify('info', `association done: ${JSON.stringify(result.summary)}`);
    } catch (err) {
      await this.fail(err);
    }
    await this.refreshProject();
    await this.loadFrame();
  }

  async runModification(req: ModifyRequest): Promise<void> {
    try {
      const result = await this.api.modify(req);
      this.notify('info', `modification done: ${JSON.stringify(result.summary)}`);
    } catch (err) {
      await this.fail(err);
    }
    await this.refreshProject();
    await this.loadFrame();
  }
}
