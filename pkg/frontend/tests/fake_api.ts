// In-memory stand-in for the annotation service, mirroring its semantics:
// navigation guard during sessions, session lifecycle, colors, frame CRUD.

import { ApiError, type ApiClient } from '../src/api';
import type {
  AssociateRequest,
  ColorInfo,
  EditSummary,
  FrameDict,
  ModifyRequest,
  NavigateResult,
  Navigation,
  ProjectInfo,
  SessionInfo,
  SessionRequest,
} from '../src/types';

function emptyFrame(index: number): FrameDict {
  return {
    version: '1.0',
    flags: {},
    shapes: [],
    imagePath: `frame_${String(index).padStart(4, '0')}.jpg`,
    imageHeight: 240,
    imageWidth: 320,
  };
}

export class FakeApi implements ApiClient {
  frames = new Map<number, FrameDict>();
  session: SessionInfo | null = null;
  currentFrame = 0;
  revision = 0;

  finishCalls = 0;
  putCalls: Array<{ index: number; frame: FrameDict }> = [];
  associateCalls: AssociateRequest[] = [];
  modifyCalls: ModifyRequest[] = [];
  colorTable = new Map<string, ColorInfo>();
  failNextPut: ApiError | null = null;

  constructor(readonly frameCount = 40) {}

  private colorKey(label: string, id: number | null): string {
    return `${label}|${id === null ? 'null' : id}`;
  }

  setColor(label: string, id: number | null, hex: string): void {
    const rgb: [number, number, number] = [
      parseInt(hex.slice(1, 3), 16),
      parseInt(hex.slice(3, 5), 16),
      parseInt(hex.slice(5, 7), 16),
    ];
    this.colorTable.set(this.colorKey(label, id), {
      label, track_id: id, color: rgb, hex,
    });
  }

  setShapes(index: number, shapes: FrameDict['shapes']): void {
    const frame = this.frames.get(index) ?? emptyFrame(index);
    this.frames.set(index, { ...frame, shapes });
  }

  hasTrackBox(index: number, label: string, id: number | null): boolean {
    const frame = this.frames.get(index);
    return !!frame?.shapes.some((s) => s.label === label && s.group_id === id);
  }

  private navigation(): Navigation {
    let pending = false;
    if (this.session) {
      const { label, track_id, keyframes } = this.session;
      pending = keyframes.filter((k) => this.hasTrackBox(k, label, track_id)).length >= 2;
    }
    return {
      current_frame: this.currentFrame,
      total_frames: this.frameCount,
      editing_status: this.session ? 'interpolation_session' : 'idle',
      pending_confirmation: pending,
    };
  }

  async getProject(): Promise<ProjectInfo> {
    return {
      root: '/fake',
      frame_count: this.frameCount,
      frames: Array.from({ length: this.frameCount }, (_, i) => ({
        index: i,
        image: `frame_${String(i).padStart(4, '0')}.jpg`,
        annotated: this.frames.has(i),
      })),
      navigation: this.navigation(),
      session: this.session,
    };
  }

  async getFrame(index: number): Promise<FrameDict> {
    if (index < 0 || index >= this.frameCount) throw new ApiError(404, 'unknown frame');
    const frame = this.frames.get(index) ?? emptyFrame(index);
    return structuredClone({ ...frame, flags: { ...frame.flags, rev: this.revision } });
  }

  async putFrame(index: number, frame: FrameDict): Promise<void> {
    if (this.failNextPut) {
      const err = this.failNextPut;
      this.failNextPut = null;
      throw err;
    }
    this.putCalls.push({ index, frame: structuredClone(frame) });
    this.frames.set(index, structuredClone(frame));
  }

  imageUrl(index: number): string {
    return `/api/frames/${index}/image`;
  }

  async navigate(frame: number): Promise<NavigateResult> {
    if (frame < 0 || frame >= this.frameCount) throw new ApiError(404, 'unknown frame');
    let landed = frame;
    if (this.session && !this.session.keyframes.includes(frame)) {
      // nearest keyframe, ties toward the session start
      landed = [...this.session.keyframes].sort(
        (a, b) => Math.abs(a - frame) - Math.abs(b - frame) || a - b)[0];
    }
    this.currentFrame = landed;
    return { frame: landed, redirected: landed !== frame, navigation: this.navigation() };
  }

  async createSession(req: SessionRequest): Promise<SessionInfo> {
    if (this.session) throw new ApiError(409, 'session exists');
    const keyframes: number[] = [];
    for (let f = req.start_frame; f < req.end_frame; f += req.interval) keyframes.push(f);
    keyframes.push(req.end_frame);
    this.session = {
      session_id: 'fake-session',
      start_frame: req.start_frame,
      end_frame: req.end_frame,
      interval: req.interval,
      keyframes,
      label: req.label,
      track_id: req.track_id,
      completed_keyframes: keyframes.filter((k) =>
        this.hasTrackBox(k, req.label, req.track_id)),
    };
    this.currentFrame = (await this.navigate(this.currentFrame)).frame;
    return this.session;
  }

  async finishSession(sessionId: string): Promise<EditSummary> {
    if (!this.session || this.session.session_id !== sessionId) {
      throw new ApiError(404, 'no such session');
    }
    const { label, track_id, keyframes, start_frame, end_frame } = this.session;
    const annotated = keyframes.filter((k) => this.hasTrackBox(k, label, track_id));
    if (annotated.length < 2) throw new ApiError(422, 'need at least 2 keyframes');
    this.finishCalls += 1;
    let generated = 0;
    for (let f = start_frame; f <= end_frame; f++) {
      if (keyframes.includes(f)) continue;
      const frame = this.frames.get(f) ?? emptyFrame(f);
      frame.shapes = frame.shapes.filter(
        (s) => !(s.label === label && s.group_id === track_id));
      frame.shapes.push({
        label,
        points: [[f, f], [f + 10, f + 10]],
        group_id: track_id,
        shape_type: 'rectangle',
        flags: { generated: true },
      });
      this.frames.set(f, frame);
      generated += 1;
    }
    this.session = null;
    this.revision += 1;
    return { summary: { generated, replaced: 0, skipped_keyframes_missing_box: 0 } };
  }

  async cancelSession(sessionId: string): Promise<void> {
    if (!this.session || this.session.session_id !== sessionId) {
      throw new ApiError(404, 'no such session');
    }
    this.session = null;
  }

  async associate(req: AssociateRequest): Promise<EditSummary> {
    this.associateCalls.push(req);
    this.revision += 1;
    return { summary: { frames_processed: this.frameCount, ids_created: 0 } };
  }

  async modify(req: ModifyRequest): Promise<EditSummary> {
    this.modifyCalls.push(req);
    this.revision += 1;
    return { summary: { frames_touched: 0, shapes_modified: 0 } };
  }

  async getColor(label: string, trackId: number | null): Promise<ColorInfo> {
    const hit = this.colorTable.get(this.colorKey(label, trackId));
    if (hit) return hit;
    if (trackId === null) {
      return { label, track_id: null, color: [128, 128, 128], hex: '#808080' };
    }
    const v = (trackId * 37) % 200 + 30;
    const hex = `#${v.toString(16).padStart(2, '0')}4060`;
    return { label, track_id: trackId, color: [v, 64, 96], hex };
  }
}

export function trackShape(
  label: string, id: number | null, x: number, y: number, size = 20,
): FrameDict['shapes'][number] {
  return {
    label,
    points: [[x, y], [x + size, y + size]],
    group_id: id,
    shape_type: 'rectangle',
    flags: {},
  };
}
