// Payload shapes of the trackme HTTP API (the only surface this client uses).

export interface ShapeDict {
  label: string;
  points: number[][]; // [[x1, y1], [x2, y2]] for rectangles
  group_id: number | null; // track ID slot
  shape_type: string;
  flags: Record<string, unknown>;
  [key: string]: unknown;
}

export interface FrameDict {
  version: string;
  flags: Record<string, unknown>;
  shapes: ShapeDict[];
  imagePath: string;
  imageHeight: number;
  imageWidth: number;
  [key: string]: unknown;
}

export type EditingStatus = 'idle' | 'interpolation_session' | 'association_running';

export interface Navigation {
  current_frame: number;
  total_frames: number;
  editing_status: EditingStatus;
  pending_confirmation: boolean;
}

export interface SessionInfo {
  session_id: string;
  start_frame: number;
  end_frame: number;
  interval: number;
  keyframes: number[];
  label: string;
  track_id: number | null;
  completed_keyframes: number[];
}

export interface FrameEntry {
  index: number;
  image: string;
  annotated: boolean;
}

export interface ProjectInfo {
  root: string;
  frame_count: number;
  frames: FrameEntry[];
  navigation: Navigation;
  session: SessionInfo | null;
}

export interface NavigateResult {
  frame: number;
  redirected: boolean;
  navigation: Navigation;
}

export interface ColorInfo {
  label: string;
  track_id: number | null;
  color: [number, number, number];
  hex: string;
}

export interface SessionRequest {
  start_frame: number;
  end_frame: number;
  interval: number;
  label: string;
  track_id: number | null;
}

export interface AssociateRequest {
  mode: 'scratch' | 'current';
  frame?: number;
  end_frame?: number | null;
  method?: string;
}

export interface ModifyRequest {
  start_frame: number;
  end_frame: number;
  mode: 'remove-all' | 'swap-id' | 'swap-label';
  target_label?: string | null;
  target_id?: number | null;
  new_label?: string | null;
  new_id?: number | null;
}

export interface EditSummary {
  summary: Record<string, unknown>;
}
