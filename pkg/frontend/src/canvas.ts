// Frame canvas: draws the image and boxes, handles select / move / resize /
// draw with pointer events. Edits are reported upward; this layer never
// talks to the API itself.

import type { AnnotationController } from './controller';
import type { RenderModel } from './render';

const HANDLE = 6; // px hit zone for resize corners

type DragState =
  | { kind: 'none' }
  | { kind: 'draw'; startX: number; startY: number; curX: number; curY: number }
  | { kind: 'move'; shape: number; lastX: number; lastY: number }
  | { kind: 'resize'; shape: number; corner: 0 | 1; otherX: number; otherY: number };

export class CanvasView {
  private readonly ctx: CanvasRenderingContext2D;
  private image: HTMLImageElement | null = null;
  private model: RenderModel = { boxes: [], labelPanel: [], idPanel: [] };
  private drag: DragState = { kind: 'none' };
  private scale = 1;

  constructor(
    private readonly canvas: HTMLCanvasElement,
    private readonly controller: AnnotationController,
    private readonly drawDefaults: () => { label: string; trackId: number | null },
  ) {
    const ctx = canvas.getContext('2d');
    if (!ctx) throw new Error('canvas 2d context unavailable');
    this.ctx = ctx;
    canvas.addEventListener('pointerdown', (e) => this.onDown(e));
    canvas.addEventListener('pointermove', (e) => this.onMove(e));
    canvas.addEventListener('pointerup', (e) => this.onUp(e));
  }

  setImage(url: string, width: number, height: number): void {
    this.canvas.width = width;
    this.canvas.height = height;
    const img = new Image();
    img.onload = () => {
      this.image = img;
      this.paint();
    };
    img.src = url;
  }

  setModel(model: RenderModel): void {
    this.model = model;
    this.paint();
  }

  private toImage(e: PointerEvent): [number, number] {
    const rect = this.canvas.getBoundingClientRect();
    this.scale = this.canvas.width / rect.width;
    return [(e.clientX - rect.left) * this.scale, (e.clientY - rect.top) * this.scale];
  }

  private hitShape(x: number, y: number): number | null {
    // topmost box whose border or interior contains the point
    for (let i = this.model.boxes.length - 1; i >= 0; i--) {
      const b = this.model.boxes[i];
      if (x >= b.x - HANDLE && x <= b.x + b.w + HANDLE
        && y >= b.y - HANDLE && y <= b.y + b.h + HANDLE) {
        return i;
      }
    }
    return null;
  }

  private hitCorner(x: number, y: number, shape: number): 0 | 1 | null {
    const b = this.model.boxes[shape];
    const corners: Array<[number, number, 0 | 1]> = [
      [b.x, b.y, 0],
      [b.x + b.w, b.y + b.h, 1],
    ];
    for (const [cx, cy, which] of corners) {
      if (Math.abs(x - cx) <= HANDLE && Math.abs(y - cy) <= HANDLE) return which;
    }
    return null;
  }

  private onDown(e: PointerEvent): void {
    const [x, y] = this.toImage(e);
    this.canvas.setPointerCapture(e.pointerId);
    if (this.controller.state.drawMode) {
      this.drag = { kind: 'draw', startX: x, startY: y, curX: x, curY: y };
      return;
    }
    const hit = this.hitShape(x, y);
    if (hit === null) {
      this.controller.selectShape(null);
      return;
    }
    this.controller.selectShape(this.model.boxes[hit].shapeIndex);
    const corner = this.hitCorner(x, y, hit);
    const b = this.model.boxes[hit];
    if (corner !== null) {
      this.drag = {
        kind: 'resize',
        shape: b.shapeIndex,
        corner,
        otherX: corner === 0 ? b.x + b.w : b.x,
        otherY: corner === 0 ? b.y + b.h : b.y,
      };
    } else {
      this.drag = { kind: 'move', shape: b.shapeIndex, lastX: x, lastY: y };
    }
  }

  private onMove(e: PointerEvent): void {
    if (this.drag.kind === 'none') return;
    const [x, y] = this.toImage(e);
    if (this.drag.kind === 'draw') {
      this.drag.curX = x;
      this.drag.curY = y;
      this.paint();
      return;
    }
    const frame = this.controller.state.frame;
    if (!frame) return;
    if (this.drag.kind === 'move') {
      const dx = x - this.drag.lastX;
      const dy = y - this.drag.lastY;
      this.drag.lastX = x;
      this.drag.lastY = y;
      const shape = frame.shapes[this.drag.shape];
      shape.points = shape.points.map(([px, py]) => [px + dx, py + dy]);
    } else {
      const shape = frame.shapes[this.drag.shape];
      shape.points = [
        [Math.min(x, this.drag.otherX), Math.min(y, this.drag.otherY)],
        [Math.max(x, this.drag.otherX), Math.max(y, this.drag.otherY)],
      ];
    }
    this.paintLive(frame.shapes[this.drag.shape].points);
  }

  private async onUp(e: PointerEvent): Promise<void> {
    const drag = this.drag;
    this.drag = { kind: 'none' };
    if (drag.kind === 'none') return;
    const [x, y] = this.toImage(e);
    if (drag.kind === 'draw') {
      const x1 = Math.min(drag.startX, x);
      const y1 = Math.min(drag.startY, y);
      const x2 = Math.max(drag.startX, x);
      const y2 = Math.max(drag.startY, y);
      this.controller.setDrawMode(false);
      if (x2 - x1 >= 2 && y2 - y1 >= 2) {
        const { label, trackId } = this.drawDefaults();
        await this.controller.createShape(label, trackId, [[x1, y1], [x2, y2]]);
      }
      return;
    }
    const frame = this.controller.state.frame;
    if (!frame) return;
    await this.controller.moveShape(drag.shape, frame.shapes[drag.shape].points);
  }

  private paintLive(points: number[][]): void {
    this.paint();
    const [[x1, y1], [x2, y2]] = points;
    this.ctx.save();
    this.ctx.strokeStyle = '#ffffff';
    this.ctx.setLineDash([4, 3]);
    this.ctx.strokeRect(x1, y1, x2 - x1, y2 - y1);
    this.ctx.restore();
  }

  private paint(): void {
    const { ctx, canvas } = this;
    ctx.clearRect(0, 0, canvas.width, canvas.height);
    if (this.image) ctx.drawImage(this.image, 0, 0, canvas.width, canvas.height);
    for (const box of this.model.boxes) {
      ctx.save();
      ctx.lineWidth = box.highlighted ? 3 : 2;
      ctx.strokeStyle = box.hex;
      if (box.dashed) ctx.setLineDash([6, 4]);
      ctx.strokeRect(box.x, box.y, box.w, box.h);
      if (box.highlighted) {
        ctx.fillStyle = box.hex + '33';
        ctx.fillRect(box.x, box.y, box.w, box.h);
        ctx.fillStyle = box.hex;
        ctx.fillRect(box.x - HANDLE / 2, box.y - HANDLE / 2, HANDLE, HANDLE);
        ctx.fillRect(box.x + box.w - HANDLE / 2, box.y + box.h - HANDLE / 2,
                     HANDLE, HANDLE);
      }
      ctx.font = '12px sans-serif';
      ctx.fillStyle = box.hex;
      const tag = `${box.label}-${box.trackId === null ? 'null' : box.trackId}`;
      ctx.fillText(tag, box.x + 2, Math.max(box.y - 4, 10));
      ctx.restore();
    }
    if (this.drag.kind === 'draw') {
      ctx.save();
      ctx.strokeStyle = '#ffffff';
      ctx.setLineDash([4, 3]);
      ctx.strokeRect(
        Math.min(this.drag.startX, this.drag.curX),
        Math.min(this.drag.startY, this.drag.curY),
        Math.abs(this.drag.curX - this.drag.startX),
        Math.abs(this.drag.curY - this.drag.startY),
      );
      ctx.restore();
    }
  }
}
