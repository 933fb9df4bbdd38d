// Right-hand panels: navigation (current/total, status, Finish) and the
// label / ID lists with selection highlighting.

import type { AnnotationController } from './controller';
import type { RenderModel } from './render';

export class NavigationPanel {
  constructor(
    private readonly el: {
      position: HTMLElement;
      status: HTMLElement;
      prev: HTMLButtonElement;
      next: HTMLButtonElement;
      finish: HTMLButtonElement;
      cancel: HTMLButtonElement;
    },
    controller: AnnotationController,
  ) {
    this.el.prev.addEventListener('click', () => void controller.prev());
    this.el.next.addEventListener('click', () => void controller.next());
    this.el.finish.addEventListener('click', () => void controller.finishSession());
    this.el.cancel.addEventListener('click', () => void controller.cancelSession());
    controller.subscribe(() => this.update(controller));
    this.update(controller);
  }

  private update(controller: AnnotationController): void {
    const nav = controller.navigation;
    if (!nav) return;
    this.el.position.textContent =
      `${controller.state.frameIndex + 1} / ${nav.total_frames}`;
    this.el.status.textContent = nav.editing_status.replace(/_/g, ' ');
    const inSession = controller.session !== null;
    this.el.finish.hidden = !inSession;
    this.el.cancel.hidden = !inSession;
    this.el.finish.disabled = !controller.canFinish;
  }
}

export class ShapePanels {
  constructor(
    private readonly labelList: HTMLElement,
    private readonly idList: HTMLElement,
    private readonly controller: AnnotationController,
  ) {}

  update(model: RenderModel): void {
    this.fill(this.labelList, model.labelPanel);
    this.fill(this.idList, model.idPanel);
  }

  private fill(
    list: HTMLElement,
    entries: { shapeIndex: number; text: string; hex: string; highlighted: boolean }[],
  ): void {
    list.replaceChildren();
    for (const entry of entries) {
      const li = document.createElement('li');
      li.classList.toggle('highlighted', entry.highlighted);
      const chip = document.createElement('span');
      chip.className = 'chip';
      chip.style.background = entry.hex;
      li.append(chip, document.createTextNode(entry.text));
      li.addEventListener('click', () => this.controller.selectShape(entry.shapeIndex));
      list.append(li);
    }
  }
}
