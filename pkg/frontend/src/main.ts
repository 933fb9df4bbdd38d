// Bootstrap: wire the controller to the DOM views and open the project.

import { HttpApiClient } from './api';
import { CanvasView } from './canvas';
import { AnnotationController } from './controller';
import {
  wireAssociationDialog,
  wireInterpolationDialog,
  wireModificationDialog,
} from './dialogs';
import { bindKeyboard } from './keyboard';
import { bindNotices } from './notices';
import { NavigationPanel, ShapePanels } from './panels';
import { buildRenderModel, ColorCache } from './render';

function byId<T extends HTMLElement>(id: string): T {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing element #${id}`);
  return el as T;
}

async function boot(): Promise<void> {
  const api = new HttpApiClient('');
  const controller = new AnnotationController(api);
  const colors = new ColorCache(api);

  const drawLabelInput = byId<HTMLInputElement>('draw-label');
  const drawIdInput = byId<HTMLInputElement>('draw-id');
  const canvas = new CanvasView(
    byId<HTMLCanvasElement>('frame-canvas'),
    controller,
    () => ({
      label: drawLabelInput.value.trim() || 'object',
      trackId: drawIdInput.value.trim() === ''
        ? null
        : Number.parseInt(drawIdInput.value, 10),
    }),
  );

  new NavigationPanel({
    position: byId('nav-position'),
    status: byId('nav-status'),
    prev: byId<HTMLButtonElement>('nav-prev'),
    next: byId<HTMLButtonElement>('nav-next'),
    finish: byId<HTMLButtonElement>('nav-finish'),
    cancel: byId<HTMLButtonElement>('nav-cancel'),
  }, controller);

  const panels = new ShapePanels(byId('label-list'), byId('id-list'), controller);
  bindNotices(byId('notices'), controller);
  bindKeyboard(controller);

  for (const [buttonId, dialogId, wire] of [
    ['menu-interpolate', 'dialog-interpolate', wireInterpolationDialog],
    ['menu-associate', 'dialog-associate', wireAssociationDialog],
    ['menu-modify', 'dialog-modify', wireModificationDialog],
  ] as const) {
    const dialog = byId<HTMLDialogElement>(dialogId);
    wire(dialog, controller);
    byId<HTMLButtonElement>(buttonId).addEventListener('click', () =>
      dialog.showModal());
  }

  let lastImageIndex = -1;
  controller.subscribe((state) => {
    if (!state.frame) return;
    if (state.frameIndex !== lastImageIndex) {
      lastImageIndex = state.frameIndex;
      canvas.setImage(api.imageUrl(state.frameIndex),
                      state.frame.imageWidth, state.frame.imageHeight);
    }
    void buildRenderModel(state.frame, state.selectedShape, colors).then((model) => {
      canvas.setModel(model);
      panels.update(model);
    });
    document.body.classList.toggle('draw-mode', state.drawMode);
  });

  await controller.open();
}

void boot();
