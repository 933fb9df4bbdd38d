// Keyboard bindings: arrows move between frames, D arms box drawing,
// Delete removes the selected box. Ignored while typing in dialogs.

import type { AnnotationController } from './controller';

export function bindKeyboard(controller: AnnotationController): void {
  document.addEventListener('keydown', (e) => {
    const target = e.target as HTMLElement | null;
    if (target && ['INPUT', 'TEXTAREA', 'SELECT'].includes(target.tagName)) return;
    switch (e.key) {
      case 'ArrowLeft':
        e.preventDefault();
        void controller.prev();
        break;
      case 'ArrowRight':
        e.preventDefault();
        void controller.next();
        break;
      case 'd':
      case 'D':
        controller.setDrawMode(!controller.state.drawMode);
        break;
      case 'Delete':
      case 'Backspace':
        void controller.deleteSelected();
        break;
    }
  });
}
