// Dismissible notice stack for API errors and edit summaries.

import type { AnnotationController } from './controller';

export function bindNotices(container: HTMLElement,
                            controller: AnnotationController): void {
  controller.subscribe((state) => {
    container.replaceChildren();
    state.notices.forEach((notice, i) => {
      const div = document.createElement('div');
      div.className = `notice ${notice.kind}`;
      div.textContent = notice.text;
      const close = document.createElement('button');
      close.textContent = '×';
      close.addEventListener('click', () => controller.dismissNotice(i));
      div.append(close);
      container.append(div);
    });
  });
}
