// Track-menu dialogs: interpolation, association, modification. Each reads
// its form fields and hands a typed request to the controller.

import type { AnnotationController } from './controller';

function intOrNull(value: string): number | null {
  const s = value.trim();
  return s === '' ? null : Number.parseInt(s, 10);
}

function strOrNull(value: string): string | null {
  const s = value.trim();
  return s === '' ? null : s;
}

export function wireInterpolationDialog(
  dialog: HTMLDialogElement, controller: AnnotationController,
): void {
  const form = dialog.querySelector('form')!;
  form.addEventListener('submit', (e) => {
    e.preventDefault();
    const data = new FormData(form);
    void controller.startSession({
      start_frame: Number(data.get('start')),
      end_frame: Number(data.get('end')),
      interval: Number(data.get('interval')),
      label: String(data.get('label') ?? ''),
      track_id: intOrNull(String(data.get('id') ?? '')), // blank means null ID
    });
    dialog.close();
  });
}

export function wireAssociationDialog(
  dialog: HTMLDialogElement, controller: AnnotationController,
): void {
  const form = dialog.querySelector('form')!;
  form.addEventListener('submit', (e) => {
    e.preventDefault();
    const data = new FormData(form);
    void controller.runAssociation({
      mode: data.get('mode') === 'current' ? 'current' : 'scratch',
      frame: controller.state.frameIndex,
      end_frame: intOrNull(String(data.get('end') ?? '')),
      method: String(data.get('method') ?? 'sort'),
    });
    dialog.close();
  });
}

export function wireModificationDialog(
  dialog: HTMLDialogElement, controller: AnnotationController,
): void {
  const form = dialog.querySelector('form')!;
  form.addEventListener('submit', (e) => {
    e.preventDefault();
    const data = new FormData(form);
    const mode = String(data.get('mode')) as 'remove-all' | 'swap-id' | 'swap-label';
    void controller.runModification({
      start_frame: Number(data.get('start')),
      end_frame: Number(data.get('end')),
      mode,
      target_label: strOrNull(String(data.get('label') ?? '')),
      target_id: intOrNull(String(data.get('id') ?? '')),
      new_label: strOrNull(String(data.get('newLabel') ?? '')),
      new_id: intOrNull(String(data.get('newId') ?? '')),
    });
    dialog.close();
  });
}
