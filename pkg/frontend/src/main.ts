// Wiring: file loading, tab/slice/element clicks, severity filter.

import {
  BundleFormatError,
  clearSelection,
  loadBundle,
  selectElement,
  selectSlice,
  setSeverityFilter,
  switchView,
  type ViewNumber,
  type ViewerState,
} from './state.js';
import { buildView1, buildView2, buildView3, guidance, sliceList } from './viewmodel.js';
import {
  renderSliceList,
  renderView1,
  renderView2,
  renderView3,
  scrollFirstHighlightIntoView,
} from './render.js';
import { SEVERITIES, type Severity } from './types.js';

let state: ViewerState | null = null;

const $ = (id: string): HTMLElement => {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node;
};

function showError(message: string | null): void {
  const banner = $('error-banner');
  banner.textContent = message ?? '';
  banner.style.display = message ? 'block' : 'none';
}

function render(): void {
  const app = $('app');
  if (state === null) {
    app.style.display = 'none';
    return;
  }
  app.style.display = 'grid';
  $('app-name').textContent = state.bundle.app;

  renderSliceList($('slice-list'), sliceList(state));
  const note = guidance(state);
  const guide = $('guidance');
  guide.textContent = note ?? '';
  guide.style.display = note ? 'block' : 'none';

  for (const n of [1, 2, 3] as const) {
    $(`tab-${n}`).classList.toggle('active', state.view === n);
    $(`view-${n}`).style.display = state.view === n ? 'block' : 'none';
  }
  renderView1($('view-1'), buildView1(state));
  renderView2($('view-2'), buildView2(state));
  renderView3($('view-3'), buildView3(state));
  scrollFirstHighlightIntoView($(`view-${state.view}`));
}

function openText(text: string): void {
  try {
    state = loadBundle(JSON.parse(text));
    showError(null);
  } catch (err) {
    state = null;
    if (err instanceof BundleFormatError) {
      showError(`Not a usable bundle: ${err.message}`);
    } else if (err instanceof SyntaxError) {
      showError(`Not JSON: ${err.message}`);
    } else {
      throw err;
    }
  }
  render();
}

function setup(): void {
  const input = $('bundle-file') as HTMLInputElement;
  input.addEventListener('change', () => {
    const file = input.files?.[0];
    if (!file) return;
    const reader = new FileReader();
    reader.onload = () => openText(String(reader.result));
    reader.readAsText(file);
  });

  for (const n of [1, 2, 3] as const) {
    $(`tab-${n}`).addEventListener('click', () => {
      if (state) {
        state = switchView(state, n as ViewNumber);
        render();
      }
    });
  }

  $('slice-list').addEventListener('click', (event) => {
    const item = (event.target as HTMLElement).closest<HTMLElement>('[data-slice-id]');
    if (item && state) {
      state = selectSlice(state, item.dataset.sliceId!);
      render();
    }
  });

  for (const n of [1, 2, 3] as const) {
    $(`view-${n}`).addEventListener('click', (event) => {
      const target = (event.target as HTMLElement).closest<HTMLElement>('[data-element-id]');
      if (!state) return;
      if (target) {
        state = selectElement(state, target.dataset.elementId!);
      } else {
        state = clearSelection(state);
      }
      render();
    });
  }

  const filters = $('severity-filters');
  for (const severity of SEVERITIES) {
    const label = document.createElement('label');
    const box = document.createElement('input');
    box.type = 'checkbox';
    box.checked = true;
    box.dataset.severity = severity;
    label.append(box, document.createTextNode(severity));
    filters.append(label);
  }
  filters.addEventListener('change', () => {
    if (!state) return;
    const picked = Array.from(
      filters.querySelectorAll<HTMLInputElement>('input:checked'),
    ).map((box) => box.dataset.severity as Severity);
    state = setSeverityFilter(state, picked);
    render();
  });
}

document.addEventListener('DOMContentLoaded', setup);
