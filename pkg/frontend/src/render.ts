// Thin DOM layer over the view models. Clicks are reported through data-
// attributes handled in main.ts; this module only draws.

import type { View1Model, View2Model, View3Model, SliceListItem } from './viewmodel.js';

const EDGE_COLORS: Record<string, string> = {
  data: '#2563eb',
  control: '#16a34a',
  call: '#6b7280',
  'param-in': '#6b7280',
  'return-out': '#6b7280',
};

const SEVERITY_COLORS: Record<string, string> = {
  PotentialViolation: '#dc2626',
  Adherence: '#16a34a',
  Suggestion: '#ffbf00',
  Note: '#6b7280',
};

function el(tag: string, className?: string, text?: string): HTMLElement {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

export function renderSliceList(container: HTMLElement, items: readonly SliceListItem[]): void {
  container.replaceChildren();
  for (const item of items) {
    const button = el('button', 'slice-item' + (item.active ? ' active' : ''));
    button.dataset.sliceId = item.id;
    button.append(
      el('span', 'slice-pd', item.personalData),
      el('span', 'slice-id', item.id),
      el('span', 'slice-count', `${item.findingCount} finding(s)`),
    );
    container.append(button);
  }
}

const ROW_HEIGHT = 64;
const BOX_LEFT = 150;

export function renderView1(container: HTMLElement, model: View1Model): void {
  container.replaceChildren();
  if (model.nodes.length === 0) {
    container.append(el('p', 'muted', 'This slice has no statements.'));
    return;
  }
  const height = model.nodes.length * ROW_HEIGHT;
  const wrapper = el('div', 'view1-wrapper');
  wrapper.style.height = `${height}px`;

  const svg = document.createElementNS('http://www.w3.org/2000/svg', 'svg');
  svg.setAttribute('class', 'view1-edges');
  svg.setAttribute('width', String(BOX_LEFT));
  svg.setAttribute('height', String(height));

  const rowOf = new Map(model.nodes.map((n, i) => [n.id, i]));
  model.edges.forEach((edge, index) => {
    const fromRow = rowOf.get(edge.from);
    const toRow = rowOf.get(edge.to);
    if (fromRow === undefined || toRow === undefined) return;
    const y1 = fromRow * ROW_HEIGHT + ROW_HEIGHT / 2;
    const y2 = toRow * ROW_HEIGHT + ROW_HEIGHT / 2;
    const bend = 30 + (index % 6) * 18;
    const path = document.createElementNS('http://www.w3.org/2000/svg', 'path');
    path.setAttribute(
      'd',
      `M ${BOX_LEFT} ${y1} C ${BOX_LEFT - bend} ${y1}, ${BOX_LEFT - bend} ${y2}, ${BOX_LEFT - 6} ${y2}`,
    );
    path.setAttribute('fill', 'none');
    path.setAttribute('stroke', EDGE_COLORS[edge.kind] ?? '#6b7280');
    path.setAttribute('stroke-width', '1.6');
    if (edge.kind !== 'data' && edge.kind !== 'control') path.setAttribute('stroke-dasharray', '5,3');
    path.setAttribute('marker-end', 'url(#arrow)');
    const title = document.createElementNS('http://www.w3.org/2000/svg', 'title');
    title.textContent = edge.provenance ? `${edge.kind} (${edge.provenance})` : edge.kind;
    path.append(title);
    svg.append(path);
  });
  const defs = document.createElementNS('http://www.w3.org/2000/svg', 'defs');
  defs.innerHTML =
    '<marker id="arrow" viewBox="0 0 8 8" refX="7" refY="4" markerWidth="6" markerHeight="6" orient="auto">' +
    '<path d="M 0 0 L 8 4 L 0 8 z" fill="#6b7280"/></marker>';
  svg.prepend(defs);
  wrapper.append(svg);

  model.nodes.forEach((node, i) => {
    const box = el(
      'div',
      'stmt-node' +
        (node.isSource ? ' source' : '') +
        (node.highlighted ? ' highlighted' : '') +
        (node.selected ? ' selected' : ''),
    );
    box.dataset.elementId = node.id;
    box.style.top = `${i * ROW_HEIGHT + 6}px`;
    box.style.left = `${BOX_LEFT}px`;
    box.append(el('div', 'stmt-label', node.label), el('code', 'stmt-text', node.stmt));
    if (node.tags.length > 0) {
      const tags = el('div', 'stmt-tags');
      for (const tag of node.tags) tags.append(el('span', 'tag', tag));
      box.append(tags);
    }
    wrapper.append(box);
  });
  container.append(wrapper);
}

export function renderView2(container: HTMLElement, model: View2Model): void {
  container.replaceChildren();
  if (!model.processId) {
    container.append(el('p', 'muted', 'No slice selected.'));
    return;
  }
  const star = el('div', 'view2-star');
  star.append(el('div', 'process-node', `ex:${model.processId} a dpv:Process`));
  for (const row of model.rows) {
    const rowEl = el('div', 'predicate-row');
    rowEl.append(el('span', 'predicate-name', `dpv:${row.predicate}`));
    const chips = el('div', 'chips');
    for (const element of row.elements) {
      const chip = el(
        'button',
        'chip' + (element.highlighted ? ' highlighted' : '') + (element.selected ? ' selected' : ''),
        element.order !== null ? `${element.label} (${element.order})` : element.label,
      );
      chip.dataset.elementId = element.key;
      chips.append(chip);
    }
    rowEl.append(chips);
    star.append(rowEl);
  }
  container.append(star);
  const turtle = el('details', 'turtle-details');
  turtle.append(el('summary', '', 'Turtle'));
  const pre = el('pre', 'turtle-text', model.turtle);
  turtle.append(pre);
  container.append(turtle);
}

export function renderView3(container: HTMLElement, model: View3Model): void {
  container.replaceChildren();
  if (!model.processId) {
    container.append(el('p', 'muted', 'No slice selected.'));
    return;
  }
  const card = el('div', 'summary-card');
  card.append(el('h3', '', model.processId));
  const facts = el('dl', 'facts');
  const fact = (k: string, v: string) => {
    facts.append(el('dt', '', k), el('dd', '', v));
  };
  fact('Personal data', model.personalData);
  fact('Data source', model.dataSource);
  fact('Processing', model.processing.join(' → '));
  if (model.measures.length > 0) fact('Technical measures', model.measures.join(', '));
  if (model.purpose) fact('Purpose', model.purpose);
  card.append(facts);
  container.append(card);

  const badges = el('div', 'badges');
  for (const badge of model.badges) {
    const badgeEl = el(
      'button',
      'badge' + (badge.highlighted ? ' highlighted' : '') + (badge.selected ? ' selected' : ''),
    );
    badgeEl.dataset.elementId = badge.id;
    badgeEl.style.borderLeftColor = SEVERITY_COLORS[badge.severity] ?? '#6b7280';
    badgeEl.append(
      el('span', 'badge-severity', badge.severity),
      el('span', 'badge-article', badge.article),
      el('span', 'badge-message', badge.message),
    );
    badges.append(badgeEl);
  }
  if (model.badges.length === 0) {
    badges.append(el('p', 'muted', 'No findings (with the current severity filter).'));
  }
  if (model.hiddenBySeverity > 0) {
    badges.append(el('p', 'muted', `${model.hiddenBySeverity} finding(s) hidden by the filter.`));
  }
  container.append(badges);
}

export function scrollFirstHighlightIntoView(container: HTMLElement): void {
  const target = container.querySelector('.highlighted');
  if (target && typeof (target as HTMLElement).scrollIntoView === 'function') {
    (target as HTMLElement).scrollIntoView({ block: 'nearest', behavior: 'smooth' });
  }
}
