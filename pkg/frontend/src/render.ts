/**
 * Pure view rendering: ViewState in, HTML string out.
 *
 * Kept free of DOM APIs so the renderer is testable under node; main.ts
 * injects the markup and wires the event handlers.
 */

import type { ArtrNodeJson, AttrValue, ViewState } from "./types.js";
import type { ApiError } from "./client.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function formatAttr(value: AttrValue): string {
  if (Array.isArray(value)) return `{${value.join(", ")}}`;
  return String(value);
}

/** Compact badge list for the attributes annotators care about most. */
export function renderBadges(node: ArtrNodeJson): string {
  const order = ["rre", "happy", "cue", "punctuation"];
  const badges: string[] = [];
  for (const name of order) {
    const value = node.attributes[name];
    if (value === undefined || value === null) continue;
    if (Array.isArray(value) && value.length === 0) continue;
    badges.push(
      `<span class="badge badge-${name}">${escapeHtml(name)}=${escapeHtml(
        formatAttr(value),
      )}</span>`,
    );
  }
  return badges.join(" ");
}

/**
 * Collapsible tree, children left-to-right so the layout matches the
 * bottom-up diagrams annotators compare against.
 */
export function renderTree(node: ArtrNodeJson): string {
  const role = node.role ? `<span class="role">${node.role}</span> ` : "";
  const label = `${role}<span class="dre">${escapeHtml(node.dre)}</span> ${renderBadges(node)}`;
  if (node.children.length === 0) {
    return `<li class="leaf">${label} <span class="edus">[${node.edu_ids.join(",")}]</span></li>`;
  }
  const children = node.children.map(renderTree).join("");
  return `<li><details open><summary>${label}</summary><ul>${children}</ul></details></li>`;
}

function renderButton(
  action: string,
  legal: boolean,
  hint: string | null,
): string {
  const disabled = legal ? "" : " disabled";
  const hinted = hint === action ? ' data-hint="true"' : "";
  return `<button id="act-${action}" class="action"${disabled}${hinted}>${action}</button>`;
}

export function renderState(
  view: ViewState | null,
  error: ApiError | null = null,
  formProblems: string[] = [],
): string {
  if (view === null) {
    return '<p class="empty">No session open.</p>';
  }
  const parts: string[] = [];
  parts.push(
    `<header><h2>${escapeHtml(view.text_id)}</h2>` +
      `<span class="status status-${view.status.toLowerCase()}">${view.status}</span></header>`,
  );
  if (error !== null) {
    parts.push(
      `<div class="error"><code>${escapeHtml(error.code)}</code> ${escapeHtml(error.message)}</div>`,
    );
  }
  if (formProblems.length > 0) {
    parts.push(
      `<div class="form-errors">${formProblems.map(escapeHtml).join("<br>")}</div>`,
    );
  }
  parts.push('<section class="clauses"><h3>Clauses</h3><ol>');
  for (const edu of view.edus) {
    parts.push(`<li value="${edu.id}">${escapeHtml(edu.text)}</li>`);
  }
  parts.push("</ol></section>");

  parts.push('<section class="stack"><h3>Stack</h3><ul class="tree">');
  for (const node of view.stack) {
    parts.push(renderTree(node));
  }
  parts.push("</ul></section>");

  parts.push('<section class="lookahead"><h3>Lookahead</h3>');
  if (view.lookahead !== null) {
    parts.push(`<ul class="tree">${renderTree(view.lookahead)}</ul>`);
    parts.push(`<p>${view.input_remaining} basic tree(s) remaining</p>`);
  } else {
    parts.push('<p class="empty">input exhausted</p>');
  }
  parts.push("</section>");

  const canAct = view.status === "OPEN";
  parts.push('<section class="actions">');
  parts.push(renderButton("shift", canAct && view.legal_actions.includes("shift"), view.hint));
  parts.push(renderButton("reduce", canAct && view.legal_actions.includes("reduce"), view.hint));
  parts.push(`<button id="act-undo" class="action"${canAct && view.events.length > 0 ? "" : " disabled"}>undo</button>`);
  parts.push(`<button id="act-finalize" class="action"${canAct ? "" : " disabled"}>finalize</button>`);
  parts.push(`<button id="act-export" class="action"${view.status === "FINALIZED" ? "" : " disabled"}>export log</button>`);
  if (view.hint !== null) {
    parts.push(`<p class="hint">suggestion: ${escapeHtml(view.hint)}</p>`);
  }
  parts.push("</section>");

  parts.push('<section class="history"><h3>Decisions</h3><ol>');
  for (const event of view.events) {
    const context = `(${event.left_dre}, ${event.middle_dre}, ${event.lookahead_dre})`;
    const what =
      event.kind === "REDUCE"
        ? `reduce to ${String(event.head)} [${String(event.rre_label)}]`
        : "shift";
    parts.push(`<li>${escapeHtml(what)} at ${escapeHtml(context)}</li>`);
  }
  parts.push("</ol></section>");
  return parts.join("\n");
}
