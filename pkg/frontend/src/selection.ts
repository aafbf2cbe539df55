// Selection arithmetic for the pseudocode pane: character offsets in the
// textarea map to 1-based line numbers, and header lines (the first two of
// every canonical rendering) are never zoomable.

import type { LineKind } from "./api.js";

export interface LineSpan {
  start: number;
  end: number;
}

export function selectionToLines(text: string, selStart: number, selEnd: number): LineSpan | null {
  if (selEnd <= selStart) {
    return null;
  }
  const startLine = text.slice(0, selStart).split("\n").length;
  // a selection ending exactly at a line start belongs to the previous line
  let endOffset = selEnd;
  if (text[endOffset - 1] === "\n") {
    endOffset -= 1;
  }
  const endLine = text.slice(0, endOffset).split("\n").length;
  if (endLine < startLine) {
    return null;
  }
  return { start: startLine, end: endLine };
}

export function zoomableSpan(span: LineSpan, lineKinds: LineKind[]): LineSpan | null {
  const kinds = lineKinds.slice(span.start - 1, span.end);
  if (kinds.length === 0) {
    return null;
  }
  const selectable = kinds.some((k) => k !== "goal-header" && k !== "steps-header");
  return selectable ? span : null;
}
