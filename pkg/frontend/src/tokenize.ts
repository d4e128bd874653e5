// Client-side tokenizer matching the server's entity-containment
// semantics: NFC + lowercase, maximal letter/digit runs with internal
// hyphens/apostrophes kept, all other punctuation splitting. Used to
// highlight the selected entity inside example texts, so the visual
// highlight agrees with the counting the server did.

export interface Token {
  surface: string;
  start: number; // char offsets into the normalized text
  end: number;
}

const TOKEN_RE = /[\p{L}\p{N}]+(?:['-][\p{L}\p{N}]+)*/gu;

export function normalizeText(text: string): string {
  return text.normalize("NFC");
}

export function tokenize(text: string): Token[] {
  const lowered = normalizeText(text).toLowerCase();
  const tokens: Token[] = [];
  for (const match of lowered.matchAll(TOKEN_RE)) {
    tokens.push({
      surface: match[0],
      start: match.index ?? 0,
      end: (match.index ?? 0) + match[0].length,
    });
  }
  return tokens;
}

export function containsEntity(tokens: Token[], surface: string[]): boolean {
  return matchSpans(tokens, surface).length > 0;
}

/** Char spans [start, end) of every contiguous token-sequence match. */
export function matchSpans(tokens: Token[], surface: string[]): Array<[number, number]> {
  if (surface.length === 0) return [];
  const spans: Array<[number, number]> = [];
  for (let i = 0; i + surface.length <= tokens.length; i++) {
    let hit = true;
    for (let j = 0; j < surface.length; j++) {
      if (tokens[i + j].surface !== surface[j]) {
        hit = false;
        break;
      }
    }
    if (hit) spans.push([tokens[i].start, tokens[i + surface.length - 1].end]);
  }
  return spans;
}

/**
 * Render text with <mark> around entity matches. Falls back to plain
 * text when lowercasing changed string length (rare unicode edge).
 */
export function highlight(text: string, surface: string[], doc: Document): DocumentFragment {
  const fragment = doc.createDocumentFragment();
  const normalized = normalizeText(text);
  const lowered = normalized.toLowerCase();
  const spans = lowered.length === normalized.length
    ? matchSpans(tokenize(text), surface)
    : [];
  let cursor = 0;
  for (const [start, end] of spans) {
    if (start > cursor) fragment.appendChild(doc.createTextNode(normalized.slice(cursor, start)));
    const mark = doc.createElement("mark");
    mark.textContent = normalized.slice(start, end);
    fragment.appendChild(mark);
    cursor = end;
  }
  if (cursor < normalized.length) {
    fragment.appendChild(doc.createTextNode(normalized.slice(cursor)));
  }
  return fragment;
}
