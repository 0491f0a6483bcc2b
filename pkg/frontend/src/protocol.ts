/**
 * Wire protocol helpers and offset conversion.
 *
 * Requests and responses are one JSON object per line (UTF-8). Pattern and
 * input travel base64-encoded so newline-bearing values stay line-safe.
 * Spans are unit offsets in Unicode scalar values: JavaScript strings are
 * UTF-16, so every index reported by RegExp must be converted.
 */

export interface MatchRequest {
  id: number;
  op: string;
  pattern_b64: string;
  input_b64: string;
  timeout_ms: number;
}

export type Span = [number, number] | null;

export interface MatchResponse {
  id: number;
  status: "ok" | "syntax_error" | "timeout" | "error";
  matched: boolean;
  span: Span;
  captures: Span[];
  elapsed_us: number;
}

export function decodeB64(value: string): string {
  return Buffer.from(value, "base64").toString("utf-8");
}

export function encodeB64(value: string): string {
  return Buffer.from(value, "utf-8").toString("base64");
}

/** Map from UTF-16 code-unit index to Unicode scalar-value index. */
export function scalarIndexTable(text: string): number[] {
  const table = new Array<number>(text.length + 1);
  let scalar = 0;
  let unit = 0;
  for (const ch of text) {
    table[unit] = scalar;
    if (ch.length === 2) {
      table[unit + 1] = scalar; // inside a surrogate pair
    }
    unit += ch.length;
    scalar += 1;
  }
  table[text.length] = scalar;
  return table;
}

/** The fixed response field order keeps output byte-stable. */
export function formatResponse(response: MatchResponse): string {
  return JSON.stringify({
    id: response.id,
    status: response.status,
    matched: response.matched,
    span: response.span,
    captures: response.captures,
    elapsed_us: response.elapsed_us,
  });
}

export interface MatchOutcome {
  matched: boolean;
  span: Span;
  captures: Span[];
}

/**
 * One partial match with default flags. The hasIndices flag is added only
 * to read group offsets; it does not change matching behavior.
 */
export function partialMatch(pattern: string, input: string): MatchOutcome {
  const regex = new RegExp(pattern, "d");
  const m = regex.exec(input);
  if (m === null || m.index === undefined) {
    return { matched: false, span: null, captures: [] };
  }
  const table = scalarIndexTable(input);
  const indices = (m as RegExpExecArray & { indices?: ([number, number] | undefined)[] }).indices;
  const span: Span = [table[m.index], table[m.index + m[0].length]];
  const captures: Span[] = [];
  for (let g = 1; g < m.length; g += 1) {
    const got = indices === undefined ? undefined : indices[g];
    if (got === undefined || got === null) {
      captures.push(null);
    } else {
      captures.push([table[got[0]], table[got[1]]]);
    }
  }
  return { matched: true, span, captures };
}
