// Text interchange format carrying per-record embedding vectors:
//   header  "dim=<D> mode=<POOLED|SEQUENCE>[ len=<L>]"
//   lines   "<key> <C|R> <f1> <f2> ..."
// POOLED lines carry D floats, SEQUENCE lines carry D*L floats.

export type Mode = 'POOLED' | 'SEQUENCE';

export interface VectorPair {
  key: string;
  context: number[];
  response: number[];
}

export function meanPool(tokenVecs: number[][], dim: number): number[] {
  if (tokenVecs.length === 0) {
    return new Array(dim).fill(0);
  }
  const out = new Array(dim).fill(0);
  for (const vec of tokenVecs) {
    for (let i = 0; i < dim; i++) {
      out[i] += vec[i];
    }
  }
  for (let i = 0; i < dim; i++) {
    out[i] /= tokenVecs.length;
  }
  return out;
}

// Keep the first seqLen token vectors, zero-pad on the right, and flatten
// row-major. Reports whether the tail was cut so callers can count warnings.
export function padFlatten(
  tokenVecs: number[][],
  dim: number,
  seqLen: number,
): { flat: number[]; truncated: boolean } {
  const truncated = tokenVecs.length > seqLen;
  const flat = new Array(dim * seqLen).fill(0);
  const keep = Math.min(tokenVecs.length, seqLen);
  for (let t = 0; t < keep; t++) {
    for (let i = 0; i < dim; i++) {
      flat[t * dim + i] = tokenVecs[t][i];
    }
  }
  return { flat, truncated };
}

export function formatInterchange(
  dim: number,
  mode: Mode,
  seqLen: number | undefined,
  pairs: VectorPair[],
): string {
  let header = `dim=${dim} mode=${mode}`;
  let width = dim;
  if (mode === 'SEQUENCE') {
    if (seqLen === undefined || !Number.isInteger(seqLen) || seqLen < 1) {
      throw new Error('SEQUENCE mode needs a positive integer seq len');
    }
    header += ` len=${seqLen}`;
    width = dim * seqLen;
  }
  const lines = [header];
  for (const pair of pairs) {
    if (pair.context.length !== width || pair.response.length !== width) {
      throw new Error(
        `record ${pair.key}: expected ${width} floats, got ` +
        `C=${pair.context.length} R=${pair.response.length}`,
      );
    }
    lines.push(`${pair.key} C ${pair.context.join(' ')}`);
    lines.push(`${pair.key} R ${pair.response.join(' ')}`);
  }
  return lines.join('\n') + '\n';
}
