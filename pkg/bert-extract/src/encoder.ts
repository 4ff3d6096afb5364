import { createHash } from 'node:crypto';

export interface Encoder {
  name: string;
  dim: number;
  maxTokens: number;
  // One vector per token; empty input text yields an empty list.
  encodeTokens(text: string): Promise<number[][]>;
}

const MASK64 = (1n << 64n) - 1n;

function splitmix64(state: bigint): { state: bigint; out: bigint } {
  state = (state + 0x9e3779b97f4a7c15n) & MASK64;
  let z = state;
  z = ((z ^ (z >> 30n)) * 0xbf58476d1ce4e5b9n) & MASK64;
  z = ((z ^ (z >> 27n)) * 0x94d049bb133111ebn) & MASK64;
  z = z ^ (z >> 31n);
  return { state, out: z };
}

// Deterministic token vector: seed a splitmix64 stream from sha256(token)
// and draw dim uniforms in [-1, 1). Same token, same vector, every run and
// every platform; no model download involved.
function hashVector(token: string, dim: number): number[] {
  const digest = createHash('sha256').update(token, 'utf8').digest();
  let state = digest.readBigUInt64BE(0);
  const vec = new Array(dim);
  for (let i = 0; i < dim; i++) {
    const step = splitmix64(state);
    state = step.state;
    vec[i] = (Number(step.out >> 11n) / 2 ** 53) * 2 - 1;
  }
  return vec;
}

export function offlineEncoder(dim = 768): Encoder {
  const cache = new Map<string, number[]>();
  return {
    name: 'offline',
    dim,
    maxTokens: Infinity,
    async encodeTokens(text: string): Promise<number[][]> {
      const tokens = text.split(/\s+/).filter((t) => t.length > 0);
      return tokens.map((tok) => {
        let vec = cache.get(tok);
        if (vec === undefined) {
          vec = hashVector(tok, dim);
          cache.set(tok, vec);
        }
        return vec;
      });
    },
  };
}

// Wraps a pretrained encoder through transformers.js, reading per-token
// vectors from the final hidden layer (the layer choice is this tool's,
// documented rather than configurable). The dependency is optional: the
// specifier is kept in a variable so the compiler treats the import as
// dynamic, and a missing package surfaces as a tool error at load time.
async function pretrainedEncoder(model: string): Promise<Encoder> {
  const specifier = '@huggingface/transformers';
  let mod: any;
  try {
    mod = await import(specifier);
  } catch {
    throw new Error(
      `encoder load failure: ${specifier} is not installed; ` +
      `install it to use model '${model}', or pass --model offline`,
    );
  }
  const extractor = await mod.pipeline('feature-extraction', model);
  const probe = await extractor('dimension probe', { pooling: 'none' });
  const dim = probe.dims[probe.dims.length - 1];
  return {
    name: model,
    dim,
    maxTokens: 512,
    async encodeTokens(text: string): Promise<number[][]> {
      if (text.trim() === '') {
        return [];
      }
      const output = await extractor(text, { pooling: 'none' });
      const hidden = output.dims[output.dims.length - 1];
      const count = output.data.length / hidden;
      const vecs: number[][] = [];
      for (let t = 0; t < count; t++) {
        vecs.push(Array.from(output.data.slice(t * hidden, (t + 1) * hidden)));
      }
      return vecs;
    },
  };
}

export async function loadEncoder(model: string): Promise<Encoder> {
  if (model === 'offline') {
    return offlineEncoder();
  }
  return pretrainedEncoder(model);
}
