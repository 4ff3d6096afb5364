#!/usr/bin/env node
// Runs an encoder over preprocessed (or raw) context/response records and
// writes their vectors in the interchange format the pipeline loads with
// --precomputed. Usage:
//
//   bert-extract --input prep.jsonl --output vectors.txt --mode pooled
//   bert-extract --input prep.jsonl --output v.txt --mode sequence --seq-len 32
//
// --model names a pretrained checkpoint for transformers.js; the default
// "offline" is a deterministic hash encoder (dim 768, no downloads) meant
// for plumbing tests and air-gapped runs, not for meaningful semantics.

import { writeFileSync } from 'node:fs';
import { parseArgs } from 'node:util';
import { pathToFileURL } from 'node:url';
import { readRecords } from './dataset.js';
import { loadEncoder } from './encoder.js';
import { formatInterchange, meanPool, padFlatten, Mode, VectorPair } from './interchange.js';

const USAGE =
  'usage: bert-extract --input <jsonl> --output <file> ' +
  '[--mode pooled|sequence] [--seq-len N] [--model name|offline]';

export async function run(argv: string[]): Promise<number> {
  let values;
  try {
    ({ values } = parseArgs({
      args: argv,
      strict: true,
      options: {
        input: { type: 'string' },
        output: { type: 'string' },
        mode: { type: 'string', default: 'pooled' },
        'seq-len': { type: 'string' },
        model: { type: 'string', default: 'offline' },
      },
    }));
  } catch (err: any) {
    console.error(`error: ${err.message}`);
    console.error(USAGE);
    return 2;
  }

  try {
    if (!values.input || !values.output) {
      throw new Error(`--input and --output are required\n${USAGE}`);
    }
    if (values.mode !== 'pooled' && values.mode !== 'sequence') {
      throw new Error("--mode must be 'pooled' or 'sequence'");
    }
    const mode: Mode = values.mode === 'pooled' ? 'POOLED' : 'SEQUENCE';
    let seqLen: number | undefined;
    if (mode === 'SEQUENCE') {
      seqLen = Number(values['seq-len']);
      if (!Number.isInteger(seqLen) || seqLen < 1) {
        throw new Error('--mode sequence needs --seq-len, a positive integer');
      }
    } else if (values['seq-len'] !== undefined) {
      throw new Error('--seq-len only applies to --mode sequence');
    }

    const records = readRecords(values.input);
    const encoder = await loadEncoder(values.model as string);
    const pairs: VectorPair[] = [];
    let truncated = 0;
    for (const record of records) {
      const fields: number[][] = [];
      for (const text of [record.contextText, record.responseText]) {
        const tokenVecs = await encoder.encodeTokens(text);
        let cut = false;
        if (tokenVecs.length > encoder.maxTokens) {
          cut = true;
          tokenVecs.length = encoder.maxTokens;
        }
        if (mode === 'POOLED') {
          fields.push(meanPool(tokenVecs, encoder.dim));
        } else {
          const padded = padFlatten(tokenVecs, encoder.dim, seqLen as number);
          cut = cut || padded.truncated;
          fields.push(padded.flat);
        }
        if (cut) {
          truncated += 1;
        }
      }
      pairs.push({ key: record.key, context: fields[0], response: fields[1] });
    }

    writeFileSync(values.output, formatInterchange(encoder.dim, mode, seqLen, pairs));
    if (truncated > 0) {
      console.error(`warning: truncated ${truncated} over-long field(s)`);
    }
    console.error(
      `wrote ${pairs.length} record(s) to ${values.output} ` +
      `(dim=${encoder.dim} mode=${mode} model=${encoder.name})`,
    );
    return 0;
  } catch (err: any) {
    console.error(`error: ${err.message}`);
    return 2;
  }
}

const invokedDirectly =
  process.argv[1] !== undefined &&
  import.meta.url === pathToFileURL(process.argv[1]).href;

if (invokedDirectly) {
  run(process.argv.slice(2)).then((code) => {
    process.exitCode = code;
  });
}
