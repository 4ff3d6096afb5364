import { mkdtempSync, readFileSync, writeFileSync } from 'node:fs';
import { tmpdir } from 'node:os';
import { join } from 'node:path';
import { afterEach, describe, expect, it, vi } from 'vitest';
import { run } from '../src/cli.js';

function prepFile(dir: string, rows: object[]): string {
  const path = join(dir, 'prep.jsonl');
  writeFileSync(path, rows.map((r) => JSON.stringify(r)).join('\n') + '\n');
  return path;
}

const ROWS = [
  { key: 's1', response_tokens: ['love', 'monday'], context_tokens: [['rain']] },
  { key: 's2', response_tokens: ['fantast'], context_tokens: [['bus', 'late'], ['again']] },
  { key: 's3', response_tokens: [], context_tokens: [] },
];

afterEach(() => {
  vi.restoreAllMocks();
});

describe('run', () => {
  it('writes a pooled interchange file the header describes', async () => {
    vi.spyOn(console, 'error').mockImplementation(() => {});
    const dir = mkdtempSync(join(tmpdir(), 'bx-'));
    const input = prepFile(dir, ROWS);
    const output = join(dir, 'vectors.txt');
    expect(await run(['--input', input, '--output', output, '--mode', 'pooled'])).toBe(0);

    const lines = readFileSync(output, 'utf8').trimEnd().split('\n');
    expect(lines[0]).toBe('dim=768 mode=POOLED');
    expect(lines.length).toBe(1 + 2 * ROWS.length);
    const seen = new Map<string, string[]>();
    for (const line of lines.slice(1)) {
      const [key, which, ...comps] = line.split(' ');
      expect(comps.length).toBe(768);
      for (const comp of comps) {
        expect(Number.isFinite(Number(comp))).toBe(true);
      }
      seen.set(key, [...(seen.get(key) ?? []), which]);
    }
    expect([...seen.keys()].sort()).toEqual(['s1', 's2', 's3']);
    for (const fields of seen.values()) {
      expect(fields.sort()).toEqual(['C', 'R']);
    }
  });

  it('is byte-identical across runs', async () => {
    vi.spyOn(console, 'error').mockImplementation(() => {});
    const dir = mkdtempSync(join(tmpdir(), 'bx-'));
    const input = prepFile(dir, ROWS);
    const out1 = join(dir, 'v1.txt');
    const out2 = join(dir, 'v2.txt');
    await run(['--input', input, '--output', out1]);
    await run(['--input', input, '--output', out2]);
    expect(readFileSync(out1, 'utf8')).toBe(readFileSync(out2, 'utf8'));
  });

  it('widens sequence lines to dim times seq-len', async () => {
    vi.spyOn(console, 'error').mockImplementation(() => {});
    const dir = mkdtempSync(join(tmpdir(), 'bx-'));
    const input = prepFile(dir, ROWS.slice(0, 1));
    const output = join(dir, 'vectors.txt');
    const rc = await run([
      '--input', input, '--output', output, '--mode', 'sequence', '--seq-len', '4',
    ]);
    expect(rc).toBe(0);
    const lines = readFileSync(output, 'utf8').trimEnd().split('\n');
    expect(lines[0]).toBe('dim=768 mode=SEQUENCE len=4');
    expect(lines[1].split(' ').length).toBe(2 + 768 * 4);
  });

  it('warns once per over-long field in sequence mode', async () => {
    const spy = vi.spyOn(console, 'error').mockImplementation(() => {});
    const dir = mkdtempSync(join(tmpdir(), 'bx-'));
    const input = prepFile(dir, [
      { key: 'k', response_tokens: ['a', 'b', 'c'], context_tokens: [] },
    ]);
    const output = join(dir, 'vectors.txt');
    await run(['--input', input, '--output', output, '--mode', 'sequence', '--seq-len', '2']);
    const warnings = spy.mock.calls.filter(([msg]) => /truncated 1/.test(String(msg)));
    expect(warnings.length).toBe(1);
  });

  it('writes a header-only file for an empty dataset', async () => {
    vi.spyOn(console, 'error').mockImplementation(() => {});
    const dir = mkdtempSync(join(tmpdir(), 'bx-'));
    const input = join(dir, 'empty.jsonl');
    writeFileSync(input, '');
    const output = join(dir, 'vectors.txt');
    expect(await run(['--input', input, '--output', output])).toBe(0);
    expect(readFileSync(output, 'utf8')).toBe('dim=768 mode=POOLED\n');
  });

  it('rejects --seq-len outside sequence mode', async () => {
    vi.spyOn(console, 'error').mockImplementation(() => {});
    const rc = await run(['--input', 'x', '--output', 'y', '--seq-len', '4']);
    expect(rc).toBe(2);
  });

  it('rejects missing required flags', async () => {
    vi.spyOn(console, 'error').mockImplementation(() => {});
    expect(await run(['--input', 'only.jsonl'])).toBe(2);
  });

  it('rejects unknown flags', async () => {
    vi.spyOn(console, 'error').mockImplementation(() => {});
    expect(await run(['--input', 'a', '--output', 'b', '--banana', 'yes'])).toBe(2);
  });

  it('rejects sequence mode without --seq-len', async () => {
    vi.spyOn(console, 'error').mockImplementation(() => {});
    const rc = await run(['--input', 'x', '--output', 'y', '--mode', 'sequence']);
    expect(rc).toBe(2);
  });
});
