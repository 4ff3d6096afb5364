import { describe, expect, it } from 'vitest';
import { formatInterchange, meanPool, padFlatten } from '../src/interchange.js';

describe('meanPool', () => {
  it('averages token vectors elementwise', () => {
    expect(meanPool([[1, 2], [3, 4]], 2)).toEqual([2, 3]);
  });

  it('returns zeros for an empty token list', () => {
    expect(meanPool([], 3)).toEqual([0, 0, 0]);
  });
});

describe('padFlatten', () => {
  it('zero-pads short sequences on the right', () => {
    const { flat, truncated } = padFlatten([[1, 2]], 2, 3);
    expect(flat).toEqual([1, 2, 0, 0, 0, 0]);
    expect(truncated).toBe(false);
  });

  it('keeps the head and reports truncation', () => {
    const { flat, truncated } = padFlatten([[1], [2], [3]], 1, 2);
    expect(flat).toEqual([1, 2]);
    expect(truncated).toBe(true);
  });

  it('lays rows out row-major', () => {
    const { flat } = padFlatten([[1, 2], [3, 4]], 2, 2);
    expect(flat).toEqual([1, 2, 3, 4]);
  });
});

describe('formatInterchange', () => {
  it('writes a pooled header and one C and one R line per record', () => {
    const text = formatInterchange(2, 'POOLED', undefined, [
      { key: 'a', context: [1, 2], response: [3, 4] },
    ]);
    expect(text).toBe('dim=2 mode=POOLED\na C 1 2\na R 3 4\n');
  });

  it('writes len into sequence headers and widens lines', () => {
    const text = formatInterchange(1, 'SEQUENCE', 3, [
      { key: 'a', context: [1, 2, 3], response: [4, 5, 6] },
    ]);
    expect(text.startsWith('dim=1 mode=SEQUENCE len=3\n')).toBe(true);
    expect(text).toContain('a C 1 2 3');
  });

  it('produces a header-only file for zero records', () => {
    expect(formatInterchange(768, 'POOLED', undefined, [])).toBe('dim=768 mode=POOLED\n');
  });

  it('rejects vectors of the wrong width, naming the record', () => {
    expect(() =>
      formatInterchange(2, 'POOLED', undefined, [
        { key: 'bad', context: [1], response: [1, 2] },
      ]),
    ).toThrow(/bad/);
  });

  it('rejects sequence mode without a seq len', () => {
    expect(() => formatInterchange(2, 'SEQUENCE', undefined, [])).toThrow(/seq len/);
  });

  it('serializes floats losslessly', () => {
    const values = [0.1, -1 / 3, 2 ** -40, 123456.789];
    const text = formatInterchange(4, 'POOLED', undefined, [
      { key: 'k', context: values, response: values },
    ]);
    const parsed = text.split('\n')[1].split(' ').slice(2).map(Number);
    expect(parsed).toEqual(values);
  });
});
