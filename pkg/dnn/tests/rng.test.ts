import { describe, expect, it } from 'vitest';

import { ConfigError } from '../src/errors';
import { SplitMix64 } from '../src/rng';

describe('SplitMix64', () => {
  it('matches the published seed-0 stream', () => {
    const rng = new SplitMix64(0);
    expect(rng.nextU64()).toBe(0xe220a8397b1dcdafn);
    expect(rng.nextU64()).toBe(0x6e789e6aa1b965f4n);
  });

  it('matches the seed-12345 stream pinned on the pipeline side', () => {
    const rng = new SplitMix64(12345);
    const expected = [0x22118258a9d111a0n, 0x346edce5f713f8edn, 0x1e9a57bc80e6721dn, 0x2d160e7e5c3f42can];
    expect(expected.map(() => rng.nextU64())).toEqual(expected);
  });

  it('wraps negative and oversized seeds to 64 bits', () => {
    expect(new SplitMix64(-1).nextU64()).toBe(new SplitMix64((1n << 64n) - 1n).nextU64());
    expect(new SplitMix64(1n << 64n).nextU64()).toBe(new SplitMix64(0).nextU64());
  });

  it('below stays in range and covers all residues', () => {
    const rng = new SplitMix64(99);
    const seen = new Set<number>();
    for (let i = 0; i < 400; i++) {
      const v = rng.below(7);
      expect(v).toBeGreaterThanOrEqual(0);
      expect(v).toBeLessThan(7);
      seen.add(v);
    }
    expect(seen.size).toBe(7);
  });

  it('below rejects non-positive bounds', () => {
    const rng = new SplitMix64(1);
    expect(() => rng.below(0)).toThrow(ConfigError);
    expect(() => rng.below(-3)).toThrow(ConfigError);
  });

  it('shuffle permutes deterministically for a fixed seed', () => {
    const a = [0, 1, 2, 3, 4, 5, 6, 7, 8, 9];
    const b = [...a];
    new SplitMix64(5).shuffle(a);
    new SplitMix64(5).shuffle(b);
    expect(a).toEqual(b);
    expect([...a].sort((x, y) => x - y)).toEqual([0, 1, 2, 3, 4, 5, 6, 7, 8, 9]);
    const c = [0, 1, 2, 3, 4, 5, 6, 7, 8, 9];
    new SplitMix64(6).shuffle(c);
    expect(c).not.toEqual(a);
  });

  it('float53 lands in [0, 1)', () => {
    const rng = new SplitMix64(7);
    for (let i = 0; i < 200; i++) {
      const v = rng.float53();
      expect(v).toBeGreaterThanOrEqual(0);
      expect(v).toBeLessThan(1);
    }
  });
});
