import { describe, expect, it } from 'vitest';

import { ConfigError, DegenerateInputError } from '../src/errors';
import { foldSplit, stratifiedFolds } from '../src/folds';

describe('stratifiedFolds', () => {
  it('reproduces the fold plan frozen in the pipeline test suite', () => {
    const labels = [...Array(7).fill(0), ...Array(5).fill(1), ...Array(8).fill(2)];
    const plan = stratifiedFolds(labels, 3, 42);
    expect([...plan]).toEqual([1, 0, 2, 2, 1, 1, 0, 2, 0, 1, 1, 0, 2, 1, 0, 0, 0, 1, 1, 2]);
  });

  it('balances every class across folds to within one sample', () => {
    const labels: number[] = [];
    for (let i = 0; i < 47; i++) {
      labels.push(i % 3);
    }
    for (let seed = 0; seed < 5; seed++) {
      const plan = stratifiedFolds(labels, 5, seed);
      for (let cls = 0; cls < 3; cls++) {
        const counts = Array(5).fill(0);
        labels.forEach((label, i) => {
          if (label === cls) counts[plan[i]] += 1;
        });
        expect(Math.max(...counts) - Math.min(...counts)).toBeLessThanOrEqual(1);
      }
    }
  });

  it('assigns every sample exactly once', () => {
    const labels = [0, 0, 0, 1, 1, 1, 1, 0, 1, 0];
    const plan = stratifiedFolds(labels, 2, 3);
    const { train, test } = foldSplit(plan, 0);
    expect([...train, ...test].sort((a, b) => a - b)).toEqual([0, 1, 2, 3, 4, 5, 6, 7, 8, 9]);
  });

  it('changes with the seed but not across repeated calls', () => {
    const labels = Array.from({ length: 30 }, (_, i) => i % 2);
    const a = stratifiedFolds(labels, 5, 1);
    expect([...stratifiedFolds(labels, 5, 1)]).toEqual([...a]);
    expect([...stratifiedFolds(labels, 5, 2)]).not.toEqual([...a]);
  });

  it('rejects k < 2 and k > n', () => {
    expect(() => stratifiedFolds([0, 1], 1, 0)).toThrow(ConfigError);
    expect(() => stratifiedFolds([0, 1], 3, 0)).toThrow(ConfigError);
  });

  it('rejects classes smaller than k unless allowed', () => {
    const labels = [0, 0, 0, 0, 1];
    expect(() => stratifiedFolds(labels, 2, 0)).toThrow(DegenerateInputError);
    const plan = stratifiedFolds(labels, 2, 0, true);
    expect([...plan].every((f) => f === 0 || f === 1)).toBe(true);
  });
});
