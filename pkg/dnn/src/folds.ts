/** Stratified fold assignment, bit-identical to the feature pipeline's.
 *
 * Each class is shuffled with splitmix64(seed mixed with the class id)
 * and dealt round-robin starting at a class-dependent offset, so the
 * trainer and the logistic-regression baseline evaluate on exactly the
 * same splits when given the same seed.
 */

import { ConfigError, DegenerateInputError } from './errors';
import { SplitMix64 } from './rng';

const MASK64 = (1n << 64n) - 1n;

export function stratifiedFolds(
  labels: readonly number[],
  k: number,
  seed: number,
  allowSmall = false,
): Int32Array {
  const n = labels.length;
  if (k < 2) {
    throw new ConfigError(`need k >= 2 folds, got ${k}`);
  }
  if (k > n) {
    throw new ConfigError(`k=${k} folds exceed ${n} samples`);
  }
  const foldOf = new Int32Array(n).fill(-1);
  const classes = [...new Set(labels)].sort((a, b) => a - b);
  for (const cls of classes) {
    const idx: number[] = [];
    labels.forEach((label, i) => {
      if (label === cls) idx.push(i);
    });
    if (idx.length < k && !allowSmall) {
      throw new DegenerateInputError(
        `class ${cls} has ${idx.length} samples, fewer than ${k} folds ` +
          '(pass allowSmall to deal them anyway)',
      );
    }
    const rng = new SplitMix64(((BigInt(seed) << 16n) ^ BigInt(cls + 1)) & MASK64);
    rng.shuffle(idx);
    const start = rng.below(k);
    idx.forEach((sample, t) => {
      foldOf[sample] = (start + t) % k;
    });
  }
  return foldOf;
}

/** Index lists for one fold: held-out samples and the remainder. */
export function foldSplit(foldOf: Int32Array, fold: number): { train: number[]; test: number[] } {
  const train: number[] = [];
  const test: number[] = [];
  foldOf.forEach((f, i) => (f === fold ? test : train).push(i));
  return { train, test };
}
