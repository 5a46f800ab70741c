/** Deterministic PRNG shared with the feature pipeline.
 *
 * splitmix64 is spelled out here (rather than taken from a library) so
 * that fold plans and synthetic fixtures derived from a seed are
 * bit-identical to the Python side, which carries the same few lines.
 */

import { ConfigError } from './errors';

const MASK64 = (1n << 64n) - 1n;
const GAMMA = 0x9e3779b97f4a7c15n;
const MULT1 = 0xbf58476d1ce4e5b9n;
const MULT2 = 0x94d049bb133111ebn;

export class SplitMix64 {
  state: bigint;

  constructor(seed: bigint | number) {
    this.state = BigInt(seed) & MASK64;
  }

  nextU64(): bigint {
    this.state = (this.state + GAMMA) & MASK64;
    let z = this.state;
    z = ((z ^ (z >> 30n)) * MULT1) & MASK64;
    z = ((z ^ (z >> 27n)) * MULT2) & MASK64;
    return (z ^ (z >> 31n)) & MASK64;
  }

  /** Uniform integer in [0, bound) by rejection of the biased tail. */
  below(bound: number): number {
    if (!Number.isInteger(bound) || bound <= 0) {
      throw new ConfigError(`bound must be a positive integer, got ${bound}`);
    }
    const b = BigInt(bound);
    const limit = MASK64 - ((MASK64 + 1n) % b);
    for (;;) {
      const v = this.nextU64();
      if (v <= limit) {
        return Number(v % b);
      }
    }
  }

  /** In-place Fisher-Yates shuffle, same draw sequence as the Python side. */
  shuffle<T>(items: T[]): void {
    for (let i = items.length - 1; i > 0; i--) {
      const j = this.below(i + 1);
      [items[i], items[j]] = [items[j], items[i]];
    }
  }

  /** Uniform float in [0, 1) with 53 random bits (for synthetic fixtures). */
  float53(): number {
    return Number(this.nextU64() >> 11n) / 2 ** 53;
  }

  /** Seed small enough to hand to a tfjs initializer. */
  initSeed(): number {
    return this.below(2 ** 31 - 1) + 1;
  }
}
