/** Loading and batching of exported per-edge feature matrices.
 *
 * The feature pipeline's `export-dnn` command writes a directory of
 * binary matrices plus an `index.json` with a frozen label -> class id
 * mapping; this module reads that layout and prepares padded batches.
 * Everything here is plain typed arrays so it can be tested without a
 * tensor backend.
 */

import * as fs from 'fs';
import * as path from 'path';

import { Matrix, readMatrix } from './binfmt';
import { ConfigError, DegenerateInputError, FormatError } from './errors';
import { SplitMix64 } from './rng';

export const EXPORT_FORMAT = 'wgdv-dnn-export';
export const FEATURE_COLS = 68;

export interface SequenceSample {
  id: string;
  label: string;
  classId: number;
  matrix: Matrix;
}

export interface SequenceDataset {
  classes: string[];
  statistic: string | null;
  samples: SequenceSample[];
}

interface IndexSample {
  id: string;
  label: string;
  class_id: number;
  rows: number;
  cols: number;
  file: string;
}

function checkSample(sample: SequenceSample): void {
  const { rows, cols, data } = sample.matrix;
  if (rows < 1) {
    throw new FormatError(`${sample.id}: empty matrix`);
  }
  if (cols !== FEATURE_COLS) {
    throw new FormatError(`${sample.id}: expected ${FEATURE_COLS} columns, got ${cols}`);
  }
  for (let i = 0; i < data.length; i++) {
    if (!Number.isFinite(data[i])) {
      throw new FormatError(`${sample.id}: non-finite entry at index ${i}`);
    }
  }
}

export function loadExport(dir: string): SequenceDataset {
  const indexPath = path.join(dir, 'index.json');
  let index: {
    format?: string;
    version?: number;
    statistic?: string | null;
    classes?: string[];
    samples?: IndexSample[];
  };
  try {
    index = JSON.parse(fs.readFileSync(indexPath, 'utf8'));
  } catch (err) {
    throw new FormatError(`${indexPath}: ${(err as Error).message}`);
  }
  if (index.format !== EXPORT_FORMAT) {
    throw new FormatError(`${indexPath}: format ${JSON.stringify(index.format)} is not ${EXPORT_FORMAT}`);
  }
  if (index.version !== 1) {
    throw new FormatError(`${indexPath}: unsupported version ${index.version}`);
  }
  const classes = index.classes ?? [];
  if (classes.length < 1 || !Array.isArray(index.samples)) {
    throw new FormatError(`${indexPath}: missing classes or samples`);
  }
  const samples = index.samples.map((entry) => {
    if (entry.label !== classes[entry.class_id]) {
      throw new FormatError(`${entry.id}: class_id ${entry.class_id} does not map to ${entry.label}`);
    }
    const matrix = readMatrix(path.join(dir, entry.file));
    if (matrix.rows !== entry.rows || matrix.cols !== entry.cols) {
      throw new FormatError(
        `${entry.id}: index says ${entry.rows}x${entry.cols}, file holds ${matrix.rows}x${matrix.cols}`,
      );
    }
    const sample: SequenceSample = {
      id: entry.id,
      label: entry.label,
      classId: entry.class_id,
      matrix,
    };
    checkSample(sample);
    return sample;
  });
  if (samples.length === 0) {
    throw new DegenerateInputError(`${dir}: export contains no samples`);
  }
  return { classes, statistic: index.statistic ?? null, samples };
}

/** One zero-padded batch: sample i occupies rows [0, lengths[i]) of slab i. */
export interface PaddedBatch {
  /** Row-major [batch, maxRows, FEATURE_COLS]. */
  values: Float32Array;
  /** Row-major [batch, maxRows], 1 on real rows, 0 on padding. */
  mask: Float32Array;
  lengths: number[];
  batch: number;
  maxRows: number;
  classIds: number[];
}

export function padBatch(samples: readonly SequenceSample[], padTo?: number): PaddedBatch {
  if (samples.length === 0) {
    throw new DegenerateInputError('cannot batch zero samples');
  }
  const lengths = samples.map((s) => s.matrix.rows);
  const maxRows = padTo ?? Math.max(...lengths);
  if (maxRows < Math.max(...lengths)) {
    throw new ConfigError(`padTo=${padTo} is below the longest sample (${Math.max(...lengths)})`);
  }
  const batch = samples.length;
  const values = new Float32Array(batch * maxRows * FEATURE_COLS);
  const mask = new Float32Array(batch * maxRows);
  samples.forEach((sample, i) => {
    values.set(sample.matrix.data, i * maxRows * FEATURE_COLS);
    mask.fill(1, i * maxRows, i * maxRows + sample.matrix.rows);
  });
  return { values, mask, lengths, batch, maxRows, classIds: samples.map((s) => s.classId) };
}

export interface SyntheticOptions {
  classes: number;
  samplesPerClass: number;
  rowRange: [number, number];
  /** Gap between class column means; larger separates classes more. */
  separation?: number;
  noise?: number;
  seed?: number;
}

/** Class-separable fixture: class c raises columns j with j % classes == c.
 *
 * Row counts vary per sample so batching always exercises padding.
 */
export function syntheticDataset(opts: SyntheticOptions): SequenceDataset {
  const { classes, samplesPerClass, rowRange } = opts;
  const separation = opts.separation ?? 1.0;
  const noise = opts.noise ?? 0.25;
  const rng = new SplitMix64(opts.seed ?? 0);
  if (classes < 2 || samplesPerClass < 1) {
    throw new ConfigError(`need >= 2 classes and >= 1 sample each, got ${classes}/${samplesPerClass}`);
  }
  const [lo, hi] = rowRange;
  if (lo < 1 || hi < lo) {
    throw new ConfigError(`bad row range [${lo}, ${hi}]`);
  }
  const gaussian = () => {
    // Box-Muller on splitmix floats keeps the fixture portable.
    const u = 1 - rng.float53();
    const v = rng.float53();
    return Math.sqrt(-2 * Math.log(u)) * Math.cos(2 * Math.PI * v);
  };
  const samples: SequenceSample[] = [];
  for (let c = 0; c < classes; c++) {
    for (let s = 0; s < samplesPerClass; s++) {
      const rows = lo + rng.below(hi - lo + 1);
      const data = new Float32Array(rows * FEATURE_COLS);
      for (let r = 0; r < rows; r++) {
        for (let j = 0; j < FEATURE_COLS; j++) {
          const mean = j % classes === c ? separation : 0;
          data[r * FEATURE_COLS + j] = mean + noise * gaussian();
        }
      }
      samples.push({
        id: `c${c}s${s}`,
        label: `class${c}`,
        classId: c,
        matrix: { rows, cols: FEATURE_COLS, data },
      });
    }
  }
  return {
    classes: Array.from({ length: classes }, (_, c) => `class${c}`),
    statistic: null,
    samples,
  };
}
