/** Training loop and stratified cross-validation for the sequence model.
 *
 * Defaults: adaptive-moment optimizer at 1e-3, minibatches of 16, up to
 * 200 epochs with early stopping on a 10% stratified validation split
 * of the training data (patience 10, best-epoch weights restored).
 * With the validation fraction set to 0 the loop instead trains on
 * everything and exits as soon as training error reaches zero.
 *
 * Fold assignment is the same splitmix64 deal as the logistic-regression
 * baseline, so both classifiers see identical splits for a given seed,
 * and the cross-validation report uses the same JSON schema.
 */

import * as tf from '@tensorflow/tfjs';

import { padBatch, SequenceDataset, SequenceSample } from './dataset';
import { DegenerateInputError } from './errors';
import { foldSplit, stratifiedFolds } from './folds';
import { Pooling, SequenceClassifier, tensorsFromBatch } from './model';
import { SplitMix64 } from './rng';

export interface TrainOptions {
  epochs?: number;
  batchSize?: number;
  learningRate?: number;
  seed?: number;
  /** 0 disables the holdout; training then stops at zero training error. */
  validationFraction?: number;
  patience?: number;
  kernelLength?: number;
  pooling?: Pooling;
  log?: (line: string) => void;
}

export interface EpochStat {
  epoch: number;
  loss: number;
  valLoss: number | null;
  trainError: number;
}

export interface TrainResult {
  model: SequenceClassifier;
  history: EpochStat[];
  epochsRun: number;
  /** True when the validation patience ran out before the epoch budget. */
  stoppedEarly: boolean;
  bestEpoch: number;
}

export interface FoldResult {
  index: number;
  size: number;
  error: number;
}

export interface CVReport {
  dataset: string;
  measure: string;
  classifier: string;
  seed: number;
  lambda: null;
  folds: FoldResult[];
  meanError: number;
}

function chunks<T>(items: readonly T[], size: number): T[][] {
  const out: T[][] = [];
  for (let i = 0; i < items.length; i += size) {
    out.push(items.slice(i, i + size));
  }
  return out;
}

function batchLoss(model: SequenceClassifier, group: readonly SequenceSample[]): tf.Scalar {
  const batch = padBatch(group);
  return tf.tidy(() => {
    const { values, mask } = tensorsFromBatch(batch);
    const labels = tf.cast(tf.oneHot(tf.tensor1d(batch.classIds, 'int32'), model.classes), 'float32');
    return tf.losses.softmaxCrossEntropy(labels, model.forward(values, mask));
  });
}

function meanLoss(model: SequenceClassifier, samples: readonly SequenceSample[], batchSize: number): number {
  let weighted = 0;
  for (const group of chunks(samples, batchSize)) {
    const loss = batchLoss(model, group);
    weighted += loss.dataSync()[0] * group.length;
    loss.dispose();
  }
  return weighted / samples.length;
}

/** Misclassification rate of argmax predictions over the given samples. */
export function errorRate(
  model: SequenceClassifier,
  samples: readonly SequenceSample[],
  batchSize = 16,
): number {
  let wrong = 0;
  for (const group of chunks(samples, batchSize)) {
    const predicted = model.classify(padBatch(group));
    group.forEach((sample, i) => {
      if (predicted[i] !== sample.classId) {
        wrong += 1;
      }
    });
  }
  return wrong / samples.length;
}

/** Per-class shuffle-and-take holdout; classes with one sample stay in train. */
function stratifiedHoldout(
  samples: readonly SequenceSample[],
  fraction: number,
  seed: bigint,
): { train: SequenceSample[]; val: SequenceSample[] } {
  const train: SequenceSample[] = [];
  const val: SequenceSample[] = [];
  const classIds = [...new Set(samples.map((s) => s.classId))].sort((a, b) => a - b);
  for (const cls of classIds) {
    const idx = samples.map((_, i) => i).filter((i) => samples[i].classId === cls);
    const rng = new SplitMix64(((seed << 16n) ^ BigInt(cls + 1)));
    rng.shuffle(idx);
    const nVal = Math.min(Math.floor(idx.length * fraction + 0.5), idx.length - 1);
    idx.forEach((sample, t) => (t < nVal ? val : train).push(samples[sample]));
  }
  return { train, val };
}

export function trainModel(
  samples: readonly SequenceSample[],
  classes: number,
  options: TrainOptions = {},
): TrainResult {
  const epochs = options.epochs ?? 200;
  const batchSize = options.batchSize ?? 16;
  const learningRate = options.learningRate ?? 1e-3;
  const seed = options.seed ?? 0;
  const validationFraction = options.validationFraction ?? 0.1;
  const patience = options.patience ?? 10;
  const log = options.log ?? (() => {});
  if (samples.length === 0) {
    throw new DegenerateInputError('empty training set');
  }
  if (new Set(samples.map((s) => s.classId)).size < 2) {
    throw new DegenerateInputError('C >= 2 required, need samples from at least two classes');
  }

  // One master stream hands out the sub-seeds so that init, holdout and
  // batch order are independent yet all pinned by the single seed.
  const master = new SplitMix64(seed);
  const model = new SequenceClassifier({
    classes,
    seed: master.initSeed(),
    kernelLength: options.kernelLength,
    pooling: options.pooling,
  });
  const holdoutSeed = master.nextU64();
  const { train, val } =
    validationFraction > 0
      ? stratifiedHoldout(samples, validationFraction, holdoutSeed)
      : { train: [...samples], val: [] };
  const useVal = val.length > 0;

  const optimizer = tf.train.adam(learningRate);
  const history: EpochStat[] = [];
  let best: tf.Tensor[] | null = null;
  let bestLoss = Infinity;
  let bestEpoch = 0;
  let wait = 0;
  let stoppedEarly = false;

  try {
    for (let epoch = 1; epoch <= epochs; epoch++) {
      const order = train.map((_, i) => i);
      master.shuffle(order);
      let weighted = 0;
      for (const group of chunks(order.map((i) => train[i]), batchSize)) {
        const loss = optimizer.minimize(() => batchLoss(model, group), true, model.variables);
        weighted += (loss as tf.Scalar).dataSync()[0] * group.length;
        loss?.dispose();
      }
      const epochLoss = weighted / train.length;
      const trainError = errorRate(model, train, batchSize);
      const valLoss = useVal ? meanLoss(model, val, batchSize) : null;
      history.push({ epoch, loss: epochLoss, valLoss, trainError });
      log(
        `epoch ${epoch}: loss ${epochLoss.toFixed(4)} trainErr ${trainError.toFixed(3)}` +
          (valLoss === null ? '' : ` valLoss ${valLoss.toFixed(4)}`),
      );
      if (useVal) {
        if (valLoss! < bestLoss) {
          bestLoss = valLoss!;
          bestEpoch = epoch;
          best?.forEach((t) => t.dispose());
          best = model.snapshotWeights();
          wait = 0;
        } else {
          wait += 1;
          if (wait >= patience) {
            stoppedEarly = true;
            break;
          }
        }
      } else {
        bestEpoch = epoch;
        if (trainError === 0) {
          break;
        }
      }
    }
    if (best !== null) {
      model.restoreWeights(best);
    }
  } finally {
    best?.forEach((t) => t.dispose());
    optimizer.dispose();
  }
  return { model, history, epochsRun: history.length, stoppedEarly, bestEpoch };
}

export function summarizeFolds(folds: readonly FoldResult[]): number {
  const total = folds.reduce((acc, f) => acc + f.size, 0);
  if (total === 0) {
    throw new DegenerateInputError('no evaluation samples');
  }
  return folds.reduce((acc, f) => acc + f.error * f.size, 0) / total;
}

export interface CvOptions extends TrainOptions {
  folds?: number;
  allowSmall?: boolean;
  datasetName?: string;
  measureName?: string;
}

/** Stratified k-fold CV; fold models never see their held-out samples. */
export function trainCv(dataset: SequenceDataset, options: CvOptions = {}): CVReport {
  const k = options.folds ?? 5;
  const seed = options.seed ?? 0;
  const log = options.log ?? (() => {});
  const samples = dataset.samples;
  if (new Set(samples.map((s) => s.classId)).size < 2) {
    throw new DegenerateInputError('C >= 2 required for cross-validation');
  }
  const foldOf = stratifiedFolds(samples.map((s) => s.classId), k, seed, options.allowSmall);
  const results: FoldResult[] = [];
  for (let fold = 0; fold < k; fold++) {
    const { train, test } = foldSplit(foldOf, fold);
    const { model, epochsRun } = trainModel(
      train.map((i) => samples[i]),
      dataset.classes.length,
      { ...options, seed: seed * 256 + fold + 1 },
    );
    const error = errorRate(model, test.map((i) => samples[i]), options.batchSize ?? 16);
    model.dispose();
    results.push({ index: fold, size: test.length, error });
    log(`fold ${fold}: ${test.length} held out, error ${error.toFixed(3)} (${epochsRun} epochs)`);
  }
  return {
    dataset: options.datasetName ?? '',
    measure: options.measureName ?? 'wegdvm',
    classifier: 'dnn',
    seed,
    lambda: null,
    folds: results,
    meanError: summarizeFolds(results),
  };
}

/** Same key layout and ordering as the baseline classifier's report. */
export function reportToJson(report: CVReport): string {
  const body = {
    classifier: report.classifier,
    dataset: report.dataset,
    folds: report.folds.map((f) => ({ error: f.error, index: f.index, size: f.size })),
    lambda: report.lambda,
    mean_error: report.meanError,
    measure: report.measure,
    seed: report.seed,
  };
  return `${JSON.stringify(body, null, 2)}\n`;
}
