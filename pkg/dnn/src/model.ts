/** Sequence classifier over per-edge feature matrices.
 *
 * Architecture: two length-preserving 1-D convolutions along the edge
 * axis (channels 68 -> 48 -> 96, ReLU), a 3-layer bidirectional LSTM
 * with hidden size 256 per direction, masked sum pooling of the LSTM
 * outputs to a fixed 512 vector, and a dense layer to class logits.
 * Channel and layer sizes are fixed; kernel length and the pooling
 * reduction (sum, or mean behind a flag) are options.
 *
 * The convolutions are spelled as pad + shifted slices + matMul rather
 * than conv1d layers: the wasm backend has no gradient kernel for
 * conv1d, while every op in the unrolled form differentiates fine.
 * Padded rows are re-zeroed after each convolution so that a row's
 * activations never depend on how much padding follows it, and the
 * LSTM layers receive an explicit boolean mask so padded steps are
 * skipped rather than consumed.
 */

import * as tf from '@tensorflow/tfjs';

import { PaddedBatch, FEATURE_COLS } from './dataset';
import { ConfigError } from './errors';
import { SplitMix64 } from './rng';

export const CONV1_FILTERS = 48;
export const CONV2_FILTERS = 96;
export const LSTM_LAYERS = 3;
export const HIDDEN_SIZE = 256;
export const POOLED_SIZE = 2 * HIDDEN_SIZE;

export type Pooling = 'sum' | 'mean';

export interface ModelOptions {
  classes: number;
  kernelLength?: number;
  pooling?: Pooling;
  /** Seeds every weight initializer; same seed, same initial weights. */
  seed?: number;
}

interface ConvBlock {
  kernel: tf.Variable;
  bias: tf.Variable;
  inChannels: number;
}

export class SequenceClassifier {
  readonly classes: number;
  readonly kernelLength: number;
  readonly pooling: Pooling;
  readonly seed: number;

  private readonly convs: ConvBlock[];
  private readonly lstmStack: tf.layers.Layer[];
  private readonly head: tf.layers.Layer;
  private disposed = false;

  constructor(options: ModelOptions) {
    const { classes } = options;
    this.kernelLength = options.kernelLength ?? 5;
    this.pooling = options.pooling ?? 'sum';
    this.seed = options.seed ?? 0;
    if (!Number.isInteger(classes) || classes < 2) {
      throw new ConfigError(`need >= 2 classes, got ${classes}`);
    }
    if (!Number.isInteger(this.kernelLength) || this.kernelLength < 1 || this.kernelLength % 2 === 0) {
      throw new ConfigError(`kernel length must be odd and positive, got ${this.kernelLength}`);
    }
    if (this.pooling !== 'sum' && this.pooling !== 'mean') {
      throw new ConfigError(`pooling must be "sum" or "mean", got ${JSON.stringify(this.pooling)}`);
    }
    this.classes = classes;

    const seeds = new SplitMix64(this.seed);
    const conv = (inChannels: number, outChannels: number): ConvBlock => {
      const init = tf.initializers.glorotUniform({ seed: seeds.initSeed() });
      const kernelValue = init.apply([this.kernelLength * inChannels, outChannels]) as tf.Tensor;
      const biasValue = tf.zeros([outChannels]);
      const kernel = tf.variable(kernelValue);
      const bias = tf.variable(biasValue);
      kernelValue.dispose();
      biasValue.dispose();
      return { kernel, bias, inChannels };
    };
    this.convs = [conv(FEATURE_COLS, CONV1_FILTERS), conv(CONV1_FILTERS, CONV2_FILTERS)];

    // Orthogonal recurrent init (the Keras default) runs a JS-side QR on
    // 256x1024 matrices and dominates start-up, so seeded Glorot is used
    // for every LSTM matrix instead.
    this.lstmStack = [];
    for (let i = 0; i < LSTM_LAYERS; i++) {
      const bi = tf.layers.bidirectional({
        layer: tf.layers.lstm({
          units: HIDDEN_SIZE,
          returnSequences: true,
          kernelInitializer: tf.initializers.glorotUniform({ seed: seeds.initSeed() }),
          recurrentInitializer: tf.initializers.glorotUniform({ seed: seeds.initSeed() }),
        }) as tf.RNN,
        mergeMode: 'concat',
      });
      bi.build([null, null, i === 0 ? CONV2_FILTERS : POOLED_SIZE]);
      this.lstmStack.push(bi);
    }

    this.head = tf.layers.dense({
      units: classes,
      kernelInitializer: tf.initializers.glorotUniform({ seed: seeds.initSeed() }),
    });
    this.head.build([null, POOLED_SIZE]);
  }

  /** pad + kernelLength shifted slices + matMul == length-preserving conv. */
  private convolve(x: tf.Tensor3D, block: ConvBlock, maskCol: tf.Tensor3D): tf.Tensor3D {
    const [b, t] = [x.shape[0], x.shape[1]];
    const half = (this.kernelLength - 1) / 2;
    const padded = tf.pad(x, [
      [0, 0],
      [half, half],
      [0, 0],
    ]);
    const windows: tf.Tensor3D[] = [];
    for (let s = 0; s < this.kernelLength; s++) {
      windows.push(tf.slice(padded, [0, s, 0], [b, t, block.inChannels]));
    }
    const unfolded = tf.reshape(tf.concat(windows, 2), [b * t, this.kernelLength * block.inChannels]);
    const out = tf.reshape(tf.matMul(unfolded, block.kernel as tf.Tensor2D), [b, t, -1]);
    return tf.mul(tf.relu(tf.add(out, block.bias)), maskCol);
  }

  private encode(values: tf.Tensor3D, mask: tf.Tensor2D): tf.Tensor2D {
    if (this.disposed) {
      throw new ConfigError('model is disposed');
    }
    if (values.shape[2] !== FEATURE_COLS) {
      throw new ConfigError(`expected ${FEATURE_COLS} feature columns, got ${values.shape[2]}`);
    }
    if (mask.shape[0] !== values.shape[0] || mask.shape[1] !== values.shape[1]) {
      throw new ConfigError(`mask shape [${mask.shape}] does not cover values [${values.shape}]`);
    }
    const maskCol = tf.expandDims(mask, -1) as tf.Tensor3D;
    const maskBool = tf.cast(mask, 'bool');
    let h = tf.mul(values, maskCol) as tf.Tensor3D;
    for (const block of this.convs) {
      h = this.convolve(h, block, maskCol);
    }
    for (const bi of this.lstmStack) {
      h = bi.apply(h, { mask: maskBool }) as tf.Tensor3D;
    }
    let pooled = tf.sum(tf.mul(h, maskCol), 1) as tf.Tensor2D;
    if (this.pooling === 'mean') {
      pooled = tf.div(pooled, tf.sum(mask, 1, true));
    }
    return pooled;
  }

  /** Class logits for a zero-padded batch; mask is 1 on real rows. */
  forward(values: tf.Tensor3D, mask: tf.Tensor2D): tf.Tensor2D {
    return tf.tidy(() => this.head.apply(this.encode(values, mask)) as tf.Tensor2D);
  }

  /** Masked LSTM-output reduction (the fixed-size vector ahead of the logits). */
  pooledVector(values: tf.Tensor3D, mask: tf.Tensor2D): tf.Tensor2D {
    return tf.tidy(() => this.encode(values, mask));
  }

  probabilities(values: tf.Tensor3D, mask: tf.Tensor2D): tf.Tensor2D {
    return tf.tidy(() => tf.softmax(this.forward(values, mask)));
  }

  /** Argmax class ids; ties resolve to the smallest class id. */
  classify(batch: PaddedBatch): number[] {
    const out = tf.tidy(() => {
      const { values, mask } = tensorsFromBatch(batch);
      return tf.argMax(this.forward(values, mask), 1);
    });
    const ids = Array.from(out.dataSync());
    out.dispose();
    return ids;
  }

  get variables(): tf.Variable[] {
    // LayerVariable types its backing tf.Variable as protected, but the
    // optimizer needs the variables themselves, not read() copies.
    const layerVars = [...this.lstmStack, this.head].flatMap((layer) =>
      layer.trainableWeights.map((w) => (w as unknown as { val: tf.Variable }).val),
    );
    return [...this.convs.flatMap((c) => [c.kernel, c.bias]), ...layerVars];
  }

  countParams(): number {
    return this.variables.reduce((acc, v) => acc + v.size, 0);
  }

  /** Clones of every trainable tensor, for best-epoch restore. */
  snapshotWeights(): tf.Tensor[] {
    return this.variables.map((v) => v.clone());
  }

  restoreWeights(weights: tf.Tensor[]): void {
    const vars = this.variables;
    if (weights.length !== vars.length) {
      throw new ConfigError(`expected ${vars.length} weight tensors, got ${weights.length}`);
    }
    vars.forEach((v, i) => v.assign(weights[i] as tf.Tensor<tf.Rank>));
  }

  dispose(): void {
    if (this.disposed) {
      return;
    }
    this.disposed = true;
    for (const c of this.convs) {
      c.kernel.dispose();
      c.bias.dispose();
    }
    // Layer.dispose() refuses layers that were built directly instead of
    // through a symbolic apply, so free the backing weights instead.
    for (const layer of [...this.lstmStack, this.head]) {
      for (const w of layer.weights) {
        (w as unknown as { val: tf.Variable }).val.dispose();
      }
    }
  }
}

/** Tensors for a padded batch; caller owns disposal (or wraps in tidy). */
export function tensorsFromBatch(batch: PaddedBatch): { values: tf.Tensor3D; mask: tf.Tensor2D } {
  return {
    values: tf.tensor3d(batch.values, [batch.batch, batch.maxRows, FEATURE_COLS]),
    mask: tf.tensor2d(batch.mask, [batch.batch, batch.maxRows]),
  };
}
