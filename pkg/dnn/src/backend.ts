/** Tensor backend selection.
 *
 * The wasm backend (XNNPACK) is the fast option under Node and the
 * default; the pure-JS cpu backend is kept reachable as a fallback
 * because it needs no binary artifacts.  Runs are reproducible for a
 * fixed seed on a fixed backend build (single-threaded kernels, seeded
 * initializers); across backends only to float tolerance.
 */

import '@tensorflow/tfjs-backend-wasm';
import * as tf from '@tensorflow/tfjs';

import { ConfigError } from './errors';

export type BackendName = 'wasm' | 'cpu';

export async function useBackend(name: BackendName = 'wasm'): Promise<string> {
  if (name !== 'wasm' && name !== 'cpu') {
    throw new ConfigError(`backend must be "wasm" or "cpu", got ${JSON.stringify(name)}`);
  }
  if (!(await tf.setBackend(name))) {
    throw new ConfigError(`backend ${name} failed to initialize`);
  }
  await tf.ready();
  return tf.getBackend();
}
