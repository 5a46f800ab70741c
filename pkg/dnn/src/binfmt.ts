/** Reader/writer for the pipeline's binary matrix container.
 *
 * Layout, all little-endian:
 *
 *     bytes 0-3   magic  "WGDV"
 *     bytes 4-7   u32    format version (1)
 *     bytes 8-11  u32    m, number of rows (edges)
 *     bytes 12-15 u32    k, number of columns (68)
 *     then        m*k    IEEE-754 binary32 values, row-major
 */

import * as fs from 'fs';

import { FormatError } from './errors';

export const MAGIC = 'WGDV';
export const VERSION = 1;
const HEADER_BYTES = 16;

export interface Matrix {
  rows: number;
  cols: number;
  /** Row-major values, length rows * cols. */
  data: Float32Array;
}

export function readMatrix(path: string): Matrix {
  const raw = fs.readFileSync(path);
  if (raw.length < HEADER_BYTES) {
    throw new FormatError(`${path}: truncated header`);
  }
  if (raw.toString('latin1', 0, 4) !== MAGIC) {
    throw new FormatError(`${path}: bad magic ${JSON.stringify(raw.toString('latin1', 0, 4))}`);
  }
  const version = raw.readUInt32LE(4);
  if (version !== VERSION) {
    throw new FormatError(`${path}: unsupported version ${version}`);
  }
  const rows = raw.readUInt32LE(8);
  const cols = raw.readUInt32LE(12);
  const expected = HEADER_BYTES + 4 * rows * cols;
  if (raw.length !== expected) {
    throw new FormatError(`${path}: expected ${expected} bytes, found ${raw.length}`);
  }
  const data = new Float32Array(rows * cols);
  for (let i = 0; i < data.length; i++) {
    data[i] = raw.readFloatLE(HEADER_BYTES + 4 * i);
  }
  return { rows, cols, data };
}

export function writeMatrix(path: string, matrix: Matrix): void {
  const { rows, cols, data } = matrix;
  if (data.length !== rows * cols) {
    throw new FormatError(`matrix data length ${data.length} != ${rows}x${cols}`);
  }
  const buf = Buffer.alloc(HEADER_BYTES + 4 * data.length);
  buf.write(MAGIC, 0, 'latin1');
  buf.writeUInt32LE(VERSION, 4);
  buf.writeUInt32LE(rows, 8);
  buf.writeUInt32LE(cols, 12);
  for (let i = 0; i < data.length; i++) {
    buf.writeFloatLE(data[i], HEADER_BYTES + 4 * i);
  }
  fs.writeFileSync(path, buf);
}
