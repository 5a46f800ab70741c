#!/usr/bin/env node
/** Command line for cross-validating the sequence model on an export
 * directory written by the feature pipeline's `export-dnn` command.
 */

import * as fs from 'fs';
import { parseArgs } from 'node:util';

import { BackendName, useBackend } from './backend';
import { loadExport } from './dataset';
import { Pooling } from './model';
import { reportToJson, trainCv } from './train';

const USAGE = `usage: wgdv-dnn --export DIR [options]

Cross-validate the sequence classifier on an exported feature directory.

  --export DIR          export directory holding index.json + matrices/
  --out FILE            also write the report JSON to FILE
  --dataset-name NAME   dataset field for the report (default: export dir name)
  --folds K             stratified folds (default 5)
  --seed N              fold/init/batch seed (default 0)
  --epochs N            epoch budget per fold (default 200)
  --batch-size N        minibatch size (default 16)
  --learning-rate X     optimizer step size (default 0.001)
  --kernel-length N     convolution window, odd (default 5)
  --pooling MODE        sum | mean (default sum)
  --val-fraction X      early-stopping holdout share (default 0.1; 0 disables)
  --patience N          epochs without validation improvement (default 10)
  --backend NAME        wasm | cpu (default wasm)
  --allow-small         permit classes with fewer samples than folds
  --quiet               suppress progress lines on stderr
  -h, --help            show this message
`;

function numberFlag(name: string, raw: string, integer: boolean): number {
  const value = Number(raw);
  if (!Number.isFinite(value) || (integer && !Number.isInteger(value))) {
    throw new Error(`--${name} expects ${integer ? 'an integer' : 'a number'}, got ${JSON.stringify(raw)}`);
  }
  return value;
}

export async function main(argv: string[]): Promise<number> {
  let flags: Record<string, string | boolean | undefined>;
  try {
    flags = parseArgs({
      args: argv,
      allowPositionals: false,
      options: {
        export: { type: 'string' },
        out: { type: 'string' },
        'dataset-name': { type: 'string' },
        folds: { type: 'string', default: '5' },
        seed: { type: 'string', default: '0' },
        epochs: { type: 'string', default: '200' },
        'batch-size': { type: 'string', default: '16' },
        'learning-rate': { type: 'string', default: '0.001' },
        'kernel-length': { type: 'string', default: '5' },
        pooling: { type: 'string', default: 'sum' },
        'val-fraction': { type: 'string', default: '0.1' },
        patience: { type: 'string', default: '10' },
        backend: { type: 'string', default: 'wasm' },
        'allow-small': { type: 'boolean', default: false },
        quiet: { type: 'boolean', default: false },
        help: { type: 'boolean', short: 'h', default: false },
      },
    }).values;
  } catch (err) {
    process.stderr.write(`error: ${(err as Error).message}\n${USAGE}`);
    return 2;
  }
  if (flags.help) {
    process.stdout.write(USAGE);
    return 0;
  }
  const exportDir = flags.export as string | undefined;
  if (!exportDir) {
    process.stderr.write(`error: --export is required\n${USAGE}`);
    return 2;
  }
  const quiet = flags.quiet as boolean;
  try {
    const backend = await useBackend(flags.backend as BackendName);
    if (!quiet) {
      process.stderr.write(`backend: ${backend}\n`);
    }
    const dataset = loadExport(exportDir);
    const report = trainCv(dataset, {
      folds: numberFlag('folds', flags.folds as string, true),
      seed: numberFlag('seed', flags.seed as string, true),
      epochs: numberFlag('epochs', flags.epochs as string, true),
      batchSize: numberFlag('batch-size', flags['batch-size'] as string, true),
      learningRate: numberFlag('learning-rate', flags['learning-rate'] as string, false),
      kernelLength: numberFlag('kernel-length', flags['kernel-length'] as string, true),
      pooling: flags.pooling as Pooling,
      validationFraction: numberFlag('val-fraction', flags['val-fraction'] as string, false),
      patience: numberFlag('patience', flags.patience as string, true),
      allowSmall: flags['allow-small'] as boolean,
      datasetName: (flags['dataset-name'] as string | undefined) ?? exportDir.replace(/\/+$/, '').split('/').pop() ?? '',
      log: quiet ? () => {} : (line) => process.stderr.write(`${line}\n`),
    });
    const json = reportToJson(report);
    if (flags.out) {
      fs.writeFileSync(flags.out as string, json);
    }
    process.stdout.write(json);
    return 0;
  } catch (err) {
    process.stderr.write(`error: ${(err as Error).message}\n`);
    return 1;
  }
}

if (require.main === module) {
  main(process.argv.slice(2)).then((code) => {
    process.exitCode = code;
  });
}
