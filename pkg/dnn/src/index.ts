export { BackendName, useBackend } from './backend';
export { MAGIC, Matrix, readMatrix, VERSION, writeMatrix } from './binfmt';
export {
  EXPORT_FORMAT,
  FEATURE_COLS,
  loadExport,
  padBatch,
  PaddedBatch,
  SequenceDataset,
  SequenceSample,
  syntheticDataset,
  SyntheticOptions,
} from './dataset';
export { ConfigError, DegenerateInputError, FormatError } from './errors';
export { foldSplit, stratifiedFolds } from './folds';
export {
  CONV1_FILTERS,
  CONV2_FILTERS,
  HIDDEN_SIZE,
  LSTM_LAYERS,
  ModelOptions,
  POOLED_SIZE,
  Pooling,
  SequenceClassifier,
  tensorsFromBatch,
} from './model';
export { SplitMix64 } from './rng';
export {
  CVReport,
  CvOptions,
  EpochStat,
  errorRate,
  FoldResult,
  reportToJson,
  summarizeFolds,
  trainCv,
  trainModel,
  TrainOptions,
  TrainResult,
} from './train';
