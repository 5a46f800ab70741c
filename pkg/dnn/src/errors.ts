/** Error taxonomy, mirroring the feature pipeline's exception names. */

/** Malformed or foreign bytes in a matrix file or export index. */
export class FormatError extends Error {
  constructor(message: string) {
    super(message);
    this.name = 'FormatError';
  }
}

/** Structurally valid input that cannot be learned from (empty classes, ...). */
export class DegenerateInputError extends Error {
  constructor(message: string) {
    super(message);
    this.name = 'DegenerateInputError';
  }
}

/** Bad caller-supplied argument (shape mismatch, out-of-range option). */
export class ConfigError extends Error {
  constructor(message: string) {
    super(message);
    this.name = 'ConfigError';
  }
}
