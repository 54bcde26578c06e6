/**
 * Segment encoders.
 *
 * The built-in encoder is a deterministic hash-projection network in the
 * deep-averaging style: token (and bigram) vectors are derived from hashes,
 * averaged, and passed through a fixed tanh layer. It needs no model
 * download, so exports are reproducible anywhere. A transformer backend via
 * `@xenova/transformers` can be enabled by installing that package; it is
 * loaded dynamically and never required at build time.
 */
import { createHash } from "node:crypto";

export type PoolingMode = "mean_tokens" | "mean_layers_tokens" | "encoder_native";

export const POOLING_MODES: PoolingMode[] = [
  "mean_tokens",
  "mean_layers_tokens",
  "encoder_native",
];

export interface Encoder {
  readonly providerId: string;
  readonly dim: number;
  encode(text: string): Promise<Float64Array>;
}

/** Deterministic PRNG seeded from a string via SHA-256. */
function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) >>> 0;
    let t = a;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

function seedFrom(text: string): number {
  const digest = createHash("sha256").update(text, "utf8").digest();
  return digest.readUInt32BE(0);
}

/** Unit-norm pseudo-random vector, stable across runs and platforms. */
function hashVector(key: string, dim: number): Float64Array {
  const rand = mulberry32(seedFrom(key));
  const v = new Float64Array(dim);
  let norm = 0;
  for (let i = 0; i < dim; i++) {
    // Box-Muller for a rotation-invariant direction distribution.
    const u1 = Math.max(rand(), 1e-12);
    const u2 = rand();
    v[i] = Math.sqrt(-2 * Math.log(u1)) * Math.cos(2 * Math.PI * u2);
    norm += v[i] * v[i];
  }
  norm = Math.sqrt(norm) || 1;
  for (let i = 0; i < dim; i++) v[i] /= norm;
  return v;
}

export function tokenize(text: string): string[] {
  const matches = text.toLowerCase().match(/[a-z0-9]+/g);
  return matches ?? [];
}

function meanInto(target: Float64Array, vectors: Float64Array[]): void {
  target.fill(0);
  if (vectors.length === 0) return;
  for (const v of vectors) {
    for (let i = 0; i < target.length; i++) target[i] += v[i];
  }
  for (let i = 0; i < target.length; i++) target[i] /= vectors.length;
}

export class HashDanEncoder implements Encoder {
  readonly dim: number;
  readonly pooling: PoolingMode;
  readonly providerId: string;
  private readonly tokenCache = new Map<string, Float64Array>();
  private readonly layerWeights: Float64Array[];

  constructor(dim: number, pooling: PoolingMode) {
    if (!Number.isInteger(dim) || dim < 2 || dim > 4096) {
      throw new Error(`encoder dimension must be an integer in [2, 4096], got ${dim}`);
    }
    this.dim = dim;
    this.pooling = pooling;
    this.providerId = `hash-dan:${dim}|pooling=${pooling}`;
    // A fixed sparse projection: each output unit mixes three input units.
    this.layerWeights = [];
    for (let o = 0; o < dim; o++) {
      this.layerWeights.push(hashVector(`dan-layer:${o}`, 3));
    }
  }

  private tokenVector(token: string): Float64Array {
    let v = this.tokenCache.get(token);
    if (!v) {
      v = hashVector(`token:${token}`, this.dim);
      this.tokenCache.set(token, v);
    }
    return v;
  }

  /** tanh projection of the averaged representation (the "deep" layer). */
  private danLayer(pooled: Float64Array): Float64Array {
    const out = new Float64Array(this.dim);
    for (let o = 0; o < this.dim; o++) {
      const w = this.layerWeights[o];
      const a = pooled[o];
      const b = pooled[(o * 7 + 1) % this.dim];
      const c = pooled[(o * 13 + 5) % this.dim];
      out[o] = Math.tanh(3.0 * (w[0] * a + w[1] * b + w[2] * c));
    }
    return out;
  }

  async encode(text: string): Promise<Float64Array> {
    const tokens = tokenize(text);
    const unigrams = tokens.map((t) => this.tokenVector(t));
    const bigrams: Float64Array[] = [];
    for (let i = 0; i + 1 < tokens.length; i++) {
      bigrams.push(this.tokenVector(`${tokens[i]}_${tokens[i + 1]}`));
    }
    const tokenMean = new Float64Array(this.dim);
    meanInto(tokenMean, unigrams);
    if (this.pooling === "mean_tokens") {
      return tokenMean;
    }
    const combined = new Float64Array(this.dim);
    meanInto(combined, unigrams.concat(bigrams));
    const deep = this.danLayer(combined);
    if (this.pooling === "encoder_native") {
      return deep;
    }
    // mean_layers_tokens: average the shallow and deep token summaries.
    const out = new Float64Array(this.dim);
    for (let i = 0; i < this.dim; i++) out[i] = (tokenMean[i] + deep[i]) / 2;
    return out;
  }
}

export class TransformerEncoder implements Encoder {
  readonly providerId: string;
  readonly dim: number;
  private readonly pipe: any;
  private readonly pooling: PoolingMode;

  private constructor(model: string, pooling: PoolingMode, pipe: any, dim: number) {
    this.providerId = `xenova:${model}|pooling=${pooling}`;
    this.pooling = pooling;
    this.pipe = pipe;
    this.dim = dim;
  }

  static async create(model: string, pooling: PoolingMode): Promise<TransformerEncoder> {
    let transformers: any;
    try {
      transformers = await import("@xenova/transformers" as string);
    } catch {
      throw new Error(
        "the transformer backend needs the optional '@xenova/transformers' package " +
          "(npm install @xenova/transformers) and locally available model weights",
      );
    }
    const pipe = await transformers.pipeline("feature-extraction", model);
    const probe = await pipe("dimension probe", { pooling: "mean", normalize: false });
    const dim = probe.dims[probe.dims.length - 1];
    return new TransformerEncoder(model, pooling, pipe, dim);
  }

  async encode(text: string): Promise<Float64Array> {
    const output = await this.pipe(text, { pooling: "mean", normalize: false });
    return Float64Array.from(output.data as number[]);
  }
}

export async function createEncoder(model: string, pooling: PoolingMode): Promise<Encoder> {
  const [kind, arg] = splitOnce(model, ":");
  if (kind === "hash-dan") {
    return new HashDanEncoder(Number(arg ?? "512"), pooling);
  }
  if (kind === "xenova") {
    if (!arg) throw new Error("xenova backend needs a model name: xenova:<model>");
    return TransformerEncoder.create(arg, pooling);
  }
  throw new Error(`unknown model '${model}'; expected hash-dan:<dim> or xenova:<name>`);
}

function splitOnce(value: string, sep: string): [string, string | undefined] {
  const idx = value.indexOf(sep);
  return idx < 0 ? [value, undefined] : [value.slice(0, idx), value.slice(idx + 1)];
}
