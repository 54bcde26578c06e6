#!/usr/bin/env node
/**
 * embed-exporter: encode segment lists offline into the embedding exchange
 * format that the compliance engine consumes via `--provider precomputed:`.
 *
 * Subcommands:
 *   export   --model hash-dan:<dim>|xenova:<name> --pooling <mode> --in <tsv> --out <jsonl>
 *   segments --in <policy.txt> --doc-id <id> [--requirements <config.json>] --out <tsv>
 */
import { writeFileSync, readFileSync } from "node:fs";
import process from "node:process";

import { POOLING_MODES, type PoolingMode, createEncoder } from "./encoder.js";
import { exportSegments, readSegmentList } from "./exchange.js";
import { encodeSegmentList, segmentPolicy, segmentsFromRequirementConfig } from "./segments.js";

interface Flags {
  [name: string]: string;
}

function parseFlags(argv: string[]): Flags {
  const flags: Flags = {};
  for (let i = 0; i < argv.length; i += 2) {
    const name = argv[i];
    if (!name.startsWith("--") || i + 1 >= argv.length) {
      throw new Error(`expected '--flag value' pairs, got '${argv.slice(i).join(" ")}'`);
    }
    flags[name.slice(2)] = argv[i + 1];
  }
  return flags;
}

function requireFlag(flags: Flags, name: string): string {
  const value = flags[name];
  if (!value) throw new Error(`missing required flag --${name}`);
  return value;
}

async function cmdExport(flags: Flags): Promise<void> {
  const model = flags["model"] ?? "hash-dan:512";
  const pooling = (flags["pooling"] ?? "mean_tokens") as PoolingMode;
  if (!POOLING_MODES.includes(pooling)) {
    throw new Error(`unknown pooling '${pooling}'; expected one of ${POOLING_MODES.join(", ")}`);
  }
  const segments = readSegmentList(requireFlag(flags, "in"));
  const encoder = await createEncoder(model, pooling);
  const outPath = requireFlag(flags, "out");
  const n = await exportSegments(segments, encoder, outPath);
  process.stderr.write(`wrote ${n} vectors (dim ${encoder.dim}) to ${outPath}\n`);
}

async function cmdSegments(flags: Flags): Promise<void> {
  const records = [];
  if (flags["in"]) {
    const docId = flags["doc-id"] ?? "policy";
    records.push(...segmentPolicy(readFileSync(flags["in"], "utf8"), docId));
  }
  if (flags["requirements"]) {
    records.push(...segmentsFromRequirementConfig(flags["requirements"]));
  }
  if (records.length === 0) {
    throw new Error("segments needs --in <policy.txt> and/or --requirements <config.json>");
  }
  const outPath = requireFlag(flags, "out");
  writeFileSync(outPath, encodeSegmentList(records), "utf8");
  process.stderr.write(`wrote ${records.length} segments to ${outPath}\n`);
}

export async function main(argv: string[]): Promise<number> {
  const [command, ...rest] = argv;
  try {
    if (command === "export") {
      await cmdExport(parseFlags(rest));
      return 0;
    }
    if (command === "segments") {
      await cmdSegments(parseFlags(rest));
      return 0;
    }
    process.stderr.write(
      "usage: embed-exporter <export|segments> --flag value ...\n" +
        "  export   --model hash-dan:<dim> --pooling mean_tokens|mean_layers_tokens|encoder_native --in segs.tsv --out vecs.jsonl\n" +
        "  segments --in policy.txt --doc-id <id> [--requirements config.json] --out segs.tsv\n",
    );
    return 2;
  } catch (err) {
    process.stderr.write(`error: ${err instanceof Error ? err.message : String(err)}\n`);
    return 2;
  }
}

const invokedDirectly = process.argv[1]?.endsWith("cli.js") || process.argv[1]?.endsWith("cli.ts");
if (invokedDirectly) {
  main(process.argv.slice(2)).then((code) => {
    process.exitCode = code;
  });
}
