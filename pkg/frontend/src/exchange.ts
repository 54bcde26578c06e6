/**
 * The embedding exchange format and the segment-list input format.
 *
 * Exchange files are JSON Lines, one vector per line:
 *   {"key": string, "dim": number, "values": number[], "provider": string}
 * Segment lists are TSV: key TAB text (keys must be unique).
 */
import { readFileSync, writeFileSync } from "node:fs";

import type { Encoder } from "./encoder.js";

export interface SegmentRecord {
  key: string;
  text: string;
}

export interface ExchangeRecord {
  key: string;
  dim: number;
  values: number[];
  provider: string;
}

export function readSegmentList(path: string): SegmentRecord[] {
  const raw = readFileSync(path, "utf8");
  const records: SegmentRecord[] = [];
  const seen = new Set<string>();
  const lines = raw.split("\n");
  for (let i = 0; i < lines.length; i++) {
    const line = lines[i];
    if (!line.trim()) continue;
    const tab = line.indexOf("\t");
    if (tab < 1) {
      throw new Error(`${path}:${i + 1}: expected 'key TAB text'`);
    }
    const key = line.slice(0, tab);
    const text = line.slice(tab + 1).replace(/\\n/g, "\n");
    if (seen.has(key)) {
      throw new Error(`${path}:${i + 1}: duplicate segment key '${key}'`);
    }
    seen.add(key);
    records.push({ key, text });
  }
  if (records.length === 0) {
    throw new Error(`${path}: no segments found`);
  }
  return records;
}

export async function exportSegments(
  segments: SegmentRecord[],
  encoder: Encoder,
  outPath: string,
): Promise<number> {
  const lines: string[] = [];
  for (const segment of segments) {
    const vector = await encoder.encode(segment.text);
    if (vector.length !== encoder.dim) {
      throw new Error(
        `encoder returned ${vector.length} dims for '${segment.key}', expected ${encoder.dim}`,
      );
    }
    const record: ExchangeRecord = {
      key: segment.key,
      dim: vector.length,
      values: Array.from(vector),
      provider: encoder.providerId,
    };
    lines.push(JSON.stringify(record));
  }
  writeFileSync(outPath, lines.join("\n") + "\n", "utf8");
  return lines.length;
}

export function readExchangeFile(path: string): ExchangeRecord[] {
  const raw = readFileSync(path, "utf8");
  const records: ExchangeRecord[] = [];
  const seen = new Set<string>();
  let dim: number | null = null;
  const lines = raw.split("\n");
  for (let i = 0; i < lines.length; i++) {
    const line = lines[i].trim();
    if (!line) continue;
    const record = JSON.parse(line) as ExchangeRecord;
    if (seen.has(record.key)) {
      throw new Error(`${path}:${i + 1}: duplicate key '${record.key}'`);
    }
    seen.add(record.key);
    if (record.values.length !== record.dim) {
      throw new Error(`${path}:${i + 1}: dim field disagrees with values length`);
    }
    if (dim === null) {
      dim = record.dim;
    } else if (record.dim !== dim) {
      throw new Error(`${path}:${i + 1}: inconsistent dimension ${record.dim} != ${dim}`);
    }
    records.push(record);
  }
  return records;
}
