/**
 * Builders for segment lists, matching the engine's conventions: policies
 * split into paragraphs on blank lines and keyed `policy:<doc>:<index>`;
 * requirement-config segments keyed `law:<LAW>:<segment_id>`.
 */
import { readFileSync } from "node:fs";

import type { SegmentRecord } from "./exchange.js";

export function segmentPolicy(text: string, docId: string): SegmentRecord[] {
  const paragraphs = text
    .split(/(?:[ \t\r\f\v]*\n){2,}/)
    .map((p) => p.trim())
    .filter((p) => p.length > 0);
  return paragraphs.map((p, i) => ({ key: `policy:${docId}:${i}`, text: p }));
}

interface RequirementConfig {
  version: number;
  law: string;
  segments: { id: string; requirement: string; text: string }[];
}

export function segmentsFromRequirementConfig(path: string): SegmentRecord[] {
  const config = JSON.parse(readFileSync(path, "utf8")) as RequirementConfig;
  if (config.version !== 1 || !Array.isArray(config.segments)) {
    throw new Error(`${path}: not a version-1 requirement config`);
  }
  return config.segments.map((s) => ({
    key: `law:${config.law}:${s.id}`,
    text: s.text,
  }));
}

export function encodeSegmentList(records: SegmentRecord[]): string {
  return (
    records
      .map((r) => `${r.key}\t${r.text.replace(/\n/g, "\\n")}`)
      .join("\n") + "\n"
  );
}
