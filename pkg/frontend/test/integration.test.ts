/**
 * Integration with the compliance engine, exercised purely through its
 * external surfaces: the `lexcheck` CLI and the documented file formats
 * (segment keys, the exchange JSONL, side-loaded predictions, reports).
 */
import { execFileSync, spawnSync } from "node:child_process";
import { mkdtempSync, writeFileSync, readFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { describe, expect, it } from "vitest";

import { createEncoder } from "../src/encoder.js";
import { exportSegments } from "../src/exchange.js";
import { segmentPolicy, segmentsFromRequirementConfig } from "../src/segments.js";

const engineAvailable = spawnSync("lexcheck", ["--help"], { encoding: "utf8" }).status === 0;
const maybe = engineAvailable ? describe : describe.skip;

function enginePath(script: string): string {
  return execFileSync("python3", ["-c", script], { encoding: "utf8" }).trim();
}

const POLICY = [
  "We collect your name, email address and device information when you register.",
  "We retain personal data only for the period necessary for the stated purposes and erase it afterwards.",
  "You may request access to your personal data and have inaccurate records corrected.",
].join("\n\n");

maybe("engine integration", () => {
  it("an exported file drives `lexcheck check --provider precomputed:`", async () => {
    const dir = mkdtempSync(join(tmpdir(), "exporter-engine-"));
    const policyPath = join(dir, "policy.txt");
    writeFileSync(policyPath, POLICY, "utf8");

    const requirementConfig = enginePath(
      "from lexcheck.preprocess import data_path; print(data_path('requirements_gdpr.json'))",
    );
    const segments = [
      ...segmentPolicy(POLICY, "policy"),
      ...segmentsFromRequirementConfig(requirementConfig),
    ];
    const vectors = join(dir, "vectors.jsonl");
    await exportSegments(segments, await createEncoder("hash-dan:128", "mean_layers_tokens"), vectors);

    // Pin labels through the side-load format so no trained models are needed.
    const predictions = join(dir, "preds.tsv");
    writeFileSync(
      predictions,
      "policy\t0\tFirstPartyCollectionUse\npolicy\t1\tDataRetention\npolicy\t2\tUserAccessEditDeletion\n",
      "utf8",
    );

    const report = join(dir, "report.json");
    execFileSync("lexcheck", [
      "check", "--policy", policyPath, "--law", "gdpr",
      "--predictions", predictions, "--provider", `precomputed:${vectors}`,
      "--out", report,
    ]);
    const payload = JSON.parse(readFileSync(report, "utf8"));
    const names = payload.requirements.map((r: { requirement: string }) => r.requirement);
    expect(names).toEqual(["GDPR1", "GDPR2", "GDPR3", "GDPR4"]);
    // Vectors resolved by key: no zero-vector warnings for mapped segments.
    const zeroWarnings = payload.warnings.filter((w: string) => w.includes("zero vector"));
    expect(zeroWarnings).toEqual([]);
  });

  it("self-cosine through the engine's loader is 1.0 for every key", async () => {
    const dir = mkdtempSync(join(tmpdir(), "exporter-loader-"));
    const vectors = join(dir, "vectors.jsonl");
    const segments = [
      { key: "s1", text: "retention bounded by necessity" },
      { key: "s2", text: "users can withdraw consent" },
      { key: "s3", text: "security measures protect data" },
    ];
    await exportSegments(segments, await createEncoder("hash-dan:512", "encoder_native"), vectors);
    const script = [
      "import json, sys",
      "from lexcheck.similarity import load_precomputed, cosine",
      `vecs = load_precomputed(${JSON.stringify(vectors)})`,
      "out = {k: cosine(v, v).value for k, v in vecs.items()}",
      "dims = {v.dimension for v in vecs.values()}",
      "print(json.dumps({'cosines': out, 'dims': sorted(dims)}))",
    ].join("\n");
    const result = JSON.parse(execFileSync("python3", ["-c", script], { encoding: "utf8" }));
    expect(result.dims).toEqual([512]);
    for (const key of ["s1", "s2", "s3"]) {
      expect(Math.abs(result.cosines[key] - 1.0)).toBeLessThanOrEqual(1e-9);
    }
  });

  it("text-keyed exports drive `lexcheck eval-sts`", async () => {
    const dir = mkdtempSync(join(tmpdir(), "exporter-sts-"));
    const sentences = [
      ["personal data retention is limited", "personal data retention is limited", 5],
      ["personal data retention is limited", "retention of personal data is bounded", 4],
      ["users may withdraw their consent", "consent can be withdrawn by users", 4],
      ["users may withdraw their consent", "the weather is pleasant today", 0],
      ["security safeguards protect information", "encryption protects stored information", 3],
      ["security safeguards protect information", "our offices close on holidays", 0],
    ] as const;
    const stsPath = join(dir, "sts.tsv");
    writeFileSync(
      stsPath,
      sentences.map(([a, b, gold]) => `${gold}\t${a}\t${b}`).join("\n") + "\n",
      "utf8",
    );
    const unique = [...new Set(sentences.flatMap(([a, b]) => [a, b]))];
    const vectors = join(dir, "vectors.jsonl");
    await exportSegments(
      unique.map((text) => ({ key: text, text })),
      await createEncoder("hash-dan:256", "mean_tokens"),
      vectors,
    );
    const out = execFileSync(
      "lexcheck",
      ["eval-sts", "--sts", stsPath, "--provider", `precomputed:${vectors}`],
      { encoding: "utf8" },
    );
    expect(out).toMatch(/pearson\t/);
    expect(out).toMatch(/n\t6/);
    const pearson = Number(out.match(/pearson\t([-\d.]+)/)![1]);
    expect(pearson).toBeGreaterThan(0.5);
  });
});
