// @vitest-environment node
// Contract tests against a live local service: generate a snapshot, start
// `listcurator serve`, and drive the real HTTP API end to end.
import { type ChildProcess, spawn, spawnSync } from "node:child_process";
import { mkdtempSync, readFileSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiClient, ApiError } from "../src/api.js";

const PORT = 8907;
const client = new ApiClient(`http://127.0.0.1:${PORT}`);
let server: ChildProcess | null = null;

async function waitForServer(): Promise<void> {
  for (let attempt = 0; attempt < 120; attempt++) {
    try {
      await client.getSession();
      return;
    } catch (err) {
      if (err instanceof ApiError) return; // server is up, any HTTP reply counts
    }
    await new Promise((resolve) => setTimeout(resolve, 500));
  }
  throw new Error("service did not come up");
}

beforeAll(async () => {
  const dir = mkdtempSync(join(tmpdir(), "curator-ui-"));
  const snap = join(dir, "snap.jsonl");
  const labelsFile = join(dir, "labels.csv");
  const generated = spawnSync("python3", [
    "-m", "listcurator", "generate",
    "--users", "200", "--communities", "80,120",
    "--p-in", "0.2", "--p-out", "0.01",
    "--mention-rate", "1.2", "--retweet-rate", "0.8",
    "--lists", "30", "--list-fidelity", "0.9",
    "--seed", "5", "--out", snap, "--labels-out", labelsFile,
  ]);
  expect(generated.status).toBe(0);

  const seeds = readFileSync(labelsFile, "utf-8")
    .trim()
    .split("\n")
    .slice(1)
    .map((line) => line.split(","))
    .filter(([, community]) => community === "0")
    .slice(0, 8)
    .map(([user]) => user);
  const seedsFile = join(dir, "seeds.txt");
  writeFileSync(seedsFile, seeds.join("\n") + "\n");

  server = spawn(
    "python3",
    ["-m", "listcurator", "serve", "--snapshot", snap, "--seeds", seedsFile,
     "--port", String(PORT), "--min-tweets", "1"],
    { stdio: "ignore" },
  );
  await waitForServer();
});

afterAll(() => {
  server?.kill();
});

describe("live service contract", () => {
  it("accept-5-then-iterate advances iteration and core size", async () => {
    const before = await client.getSession();
    expect(before.iteration).toBe(0);
    expect(before.core_size).toBe(8);

    await expect(client.getRecommendations()).rejects.toMatchObject({ status: 409 });

    const batch = await client.iterate();
    expect(batch.items).toHaveLength(50);

    const accepted = batch.items.slice(0, 5).map((i) => i.user);
    const afterSelect = await client.select(accepted);
    expect(afterSelect.core_size).toBe(before.core_size + 5);

    const next = await client.iterate();
    expect(next.items.length).toBeGreaterThan(0);
    expect(next.items.map((i) => i.user)).not.toEqual(expect.arrayContaining(accepted));

    const after = await client.getSession();
    expect(after.iteration).toBe(1);
    expect(after.core_size).toBe(before.core_size + 5);
  });

  it("rejects unknown users with the offending ids echoed", async () => {
    await expect(client.select(["nobody-at-all"])).rejects.toMatchObject({
      status: 400,
      message: expect.stringContaining("nobody-at-all"),
    });
  });

  it("switches across all four graph views without error", async () => {
    for (const view of ["friend", "mention", "retweet", "colist"]) {
      const graph = await client.getGraph(view);
      expect(graph.view).toBe(view);
      expect(graph.nodes.length).toBeGreaterThan(0);
      const ids = new Set(graph.nodes.map((n) => n.id));
      for (const edge of graph.edges) {
        expect(ids.has(edge.source) && ids.has(edge.target)).toBe(true);
      }
    }
    await expect(client.getGraph("hashtag")).rejects.toMatchObject({ status: 400 });
  });
});
