// Spawns the Python API server on the UI fixture dump for the duration of
// the test run. Each run gets a fresh temporary decision log so accept and
// reject flows start from a clean slate.

import { spawn, type ChildProcess } from "node:child_process";
import { mkdtempSync } from "node:fs";
import { tmpdir } from "node:os";
import { dirname, join, resolve } from "node:path";
import { fileURLToPath } from "node:url";

import { API_BASE, TEST_PORT } from "./config.js";

const here = dirname(fileURLToPath(import.meta.url));

async function waitForServer(child: ChildProcess, url: string, timeoutMs = 60_000) {
  const deadline = Date.now() + timeoutMs;
  let lastError: unknown = null;
  while (Date.now() < deadline) {
    if (child.exitCode !== null) {
      throw new Error(`API server exited early with code ${child.exitCode}`);
    }
    try {
      const response = await fetch(url);
      if (response.ok) return;
    } catch (error) {
      lastError = error;
    }
    await new Promise((tick) => setTimeout(tick, 200));
  }
  throw new Error(`API server did not come up at ${url}: ${lastError}`);
}

export default async function setup(): Promise<() => void> {
  const dumpPath = join(here, "fixtures", "ui_dump.json");
  const decisionsPath = join(mkdtempSync(join(tmpdir(), "issuemap-ui-")), "decisions.ndjson");
  const child = spawn(
    "python3",
    [
      "-m",
      "issuemap.cli",
      "serve",
      "--dump",
      dumpPath,
      "--decisions",
      decisionsPath,
      "--listen",
      `127.0.0.1:${TEST_PORT}`,
    ],
    {
      stdio: ["ignore", "pipe", "pipe"],
      env: {
        ...process.env,
        // works from a fresh checkout even without `pip install -e .`
        PYTHONPATH: resolve(here, "..", "..", "src"),
      },
    },
  );
  const stderr: string[] = [];
  child.stderr?.on("data", (chunk) => stderr.push(String(chunk)));

  try {
    await waitForServer(child, `${API_BASE}/stats`);
  } catch (error) {
    child.kill("SIGKILL");
    throw new Error(`${error}\nserver stderr:\n${stderr.join("")}`);
  }

  return () => {
    child.kill("SIGTERM");
  };
}
