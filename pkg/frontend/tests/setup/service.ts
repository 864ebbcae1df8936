import { spawn, type ChildProcess } from "node:child_process";
import type { GlobalSetupContext } from "vitest/node";

const PORT = 8741;
const BASE = `http://127.0.0.1:${PORT}`;

let proc: ChildProcess;

async function waitForService(timeoutMs = 30000): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  while (Date.now() < deadline) {
    try {
      const resp = await fetch(`${BASE}/api/datasets`);
      if (resp.ok) return;
    } catch {
      // not up yet
    }
    await new Promise((r) => setTimeout(r, 200));
  }
  throw new Error("service did not come up");
}

export default async function setup({ provide }: GlobalSetupContext): Promise<() => void> {
  proc = spawn(
    "python3",
    ["-m", "uvicorn", "forestmap.server:app", "--port", String(PORT), "--log-level", "warning"],
    { stdio: "inherit" },
  );
  await waitForService();

  // one shared Glass session with default training parameters
  const resp = await fetch(`${BASE}/api/sessions`, {
    method: "POST",
    headers: { "content-type": "application/json" },
    body: JSON.stringify({ builtin: "glass" }),
  });
  if (!resp.ok) throw new Error(`session setup failed: ${await resp.text()}`);
  const { session_id } = (await resp.json()) as { session_id: string };
  // warm the heavy caches so individual tests stay snappy
  await fetch(`${BASE}/api/sessions/${session_id}/overview`);

  provide("base", BASE);
  provide("sid", session_id);
  return () => {
    proc.kill();
  };
}

declare module "vitest" {
  export interface ProvidedContext {
    base: string;
    sid: string;
  }
}
