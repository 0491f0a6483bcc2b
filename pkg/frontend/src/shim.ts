/**
 * Reference wire-protocol tester over the host JavaScript regex engine.
 *
 * Reads one JSON request per line on stdin, answers one JSON response per
 * line on stdout, and never crashes on a bad pattern. Matching runs inside a
 * worker thread so the per-request timeout_ms can be enforced against the
 * engine's own catastrophic backtracking: an overrunning worker is
 * terminated (status "timeout") and a fresh one replaces it.
 *
 * A {"op":"hello"} line answers {"hello":1}. A malformed line answers
 * {"id":-1,"status":"error"} and processing continues. Requests are served
 * strictly one at a time, in order; concurrency belongs to the orchestrator.
 *
 * REGEXPASSPORT_DETERMINISTIC=1 reports elapsed_us as 0 so conformance
 * fixtures can compare bytes.
 */

import * as readline from "readline";
import { Worker, isMainThread, parentPort } from "worker_threads";

import {
  MatchResponse,
  decodeB64,
  formatResponse,
  partialMatch,
} from "./protocol";

const PROTOCOL_VERSION = 1;

interface WorkerJob {
  pattern: string;
  input: string;
}

interface WorkerReply {
  status: "ok" | "syntax_error";
  matched: boolean;
  span: [number, number] | null;
  captures: ([number, number] | null)[];
}

if (!isMainThread) {
  // worker: evaluate one match per message
  parentPort!.on("message", (job: WorkerJob) => {
    let reply: WorkerReply;
    try {
      const outcome = partialMatch(job.pattern, job.input);
      reply = { status: "ok", ...outcome };
    } catch {
      reply = { status: "syntax_error", matched: false, span: null, captures: [] };
    }
    parentPort!.postMessage(reply);
  });
} else {
  main();
}

function main(): void {
  const deterministic = process.env.REGEXPASSPORT_DETERMINISTIC === "1";
  let worker = new Worker(__filename);
  worker.unref();

  const out = (line: string) => process.stdout.write(line + "\n");

  const runMatch = (job: WorkerJob, timeoutMs: number): Promise<{
    reply: WorkerReply | null;
  }> =>
    new Promise((resolve) => {
      const timer = setTimeout(() => {
        // the engine is stuck inside a match; only termination helps
        void worker.terminate();
        worker = new Worker(__filename);
        worker.unref();
        resolve({ reply: null });
      }, timeoutMs);
      worker.once("message", (reply: WorkerReply) => {
        clearTimeout(timer);
        resolve({ reply });
      });
      worker.postMessage(job);
    });

  const queue: string[] = [];
  let busy = false;

  const serveNext = async (): Promise<void> => {
    if (busy) {
      return;
    }
    busy = true;
    while (queue.length > 0) {
      const line = queue.shift()!;
      await serveLine(line);
    }
    busy = false;
    if (closed && queue.length === 0) {
      finish();
    }
  };

  const serveLine = async (raw: string): Promise<void> => {
    const line = raw.trim();
    if (line === "") {
      return;
    }
    let request: Record<string, unknown>;
    try {
      request = JSON.parse(line);
      if (typeof request !== "object" || request === null) {
        throw new Error("not an object");
      }
    } catch {
      out('{"id":-1,"status":"error"}');
      return;
    }
    if (request.op === "hello") {
      out(JSON.stringify({ hello: PROTOCOL_VERSION }));
      return;
    }
    if (
      request.op !== "partial_match" ||
      typeof request.id !== "number" ||
      typeof request.pattern_b64 !== "string" ||
      typeof request.input_b64 !== "string"
    ) {
      out('{"id":-1,"status":"error"}');
      return;
    }
    const id = request.id;
    const timeoutMs =
      typeof request.timeout_ms === "number" && request.timeout_ms > 0
        ? request.timeout_ms
        : 2000;
    let pattern: string;
    let input: string;
    try {
      pattern = decodeB64(request.pattern_b64);
      input = decodeB64(request.input_b64);
    } catch {
      out('{"id":-1,"status":"error"}');
      return;
    }
    const started = process.hrtime.bigint();
    const { reply } = await runMatch({ pattern, input }, timeoutMs);
    const elapsedUs = deterministic
      ? 0
      : Number((process.hrtime.bigint() - started) / 1000n);
    let response: MatchResponse;
    if (reply === null) {
      response = {
        id,
        status: "timeout",
        matched: false,
        span: null,
        captures: [],
        elapsed_us: elapsedUs,
      };
    } else {
      response = {
        id,
        status: reply.status,
        matched: reply.matched,
        span: reply.span,
        captures: reply.captures,
        elapsed_us: elapsedUs,
      };
    }
    out(formatResponse(response));
  };

  let closed = false;
  const finish = (): void => {
    void worker.terminate();
  };

  const rl = readline.createInterface({ input: process.stdin, terminal: false });
  rl.on("line", (line) => {
    queue.push(line);
    void serveNext();
  });
  rl.on("close", () => {
    closed = true;
    if (!busy && queue.length === 0) {
      finish();
    }
  });
}
