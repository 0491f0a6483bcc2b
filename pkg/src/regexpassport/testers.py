"""Out-of-process regex testers over a line-delimited JSON protocol.

Wire format (UTF-8, one object per line, field order fixed):

    request:  {"id":<int>,"op":"partial_match","pattern_b64":"<b64>",
               "input_b64":"<b64>","timeout_ms":<int>}
    response: {"id":<int>,"status":"ok"|"syntax_error"|"timeout"|"error",
               "matched":<bool>,"span":[s,e]|null,
               "captures":[[s,e]|null,...],"elapsed_us":<int>}

Pattern and input travel base64-encoded so newline-bearing corpora stay
line-safe; spans are unit offsets in Unicode scalar values regardless of the
tester's internal string representation; capture index 0 is omitted (the
span field covers it). A handshake precedes use: the orchestrator sends
{"op":"hello"} and the tester must answer {"hello":1} within five seconds.

A tester that stops answering is killed and respawned; its pending request
becomes a subject-failure observation and never corrupts other subjects'
results. At most one request is in flight per handle.
"""

from __future__ import annotations

import base64
import json
import logging
import queue
import subprocess
import threading
import time
from dataclasses import dataclass
from typing import Optional

log = logging.getLogger(__name__)

from .dialects import Dialect
from .differential import (
    OBS_FAILURE,
    OBS_OK,
    OBS_SYNTAX_ERROR,
    Observation,
)

PROTOCOL_VERSION = 1
HANDSHAKE_TIMEOUT = 5.0

STATE_STARTING = "starting"
STATE_READY = "ready"
STATE_BUSY = "busy"
STATE_DEAD = "dead"


class HandshakeTimeout(RuntimeError):
    pass


class VersionMismatch(RuntimeError):
    pass


class TesterDead(RuntimeError):
    pass


def _b64(text: str) -> str:
    return base64.b64encode(text.encode("utf-8")).decode("ascii")


def encode_request(request_id: int, pattern: str, text: str,
                   timeout_ms: int) -> bytes:
    record = {
        "id": request_id,
        "op": "partial_match",
        "pattern_b64": _b64(pattern),
        "input_b64": _b64(text),
        "timeout_ms": timeout_ms,
    }
    return json.dumps(record, separators=(",", ":")).encode("utf-8") + b"\n"


def encode_response(request_id: int, status: str, matched: bool = False,
                    span: Optional[tuple[int, int]] = None,
                    captures: tuple = (), elapsed_us: int = 0) -> bytes:
    record = {
        "id": request_id,
        "status": status,
        "matched": matched,
        "span": list(span) if span is not None else None,
        "captures": [list(c) if c is not None else None for c in captures],
        "elapsed_us": elapsed_us,
    }
    return json.dumps(record, separators=(",", ":")).encode("utf-8") + b"\n"


def decode_response(line: bytes) -> dict:
    record = json.loads(line.decode("utf-8"))
    if not isinstance(record, dict) or "id" not in record:
        raise ValueError("malformed response")
    return record


class TesterHandle:
    """One tester process; dead handles are replaced, never reused."""

    __test__ = False  # not a pytest class despite the Test* prefix

    def __init__(self, dialect: Dialect, cmd: list[str], name: str = ""):
        self.dialect = dialect
        self.cmd = list(cmd)
        self.name = name or f"tester-{dialect.value}"
        self.state = STATE_STARTING
        self.requests_sent = 0
        self._proc: Optional[subprocess.Popen] = None
        self._lines: "queue.Queue[Optional[bytes]]" = queue.Queue()
        self._lock = threading.Lock()
        self._next_id = 1

    # -- lifecycle ----------------------------------------------------------

    def start(self) -> None:
        self._proc = subprocess.Popen(
            self.cmd, stdin=subprocess.PIPE, stdout=subprocess.PIPE,
            stderr=subprocess.DEVNULL,
        )
        self._lines = queue.Queue()
        reader = threading.Thread(target=self._read_loop, daemon=True)
        reader.start()
        self.state = STATE_STARTING

    def _read_loop(self) -> None:
        proc = self._proc
        assert proc is not None and proc.stdout is not None
        for line in proc.stdout:
            self._lines.put(line)
        self._lines.put(None)  # EOF marker

    def kill(self) -> None:
        self.state = STATE_DEAD
        if self._proc is not None and self._proc.poll() is None:
            self._proc.kill()
            self._proc.wait()

    def _send(self, data: bytes) -> None:
        assert self._proc is not None and self._proc.stdin is not None
        try:
            self._proc.stdin.write(data)
            self._proc.stdin.flush()
        except (BrokenPipeError, OSError) as exc:
            self.kill()
            raise TesterDead(str(exc)) from exc

    def _read_line(self, deadline: float) -> Optional[bytes]:
        remaining = deadline - time.monotonic()
        if remaining <= 0:
            return None
        try:
            return self._lines.get(timeout=remaining)
        except queue.Empty:
            return None

    # -- protocol -----------------------------------------------------------

    def handshake(self) -> int:
        """Returns the protocol version or marks the handle dead."""
        if self._proc is None:
            self.start()
        self._send(b'{"op":"hello"}\n')
        deadline = time.monotonic() + HANDSHAKE_TIMEOUT
        line = self._read_line(deadline)
        if line is None:
            self.kill()
            raise HandshakeTimeout(self.name)
        try:
            reply = json.loads(line)
            version = reply["hello"]
        except (ValueError, KeyError, TypeError):
            self.kill()
            raise VersionMismatch(f"{self.name}: bad hello {line!r}") from None
        if version != PROTOCOL_VERSION:
            self.kill()
            raise VersionMismatch(f"{self.name}: protocol {version}")
        self.state = STATE_READY
        return version

    def _respawn(self) -> None:
        self.kill()
        self.start()
        try:
            self.handshake()
        except (HandshakeTimeout, VersionMismatch, TesterDead):
            self.state = STATE_DEAD

    def request_match(self, pattern: str, text: str,
                      timeout: float = 2.0) -> Observation:
        """One partial-match request; a hung tester is killed and respawned
        and the observation reports subject-failure."""
        with self._lock:
            if self.state == STATE_DEAD:
                self._respawn()
                if self.state == STATE_DEAD:
                    raise TesterDead(self.name)
            if self.state != STATE_READY:
                raise TesterDead(f"{self.name} not ready ({self.state})")
            self.state = STATE_BUSY
            try:
                return self._request_locked(pattern, text, timeout)
            finally:
                if self.state == STATE_BUSY:
                    self.state = STATE_READY

    def _request_locked(self, pattern: str, text: str,
                        timeout: float) -> Observation:
        request_id = self._next_id
        self._next_id += 1
        self.requests_sent += 1
        try:
            self._send(encode_request(request_id, pattern, text,
                                      int(timeout * 1000)))
        except TesterDead:
            self._respawn()
            return Observation(self.name, OBS_FAILURE, dialect=self.dialect,
                               detail="tester died on send")
        # the shim enforces timeout_ms itself; the wall deadline is a backstop
        deadline = time.monotonic() + timeout + 2.0
        while True:
            line = self._read_line(deadline)
            if line is None:
                self._respawn()
                return Observation(self.name, OBS_FAILURE, dialect=self.dialect,
                                   detail="tester hung; killed and respawned")
            try:
                record = decode_response(line)
            except ValueError:
                log.warning("%s: discarding malformed response line", self.name)
                continue
            if record.get("id") != request_id:
                log.warning("%s: discarding response for stale id %r",
                            self.name, record.get("id"))
                continue
            return self._observation(record)

    def _observation(self, record: dict) -> Observation:
        status = record.get("status")
        elapsed = record.get("elapsed_us", 0) / 1e6
        if status == "ok":
            span = tuple(record["span"]) if record.get("span") else None
            captures = tuple(
                tuple(c) if c is not None else None
                for c in record.get("captures", [])
            )
            return Observation(self.name, OBS_OK, bool(record.get("matched")),
                               span, captures, elapsed, self.dialect)
        if status == "syntax_error":
            return Observation(self.name, OBS_SYNTAX_ERROR, elapsed=elapsed,
                               dialect=self.dialect)
        return Observation(self.name, OBS_FAILURE, elapsed=elapsed,
                           dialect=self.dialect, detail=str(status))


class TesterSubject:
    """Adapter exposing a TesterHandle as a differential subject."""

    __test__ = False

    def __init__(self, handle: TesterHandle):
        self.handle = handle
        self.name = handle.name
        self.dialect = handle.dialect

    def evaluate(self, pattern: str, text: str, timeout: float) -> Observation:
        try:
            return self.handle.request_match(pattern, text, timeout)
        except TesterDead as exc:
            return Observation(self.name, OBS_FAILURE, dialect=self.dialect,
                               detail=str(exc))


class Orchestrator:
    """Owns all tester handles; callers funnel requests through it."""

    def __init__(self):
        self.handles: dict[str, TesterHandle] = {}

    def add_tester(self, dialect: Dialect, cmd: list[str],
                   name: str = "") -> TesterHandle:
        handle = TesterHandle(dialect, cmd, name)
        handle.start()
        handle.handshake()
        self.handles[handle.name] = handle
        return handle

    def subjects(self) -> list[TesterSubject]:
        return [TesterSubject(h) for h in self.handles.values()]

    def shutdown(self) -> None:
        for handle in self.handles.values():
            handle.kill()
