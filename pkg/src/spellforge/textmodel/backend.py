"""Prediction backends: the bundled linear model and external processes.

An external backend is a child process speaking newline-delimited JSON on
stdin/stdout. Process-level failures (spawn, exit, timeout, non-JSON
output) raise BackendError; replies that parse but violate the prediction
contract raise PredictionValidationError.
"""

from __future__ import annotations

import json
import math
import queue
import subprocess
import threading
from dataclasses import dataclass

from ..core import RawPrediction, validate_raw_prediction
from .linear import LinearSpellModel, predict_raw

PROTOCOL_VERSION = 1
DEFAULT_TIMEOUT = 2.0


class BackendError(Exception):
    """The backend process failed: spawn, exit, timeout, or malformed stream."""


class PredictionValidationError(Exception):
    """The backend replied, but the reply violates the prediction contract."""


class BackendHandle:
    kind: str
    model_id: str

    def predict(self, prompt: str) -> RawPrediction:
        raise NotImplementedError

    def close(self) -> None:
        pass


@dataclass
class BuiltinBackend(BackendHandle):
    model: LinearSpellModel
    kind: str = "builtin"

    @property
    def model_id(self) -> str:  # type: ignore[override]
        return self.model.model_id

    def predict(self, prompt: str) -> RawPrediction:
        return predict_raw(self.model, prompt)


def _decode_reply(
    reply: dict,
    n_types: int,
    bounds: tuple[float, float, float, float],
) -> RawPrediction:
    for key in ("type_probs", "statuses", "effects"):
        if key not in reply:
            raise PredictionValidationError(f"reply missing field {key!r}")
    type_probs = reply["type_probs"]
    statuses = reply["statuses"]
    effects = reply["effects"]
    if not isinstance(type_probs, list) or not all(
        isinstance(p, (int, float)) for p in type_probs
    ):
        raise PredictionValidationError("field 'type_probs' must be a list of numbers")
    if not isinstance(statuses, list) or len(statuses) != 4 or not all(
        isinstance(s, (int, float)) and math.isfinite(s) for s in statuses
    ):
        raise PredictionValidationError("field 'statuses' must be 4 finite numbers")
    if (
        not isinstance(effects, list)
        or len(effects) != 4
        or any(not isinstance(row, list) or len(row) != 4 for row in effects)
    ):
        raise PredictionValidationError("field 'effects' must be a 4x4 array")
    cells = [value for row in effects for value in row]
    prediction = RawPrediction(
        type_probs=tuple(float(p) for p in type_probs),
        status_raws=tuple(float(s) for s in statuses),  # type: ignore[arg-type]
        effect_cells=tuple(int(v) if v in (-1, 0, 1) else v for v in cells),
        bounds=bounds,
    )
    violations = validate_raw_prediction(prediction, n_types)
    if violations:
        raise PredictionValidationError("; ".join(violations))
    return prediction


class ExternalBackend(BackendHandle):
    """Child process speaking the line-delimited JSON protocol.

    Requests are serialized: one in flight per handle. Use one handle per
    concurrent caller.
    """

    kind = "external"

    def __init__(
        self,
        process: subprocess.Popen,
        model_id: str,
        n_types: int,
        bounds: tuple[float, float, float, float],
        timeout: float = DEFAULT_TIMEOUT,
    ):
        self._process = process
        self.model_id = model_id
        self._n_types = n_types
        self._bounds = bounds
        self._timeout = timeout
        self._lock = threading.Lock()
        self._lines: queue.Queue[str] = queue.Queue()
        self._reader = threading.Thread(target=self._read_loop, daemon=True)
        self._reader.start()

    def _read_loop(self) -> None:
        assert self._process.stdout is not None
        for line in self._process.stdout:
            self._lines.put(line)

    def _read_reply(self, context: str) -> dict:
        try:
            line = self._lines.get(timeout=self._timeout)
        except queue.Empty:
            code = self._process.poll()
            if code is not None:
                raise BackendError(f"backend exited with code {code} during {context}") from None
            raise BackendError(f"backend timed out after {self._timeout}s during {context}") from None
        try:
            reply = json.loads(line)
        except json.JSONDecodeError as exc:
            raise BackendError(f"malformed backend reply during {context}: {exc}") from exc
        if not isinstance(reply, dict):
            raise BackendError(f"malformed backend reply during {context}: not an object")
        return reply

    def _send(self, message: dict, context: str) -> None:
        if self._process.poll() is not None:
            raise BackendError(f"backend exited with code {self._process.returncode}")
        assert self._process.stdin is not None
        try:
            self._process.stdin.write(json.dumps(message) + "\n")
            self._process.stdin.flush()
        except (BrokenPipeError, OSError) as exc:
            raise BackendError(f"failed to send {context} request: {exc}") from exc

    def handshake(self) -> None:
        with self._lock:
            self._send({"op": "hello", "version": PROTOCOL_VERSION}, "handshake")
            reply = self._read_reply("handshake")
        if reply.get("op") != "hello" or "model_id" not in reply:
            raise BackendError(f"unexpected handshake reply: {reply!r}")
        self.model_id = str(reply["model_id"])

    def predict(self, prompt: str) -> RawPrediction:
        if not prompt or not prompt.strip():
            raise ValueError("prompt is empty")
        with self._lock:
            self._send({"op": "predict", "prompt": prompt}, "predict")
            reply = self._read_reply("predict")
        return _decode_reply(reply, self._n_types, self._bounds)

    def close(self) -> None:
        if self._process.poll() is None:
            self._process.terminate()
            try:
                self._process.wait(timeout=3)
            except subprocess.TimeoutExpired:
                self._process.kill()


def spawn_external_backend(
    command: list[str],
    n_types: int = 5,
    bounds: tuple[float, float, float, float] = (4.0, 4.0, 4.0, 4.0),
    timeout: float = DEFAULT_TIMEOUT,
) -> ExternalBackend:
    """Start a backend process and complete the hello handshake."""
    try:
        process = subprocess.Popen(
            command,
            stdin=subprocess.PIPE,
            stdout=subprocess.PIPE,
            stderr=subprocess.DEVNULL,
            text=True,
            bufsize=1,
        )
    except OSError as exc:
        raise BackendError(f"failed to spawn backend {command!r}: {exc}") from exc
    handle = ExternalBackend(process, model_id="", n_types=n_types, bounds=bounds, timeout=timeout)
    try:
        handle.handshake()
    except BackendError:
        handle.close()
        raise
    return handle


def predict(backend: BackendHandle, prompt: str) -> RawPrediction:
    if not prompt or not prompt.strip():
        raise ValueError("prompt is empty")
    return backend.predict(prompt)
