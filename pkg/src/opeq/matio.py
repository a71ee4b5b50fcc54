"""Matrix file format and run reports.

Matrices travel as JSON documents {rows, cols, data} with data a row-major
list of [re, im] pairs. Floats are emitted as decimal text with 17
significant digits, which round-trips IEEE doubles exactly, so emit
followed by parse is the identity on entries. Reports use the same
emitter, which keeps sweep output byte-identical for a fixed seed.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .linalg import InputError

OUTCOMES = ("solved", "unsolvable", "error")


class MatrixFileError(InputError):
    """Malformed or invalid matrix document."""


def _fmt_float(x: float) -> str:
    if not math.isfinite(x):
        raise MatrixFileError(f"non-finite value {x!r} cannot be serialized")
    return "%.17g" % x


def matrix_to_doc(m: np.ndarray) -> dict:
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2:
        raise MatrixFileError("matrix must be 2-D")
    rows, cols = a.shape
    data = [[float(v.real), float(v.imag)] for v in a.reshape(-1)]
    return {"rows": int(rows), "cols": int(cols), "data": data}


def _require(cond: bool, locus: str, msg: str) -> None:
    if not cond:
        raise MatrixFileError(f"{locus}: {msg}")


def _as_number(v, locus: str) -> float:
    # bool is an int subclass; reject it explicitly
    _require(isinstance(v, (int, float)) and not isinstance(v, bool), locus, "expected a number")
    f = float(v)
    _require(math.isfinite(f), locus, "value must be finite")
    return f


def parse_matrix_doc(doc) -> np.ndarray:
    _require(isinstance(doc, dict), "document", "expected a JSON object")
    for key in ("rows", "cols", "data"):
        _require(key in doc, "document", f"missing field {key!r}")
    rows, cols = doc["rows"], doc["cols"]
    for name, v in (("rows", rows), ("cols", cols)):
        _require(
            isinstance(v, int) and not isinstance(v, bool) and v >= 1,
            name,
            "expected a positive integer",
        )
    data = doc["data"]
    _require(isinstance(data, list), "data", "expected a list")
    _require(len(data) == rows * cols, "data", f"expected {rows * cols} entries, got {len(data)}")
    out = np.empty(rows * cols, dtype=np.complex128)
    for k, pair in enumerate(data):
        locus = f"data[{k}]"
        _require(isinstance(pair, list) and len(pair) == 2, locus, "expected a [re, im] pair")
        out[k] = complex(_as_number(pair[0], locus + "[0]"), _as_number(pair[1], locus + "[1]"))
    return out.reshape(rows, cols)


def parse_matrix_text(text: str) -> np.ndarray:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MatrixFileError(f"document: not valid JSON ({exc})") from None
    return parse_matrix_doc(doc)


def load_matrix(path: str) -> np.ndarray:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise MatrixFileError(f"{path}: {exc.strerror or exc}") from None
    try:
        return parse_matrix_text(text)
    except MatrixFileError as exc:
        raise MatrixFileError(f"{path}: {exc}") from None


def emit_json(value, indent: int = 0) -> str:
    """Serialize to JSON with 17-significant-digit floats.

    Key order is preserved, so documents built deterministically emit
    byte-identical text.
    """
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return _fmt_float(value)
    if isinstance(value, str):
        return json.dumps(value)
    if isinstance(value, (list, tuple)):
        if not value:
            return "[]"
        items = [emit_json(v, indent + 1) for v in value]
        # keep short numeric pairs on one line
        if all("\n" not in it and len(it) < 48 for it in items) and len(items) <= 4:
            return "[" + ", ".join(items) + "]"
        return "[\n" + ",\n".join(inner + it for it in items) + "\n" + pad + "]"
    if isinstance(value, dict):
        if not value:
            return "{}"
        parts = []
        for k, v in value.items():
            if not isinstance(k, str):
                raise MatrixFileError(f"non-string key {k!r}")
            parts.append(inner + json.dumps(k) + ": " + emit_json(v, indent + 1))
        return "{\n" + ",\n".join(parts) + "\n" + pad + "}"
    raise MatrixFileError(f"cannot serialize {type(value).__name__}")


def emit_matrix(m: np.ndarray) -> str:
    return emit_json(matrix_to_doc(m)) + "\n"


def save_matrix(path: str, m: np.ndarray) -> None:
    text = emit_matrix(m)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def digest_text(text: str) -> str:
    return "sha256:" + hashlib.sha256(text.encode("utf-8")).hexdigest()[:16]


def digest_matrix(m: np.ndarray) -> str:
    return digest_text(emit_matrix(m))


@dataclass
class RunReport:
    """Machine-readable outcome of one command invocation."""

    command: str
    outcome: str
    inputs: dict = field(default_factory=dict)
    residuals: dict = field(default_factory=dict)
    conditions: list = field(default_factory=list)
    solution: np.ndarray | None = None
    seed: int | None = None
    detail: dict = field(default_factory=dict)
    tool_version: str = __version__

    def __post_init__(self):
        if self.outcome not in OUTCOMES:
            raise InputError(f"outcome must be one of {OUTCOMES}, got {self.outcome!r}")
        if self.outcome == "solved" and self.command.startswith("solve") and self.solution is None:
            raise InputError("a solved solve-command report needs a solution")

    def to_doc(self) -> dict:
        doc = {
            "command": self.command,
            "inputs": dict(self.inputs),
            "outcome": self.outcome,
            "residuals": {k: float(v) for k, v in self.residuals.items()},
            "conditions": [
                {
                    "name": c.name,
                    "holds": bool(c.holds),
                    "witness": None if c.witness is None else float(c.witness),
                    "detail": c.detail,
                }
                for c in self.conditions
            ],
            "solution": None if self.solution is None else matrix_to_doc(self.solution),
            "seed": self.seed,
            "tool_version": self.tool_version,
        }
        if self.detail:
            doc["detail"] = self.detail
        return doc

    def emit(self) -> str:
        return emit_json(self.to_doc()) + "\n"
