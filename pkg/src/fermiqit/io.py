"""JSON artifact files for states, operators, channels and dilations.

Entries are sparse: each one names its row (and column, for operators) by
an occupation bitstring whose leftmost character is mode 1.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any

import numpy as np

from .fock import OccPattern, index_pattern, pattern_index

KINDS = ("state", "operator", "channel", "dilation")
ZERO_TOL = 1e-14
FIXTURE_PREFIX = "fixture:"


class ParseError(ValueError):
    """Malformed artifact file."""


@dataclass(eq=False)
class ArtifactFile:
    """In-memory form of an artifact.

    ``data`` holds a vector (state), a matrix (operator), a list of matrices
    (channel) or ``(env_state, unitary)`` (dilation).
    """

    modes: int
    kind: str
    data: Any
    k: int = 0
    comment: str = ""
    basis: str = "canonical"

    def __eq__(self, other):
        if not isinstance(other, ArtifactFile):
            return NotImplemented
        if (self.modes, self.kind, self.k, self.basis) != (other.modes, other.kind, other.k, other.basis):
            return False
        a = self.data if self.kind in ("channel", "dilation") else [self.data]
        b = other.data if other.kind in ("channel", "dilation") else [other.data]
        return len(a) == len(b) and all(
            np.shape(x) == np.shape(y) and np.array_equal(x, y) for x, y in zip(a, b)
        )


# ---------------------------------------------------------------------------
# entries


def _bits(text: Any, n: int, where: str) -> int:
    if not isinstance(text, str) or len(text) != n or any(c not in "01" for c in text):
        raise ParseError(f"{where}: expected a {n}-character bitstring, got {text!r}")
    return pattern_index(OccPattern.from_string(text)) if n else 0


def _number(entry: dict, key: str, where: str) -> float:
    val = entry.get(key, 0.0)
    if isinstance(val, bool) or not isinstance(val, (int, float)):
        raise ParseError(f"{where}: field {key!r} must be a number")
    return float(val)


def _parse_entries(raw: Any, n: int, matrix: bool, where: str) -> np.ndarray:
    if not isinstance(raw, list):
        raise ParseError(f"{where}: 'entries' must be a list")
    dim = 1 << n
    out = np.zeros((dim, dim) if matrix else dim, dtype=complex)
    seen = set()
    for i, entry in enumerate(raw):
        loc = f"{where} entry {i}"
        if not isinstance(entry, dict):
            raise ParseError(f"{loc}: must be an object")
        row = _bits(entry.get("row"), n, loc)
        key: tuple = (row,)
        if matrix:
            key = (row, _bits(entry.get("col"), n, loc))
        elif "col" in entry:
            raise ParseError(f"{loc}: state entries take no 'col'")
        if key in seen:
            raise ParseError(f"{loc}: duplicate entry {entry.get('row')!r}"
                             + (f", {entry.get('col')!r}" if matrix else ""))
        seen.add(key)
        out[key] = complex(_number(entry, "re", loc), _number(entry, "im", loc))
    return out


def _label(i: int, n: int) -> str:
    return str(index_pattern(i, n)) if n else ""


def _clean(x: float) -> float:
    return 0.0 if abs(x) < ZERO_TOL else float(x)


def _dump_entries(arr: np.ndarray, n: int) -> list[dict]:
    out = []
    if arr.ndim == 1:
        for i in range(arr.shape[0]):
            z = arr[i]
            if abs(z) >= ZERO_TOL:
                out.append({"row": _label(i, n), "re": _clean(z.real), "im": _clean(z.imag)})
        return out
    rows, cols = np.nonzero(np.abs(arr) >= ZERO_TOL)
    for r, c in zip(rows, cols):  # np.nonzero yields row-major order
        z = arr[r, c]
        out.append(
            {"row": _label(r, n), "col": _label(c, n), "re": _clean(z.real), "im": _clean(z.imag)}
        )
    return out


# ---------------------------------------------------------------------------
# documents


def _require(doc: dict, key: str, types, where: str = "file"):
    if key not in doc:
        raise ParseError(f"{where}: missing field {key!r}")
    val = doc[key]
    if not isinstance(val, types) or isinstance(val, bool):
        raise ParseError(f"{where}: field {key!r} has the wrong type")
    return val


def from_dict(doc: Any) -> ArtifactFile:
    if not isinstance(doc, dict):
        raise ParseError("top level must be a JSON object")
    n = _require(doc, "modes", int)
    if n < 0:
        raise ParseError("'modes' must be non-negative")
    kind = _require(doc, "kind", str)
    if kind not in KINDS:
        raise ParseError(f"unknown kind {kind!r}; expected one of {', '.join(KINDS)}")
    basis = doc.get("basis", "canonical")
    if basis != "canonical":
        raise ParseError(f"unsupported basis {basis!r}; only 'canonical' is accepted")
    comment = doc.get("comment", "")
    if kind == "state":
        data = _parse_entries(_require(doc, "entries", list), n, False, "state")
        return ArtifactFile(n, kind, data, comment=comment)
    if kind == "operator":
        data = _parse_entries(_require(doc, "entries", list), n, True, "operator")
        return ArtifactFile(n, kind, data, comment=comment)
    if kind == "channel":
        blocks = _require(doc, "kraus", list)
        if not blocks:
            raise ParseError("channel: 'kraus' must not be empty")
        mats = []
        for i, blk in enumerate(blocks):
            where = f"kraus[{i}]"
            if not isinstance(blk, dict):
                raise ParseError(f"{where}: must be an object")
            mats.append(_parse_entries(_require(blk, "entries", list, where), n, True, where))
        return ArtifactFile(n, kind, mats, comment=comment)
    k = _require(doc, "K", int)
    if k < 0:
        raise ParseError("'K' must be non-negative")
    env = _require(doc, "env_state", dict)
    uni = _require(doc, "unitary", dict)
    omega = _parse_entries(_require(env, "entries", list, "env_state"), k, False, "env_state")
    u = _parse_entries(_require(uni, "entries", list, "unitary"), n + k, True, "unitary")
    return ArtifactFile(n, kind, [omega, u], k=k, comment=comment)


def to_dict(art: ArtifactFile) -> dict:
    doc: dict = {"modes": art.modes, "kind": art.kind, "basis": art.basis}
    if art.kind in ("state", "operator"):
        doc["entries"] = _dump_entries(np.asarray(art.data), art.modes)
    elif art.kind == "channel":
        doc["kraus"] = [{"entries": _dump_entries(np.asarray(m), art.modes)} for m in art.data]
    else:
        omega, u = art.data
        doc["K"] = art.k
        doc["env_state"] = {"entries": _dump_entries(np.asarray(omega), art.k)}
        doc["unitary"] = {"entries": _dump_entries(np.asarray(u), art.modes + art.k)}
    if art.comment:
        doc["comment"] = art.comment
    return doc


def loads(text: str) -> ArtifactFile:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    return from_dict(doc)


def dumps(art: ArtifactFile) -> str:
    return json.dumps(to_dict(art), indent=2) + "\n"


def fixture_path(name: str):
    name = name if name.endswith(".json") else name + ".json"
    return resources.files("fermiqit") / "data" / name


def list_fixtures() -> list[str]:
    return sorted(
        p.name[: -len(".json")] for p in (resources.files("fermiqit") / "data").iterdir() if p.name.endswith(".json")
    )


def load(path: str | Path) -> ArtifactFile:
    """Read an artifact; ``fixture:<name>`` reads a bundled fixture."""
    path = str(path)
    try:
        if path.startswith(FIXTURE_PREFIX):
            text = fixture_path(path[len(FIXTURE_PREFIX) :]).read_text()
        else:
            text = Path(path).read_text()
    except FileNotFoundError as exc:
        raise ParseError(f"cannot read {path}: no such file") from exc
    return loads(text)


def save(art: ArtifactFile, path: str | Path) -> None:
    Path(path).write_text(dumps(art))
