"""Occupation-number basis, anticommutation signs and the wedge product.

Basis convention: the canonical index of an occupation pattern
``s_1 ... s_N`` is ``sum_i s_i 2**(i-1)``, so mode 1 is the least
significant bit and the canonical basis reads ``|Omega>, |1>, |2>, |1^2>,
|3>, ...``.  The basis element with pattern ``s`` is the ascending creation
string ``(f_1^dag)^{s_1} ... (f_N^dag)^{s_N} |Omega>`` with coefficient +1.

Mode sets are tuples of global integer labels kept in ascending order; bit
position ``p`` of a local index refers to ``modes[p]``.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

DEFAULT_TOL = 1e-10
DEFAULT_MAX_MODES = 10

CANONICAL = "canonical"
PARITY = "parity"


class ModeError(ValueError):
    """Invalid mode label, overlapping mode sets or mode-cap overflow."""


def max_modes() -> int:
    """Mode cap; ``FERMIQIT_MAX_MODES`` overrides the default of 10."""
    value = os.environ.get("FERMIQIT_MAX_MODES")
    if value is None:
        return DEFAULT_MAX_MODES
    try:
        return int(value)
    except ValueError as exc:
        raise ModeError(f"FERMIQIT_MAX_MODES must be an integer, got {value!r}") from exc


def _check_modes(modes: Iterable[int]) -> tuple[int, ...]:
    modes = tuple(int(m) for m in modes)
    if len(set(modes)) != len(modes):
        raise ModeError(f"repeated mode labels in {modes}")
    if list(modes) != sorted(modes):
        raise ModeError(f"mode labels must be ascending, got {modes}")
    if len(modes) > max_modes():
        raise ModeError(
            f"{len(modes)} modes exceeds the cap of {max_modes()} (set FERMIQIT_MAX_MODES)"
        )
    return modes


def default_modes(n: int) -> tuple[int, ...]:
    return tuple(range(1, n + 1))


# ---------------------------------------------------------------------------
# occupation patterns


@dataclass(frozen=True)
class OccPattern:
    """Occupation bits ``s_1 .. s_N``; ``bits[0]`` is mode 1."""

    bits: tuple[int, ...]

    def __post_init__(self):
        if any(b not in (0, 1) for b in self.bits):
            raise ValueError(f"occupations must be 0 or 1, got {self.bits}")

    @classmethod
    def from_string(cls, text: str) -> "OccPattern":
        if any(c not in "01" for c in text):
            raise ValueError(f"not a bitstring: {text!r}")
        return cls(tuple(int(c) for c in text))

    @property
    def n_modes(self) -> int:
        return len(self.bits)

    @property
    def particle_number(self) -> int:
        return sum(self.bits)

    def __str__(self) -> str:
        return "".join(str(b) for b in self.bits)


def pattern_index(p: OccPattern | str | Sequence[int]) -> int:
    """Canonical index of a pattern, mode 1 being the least significant bit."""
    if isinstance(p, str):
        p = OccPattern.from_string(p)
    elif not isinstance(p, OccPattern):
        p = OccPattern(tuple(int(b) for b in p))
    return sum(b << i for i, b in enumerate(p.bits))


def index_pattern(i: int, n: int) -> OccPattern:
    if not 0 <= i < (1 << n):
        raise IndexError(f"index {i} out of range for {n} modes")
    return OccPattern(tuple((i >> k) & 1 for k in range(n)))


@lru_cache(maxsize=None)
def popcounts(n: int) -> np.ndarray:
    """Particle number of every canonical index on ``n`` modes."""
    idx = np.arange(1 << n)
    counts = np.zeros(1 << n, dtype=np.int64)
    for k in range(n):
        counts += (idx >> k) & 1
    counts.flags.writeable = False
    return counts


def parity_mask(n: int) -> np.ndarray:
    """Boolean array, True where the canonical index has odd particle number."""
    return (popcounts(n) & 1).astype(bool)


def _bits_matrix(n: int) -> np.ndarray:
    idx = np.arange(1 << n)
    return np.stack([(idx >> k) & 1 for k in range(n)], axis=1) if n else np.zeros((1, 0), int)


# ---------------------------------------------------------------------------
# states and operators


@dataclass(frozen=True, eq=False)
class FockState:
    """Amplitude vector over the basis of ``modes``."""

    modes: tuple[int, ...]
    amps: np.ndarray
    basis: str = CANONICAL

    def __post_init__(self):
        modes = _check_modes(self.modes)
        amps = np.asarray(self.amps, dtype=complex).reshape(-1)
        if amps.shape != (1 << len(modes),):
            raise ValueError(f"expected {1 << len(modes)} amplitudes, got {amps.shape[0]}")
        if self.basis not in (CANONICAL, PARITY):
            raise ValueError(f"unknown basis tag {self.basis!r}")
        amps.flags.writeable = False
        object.__setattr__(self, "modes", modes)
        object.__setattr__(self, "amps", amps)

    @property
    def n_modes(self) -> int:
        return len(self.modes)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def parity(self, tol: float = DEFAULT_TOL) -> int | None:
        """+1 (even), -1 (odd), or None for a superposition of both."""
        odd = parity_mask(self.n_modes)
        if self.basis == PARITY:
            odd = np.sort(odd)
        w_odd = np.linalg.norm(self.amps[odd])
        w_even = np.linalg.norm(self.amps[~odd])
        if w_odd <= tol:
            return 1
        if w_even <= tol:
            return -1
        return None

    def projector(self) -> "FockOperator":
        return FockOperator(self.modes, np.outer(self.amps, self.amps.conj()), self.basis)

    @classmethod
    def basis_state(cls, pattern: str | OccPattern, modes: Sequence[int] | None = None) -> "FockState":
        p = OccPattern.from_string(pattern) if isinstance(pattern, str) else pattern
        modes = default_modes(p.n_modes) if modes is None else tuple(modes)
        amps = np.zeros(1 << len(modes), dtype=complex)
        amps[pattern_index(p)] = 1.0
        return cls(modes, amps)

    @classmethod
    def vacuum(cls, modes: Sequence[int] | int) -> "FockState":
        modes = default_modes(modes) if isinstance(modes, int) else tuple(modes)
        amps = np.zeros(1 << len(modes), dtype=complex)
        amps[0] = 1.0
        return cls(modes, amps)


@dataclass(frozen=True, eq=False)
class FockOperator:
    """Dense matrix over the basis of ``modes``."""

    modes: tuple[int, ...]
    matrix: np.ndarray
    basis: str = CANONICAL

    def __post_init__(self):
        modes = _check_modes(self.modes)
        mat = np.asarray(self.matrix, dtype=complex)
        dim = 1 << len(modes)
        if mat.shape != (dim, dim):
            raise ValueError(f"expected a {dim}x{dim} matrix, got {mat.shape}")
        if self.basis not in (CANONICAL, PARITY):
            raise ValueError(f"unknown basis tag {self.basis!r}")
        mat.flags.writeable = False
        object.__setattr__(self, "modes", modes)
        object.__setattr__(self, "matrix", mat)

    @property
    def n_modes(self) -> int:
        return len(self.modes)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def trace(self) -> complex:
        return complex(np.trace(self.matrix))

    def dagger(self) -> "FockOperator":
        return FockOperator(self.modes, self.matrix.conj().T, self.basis)

    def __matmul__(self, other: "FockOperator") -> "FockOperator":
        if not isinstance(other, FockOperator):
            return NotImplemented
        if other.modes != self.modes or other.basis != self.basis:
            raise ModeError("operators act on different mode sets or bases")
        return FockOperator(self.modes, self.matrix @ other.matrix, self.basis)

    def allclose(self, other: "FockOperator", tol: float = DEFAULT_TOL) -> bool:
        return (
            self.modes == other.modes
            and self.basis == other.basis
            and np.allclose(self.matrix, other.matrix, atol=tol, rtol=0)
        )

    @classmethod
    def identity(cls, modes: Sequence[int] | int) -> "FockOperator":
        modes = default_modes(modes) if isinstance(modes, int) else tuple(modes)
        return cls(modes, np.eye(1 << len(modes), dtype=complex))


# ---------------------------------------------------------------------------
# creation / annihilation


def _position(modes: tuple[int, ...], j: int) -> int:
    try:
        return modes.index(j)
    except ValueError:
        raise ModeError(f"mode {j} not in {modes}") from None


@lru_cache(maxsize=256)
def _creation_tables(n: int, p: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    idx = np.arange(1 << n)
    src = idx[((idx >> p) & 1) == 0]
    below = src & ((1 << p) - 1)
    count = np.zeros_like(src)
    for k in range(p):
        count += (below >> k) & 1
    phase = np.where(count & 1, -1.0, 1.0)
    return src, src | (1 << p), phase


def creation_matrix(n: int, p: int) -> np.ndarray:
    """Matrix of ``f^dag`` for the mode at bit position ``p`` of ``n`` modes."""
    src, dst, phase = _creation_tables(n, p)
    mat = np.zeros((1 << n, 1 << n))
    mat[dst, src] = phase
    return mat


def creation_operator(modes: Sequence[int] | int, j: int) -> FockOperator:
    modes = default_modes(modes) if isinstance(modes, int) else tuple(modes)
    return FockOperator(modes, creation_matrix(len(modes), _position(modes, j)))


def annihilation_operator(modes: Sequence[int] | int, j: int) -> FockOperator:
    return creation_operator(modes, j).dagger()


def apply_creation(st: FockState, j: int) -> FockState:
    if st.basis != CANONICAL:
        raise ValueError("creation operators act on the canonical basis")
    src, dst, phase = _creation_tables(st.n_modes, _position(st.modes, j))
    out = np.zeros_like(st.amps)
    out[dst] = phase * st.amps[src]
    return FockState(st.modes, out)


def apply_annihilation(st: FockState, j: int) -> FockState:
    if st.basis != CANONICAL:
        raise ValueError("annihilation operators act on the canonical basis")
    src, dst, phase = _creation_tables(st.n_modes, _position(st.modes, j))
    out = np.zeros_like(st.amps)
    out[src] = phase * st.amps[dst]
    return FockState(st.modes, out)


def vacuum_overlap(left: Sequence[int], right: Sequence[int]) -> int:
    """``<Omega| f_{i_k} .. f_{i_1} f_{j_1}^dag .. f_{j_m}^dag |Omega>``.

    Zero unless both lists have the same length, otherwise the determinant
    of the Kronecker-delta matrix ``W[a, b] = delta(i_a, j_b)``.
    """
    left, right = list(left), list(right)
    if len(left) != len(right):
        return 0
    if not left:
        return 1
    w = np.array([[1.0 if i == j else 0.0 for j in right] for i in left])
    return int(round(np.linalg.det(w)))


def number_operator(n: int, modes: Sequence[int] | None = None) -> FockOperator:
    modes = default_modes(n) if modes is None else tuple(modes)
    return FockOperator(modes, np.diag(popcounts(n).astype(complex)))


def parity_operator(n: int, modes: Sequence[int] | None = None) -> FockOperator:
    """``exp(i pi n)``: diagonal with entries ``(-1)**(particle number)``."""
    modes = default_modes(n) if modes is None else tuple(modes)
    return FockOperator(modes, np.diag(np.where(parity_mask(n), -1.0, 1.0)).astype(complex))


# ---------------------------------------------------------------------------
# wedge product


@lru_cache(maxsize=512)
def merge_table(
    modes_a: tuple[int, ...], modes_b: tuple[int, ...]
) -> tuple[tuple[int, ...], np.ndarray, np.ndarray]:
    """Index and sign tables for ``|a> ^ |b>`` with ``a`` written first.

    Returns ``(merged_modes, index, sign)`` where ``index[ia, ib]`` is the
    canonical index in ``merged_modes`` and ``sign[ia, ib]`` the parity of
    the permutation sorting the concatenated creation string.
    """
    if set(modes_a) & set(modes_b):
        raise ModeError(f"mode sets {modes_a} and {modes_b} overlap")
    merged = tuple(sorted(modes_a + modes_b))
    _check_modes(merged)
    bits_a = _bits_matrix(len(modes_a))
    bits_b = _bits_matrix(len(modes_b))
    pos_a = np.array([merged.index(m) for m in modes_a], dtype=np.int64)
    pos_b = np.array([merged.index(m) for m in modes_b], dtype=np.int64)
    idx_a = bits_a @ (1 << pos_a) if len(modes_a) else np.zeros(1, np.int64)
    idx_b = bits_b @ (1 << pos_b) if len(modes_b) else np.zeros(1, np.int64)
    index = idx_a[:, None] + idx_b[None, :]
    # inversions: occupied a-mode above an occupied b-mode
    greater = np.array([[ma > mb for mb in modes_b] for ma in modes_a], dtype=np.int64)
    if len(modes_a) and len(modes_b):
        inversions = bits_a @ greater.reshape(len(modes_a), len(modes_b)) @ bits_b.T
    else:
        inversions = np.zeros((1 << len(modes_a), 1 << len(modes_b)), np.int64)
    sign = np.where(inversions & 1, -1.0, 1.0)
    for arr in (index, sign):
        arr.flags.writeable = False
    return merged, index, sign


def wedge_states(a: FockState, b: FockState) -> FockState:
    if a.basis != CANONICAL or b.basis != CANONICAL:
        raise ValueError("wedge product is defined on the canonical basis")
    merged, index, sign = merge_table(a.modes, b.modes)
    out = np.zeros(1 << len(merged), dtype=complex)
    out[index.ravel()] = (sign * np.outer(a.amps, b.amps)).ravel()
    return FockState(merged, out)


def wedge_operators(a: FockOperator, b: FockOperator) -> FockOperator:
    """``A ^ B``: kets wedge as states, bras with the reversed dual ordering.

    Equivalent to conjugating ``A (x) B`` by the signed permutation that
    maps ``|a> (x) |b>`` to ``|a> ^ |b>``.
    """
    if a.basis != CANONICAL or b.basis != CANONICAL:
        raise ValueError("wedge product is defined on the canonical basis")
    merged, index, sign = merge_table(a.modes, b.modes)
    perm = index.ravel()
    s = sign.ravel()
    out = np.zeros((len(perm), len(perm)), dtype=complex)
    out[np.ix_(perm, perm)] = s[:, None] * np.kron(a.matrix, b.matrix) * s[None, :]
    return FockOperator(merged, out)


def wedge_all(ops: Iterable[FockOperator]) -> FockOperator:
    ops = list(ops)
    out = ops[0]
    for op in ops[1:]:
        out = wedge_operators(out, op)
    return out


def embed_local(op: FockOperator, modes: Sequence[int]) -> FockOperator:
    """Extend a local operator to ``modes`` as ``op ^ I_rest``.

    With ``op`` in the first wedge slot the result coincides with the same
    operator written as a polynomial in the local creation/annihilation
    operators, including the parity strings odd operators pick up from
    lower-labelled modes.
    """
    modes = tuple(modes)
    rest = tuple(m for m in modes if m not in op.modes)
    if len(rest) + op.n_modes != len(modes):
        raise ModeError(f"{op.modes} is not a subset of {modes}")
    if not rest:
        return op
    return wedge_operators(op, FockOperator.identity(rest))
