"""Canonical Jordan-Wigner encoding and its clash with qubit partial traces.

Mode ``i`` maps to qubit ``i``, with qubit 1 the leftmost (most significant)
tensor factor.  Under ``f_i -> -Z x .. x Z x |0><1| x I x .. x I`` the basis
state with pattern ``s`` becomes ``(-1)**|s| |s_1 s_2 .. s_N>``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

import numpy as np

from .entropy import von_neumann_entropy
from .fock import CANONICAL, FockOperator, FockState, ModeError, popcounts
from .ptrace import ptrace


@dataclass(frozen=True, eq=False)
class QubitState:
    """A pure state (1-d ``data``) or density matrix (2-d) on ``n`` qubits."""

    n: int
    data: np.ndarray

    def __post_init__(self):
        data = np.asarray(self.data, dtype=complex)
        dim = 1 << self.n
        if data.shape not in ((dim,), (dim, dim)):
            raise ValueError(f"expected dimension {dim}, got shape {data.shape}")
        data.flags.writeable = False
        object.__setattr__(self, "data", data)

    @property
    def is_density(self) -> bool:
        return self.data.ndim == 2

    def density(self) -> np.ndarray:
        return self.data if self.is_density else np.outer(self.data, self.data.conj())


@lru_cache(maxsize=None)
def _jw_tables(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Qubit index and phase of each canonical index."""
    idx = np.arange(1 << n)
    q = np.zeros_like(idx)
    for i in range(n):
        q |= ((idx >> i) & 1) << (n - 1 - i)
    phase = np.where(popcounts(n) & 1, -1.0, 1.0)
    q.flags.writeable = False
    phase.flags.writeable = False
    return q, phase


def jw_map_state(psi: FockState) -> QubitState:
    if psi.basis != CANONICAL:
        raise ValueError("Jordan-Wigner map expects the canonical basis")
    q, phase = _jw_tables(psi.n_modes)
    out = np.zeros_like(psi.amps)
    out[q] = phase * psi.amps
    return QubitState(psi.n_modes, out)


def jw_map_operator(rho: FockOperator) -> QubitState:
    """``JW rho JW^dag`` in the computational basis."""
    if rho.basis != CANONICAL:
        raise ValueError("Jordan-Wigner map expects the canonical basis")
    q, phase = _jw_tables(rho.n_modes)
    out = np.zeros_like(rho.matrix)
    out[np.ix_(q, q)] = phase[:, None] * rho.matrix * phase[None, :]
    return QubitState(rho.n_modes, out)


def qubit_ptrace(rho: QubitState, traced: Iterable[int]) -> QubitState:
    """Ordinary partial trace over the 1-based qubits in ``traced``."""
    traced = sorted(set(int(t) for t in traced))
    if any(t < 1 or t > rho.n for t in traced):
        raise ModeError(f"qubits {traced} out of range 1..{rho.n}")
    n = rho.n
    keep = [k for k in range(n) if k + 1 not in traced]
    t = rho.density().reshape((2,) * (2 * n))
    # move kept axes first, traced axes last, on both sides
    tr = [k for k in range(n) if k + 1 in traced]
    t = t.transpose(keep + tr + [n + k for k in keep] + [n + k for k in tr])
    dk, dt = 1 << len(keep), 1 << len(tr)
    t = t.reshape(dk, dt, dk, dt)
    return QubitState(len(keep), np.einsum("ajbj->ab", t))


@dataclass(frozen=True, eq=False)
class Route:
    matrix: np.ndarray
    spectrum: np.ndarray
    entropy: float


@dataclass(frozen=True, eq=False)
class InconsistencyReport:
    traced: tuple[int, ...]
    route1: Route  # fermionic partial trace, then JW
    route2: Route  # JW, then qubit partial trace

    @property
    def max_difference(self) -> float:
        return float(np.abs(self.route1.matrix - self.route2.matrix).max())


def _route(mat: np.ndarray) -> Route:
    spec = np.sort(np.linalg.eigvalsh((mat + mat.conj().T) / 2))[::-1]
    return Route(mat, spec, von_neumann_entropy(mat))


def demonstrate_inconsistency(rho: FockOperator, traced: Iterable[int]) -> InconsistencyReport:
    traced = tuple(sorted(set(traced)))
    r1 = jw_map_operator(ptrace(rho, traced)).data
    qubits = [rho.modes.index(m) + 1 for m in traced]
    r2 = qubit_ptrace(jw_map_operator(rho), qubits).data
    return InconsistencyReport(traced, _route(r1), _route(r2))
