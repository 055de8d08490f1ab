"""Correlations across a mode bipartition: Schmidt form, purification and
the three notions of an uncorrelated state."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .entropy import von_neumann_entropy
from .fock import (
    DEFAULT_TOL,
    FockOperator,
    FockState,
    ModeError,
    embed_local,
    merge_table,
    parity_mask,
    wedge_operators,
    wedge_states,
)
from .ptrace import ptrace
from .ssr import SSRError, is_ssr_pure_state, is_ssr_state

__all__ = [
    "SchmidtDecomposition",
    "schmidt",
    "purify",
    "is_uncorrelated",
    "UncorrelatedVerdict",
    "hermitian_basis",
    "von_neumann_entropy",
]


def _split(modes: tuple[int, ...], part: Iterable[int]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    part = set(int(m) for m in part)
    if not part <= set(modes):
        raise ModeError(f"partition {sorted(part)} not contained in {modes}")
    a = tuple(m for m in modes if m in part)
    b = tuple(m for m in modes if m not in part)
    if not a or not b:
        raise ModeError("partition must be a proper nonempty subset of the modes")
    return a, b


def _sector_eigh(m: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decompose a parity block-diagonal Hermitian matrix sector by sector.

    Eigenvectors are returned as columns, each supported on one parity
    sector, sorted by descending eigenvalue.
    """
    odd = parity_mask(n)
    vals, vecs = [], []
    for sector in (~odd, odd):
        idx = np.flatnonzero(sector)
        if not len(idx):
            continue
        w, v = np.linalg.eigh(m[np.ix_(idx, idx)])
        full = np.zeros((len(m), len(idx)), dtype=complex)
        full[idx] = v
        vals.append(w)
        vecs.append(full)
    w = np.concatenate(vals)
    v = np.concatenate(vecs, axis=1)
    order = np.argsort(-w, kind="stable")
    return w[order], v[:, order]


# ---------------------------------------------------------------------------
# Schmidt decomposition


@dataclass(frozen=True, eq=False)
class SchmidtDecomposition:
    coeffs: np.ndarray  # probabilities p_i, descending
    left: tuple[FockState, ...]
    right: tuple[FockState, ...]

    @property
    def schmidt_number(self) -> int:
        return len(self.coeffs)

    def reconstruct(self) -> FockState:
        terms = [
            np.sqrt(p) * wedge_states(a, b).amps
            for p, a, b in zip(self.coeffs, self.left, self.right)
        ]
        merged = wedge_states(self.left[0], self.right[0]).modes
        return FockState(merged, np.sum(terms, axis=0))


def coefficient_matrix(psi: FockState, modes_a: Sequence[int]) -> tuple[np.ndarray, tuple, tuple]:
    """``Lambda[a, b]`` with ``psi = sum Lambda[a, b] |a>_A ^ |b>_B``."""
    a, b = _split(psi.modes, modes_a)
    _, index, sign = merge_table(a, b)
    return sign * psi.amps[index], a, b


def schmidt(psi: FockState, modes_a: Iterable[int], tol: float = DEFAULT_TOL) -> SchmidtDecomposition:
    verdict = is_ssr_pure_state(psi, tol=max(tol, 1e-9))
    if not verdict:
        raise SSRError(verdict.reason)
    lam, a, b = coefficient_matrix(psi, modes_a)
    rho_a = lam @ lam.conj().T
    p, v = _sector_eigh(rho_a, len(a))
    keep = p > tol
    p, v = p[keep], v[:, keep]
    h = v.conj().T @ lam
    right = h / np.sqrt(p)[:, None]
    return SchmidtDecomposition(
        coeffs=p / p.sum(),
        left=tuple(FockState(a, v[:, i]) for i in range(len(p))),
        right=tuple(FockState(b, right[i]) for i in range(len(p))),
    )


# ---------------------------------------------------------------------------
# purification


def purify(rho: FockOperator, env_modes: Sequence[int] | None = None, tol: float = DEFAULT_TOL) -> FockState:
    """Even-parity pure state on system plus an environment of equal size.

    Environment labels default to the ones directly above the system.
    """
    verdict = is_ssr_state(rho, tol=max(tol, 1e-9))
    if not verdict:
        raise SSRError(verdict.reason)
    n = rho.n_modes
    if env_modes is None:
        top = max(rho.modes, default=0)
        env_modes = tuple(range(top + 1, top + 1 + n))
    env_modes = tuple(env_modes)
    if len(env_modes) != n:
        raise ModeError("environment needs as many modes as the system")
    p, v = _sector_eigh(rho.matrix, n)
    odd = parity_mask(n)
    even_env = iter(np.flatnonzero(~odd))
    odd_env = iter(np.flatnonzero(odd))
    _, index, sign = merge_table(rho.modes, env_modes)
    out = np.zeros(1 << (2 * n), dtype=complex)
    for i in range(len(p)):
        col = v[:, i]
        is_odd = bool(np.abs(col[odd]).max(initial=0.0) > 0.5)
        e = next(odd_env if is_odd else even_env)
        if p[i] <= 0:
            continue
        out[index[:, e]] += np.sqrt(p[i]) * sign[:, e] * col
    return FockState(tuple(sorted(rho.modes + env_modes)), out)


# ---------------------------------------------------------------------------
# uncorrelated states


def hermitian_basis(dim: int, blocks: np.ndarray | None = None) -> list[np.ndarray]:
    """Orthonormal Hermitian basis, optionally restricted to same-label pairs."""
    out = []
    for j in range(dim):
        e = np.zeros((dim, dim), dtype=complex)
        e[j, j] = 1
        out.append(e)
        for k in range(j + 1, dim):
            if blocks is not None and blocks[j] != blocks[k]:
                continue
            s = np.zeros((dim, dim), dtype=complex)
            s[j, k] = s[k, j] = 1 / np.sqrt(2)
            a = np.zeros((dim, dim), dtype=complex)
            a[j, k], a[k, j] = 1j / np.sqrt(2), -1j / np.sqrt(2)
            out.extend([s, a])
    return out


def _random_hermitian(dim: int, rng, blocks=None) -> np.ndarray:
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    h = (g + g.conj().T) / 2
    if blocks is not None:
        h[blocks[:, None] != blocks[None, :]] = 0
    return h


@dataclass(frozen=True)
class UncorrelatedVerdict:
    uncorrelated: bool
    witness: float
    definition: str

    def __bool__(self) -> bool:
        return self.uncorrelated


def _observables(n: int, ssr: bool, trials: int | None, rng) -> list[np.ndarray]:
    blocks = parity_mask(n) if ssr else None
    if trials is None:
        return hermitian_basis(1 << n, blocks)
    return [_random_hermitian(1 << n, rng, blocks) for _ in range(trials)]


def is_uncorrelated(
    rho: FockOperator,
    modes_a: Iterable[int],
    definition: str = "ii",
    trials: int | None = 100,
    seed: int | None = None,
    tol: float = DEFAULT_TOL,
) -> UncorrelatedVerdict:
    """Test one of three definitions of an uncorrelated bipartite state.

    ``"ii"`` compares ``rho`` with ``rho_A ^ rho_B`` in Frobenius norm.
    ``"i"`` checks ``Tr(rho (O_A ^ O_B)) = Tr(rho_A O_A) Tr(rho_B O_B)`` over
    arbitrary Hermitian locals and ``"iii"`` over SSR observables only.
    With ``trials=None`` the observables run over a full Hermitian basis
    instead of random samples.
    """
    if definition not in ("i", "ii", "iii"):
        raise ValueError(f"unknown definition {definition!r}")
    verdict = is_ssr_state(rho, tol=max(tol, 1e-9))
    if not verdict:
        raise SSRError(verdict.reason)
    a, b = _split(rho.modes, modes_a)
    rho_a = ptrace(rho, b)
    rho_b = ptrace(rho, a)
    if definition == "ii":
        diff = np.linalg.norm(rho.matrix - wedge_operators(rho_a, rho_b).matrix)
        return UncorrelatedVerdict(bool(diff < tol), float(diff), definition)

    rng = np.random.default_rng(seed)
    ssr = definition == "iii"
    obs_a = _observables(len(a), ssr, trials, rng)
    obs_b = _observables(len(b), ssr, trials, rng)
    worst = 0.0
    if trials is None:
        pairs = [(x, y) for x in obs_a for y in obs_b]
    else:
        pairs = list(zip(obs_a, obs_b))
    for x, y in pairs:
        joint = wedge_operators(FockOperator(a, x), FockOperator(b, y))
        lhs = np.trace(rho.matrix @ joint.matrix)
        rhs = np.trace(rho_a.matrix @ x) * np.trace(rho_b.matrix @ y)
        worst = max(worst, abs(lhs - rhs))
    return UncorrelatedVerdict(bool(worst < tol), float(worst), definition)


def local_expectation(rho: FockOperator, obs: FockOperator) -> complex:
    return complex(np.trace(embed_local(obs, rho.modes).matrix @ rho.matrix))
