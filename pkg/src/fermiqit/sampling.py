"""Seeded random SSR objects for tests and randomized checks."""

from __future__ import annotations

from typing import Sequence

import numpy as np
from scipy.linalg import sqrtm
from scipy.stats import unitary_group

from .fock import FockOperator, FockState, default_modes, parity_mask


def _modes(n: int, modes: Sequence[int] | None) -> tuple[int, ...]:
    return default_modes(n) if modes is None else tuple(modes)


def _gaussian(rng: np.random.Generator, shape) -> np.ndarray:
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def _sectors(n: int) -> tuple[np.ndarray, np.ndarray]:
    odd = parity_mask(n)
    return np.flatnonzero(~odd), np.flatnonzero(odd)


def block_structured(n: int, rng: np.random.Generator, anti: bool = False) -> np.ndarray:
    """Gaussian operator that is block diagonal (or anti-diagonal) in parity."""
    odd = parity_mask(n)
    m = _gaussian(rng, (1 << n, 1 << n))
    same = odd[:, None] == odd[None, :]
    m[same if anti else ~same] = 0
    return m


def random_ssr_state(
    n: int, rng: np.random.Generator, rank: int | None = None, modes: Sequence[int] | None = None
) -> FockOperator:
    """Block-diagonal Wishart density matrix."""
    dim = 1 << n
    g = _gaussian(rng, (dim, rank or dim))
    odd = parity_mask(n)
    # give every column a definite parity so the result is block diagonal
    col_odd = rng.integers(0, 2, g.shape[1]).astype(bool)
    g[odd[:, None] != col_odd[None, :]] = 0
    rho = g @ g.conj().T
    rho /= np.trace(rho)
    return FockOperator(_modes(n, modes), rho)


def random_ssr_pure_state(
    n: int, rng: np.random.Generator, parity: int | None = None, modes: Sequence[int] | None = None
) -> FockState:
    if parity is None:
        parity = 1 if n == 0 or rng.random() < 0.5 else -1
    odd = parity_mask(n)
    amps = _gaussian(rng, 1 << n)
    amps[odd if parity == 1 else ~odd] = 0
    return FockState(_modes(n, modes), amps / np.linalg.norm(amps))


def random_ssr_unitary(n: int, rng: np.random.Generator, modes: Sequence[int] | None = None) -> FockOperator:
    """Haar-random unitary on each parity sector."""
    u = np.zeros((1 << n, 1 << n), dtype=complex)
    for idx in _sectors(n):
        if len(idx) == 1:
            u[idx[0], idx[0]] = np.exp(2j * np.pi * rng.random())
        elif len(idx):
            u[np.ix_(idx, idx)] = unitary_group.rvs(len(idx), random_state=rng)
    return FockOperator(_modes(n, modes), u)


def random_antidiagonal_unitary(
    n: int, rng: np.random.Generator, modes: Sequence[int] | None = None
) -> FockOperator:
    """Unitary mapping even patterns onto odd ones and vice versa."""
    even, odd = _sectors(n)
    h = len(even)
    u = np.zeros((1 << n, 1 << n), dtype=complex)
    for rows, cols in ((odd, even), (even, odd)):
        blk = unitary_group.rvs(h, random_state=rng) if h > 1 else np.exp(2j * np.pi * rng.random()) * np.eye(1)
        u[np.ix_(rows, cols)] = blk
    return FockOperator(_modes(n, modes), u)


def random_kraus(
    n: int, n_kraus: int, rng: np.random.Generator, kinds: Sequence[bool] | None = None
) -> list[np.ndarray]:
    """Trace-preserving SSR Kraus list; ``kinds[k]`` True means anti-diagonal."""
    if kinds is None:
        kinds = [bool(rng.integers(0, 2)) for _ in range(n_kraus)]
    g = [block_structured(n, rng, anti) for anti in kinds]
    s = sum(x.conj().T @ x for x in g)
    inv_sqrt = np.linalg.inv(sqrtm(s))
    return [x @ inv_sqrt for x in g]


def spanning_ssr_states(n: int, modes: Sequence[int] | None = None) -> list[FockOperator]:
    """Pure SSR states whose projectors span all block-diagonal operators."""
    modes = _modes(n, modes)
    dim = 1 << n
    odd = parity_mask(n)
    out = []
    for j in range(dim):
        v = np.zeros(dim, dtype=complex)
        v[j] = 1
        out.append(v)
        for k in range(j + 1, dim):
            if odd[j] != odd[k]:
                continue
            for phase in (1, 1j):
                v = np.zeros(dim, dtype=complex)
                v[j], v[k] = 1 / np.sqrt(2), phase / np.sqrt(2)
                out.append(v)
    return [FockOperator(modes, np.outer(v, v.conj())) for v in out]
