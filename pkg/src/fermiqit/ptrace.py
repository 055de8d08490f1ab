"""The fermionic partial trace.

Tracing mode ``m`` out of a ket-bra monomial with row pattern ``s`` and
column pattern ``r`` keeps only ``s_m == r_m`` and multiplies by
``(-1)**k`` with ``k = s_m * #{occupied j > m in s} + r_m * #{occupied j > m
in r}``.  This is the only trace that respects the SSR consistency
conditions.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .fock import (
    CANONICAL,
    FockOperator,
    FockState,
    ModeError,
    embed_local,
    popcounts,
    wedge_operators,
)
from .ssr import SSRError


@lru_cache(maxsize=256)
def _trace_tables(n: int, p: int) -> tuple[tuple[np.ndarray, np.ndarray], ...]:
    """For bit value 0 and 1: source indices with that bit and their signs.

    The sign of a monomial factorizes into a row part and a column part, so
    each slice only needs a vector of signs.
    """
    idx = np.arange(1 << n)
    out = []
    for b in (0, 1):
        sel = idx[((idx >> p) & 1) == b]
        if b:
            above = sel >> (p + 1)
            k = popcounts(n)[above] if n else np.zeros_like(above)
            sign = np.where(k & 1, -1.0, 1.0)
        else:
            sign = np.ones(len(sel))
        sel.flags.writeable = False
        sign.flags.writeable = False
        out.append((sel, sign))
    return tuple(out)


def ptrace_mode(rho: FockOperator, m: int) -> FockOperator:
    """Trace out the single mode ``m``."""
    if rho.basis != CANONICAL:
        raise ValueError("partial trace is defined on the canonical basis")
    if m not in rho.modes:
        raise ModeError(f"mode {m} not in {rho.modes}")
    p = rho.modes.index(m)
    mat = rho.matrix
    out = np.zeros((mat.shape[0] // 2,) * 2, dtype=complex)
    for sel, sign in _trace_tables(rho.n_modes, p):
        out += sign[:, None] * mat[np.ix_(sel, sel)] * sign[None, :]
    rest = rho.modes[:p] + rho.modes[p + 1 :]
    return FockOperator(rest, out)


def ptrace(
    rho: FockOperator, traced: Iterable[int], order: Sequence[int] | None = None
) -> FockOperator:
    """Trace out every mode in ``traced``.

    The composition is order independent; ``order`` exists so tests can
    exercise that.  By default modes are removed from the highest label down.
    """
    traced = set(int(m) for m in traced)
    missing = traced - set(rho.modes)
    if missing:
        raise ModeError(f"modes {sorted(missing)} not in {rho.modes}")
    if order is None:
        order = sorted(traced, reverse=True)
    elif set(order) != traced or len(order) != len(traced):
        raise ValueError("order must be a permutation of the traced modes")
    for m in order:
        rho = ptrace_mode(rho, m)
    return rho


def ptrace_keep(rho: FockOperator, keep: Iterable[int]) -> FockOperator:
    keep = set(keep)
    return ptrace(rho, [m for m in rho.modes if m not in keep])


def _require_definite(st: FockState, name: str) -> None:
    if st.parity() is None:
        raise SSRError(f"{name} has no definite parity")


def product_trace_shortcut(
    a: FockState, b: FockState, c: FockState, d: FockState, trace_first: bool = True
) -> FockOperator:
    """``Tr_M(|a><b| ^ |c><d|)`` for SSR pure states of definite parity.

    ``a, b`` live on ``M`` and ``c, d`` on the complement.  Both ket-bra
    factors must be parity preserving (``a, b`` share a parity, and so do
    ``c, d``); an odd factor next to odd traced states would pick up an
    extra sign.  With ``trace_first`` the result is ``<b|a> |c><d|``;
    otherwise ``M^c`` is traced and the result is ``<d|c> |a><b|``.
    """
    for st, name in ((a, "a"), (b, "b"), (c, "c"), (d, "d")):
        _require_definite(st, name)
    if a.parity() != b.parity() or c.parity() != d.parity():
        raise SSRError("each ket-bra factor must connect states of equal parity")
    if a.modes != b.modes or c.modes != d.modes:
        raise ModeError("kets and bras must share mode sets")
    if trace_first:
        return FockOperator(c.modes, np.vdot(b.amps, a.amps) * np.outer(c.amps, d.amps.conj()))
    return FockOperator(a.modes, np.vdot(d.amps, c.amps) * np.outer(a.amps, b.amps.conj()))


def random_ssr_observable(n: int, rng: np.random.Generator) -> np.ndarray:
    """Hermitian, block-diagonal in parity, standard complex Gaussian entries."""
    dim = 1 << n
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    h = (g + g.conj().T) / 2
    odd = popcounts(n) & 1
    h[odd[:, None] != odd[None, :]] = 0
    return h


def consistency_check(
    rho_ab: FockOperator,
    rho_a: FockOperator,
    trials: int = 100,
    seed: int | None = None,
) -> float:
    """Largest ``|Tr((O_A ^ I) rho_AB) - Tr(O_A rho_A)|`` over random SSR ``O_A``."""
    if trials < 1:
        raise ValueError("trials must be at least 1")
    if not set(rho_a.modes) <= set(rho_ab.modes):
        raise ModeError(f"{rho_a.modes} is not a subset of {rho_ab.modes}")
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        obs = FockOperator(rho_a.modes, random_ssr_observable(rho_a.n_modes, rng))
        full = embed_local(obs, rho_ab.modes)
        lhs = np.trace(full.matrix @ rho_ab.matrix)
        rhs = np.trace(obs.matrix @ rho_a.matrix)
        worst = max(worst, abs(lhs - rhs))
    return float(worst)


def wedge_trace_check(rho_a: FockOperator, rho_b: FockOperator) -> float:
    """Deviation of ``Tr_B(rho_A ^ rho_B)`` from ``rho_A Tr(rho_B)``."""
    joint = wedge_operators(rho_a, rho_b)
    return float(np.abs(ptrace(joint, rho_b.modes).matrix - rho_a.matrix * rho_b.trace()).max())
