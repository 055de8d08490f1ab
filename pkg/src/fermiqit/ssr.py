"""Parity superselection structure.

The parity-sorted basis B' lists the even occupation patterns first and the
odd ones after, each class keeping its canonical relative order.  Physical
states and observables are block diagonal in B'; general SSR-respecting
linear maps are either block diagonal or block anti-diagonal.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .fock import CANONICAL, DEFAULT_TOL, PARITY, FockOperator, FockState, parity_mask


class SSRError(ValueError):
    """Raised when an input violates the parity superselection rule."""


@dataclass(frozen=True, eq=False)
class ParityBasisMap:
    """``perm[i]`` is the B' position of canonical index ``i``."""

    n: int
    perm: np.ndarray
    order: np.ndarray  # order[k] = canonical index at B' position k

    @property
    def half(self) -> int:
        return max(len(self.perm) // 2, 1) if self.n else 1


@lru_cache(maxsize=None)
def parity_basis_map(n: int) -> ParityBasisMap:
    odd = parity_mask(n)
    order = np.argsort(odd, kind="stable")
    perm = np.empty_like(order)
    perm[order] = np.arange(len(order))
    order.flags.writeable = False
    perm.flags.writeable = False
    return ParityBasisMap(n, perm, order)


def _even_count(n: int) -> int:
    # N = 0 has a single (even) vacuum state
    return 1 if n == 0 else 1 << (n - 1)


def to_parity_basis(op: FockOperator | FockState):
    if op.basis == PARITY:
        return op
    order = parity_basis_map(len(op.modes)).order
    if isinstance(op, FockState):
        return FockState(op.modes, op.amps[order], PARITY)
    return FockOperator(op.modes, op.matrix[np.ix_(order, order)], PARITY)


def from_parity_basis(op: FockOperator | FockState):
    if op.basis == CANONICAL:
        return op
    perm = parity_basis_map(len(op.modes)).perm
    if isinstance(op, FockState):
        return FockState(op.modes, op.amps[perm], CANONICAL)
    return FockOperator(op.modes, op.matrix[np.ix_(perm, perm)], CANONICAL)


# ---------------------------------------------------------------------------
# block classification


class BlockKind(enum.Enum):
    DIAGONAL = "BlockDiagonal"
    ANTI_DIAGONAL = "BlockAntiDiagonal"
    NEITHER = "Neither"


@dataclass(frozen=True, eq=False)
class BlockForm:
    """Block structure of an operator in B'.

    ``blocks`` holds ``(O_ee, O_oo)`` for block-diagonal operators and
    ``(O_eo, O_oe)`` for block-anti-diagonal ones; for ``Neither`` it holds
    all four blocks in the order ``(ee, oo, eo, oe)``.
    """

    kind: BlockKind
    blocks: tuple[np.ndarray, ...]
    n: int

    def assemble(self) -> np.ndarray:
        """Reassemble the operator in B'."""
        h = _even_count(self.n)
        dim = 1 << self.n
        out = np.zeros((dim, dim), dtype=complex)
        if self.kind is BlockKind.DIAGONAL:
            out[:h, :h], out[h:, h:] = self.blocks
        elif self.kind is BlockKind.ANTI_DIAGONAL:
            out[:h, h:], out[h:, :h] = self.blocks
        else:
            out[:h, :h], out[h:, h:], out[:h, h:], out[h:, :h] = self.blocks
        return out


def _parity_blocks(op: FockOperator):
    m = to_parity_basis(op).matrix
    h = _even_count(op.n_modes)
    return m[:h, :h], m[h:, h:], m[:h, h:], m[h:, :h]


def _matrix(op) -> FockOperator:
    if isinstance(op, FockOperator):
        return op
    mat = np.asarray(op, dtype=complex)
    n = int(round(np.log2(mat.shape[0])))
    return FockOperator(tuple(range(1, n + 1)), mat)


def classify_operator(op, tol: float = DEFAULT_TOL) -> BlockForm:
    op = _matrix(op)
    ee, oo, eo, oe = _parity_blocks(op)
    off = max(np.abs(eo).max(initial=0.0), np.abs(oe).max(initial=0.0))
    on = max(np.abs(ee).max(initial=0.0), np.abs(oo).max(initial=0.0))
    if off <= tol:
        return BlockForm(BlockKind.DIAGONAL, (ee.copy(), oo.copy()), op.n_modes)
    if on <= tol:
        return BlockForm(BlockKind.ANTI_DIAGONAL, (eo.copy(), oe.copy()), op.n_modes)
    return BlockForm(BlockKind.NEITHER, (ee.copy(), oo.copy(), eo.copy(), oe.copy()), op.n_modes)


def parity_projectors(n: int, modes=None) -> tuple[FockOperator, FockOperator]:
    """``(P_e, P_o)`` on ``n`` modes in the canonical basis."""
    modes = tuple(range(1, n + 1)) if modes is None else tuple(modes)
    odd = parity_mask(n)
    return (
        FockOperator(modes, np.diag((~odd).astype(complex))),
        FockOperator(modes, np.diag(odd.astype(complex))),
    )


# ---------------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class Verdict:
    """Truthy result of a validation with the first failed condition."""

    ok: bool
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


def _is_hermitian(m: np.ndarray, tol: float) -> bool:
    return bool(np.allclose(m, m.conj().T, atol=tol, rtol=0))


def is_ssr_state(rho, tol: float = DEFAULT_TOL) -> Verdict:
    rho = _matrix(rho)
    m = rho.matrix
    if not _is_hermitian(m, tol):
        return Verdict(False, "not Hermitian")
    if classify_operator(rho, tol).kind is not BlockKind.DIAGONAL:
        return Verdict(False, "parity SSR violated: coherence between even and odd sectors")
    tr = np.trace(m)
    if abs(tr - 1) > tol:
        return Verdict(False, f"trace is {tr.real:.6g}, expected 1")
    lo = float(np.linalg.eigvalsh((m + m.conj().T) / 2).min())
    if lo < -tol:
        return Verdict(False, f"not positive semidefinite (min eigenvalue {lo:.3g})")
    return Verdict(True)


def is_ssr_pure_state(psi: FockState, tol: float = DEFAULT_TOL) -> Verdict:
    if abs(psi.norm - 1) > tol:
        return Verdict(False, f"norm is {psi.norm:.6g}, expected 1")
    if psi.parity(tol) is None:
        return Verdict(False, "parity SSR violated: superposition of even and odd patterns")
    return Verdict(True)


def is_ssr_observable(op, tol: float = DEFAULT_TOL) -> bool:
    op = _matrix(op)
    return _is_hermitian(op.matrix, tol) and classify_operator(op, tol).kind is BlockKind.DIAGONAL


def is_ssr_projector(op, tol: float = DEFAULT_TOL) -> bool:
    op = _matrix(op)
    m = op.matrix
    return (
        _is_hermitian(m, tol)
        and np.allclose(m @ m, m, atol=tol, rtol=0)
        and classify_operator(op, tol).kind is BlockKind.DIAGONAL
    )


def is_unitary_matrix(m: np.ndarray, tol: float = DEFAULT_TOL) -> bool:
    eye = np.eye(m.shape[0])
    return bool(
        np.allclose(m @ m.conj().T, eye, atol=tol, rtol=0)
        and np.allclose(m.conj().T @ m, eye, atol=tol, rtol=0)
    )


def is_ssr_unitary(op, tol: float = DEFAULT_TOL) -> bool:
    """Unitary and block diagonal; anti-diagonal unitaries are rejected."""
    op = _matrix(op)
    return is_unitary_matrix(op.matrix, tol) and classify_operator(op, tol).kind is BlockKind.DIAGONAL
