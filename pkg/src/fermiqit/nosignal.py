"""Four-step protocol showing that anti-diagonal local unitaries would signal.

A control qubit starts in ``|+>`` next to a fermionic state ``rho_AB``.  Bob
applies ``U_B``, Alice applies ``U_A`` controlled on the qubit, then both
undo their operations.  If the two local unitaries anticommute the qubit
ends in ``|->``, so Bob's choice is visible to Alice.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fock import DEFAULT_TOL, FockOperator, ModeError, embed_local
from .ssr import is_unitary_matrix

PLUS = np.array([1, 1], dtype=complex) / np.sqrt(2)
MINUS = np.array([1, -1], dtype=complex) / np.sqrt(2)


@dataclass(frozen=True, eq=False)
class ProtocolResult:
    qubit: np.ndarray  # final 2x2 qubit density matrix
    fermionic: FockOperator  # final reduced state of the modes
    hybrid: np.ndarray  # full qubit (x) fermion density matrix

    @property
    def signal_strength(self) -> float:
        return signal_strength(self.qubit)


def _check_unitary(u: FockOperator, name: str) -> None:
    if not is_unitary_matrix(u.matrix, tol=1e-9):
        raise ValueError(f"{name} is not unitary")


def run_protocol(
    rho_ab: FockOperator, u_a: FockOperator, u_b: FockOperator | None = None
) -> ProtocolResult:
    """Run the protocol; ``u_b=None`` leaves Bob's modes untouched.

    Local unitaries are placed on the joint modes with ``embed_local`` (the
    unitary in the first wedge slot), which reproduces their action as
    polynomials in the local mode operators.
    """
    modes = rho_ab.modes
    _check_unitary(u_a, "U_A")
    if not set(u_a.modes) <= set(modes):
        raise ModeError(f"U_A acts on {u_a.modes}, outside {modes}")
    ua = embed_local(u_a, modes).matrix
    dim = rho_ab.dim
    if u_b is not None:
        _check_unitary(u_b, "U_B")
        if set(u_b.modes) & set(u_a.modes) or not set(u_b.modes) <= set(modes):
            raise ModeError("U_B must act on modes disjoint from U_A inside the state")
        ub = embed_local(u_b, modes).matrix
    else:
        ub = np.eye(dim)

    eye2 = np.eye(2)
    p0 = np.diag([1.0, 0.0])
    p1 = np.diag([0.0, 1.0])
    step_b = np.kron(eye2, ub)
    controlled = np.kron(p0, np.eye(dim)) + np.kron(p1, ua)

    state = np.kron(np.outer(PLUS, PLUS.conj()), rho_ab.matrix)
    for g in (step_b, controlled, step_b.conj().T, controlled.conj().T):
        state = g @ state @ g.conj().T

    t = state.reshape(2, dim, 2, dim)
    qubit = np.einsum("aibi->ab", t)
    ferm = np.einsum("aiaj->ij", t)
    return ProtocolResult(qubit, FockOperator(modes, ferm), state)


def signal_strength(qubit: np.ndarray, tol: float = DEFAULT_TOL) -> float:
    """``<-|rho|->``: 1 for full signaling, 0 for none."""
    q = np.asarray(qubit, dtype=complex)
    if q.shape != (2, 2):
        raise ValueError("expected a 2x2 qubit density matrix")
    val = float(np.real(MINUS.conj() @ q @ MINUS))
    return min(max(val, 0.0), 1.0) if -tol <= val <= 1 + tol else val
