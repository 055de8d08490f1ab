"""SSR quantum operations in Kraus, Choi and Stinespring form.

Mode layout conventions used throughout:

* Choi states live on ``2N`` modes; the channel acts on modes ``1..N`` and
  the reference copy occupies ``N+1..2N``.  The canonical index of
  ``|i>_H ^ |j>_L`` is therefore ``i + 2**N j`` with no sign.
* A Stinespring environment occupies the ``K`` modes directly above the
  system, so ``|i>_S ^ |e>_E`` has index ``i + 2**N e``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .fock import (
    DEFAULT_TOL,
    FockOperator,
    FockState,
    ModeError,
    default_modes,
    parity_mask,
    wedge_operators,
)
from .ptrace import ptrace
from .ssr import BlockKind, SSRError, classify_operator, is_ssr_unitary

PRUNE_TOL = 1e-12

UNIT = "unit"
SCALED = "scaled"


def _as_matrix(op) -> np.ndarray:
    return op.matrix if isinstance(op, FockOperator) else np.asarray(op, dtype=complex)


def _n_from_dim(dim: int) -> int:
    n = dim.bit_length() - 1
    if 1 << n != dim:
        raise ValueError(f"dimension {dim} is not a power of two")
    return n


@dataclass(frozen=True, eq=False)
class KrausChannel:
    """``rho -> sum_k E_k rho E_k^dag`` with every ``E_k`` of definite block form."""

    kraus: tuple[np.ndarray, ...]
    kinds: tuple[BlockKind, ...] = field(default=())
    n: int = -1

    def __post_init__(self):
        mats = tuple(np.array(_as_matrix(k), dtype=complex) for k in self.kraus)
        if not mats:
            raise ValueError("a channel needs at least one Kraus operator")
        dim = mats[0].shape[0]
        n = _n_from_dim(dim)
        kinds = []
        for i, m in enumerate(mats):
            if m.shape != (dim, dim):
                raise ValueError(f"Kraus operator {i} has shape {m.shape}, expected {(dim, dim)}")
            kind = classify_operator(FockOperator(default_modes(n), m)).kind
            if kind is BlockKind.NEITHER:
                raise SSRError(f"Kraus operator {i} mixes parity sectors")
            m.flags.writeable = False
            kinds.append(kind)
        object.__setattr__(self, "kraus", mats)
        object.__setattr__(self, "kinds", tuple(kinds))
        object.__setattr__(self, "n", n)

    @property
    def dim(self) -> int:
        return 1 << self.n

    def completeness(self) -> np.ndarray:
        return sum(k.conj().T @ k for k in self.kraus)

    def is_trace_preserving(self, tol: float = DEFAULT_TOL) -> bool:
        return bool(np.allclose(self.completeness(), np.eye(self.dim), atol=tol, rtol=0))

    def __call__(self, rho):
        return apply_kraus(self, rho)


def apply_kraus(ch: KrausChannel, rho):
    m = _as_matrix(rho)
    if m.shape != (ch.dim, ch.dim):
        raise ValueError(f"state has shape {m.shape}, channel acts on dimension {ch.dim}")
    out = sum(k @ m @ k.conj().T for k in ch.kraus)
    if isinstance(rho, FockOperator):
        return FockOperator(rho.modes, out)
    return out


# ---------------------------------------------------------------------------
# Choi


@dataclass(frozen=True, eq=False)
class ChoiState:
    """``sigma = (phi ^ I)(|alpha><alpha|)`` with ``|alpha> = c sum_s |s>_H ^ |s>_L``.

    ``convention`` is ``"unit"`` for ``c = 2**(-N/2)`` (normalized alpha) or
    ``"scaled"`` for ``c = 2**(-N)``.
    """

    n: int
    sigma: np.ndarray
    convention: str = UNIT

    def __post_init__(self):
        if self.convention not in (UNIT, SCALED):
            raise ValueError(f"unknown convention {self.convention!r}")
        s = np.asarray(self.sigma, dtype=complex)
        if s.shape != (1 << (2 * self.n),) * 2:
            raise ValueError("Choi matrix must act on the doubled mode space")
        s.flags.writeable = False
        object.__setattr__(self, "sigma", s)

    @property
    def c(self) -> float:
        return alpha_prefactor(self.n, self.convention)

    @property
    def operator(self) -> FockOperator:
        return FockOperator(default_modes(2 * self.n), self.sigma)

    def recover(self, eta: FockState) -> np.ndarray:
        """``phi(|eta><eta|) = c**-2 <eta~| sigma |eta~>`` with ``eta~ = conj(eta)``.

        The partial inner product acts on the reference modes.  Written as
        ``Tr_L((I ^ |eta~><eta~|) sigma)`` it needs only the fermionic
        partial trace.
        """
        if eta.parity() is None:
            raise SSRError("recovery needs a state of definite parity")
        d = 1 << self.n
        tilde = eta.amps.conj()
        proj = FockOperator(default_modes(self.n), np.outer(tilde, tilde.conj()))
        ident = FockOperator(default_modes(self.n), np.eye(d))
        lift = FockOperator(tuple(range(self.n + 1, 2 * self.n + 1)), proj.matrix)
        filt = wedge_operators(ident, lift).matrix
        out = ptrace(FockOperator(default_modes(2 * self.n), filt @ self.sigma), lift.modes)
        return out.matrix / self.c**2


def alpha_prefactor(n: int, convention: str = UNIT) -> float:
    return 2.0 ** (-n / 2) if convention == UNIT else 2.0 ** (-n)


def alpha_state(n: int, convention: str = UNIT) -> np.ndarray:
    d = 1 << n
    vec = np.zeros(d * d, dtype=complex)
    s = np.arange(d)
    vec[s + d * s] = alpha_prefactor(n, convention)
    return vec


def choi_of_map(fn: Callable[[np.ndarray], np.ndarray], n: int, convention: str = UNIT) -> ChoiState:
    """Choi matrix of an arbitrary linear map on ``n`` modes.

    Uses linearity: ``sigma = c**2 sum_{s,t} phi(|s><t|) ^ |s><t|``, the
    reference factor sitting in the high modes.
    """
    d = 1 << n
    c2 = alpha_prefactor(n, convention) ** 2
    sigma = np.zeros((d * d, d * d), dtype=complex)
    for s in range(d):
        for t in range(d):
            e = np.zeros((d, d), dtype=complex)
            e[s, t] = 1
            sigma += c2 * np.kron(e, np.asarray(fn(e), dtype=complex))
    return ChoiState(n, sigma, convention)


def choi_of_channel(ch: KrausChannel, convention: str = UNIT) -> ChoiState:
    n = ch.n
    alpha = alpha_state(n, convention)
    ident = FockOperator(tuple(range(n + 1, 2 * n + 1)), np.eye(ch.dim))
    sigma = np.zeros((ch.dim**2,) * 2, dtype=complex)
    for k in ch.kraus:
        ext = wedge_operators(FockOperator(default_modes(n), k), ident).matrix
        v = ext @ alpha
        sigma += np.outer(v, v.conj())
    return ChoiState(n, sigma, convention)


def _fix_phase(v: np.ndarray) -> np.ndarray:
    mag = np.round(np.abs(v), 12)
    j = int(np.argmax(mag))
    return v * (abs(v[j]) / v[j]) if abs(v[j]) > 0 else v


def kraus_from_choi(choi: ChoiState, tol: float = DEFAULT_TOL) -> KrausChannel:
    n = choi.n
    d = 1 << n
    sigma = choi.sigma
    if not np.allclose(sigma, sigma.conj().T, atol=tol, rtol=0):
        raise ValueError("Choi matrix is not Hermitian")
    odd = parity_mask(2 * n)
    if np.abs(sigma[odd[:, None] != odd[None, :]]).max(initial=0.0) > tol:
        raise SSRError("Choi matrix is not block diagonal in the doubled space")
    vals, vecs = [], []
    for sector in (~odd, odd):
        idx = np.flatnonzero(sector)
        w, v = np.linalg.eigh(sigma[np.ix_(idx, idx)])
        for a, col in zip(w, v.T):
            full = np.zeros(d * d, dtype=complex)
            full[idx] = col
            vals.append(a)
            vecs.append(full)
    lo = min(vals)
    if lo < -tol:
        raise ValueError(f"Choi matrix is not positive semidefinite (min eigenvalue {lo:.3g})")
    order = np.argsort(-np.array(vals), kind="stable")
    kraus = []
    for i in order:
        a = vals[i]
        if a <= tol:
            continue
        s = _fix_phase(vecs[i])
        # vec index i + d*j  ->  matrix [i, j]
        e = np.sqrt(a) / choi.c * s.reshape(d, d).T
        if np.linalg.norm(e, 2) >= PRUNE_TOL:
            kraus.append(e)
    if not kraus:
        kraus = [np.zeros((d, d), dtype=complex)]
    return KrausChannel(tuple(kraus))


# ---------------------------------------------------------------------------
# Stinespring


@dataclass(frozen=True, eq=False)
class StinespringDilation:
    """Environment of ``k`` modes in state ``omega`` and a global SSR unitary.

    The environment modes sit directly above the ``n`` system modes.
    """

    n: int
    k: int
    omega: np.ndarray
    unitary: np.ndarray

    def __post_init__(self):
        omega = np.asarray(self.omega, dtype=complex).reshape(-1)
        u = np.asarray(self.unitary, dtype=complex)
        if omega.shape != (1 << self.k,):
            raise ValueError(f"environment state needs {1 << self.k} amplitudes")
        if u.shape != (1 << (self.n + self.k),) * 2:
            raise ValueError("unitary dimension does not match system plus environment")
        omega.flags.writeable = False
        u.flags.writeable = False
        object.__setattr__(self, "omega", omega)
        object.__setattr__(self, "unitary", u)

    @property
    def system_modes(self) -> tuple[int, ...]:
        return default_modes(self.n)

    @property
    def env_modes(self) -> tuple[int, ...]:
        return tuple(range(self.n + 1, self.n + self.k + 1))

    def validate(self, tol: float = DEFAULT_TOL) -> None:
        if FockState(self.env_modes, self.omega).parity(tol) is None or abs(np.linalg.norm(self.omega) - 1) > tol:
            raise SSRError("parity SSR violated: environment state is not an SSR pure state")
        if not is_ssr_unitary(FockOperator(default_modes(self.n + self.k), self.unitary), tol):
            raise SSRError("parity SSR violated: global unitary is not an SSR unitary")


def _env_slots(kinds: Sequence[BlockKind], k: int) -> list[int]:
    odd = parity_mask(k)
    pools = {False: list(np.flatnonzero(~odd)), True: list(np.flatnonzero(odd))}
    need = {False: 0, True: 0}
    for kind in kinds:
        need[kind is BlockKind.ANTI_DIAGONAL] += 1
    for is_odd in (False, True):
        if need[is_odd] > len(pools[is_odd]):
            # each parity class holds 2**(K-1) basis states once K >= 1
            required = max(k, 1)
            while 1 << (required - 1) < need[is_odd]:
                required += 1
            label = "odd" if is_odd else "even"
            raise ModeError(
                f"{need[is_odd]} {label} Kraus operators need {need[is_odd]} {label} environment "
                f"states; use K >= {required}"
            )
    slots = []
    for kind in kinds:
        slots.append(int(pools[kind is BlockKind.ANTI_DIAGONAL].pop(0)))
    return slots


def stinespring_from_kraus(
    ch: KrausChannel, k: int | None = None, tol: float = DEFAULT_TOL
) -> StinespringDilation:
    if not ch.is_trace_preserving(tol=max(tol, 1e-9)):
        raise ValueError("channel is not trace preserving; the dilation would not be an isometry")
    n, d = ch.n, ch.dim
    if k is None:
        k = max(len(ch.kraus), n)
    slots = _env_slots(ch.kinds, k)
    dim = d << k
    v = np.zeros((dim, d), dtype=complex)
    for e, op in zip(slots, ch.kraus):
        v[e * d : (e + 1) * d, :] += op
    u = np.zeros((dim, dim), dtype=complex)
    odd = parity_mask(n + k)
    for sector in (~odd, odd):
        idx = np.flatnonzero(sector)
        fixed = idx[idx < d]  # inputs |j> ^ |Omega>_E
        free = idx[idx >= d]
        block = v[np.ix_(idx, fixed)]
        q, _ = np.linalg.qr(np.hstack([block, np.eye(len(idx))]))
        u[np.ix_(idx, fixed)] = block
        u[np.ix_(idx, free)] = q[:, len(fixed) : len(idx)]
    omega = np.zeros(1 << k, dtype=complex)
    omega[0] = 1
    return StinespringDilation(n, k, omega, u)


def kraus_from_stinespring(d: StinespringDilation, tol: float = DEFAULT_TOL) -> KrausChannel:
    """``E_e = <e|_E U |omega>_E`` for each environment basis state ``e``."""
    d.validate(tol=max(tol, 1e-9))
    dim = 1 << d.n
    u = d.unitary.reshape(1 << d.k, dim, 1 << d.k, dim)  # [e, a, e', b]
    ops = np.einsum("eafb,f->eab", u, d.omega)
    kraus = [op for op in ops if np.linalg.norm(op, 2) >= PRUNE_TOL]
    return KrausChannel(tuple(kraus))


def apply_stinespring(d: StinespringDilation, rho) -> np.ndarray:
    """``Tr_E(U (rho ^ omega) U^dag)`` via the fermionic partial trace."""
    m = _as_matrix(rho)
    sys = FockOperator(d.system_modes, m)
    env = FockOperator(d.env_modes, np.outer(d.omega, d.omega.conj()))
    joint = wedge_operators(sys, env).matrix
    out = d.unitary @ joint @ d.unitary.conj().T
    return ptrace(FockOperator(default_modes(d.n + d.k), out), d.env_modes).matrix


# ---------------------------------------------------------------------------
# axioms


@dataclass(frozen=True)
class AxiomReport:
    trace_preserving: bool
    trace_deviation: float
    convex_linear: bool
    convexity_deviation: float
    completely_positive: bool
    min_choi_eigenvalue: float

    @property
    def ok(self) -> bool:
        return self.trace_preserving and self.convex_linear and self.completely_positive

    def violations(self) -> list[str]:
        out = []
        if not self.trace_preserving:
            out.append(f"trace not preserved (deviation {self.trace_deviation:.3g})")
        if not self.convex_linear:
            out.append(f"not convex-linear (deviation {self.convexity_deviation:.3g})")
        if not self.completely_positive:
            out.append(f"not completely positive (min Choi eigenvalue {self.min_choi_eigenvalue:.3g})")
        return out


def verify_axioms(
    ch: KrausChannel | Callable[[np.ndarray], np.ndarray],
    trials: int = 20,
    n: int | None = None,
    seed: int | None = None,
    tol: float = DEFAULT_TOL,
) -> AxiomReport:
    """Check trace preservation, convex linearity and complete positivity.

    ``ch`` may be any linear map given as a callable, in which case ``n``
    must be supplied.
    """
    from .sampling import random_ssr_state

    if isinstance(ch, KrausChannel):
        n = ch.n
        fn = lambda m: apply_kraus(ch, m)  # noqa: E731
    else:
        if n is None:
            raise ValueError("mode count n is required for a bare linear map")
        fn = ch
    if trials < 1:
        raise ValueError("trials must be at least 1")
    rng = np.random.default_rng(seed)
    tr_dev = conv_dev = 0.0
    for _ in range(trials):
        rhos = [random_ssr_state(n, rng).matrix for _ in range(3)]
        p = rng.dirichlet(np.ones(3))
        outs = [np.asarray(fn(r)) for r in rhos]
        tr_dev = max(tr_dev, max(abs(np.trace(o) - 1) for o in outs))
        mix = np.asarray(fn(sum(pi * r for pi, r in zip(p, rhos))))
        conv_dev = max(conv_dev, float(np.abs(mix - sum(pi * o for pi, o in zip(p, outs))).max()))
    sigma = choi_of_map(fn, n).sigma
    lo = float(np.linalg.eigvalsh((sigma + sigma.conj().T) / 2).min())
    return AxiomReport(
        trace_preserving=bool(tr_dev < tol),
        trace_deviation=float(tr_dev),
        convex_linear=bool(conv_dev < tol),
        convexity_deviation=conv_dev,
        completely_positive=bool(lo > -tol),
        min_choi_eigenvalue=lo,
    )
