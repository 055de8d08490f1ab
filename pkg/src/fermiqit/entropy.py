import numpy as np

from .fock import DEFAULT_TOL, FockOperator


def von_neumann_entropy(rho, tol: float = DEFAULT_TOL) -> float:
    """Entropy in bits, with ``0 log 0 = 0``."""
    m = rho.matrix if isinstance(rho, FockOperator) else np.asarray(rho, dtype=complex)
    lam = np.linalg.eigvalsh((m + m.conj().T) / 2)
    if lam.min(initial=0.0) < -tol:
        raise ValueError(f"not positive semidefinite (min eigenvalue {lam.min():.3g})")
    lam = lam[lam > tol]
    # eigenvalues a hair above 1 would give a tiny negative result
    return max(float(-(lam * np.log2(lam)).sum()), 0.0)
