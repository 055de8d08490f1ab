"""Independent reference constructions used as test oracles."""

from functools import reduce

import numpy as np

SIGMA_PLUS = np.array([[0, 0], [1, 0]], dtype=complex)  # |1><0|
Z = np.diag([1.0, -1.0]).astype(complex)
I2 = np.eye(2, dtype=complex)


def kron_creation(n, j):
    """``f_j^dag`` on modes 1..n built from Pauli strings.

    Canonical index puts mode 1 in the least significant bit, so the
    Kronecker factors run from mode n (left) down to mode 1 (right); the
    parity string acts on the modes below j.
    """
    factors = []
    for mode in range(n, 0, -1):
        if mode > j:
            factors.append(I2)
        elif mode == j:
            factors.append(SIGMA_PLUS)
        else:
            factors.append(Z)
    return reduce(np.kron, factors, np.eye(1, dtype=complex))


def global_creation(modes, j):
    """Creation operator for label ``j`` on an ascending label tuple."""
    return kron_creation(len(modes), modes.index(j) + 1)


def basis_vector_by_string(modes, occupied_in_order):
    """``f_{o1}^dag f_{o2}^dag ... |Omega>`` in the given (unsorted) order."""
    vec = np.zeros(1 << len(modes), dtype=complex)
    vec[0] = 1
    for m in reversed(list(occupied_in_order)):
        vec = global_creation(modes, m) @ vec
    return vec


def random_matrix(rng, dim):
    return rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))


def random_vector(rng, dim):
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)


def random_split(rng, n_a, n_b):
    """Random interleaving of labels 1..n_a+n_b into two ascending sets."""
    labels = rng.permutation(np.arange(1, n_a + n_b + 1))
    return tuple(sorted(int(x) for x in labels[:n_a])), tuple(sorted(int(x) for x in labels[n_a:]))


def occupied(index, modes):
    return [m for p, m in enumerate(modes) if (index >> p) & 1]
