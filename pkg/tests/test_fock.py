import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fermiqit.fock import (
    FockOperator,
    FockState,
    ModeError,
    OccPattern,
    annihilation_operator,
    apply_annihilation,
    apply_creation,
    creation_operator,
    embed_local,
    index_pattern,
    max_modes,
    number_operator,
    parity_operator,
    pattern_index,
    vacuum_overlap,
    wedge_operators,
    wedge_states,
)

from helpers import (
    basis_vector_by_string,
    kron_creation,
    occupied,
    random_matrix,
    random_split,
    random_vector,
)

seeds = st.integers(0, 2**32 - 1)


# --- basis indexing ---------------------------------------------------------


def test_pattern_index_examples():
    assert pattern_index("0000") == 0
    assert pattern_index("110") == 3
    assert pattern_index(OccPattern((0, 0, 1))) == 4


@pytest.mark.parametrize("n", range(0, 7))
def test_index_pattern_round_trip(n):
    for i in range(1 << n):
        p = index_pattern(i, n)
        assert pattern_index(p) == i
        assert p.n_modes == n
        assert 0 <= p.particle_number <= n


def test_index_pattern_out_of_range():
    with pytest.raises(IndexError):
        index_pattern(8, 3)
    with pytest.raises(IndexError):
        index_pattern(-1, 3)


def test_basis_listing_order():
    # |Omega>, |1>, |2>, |1^2>, |3>, ...
    labels = [str(index_pattern(i, 3)) for i in range(5)]
    assert labels == ["000", "100", "010", "110", "001"]


# --- creation and annihilation ----------------------------------------------


@pytest.mark.parametrize("n", range(1, 6))
def test_creation_matches_pauli_string_oracle(n):
    for j in range(1, n + 1):
        assert np.array_equal(creation_operator(n, j).matrix, kron_creation(n, j))


def test_creation_examples():
    vac = FockState.vacuum(2)
    out = apply_creation(vac, 1)
    assert np.array_equal(out.amps, FockState.basis_state("10").amps)
    a = apply_creation(apply_creation(vac, 2), 1)
    b = apply_creation(apply_creation(vac, 1), 2)
    assert np.allclose(a.amps, -b.amps)
    assert np.allclose(a.amps, FockState.basis_state("11").amps)
    assert np.count_nonzero(apply_annihilation(vac, 1).amps) == 0


def test_unknown_mode_rejected():
    with pytest.raises(ModeError):
        apply_creation(FockState.vacuum(2), 3)


def test_apply_matches_matrix():
    rng = np.random.default_rng(5)
    psi = FockState((2, 5, 7), random_vector(rng, 8))
    for j in (2, 5, 7):
        cr = creation_operator((2, 5, 7), j).matrix
        assert np.allclose(apply_creation(psi, j).amps, cr @ psi.amps)
        assert np.allclose(apply_annihilation(psi, j).amps, cr.conj().T @ psi.amps)


@settings(max_examples=200, deadline=None)
@given(seeds)
def test_anticommutation_relations(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 6))
    i, j = (int(x) for x in rng.integers(1, n + 1, 2))
    fi, fj = annihilation_operator(n, i).matrix, annihilation_operator(n, j).matrix
    eye = np.eye(1 << n)
    assert np.allclose(fi @ fj + fj @ fi, 0, atol=1e-12)
    assert np.allclose(fi @ fj.conj().T + fj.conj().T @ fi, (i == j) * eye, atol=1e-12)
    # also on a random state through the vector routines
    psi = FockState(tuple(range(1, n + 1)), random_vector(rng, 1 << n))
    lhs = apply_annihilation(apply_creation(psi, j), i).amps + apply_creation(apply_annihilation(psi, i), j).amps
    assert np.allclose(lhs, (i == j) * psi.amps, atol=1e-12)


@pytest.mark.parametrize("n", range(1, 6))
def test_vacuum_projector_identity(n):
    prod = np.eye(1 << n)
    for j in range(n, 0, -1):  # f_N ... f_1
        prod = prod @ annihilation_operator(n, j).matrix
    for j in range(1, n + 1):  # f_1^dag ... f_N^dag
        prod = prod @ creation_operator(n, j).matrix
    expected = np.zeros((1 << n, 1 << n))
    expected[0, 0] = 1
    assert np.allclose(prod, expected, atol=1e-12)


# --- vacuum overlap ---------------------------------------------------------


def test_vacuum_overlap_examples():
    assert vacuum_overlap([], []) == 1
    assert vacuum_overlap([1], [2]) == 0
    assert vacuum_overlap([1, 2], [2, 1]) == -1
    assert vacuum_overlap([1], [1, 2]) == 0


def _brute_overlap(left, right, n=4):
    def build(seq):
        st_ = FockState.vacuum(n)
        for m in reversed(seq):
            st_ = apply_creation(st_, m)
        return st_.amps

    val = np.vdot(build(left), build(right))
    assert abs(val.imag) == 0
    return int(val.real)


def test_vacuum_overlap_exhaustive():
    lists = [list(p) for k in range(4) for p in itertools.product(range(1, 5), repeat=k)]
    for left in lists:
        for right in lists:
            assert vacuum_overlap(left, right) == _brute_overlap(left, right)


# --- wedge product ----------------------------------------------------------


def test_wedge_state_examples():
    vac = FockState.vacuum([3])
    psi = FockState((1, 2), random_vector(np.random.default_rng(0), 4))
    assert np.allclose(wedge_states(FockState.vacuum([]), psi).amps, psi.amps)
    assert np.allclose(wedge_states(psi, FockState.vacuum(())).amps, psi.amps)
    one = FockState.basis_state("1", [1])
    two = FockState.basis_state("1", [2])
    assert np.array_equal(wedge_states(one, two).amps, FockState.basis_state("11").amps)
    assert np.array_equal(wedge_states(two, one).amps, -FockState.basis_state("11").amps)
    assert wedge_states(psi, vac).modes == (1, 2, 3)


def test_wedge_overlap_rejected():
    with pytest.raises(ModeError):
        wedge_states(FockState.vacuum([1, 2]), FockState.vacuum([2]))


@pytest.mark.parametrize("seed", range(10))
def test_wedge_states_match_creation_strings(seed):
    rng = np.random.default_rng(seed)
    ma, mb = random_split(rng, 2, 3)
    merged = tuple(sorted(ma + mb))
    for ia in range(4):
        for ib in range(8):
            a = FockState(ma, np.eye(4)[ia])
            b = FockState(mb, np.eye(8)[ib])
            expected = basis_vector_by_string(merged, occupied(ia, ma) + occupied(ib, mb))
            assert np.array_equal(wedge_states(a, b).amps, expected)


@pytest.mark.parametrize("seed", range(5))
def test_wedge_operators_match_ket_bra_rule(seed):
    # (|a><a'|) ^ (|b><b'|) = (|a> ^ |b>)(<a'| ^ <b'|) with <i|^<j| = (|i>^|j>)^dag
    rng = np.random.default_rng(seed)
    ma, mb = random_split(rng, 2, 2)
    merged = tuple(sorted(ma + mb))
    for a, a2, b, b2 in itertools.product(range(4), repeat=4):
        ea = np.zeros((4, 4)); ea[a, a2] = 1
        eb = np.zeros((4, 4)); eb[b, b2] = 1
        ket = basis_vector_by_string(merged, occupied(a, ma) + occupied(b, mb))
        bra = basis_vector_by_string(merged, occupied(a2, ma) + occupied(b2, mb))
        out = wedge_operators(FockOperator(ma, ea), FockOperator(mb, eb)).matrix
        assert np.array_equal(out, np.outer(ket, bra.conj()))


def test_wedge_operator_examples():
    eye = wedge_operators(FockOperator.identity([1, 3]), FockOperator.identity([2]))
    assert np.array_equal(eye.matrix, np.eye(8))
    p1 = FockOperator((1,), np.diag([0, 1]))
    p0 = FockOperator((2,), np.diag([1, 0]))
    out = wedge_operators(p1, p0).matrix
    expected = np.zeros((4, 4)); expected[pattern_index("10"), pattern_index("10")] = 1
    assert np.array_equal(out, expected)


@settings(max_examples=200, deadline=None)
@given(seeds)
def test_wedge_composition_law(seed):
    rng = np.random.default_rng(seed)
    ma, mb = random_split(rng, 2, 2)
    c, e = (FockOperator(ma, random_matrix(rng, 4)) for _ in range(2))
    d, f = (FockOperator(mb, random_matrix(rng, 4)) for _ in range(2))
    lhs = wedge_operators(c, d).matrix @ wedge_operators(e, f).matrix
    rhs = wedge_operators(c @ e, d @ f).matrix
    assert np.allclose(lhs, rhs, atol=1e-12)


@settings(max_examples=200, deadline=None)
@given(seeds)
def test_wedge_trace_factorization(seed):
    rng = np.random.default_rng(seed)
    na, nb = (int(x) for x in rng.integers(1, 3, 2))
    ma, mb = random_split(rng, na, nb)
    c = FockOperator(ma, random_matrix(rng, 1 << na))
    d = FockOperator(mb, random_matrix(rng, 1 << nb))
    assert np.isclose(wedge_operators(c, d).trace(), c.trace() * d.trace(), atol=1e-12)


@settings(max_examples=50, deadline=None)
@given(seeds)
def test_wedge_of_hermitian_is_hermitian(seed):
    rng = np.random.default_rng(seed)
    ma, mb = random_split(rng, 2, 2)
    c, d = random_matrix(rng, 4), random_matrix(rng, 4)
    out = wedge_operators(FockOperator(ma, c + c.conj().T), FockOperator(mb, d + d.conj().T)).matrix
    assert np.allclose(out, out.conj().T, atol=1e-12)


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_wedge_graded_symmetry(seed):
    rng = np.random.default_rng(seed)
    ma, mb = random_split(rng, 2, 2)
    pu, pv = rng.integers(0, 2, 2)
    odd = np.array([0, 1, 1, 0], bool)
    u = random_vector(rng, 4) * (odd == pu)
    v = random_vector(rng, 4) * (odd == pv)
    uv = wedge_states(FockState(ma, u), FockState(mb, v)).amps
    vu = wedge_states(FockState(mb, v), FockState(ma, u)).amps
    sign = -1 if pu and pv else 1
    assert np.allclose(uv, sign * vu, atol=1e-12)


def test_wedge_associative():
    rng = np.random.default_rng(3)
    a = FockState((2,), random_vector(rng, 2))
    b = FockState((1, 4), random_vector(rng, 4))
    c = FockState((3,), random_vector(rng, 2))
    left = wedge_states(wedge_states(a, b), c).amps
    right = wedge_states(a, wedge_states(b, c)).amps
    assert np.allclose(left, right)


# --- local embeddings -------------------------------------------------------


@pytest.mark.parametrize("seed", range(8))
def test_embed_local_matches_global_mode_operators(seed):
    rng = np.random.default_rng(seed)
    ma, mb = random_split(rng, 2, 2)
    merged = tuple(sorted(ma + mb))
    for j in ma:
        local = creation_operator(ma, j)
        assert np.array_equal(embed_local(local, merged).matrix, creation_operator(merged, j).matrix)


def test_odd_locals_anticommute_only_in_first_slot():
    # f_1 on {1} and f_2 on {2}, each embedded with the operator first
    f1 = annihilation_operator((1,), 1)
    f2 = annihilation_operator((2,), 2)
    c = embed_local(f1, (1, 2)).matrix
    d = embed_local(f2, (1, 2)).matrix
    assert np.allclose(c @ d, -d @ c)
    # putting the identity first instead yields commuting operators
    d_second = wedge_operators(FockOperator.identity((1,)), f2).matrix
    assert np.allclose(c @ d_second, d_second @ c)
    # identity first differs from the physical f_2 by the parity of mode 1
    pi1 = parity_operator(1, (1,))
    assert np.allclose(wedge_operators(pi1, f2).matrix, d)


# --- number and parity ------------------------------------------------------


def test_parity_operator_examples():
    pi = parity_operator(2).matrix
    assert pi[0, 0] == 1
    assert pi[pattern_index("11"), pattern_index("11")] == 1
    assert pi[pattern_index("10"), pattern_index("10")] == -1


@pytest.mark.parametrize("n", range(1, 7))
def test_parity_is_involution(n):
    pi = parity_operator(n).matrix
    assert np.array_equal(pi @ pi, np.eye(1 << n))


@pytest.mark.parametrize("n", range(1, 5))
def test_number_operator_is_sum_of_occupations(n):
    total = sum(creation_operator(n, j).matrix @ annihilation_operator(n, j).matrix for j in range(1, n + 1))
    assert np.allclose(number_operator(n).matrix, total)


def test_mode_cap(monkeypatch):
    assert max_modes() == 10
    monkeypatch.setenv("FERMIQIT_MAX_MODES", "3")
    with pytest.raises(ModeError):
        FockState.vacuum(4)
    FockState.vacuum(3)


def test_mode_labels_must_ascend():
    with pytest.raises(ModeError):
        FockState((2, 1), np.zeros(4))
    with pytest.raises(ValueError):
        FockState((1,), np.zeros(3))
