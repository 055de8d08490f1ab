import numpy as np
import pytest

from fermiqit import io
from fermiqit.fock import FockOperator, ModeError, embed_local, wedge_operators
from fermiqit.nosignal import MINUS, PLUS, run_protocol, signal_strength
from fermiqit.sampling import random_antidiagonal_unitary, random_ssr_state, random_ssr_unitary

from helpers import random_split


def test_signal_strength_examples():
    assert np.isclose(signal_strength(np.outer(PLUS, PLUS)), 0)
    assert np.isclose(signal_strength(np.outer(MINUS, MINUS)), 1)
    assert np.isclose(signal_strength(np.eye(2) / 2), 0.5)


def test_bundled_unitaries_signal():
    ua = FockOperator((1,), io.load("fixture:protocol_ua").data)
    ub = FockOperator((2,), io.load("fixture:protocol_ub").data)
    rho = FockOperator((1, 2), np.diag([1, 0, 0, 0]))
    res = run_protocol(rho, ua, ub)
    assert np.allclose(res.qubit, np.outer(MINUS, MINUS), atol=1e-10)
    assert np.allclose(res.fermionic.matrix, rho.matrix, atol=1e-10)


def test_absent_b_gives_plus():
    rng = np.random.default_rng(0)
    rho = random_ssr_state(3, rng)
    ua = random_antidiagonal_unitary(1, rng, modes=(2,))
    res = run_protocol(rho, ua, None)
    assert np.allclose(res.qubit, np.outer(PLUS, PLUS), atol=1e-10)


@pytest.mark.parametrize("seed", range(20))
def test_random_instances(seed):
    rng = np.random.default_rng(seed)
    ma, mb = random_split(rng, 2, 2)
    rho = random_ssr_state(4, rng)
    ua = random_antidiagonal_unitary(2, rng, modes=ma)
    anti = run_protocol(rho, ua, random_antidiagonal_unitary(2, rng, modes=mb))
    assert abs(anti.signal_strength - 1) < 1e-10
    assert np.abs(anti.fermionic.matrix - rho.matrix).max() < 1e-10
    even = run_protocol(rho, ua, random_ssr_unitary(2, rng, modes=mb))
    assert abs(even.signal_strength) < 1e-10
    assert np.abs(even.fermionic.matrix - rho.matrix).max() < 1e-10
    even_a = run_protocol(rho, random_ssr_unitary(2, rng, modes=ma), random_antidiagonal_unitary(2, rng, modes=mb))
    assert abs(even_a.signal_strength) < 1e-10


@pytest.mark.parametrize("seed", range(10))
def test_local_anticommutation(seed):
    rng = np.random.default_rng(seed)
    ma, mb = random_split(rng, 2, 2)
    modes = tuple(sorted(ma + mb))
    ua = embed_local(random_antidiagonal_unitary(2, rng, modes=ma), modes).matrix
    ub = embed_local(random_antidiagonal_unitary(2, rng, modes=mb), modes).matrix
    assert np.allclose(ua @ ub, -ub @ ua, atol=1e-10)


def test_protocol_input_checks():
    rho = FockOperator((1, 2), np.diag([1, 0, 0, 0]))
    with pytest.raises(ValueError):
        run_protocol(rho, FockOperator((1,), [[1, 1], [0, 1]]))
    x = FockOperator((1,), [[0, 1], [1, 0]])
    with pytest.raises(ModeError):
        run_protocol(rho, x, FockOperator((1,), [[0, 1], [1, 0]]))
    with pytest.raises(ModeError):
        run_protocol(rho, FockOperator((3,), [[0, 1], [1, 0]]))


def test_hybrid_state_is_density():
    rng = np.random.default_rng(4)
    rho = random_ssr_state(2, rng)
    res = run_protocol(rho, random_antidiagonal_unitary(1, rng, modes=(1,)), random_antidiagonal_unitary(1, rng, modes=(2,)))
    h = res.hybrid
    assert np.allclose(h, h.conj().T)
    assert np.isclose(np.trace(h), 1)
    assert np.linalg.eigvalsh(h).min() > -1e-12
