import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import OMEGA3, blocks, cycle, op
from perronlab.lattice import PositiveOperator
from perronlab.spectral import (
    OnSpectrumError, adjoint, eigenspace, is_cyclic_set, normalize, operator_norm, peripheral_spectrum,
    power_closure, rational_angle, resolvent, spectrum,
)


def records(a):
    return [(r.value, r.alg_mult, r.geom_mult, r.index, r.is_peripheral) for r in spectrum(op(a)).records]


def test_identity_record():
    (v, m, g, k, per), = records(np.eye(3))
    assert v == pytest.approx(1) and (m, g, k, per) == (3, 3, 1, True)


def test_three_cycle_records():
    recs = records(cycle(3))
    assert len(recs) == 3
    for target in (1, OMEGA3, OMEGA3.conjugate()):
        v, m, g, k, per = min(recs, key=lambda r: abs(r[0] - target))
        assert abs(v - target) < 1e-12 and (m, g, k, per) == (1, 1, 1, True)


def test_jordan_two_record():
    (v, m, g, k, per), = records([[1, 1], [0, 1]])
    assert v == pytest.approx(1) and (m, g, k) == (2, 1, 2)


@pytest.mark.parametrize("m", [1, 2, 3, 4, 5])
def test_index_equals_jordan_size_after_similarity(m, rng):
    J = np.eye(m) + np.eye(m, k=1)
    a = blocks(J, np.diag([0.5, -0.3]))
    S = rng.standard_normal(a.shape) + 3 * np.eye(a.shape[0])
    T = PositiveOperator(S @ a @ np.linalg.inv(S))
    rec = spectrum(T).record_near(1.0, tol=1e-3)
    assert (rec.alg_mult, rec.geom_mult, rec.index) == (m, 1, m)


def test_two_equal_jordan_blocks():
    a = blocks(np.eye(2) + np.eye(2, k=1), np.eye(2) + np.eye(2, k=1))
    (v, m, g, k, per), = records(a)
    assert (m, g, k) == (4, 2, 2)


@pytest.mark.parametrize("a, expected", [
    (np.diag([1, 0.5]), [1]),
    (cycle(4), [1, 1j, -1, -1j]),
])
def test_peripheral_examples(a, expected):
    got = peripheral_spectrum(op(a))
    assert len(got) == len(expected)
    for w in expected:
        assert min(abs(np.array(got) - w)) < 1e-12


def test_peripheral_of_general_matrix():
    T = PositiveOperator(np.diag([1, -1, 1 / 3]))
    got = sorted(peripheral_spectrum(T), key=lambda z: z.real)
    np.testing.assert_allclose(got, [-1, 1], atol=1e-15)


random_square = st.integers(1, 7).flatmap(lambda n: st.tuples(st.just(n), st.integers(0, 2**32 - 1)))


@settings(max_examples=120, deadline=None)
@given(random_square, st.sampled_from([0.3, 0.6, 1.0]))
def test_report_invariants(ns, density):
    n, seed = ns
    rng = np.random.default_rng(seed)
    a = rng.uniform(0, 1, (n, n)) * (rng.uniform(size=(n, n)) < density)
    rep = spectrum(op(a))
    assert rep.n == n
    assert rep.spectral_radius == max(abs(r.value) for r in rep.records)
    for r in rep.records:
        assert 1 <= r.geom_mult <= r.alg_mult
        assert 1 <= r.index <= r.alg_mult - r.geom_mult + 1
        assert r.is_peripheral == (abs(r.value) >= rep.spectral_radius * (1 - rep.eps_per))
    per = [r.value for r in rep.peripheral]
    assert is_cyclic_set(per, rep.spectral_radius, max_denominator=n)


@settings(max_examples=60, deadline=None)
@given(random_square)
def test_adjoint_spectrum_is_conjugate(ns):
    n, seed = ns
    rng = np.random.default_rng(seed)
    T = PositiveOperator(rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))
    a, b = spectrum(T), spectrum(adjoint(T))
    for r in a.records:
        assert b.contains(np.conj(r.value), tol=10 * a.cluster_tol)


def test_adjoint_examples():
    M = np.array([[1.0, 2.0], [0.0, 3.0]])
    assert np.array_equal(adjoint(op(M)).matrix, M.T)
    assert adjoint(op(M)).nonneg_certified
    assert adjoint(PositiveOperator([[1j]])).matrix[0, 0] == -1j
    T = PositiveOperator(np.array([[1 + 2j, 3], [4j, 5]]))
    assert adjoint(adjoint(T)) == T


def test_operator_norm_examples():
    assert operator_norm(np.array([[1, 1], [0, 1]]), np.inf) == 2
    for p in (1, 2, np.inf):
        assert operator_norm(np.eye(3), p) == pytest.approx(1)
    assert operator_norm(np.array([[0, 2], [0, 0]]), 2) == pytest.approx(2)
    with pytest.raises(ValueError):
        operator_norm(np.eye(2), 3)


@pytest.mark.parametrize("M, cyclic", [
    ([1, -1], True),
    ([1, 1j], False),
    ([1, OMEGA3, OMEGA3**2], True),
])
def test_cyclic_set_examples(M, cyclic):
    res = is_cyclic_set(M, 1.0)
    assert res.is_cyclic is cyclic


def test_first_missing_power():
    res = is_cyclic_set([1, 1j], 1.0)
    elem, k, target = res.first_missing
    assert elem == 1j and k == 2 and abs(target + 1) < 1e-12


def test_cyclic_set_rejects_mixed_moduli():
    with pytest.raises(ValueError):
        is_cyclic_set([1, 0.5], 1.0)


def test_irrational_angle_uses_capped_powers():
    theta = 1.0  # not a rational multiple of 2 pi
    res = is_cyclic_set([np.exp(1j * theta)], 1.0, max_denominator=3)
    assert res.cap_hit and not res.is_cyclic


def test_rational_angle_detection():
    assert rational_angle(2 * np.pi / 3, 6) == pytest.approx(1 / 3)
    assert rational_angle(2 * np.pi * 5 / 6, 6).denominator == 6
    assert rational_angle(1.0, 6) is None


def test_power_closure_in_larger_set():
    assert power_closure(-1, [1, -1, 3], 3)
    assert not power_closure(1j, [1, 1j, -1j, 3], 4)


def test_resolvent_examples():
    res = resolvent(PositiveOperator([[0.0]]), 2)
    assert res.matrix[0, 0] == 0.5 and res.residual == 0
    r = 1.25
    res = resolvent(op([[1, 1], [0, 1]]), r)
    h = r - 1
    np.testing.assert_allclose(res.matrix, [[1 / h, 1 / h**2], [0, 1 / h]], rtol=1e-14)
    P = cycle(3)
    res = resolvent(op(P), 2)
    np.testing.assert_allclose(res.matrix, (4 * np.eye(3) + 2 * P + P @ P) / 7, rtol=1e-14, atol=1e-15)
    assert res.clean and not res.stagnated


def test_resolvent_rejects_spectrum():
    with pytest.raises(OnSpectrumError):
        resolvent(op(np.eye(2)), 1.0)
    with pytest.raises(OnSpectrumError):
        resolvent(op(cycle(3)), OMEGA3 + 1e-12)


@settings(max_examples=60, deadline=None)
@given(random_square, st.floats(0.2, 3), st.floats(0, 2 * np.pi), st.floats(0.2, 3), st.floats(0, 2 * np.pi))
def test_resolvent_identity(ns, s1, t1, s2, t2):
    n, seed = ns
    rng = np.random.default_rng(seed)
    T = op(rng.uniform(0, 1, (n, n)))
    rep = spectrum(T)
    mu = (rep.spectral_radius + s1) * np.exp(1j * t1)
    nu = (rep.spectral_radius + s2) * np.exp(1j * t2)
    Rm, Rn = resolvent(T, mu, rep).matrix, resolvent(T, nu, rep).matrix
    lhs = Rm - Rn
    rhs = (nu - mu) * Rm @ Rn
    bound = 1e-9 * operator_norm(Rm, np.inf) * operator_norm(Rn, np.inf)
    assert operator_norm(lhs - rhs, np.inf) <= bound


def test_eigenspace_is_real_when_possible():
    B = eigenspace(op(cycle(4)), 1.0)
    assert B.shape == (4, 1) and np.abs(B.imag).max() == 0
    v = normalize(B[:, 0])
    np.testing.assert_allclose(v, np.ones(4), atol=1e-15)


def test_eigenspace_dimension_follows_geometric_multiplicity():
    B = eigenspace(op(blocks(np.eye(2), [[0, 1], [1, 0]])), 1.0)
    assert B.shape[1] == 3
    A = op(blocks(np.eye(2), [[0, 1], [1, 0]])).matrix
    np.testing.assert_allclose(A @ B, B, atol=1e-14)


@pytest.mark.parametrize("k", [10, 20, 26])
def test_resolvent_accurate_near_spectrum(k):
    # exactly stochastic data: (r - 1) ||R(r, T)||_inf = 1 for every r > 1
    T = op([[0.5, 0.5], [0.25, 0.75]])
    h = 2.0 ** -k
    res = resolvent(T, 1.0 + h)
    assert abs(h * operator_norm(res.matrix, np.inf) - 1.0) <= 1e-12
    assert res.clean and not res.stagnated
