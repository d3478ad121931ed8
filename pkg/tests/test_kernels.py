"""Compiled and pure-Python kernels against brute-force oracles and each other."""
import itertools
import os

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from perronlab import _kernels_py, kernels

BACKENDS = kernels.available_backends()


@pytest.fixture(params=sorted(BACKENDS))
def backend(request):
    return BACKENDS[request.param]


def reachability(adj):
    n = adj.shape[0]
    R = adj.astype(bool) | np.eye(n, dtype=bool)
    for k in range(n):
        R |= R[:, [k]] & R[[k], :]
    return R


def adjacency_matrices(max_n=8):
    return st.integers(1, max_n).flatmap(
        lambda n: arrays(np.uint8, (n, n), elements=st.integers(0, 1)))


def test_compiled_backend_is_default_when_built():
    if os.environ.get("PERRONLAB_PURE_PYTHON", "") not in ("", "0"):
        assert kernels.BACKEND == "python"
    elif "cython" in BACKENDS:
        assert kernels.BACKEND == "cython"
    else:
        assert kernels.BACKEND == "python"


@settings(max_examples=150, deadline=None)
@given(adjacency_matrices())
def test_strong_components_match_mutual_reachability(adj):
    R = reachability(adj)
    for impl in BACKENDS.values():
        labels, ncomp = impl.strong_components(adj.astype(np.uint8))
        assert len(set(labels.tolist())) == ncomp
        same = labels[:, None] == labels[None, :]
        assert np.array_equal(same, R & R.T)


@settings(max_examples=100, deadline=None)
@given(adjacency_matrices())
def test_components_are_labelled_sinks_first(adj):
    R = reachability(adj)
    labels, _ = kernels.strong_components(adj)
    # an edge between components always goes to a smaller label
    for i, j in zip(*np.nonzero(adj)):
        if labels[i] != labels[j]:
            assert labels[i] > labels[j]
            assert R[i, j]


def test_component_period_examples(backend):
    for p in range(1, 7):
        adj = np.roll(np.eye(p, dtype=np.uint8), 1, axis=1)
        labels, _ = backend.strong_components(adj)
        assert backend.component_period(adj, labels, labels[0]) == p
    single = np.zeros((1, 1), dtype=np.uint8)
    labels, _ = backend.strong_components(single)
    assert backend.component_period(single, labels, 0) == 0


def _brute_closed(need, n):
    # subsets S of components with need[c] subset of S for every c in S
    out = []
    for mask in range(1 << n):
        if all((need[c] & mask) == need[c] for c in range(n) if mask >> c & 1):
            out.append(mask)
    return sorted(out)


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 7).flatmap(lambda n: st.lists(st.integers(0, (1 << n) - 1), min_size=n, max_size=n)))
def test_closed_subsets_match_brute_force(need_raw):
    n = len(need_raw)
    # dependencies must point to lower components for the doubling order
    need = np.array([need_raw[c] & ((1 << c) - 1) for c in range(n)], dtype=np.uint64)
    expected = _brute_closed([int(x) for x in need], n)
    for impl in BACKENDS.values():
        got = sorted(int(x) for x in impl.closed_subsets(need, np.arange(n, dtype=np.int64)))
        assert got == expected


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 6), st.integers(1, 12), st.integers(0, 2**32 - 1))
def test_weighted_power_sums_match_numpy(n, K, seed):
    rng = np.random.default_rng(seed)
    a = rng.uniform(0, 1, (n, n)) / n
    coeffs = rng.uniform(0, 1, (3, K))
    expected = np.array([sum(c[k] * np.linalg.matrix_power(a, k) for k in range(K)) for c in coeffs])
    for impl in BACKENDS.values():
        got = impl.weighted_power_sums(a, coeffs)
        np.testing.assert_allclose(got, expected, rtol=1e-12, atol=1e-14)


def test_backends_agree_bitwise_on_graphs():
    if len(BACKENDS) < 2:
        pytest.skip("compiled extension not built")
    rng = np.random.default_rng(0)
    for _ in range(50):
        n = int(rng.integers(1, 30))
        adj = (rng.uniform(size=(n, n)) < 0.15).astype(np.uint8)
        la, na = BACKENDS["cython"].strong_components(adj)
        lb, nb = BACKENDS["python"].strong_components(adj)
        assert na == nb and np.array_equal(la, lb)
        for c in range(na):
            assert (BACKENDS["cython"].component_period(adj, la, c)
                    == BACKENDS["python"].component_period(adj, lb, c))


def test_pure_python_flag_is_honoured(monkeypatch):
    import importlib

    monkeypatch.setenv("PERRONLAB_PURE_PYTHON", "1")
    mod = importlib.reload(kernels)
    try:
        assert mod.BACKEND == "python"
        assert mod.strong_components is _kernels_py.strong_components
    finally:
        monkeypatch.delenv("PERRONLAB_PURE_PYTHON")
        importlib.reload(kernels)


def test_backends_accept_read_only_input():
    a = np.array([[0.5, 0.5], [1.0, 0.0]])
    a.setflags(write=False)
    c = np.ones((2, 3)) / 3
    c.setflags(write=False)
    adj = a > 0
    adj.setflags(write=False)
    for mod in BACKENDS.values():
        assert mod.weighted_power_sums(a, c).shape == (2, 2, 2)
        mod.strong_components(adj)
