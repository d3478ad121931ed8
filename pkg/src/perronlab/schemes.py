"""Weighting schemes ``f_j(z) = sum_k a_{j,k} z^k`` and the bounds they induce.

A scheme is a family of probability-like coefficient sequences indexed by
an ordered prefix of its index set. ``f_j(T)`` is evaluated by truncating
the series at ``K_j``; for infinite schemes ``K_j`` is chosen so that the
neglected tail, weighted by a polynomial envelope of ``||T^k||``, is below
``TAIL_TARGET``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import kernels
from .growth import BoundednessVerdict, classify_trend, loglog_slope
from .lattice import CoordinateIdeal, is_invariant, modulus
from .spectral import eigenspace, operator_norm, spectrum

SUM_TOL = 1e-12
DECAY_FACTOR = 0.1
TAIL_TARGET = 1e-9
ENVELOPE_SAFETY = 10.0
ENVELOPE_PROBE = 64
MAX_TERMS = 1 << 22
ZERO_TOL = 1e-8
DECAY_SLOPE = -0.5
STABLE_SLOPE = 0.1


@dataclass(frozen=True)
class WeightingSchemeSpec:
    """Coefficients ``a_{j,k}`` of a weighting scheme.

    Parameters
    ----------
    name : str
    coeff : callable
        ``coeff(j, k)`` with ``k`` an integer array; returns ``a_{j,k}``.
    index_set : tuple
        Ordered prefix of the index set ``J`` used by default.
    tail_bound : callable
        ``tail_bound(j, K)`` bounds ``sum_{k > K} a_{j,k}`` from above.
    support : callable, optional
        ``support(j)`` is the last ``k`` with ``a_{j,k} != 0`` for finitely
        supported schemes.
    growth : callable
        Growth variable along ``J`` used for trend fits (``j + 1`` for
        integer schemes, ``1 / (r - 1)`` for the Abel ray).
    """

    name: str
    coeff: Callable
    index_set: tuple
    tail_bound: Callable
    support: Callable | None = None
    growth: Callable = field(default=lambda j: j + 1.0)

    def coefficients(self, j, K):
        return np.asarray(self.coeff(j, np.arange(K + 1)), dtype=float)


def power_scheme(horizon=512):
    js = (0,) + tuple(2 ** i for i in range(int(math.log2(horizon)) + 1))
    return WeightingSchemeSpec(
        "power",
        lambda j, k: (k == j).astype(float),
        js,
        lambda j, K: 0.0 if K >= j else 1.0,
        support=lambda j: int(j),
    )


def cesaro_scheme(horizon=512):
    js = (0,) + tuple(2 ** i for i in range(int(math.log2(horizon)) + 1))
    return WeightingSchemeSpec(
        "cesaro",
        lambda j, k: np.where(k <= j, 1.0 / (j + 1), 0.0),
        js,
        lambda j, K: 0.0 if K >= j else (j - K) / (j + 1),
        support=lambda j: int(j),
    )


def abel_scheme(n_max=10, n_min=1):
    """``a_{r,k} = (r - 1) / r^{k+1}`` along ``r = 1 + 2^{-n}``."""
    rs = tuple(1.0 + 2.0 ** -n for n in range(n_min, n_max + 1))
    return WeightingSchemeSpec(
        "abel",
        lambda r, k: (r - 1.0) * np.exp(-(k + 1.0) * math.log(r)),
        rs,
        lambda r, K: math.exp(-(K + 1.0) * math.log(r)),
        growth=lambda r: 1.0 / (r - 1.0),
    )


def constant_scheme(horizon=64):
    """``f_j = 1``: a valid-looking family that violates coefficient decay."""
    js = tuple(range(0, horizon + 1, max(1, horizon // 16)))
    return WeightingSchemeSpec(
        "constant",
        lambda j, k: (k == 0).astype(float),
        js,
        lambda j, K: 0.0,
        support=lambda j: 0,
    )


BUILTIN_SCHEMES = {
    "power": power_scheme,
    "cesaro": cesaro_scheme,
    "abel": abel_scheme,
    "constant": constant_scheme,
}


def _truncation(s, j, weight=lambda k: 1.0, target=SUM_TOL):
    """Smallest checked ``K`` with weighted tail below ``target`` (``None`` if none)."""
    if s.support is not None:
        return int(s.support(j)), 0.0
    K = 16
    while K <= MAX_TERMS:
        t = _weighted_tail(s, j, K, weight)
        if t <= target:
            return K, t
        K *= 2
    return None, math.inf


def _weighted_tail(s, j, K, weight):
    # dyadic blocks (2^i K, 2^{i+1} K]: mass <= tail_bound(j, 2^i K), weight <= weight(2^{i+1} K)
    total, lo = 0.0, K
    for _ in range(60):
        t = s.tail_bound(j, lo)
        term = weight(2 * lo) * t
        total += term
        if t == 0.0 or term <= 1e-18 * total:
            return total
        lo *= 2
    return math.inf


@dataclass(frozen=True)
class SchemeVerdict:
    """Result of checking the three defining conditions of a weighting scheme.

    ``decays`` is one-sided: it is a statement about the evaluated prefix.
    """

    name: str
    sums_to_one: bool
    nonnegative: bool
    decays: bool
    details: dict

    @property
    def valid(self):
        return self.sums_to_one and self.nonnegative and self.decays

    def __bool__(self):
        return self.valid


def validate_scheme(s, j_prefix=None, k_prefix=range(8)):
    """Check normalisation, nonnegativity and coefficient decay on a prefix.

    (a) ``|sum_{k<=K} a_{j,k} - 1| <= 1e-12 + tail_bound(j, K)`` with
    ``K`` chosen so the tail bound is below ``1e-12``; (b) every evaluated
    coefficient is ``>= 0``; (c) for each ``k`` the last value along the
    prefix is at most ``max(0.1 * max, 1e-12)``.
    """
    js = tuple(s.index_set if j_prefix is None else j_prefix)
    sums_ok, nonneg_ok = True, True
    partial, negatives = {}, []
    for j in js:
        K, tail = _truncation(s, j)
        if K is None:
            sums_ok = False
            partial[j] = None
            continue
        c = s.coefficients(j, K)
        if np.any(c < 0):
            nonneg_ok = False
            negatives.append(j)
        total = math.fsum(c)
        partial[j] = total
        if abs(total - 1.0) > SUM_TOL + tail:
            sums_ok = False
    decay = {}
    for k in k_prefix:
        seq = np.array([float(s.coeff(j, np.array([k]))[0]) for j in js])
        if np.any(seq < 0):
            nonneg_ok = False
        decay[k] = bool(seq[-1] <= max(DECAY_FACTOR * seq.max(), 1e-12))
    decays = all(decay.values())
    return SchemeVerdict(s.name, sums_ok, nonneg_ok, decays,
                         {"partial_sums": partial, "decay_by_k": decay, "negative_at": negatives,
                          "j_prefix": js})


@dataclass(frozen=True)
class WSBound:
    """Norms ``||f_j(T)||`` along a prefix with certified truncation.

    ``verdict`` is ``None`` when the tail could not be certified.
    """

    scheme: str
    index: tuple
    norms: np.ndarray
    truncation: tuple
    envelope: tuple
    verdict: BoundednessVerdict | None
    certified: bool
    operators: tuple = field(default=(), repr=False)
    notes: tuple = ()

    @property
    def sup(self):
        return float(np.max(self.norms)) if len(self.norms) else math.nan


def power_envelope(T, report=None, probe=ENVELOPE_PROBE):
    """``(C, d)`` with ``||T^k|| <= C (1 + k)^d`` on ``k <= probe``.

    ``d`` is the largest peripheral index minus one (polynomial degree of
    the power growth when ``r(T) = 1``).
    """
    report = spectrum(T) if report is None else report
    d = max(0, report.max_index(peripheral_only=True) - 1)
    a = T.real if T.nonneg_certified else T.matrix
    P = np.eye(T.n, dtype=a.dtype)
    C = 0.0
    for k in range(probe + 1):
        C = max(C, operator_norm(P, T.norm_choice) / (1.0 + k) ** d)
        P = P @ a
    return C, d


def ws_bound(T, s, j_prefix=None, keep_operators=False, report=None):
    """Evaluate ``||f_j(T)||`` for ``j`` along the prefix, with sup and trend."""
    report = spectrum(T) if report is None else report
    if abs(report.spectral_radius - 1.0) > report.cluster_tol:
        raise ValueError(f"ws_bound needs r(T) = 1, got {report.spectral_radius!r}")
    if not T.nonneg_certified:
        raise ValueError("ws_bound needs a certified nonnegative operator")
    js = tuple(s.index_set if j_prefix is None else j_prefix)
    C, d = power_envelope(T, report)
    scale = ENVELOPE_SAFETY * C

    def weight(k):
        return (1.0 + k) ** d

    Ks, notes = [], []
    for j in js:
        K, _ = _truncation(s, j, weight, TAIL_TARGET / scale)
        if K is None:
            notes.append(f"tail at j={j} not certifiable within {MAX_TERMS} terms")
            return WSBound(s.name, js, np.array([]), (), (C, d), None, False, (), tuple(notes))
        Ks.append(K)
    Kmax = max(Ks)
    coeffs = np.zeros((len(js), Kmax + 1))
    for i, (j, K) in enumerate(zip(js, Ks)):
        coeffs[i, : K + 1] = s.coefficients(j, K)
    ops = kernels.weighted_power_sums(np.ascontiguousarray(T.real), coeffs)
    norms = np.array([operator_norm(F, T.norm_choice) for F in ops])
    g = np.array([s.growth(j) for j in js], dtype=float)
    w = g >= 8.0
    if w.sum() < 2:
        w = np.ones(len(js), dtype=bool)
    positive = w & (norms > 0)
    trend = loglog_slope(g[positive], norms[positive]) if positive.sum() >= 2 else math.nan
    sup = float(norms.max())
    verdict = BoundednessVerdict(f"ws({s.name})", sup, len(js), float(trend),
                                 classify_trend(sup, trend), norms, np.asarray(js))
    return WSBound(s.name, js, norms, tuple(Ks), (C, d), verdict, True,
                   tuple(ops) if keep_operators else (), tuple(notes))


@dataclass(frozen=True)
class WSIdeal:
    """Coordinate ideal of vectors annihilated in the limit by ``f_j(T)``.

    ``converged`` is False when some coordinate neither vanished nor
    stabilised; the properties are then not asserted (left empty).
    """

    ideal: CoordinateIdeal | None
    converged: bool
    properties: dict
    column_norms: np.ndarray = field(repr=False)
    slopes: np.ndarray = field(repr=False)
    unresolved: tuple = ()


def _tends_to_zero_power(a, i, squarings=12):
    P = a.copy()
    for _ in range(squarings):
        P = P @ P
        m = np.abs(P).max()
        if m > 1e150:
            return False
    return bool(np.abs(P[:, i]).max() <= ZERO_TOL)


def ws_invariant_ideal(T, s, j_prefix=None, report=None):
    """Finite-dimensional limit ideal ``{i : f_j(T) e_i -> 0}`` and its properties.

    Each coordinate is classified from the column norms ``||f_j(T) e_i||``:
    zero when the last value is below ``1e-8`` or the log-log decay slope
    against the growth variable is at most ``-0.5``; nonzero when the slope
    is within ``0.1`` of zero. Anything else is unresolved.

    Verified properties: ``a`` invariance, ``b`` peripheral eigenvectors
    ``z`` lie outside the ideal with ``T|z| - |z|`` inside it, ``c`` every
    ``e_i`` with ``T^k e_i -> 0`` lies inside it.
    """
    report = spectrum(T) if report is None else report
    wb = ws_bound(T, s, j_prefix, keep_operators=True, report=report)
    if wb.verdict is None or not wb.verdict.bounded:
        raise ValueError(f"scheme {s.name!r} is not bounded on T; no limit ideal")
    ops = np.asarray(wb.operators)
    p = T.norm_choice
    n = T.n
    cols = np.array([[np.linalg.norm(F[:, i], ord=p) for i in range(n)] for F in ops])
    g = np.array([s.growth(j) for j in wb.index], dtype=float)
    w = np.arange(len(g)) >= len(g) // 2
    zero, unresolved, slopes = [], [], np.zeros(n)
    for i in range(n):
        c = cols[:, i]
        last = c[-1]
        if last <= ZERO_TOL:
            zero.append(i)
            slopes[i] = -math.inf
            continue
        sl = loglog_slope(g[w], c[w])
        slopes[i] = sl
        if sl <= DECAY_SLOPE:
            zero.append(i)
        elif abs(sl) > STABLE_SLOPE:
            unresolved.append(i)
    if unresolved:
        return WSIdeal(None, False, {}, cols, slopes, tuple(unresolved))
    ideal = CoordinateIdeal(frozenset(zero), n)
    outside = np.array(sorted(ideal.complement), dtype=int)
    props = {"a": is_invariant(T, ideal.indices) is None}
    ok_b = True
    for rec in report.peripheral:
        basis = eigenspace(T, rec.value, report)
        for z in basis.T:
            az = modulus(z)
            scale = max(np.abs(z).max(), 1e-300)
            if outside.size == 0 or np.abs(z[outside]).max() <= ZERO_TOL * scale:
                ok_b = False
            defect = T.real @ az - az
            if outside.size and np.abs(defect[outside]).max() > ZERO_TOL * scale:
                ok_b = False
    props["b"] = ok_b
    a = T.real
    props["c"] = all(i in ideal.indices for i in range(n) if _tends_to_zero_power(a, i))
    return WSIdeal(ideal, True, props, cols, slopes, ())
