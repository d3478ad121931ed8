"""Eigenstructure of dense complex matrices.

Eigenvalues come from a complex Schur form. Raw eigenvalues are clustered,
and each cluster is reordered to the top-left of the Schur form (LAPACK
``ztrsen``) so that its multiplicities and index can be read off the small
triangular block ``N = S11 - lambda I`` alone:

* geometric multiplicity ``m - rank(N)``,
* index (pole order of the resolvent) the least ``k`` with
  ``rank(N^k) == rank(N^(k+1))``.

Ranks use singular-value cutoffs ``rank_rel * max(1, ||T||)**k``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
import scipy.linalg as sla
from scipy.linalg import lapack

from .lattice import PositiveOperator, check_norm

CLUSTER_REL = 1e-9
RANK_REL = 1e-10
EPS_PER = 1e-8
ANGULAR_TOL = 1e-6
RESOLVENT_REL = 1e-12
MAX_REFINEMENT = 5
#: Schur backward error is taken as BACKWARD_FACTOR * eps * ||T||
BACKWARD_FACTOR = 1e3
#: refinement corrections below this many ulps of max|X| count as converged
STAGNATION_FLOOR = 1e3
EPS = float(np.finfo(float).eps)

TWO_PI = 2.0 * math.pi


class SpectrumError(RuntimeError):
    """The Schur decomposition did not converge."""


class OnSpectrumError(ValueError):
    """A resolvent was requested at (or numerically at) a spectral value."""


def operator_norm(a, p=np.inf):
    """Induced operator norm for ``p`` in {1, 2, inf}.

    The 1- and inf-norms are the exact maximal column and row absolute sums;
    the 2-norm is the largest singular value.
    """
    p = check_norm(p)
    a = np.asarray(a)
    if a.size == 0:
        return 0.0
    if p == 1:
        return float(np.abs(a).sum(axis=0).max())
    if p == np.inf:
        return float(np.abs(a).sum(axis=1).max())
    return float(np.linalg.svd(a, compute_uv=False)[0])


def adjoint(T):
    """Conjugate transpose; certified nonnegativity carries over."""
    return PositiveOperator(T.matrix.conj().T, T.norm_choice)


@dataclass(frozen=True)
class EigenRecord:
    value: complex
    alg_mult: int
    geom_mult: int
    index: int
    is_peripheral: bool


@dataclass(frozen=True)
class SpectrumReport:
    records: tuple
    spectral_radius: float
    cluster_tol: float
    eps_per: float
    rank_rel: float
    scale: float
    raw: np.ndarray = field(repr=False)

    @property
    def peripheral(self):
        return tuple(r for r in self.records if r.is_peripheral)

    @property
    def values(self):
        return np.array([r.value for r in self.records], dtype=complex)

    @property
    def n(self):
        return sum(r.alg_mult for r in self.records)

    def record_near(self, lam, tol=None):
        """The record closest to ``lam``, or ``None`` if none is within ``tol``."""
        if not self.records:
            return None
        tol = self.cluster_tol if tol is None else tol
        d = np.abs(self.values - lam)
        i = int(np.argmin(d))
        return self.records[i] if d[i] <= tol else None

    def contains(self, lam, tol=None):
        return self.record_near(lam, tol) is not None

    def max_index(self, peripheral_only=True):
        recs = self.peripheral if peripheral_only else self.records
        return max((r.index for r in recs), default=0)


def _single_linkage(values, tol):
    n = len(values)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(values[i] - values[j]) <= tol:
                parent[find(i)] = find(j)
    groups = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return list(groups.values())


def _ranks(block, value, scale, rank_rel):
    """``[rank(N^0), rank(N^1), ..., rank(N^(m+1))]`` for ``N = block - value I``."""
    m = block.shape[0]
    N = block - value * np.eye(m)
    ranks = [m]
    P = np.eye(m, dtype=complex)
    for k in range(1, m + 2):
        P = P @ N
        sv = np.linalg.svd(P, compute_uv=False)
        ranks.append(int(np.sum(sv > rank_rel * scale**k)))
    return ranks


class _Schur:
    def __init__(self, a):
        try:
            self.S, self.Z = sla.schur(a, output="complex")
        except np.linalg.LinAlgError as exc:
            raise SpectrumError(f"Schur decomposition failed: {exc}") from exc
        self.diag = np.diag(self.S).copy()

    def leading_block(self, positions):
        n = self.S.shape[0]
        select = np.zeros(n, dtype=np.int32)
        select[list(positions)] = 1
        ts, _, _, m, _, _, info = lapack.ztrsen(select, self.S, self.Z, job="N", wantq=0)
        if info != 0:
            raise SpectrumError(f"Schur reordering failed (ztrsen info={info})")
        return ts[:m, :m]


def spectrum(T, cluster_rel=CLUSTER_REL, rank_rel=RANK_REL, eps_per=EPS_PER):
    """Clustered spectrum with multiplicities, indices and the peripheral flag.

    Parameters
    ----------
    T : PositiveOperator
        Any square operator; nonnegativity is not required here.
    cluster_rel : float
        Raw eigenvalues closer than ``cluster_rel * max(1, ||T||)`` are one
        cluster. Clusters further apart are still merged when the reordered
        Schur block of the union is numerically nilpotent to the order of its
        size (a perturbed defective eigenvalue).
    rank_rel : float
        Relative singular-value cutoff for ranks.
    eps_per : float
        Records with ``|value| >= r(T) (1 - eps_per)`` are peripheral.
    """
    a = T.matrix
    n = a.shape[0]
    scale = max(1.0, operator_norm(a, T.norm_choice))
    cluster_tol = cluster_rel * scale
    if n == 0:
        return SpectrumReport((), 0.0, cluster_tol, eps_per, rank_rel, scale, np.zeros(0, complex))
    schur = _Schur(a)
    raw = schur.diag
    clusters = _single_linkage(raw, cluster_tol)

    def centroid(c):
        return complex(np.mean(raw[c]))

    def nilpotent(positions):
        # a perturbed nilpotent block satisfies ||N^m|| <= m * delta * ||N||^(m-1)
        # to first order, with delta the backward error of the Schur form
        block = schur.leading_block(positions)
        m = block.shape[0]
        N = block - np.mean(raw[positions]) * np.eye(m)
        nN = np.linalg.norm(N, 2)
        delta = BACKWARD_FACTOR * EPS * scale
        return np.linalg.norm(np.linalg.matrix_power(N, m), 2) <= m * delta * nN ** (m - 1)

    def reach(m):
        return 2.0 * scale * rank_rel ** (1.0 / m)

    merged = True
    while merged and len(clusters) > 1:
        merged = False
        for i, ci in enumerate(clusters):
            c0 = centroid(ci)
            others = sorted(
                (k for k in range(len(clusters)) if k != i and abs(centroid(clusters[k]) - c0) <= reach(n)),
                key=lambda k: abs(centroid(clusters[k]) - c0),
            )
            group = list(ci)
            taken = [i]
            for k in others:
                group = group + clusters[k]
                taken.append(k)
                spread = np.abs(raw[group] - np.mean(raw[group])).max()
                if spread <= reach(len(group)) and nilpotent(group):
                    clusters = [c for j, c in enumerate(clusters) if j not in taken] + [group]
                    merged = True
                    break
            if merged:
                break

    recs = []
    for c in clusters:
        value = centroid(c)
        block = schur.leading_block(c)
        ranks = _ranks(block, value, scale, rank_rel)
        m = len(c)
        geom = max(1, m - ranks[1])
        index = next(k for k in range(1, m + 1) if ranks[k] == ranks[k + 1]) if m > 0 else 1
        recs.append([value, m, geom, max(1, index)])
    radius = max(abs(r[0]) for r in recs)
    records = tuple(
        EigenRecord(v, m, g, k, bool(abs(v) >= radius * (1.0 - eps_per)))
        for v, m, g, k in sorted(recs, key=lambda r: (-round(abs(r[0]), 9), np.angle(r[0]) % TWO_PI))
    )
    return SpectrumReport(records, float(radius), cluster_tol, eps_per, rank_rel, scale, raw)


def peripheral_spectrum(T, eps_per=EPS_PER, report=None):
    """Peripheral eigenvalues ``|lambda| >= r(T) (1 - eps_per)`` (one per cluster)."""
    report = spectrum(T, eps_per=eps_per) if report is None else report
    r = report.spectral_radius
    return [rec.value for rec in report.records if abs(rec.value) >= r * (1.0 - eps_per)]


def _wrap(angle):
    """Angle difference folded into [0, pi]."""
    d = math.fmod(abs(angle), TWO_PI)
    return min(d, TWO_PI - d)


def rational_angle(theta, max_denominator, tol=ANGULAR_TOL):
    """``Fraction p/q`` in [0, 1) with ``|theta - 2 pi p/q| <= tol``, ``q <= max_denominator``.

    Returns ``None`` when no such fraction exists.
    """
    t = (theta / TWO_PI) % 1.0
    frac = Fraction(t).limit_denominator(max(1, int(max_denominator)))
    if _wrap(TWO_PI * (t - float(frac))) <= tol:
        return frac % 1
    return None


@dataclass(frozen=True)
class CyclicityResult:
    """Outcome of a power-closure check.

    ``missing`` lists ``(element, k, target)`` for every power
    ``r e^{i k theta}`` without a match; ``periods`` maps each checked element
    to its detected rational angle (``None`` if irrational).
    """

    is_cyclic: bool
    missing: tuple
    k_max: int
    cap_hit: bool
    periods: tuple

    def __bool__(self):
        return self.is_cyclic

    @property
    def first_missing(self):
        return self.missing[0] if self.missing else None


def _powers_to_check(theta, max_q, angular_tol, cap):
    frac = rational_angle(theta, max_q, angular_tol)
    if frac is not None:
        q = frac.denominator
        return frac, [(k, TWO_PI * float(Fraction(k * frac.numerator, q) % 1)) for k in range(q)]
    ks = [0] + [s * k for k in range(1, cap + 1) for s in (1, -1)]
    return None, [(k, k * theta) for k in ks]


def _has_match(target, angles, angular_tol):
    return any(_wrap(target - a) <= angular_tol for a in angles)


def _closure(elements, candidates, radius, max_q, angular_tol, modulus_tol):
    cap = 2 * max_q * max_q
    cand = [c for c in candidates if abs(abs(c) - radius) <= modulus_tol * max(radius, 1e-300)]
    angles = [math.atan2(c.imag, c.real) for c in cand]
    missing, periods = [], []
    cap_hit = False
    denominators = []
    for lam in elements:
        theta = math.atan2(lam.imag, lam.real)
        frac, checks = _powers_to_check(theta, max_q, angular_tol, cap)
        periods.append((lam, frac))
        if frac is None:
            cap_hit = True
        else:
            denominators.append(frac.denominator)
        for k, target in checks:
            if not _has_match(target, angles, angular_tol):
                missing.append((lam, k, radius * complex(math.cos(target), math.sin(target))))
    k_max = math.lcm(*denominators) if denominators else 1
    if k_max > cap:
        k_max, cap_hit = cap, True
    if cap_hit:
        k_max = cap
    return CyclicityResult(not missing, tuple(missing), k_max, cap_hit, tuple(periods))


def is_cyclic_set(M, r, angular_tol=ANGULAR_TOL, max_denominator=None, modulus_tol=EPS_PER):
    """Test whether ``M`` contains ``r e^{ik theta}`` for each ``r e^{i theta}`` in it.

    Angles within ``angular_tol`` of ``2 pi p/q`` with ``q <= max_denominator``
    (default ``2 len(M)``) are treated as rational and checked exactly over one
    period. A cyclic set of ``N`` elements only holds angles with denominator
    at most ``N``; the doubled default lets such sets be refuted exactly. Other angles are checked for ``|k| <= 2 max_denominator**2``
    and set ``cap_hit``.
    """
    M = [complex(m) for m in M]
    r = float(r)
    max_q = max(1, 2 * len(M) if max_denominator is None else int(max_denominator))
    if r <= 0.0 or not M:
        if any(abs(m) > modulus_tol for m in M):
            raise ValueError("nonzero element in a set declared to have radius 0")
        return CyclicityResult(True, (), 1, False, tuple((m, Fraction(0)) for m in M))
    for m in M:
        if abs(abs(m) - r) > modulus_tol * r:
            raise ValueError(f"element {m} has modulus {abs(m)!r}, expected {r!r}")
    return _closure(M, M, r, max_q, angular_tol, modulus_tol)


def power_closure(lam, spectrum_values, max_denominator, angular_tol=ANGULAR_TOL, modulus_tol=EPS_PER):
    """Check ``|lam| e^{ik theta} in spectrum_values`` for all integers ``k``."""
    lam = complex(lam)
    return _closure([lam], [complex(v) for v in spectrum_values], abs(lam),
                    max(1, int(max_denominator)), angular_tol, modulus_tol)


@dataclass(frozen=True)
class ResolventResult:
    """``X ~ (mu I - T)^{-1}`` with its solve diagnostics.

    ``residual`` is ``||(mu I - T) X - I||`` in the operator's norm and
    ``clean`` says whether it met ``RESOLVENT_REL * ||X|| * ||mu I - T||``.
    ``rel_error`` bounds ``| ||X|| - ||R|| | / ||R||`` from the residual.
    """

    matrix: np.ndarray
    mu: complex
    residual: float
    bound: float
    clean: bool
    passes: int
    stagnated: bool

    @property
    def rel_error(self):
        return self.residual / (1.0 - self.residual) if self.residual < 1.0 else math.inf


def resolvent(T, mu, report=None, norm=None):
    """Residual-verified resolvent ``(mu I - T)^{-1}`` with iterative refinement.

    Raises :class:`OnSpectrumError` when ``mu`` is within the cluster tolerance
    of an eigenvalue. Pass ``report`` to avoid recomputing the spectrum.
    """
    a = T.matrix
    n = a.shape[0]
    p = T.norm_choice if norm is None else check_norm(norm)
    mu = complex(mu)
    if n == 0:
        return ResolventResult(np.zeros((0, 0), complex), mu, 0.0, 0.0, True, 0, False)
    report = spectrum(T) if report is None else report
    if len(report.records):
        d = np.abs(report.values - mu)
        if d.min() <= report.cluster_tol:
            raise OnSpectrumError(f"mu = {mu} is within {report.cluster_tol:.3g} of an eigenvalue")
    eye = np.eye(n, dtype=complex)
    A = mu * eye - a
    lu = sla.lu_factor(A, check_finite=False)
    X = sla.lu_solve(lu, eye, check_finite=False)
    normA = operator_norm(A, p)
    # residuals in extended precision make the refined X accurate to working
    # precision even when cond(A) ~ 1/u; where longdouble is plain double this
    # reduces to classical refinement
    eye_x = np.eye(n, dtype=np.clongdouble)
    A_x = np.clongdouble(mu) * eye_x - a.astype(np.clongdouble)

    def residual(X):
        return (eye_x - A_x @ X.astype(np.clongdouble)).astype(complex)

    passes, stagnated, last = 0, False, math.inf
    while passes < MAX_REFINEMENT:
        D = sla.lu_solve(lu, residual(X), check_finite=False)
        size = np.abs(D).max()
        if not np.isfinite(size) or size >= last:
            # no progress is only a failure above the rounding floor
            stagnated = not last <= STAGNATION_FLOOR * EPS * np.abs(X).max()
            break
        X = X + D
        passes += 1
        last = size
        if size <= EPS * np.abs(X).max():
            break
    res = operator_norm(residual(X), p)
    bound = RESOLVENT_REL * operator_norm(X, p) * normA
    clean = bool(np.isfinite(res) and res <= bound)
    return ResolventResult(X, mu, float(res), float(bound), clean, passes, stagnated)


def null_space(a, dim, real=False):
    """Orthonormal basis of the ``dim`` smallest right singular vectors of ``a``."""
    a = np.asarray(a)
    if real:
        a = a.real
    _, _, vh = np.linalg.svd(a)
    return vh[-dim:].conj().T if dim else np.zeros((a.shape[1], 0), dtype=a.dtype)


def snap_real(T, lam, tol):
    """Drop a negligible imaginary part of an eigenvalue of a real operator."""
    lam = complex(lam)
    if T.nonneg_certified and abs(lam.imag) <= tol:
        return complex(lam.real, 0.0)
    return lam


def eigenspace(T, lam, report=None):
    """Orthonormal (2-norm) basis of ``ker(lam - T)``, real when possible.

    The dimension is the geometric multiplicity of the matching spectrum
    record.
    """
    report = spectrum(T) if report is None else report
    rec = report.record_near(lam, tol=max(report.cluster_tol, 1e-6 * report.scale))
    if rec is None:
        raise ValueError(f"{lam} is not an eigenvalue")
    lam = snap_real(T, rec.value, report.cluster_tol)
    real = T.nonneg_certified and lam.imag == 0.0
    A = lam * np.eye(T.n) - T.matrix
    basis = null_space(A, rec.geom_mult, real=real)
    return basis.astype(complex)


def normalize(v, p=np.inf):
    """Scale ``v`` to unit p-norm with its largest entry real and positive."""
    v = np.asarray(v, dtype=complex)
    k = int(np.argmax(np.abs(v)))
    phase = v[k] / abs(v[k])
    v = v / phase
    v = v / np.linalg.norm(v, ord=check_norm(p))
    return v
