"""Resolvent growth along ``r_n = 1 + 2**-n`` and boundedness of power-type means.

Every resolvent on the grid is residual-verified. A grid point is
*retained* only when all of its solves are clean; exponent fits and
inequality checks use retained points only, and the fit additionally
skips the first ``FIT_SKIP`` grid points (transient regime).

Growth "~" between two sequences is operationalised as: the ratio stays
within a spread factor of ``SPREAD`` over the fit window and the fitted
exponents agree within ``EXPONENT_TOL``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .lattice import check_norm, modulus, vector_norm
from .spectral import OnSpectrumError, operator_norm, resolvent, spectrum

N_MIN = 2
N_MAX = 26
FIT_SKIP = 3
MIN_FIT_POINTS = 8
SPREAD = 10.0
EXPONENT_TOL = 0.1
INEQUALITY_SLACK = 1e-8
#: a point is also dropped once the residual no longer bounds the forward error
FORWARD_RESIDUAL_MAX = 1e-6

BOUNDED_TREND = 0.1
UNBOUNDED_TREND = 0.5


def dyadic_grid(n_min=N_MIN, n_max=N_MAX):
    n = np.arange(int(n_min), int(n_max) + 1)
    return n, 1.0 + np.ldexp(1.0, -n)


def loglog_slope(x, y):
    """Least-squares slope of ``log y`` against ``log x``."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if len(x) < 2:
        return math.nan
    return float(np.polyfit(np.log(x), np.log(y), 1)[0])


def _require_unit_radius(T, report):
    if abs(report.spectral_radius - 1.0) > report.cluster_tol:
        raise ValueError(f"r(T) must be 1 within {report.cluster_tol:.3g}, got {report.spectral_radius!r}")


@dataclass(frozen=True)
class GrowthProfile:
    """Resolvent norms on the dyadic grid for one direction ``lambda``.

    ``norms`` are ``||R(r_n lambda, T)||``, ``base_norms`` are ``||R(r_n, T)||``
    and ``directed_norms`` (when a vector ``z`` was given) are
    ``||R(r_n, T)|z| ||``. ``rel_errors`` bound the relative error of the
    computed norms at each point (from the solve residuals).
    """

    direction: complex
    n_values: np.ndarray
    r_seq: np.ndarray
    norms: np.ndarray
    base_norms: np.ndarray
    directed_norms: np.ndarray | None
    residuals: np.ndarray
    rel_errors: np.ndarray
    base_rel_errors: np.ndarray
    retained: np.ndarray
    fit_mask: np.ndarray
    fitted_exponent: float | None
    base_exponent: float | None
    directed_exponent: float | None
    norm_choice: float
    notes: tuple = field(default=())

    @property
    def h(self):
        return self.r_seq - 1.0

    @property
    def grid(self):
        return {"n_min": int(self.n_values[0]), "n_max": int(self.n_values[-1]),
                "r_n": "1 + 2**-n", "fit_skip": FIT_SKIP, "min_fit_points": MIN_FIT_POINTS}

    def comparable(self, a, b, spread=SPREAD):
        """Is ``a ~ b`` on the fit window in the bounded-ratio sense?"""
        m = self.fit_mask
        if m.sum() < 2:
            return False
        ratio = np.asarray(a)[m] / np.asarray(b)[m]
        return bool(np.all(ratio > 0) and ratio.max() / ratio.min() <= spread)


def _fit(h, values, mask):
    if mask.sum() < MIN_FIT_POINTS:
        return None
    return -loglog_slope(h[mask], np.asarray(values)[mask])


def growth_profile(T, lam=1.0, z=None, n_min=N_MIN, n_max=N_MAX, report=None):
    """Resolvent growth along the ray ``r_n lambda`` (and along ``r_n``).

    Parameters
    ----------
    T : PositiveOperator
        Must have spectral radius 1 within the cluster tolerance.
    lam : complex
        Direction on the unit circle.
    z : array_like, optional
        Vector whose modulus is pushed through ``R(r_n, T)``.
    """
    report = spectrum(T) if report is None else report
    _require_unit_radius(T, report)
    lam = complex(lam)
    if abs(abs(lam) - 1.0) > 1e-12:
        raise ValueError(f"|lambda| must be 1, got {abs(lam)!r}")
    p = T.norm_choice
    n_values, r_seq = dyadic_grid(n_min, n_max)
    absz = None if z is None else modulus(z)
    k = len(n_values)
    norms, base, directed = np.full(k, np.nan), np.full(k, np.nan), np.full(k, np.nan)
    residuals, rel, base_rel = np.full(k, np.inf), np.full(k, np.inf), np.full(k, np.inf)
    retained = np.zeros(k, dtype=bool)
    notes = []
    same_ray = lam == 1.0
    for i, r in enumerate(r_seq):
        try:
            R1 = resolvent(T, r, report=report)
            Rl = R1 if same_ray else resolvent(T, r * lam, report=report)
        except OnSpectrumError:
            notes.append(f"n={n_values[i]}: grid point within cluster tolerance of the spectrum")
            continue
        norms[i] = operator_norm(Rl.matrix, p)
        base[i] = operator_norm(R1.matrix, p)
        if absz is not None:
            directed[i] = vector_norm(R1.matrix @ absz, p)
        residuals[i] = max(Rl.residual, R1.residual)
        rel[i], base_rel[i] = Rl.rel_error, R1.rel_error
        retained[i] = (Rl.clean and R1.clean and Rl.residual <= FORWARD_RESIDUAL_MAX
                       and R1.residual <= FORWARD_RESIDUAL_MAX)
    if not retained.all():
        dropped = [int(n) for n, keep in zip(n_values, retained) if not keep]
        notes.append(f"dropped grid points n={dropped} (residual bound)")
    fit_mask = retained & (n_values >= n_values[0] + FIT_SKIP)
    h = r_seq - 1.0
    exp = _fit(h, norms, fit_mask)
    base_exp = _fit(h, base, fit_mask)
    dir_exp = _fit(h, directed, fit_mask) if absz is not None else None
    if exp is None:
        notes.append(f"fewer than {MIN_FIT_POINTS} residual-clean points in the fit window; no exponent")
    return GrowthProfile(
        lam, n_values, r_seq, norms, base, directed if absz is not None else None,
        residuals, rel, base_rel, retained, fit_mask, exp, base_exp, dir_exp, p, tuple(notes),
    )


@dataclass(frozen=True)
class InequalityCheck:
    """Pointwise check of ``lower <= middle <= upper`` on retained grid points."""

    holds: bool
    checked: int
    violations: tuple
    lower_margin: float
    upper_margin: float
    slack: float = INEQUALITY_SLACK

    def __bool__(self):
        return self.holds


def check_estimate_2_1(T, lam, profile=None, report=None):
    """``1/(r-1) <= ||R(r lambda, T)|| <= ||R(r, T)||`` at every retained point.

    Relative slack per point is ``1e-8`` plus the residual-derived relative
    error of both solves.
    """
    report = spectrum(T) if report is None else report
    rec = report.record_near(lam)
    if rec is None or not rec.is_peripheral:
        raise ValueError(f"{lam} is not a peripheral spectral value")
    profile = growth_profile(T, lam, report=report) if profile is None else profile
    violations = []
    lo_margin, up_margin = math.inf, math.inf
    idx = np.flatnonzero(profile.retained)
    for i in idx:
        h = profile.r_seq[i] - 1.0
        slack = INEQUALITY_SLACK + profile.rel_errors[i] + profile.base_rel_errors[i]
        mid, top = profile.norms[i], profile.base_norms[i]
        lo = (mid * (1.0 + slack) - 1.0 / h) * h
        up = (top * (1.0 + slack) - mid) / top
        lo_margin, up_margin = min(lo_margin, lo), min(up_margin, up)
        if lo < 0:
            violations.append((int(profile.n_values[i]), "lower", 1.0 / h, mid))
        if up < 0:
            violations.append((int(profile.n_values[i]), "upper", mid, top))
    return InequalityCheck(not violations and len(idx) > 0, len(idx), tuple(violations),
                           float(lo_margin), float(up_margin))


def check_sandwich(profile):
    """``1/(r-1) <= ||R(r, T)|z| || <= ||R(r, T)||`` for a unit eigenvector ``z``."""
    if profile.directed_norms is None:
        raise ValueError("profile has no directed norms")
    violations = []
    lo_margin, up_margin = math.inf, math.inf
    idx = np.flatnonzero(profile.retained)
    for i in idx:
        h = profile.r_seq[i] - 1.0
        e = profile.base_rel_errors[i]
        d, top = profile.directed_norms[i], profile.base_norms[i]
        abs_err = e * top
        lo = (d * (1.0 + INEQUALITY_SLACK) + abs_err - 1.0 / h) * h
        up = (top * (1.0 + INEQUALITY_SLACK + 2 * e) - d) / top
        lo_margin, up_margin = min(lo_margin, lo), min(up_margin, up)
        if lo < 0:
            violations.append((int(profile.n_values[i]), "lower", 1.0 / h, d))
        if up < 0:
            violations.append((int(profile.n_values[i]), "upper", d, top))
    return InequalityCheck(not violations and len(idx) > 0, len(idx), tuple(violations),
                           float(lo_margin), float(up_margin))


@dataclass(frozen=True)
class GrowthClass:
    """Classification of ``||R(r_n, T)|z| ||`` between ``1/(r_n-1)`` and ``||R(r_n, T)||``."""

    label: str
    minimal: bool
    maximal: bool
    profile: GrowthProfile
    notes: tuple = ()


def classify_eigenvector_growth(T, lam, z, n_min=N_MIN, n_max=N_MAX, report=None):
    """Label the growth of ``||R(r_n, T)|z| ||`` as minimal, maximal or intermediate.

    minimal: exponent within 0.1 of 1 and ``(r_n - 1) ||R(r_n, T)|z| ||``
    has spread at most 10; maximal: the ratio to ``||R(r_n, T)||`` has spread
    at most 10 and the exponents agree within 0.1. When both apply the label
    is ``minimal``, except in dimension one where it is ``maximal``; either
    way a degeneracy note is attached.
    """
    report = spectrum(T) if report is None else report
    z = np.asarray(z, dtype=complex)
    Tz = T.matrix @ z
    if np.linalg.norm(Tz - lam * z, ord=np.inf) > 1e-8 * max(1.0, report.scale) * np.linalg.norm(z, np.inf):
        raise ValueError("z is not an eigenvector for lambda")
    prof = growth_profile(T, lam, z=z, n_min=n_min, n_max=n_max, report=report)
    notes = list(prof.notes)
    if prof.directed_exponent is None or prof.base_exponent is None:
        return GrowthClass("undetermined", False, False, prof, tuple(notes))
    h = prof.h
    minimal = bool(abs(prof.directed_exponent - 1.0) <= EXPONENT_TOL
                   and prof.comparable(prof.directed_norms, 1.0 / h))
    maximal = bool(abs(prof.directed_exponent - prof.base_exponent) <= EXPONENT_TOL
                   and prof.comparable(prof.directed_norms, prof.base_norms))
    if minimal and maximal:
        # in dimension one z spans the space, so the growth is that of R itself
        label = "maximal" if T.n == 1 else "minimal"
        notes.append("degenerate: minimal and maximal growth coincide")
    elif minimal:
        label = "minimal"
    elif maximal:
        label = "maximal"
    else:
        label = "intermediate"
    return GrowthClass(label, minimal, maximal, prof, tuple(notes))


@dataclass(frozen=True)
class BoundednessVerdict:
    """Finite-horizon boundedness estimate.

    ``verdict`` is ``bounded_plausible`` (trend <= 0.1, finite sup),
    ``unbounded_detected`` (trend >= 0.5 on clean data) or ``inconclusive``.
    """

    kind: str
    sup_estimate: float
    horizon: int
    trend: float
    verdict: str
    values: np.ndarray = field(repr=False)
    index: np.ndarray = field(repr=False)
    clean: bool = True

    @property
    def bounded(self):
        return self.verdict == "bounded_plausible"

    @property
    def unbounded(self):
        return self.verdict == "unbounded_detected"


def classify_trend(sup, trend, clean=True):
    if clean and np.isfinite(trend) and trend >= UNBOUNDED_TREND:
        return "unbounded_detected"
    if np.isfinite(sup) and np.isfinite(trend) and trend <= BOUNDED_TREND:
        return "bounded_plausible"
    return "inconclusive"


def abel_bound(T, n_max=N_MAX, n_min=N_MIN, report=None):
    """``sup_n (r_n - 1) ||R(r_n, T)||`` over the dyadic grid, with its trend.

    The trend is the log-log slope of ``(r_n - 1) ||R(r_n, T)||`` against
    ``1/(r_n - 1)`` on the fit window.
    """
    prof = growth_profile(T, 1.0, n_min=n_min, n_max=n_max, report=report)
    h = prof.h
    values = h * prof.base_norms
    m = prof.fit_mask
    trend = loglog_slope(1.0 / h[m], values[m]) if m.sum() >= 2 else math.nan
    sup = float(np.nanmax(values[prof.retained])) if prof.retained.any() else math.inf
    clean = bool(prof.retained.all())
    return BoundednessVerdict("abel", sup, int(n_max), float(trend),
                              classify_trend(sup, trend, m.sum() >= MIN_FIT_POINTS),
                              values, prof.n_values, clean)


def _power_window(j):
    lo = max(8, int(j[-1]) // 8)
    return j >= lo


@dataclass(frozen=True)
class PowerCesaro:
    power: BoundednessVerdict
    cesaro: BoundednessVerdict
    sup_power_over_j: float


def power_and_cesaro(T, horizon=256):
    """``||T^j||`` and ``||(j+1)^{-1} sum_{k<=j} T^k||`` for ``j <= horizon``.

    Trends are log-log slopes against ``j`` over ``j >= max(8, horizon/8)``.
    Also returns ``sup_{j>=1} ||T^j|| / j``.
    """
    p = T.norm_choice
    a = T.matrix if not T.nonneg_certified else T.real
    n = T.n
    P = np.eye(n, dtype=a.dtype)
    S = np.zeros((n, n), dtype=a.dtype)
    pw, ce = [], []
    for j in range(int(horizon) + 1):
        S = S + P
        pw.append(operator_norm(P, p))
        ce.append(operator_norm(S / (j + 1), p))
        P = P @ a
    js = np.arange(int(horizon) + 1)
    pw, ce = np.array(pw), np.array(ce)
    w = _power_window(js) & (js > 0)
    out = []
    for kind, vals in (("power", pw), ("cesaro", ce)):
        sup = float(vals.max())
        positive = w & (vals > 0)
        trend = loglog_slope(js[positive], vals[positive]) if positive.sum() >= 2 else -math.inf
        if not np.isfinite(trend):
            # nilpotent tail: values hit zero, which is bounded
            trend = -math.inf
        verdict = classify_trend(sup, trend if np.isfinite(trend) else -1.0)
        out.append(BoundednessVerdict(kind, sup, int(horizon), float(trend), verdict, vals, js))
    ratio = float(np.max(pw[1:] / js[1:])) if horizon >= 1 else math.nan
    return PowerCesaro(out[0], out[1], ratio)
