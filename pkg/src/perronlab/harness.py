"""Hypothesis/conclusion checkers for cyclicity results on concrete matrices.

Every checker returns a :class:`TheoremVerdict`. Hypotheses carry one of
``holds``, ``fails``, ``one_sided`` (finite-horizon evidence in favour, which
cannot be refuted or confirmed by more data of the same kind) or
``undetermined`` (a search found no witness). The conclusion is evaluated
only when every hypothesis is ``holds`` or ``one_sided``; otherwise it is
``not_applicable``. A conclusion reached under a ``one_sided`` hypothesis is
marked ``conditional``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linprog

from .growth import (
    EXPONENT_TOL, N_MAX, N_MIN, SPREAD, check_sandwich, classify_eigenvector_growth,
    growth_profile, loglog_slope,
)
from .lattice import PositiveOperator, induce, is_invariant, modulus
from .schemes import ws_bound
from .spectral import (
    ANGULAR_TOL, EPS_PER, eigenspace, is_cyclic_set, normalize, operator_norm,
    power_closure, resolvent, spectrum,
)
from .structure import irreducibility

HOLDS = "holds"
FAILS = "fails"
ONE_SIDED = "one_sided"
UNDETERMINED = "undetermined"
NOT_APPLICABLE = "not_applicable"

EXIT_CODES = {HOLDS: 0, FAILS: 1, NOT_APPLICABLE: 10}

EIGEN_REL = 1e-8
PHASE_GRID = 64
FEAS_TOL = 1e-9
DOMINATION_TOL = 1e-8
TORSION_TOL = 1e-10
CONTAINMENT_TOL = 1e-7
COMMUTATION_TOL = 1e-9
QUADRATIC_EXPONENT = 2.0 + EXPONENT_TOL
ORBIT_HORIZON = 256
ORBIT_SAMPLES = 50
ORBIT_FLOOR = 1e-8


@dataclass(frozen=True)
class Hypothesis:
    name: str
    status: str
    evidence: dict = field(default_factory=dict)


@dataclass(frozen=True)
class TheoremVerdict:
    """Structured outcome of one checker run."""

    theorem_id: str
    hypotheses: tuple
    conclusion: str
    witnesses: dict
    tolerances: dict
    grid: dict
    conditional: bool = False
    sub_verdicts: dict = field(default_factory=dict)

    @property
    def exit_code(self):
        return EXIT_CODES[self.conclusion]

    @property
    def applicable(self):
        return self.conclusion != NOT_APPLICABLE

    def hypothesis(self, name):
        for h in self.hypotheses:
            if h.name == name:
                return h
        raise KeyError(name)

    def to_dict(self):
        return {
            "theorem_id": self.theorem_id,
            "hypotheses": [{"name": h.name, "status": h.status, "evidence": _plain(h.evidence)}
                           for h in self.hypotheses],
            "conclusion": {"status": self.conclusion, "conditional": self.conditional,
                           "witnesses": _plain(self.witnesses)},
            "sub_verdicts": _plain(self.sub_verdicts),
            "tolerances": _plain(self.tolerances),
            "grid": _plain(self.grid),
        }


def _plain(obj):
    """JSON-friendly copy: complex -> [re, im], arrays -> lists."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, float) and not math.isfinite(obj):
        return str(obj)
    if obj is None or isinstance(obj, (bool, int, float, str)):
        return obj
    return str(obj)


BASE_TOLERANCES = {
    "eigen_rel": EIGEN_REL, "angular_tol": ANGULAR_TOL, "eps_per": EPS_PER,
    "spread": SPREAD, "exponent_tol": EXPONENT_TOL,
}


def _verdict(theorem_id, hyps, conclude, tolerances=None, grid=None):
    """Gate ``conclude()`` on the hypotheses."""
    hyps = tuple(hyps)
    tol = dict(BASE_TOLERANCES, **(tolerances or {}))
    if all(h.status in (HOLDS, ONE_SIDED) for h in hyps):
        status, witnesses, *rest = conclude()
        subs = rest[0] if rest else {}
        conditional = any(h.status == ONE_SIDED for h in hyps)
        return TheoremVerdict(theorem_id, hyps, status, witnesses, tol, grid or {}, conditional, subs)
    failed = [h.name for h in hyps if h.status not in (HOLDS, ONE_SIDED)]
    return TheoremVerdict(theorem_id, hyps, NOT_APPLICABLE, {"failed_hypotheses": failed}, tol, grid or {})


def _status(ok):
    return HOLDS if ok else FAILS


# shared hypothesis checks -------------------------------------------------


def _unit_radius(report):
    r = report.spectral_radius
    return Hypothesis("r(T) = 1", _status(abs(r - 1.0) <= report.cluster_tol),
                      {"spectral_radius": r, "tol": report.cluster_tol})


def _eigen_pair(T, lam, z, report):
    z = np.asarray(z, dtype=complex)
    nz = float(np.linalg.norm(z, ord=np.inf))
    defect = float(np.linalg.norm(T.matrix @ z - lam * z, ord=np.inf))
    ok = nz > 0 and defect <= EIGEN_REL * max(1.0, report.scale) * nz
    return Hypothesis("T z = lambda z", _status(ok), {"defect": defect, "norm_z": nz})


def _unimodular(lam):
    return Hypothesis("|lambda| = 1", _status(abs(abs(lam) - 1.0) <= 1e-12), {"modulus": abs(lam)})


def _peripheral(lam, report):
    rec = report.record_near(lam)
    ok = rec is not None and rec.is_peripheral
    return Hypothesis("lambda in peripheral spectrum", _status(ok),
                      {"record": None if rec is None else rec.value})


def _maybe_z(T, lam, z, report):
    if z is not None:
        return np.asarray(z, dtype=complex)
    basis = eigenspace(T, lam, report)
    return normalize(basis[:, 0], T.norm_choice)


def _closure_in(lam, values, n, label):
    res = power_closure(lam, values, max_denominator=max(1, n))

    def conclude():
        return (_status(res.is_cyclic),
                {"set": label, "lambda": complex(lam), "missing": list(res.missing),
                 "period": str(res.periods[0][1]), "cap_hit": res.cap_hit})
    return conclude


def _peripheral_values(report):
    return [r.value for r in report.peripheral]


def _profile_grid(prof):
    return prof.grid if prof is not None else {"n_min": N_MIN, "n_max": N_MAX}


# growth-based checkers ----------------------------------------------------


def verify_thm_1_2(T, lam, z=None, variant="a", n_min=N_MIN, n_max=N_MAX):
    """Sandwich bound (``a``) or cyclicity from minimal/maximal eigenvector growth."""
    if variant not in ("a", "b", "c"):
        raise ValueError(f"unknown variant {variant!r}")
    report = spectrum(T)
    lam = complex(lam)
    hyps = [_unit_radius(report), _unimodular(lam), _peripheral(lam, report)]
    if not all(h.status == HOLDS for h in hyps):
        return _verdict(f"thm1.2{variant}", hyps, None)
    z = _maybe_z(T, lam, z, report)
    hyps.append(_eigen_pair(T, lam, z, report))
    if hyps[-1].status != HOLDS:
        return _verdict(f"thm1.2{variant}", hyps, None)
    z = z / np.linalg.norm(z, ord=T.norm_choice)
    cls = classify_eigenvector_growth(T, lam, z, n_min, n_max, report)
    prof = cls.profile
    if variant == "a":
        def conclude():
            chk = check_sandwich(prof)
            return (_status(chk.holds), {"checked_points": chk.checked, "violations": list(chk.violations),
                                         "lower_margin": chk.lower_margin, "upper_margin": chk.upper_margin})
    else:
        key = "minimal" if variant == "b" else "maximal"
        ok = cls.minimal if variant == "b" else cls.maximal
        hyps.append(Hypothesis(f"{key} growth of ||R(r_n,T)|z|||", _status(ok),
                               {"label": cls.label, "directed_exponent": prof.directed_exponent,
                                "base_exponent": prof.base_exponent}))
        conclude = _closure_in(lam, report.values, T.n, "spectrum")
    return _verdict(f"thm1.2{variant}", hyps, conclude, grid=_profile_grid(prof))


def verify_thm_4_1(T, lam, n_min=N_MIN, n_max=N_MAX):
    """Simple growth along ``lambda`` plus at most quadratic growth along 1."""
    report = spectrum(T)
    lam = complex(lam)
    hyps = [_unit_radius(report), _peripheral(lam, report)]
    if not all(h.status == HOLDS for h in hyps):
        return _verdict("thm4.1", hyps, None)
    prof = growth_profile(T, lam, n_min=n_min, n_max=n_max, report=report)
    e, b = prof.fitted_exponent, prof.base_exponent
    simple = e is not None and abs(e - 1.0) <= EXPONENT_TOL and prof.comparable(prof.norms, 1.0 / prof.h)
    hyps.append(Hypothesis("||R(r_n lambda,T)|| ~ 1/(r_n-1)", _status(simple), {"exponent": e}))
    hyps.append(Hypothesis("||R(r_n,T)|| = O(1/(r_n-1)^2)",
                           _status(b is not None and b <= QUADRATIC_EXPONENT), {"exponent": b}))
    return _verdict("thm4.1", hyps, _closure_in(lam, _peripheral_values(report), T.n, "peripheral"),
                    {"quadratic_exponent": QUADRATIC_EXPONENT}, _profile_grid(prof))


def verify_cor_4_2(T, lam, n_min=N_MIN, n_max=N_MAX):
    """Pole at ``lambda`` plus at most quadratic growth along 1.

    The conclusion additionally records the pole order at ``lambda`` and
    requires it to be 1 or 2.
    """
    report = spectrum(T)
    lam = complex(lam)
    hyps = [_unit_radius(report), _peripheral(lam, report)]
    if not all(h.status == HOLDS for h in hyps):
        return _verdict("cor4.2", hyps, None)
    hyps.append(Hypothesis("lambda is a pole of the resolvent", HOLDS,
                           {"note": "every eigenvalue of a matrix is a pole"}))
    prof = growth_profile(T, 1.0, n_min=n_min, n_max=n_max, report=report)
    b = prof.base_exponent
    hyps.append(Hypothesis("||R(r_n,T)|| = O(1/(r_n-1)^2)",
                           _status(b is not None and b <= QUADRATIC_EXPONENT), {"exponent": b}))
    rec = report.record_near(lam)
    closure = _closure_in(lam, _peripheral_values(report), T.n, "peripheral")

    def conclude():
        status, w = closure()
        w["pole_order"] = rec.index
        ok = status == HOLDS and rec.index in (1, 2)
        return _status(ok), w
    return _verdict("cor4.2", hyps, conclude, {"quadratic_exponent": QUADRATIC_EXPONENT}, _profile_grid(prof))


def _adjoint_functional(T, absz):
    """Search ``x' >= 0`` with ``T^t x' >= x'`` and ``<x', |z|> >= 1``."""
    n = T.n
    a = T.real
    A_ub = np.vstack([-(a.T - np.eye(n)), -absz[None, :]])
    b_ub = np.concatenate([np.zeros(n), [-1.0]])
    res = linprog(np.ones(n), A_ub=A_ub, b_ub=b_ub, bounds=[(0, None)] * n, method="highs")
    return res.x if res.status == 0 else None


def _check_functional(T, xp, absz):
    xp = np.asarray(xp, dtype=float)
    a = T.real
    scale = max(1.0, np.abs(xp).max())
    ok = (xp.min() >= -FEAS_TOL * scale and (a.T @ xp - xp).min() >= -FEAS_TOL * scale * max(1.0, T.norm())
          and float(xp @ absz) > FEAS_TOL * scale)
    return ok, {"x_prime": xp, "pairing": float(xp @ absz)}


def verify_kr_2_1(T, lam=1.0, variant="a", z=None, x_prime=None, n_min=N_MIN, n_max=N_MAX):
    """Cyclicity from resolvent growth conditions.

    ``a``: ``||R(r_n,T)|| ~ 1/(r_n-1)`` implies a cyclic peripheral spectrum.
    ``b``: ``||R(r_n lambda,T)|| ~ ||R(r_n,T)||`` implies power closure of
    ``lambda``. ``c``: at most quadratic growth plus a functional
    ``0 <= x' <= T'x'`` pairing positively with ``|z|``.
    """
    if variant not in ("a", "b", "c"):
        raise ValueError(f"unknown variant {variant!r}")
    tid = f"kr2.1{variant}"
    report = spectrum(T)
    lam = complex(lam)
    hyps = [_unit_radius(report)]
    if variant != "a":
        hyps.append(_peripheral(lam, report))
    if not all(h.status == HOLDS for h in hyps):
        return _verdict(tid, hyps, None)
    if not T.nonneg_certified:
        hyps.append(Hypothesis("T positive", FAILS))
        return _verdict(tid, hyps, None)
    if variant == "a":
        prof = growth_profile(T, 1.0, n_min=n_min, n_max=n_max, report=report)
        b = prof.base_exponent
        ok = b is not None and abs(b - 1.0) <= EXPONENT_TOL and prof.comparable(prof.base_norms, 1.0 / prof.h)
        hyps.append(Hypothesis("||R(r_n,T)|| ~ 1/(r_n-1)", _status(ok), {"exponent": b}))
        per = _peripheral_values(report)

        def conclude():
            res = is_cyclic_set(per, report.spectral_radius, max_denominator=T.n)
            return _status(res.is_cyclic), {"peripheral": per, "missing": list(res.missing)}
        return _verdict(tid, hyps, conclude, grid=_profile_grid(prof))
    if variant == "b":
        prof = growth_profile(T, lam, n_min=n_min, n_max=n_max, report=report)
        ok = (prof.fitted_exponent is not None and prof.base_exponent is not None
              and abs(prof.fitted_exponent - prof.base_exponent) <= EXPONENT_TOL
              and prof.comparable(prof.norms, prof.base_norms))
        hyps.append(Hypothesis("||R(r_n lambda,T)|| ~ ||R(r_n,T)||", _status(ok),
                               {"exponent": prof.fitted_exponent, "base_exponent": prof.base_exponent}))
        return _verdict(tid, hyps, _closure_in(lam, _peripheral_values(report), T.n, "peripheral"),
                        grid=_profile_grid(prof))
    prof = growth_profile(T, 1.0, n_min=n_min, n_max=n_max, report=report)
    b = prof.base_exponent
    hyps.append(Hypothesis("||R(r_n,T)|| = O(1/(r_n-1)^2)",
                           _status(b is not None and b <= QUADRATIC_EXPONENT), {"exponent": b}))
    candidates = [np.asarray(z, dtype=complex)] if z is not None else list(eigenspace(T, lam, report).T)
    found, evidence = None, {}
    for cand in candidates:
        eh = _eigen_pair(T, lam, cand, report)
        if eh.status != HOLDS:
            hyps.append(eh)
            return _verdict(tid, hyps, None)
        absz = modulus(cand) / np.abs(cand).max()
        if x_prime is not None:
            ok, evidence = _check_functional(T, x_prime, absz)
            found = cand if ok else None
        else:
            xp = _adjoint_functional(T, absz)
            if xp is not None:
                ok, evidence = _check_functional(T, xp, absz)
                found = cand if ok else None
        if found is not None:
            break
    if found is not None:
        hyps.append(Hypothesis("0 <= x' <= T'x', <x',|z|> != 0", HOLDS, evidence))
    elif x_prime is not None:
        hyps.append(Hypothesis("0 <= x' <= T'x', <x',|z|> != 0", FAILS, evidence))
    else:
        hyps.append(Hypothesis("0 <= x' <= T'x', <x',|z|> != 0", ONE_SIDED,
                               {"note": "no witness found by linear feasibility"}))
    return _verdict(tid, hyps, _closure_in(lam, _peripheral_values(report), T.n, "peripheral"),
                    grid=_profile_grid(prof))


# feasibility-based checkers -----------------------------------------------


def _real_basis(T, lam, report):
    B = eigenspace(T, lam, report)
    if np.abs(B.imag).max(initial=0.0) > 1e-12:
        return None
    return B.real


def _dominating_fixed_vector(T, absz, report):
    """``x in ker(1 - T)`` real with ``x >= |z|``; ``None`` if infeasible."""
    if not report.contains(1.0):
        return None
    B = _real_basis(T, 1.0, report)
    if B is None:
        return None
    g = B.shape[1]
    res = linprog(np.zeros(g), A_ub=-B, b_ub=-absz, bounds=[(None, None)] * g, method="highs")
    if res.status != 0:
        return None
    x = B @ res.x
    return x if np.all(x >= absz - FEAS_TOL * max(1.0, absz.max())) else None


def _orbit_trend(T, v, horizon):
    a = T.real if T.nonneg_certified else T.matrix
    p = T.norm_choice
    norms = []
    for _ in range(horizon + 1):
        norms.append(float(np.linalg.norm(v, ord=p)))
        v = a @ v
    norms = np.array(norms)
    js = np.arange(horizon + 1)
    w = (js >= max(8, horizon // 8)) & (norms > 0)
    trend = loglog_slope(js[w], norms[w]) if w.sum() >= 2 else -math.inf
    return norms, trend


def verify_prop_3_1(T, lam, z=None, mode="power_bounded_orbit", horizon=ORBIT_HORIZON):
    """Power closure of ``lambda`` from a bounded orbit of ``|z|`` or a dominating fixed vector.

    Only ``|lambda| = 1`` is required, not ``r(T) = 1``.
    """
    if mode not in ("power_bounded_orbit", "dominating_fixed_vector"):
        raise ValueError(f"unknown mode {mode!r}")
    report = spectrum(T)
    lam = complex(lam)
    hyps = [_unimodular(lam)]
    if hyps[0].status != HOLDS or not report.contains(lam):
        hyps.append(Hypothesis("lambda is an eigenvalue", _status(report.contains(lam))))
        return _verdict("prop3.1", hyps, None)
    z = _maybe_z(T, lam, z, report)
    hyps.append(_eigen_pair(T, lam, z, report))
    if hyps[-1].status != HOLDS:
        return _verdict("prop3.1", hyps, None)
    absz = modulus(z) / np.abs(z).max()
    grid = {}
    if mode == "power_bounded_orbit":
        norms, trend = _orbit_trend(T, absz.astype(float), horizon)
        bounded = np.isfinite(norms).all() and trend <= 0.1
        hyps.append(Hypothesis("sup_n ||T^n |z||| < infinity", ONE_SIDED if bounded else FAILS,
                               {"sup": float(norms.max()), "trend": trend, "horizon": horizon}))
        grid = {"horizon": horizon}
    else:
        x = _dominating_fixed_vector(T, absz, report)
        hyps.append(Hypothesis("fixed vector x >= |z|", _status(x is not None),
                               {"x": x, "z": z}))
    return _verdict("prop3.1", hyps, _closure_in(lam, report.values, T.n, "spectrum"), grid=grid)


def _dominated_pair(T, lam, report, phases=PHASE_GRID):
    """Search ``z in ker(lam - T)``, ``x in ker(|lam| - T)`` with ``|z| <= x``.

    ``|z_i| <= x_i`` is replaced by ``Re(e^{-i phi} z_i) <= x_i`` over a grid of
    phases, a relaxation whose solutions become exact after scaling ``x``
    by ``1/cos(pi/phases)``; infeasibility of the relaxation is therefore
    exact. One coordinate of ``z`` is pinned to 1 to exclude ``z = 0``.
    """
    mod = abs(lam)
    if not report.contains(mod):
        return None
    Z = eigenspace(T, lam, report)
    X = eigenspace(T, mod, report)
    if np.abs(X.imag).max(initial=0.0) > 1e-12:
        return None
    X = X.real
    n, g = Z.shape
    h = X.shape[1]
    phi = 2 * np.pi * np.arange(phases) / phases
    rows = []
    for i in range(n):
        for ph in phi:
            w = np.exp(-1j * ph) * Z[i]
            # Re(w a) = Re(w) Re(a) - Im(w) Im(a)
            rows.append(np.concatenate([w.real, -w.imag, -X[i]]))
    A_ub = np.array(rows)
    b_ub = np.zeros(len(rows))
    for k0 in np.argsort(-np.abs(Z).max(axis=1)):
        if np.abs(Z[k0]).max() <= 1e-12:
            break
        A_eq = np.array([np.concatenate([Z[k0].real, -Z[k0].imag, np.zeros(h)]),
                         np.concatenate([Z[k0].imag, Z[k0].real, np.zeros(h)])])
        res = linprog(np.zeros(2 * g + h), A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=[1.0, 0.0],
                      bounds=[(None, None)] * (2 * g + h), method="highs")
        if res.status == 0:
            a = res.x[:g] + 1j * res.x[g:2 * g]
            z = Z @ a
            x = (X @ res.x[2 * g:]) / math.cos(math.pi / phases)
            s = np.linalg.norm(z, ord=T.norm_choice)
            return z / s, x / s
        return None
    return None


def verify_dae(T, lam, phases=PHASE_GRID):
    """Dominated eigenvector condition at ``lambda`` and power closure of ``|lambda| e^{i k theta}``."""
    report = spectrum(T)
    lam = complex(lam)
    hyps = [Hypothesis("lambda is a nonzero eigenvalue", _status(lam != 0 and report.contains(lam)))]
    if hyps[0].status != HOLDS:
        return _verdict("thm3.5", hyps, None)
    pair = _dominated_pair(T, lam, report, phases)
    if pair is None:
        hyps.append(Hypothesis("dominated eigenvector condition", FAILS,
                               {"note": "no z in ker(lambda - T), x in ker(|lambda| - T) with |z| <= x"}))
    else:
        z, x = pair
        ok = np.all(np.abs(z) <= x + FEAS_TOL)
        hyps.append(Hypothesis("dominated eigenvector condition", _status(ok), {"z": z, "x": x}))
    return _verdict("thm3.5", hyps, _closure_in(lam, report.values, T.n, "spectrum"),
                    {"phase_grid": phases})


# irreducible / scheme-based checkers -------------------------------------


@dataclass(frozen=True)
class TorsionResult:
    """``U = diag(z / |z|)`` with ``U^{-1} T U`` compared to ``lambda T``."""

    U: np.ndarray
    defect: float
    isometry_defect: float

    def within(self, T, tol=TORSION_TOL):
        return self.defect <= tol * T.norm()


def torsion_similarity(T, lam, z, seed=0, samples=8):
    z = np.asarray(z, dtype=complex)
    az = np.abs(z)
    small = np.flatnonzero(az <= 1e-12 * az.max())
    if small.size:
        raise ValueError(f"|z| vanishes at coordinates {small.tolist()}; torsion operator undefined")
    u = z / az
    A = T.matrix
    conj = (np.conj(u)[:, None] * A) * u[None, :]
    defect = operator_norm(conj - complex(lam) * A, T.norm_choice)
    rng = np.random.default_rng(seed)
    v = rng.standard_normal((samples, T.n)) + 1j * rng.standard_normal((samples, T.n))
    iso = float(np.abs(np.abs(v * u) - np.abs(v)).max())
    return TorsionResult(np.diag(u), float(defect), iso)


def _nonneg_eigenvector(T, rec, report):
    if abs(rec.value.imag) > report.cluster_tol:
        return None
    B = _real_basis(T, rec.value.real, report)
    if B is None:
        return None
    g = B.shape[1]
    res = linprog(np.zeros(g), A_ub=-B, b_ub=np.zeros(T.n), A_eq=B.sum(axis=0)[None, :], b_eq=[1.0],
                  bounds=[(None, None)] * g, method="highs")
    return None if res.status != 0 else B @ res.x


def _sub(ok, **evidence):
    return {"status": ok if isinstance(ok, str) else _status(ok), **evidence}


def _scheme_hypothesis(T, scheme, report):
    wb = ws_bound(T, scheme, report=report)
    ok = wb.verdict is not None and wb.verdict.bounded
    status = ONE_SIDED if ok else (UNDETERMINED if wb.verdict is None or wb.verdict.verdict == "inconclusive"
                                   else FAILS)
    return Hypothesis(f"(WS)-bounded for {scheme.name}", status,
                      {"sup": wb.sup, "trend": None if wb.verdict is None else wb.verdict.trend})


def verify_thm_5_8(T, scheme, seed=0, horizon=ORBIT_HORIZON, samples=ORBIT_SAMPLES):
    """Structure of the peripheral spectrum of an irreducible (WS)-bounded operator.

    Sub-verdicts ``a``..``g``: ``a`` orbits of positive vectors do not
    vanish (one-sided), ``b`` ``T|z| = |z|`` for peripheral eigenvectors,
    ``c`` the fixed space is one-dimensional and spanned by a strictly
    positive vector, ``d`` ``T`` is diagonally similar to ``lambda T``,
    ``e`` the peripheral spectrum is the group of ``p``-th roots of unity,
    ``f`` peripheral eigenvalues are algebraically simple, ``g`` 1 is the
    only eigenvalue with a positive eigenvector.
    """
    report = spectrum(T)
    hyps = [_unit_radius(report)]
    if not T.nonneg_certified:
        hyps.append(Hypothesis("T positive", FAILS))
        return _verdict("thm5.8", hyps, None)
    irr = irreducibility(T)
    hyps.append(Hypothesis("T irreducible", _status(irr.is_irreducible),
                           {"sccs": [list(c) for c in irr.sccs], "period": irr.period}))
    hyps.append(Hypothesis("peripheral point spectrum nonempty", HOLDS,
                           {"note": "every spectral value of a matrix is an eigenvalue"}))
    if not all(h.status == HOLDS for h in hyps):
        return _verdict("thm5.8", hyps, None)
    hyps.append(_scheme_hypothesis(T, scheme, report))

    def conclude():
        subs = {}
        n, p = T.n, T.norm_choice
        a = T.real
        rng = np.random.default_rng(seed)
        xs = list(np.eye(n)) + list(rng.uniform(0.0, 1.0, size=(samples, n)))
        worst_min, worst_trend = math.inf, math.inf
        for x in xs:
            x = x / np.linalg.norm(x, ord=p)
            norms, trend = _orbit_trend(T, x, horizon)
            worst_min, worst_trend = min(worst_min, norms.min()), min(worst_trend, trend)
        ok_a = worst_min >= ORBIT_FLOOR and worst_trend >= -0.1
        subs["a"] = _sub(ONE_SIDED if ok_a else FAILS, min_norm=worst_min, min_trend=worst_trend,
                         horizon=horizon, samples=len(xs))
        per = report.peripheral
        bases = {rec.value: eigenspace(T, rec.value, report) for rec in per}
        worst_b = 0.0
        for B in bases.values():
            for z in B.T:
                az = np.abs(z) / np.abs(z).max()
                worst_b = max(worst_b, float(np.linalg.norm(a @ az - az, ord=p)))
        subs["b"] = _sub(worst_b <= DOMINATION_TOL, max_defect=worst_b)
        one = report.record_near(1.0)
        if one is None or one.geom_mult != 1:
            subs["c"] = _sub(False, fixed_dim=0 if one is None else one.geom_mult)
        else:
            v = normalize(eigenspace(T, 1.0, report)[:, 0], p)
            pos = bool(np.abs(v.imag).max() <= 1e-12 and v.real.min() > 1e-12 * v.real.max())
            subs["c"] = _sub(pos, fixed_dim=1, min_entry=float(v.real.min()))
        defects, rejected = {}, []
        for lam, B in bases.items():
            try:
                defects[lam] = torsion_similarity(T, lam, B[:, 0]).defect
            except ValueError:
                rejected.append(lam)
        worst_d = max(defects.values(), default=0.0)
        subs["d"] = _sub(not rejected and worst_d <= TORSION_TOL * T.norm(), max_defect=worst_d,
                         rejected=rejected)
        q = irr.period
        roots = np.exp(2j * np.pi * np.arange(q) / q)
        vals = np.array([r.value for r in per])
        matched = all(np.abs(vals - w).min() <= EPS_PER for w in roots) and len(vals) == q
        subs["e"] = _sub(matched, period=q, peripheral=vals)
        subs["f"] = _sub(all(r.alg_mult == 1 and r.index == 1 for r in per),
                         multiplicities=[(r.value, r.alg_mult, r.geom_mult, r.index) for r in per])
        with_pos = [rec.value for rec in report.records if _nonneg_eigenvector(T, rec, report) is not None]
        subs["g"] = _sub(all(abs(v - 1.0) <= report.cluster_tol for v in with_pos), positive_eigenvalues=with_pos)
        ok = all(s["status"] in (HOLDS, ONE_SIDED) for s in subs.values())
        failed = [k for k, s in subs.items() if s["status"] == FAILS]
        return _status(ok), {"failed_parts": failed}, subs

    return _verdict("thm5.8", hyps, conclude,
                    {"orbit_floor": ORBIT_FLOOR, "domination_tol": DOMINATION_TOL, "torsion_tol": TORSION_TOL},
                    {"horizon": horizon, "samples": samples, "seed": seed, "scheme": scheme.name})


def verify_cor_5_6(T, scheme):
    """A (WS)-bounded positive operator with ``r(T) = 1`` has a cyclic peripheral spectrum."""
    report = spectrum(T)
    hyps = [_unit_radius(report)]
    if hyps[0].status != HOLDS or not T.nonneg_certified:
        if not T.nonneg_certified:
            hyps.append(Hypothesis("T positive", FAILS))
        return _verdict("cor5.6", hyps, None)
    hyps.append(_scheme_hypothesis(T, scheme, report))
    per = _peripheral_values(report)

    def conclude():
        res = is_cyclic_set(per, report.spectral_radius, max_denominator=T.n)
        return _status(res.is_cyclic), {"peripheral": per, "missing": list(res.missing)}
    return _verdict("cor5.6", hyps, conclude, grid={"scheme": scheme.name})


# invariant ideals ---------------------------------------------------------


def _radius(op):
    return spectrum(op).spectral_radius if op.n else 0.0


def _values(op):
    return spectrum(op).values if op.n else np.array([], dtype=complex)


def verify_appendix_A1(T, F):
    """Norms, spectral radii and peripheral values of restriction and quotient.

    Also compares ``R(mu, T)`` restricted to ``F`` (and compressed to the
    quotient) with the resolvents of the induced operators at
    ``mu = 2 max(r(T), 1) + 1``.
    """
    bad = is_invariant(T, F.indices)
    hyps = [Hypothesis("F is T-invariant", _status(bad is None), {"witness": bad})]
    if bad is not None:
        return _verdict("appA1", hyps, None)
    report = spectrum(T)
    pair = induce(T, F)
    r = report.spectral_radius
    rtol = report.cluster_tol

    def conclude():
        w = {}
        nT = T.norm()
        nr, nq = pair.restriction.norm() if pair.restriction.n else 0.0, pair.quotient.norm() if pair.quotient.n else 0.0
        w["norms"] = {"T": nT, "restriction": nr, "quotient": nq}
        ok_norm = nr <= nT * (1 + 1e-12) and nq <= nT * (1 + 1e-12)
        rr, rq = _radius(pair.restriction), _radius(pair.quotient)
        w["radii"] = {"T": r, "restriction": rr, "quotient": rq}
        ok_rad = rr <= r + rtol and rq <= r + rtol
        spec = report.values
        worst = 0.0
        for op in (pair.restriction, pair.quotient):
            for mu in _values(op):
                if abs(abs(mu) - r) <= EPS_PER * max(r, 1.0):
                    worst = max(worst, float(np.abs(spec - mu).min()))
        w["peripheral_containment"] = worst
        ok_cont = worst <= CONTAINMENT_TOL
        mu = 2.0 * max(r, 1.0) + 1.0
        R = resolvent(T, mu, report=report).matrix
        inside, outside = F.sorted, F.complement
        res = 0.0
        if inside:
            Rr = resolvent(pair.restriction, mu).matrix
            res = max(res, operator_norm(R[np.ix_(inside, inside)] - Rr, T.norm_choice))
        if outside:
            Rq = resolvent(pair.quotient, mu).matrix
            res = max(res, operator_norm(R[np.ix_(outside, outside)] - Rq, T.norm_choice))
        w["commutation_residual"] = res
        w["mu"] = mu
        ok_comm = res <= COMMUTATION_TOL
        w["parts"] = {"norms": ok_norm, "radii": ok_rad, "containment": ok_cont, "commutation": ok_comm}
        return _status(ok_norm and ok_rad and ok_cont and ok_comm), w

    return _verdict("appA1", hyps, conclude,
                    {"containment_tol": CONTAINMENT_TOL, "commutation_tol": COMMUTATION_TOL})
