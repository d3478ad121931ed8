"""Versioned JSON analysis reports.

Schema ``perronlab.analysis/1`` (all keys always present, ``null`` when a
section does not apply)::

    schema, tool_version, input_digest, norm_choice, n, certified_nonnegative,
    spectrum:        {spectral_radius, scale, records: [{value, alg_mult,
                      geom_mult, index, peripheral}]}
    irreducibility:  {sccs, is_irreducible, period, periods, condensation_order}
    cyclicity:       {is_cyclic, missing, periods, cap_hit}
    boundedness:     {rescaled_by, abel, power, cesaro, sup_power_over_j}
    tolerances, grid

Complex numbers are ``[re, im]`` pairs; non-finite floats are the strings
``"inf"``, ``"-inf"`` and ``"nan"``.
"""
from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass

import numpy as np

from . import __version__
from .growth import FIT_SKIP, MIN_FIT_POINTS, N_MAX, N_MIN, abel_bound, power_and_cesaro
from .lattice import check_norm
from .spectral import (
    ANGULAR_TOL, CLUSTER_REL, EPS_PER, RANK_REL, RESOLVENT_REL, is_cyclic_set, spectrum,
)
from .structure import irreducibility

SCHEMA = "perronlab.analysis/1"


def plain(obj):
    """Recursively convert to JSON-safe builtins."""
    if isinstance(obj, dict):
        return {str(k): plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return plain(obj.tolist())
    if isinstance(obj, (complex, np.complexfloating)):
        return [plain(float(obj.real)), plain(float(obj.imag))]
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else ("nan" if math.isnan(x) else ("inf" if x > 0 else "-inf"))
    if obj is None or isinstance(obj, (bool, int, str)):
        return obj
    return str(obj)


def norm_label(p):
    return "inf" if p == np.inf else str(int(p))


def digest(a, p):
    h = hashlib.sha256()
    h.update(np.ascontiguousarray(np.asarray(a, dtype=np.complex128)).tobytes())
    h.update(norm_label(p).encode())
    return "sha256:" + h.hexdigest()


@dataclass(frozen=True)
class AnalysisReport:
    """A serialisable analysis; ``data`` follows the documented schema."""

    data: dict

    def to_json(self, indent=2):
        return json.dumps(self.data, indent=indent, sort_keys=True, allow_nan=False)

    @classmethod
    def from_json(cls, text):
        data = json.loads(text)
        if data.get("schema") != SCHEMA:
            raise ValueError(f"unsupported schema {data.get('schema')!r}")
        return cls(data)

    def __getitem__(self, key):
        return self.data[key]


def analyze(T, horizon=256, n_max=N_MAX):
    """Spectrum, structure, cyclicity and boundedness of ``T``.

    Structural and boundedness sections need a certified nonnegative
    operator; boundedness is computed on ``T / r(T)`` when ``r(T) > 0``.
    """
    p = check_norm(T.norm_choice)
    rep = spectrum(T)
    r = rep.spectral_radius
    data = {
        "schema": SCHEMA,
        "tool_version": __version__,
        "input_digest": digest(T.matrix, p),
        "norm_choice": norm_label(p),
        "n": T.n,
        "certified_nonnegative": T.nonneg_certified,
        "spectrum": {
            "spectral_radius": r,
            "scale": rep.scale,
            "records": [{"value": rec.value, "alg_mult": rec.alg_mult, "geom_mult": rec.geom_mult,
                         "index": rec.index, "peripheral": rec.is_peripheral} for rec in rep.records],
        },
        "irreducibility": None,
        "cyclicity": None,
        "boundedness": None,
        "tolerances": {"cluster_rel": CLUSTER_REL, "rank_rel": RANK_REL, "eps_per": EPS_PER,
                       "angular_tol": ANGULAR_TOL, "resolvent_rel": RESOLVENT_REL,
                       "cluster_tol": rep.cluster_tol},
        "grid": {"n_min": N_MIN, "n_max": n_max, "r_n": "1 + 2**-n", "fit_skip": FIT_SKIP,
                 "min_fit_points": MIN_FIT_POINTS, "power_horizon": horizon},
    }
    per = [rec.value for rec in rep.peripheral]
    cyc = is_cyclic_set(per, r, max_denominator=max(1, T.n)) if r > 0 else is_cyclic_set([], 0.0)
    data["cyclicity"] = {"is_cyclic": cyc.is_cyclic, "missing": [list(m) for m in cyc.missing],
                         "periods": [[v, None if f is None else str(f)] for v, f in cyc.periods],
                         "cap_hit": cyc.cap_hit}
    if T.nonneg_certified:
        irr = irreducibility(T)
        data["irreducibility"] = {"sccs": [list(c) for c in irr.sccs], "is_irreducible": irr.is_irreducible,
                                  "period": irr.period, "periods": list(irr.periods),
                                  "condensation_order": list(irr.condensation_order)}
        if r > 0:
            S = T if abs(r - 1.0) <= rep.cluster_tol else T.with_matrix(T.matrix / r)
            ab = abel_bound(S, n_max=n_max)
            pc = power_and_cesaro(S, horizon)
            data["boundedness"] = {
                "rescaled_by": 1.0 if S is T else r,
                "abel": _verdict_dict(ab),
                "power": _verdict_dict(pc.power),
                "cesaro": _verdict_dict(pc.cesaro),
                "sup_power_over_j": pc.sup_power_over_j,
            }
    return AnalysisReport(plain(data))


def _verdict_dict(v):
    return {"kind": v.kind, "sup_estimate": v.sup_estimate, "horizon": v.horizon,
            "trend": v.trend, "verdict": v.verdict}
