"""Command-line interface.

Exit codes
----------
0   success / verified conclusion holds
1   verified conclusion fails
2   usage error, unparseable or non-square input, unknown theorem id, bad parameters
3   negative (or complex) entry in a matrix that must be nonnegative
4   numerical failure
10  theorem not applicable (a hypothesis failed)
"""
from __future__ import annotations

import csv
import io
import json
import os
import sys

import click
import numpy as np

from . import harness
from .generators import cyclic_family, jordan_growth_family, random_families
from .growth import N_MAX, N_MIN, growth_profile
from .io import MatrixFormatError, atomic_write, format_complex, parse_complex, read_matrix, read_vector, write_matrix
from .lattice import CoordinateIdeal, NegativeEntryError, PositiveOperator, invariant_ideals
from .report import analyze, plain
from .schemes import BUILTIN_SCHEMES
from .spectral import SpectrumError, spectrum

EXIT_OK, EXIT_FAILS, EXIT_USAGE, EXIT_NEGATIVE, EXIT_NUMERICAL, EXIT_NOT_APPLICABLE = 0, 1, 2, 3, 4, 10

THEOREM_IDS = ("thm1.2a", "thm1.2b", "thm1.2c", "prop3.1", "thm3.5", "thm4.1", "cor4.2",
               "kr2.1a", "kr2.1b", "kr2.1c", "cor5.6", "thm5.8", "appA1")

NORMS = {"1": 1, "2": 2, "inf": np.inf}


def _fail(code, message):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _limit_threads():
    value = os.environ.get("PERRON_THREADS")
    if not value:
        return None
    try:
        from threadpoolctl import threadpool_limits
    except ImportError:
        return None
    return threadpool_limits(limits=int(value))


def _load(path, norm, require_nonneg=True):
    try:
        a = read_matrix(path)
    except MatrixFormatError as exc:
        _fail(EXIT_USAGE, f"{path}: {exc}")
    except OSError as exc:
        _fail(EXIT_USAGE, f"{path}: {exc.strerror}")
    try:
        return PositiveOperator.from_array(a, NORMS[norm], require_nonneg=require_nonneg)
    except NegativeEntryError as exc:
        _fail(EXIT_NEGATIVE, f"{path}: {exc}")


def _emit(text, out):
    if out:
        atomic_write(out, text if text.endswith("\n") else text + "\n")
    else:
        click.echo(text)


def _complex_option(ctx, param, value):
    if value is None:
        return None
    try:
        return parse_complex(value)
    except ValueError as exc:
        raise click.BadParameter(str(exc)) from None


norm_option = click.option("--norm", type=click.Choice(list(NORMS)), default="inf", show_default=True,
                           help="Lattice norm on C^n.")
out_option = click.option("--out", type=click.Path(dir_okay=False), default=None,
                          help="Write here (atomically) instead of stdout.")


@click.group()
@click.version_option(package_name="artifact", prog_name="perronlab")
def main():
    """Spectral analysis of nonnegative matrices."""
    _limit_threads()


@main.command("analyze")
@click.argument("matrix_file", type=click.Path(dir_okay=False))
@norm_option
@click.option("--allow-general", is_flag=True, help="Accept any complex matrix (spectral sections only).")
@click.option("--horizon", type=click.IntRange(1, 100000), default=256, show_default=True,
              help="Power/Cesaro horizon.")
@click.option("--nmax", type=click.IntRange(N_MIN + 1, 52), default=N_MAX, show_default=True)
@out_option
def cmd_analyze(matrix_file, norm, allow_general, horizon, nmax, out):
    """Full analysis report as JSON."""
    T = _load(matrix_file, norm, require_nonneg=not allow_general)
    try:
        rep = analyze(T, horizon=horizon, n_max=nmax)
    except (SpectrumError, np.linalg.LinAlgError, FloatingPointError) as exc:
        _fail(EXIT_NUMERICAL, f"numerical failure: {exc}")
    _emit(rep.to_json(), out)


def _fmt(x):
    return "nan" if not np.isfinite(x) else repr(float(x))


@main.command("growth")
@click.argument("matrix_file", type=click.Path(dir_okay=False))
@click.option("--lambda", "lam", callback=_complex_option, default=None, help="Direction a+bi (default 1+0i).")
@click.option("--z", "z_file", type=click.Path(dir_okay=False), default=None, help="Vector file for |z|.")
@click.option("--nmin", type=click.IntRange(0, 52), default=N_MIN, show_default=True)
@click.option("--nmax", type=click.IntRange(1, 52), default=N_MAX, show_default=True)
@click.option("--rescale", is_flag=True, help="Divide by r(T) first.")
@norm_option
@out_option
def cmd_growth(matrix_file, lam, z_file, nmin, nmax, rescale, norm, out):
    """Resolvent norms along r_n = 1 + 2^-n as CSV."""
    T = _load(matrix_file, norm)
    default_lam = lam is None
    lam = 1.0 + 0j if default_lam else lam
    if nmax - nmin < 1:
        _fail(EXIT_USAGE, "--nmax must exceed --nmin")
    rep = spectrum(T)
    if abs(rep.spectral_radius - 1.0) > rep.cluster_tol:
        if not rescale:
            _fail(EXIT_USAGE, f"r(T) = {rep.spectral_radius!r} != 1; pass --rescale")
        if rep.spectral_radius == 0:
            _fail(EXIT_USAGE, "r(T) = 0; cannot rescale")
        T = T.with_matrix(T.matrix / rep.spectral_radius)
        rep = spectrum(T)
    z = None
    if z_file:
        try:
            z = read_vector(z_file)
        except (OSError, ValueError) as exc:
            _fail(EXIT_USAGE, f"{z_file}: {exc}")
        if z.shape != (T.n,):
            _fail(EXIT_USAGE, f"vector has length {z.size}, expected {T.n}")
    try:
        prof = growth_profile(T, lam, z=z, n_min=nmin, n_max=nmax, report=rep)
    except ValueError as exc:
        _fail(EXIT_USAGE, str(exc))
    buf = io.StringIO()
    buf.write(f"# lambda={format_complex(lam)}{' (default)' if default_lam else ''}\n")
    buf.write(f"# norm={norm} rescaled={bool(rescale)} grid=1+2^-n n={nmin}..{nmax}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "r_n", "resolvent_norm", "directed_norm", "residual", "retained"])
    for i, n in enumerate(prof.n_values):
        d = "" if prof.directed_norms is None else _fmt(prof.directed_norms[i])
        w.writerow([int(n), repr(float(prof.r_seq[i])), _fmt(prof.norms[i]), d, _fmt(prof.residuals[i]),
                    int(prof.retained[i])])
    fit = [int(n) for n, m in zip(prof.n_values, prof.fit_mask) if m]
    buf.write(f"# fit_window={fit[0] if fit else 'none'}..{fit[-1] if fit else 'none'}\n")
    for name, value in (("exponent", prof.fitted_exponent), ("base_exponent", prof.base_exponent),
                        ("directed_exponent", prof.directed_exponent)):
        if name != "directed_exponent" or z is not None:
            buf.write(f"# {name}={'none' if value is None else repr(value)}\n")
    for note in prof.notes:
        buf.write(f"# note: {note}\n")
    _emit(buf.getvalue().rstrip("\n"), out)


def _parse_ideal(text, n):
    try:
        idx = frozenset(int(t) for t in text.split(",") if t.strip())
    except ValueError:
        _fail(EXIT_USAGE, f"bad --ideal {text!r}; expected comma-separated 0-based indices")
    if any(not 0 <= i < n for i in idx):
        _fail(EXIT_USAGE, f"--ideal indices must lie in 0..{n - 1}")
    return CoordinateIdeal(idx, n)


def _run_verify(theorem_id, T, lam, z, scheme, mode, ideal, x_prime):
    if theorem_id.startswith("thm1.2"):
        return harness.verify_thm_1_2(T, lam, z, theorem_id[-1])
    if theorem_id == "prop3.1":
        return harness.verify_prop_3_1(T, lam, z, mode)
    if theorem_id == "thm3.5":
        return harness.verify_dae(T, lam)
    if theorem_id == "thm4.1":
        return harness.verify_thm_4_1(T, lam)
    if theorem_id == "cor4.2":
        return harness.verify_cor_4_2(T, lam)
    if theorem_id.startswith("kr2.1"):
        return harness.verify_kr_2_1(T, lam, theorem_id[-1], z=z, x_prime=x_prime)
    if theorem_id == "cor5.6":
        return harness.verify_cor_5_6(T, scheme)
    if theorem_id == "thm5.8":
        return harness.verify_thm_5_8(T, scheme)
    if theorem_id == "appA1":
        if ideal is not None:
            return harness.verify_appendix_A1(T, ideal)
        return [harness.verify_appendix_A1(T, F) for F in invariant_ideals(T)]
    raise AssertionError(theorem_id)


@main.command("verify")
@click.argument("theorem_id")
@click.argument("matrix_file", type=click.Path(dir_okay=False))
@click.option("--lambda", "lam", callback=_complex_option, default=None, help="Eigenvalue a+bi (default 1).")
@click.option("--z", "z_file", type=click.Path(dir_okay=False), default=None, help="Eigenvector file.")
@click.option("--scheme", type=click.Choice(sorted(BUILTIN_SCHEMES)), default="cesaro", show_default=True)
@click.option("--mode", type=click.Choice(["power_bounded_orbit", "dominating_fixed_vector"]),
              default="power_bounded_orbit", show_default=True, help="Hypothesis used by prop3.1.")
@click.option("--ideal", default=None, help="Comma-separated 0-based indices for appA1 (default: all).")
@click.option("--xprime", "xprime_file", type=click.Path(dir_okay=False), default=None,
              help="Functional for kr2.1c.")
@norm_option
@out_option
def cmd_verify(theorem_id, matrix_file, lam, z_file, scheme, mode, ideal, xprime_file, norm, out):
    """Check hypotheses and conclusion of THEOREM_ID on a matrix.

    THEOREM_ID is one of thm1.2a thm1.2b thm1.2c prop3.1 thm3.5 thm4.1 cor4.2
    kr2.1a kr2.1b kr2.1c cor5.6 thm5.8 appA1.
    """
    if theorem_id not in THEOREM_IDS:
        _fail(EXIT_USAGE, f"unknown theorem id {theorem_id!r}; expected one of {', '.join(THEOREM_IDS)}")
    T = _load(matrix_file, norm)
    lam = 1.0 + 0j if lam is None else lam
    vectors = {}
    for key, path in (("z", z_file), ("x_prime", xprime_file)):
        if path:
            try:
                vectors[key] = read_vector(path)
            except (OSError, ValueError) as exc:
                _fail(EXIT_USAGE, f"{path}: {exc}")
            if vectors[key].shape != (T.n,):
                _fail(EXIT_USAGE, f"{path}: length {vectors[key].size}, expected {T.n}")
    xp = vectors.get("x_prime")
    if xp is not None:
        if np.any(xp.imag != 0):
            _fail(EXIT_USAGE, "--xprime must be real")
        xp = xp.real
    F = _parse_ideal(ideal, T.n) if ideal is not None else None
    try:
        result = _run_verify(theorem_id, T, lam, vectors.get("z"), BUILTIN_SCHEMES[scheme](), mode, F, xp)
    except (SpectrumError, np.linalg.LinAlgError) as exc:
        _fail(EXIT_NUMERICAL, f"numerical failure: {exc}")
    except ValueError as exc:
        _fail(EXIT_USAGE, str(exc))
    if isinstance(result, list):
        payload = {"theorem_id": theorem_id, "verdicts": [v.to_dict() for v in result]}
        statuses = {v.conclusion for v in result}
        status = (harness.FAILS if harness.FAILS in statuses else
                  harness.NOT_APPLICABLE if statuses == {harness.NOT_APPLICABLE} else harness.HOLDS)
    else:
        payload = result.to_dict()
        status = result.conclusion
    payload["matrix_file"] = str(matrix_file)
    payload["lambda"] = format_complex(lam)
    _emit(json.dumps(plain(payload), indent=2, sort_keys=True), out)
    sys.exit(harness.EXIT_CODES[status])


@main.command("generate")
@click.argument("family", type=click.Choice(["cycle", "jordan", "stochastic", "dense", "reducible"]))
@click.option("--p", type=int, default=None, help="Period (cycle).")
@click.option("--m", type=int, default=None, help="Jordan index (jordan).")
@click.option("--decorate", type=int, multiple=True, help="Cycle lengths added to jordan.")
@click.option("--n", type=int, default=None, help="Dimension (stochastic, dense, reducible).")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--density", type=click.FloatRange(0.0, 1.0), default=1.0, show_default=True)
@click.option("--ideal-size", type=int, default=None, help="Planted ideal size (reducible).")
@click.option("--out", type=click.Path(dir_okay=False), required=True,
              help="Matrix file (.mtx or .json); the ground truth goes to OUT.truth.json.")
def cmd_generate(family, p, m, decorate, n, seed, density, ideal_size, out):
    """Write a matrix from a seeded family plus a ground-truth sidecar."""
    try:
        if family == "cycle":
            T, spec = cyclic_family(p if p is not None else 2, with_spec=True)
        elif family == "jordan":
            T, spec = jordan_growth_family(m if m is not None else 2, decorate, with_spec=True)
        else:
            if n is None:
                _fail(EXIT_USAGE, f"{family} needs --n")
            kind = {"stochastic": "irreducible_stochastic", "dense": "nonneg_dense",
                    "reducible": "reducible_block"}[family]
            T, spec = random_families(kind, n, seed, density=density, ideal_size=ideal_size, with_spec=True)
    except (ValueError, RuntimeError) as exc:
        _fail(EXIT_USAGE, str(exc))
    write_matrix(out, T.real)
    atomic_write(out + ".truth.json", json.dumps(plain(spec.to_dict()), indent=2, sort_keys=True) + "\n")
    click.echo(out)


if __name__ == "__main__":
    main()
