"""Acceptance criteria, one test each; every test prints a single PASS/FAIL line."""
import contextlib
import math
import subprocess
import sys
import time

import numpy as np
import pytest

from conftest import NON_MINIMAL, blocks, cycle, op
from perronlab.generators import (
    cyclic_family, jordan_growth_family, random_families, rescale_to_unit_radius, roots_of_unity,
)
from perronlab.growth import abel_bound, check_estimate_2_1, growth_profile, power_and_cesaro
from perronlab.harness import (
    HOLDS, NOT_APPLICABLE, ONE_SIDED, torsion_similarity, verify_appendix_A1, verify_cor_4_2,
    verify_cor_5_6, verify_dae, verify_kr_2_1, verify_prop_3_1, verify_thm_1_2, verify_thm_4_1,
    verify_thm_5_8,
)
from perronlab.io import write_matrix
from perronlab.lattice import (
    CoordinateIdeal, PositiveOperator, in_closure_principal_ideal, invariant_ideals, is_quasi_interior,
)
from perronlab.schemes import abel_scheme, cesaro_scheme, ws_bound
from perronlab.spectral import eigenspace, is_cyclic_set, operator_norm, peripheral_spectrum, spectrum
from perronlab.structure import gcd_of_cycle_lengths, irreducibility

J2 = np.array([[1.0, 1.0], [0.0, 1.0]])
J3 = np.eye(3) + np.eye(3, k=1)


@pytest.fixture
def verdict(capsys):
    def emit(number, title, ok, detail):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {number}: {title}: {detail}")
        assert ok, detail
    return emit


def single_thread():
    try:
        from threadpoolctl import threadpool_limits
    except ImportError:
        return contextlib.nullcontext()
    return threadpool_limits(1)


def test_cyclicity_sweep(verdict):
    densities = (0.2, 0.4, 0.7, 1.0)
    failures = []
    start = time.perf_counter()
    with single_thread():
        for seed in range(500):
            n = 2 + seed % 7
            T = random_families("nonneg_dense", n, seed, density=densities[seed % 4])
            rep = spectrum(T)
            per = peripheral_spectrum(T, report=rep)
            res = is_cyclic_set(per, rep.spectral_radius, angular_tol=1e-6)
            if not res.is_cyclic:
                failures.append((seed, n, res.missing))
    elapsed = time.perf_counter() - start
    ok = not failures and elapsed <= 60.0
    verdict(1, "cyclic peripheral spectrum on 500 random matrices",
            ok, f"{500 - len(failures)}/500 cyclic in {elapsed:.1f}s (limit 60s); first failures {failures[:3]}")


def test_resolvent_estimate_sweep(verdict):
    densities = (0.3, 0.6, 1.0)
    cases = checked = 0
    violations = []
    seed = 0
    while cases < 200:
        n = 2 + seed % 7
        T = random_families("nonneg_dense", n, 10_000 + seed, density=densities[seed % 3])
        seed += 1
        if spectrum(T).spectral_radius <= 0:
            continue
        S, _ = rescale_to_unit_radius(T)
        rep = spectrum(S)
        for rec in rep.peripheral:
            prof = growth_profile(S, rec.value / abs(rec.value), n_min=2, n_max=20, report=rep)
            chk = check_estimate_2_1(S, rec.value, profile=prof, report=rep)
            checked += chk.checked
            violations.extend((seed - 1, v) for v in chk.violations)
        cases += 1
    verdict(2, "lower and upper resolvent bounds on 200 rescaled matrices",
            not violations and checked > 0,
            f"{checked} retained grid points, {len(violations)} violations (slack 1e-8 + residual)")


def _generator_instances():
    for p in range(1, 7):
        yield f"cycle p={p}", cyclic_family(p)
        yield f"cycle p={p} seeded", cyclic_family(p, seed=p)
    for m in (1, 2, 3):
        for deco in ((), (2,), (3,), (2, 3)):
            yield f"jordan m={m} {deco}", jordan_growth_family(m, deco)
    for seed in range(100):
        n = 2 + seed % 9
        yield f"stochastic seed={seed}", random_families("irreducible_stochastic", n, seed, density=0.5)


def test_sandwich_on_generators(verdict):
    bad, count = [], 0
    for label, T in _generator_instances():
        rep = spectrum(T)
        for rec in rep.peripheral:
            for z in eigenspace(T, rec.value, rep).T:
                count += 1
                v = verify_thm_1_2(T, rec.value, z, variant="a")
                if v.conclusion != HOLDS:
                    bad.append((label, rec.value, v.conclusion))
    verdict(3, "sandwich bound for every peripheral eigenvector",
            not bad and count > 0, f"{count - len(bad)}/{count} eigenvectors pass; failures {bad[:3]}")


def test_jordan_growth_exponent(verdict):
    rows, ok = [], True
    for m in (1, 2, 3):
        for deco in ((), (2, 3)):
            T = jordan_growth_family(m, deco)
            e = growth_profile(T).fitted_exponent
            idx = spectrum(T).record_near(1.0).index
            good = e is not None and abs(e - m) <= 0.1 and idx == m
            ok &= good
            rows.append(f"m={m}{list(deco)}: exponent {e:.4f} index {idx}")
    verdict(4, "resolvent exponent and index of Jordan families", ok, "; ".join(rows))


def test_period_cross_validation(verdict):
    problems = []
    for p in range(1, 7):
        for seed in (None, 100 + p):
            T = cyclic_family(p, seed=seed)
            rep = spectrum(T)
            per = rep.peripheral
            roots = roots_of_unity(p)
            if gcd_of_cycle_lengths(T) != p or irreducibility(T).period != p:
                problems.append((p, seed, "period"))
            if len(per) != p:
                problems.append((p, seed, f"|peripheral| = {len(per)}"))
            dist = max(min(abs(r.value - w) for r in per) for w in roots)
            if dist > 1e-8:
                problems.append((p, seed, f"root distance {dist:.2e}"))
            if any((r.alg_mult, r.geom_mult, r.index) != (1, 1, 1) for r in per):
                problems.append((p, seed, "multiplicity"))
    verdict(5, "period, peripheral roots and simplicity of cyclic families",
            not problems, f"12 instances, problems {problems}")


def test_irreducible_peripheral_structure(verdict):
    instances = [random_families("irreducible_stochastic", 2 + s % 9, 500 + s, density=(0.4, 1.0)[s % 2])
                 for s in range(50)]
    instances += [cyclic_family(p) for p in range(1, 7)] + [cyclic_family(p, seed=p) for p in range(1, 7)]
    bad_parts, worst_ratio = [], 0.0
    scheme = cesaro_scheme()
    for k, T in enumerate(instances):
        v = verify_thm_5_8(T, scheme, seed=k)
        for part in "bcefg":
            if v.sub_verdicts.get(part, {}).get("status") != HOLDS:
                bad_parts.append((k, part, v.conclusion))
        rep = spectrum(T)
        for rec in rep.peripheral:
            z = eigenspace(T, rec.value, rep)[:, 0]
            t = torsion_similarity(T, rec.value, z)
            worst_ratio = max(worst_ratio, t.defect / T.norm())
    ok = not bad_parts and worst_ratio <= 1e-10
    verdict(6, "irreducible peripheral structure and diagonal similarity", ok,
            f"{len(instances)} instances, failing parts {bad_parts[:5]}, max torsion defect/||T|| {worst_ratio:.2e}")


def test_boundedness_classification(verdict):
    details, ok = [], True
    worst_sup = 0.0
    for seed in range(20):
        T = random_families("irreducible_stochastic", 2 + seed % 7, seed)
        worst_sup = max(worst_sup, abel_bound(T).sup_estimate)
    ok &= worst_sup <= 1 + 1e-9
    details.append(f"stochastic abel sup {worst_sup:.12f}")
    T = op(J2)
    ces = power_and_cesaro(T, 256).cesaro
    ab = abel_bound(T)
    ok &= abs(ces.trend - 1.0) <= 0.1 and abs(ab.trend - 1.0) <= 0.1 and ces.unbounded and ab.unbounded
    details.append(f"J2 cesaro trend {ces.trend:.3f} ({ces.verdict}), abel trend {ab.trend:.3f} ({ab.verdict})")
    worst = 0.0
    for T in (op(J2), random_families("irreducible_stochastic", 5, 1), op(cycle(3))):
        wb = ws_bound(T, abel_scheme())
        for r, val in zip(wb.index, wb.norms):
            R = np.linalg.inv(r * np.eye(T.n) - T.real)
            worst = max(worst, abs(val - (r - 1.0) * operator_norm(R, np.inf)))
    ok &= worst <= 1e-9
    details.append(f"abel scheme vs (r-1)||R(r,T)|| max difference {worst:.2e}")
    verdict(7, "boundedness classification", bool(ok), "; ".join(details))


def test_cli_gating_exit_codes(verdict, tmp_path):
    cases = [
        ("thm4.1", blocks(J2, cycle(2)), "-1", 0),
        ("thm4.1", J2, "1", 10),
        ("cor4.2", J3, "1", 10),
    ]
    got = []
    for k, (tid, a, lam, want) in enumerate(cases):
        path = tmp_path / f"m{k}.mtx"
        write_matrix(path, a)
        proc = subprocess.run([sys.executable, "-m", "perronlab.cli", "verify", tid, str(path), "--lambda", lam],
                              capture_output=True, text=True)
        got.append((tid, want, proc.returncode))
    verdict(8, "CLI exit codes for gating examples", all(w == g for _, w, g in got),
            ", ".join(f"{t}: expected {w} got {g}" for t, w, g in got))


def test_induced_operators_on_all_ideals(verdict):
    worst_cont, worst_comm, count, bad = 0.0, 0.0, 0, []
    for seed in range(100):
        n = 3 + seed % 5
        T = random_families("reducible_block", n, 2_000 + seed, density=(0.5, 0.8, 1.0)[seed % 3],
                            ideal_size=1 + seed % (n - 1))
        for F in invariant_ideals(T):
            v = verify_appendix_A1(T, F)
            count += 1
            worst_cont = max(worst_cont, v.witnesses.get("peripheral_containment", math.inf))
            worst_comm = max(worst_comm, v.witnesses.get("commutation_residual", math.inf))
            if v.conclusion != HOLDS:
                bad.append((seed, F.sorted))
    ok = not bad and worst_cont <= 1e-7 and worst_comm <= 1e-9
    verdict(9, "restriction and quotient on every invariant ideal", ok,
            f"{count} ideals over 100 instances, max containment {worst_cont:.2e}, "
            f"max commutation residual {worst_comm:.2e}, failures {bad[:3]}")


def test_principal_ideal_closure_oracle(verdict):
    rng = np.random.default_rng(424242)
    pairs_ok = 0
    for k in range(200):
        n = int(rng.integers(1, 9))
        x = rng.uniform(0.0, 1.0, n) * (rng.uniform(size=n) < 0.6)
        y = rng.uniform(0.0, 1.0, n) * (rng.uniform(size=n) < 0.6)
        pairs_ok += in_closure_principal_ideal(x, y).agrees
    unit_ok = unit_total = 0
    for k in range(20):
        n = 2 + k % 7
        y = rng.uniform(0.05, 1.0, n)
        q = is_quasi_interior(y)
        unit_total += n
        unit_ok += sum(c.agrees and c.oracle for c in q.closure_checks)
    ok = pairs_ok == 200 and unit_ok == unit_total
    verdict(10, "principal ideal closure against the support oracle", ok,
            f"pairs {pairs_ok}/200, unit vectors {unit_ok}/{unit_total}")


def _general(a):
    return PositiveOperator.from_array(np.asarray(a, dtype=float), require_nonneg=False)


def test_metamorphic_gating(verdict):
    cases = {
        "thm1.2a": lambda: verify_thm_1_2(op(2 * cycle(2)), -2.0, variant="a"),
        "thm1.2b": lambda: verify_thm_1_2(op(NON_MINIMAL), -1.0, [0, 1, -1], variant="b"),
        "thm1.2c": lambda: verify_thm_1_2(op(cycle(2)), -1.0, [1, 1], variant="c"),
        "prop3.1": lambda: verify_prop_3_1(op(NON_MINIMAL), -1.0, [0, 1, -1]),
        "thm3.5": lambda: verify_dae(_general(np.diag([1.0, -1.0])), -1.0),
        "thm4.1": lambda: verify_thm_4_1(op(J2), 1.0),
        "cor4.2": lambda: verify_cor_4_2(op(J3), 1.0),
        "kr2.1a": lambda: verify_kr_2_1(op(J2), variant="a"),
        "kr2.1b": lambda: verify_kr_2_1(op(blocks(J2, cycle(2))), -1.0, variant="b"),
        "kr2.1c": lambda: verify_kr_2_1(op(J3), 1.0, variant="c"),
        "cor5.6": lambda: verify_cor_5_6(op(J2), cesaro_scheme()),
        "thm5.8": lambda: verify_thm_5_8(op(J2), cesaro_scheme()),
        "appA1": lambda: verify_appendix_A1(op(J2), CoordinateIdeal(frozenset({1}), 2)),
    }
    wrong = []
    for name, run in cases.items():
        v = run()
        violated = any(h.status not in (HOLDS, ONE_SIDED) for h in v.hypotheses)
        if v.conclusion != NOT_APPLICABLE or not violated:
            wrong.append((name, v.conclusion))
    verdict(11, "hypothesis violations yield not_applicable", not wrong,
            f"{len(cases) - len(wrong)}/{len(cases)} checkers gated; wrong {wrong}")
