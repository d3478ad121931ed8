import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import NON_MINIMAL, OMEGA3, blocks, cycle, op
from perronlab.generators import random_families
from perronlab.harness import (
    FAILS, HOLDS, NOT_APPLICABLE, ONE_SIDED, torsion_similarity, verify_appendix_A1, verify_cor_4_2,
    verify_cor_5_6, verify_dae, verify_kr_2_1, verify_prop_3_1, verify_thm_1_2, verify_thm_4_1,
    verify_thm_5_8,
)
from perronlab.lattice import CoordinateIdeal, PositiveOperator, invariant_ideals
from perronlab.schemes import abel_scheme, cesaro_scheme

J2 = [[1.0, 1.0], [0.0, 1.0]]
J3 = np.eye(3) + np.eye(3, k=1)


def general(a):
    return PositiveOperator.from_array(np.asarray(a, dtype=float), require_nonneg=False)


def ideal(indices, n):
    return CoordinateIdeal(frozenset(indices), n)


def test_eigenvector_growth_checker_examples():
    v = verify_thm_1_2(op(cycle(2)), -1.0, [1, -1], variant="b")
    assert v.conclusion == HOLDS and v.exit_code == 0
    lam = np.exp(1j * np.pi / 3)
    v = verify_thm_1_2(op(cycle(6)), lam, variant="b")
    assert v.conclusion == HOLDS
    v = verify_thm_1_2(op(np.diag([1.0, 0.5])), 1.0, [1, 0], variant="a")
    assert v.conclusion == HOLDS
    assert v.witnesses["lower_margin"] == pytest.approx(1e-8, abs=1e-8)


def test_maximal_growth_checker():
    v = verify_thm_1_2(op(NON_MINIMAL), -1.0, [0, 1, -1], variant="c")
    assert v.conclusion == HOLDS


def test_simple_growth_checker_examples():
    assert verify_thm_4_1(op(cycle(2)), -1.0).conclusion == HOLDS
    v = verify_thm_4_1(general(blocks(J2, [[-1.0]])), -1.0)
    assert v.conclusion == HOLDS


def test_pole_order_checker_examples():
    v = verify_cor_4_2(general(blocks(J2, [[-1.0]])), -1.0)
    assert v.conclusion == HOLDS and v.witnesses["pole_order"] == 1
    assert verify_cor_4_2(op(cycle(4)), 1j).conclusion == HOLDS


def test_resolvent_growth_checker_examples():
    a = np.roll(np.eye(3), 1, axis=1)
    assert verify_kr_2_1(op(a), variant="a").conclusion == HOLDS
    assert verify_kr_2_1(op(J2), 1.0, variant="b").conclusion == HOLDS
    T = op(blocks(cycle(2), J2))
    v = verify_kr_2_1(T, -1.0, variant="c", z=[1, -1, 0, 0], x_prime=[0.5, 0.5, 0, 0])
    assert v.conclusion == HOLDS and not v.conditional


def test_functional_found_by_feasibility():
    T = op(blocks(cycle(2), J2))
    v = verify_kr_2_1(T, -1.0, variant="c")
    assert v.conclusion == HOLDS
    xp = np.array(v.hypothesis("0 <= x' <= T'x', <x',|z|> != 0").evidence["x_prime"])
    assert np.all(T.real.T @ xp >= xp - 1e-9)


def test_bad_functional_is_not_applicable():
    T = op(blocks(cycle(2), J2))
    v = verify_kr_2_1(T, -1.0, variant="c", z=[1, -1, 0, 0], x_prime=[0, 0, 1, 0])
    assert v.conclusion == NOT_APPLICABLE


def test_orbit_and_fixed_vector_checker_examples():
    v = verify_prop_3_1(op(cycle(2)), -1.0, [0.5, -0.5], mode="dominating_fixed_vector")
    assert v.conclusion == HOLDS
    x = np.array(v.hypothesis("fixed vector x >= |z|").evidence["x"])
    assert np.all(x >= 0.5 - 1e-9)
    v = verify_prop_3_1(op(blocks(cycle(2), [[3.0]])), -1.0, [1, -1, 0])
    assert v.conclusion == HOLDS and v.conditional
    assert verify_prop_3_1(op(np.eye(2)), 1.0).conclusion == HOLDS


def test_dominated_eigenvector_checker_examples():
    assert verify_dae(op(cycle(3)), OMEGA3).conclusion == HOLDS
    assert verify_dae(op([[1.0]]), 1.0).conclusion == HOLDS
    v = verify_dae(general(np.diag([1.0, -1.0])), -1.0)
    assert v.conclusion == NOT_APPLICABLE
    assert v.hypothesis("dominated eigenvector condition").status == FAILS


@pytest.mark.parametrize("p", [2, 3, 4])
def test_irreducible_structure_on_cycles(p):
    v = verify_thm_5_8(op(cycle(p)), cesaro_scheme())
    assert v.conclusion == HOLDS and v.conditional
    assert set(v.sub_verdicts) == set("abcdefg")
    assert v.sub_verdicts["a"]["status"] == ONE_SIDED
    assert all(v.sub_verdicts[k]["status"] == HOLDS for k in "bcdefg")


def test_irreducible_structure_on_stochastic():
    T = random_families("irreducible_stochastic", 5, seed=3)
    v = verify_thm_5_8(T, cesaro_scheme())
    assert v.conclusion == HOLDS
    assert v.sub_verdicts["e"]["period"] == 1


def test_torsion_examples():
    t = torsion_similarity(op(cycle(2)), -1.0, [1, -1])
    assert t.defect == 0.0 and t.isometry_defect <= 1e-15
    assert np.allclose(np.diag(t.U), [1, -1])
    t = torsion_similarity(op(cycle(3)), OMEGA3, [1, OMEGA3, OMEGA3 ** 2])
    assert t.defect <= 1e-12
    t = torsion_similarity(op(np.full((2, 2), 0.5)), 1.0, [1, 1])
    assert np.array_equal(t.U, np.eye(2)) and t.defect == 0.0
    with pytest.raises(ValueError):
        torsion_similarity(op(cycle(2)), -1.0, [1, 0])


def test_cyclic_peripheral_checker_examples():
    a = np.random.default_rng(0).uniform(size=(4, 4))
    assert verify_cor_5_6(op(a / a.sum(1, keepdims=True)), cesaro_scheme()).conclusion == HOLDS
    v = verify_cor_5_6(op(blocks(cycle(2), cycle(3))), cesaro_scheme())
    assert v.conclusion == HOLDS
    assert verify_cor_5_6(op([[1.0]]), abel_scheme()).conclusion == HOLDS


def test_induced_operator_checker_examples():
    a = np.array([[0.5, 1, 1], [0, 0.3, 2], [0, 0, 1.0]])
    T = op(a.T)
    for ideal_ in invariant_ideals(T).ideals:
        v = verify_appendix_A1(T, ideal_)
        assert v.conclusion == HOLDS
    assert verify_appendix_A1(T, ideal(range(3), 3)).conclusion == HOLDS
    T = random_families("reducible_block", 6, seed=1, ideal_size=3)
    assert verify_appendix_A1(T, ideal(range(3), 6)).conclusion == HOLDS


# metamorphic gating: one hypothesis-violating instance per checker


GATING_CASES = {
    "thm1.2a": lambda: verify_thm_1_2(op(2 * cycle(2)), -2.0, variant="a"),
    "thm1.2b": lambda: verify_thm_1_2(op(NON_MINIMAL), -1.0, [0, 1, -1], variant="b"),
    "thm1.2c": lambda: verify_thm_1_2(op(cycle(2)), -1.0, [1, 1], variant="c"),
    "thm4.1": lambda: verify_thm_4_1(op(J2), 1.0),
    "cor4.2": lambda: verify_cor_4_2(op(J3), 1.0),
    "kr2.1a": lambda: verify_kr_2_1(op(J2), variant="a"),
    "kr2.1b": lambda: verify_kr_2_1(op(blocks(J2, cycle(2))), -1.0, variant="b"),
    "kr2.1c": lambda: verify_kr_2_1(op(J3), 1.0, variant="c"),
    "prop3.1-orbit": lambda: verify_prop_3_1(op(NON_MINIMAL), -1.0, [0, 1, -1]),
    "prop3.1-fixed": lambda: verify_prop_3_1(general(np.diag([1.0, -1.0])), -1.0, mode="dominating_fixed_vector"),
    "thm3.5": lambda: verify_dae(general(np.diag([1.0, -1.0])), -1.0),
    "thm5.8": lambda: verify_thm_5_8(op(J2), cesaro_scheme()),
    "cor5.6": lambda: verify_cor_5_6(op(J2), cesaro_scheme()),
    "appA1": lambda: verify_appendix_A1(op(J2), ideal([1], 2)),
}


@pytest.mark.parametrize("case", sorted(GATING_CASES))
def test_violated_hypothesis_gives_not_applicable(case):
    v = GATING_CASES[case]()
    assert v.conclusion == NOT_APPLICABLE
    assert v.exit_code == 10
    assert any(h.status not in (HOLDS, ONE_SIDED) for h in v.hypotheses)
    assert v.witnesses.get("failed_hypotheses")


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 5), st.integers(0, 2 ** 31 - 1), st.sampled_from([0.4, 1.0]))
def test_conclusion_only_after_all_hypotheses(n, seed, density):
    a = np.random.default_rng(seed).uniform(size=(n, n)) * (np.random.default_rng(seed + 1).uniform(size=(n, n)) < density)
    T = op(a)
    from perronlab.spectral import spectrum
    r = spectrum(T).spectral_radius
    if r > 0:
        T = op(a / r)
    for v in (verify_kr_2_1(T, variant="a"), verify_cor_5_6(T, cesaro_scheme()), verify_thm_4_1(T, 1.0)):
        gated = all(h.status in (HOLDS, ONE_SIDED) for h in v.hypotheses)
        assert (v.conclusion != NOT_APPLICABLE) == gated
        if v.conclusion != NOT_APPLICABLE:
            assert v.conditional == any(h.status == ONE_SIDED for h in v.hypotheses)


def test_verdict_serialises():
    v = verify_thm_5_8(op(cycle(3)), cesaro_scheme())
    d = json.loads(json.dumps(v.to_dict()))
    assert d["theorem_id"] == "thm5.8"
    assert d["conclusion"]["status"] == HOLDS


def test_verdicts_are_deterministic():
    T = random_families("irreducible_stochastic", 6, seed=9)
    a = verify_thm_5_8(T, cesaro_scheme(), seed=4).to_dict()
    b = verify_thm_5_8(T, cesaro_scheme(), seed=4).to_dict()
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)
