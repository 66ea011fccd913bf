import itertools

import numpy as np
import pytest

from potb import (
    build_oa,
    check_balanced_potb,
    check_pergola,
    check_potb,
    incidence_factor_block,
    incidence_factor_factor,
    recursive_product,
    small_example_plan,
    thm31_plan,
    thm32a_plan,
    thm32b_plan,
    thm33a_plan,
    thm33b_plan,
    thm34_plan,
    verify_oa,
)
from potb.constructions import ROW7_PARAMS, OrthogonalArray, product_restriction_repeats
from potb.errors import BadParameter, NotPrimePower, ParameterRejected, PreconditionRepeatLevel, ShapeMismatch
from potb.plan import INF, Plan


def test_thm31_shape():
    plan = thm31_plan(5)
    assert (plan.m, plan.b, plan.k) == (3, 30, 2)
    assert plan.level_sets[0] == (INF, 0, 1, 2, 3, 4)


def test_thm31_rejects_small_n():
    with pytest.raises(BadParameter):
        thm31_plan(4)


@pytest.mark.parametrize("n", range(5, 16))
def test_thm32_sweep(n):
    for a, b in itertools.permutations(range(1, n), 2):
        for fn in (thm32a_plan, thm32b_plan):
            try:
                plan = fn(n, a, b)
            except ParameterRejected as exc:
                assert exc.report is not None and not exc.report.passed
            else:
                assert check_potb(plan).passed


def test_thm32b_printed_variant_rejected():
    for n in range(5, 16):
        with pytest.raises(ParameterRejected):
            thm32b_plan(n, 1, 3, printed=True)


def test_thm32b_gdd_groups():
    plan = thm32b_plan(10, 1, 3)
    nib = incidence_factor_block(plan, 2).counts
    conc = nib @ nib.T
    for x in range(10):
        assert conc[x, (x + 5) % 10] == 0


def test_thm33a_sweep_and_rejection():
    for params in [(1, 2, 3, 4), (2, 1, 4, 3), (1, 3, 2, 4)]:
        assert check_potb(thm33a_plan(11, *params)).passed
    # repeated parameters are degenerate but still orthogonal, just not balanced
    assert check_potb(thm33a_plan(9, 1, 1, 1, 1)).passed
    plan = thm33a_plan(9, 1, 1, 3, 4)
    assert check_potb(plan).passed and not check_balanced_potb(plan).passed
    # a = 0 makes a factor repeat a level inside a block
    with pytest.raises(ParameterRejected) as info:
        thm33a_plan(9, 0, 1, 2, 3)
    assert info.value.report.check == "repeat-free"
    with pytest.raises(BadParameter):
        thm33a_plan(8)


def test_thm33a_field_variant_is_pergola():
    plan = thm33a_plan(**ROW7_PARAMS)
    s = 9
    jm = np.ones((s, s), dtype=int) - np.eye(s, dtype=int)
    for i, j in itertools.combinations(range(4), 2):
        assert np.array_equal(incidence_factor_factor(plan, i, j).counts, jm)
        assert check_pergola(plan, i, j).passed
    assert check_balanced_potb(plan).passed


def test_thm33b_printed_variant_rejected():
    for n in range(7, 16):
        assert check_potb(thm33b_plan(n)).passed
        with pytest.raises(ParameterRejected):
            thm33b_plan(n, printed=True)


def test_thm34_parity_cases():
    # f odd (v = 7, 11) and f even (v = 5, 9, 13) both give J - I
    for v in (5, 7, 9, 11, 13):
        m = incidence_factor_factor(thm34_plan(v), 0, 1).counts
        assert (m == 1 - np.eye(v + 1, dtype=int)).all()


def test_thm34_rejects_bad_v():
    for v in (6, 15, 8):
        with pytest.raises(BadParameter):
            thm34_plan(v)


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9])
def test_oa_exhaustive(q):
    oa = build_oa(q)
    rep = verify_oa(oa)
    assert rep.passed and rep.params["index"] == 1
    # independent oracle: every pair of rows hits every symbol pair
    for r1, r2 in itertools.combinations(range(oa.n_rows), 2):
        assert len(set(zip(oa.rows[r1], oa.rows[r2]))) == q * q


def test_oa_errors_and_corruption():
    with pytest.raises(NotPrimePower):
        build_oa(6)
    oa = build_oa(3)
    rows = [list(r) for r in oa.rows]
    rows[1][0] = rows[1][3]
    bad = OrthogonalArray(tuple(map(tuple, rows)), oa.symbols)
    assert not verify_oa(bad).passed


def test_product_of_small_example():
    base = small_example_plan()
    prod = recursive_product(base, build_oa(2))
    assert (prod.m, prod.b, prod.k) == (4, 12, 2)
    assert prod.classes == (1, 2, 1, 2)
    assert check_potb(prod).passed
    assert product_restriction_repeats(base, prod).passed


def test_product_preconditions():
    with pytest.raises(ShapeMismatch):
        recursive_product(thm31_plan(5), build_oa(2))  # 3 factors, block size 2
    with pytest.raises(ShapeMismatch):
        recursive_product(thm34_plan(5), build_oa(2))
    rep = Plan(((0, 1), (0, 1)), (((0, 0), (0, 1)),))
    with pytest.raises(PreconditionRepeatLevel) as info:
        recursive_product(rep, build_oa(2))
    assert info.value.block == 0 and info.value.factor == 0
