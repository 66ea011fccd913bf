import itertools
import random
from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from potb import (
    Plan,
    check_balanced_potb,
    check_bibd,
    check_connected,
    check_gdd,
    check_pergola,
    check_potb,
    incidence_factor_block,
    incidence_factor_factor,
    small_example_plan,
    thm31_plan,
    thm32a_plan,
    thm34_plan,
)
from potb.errors import BadPartition
from potb.verify import check_otb, run_checks


def oracle_potb(plan):
    """Direct count over plots: for every pair of factors and every pair of levels,
    k * (plots with both) == sum over blocks of (count of x) * (count of y)."""
    k = plan.k
    for i, j in itertools.permutations(range(plan.m), 2):
        joint = Counter()
        blockwise = Counter()
        for block in plan.blocks:
            for x, y in zip(block[i], block[j]):
                joint[x, y] += 1
            ci, cj = Counter(block[i]), Counter(block[j])
            for x in ci:
                for y in cj:
                    blockwise[x, y] += ci[x] * cj[y]
        for x in plan.level_sets[i]:
            for y in plan.level_sets[j]:
                if k * joint[x, y] != blockwise[x, y]:
                    return False
    return True


def oracle_bibd(plan, i):
    rows = [set(block[i]) for block in plan.blocks]
    if any(len(r) != plan.k for r in rows):
        return False
    lam = {sum(1 for r in rows if x in r and y in r) for x, y in itertools.combinations(plan.level_sets[i], 2)}
    rep = {sum(1 for r in rows if x in r) for x in plan.level_sets[i]}
    return len(lam) == 1 and len(rep) == 1


def test_small_example_matrices():
    plan = small_example_plan()
    m = incidence_factor_factor(plan, 0, 1).counts
    assert np.array_equal(m, np.ones((4, 4), dtype=int) - np.eye(4, dtype=int))
    nib = incidence_factor_block(plan, 0).counts
    assert nib.shape == (4, 6)
    assert set(nib.sum(axis=1)) == {3} and set(nib.sum(axis=0)) == {2}


def test_small_example_checks():
    plan = small_example_plan()
    assert check_potb(plan).passed and oracle_potb(plan)
    assert check_connected(plan, 0).passed
    rep = check_bibd(incidence_factor_block(plan, 1))
    assert rep.params == {"v": 4, "b": 6, "r": 3, "k": 2, "lambda": 1}
    rep = check_pergola(plan, 0, 1)
    assert (rep.params["f"], rep.params["g"]) == (1, 2)
    assert bool(check_balanced_potb(plan))


def _replace(plan, b, i, p, level):
    blocks = [[list(r) for r in blk] for blk in plan.blocks]
    blocks[b][i][p] = level
    return Plan(plan.level_sets, tuple(tuple(map(tuple, blk)) for blk in blocks), plan.factor_names, plan.group)


def test_mutated_example_fails_with_witness():
    plan = _replace(small_example_plan(), 0, 1, 0, 0)
    rep = check_potb(plan)
    assert not rep.passed and rep.witnesses
    assert not oracle_potb(plan)


def test_otb_is_symmetric():
    plan = thm32a_plan(7)
    bad = _replace(plan, 3, 0, 1, plan.level_sets[0][0])
    for p in (plan, bad):
        for i, j in itertools.combinations(range(p.m), 2):
            assert check_otb(p, i, j).passed == check_otb(p, j, i).passed


@pytest.mark.parametrize("seed", range(30))
def test_potb_agrees_with_oracle_on_random_plans(seed):
    rng = random.Random(seed)
    base = [thm31_plan(5), thm32a_plan(5), small_example_plan(), thm34_plan(5)][seed % 4]
    plan = base
    for _ in range(rng.randrange(3)):
        b, i, p = rng.randrange(plan.b), rng.randrange(plan.m), rng.randrange(plan.k)
        plan = _replace(plan, b, i, p, rng.choice(plan.level_sets[i]))
    assert check_potb(plan).passed == oracle_potb(plan)
    for i in range(plan.m):
        assert check_bibd(incidence_factor_block(plan, i)).passed == oracle_bibd(plan, i)


def test_disconnected_factor():
    plan = Plan(((0, 1, 2, 3),), (((0, 1),), ((2, 3),)))
    rep = check_connected(plan, 0)
    assert not rep.passed and rep.witnesses


def test_bibd_rejects_nonbinary():
    nib = np.array([[2, 0], [0, 2]])
    assert not check_bibd(nib).passed


@settings(max_examples=40, deadline=None)
@given(st.permutations(range(4)), st.permutations(range(4)), st.permutations(range(6)))
def test_pergola_invariant_under_relabeling(perm1, perm2, blocks):
    plan = small_example_plan()
    relabeled = Plan(
        plan.level_sets,
        tuple(
            (tuple(perm1[x] for x in plan.blocks[b][0]), tuple(perm2[x] for x in plan.blocks[b][1]))
            for b in blocks
        ),
    )
    a, b = check_pergola(plan, 0, 1), check_pergola(relabeled, 0, 1)
    assert a.passed and b.passed and a.params == b.params


def test_pergola_rejects_mismatched_sizes():
    plan = Plan(((0, 1), (0, 1, 2)), (((0, 1), (0, 2)),))
    rep = check_pergola(plan, 0, 1)
    assert not rep.passed and rep.witnesses[0]["reason"] == "asymmetric"


def test_gdd_singletons_reduce_to_bibd():
    nib = incidence_factor_block(small_example_plan(), 0)
    rep = check_gdd(nib, [[x] for x in nib.row_index])
    assert rep.passed and rep.params["lambda0"] is None and rep.params["lambda1"] == 1


def test_gdd_partition_errors():
    nib = incidence_factor_block(small_example_plan(), 0)
    with pytest.raises(BadPartition):
        check_gdd(nib, [[0, 1], [2]])
    with pytest.raises(BadPartition):
        check_gdd(nib, [[0, 1], [1, 2, 3]])
    with pytest.raises(BadPartition):
        check_gdd(nib, [[0, 1], [2, 9]])


def test_run_checks_order_and_unknown():
    reps = run_checks(small_example_plan(), ["pergola", "potb"])
    assert [r.check for r in reps] == ["potb", "pergola"]
    with pytest.raises(ValueError):
        run_checks(small_example_plan(), ["nope"])


def test_report_dict():
    d = check_balanced_potb(small_example_plan()).to_dict()
    assert d["pass"] is True and d["children"]
