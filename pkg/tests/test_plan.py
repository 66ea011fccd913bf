from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from potb.algebra import CyclicGroup, gf_construct
from potb.errors import LevelOutsideGroup, LevelOutsideSet
from potb.plan import INF, Plan, canonical_levels, develop, incidence_factor_block, incidence_factor_factor, translate


def test_translate_fixes_infinity():
    g = CyclicGroup(5)
    assert translate(INF, 3, g) is INF
    assert translate(4, 3, g) == 2
    assert str(INF) == "inf"


def test_canonical_levels_put_infinity_first():
    assert canonical_levels(CyclicGroup(3), True) == (INF, 0, 1, 2)
    assert canonical_levels(CyclicGroup(3), False) == (0, 1, 2)


def test_develop_identity_and_count():
    g = CyclicGroup(5)
    init = [[(INF, 0), (0, 1)], [(0, 2), (1, 2)]]
    plan = develop(init, g)
    assert plan.b == 10 and plan.k == 2 and plan.m == 2
    assert plan.blocks[0] == tuple(map(tuple, init[0]))
    assert plan.blocks[5] == tuple(map(tuple, init[1]))


def test_develop_rejects_foreign_level():
    with pytest.raises(LevelOutsideGroup):
        develop([[(7, 0)]], CyclicGroup(5))


def test_develop_over_field():
    f = gf_construct(3, 2)
    init = [[(INF, f.one), (f.zero, f.alpha)]]
    plan = develop(init, f)
    assert plan.b == 9
    assert plan.level_sets[0][0] is INF and len(plan.level_sets[0]) == 10


@st.composite
def initial_blocks(draw):
    n = draw(st.integers(2, 9))
    m = draw(st.integers(1, 3))
    k = draw(st.integers(1, 4))
    c = draw(st.integers(1, 3))
    level = st.one_of(st.just(INF), st.integers(0, n - 1))
    init = [[draw(st.lists(level, min_size=k, max_size=k)) for _ in range(m)] for _ in range(c)]
    return n, init


@settings(max_examples=60, deadline=None)
@given(initial_blocks())
def test_development_properties(data):
    n, init = data
    g = CyclicGroup(n)
    plan = develop(init, g)
    assert plan.b == len(init) * n
    # translating the developed plan by any u permutes its blocks
    key = lambda blk: tuple(map(tuple, blk))
    blocks = Counter(key(blk) for blk in plan.blocks)
    for u in range(n):
        shifted = Counter(key([[translate(x, u, g) for x in row] for row in blk]) for blk in plan.blocks)
        assert shifted == blocks
    # every group level of a factor gets the same replication within one initial block's orbit
    for i in range(plan.m):
        nib = incidence_factor_block(plan, i).counts
        assert nib.sum() == plan.b * plan.k
        finite = nib[1:] if plan.level_sets[i][0] is INF else nib
        assert len(set(finite.sum(axis=1))) == 1
    if plan.m > 1:
        assert incidence_factor_factor(plan, 0, 1).counts.sum() == plan.b * plan.k


def test_incidence_single_block():
    plan = Plan(((0, 1, 2, 3), (0, 1, 2, 3)), (((0, 2), (1, 3)),))
    m = incidence_factor_factor(plan, 0, 1).counts
    want = np.zeros((4, 4), dtype=int)
    want[0, 1] = want[2, 3] = 1
    assert np.array_equal(m, want)
    nib = incidence_factor_block(plan, 0).counts
    assert nib[:, 0].tolist() == [1, 0, 1, 0]


def test_plan_validation():
    with pytest.raises(LevelOutsideSet):
        Plan(((0, 1),), (((0, 5),),))
    with pytest.raises(ValueError):
        Plan(((0, 1),), (((0, 1), (0, 1)),))
    with pytest.raises(ValueError):
        Plan(((0, 1),), (((0, 1),), ((0,),)))


def test_restrict_keeps_names():
    plan = Plan(((0, 1), (0, 1), (0, 1)), (((0, 1), (1, 0), (0, 0)),), ("A", "B", "C"))
    r = plan.restrict((2, 0))
    assert r.factor_names == ("C", "A")
    assert r.blocks == (((0, 0), (0, 1)),)
