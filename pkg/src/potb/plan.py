"""Blocked main-effect plans: levels, development of initial blocks, incidence matrices."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Hashable, Sequence

import numpy as np

from .errors import LevelOutsideGroup, LevelOutsideSet


class _Infinity:
    """The level fixed by every translation."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"

    def __str__(self):
        return "inf"

    def __reduce__(self):
        return (_Infinity, ())


INF = _Infinity()

Level = Hashable
Block = tuple[tuple[Level, ...], ...]  # m factor rows x k plots


def translate(level: Level, u, group) -> Level:
    if level is INF:
        return INF
    return group.add(level, u)


def canonical_levels(group, with_infinity: bool) -> tuple:
    """Level set of a developed plan: INF first (when present), then group elements."""
    return ((INF,) if with_infinity else ()) + tuple(group.elements())


@dataclass(frozen=True)
class Plan:
    """A blocked main-effect plan.

    ``blocks[b][i][p]`` is the level of factor i in plot p of block b, so each
    block reads like the row-per-factor tables used for initial blocks.
    ``level_sets[i]`` fixes the row/column order of every incidence matrix.
    ``group`` is the level domain (used for serialization); ``classes`` is
    optional per-factor metadata set by the recursive product.
    """

    level_sets: tuple[tuple[Level, ...], ...]
    blocks: tuple[Block, ...]
    factor_names: tuple[str, ...] = ()
    group: Any = None
    classes: tuple[int, ...] | None = None

    def __post_init__(self):
        m = len(self.level_sets)
        if not self.factor_names:
            object.__setattr__(self, "factor_names", tuple(f"F{i + 1}" for i in range(m)))
        if len(self.factor_names) != m:
            raise ValueError("one name per factor required")
        if not self.blocks:
            raise ValueError("a plan needs at least one block")
        k = len(self.blocks[0][0]) if self.blocks[0] else 0
        if k < 1:
            raise ValueError("blocks must contain at least one plot")
        allowed = [set(s) for s in self.level_sets]
        for s, levels in zip(allowed, self.level_sets):
            if len(s) != len(levels):
                raise ValueError("level sets must not repeat levels")
        for b, block in enumerate(self.blocks):
            if len(block) != m:
                raise ValueError(f"block {b} has {len(block)} factor rows, expected {m}")
            for i, row in enumerate(block):
                if len(row) != k:
                    raise ValueError(f"block {b} factor {i} has {len(row)} plots, expected {k}")
                for level in row:
                    if level not in allowed[i]:
                        raise LevelOutsideSet(
                            f"level {level!r} of factor {self.factor_names[i]} in block {b} "
                            "is not in its level set"
                        )

    @property
    def m(self) -> int:
        return len(self.level_sets)

    @property
    def b(self) -> int:
        return len(self.blocks)

    @property
    def k(self) -> int:
        return len(self.blocks[0][0])

    @property
    def n_runs(self) -> int:
        return self.b * self.k

    def sizes(self) -> tuple[int, ...]:
        return tuple(len(s) for s in self.level_sets)

    def plots(self, b: int) -> list[tuple[Level, ...]]:
        """Plots of block ``b`` as m-tuples of levels."""
        return list(zip(*self.blocks[b]))

    def restrict(self, factors: Sequence[int]) -> "Plan":
        """The plan seen through a subset of its factors."""
        return Plan(
            level_sets=tuple(self.level_sets[i] for i in factors),
            blocks=tuple(tuple(block[i] for i in factors) for block in self.blocks),
            factor_names=tuple(self.factor_names[i] for i in factors),
            group=self.group,
        )


def develop(initials: Sequence[Sequence[Sequence[Level]]], group, level_sets=None, factor_names=()) -> Plan:
    """Translate every initial block by every group element.

    Blocks come out initial-block major, group elements in canonical order.
    Level sets default to the group elements, with INF prepended when any
    initial block uses it.
    """
    initials = [tuple(tuple(row) for row in block) for block in initials]
    if not initials:
        raise ValueError("need at least one initial block")
    m = len(initials[0])
    has_inf = False
    for t, block in enumerate(initials):
        if len(block) != m:
            raise ValueError(f"initial block {t} has {len(block)} factor rows, expected {m}")
        for row in block:
            for level in row:
                if level is INF:
                    has_inf = True
                elif not group.contains(level):
                    raise LevelOutsideGroup(f"level {level!r} in initial block {t} is not in {group.describe()}")
    if level_sets is None:
        level_sets = (canonical_levels(group, has_inf),) * m
    blocks = []
    for block in initials:
        for u in group.elements():
            blocks.append(tuple(tuple(translate(x, u, group) for x in row) for row in block))
    return Plan(tuple(level_sets), tuple(blocks), tuple(factor_names), group=group)


@dataclass(frozen=True)
class IncidenceMatrix:
    row_index: tuple
    col_index: tuple
    counts: np.ndarray = field(compare=False)

    def __eq__(self, other):
        return (
            isinstance(other, IncidenceMatrix)
            and self.row_index == other.row_index
            and self.col_index == other.col_index
            and np.array_equal(self.counts, other.counts)
        )

    def __hash__(self):
        return hash((self.row_index, self.col_index, self.counts.tobytes()))

    @property
    def shape(self):
        return self.counts.shape


def incidence_factor_factor(plan: Plan, i: int, j: int) -> IncidenceMatrix:
    """M_ij: entry (p, q) counts plots where factor i is at p and factor j at q."""
    rows, cols = plan.level_sets[i], plan.level_sets[j]
    ri = {x: a for a, x in enumerate(rows)}
    ci = {x: a for a, x in enumerate(cols)}
    counts = np.zeros((len(rows), len(cols)), dtype=np.int64)
    for block in plan.blocks:
        for x, y in zip(block[i], block[j]):
            counts[ri[x], ci[y]] += 1
    return IncidenceMatrix(rows, cols, counts)


def incidence_factor_block(plan: Plan, i: int) -> IncidenceMatrix:
    """M_iB: entry (p, b) counts plots of block b where factor i is at level p."""
    rows = plan.level_sets[i]
    ri = {x: a for a, x in enumerate(rows)}
    counts = np.zeros((len(rows), plan.b), dtype=np.int64)
    for b, block in enumerate(plan.blocks):
        for x in block[i]:
            counts[ri[x], b] += 1
    return IncidenceMatrix(rows, tuple(range(plan.b)), counts)
