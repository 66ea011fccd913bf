"""Exact certification of POTB, connectivity, BIBD, balance, PERGOLA and GDD properties.

Every check returns a :class:`CertReport`; nothing here raises on a failed
property. Fitted parameters are plain Python ints.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Any, Sequence

import numpy as np

from .errors import BadPartition
from .plan import IncidenceMatrix, Plan, incidence_factor_block, incidence_factor_factor

# matrices larger than this are summarized instead of attached to witnesses
WITNESS_MATRIX_CUTOFF = 64


@dataclass
class CertReport:
    check: str
    passed: bool
    witnesses: list = field(default_factory=list)
    params: dict[str, Any] = field(default_factory=dict)
    children: list["CertReport"] = field(default_factory=list)

    def __bool__(self):
        return self.passed

    def to_dict(self) -> dict:
        out = {"check": self.check, "pass": self.passed}
        if self.params:
            out["params"] = self.params
        if self.witnesses:
            out["witnesses"] = self.witnesses
        if self.children:
            out["children"] = [c.to_dict() for c in self.children]
        return out


def _fail(check, witnesses, **params):
    assert witnesses, "a failing report needs a witness"
    return CertReport(check, False, witnesses, params)


def _matrix_witness(a: np.ndarray):
    if max(a.shape) > WITNESS_MATRIX_CUTOFF:
        return {"shape": list(a.shape), "sum": int(a.sum())}
    return a.tolist()


def _label(level) -> str:
    if isinstance(level, tuple):
        return ",".join(map(str, level))
    return str(level)


def check_otb(plan: Plan, i: int, j: int) -> CertReport:
    """Whether factors i and j are orthogonal through the block factor."""
    mib = incidence_factor_block(plan, i).counts
    mjb = incidence_factor_block(plan, j).counts
    mij = incidence_factor_factor(plan, i, j)
    lhs = mib @ mjb.T
    rhs = plan.k * mij.counts
    bad = np.argwhere(lhs != rhs)
    name = f"otb {plan.factor_names[i]},{plan.factor_names[j]}"
    if len(bad) == 0:
        return CertReport(name, True)
    witnesses = [
        {
            "factors": [i, j],
            "levels": [_label(mij.row_index[p]), _label(mij.col_index[q])],
            "lhs": int(lhs[p, q]),
            "rhs": int(rhs[p, q]),
        }
        for p, q in bad
    ]
    return _fail(name, witnesses)


def check_potb(plan: Plan) -> CertReport:
    witnesses = []
    for i, j in combinations(range(plan.m), 2):
        rep = check_otb(plan, i, j)
        witnesses.extend(rep.witnesses)
    if witnesses:
        return _fail("potb", witnesses)
    return CertReport("potb", True)


def check_connected(plan: Plan, i: int) -> CertReport:
    """Levels of factor i are adjacent when they share a block; pass iff one component."""
    levels = plan.level_sets[i]
    parent = {x: x for x in levels}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for block in plan.blocks:
        row = block[i]
        root = find(row[0])
        for x in row[1:]:
            rx = find(x)
            if rx != root:
                parent[rx] = root
    comps: dict = {}
    for x in levels:
        comps.setdefault(find(x), []).append(_label(x))
    name = f"connected {plan.factor_names[i]}"
    if len(comps) == 1:
        return CertReport(name, True, params={"components": 1})
    return _fail(name, [{"components": list(comps.values())}], components=len(comps))


def check_bibd(nib: IncidenceMatrix | np.ndarray, name: str = "bibd") -> CertReport:
    """Binary incidence with constant k, constant r and constant off-diagonal concurrence."""
    n = nib.counts if isinstance(nib, IncidenceMatrix) else np.asarray(nib)
    v, b = n.shape
    witnesses = []
    if not np.isin(n, (0, 1)).all():
        p, q = np.argwhere(~np.isin(n, (0, 1)))[0]
        witnesses.append({"reason": "not binary", "entry": [int(p), int(q)], "value": int(n[p, q])})
    col = n.sum(axis=0)
    row = n.sum(axis=1)
    if len(set(col.tolist())) > 1:
        witnesses.append({"reason": "block sizes differ", "sizes": sorted(set(col.tolist()))})
    if len(set(row.tolist())) > 1:
        witnesses.append({"reason": "replications differ", "replications": sorted(set(row.tolist()))})
    conc = n @ n.T
    off = conc[~np.eye(v, dtype=bool)]
    if len(set(off.tolist())) > 1:
        witnesses.append(
            {"reason": "concurrences differ", "values": sorted(set(off.tolist())), "concurrence": _matrix_witness(conc)}
        )
    if witnesses:
        return _fail(name, witnesses)
    k = int(col[0])
    r = int(row[0])
    lam = int(off[0]) if v > 1 else 0
    return CertReport(name, True, params={"v": v, "b": b, "r": r, "k": k, "lambda": lam})


def check_factor_bibd(plan: Plan, i: int) -> CertReport:
    return check_bibd(incidence_factor_block(plan, i), name=f"bibd {plan.factor_names[i]}")


def check_balanced_potb(plan: Plan) -> CertReport:
    children = [check_potb(plan)]
    children += [check_connected(plan, i) for i in range(plan.m)]
    children += [check_factor_bibd(plan, i) for i in range(plan.m)]
    failed = [c.check for c in children if not c.passed]
    rep = CertReport("balanced", not failed, children=children)
    if failed:
        rep.witnesses = [{"failed": failed}]
    return rep


def _fit_fi_gj(a: np.ndarray):
    """Return (f, g) with a == f*I + g*J, or None."""
    s = a.shape[0]
    diag = np.diag(a)
    off = a[~np.eye(s, dtype=bool)]
    if len(set(diag.tolist())) > 1 or len(set(off.tolist())) > 1:
        return None
    g = int(off[0]) if s > 1 else 0
    return int(diag[0]) - g, g


def check_pergola(plan: Plan, i: int, j: int) -> CertReport:
    """M M' = M' M = f I + g J for M = M_ij, with integer f and g."""
    name = f"pergola {plan.factor_names[i]},{plan.factor_names[j]}"
    if len(plan.level_sets[i]) != len(plan.level_sets[j]):
        return _fail(name, [{"reason": "asymmetric", "sizes": [len(plan.level_sets[i]), len(plan.level_sets[j])]}])
    m = incidence_factor_factor(plan, i, j).counts
    left = m @ m.T
    right = m.T @ m
    fl, fr = _fit_fi_gj(left), _fit_fi_gj(right)
    if fl is not None and fl == fr:
        return CertReport(name, True, params={"f": fl[0], "g": fl[1]})
    witnesses = []
    if fl is None:
        witnesses.append({"reason": "M M' not of the form fI+gJ", "product": _matrix_witness(left)})
    if fr is None:
        witnesses.append({"reason": "M' M not of the form fI+gJ", "product": _matrix_witness(right)})
    if fl is not None and fr is not None:
        witnesses.append({"reason": "M M' and M' M differ", "left": list(fl), "right": list(fr)})
    return _fail(name, witnesses, M=_matrix_witness(m))


def check_pergola_all(plan: Plan) -> CertReport:
    children = [check_pergola(plan, i, j) for i, j in combinations(range(plan.m), 2)]
    failed = [c.check for c in children if not c.passed]
    rep = CertReport("pergola", not failed, children=children)
    if failed:
        rep.witnesses = [{"failed": failed}]
    return rep


def check_gdd(nib: IncidenceMatrix, groups: Sequence[Sequence], name: str = "gdd") -> CertReport:
    """Concurrences constant on the diagonal, within groups (lambda0) and across groups (lambda1)."""
    levels = list(nib.row_index)
    index = {x: a for a, x in enumerate(levels)}
    group_of = {}
    for g, members in enumerate(groups):
        for x in members:
            if x not in index:
                raise BadPartition(f"{x!r} is not a level of the design")
            if x in group_of:
                raise BadPartition(f"{x!r} lies in more than one group")
            group_of[x] = g
    if len(group_of) != len(levels):
        missing = [x for x in levels if x not in group_of]
        raise BadPartition(f"levels {missing!r} are not covered by the groups")
    if len({len(g) for g in groups}) != 1:
        raise BadPartition("groups must have equal size")

    conc = nib.counts @ nib.counts.T
    diag, within, across = set(), set(), set()
    for p, x in enumerate(levels):
        for q, y in enumerate(levels):
            val = int(conc[p, q])
            if p == q:
                diag.add(val)
            elif group_of[x] == group_of[y]:
                within.add(val)
            else:
                across.add(val)
    witnesses = []
    for label, vals in (("replication", diag), ("lambda0", within), ("lambda1", across)):
        if len(vals) > 1:
            witnesses.append({"reason": f"{label} not constant", "values": sorted(vals)})
    if witnesses:
        return _fail(name, witnesses)
    params = {
        "r": diag.pop(),
        "lambda0": within.pop() if within else None,
        "lambda1": across.pop() if across else None,
    }
    return CertReport(name, True, params=params)


def run_checks(plan: Plan, checks: Sequence[str]) -> list[CertReport]:
    """Run named checks (potb, connected, bibd, balanced, pergola) in a fixed order."""
    known = ("potb", "connected", "bibd", "balanced", "pergola")
    unknown = [c for c in checks if c not in known]
    if unknown:
        raise ValueError(f"unknown checks: {', '.join(unknown)}")
    out = []
    for name in known:
        if name not in checks:
            continue
        if name == "potb":
            out.append(check_potb(plan))
        elif name == "connected":
            out.extend(check_connected(plan, i) for i in range(plan.m))
        elif name == "bibd":
            out.extend(check_factor_bibd(plan, i) for i in range(plan.m))
        elif name == "balanced":
            out.append(check_balanced_potb(plan))
        elif name == "pergola":
            out.append(check_pergola_all(plan))
    return out
