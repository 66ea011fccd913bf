"""Initial-block families over Z_n and GF(v), the affine orthogonal array, and the
recursive product that multiplies the number of factors at fixed block size.

Every constructor certifies its own output and raises ``ParameterRejected``
(carrying the failing report) instead of returning a plan that is not a POTB.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Hashable, Sequence

from .algebra import CyclicGroup, cyclotomic_cosets, gf_for_order, prime_power
from .errors import BadParameter, NotPrimePower, ParameterRejected, PreconditionRepeatLevel, ShapeMismatch
from .plan import INF, Plan, develop
from .verify import CertReport, check_potb


def _repeated_levels(plan: Plan):
    """First (block, factor) where a factor repeats a level inside a block, else None."""
    for b, block in enumerate(plan.blocks):
        for i, row in enumerate(block):
            if len(set(row)) != len(row):
                return b, i
    return None


def _certify(plan: Plan, what: str) -> Plan:
    hit = _repeated_levels(plan)
    if hit is not None:
        b, i = hit
        rep = CertReport(
            "repeat-free",
            False,
            [{"block": b, "factor": plan.factor_names[i], "levels": [str(x) for x in plan.blocks[b][i]]}],
        )
        raise ParameterRejected(f"{what}: factor {plan.factor_names[i]} repeats a level in block {b}", rep)
    rep = check_potb(plan)
    if not rep.passed:
        raise ParameterRejected(f"{what}: developed plan is not a POTB", rep)
    return plan


def _group(n: int, over: str, *params):
    """Level group of order n plus the parameters as group elements.

    ``over="cyclic"`` gives Z_n with parameters reduced mod n; ``over="field"``
    gives the additive group of GF(n), reading integer parameters as base-p
    digit encodings (``GaloisField.element``).
    """
    if over == "cyclic":
        return CyclicGroup(n), [r % n for r in params]
    if over == "field":
        if prime_power(n) is None:
            raise BadParameter(f"over='field' needs a prime power order, got {n}")
        field = gf_for_order(n)
        try:
            return field, [field.element(r) for r in params]
        except ValueError as exc:
            raise BadParameter(str(exc)) from None
    raise BadParameter(f"unknown level group {over!r}")


def small_example_plan() -> Plan:
    """Two 4-level factors on six blocks of size two; a balanced POTB with M_12 = J - I."""
    f1 = [(0, 2), (1, 3), (0, 3), (1, 2), (0, 1), (3, 2)]
    f2 = [(1, 3), (0, 2), (2, 1), (3, 0), (3, 2), (0, 1)]
    levels = (0, 1, 2, 3)
    return Plan((levels, levels), tuple(zip(f1, f2)))


def thm31_plan(n: int) -> Plan:
    """Three (n+1)-level factors on 6n blocks of size two, levels Z_n plus INF.

    Two templates, each rotated through the three factor rows.
    """
    if n < 5:
        raise BadParameter(f"n must be >= 5, got {n}")
    templates = (
        ((INF, 0), (0, 1), (n - 1, 1)),
        ((INF, 0), (0, 2), (1, 2)),
    )
    initials = []
    for template in templates:
        for j in range(3):
            rows = [None] * 3
            for r in range(3):
                rows[(r + j) % 3] = template[r]
            initials.append(rows)
    plan = develop(initials, CyclicGroup(n), factor_names=("F0", "F1", "F2"))
    return _certify(plan, f"thm31(n={n})")


def thm32a_plan(n: int, a=1, b=2, over: str = "cyclic") -> Plan:
    """Two n-level factors on 2n blocks of size two."""
    if n < 5:
        raise BadParameter(f"n must be >= 5, got {n}")
    group, (a, b) = _group(n, over, a, b)
    neg = group.neg
    initials = [
        [(a, neg(a)), (b, neg(b))],
        [(b, neg(b)), (neg(a), a)],
    ]
    return _certify(develop(initials, group), f"thm32a(n={n}, a={a}, b={b})")


def thm32b_plan(n: int, a=1, b=3, printed: bool = False, over: str = "cyclic") -> Plan:
    """Four n-level factors on 4n blocks of size two.

    The third initial block gives F1 the levels (0, -b). ``printed=True``
    puts (0, b) there instead; that variant breaks orthogonality of F1 with
    every other factor and is always rejected.
    """
    if n < 5:
        raise BadParameter(f"n must be >= 5, got {n}")
    group, (a, b) = _group(n, over, a, b)
    na, nb, z = group.neg(a), group.neg(b), group.zero
    initials = [
        [(z, a), (a, na), (z, b), (b, nb)],
        [(a, na), (z, na), (b, nb), (z, nb)],
        [(z, b if printed else nb), (nb, b), (na, z), (a, na)],
        [(nb, b), (z, b), (a, na), (a, z)],
    ]
    return _certify(develop(initials, group), f"thm32b(n={n}, a={a}, b={b})")


def thm33a_plan(n: int, a=1, b=2, c=3, d=4, over: str = "cyclic") -> Plan:
    """Symmetric POTB with four n-level factors on 4n blocks of size two.

    Over Z_9 no choice of (a, b, c, d) makes the factor-vs-factor incidences
    equal J - I; over the additive group of GF(9), ``(3, 1, 4, 7)``, i.e.
    (x, 1, 1+x, 1+2x), does.
    """
    if n < 9:
        raise BadParameter(f"n must be >= 9, got {n}")
    group, (a, b, c, d) = _group(n, over, a, b, c, d)

    def pm(x):
        return (x, group.neg(x))

    def mp(x):
        return (group.neg(x), x)

    initials = [
        [pm(a), pm(b), pm(c), pm(d)],
        [pm(b), mp(a), pm(d), mp(c)],
        [pm(c), mp(d), mp(a), pm(b)],
        [mp(d), mp(c), pm(b), pm(a)],
    ]
    return _certify(develop(initials, group), f"thm33a(n={n}, a={a}, b={b}, c={c}, d={d})")


def thm33b_plan(n: int, a=1, b=2, c=3, printed: bool = False, over: str = "cyclic") -> Plan:
    """Four (n+1)-level factors on 6n blocks of size two, levels Z_n plus INF.

    In the second initial block F4 takes (-b, b). ``printed=True`` uses
    (b, -b), which breaks orthogonality of F4 with the other three factors.
    """
    if n < 7:
        raise BadParameter(f"n must be >= 7, got {n}")
    group, (a, b, c) = _group(n, over, a, b, c)

    def pm(x):
        return (x, group.neg(x))

    def mp(x):
        return (group.neg(x), x)

    z = (group.zero, INF)
    initials = [
        [z, pm(a), pm(b), pm(c)],
        [pm(a), z, pm(c), pm(b) if printed else mp(b)],
        [pm(b), pm(c), z, pm(a)],
        [pm(c), mp(b), pm(a), z],
        [pm(a), pm(a), mp(c), mp(c)],
        [pm(a), mp(a), mp(c), pm(c)],
    ]
    return _certify(develop(initials, group), f"thm33b(n={n}, a={a}, b={b}, c={c})")


def thm34_plan(v: int) -> Plan:
    """Two (v+1)-level factors on 2v blocks of size (v+1)/2 over GF(v), v odd.

    B_0 pairs (INF, C_0) with (0, alpha*C_0). B_1 depends on the parity of
    f = (v-1)/2: for even f it is (0, C_0) over (INF, C_0/alpha), for odd f
    it is (0, C_0/alpha) over (INF, C_0).
    """
    if v % 2 == 0 or prime_power(v) is None:
        raise BadParameter(f"v must be an odd prime power, got {v}")
    field = gf_for_order(v)
    decomp = cyclotomic_cosets(field, 2)
    f = decomp.f
    alpha = field.alpha
    alpha_inv = field.inv(alpha)
    c0 = list(decomp.cosets[0])
    a_c0 = [field.mul(alpha, x) for x in c0]
    ainv_c0 = [field.mul(alpha_inv, x) for x in c0]
    zero = field.zero
    b0 = [[INF] + c0, [zero] + a_c0]
    if f % 2 == 0:
        b1 = [[zero] + c0, [INF] + ainv_c0]
    else:
        b1 = [[zero] + ainv_c0, [INF] + c0]
    return _certify(develop([b0, b1], field), f"thm34(v={v})")


# -- orthogonal arrays and the recursive product ---------------------------


@dataclass(frozen=True)
class OrthogonalArray:
    """``rows[r][c]`` is the symbol in row r, column (run) c; strength 2."""

    rows: tuple[tuple[Hashable, ...], ...]
    symbols: tuple[Hashable, ...]
    strength: int = 2

    @property
    def n_runs(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    @property
    def k(self) -> int:
        return len(self.symbols)


def build_oa(q: int) -> OrthogonalArray:
    """OA(q^2, q+1, q, 2): columns (x, y) over GF(q)^2, rows y and x + e*y for each e."""
    if prime_power(q) is None:
        raise NotPrimePower(f"{q} is not a prime power")
    field = gf_for_order(q)
    elems = field.elements()
    cols = [(x, y) for x in elems for y in elems]
    rows = [tuple(y for _, y in cols)]
    for e in elems:
        rows.append(tuple(field.add(x, field.mul(e, y)) for x, y in cols))
    return OrthogonalArray(tuple(rows), tuple(elems))


def verify_oa(oa: OrthogonalArray) -> CertReport:
    k = oa.k
    n = oa.n_runs
    if n % (k * k):
        return CertReport("oa", False, [{"reason": "runs not divisible by k^2", "runs": n, "k": k}])
    index = n // (k * k)
    sym = set(oa.symbols)
    witnesses = []
    for r, row in enumerate(oa.rows):
        bad = [x for x in row if x not in sym]
        if bad:
            witnesses.append({"row": r, "reason": "unknown symbol", "symbol": str(bad[0])})
    if witnesses:
        return CertReport("oa", False, witnesses)
    for r1, r2 in combinations(range(oa.n_rows), 2):
        counts: dict = {}
        for x, y in zip(oa.rows[r1], oa.rows[r2]):
            counts[x, y] = counts.get((x, y), 0) + 1
        for x in oa.symbols:
            for y in oa.symbols:
                c = counts.get((x, y), 0)
                if c != index:
                    witnesses.append({"rows": [r1, r2], "pair": [str(x), str(y)], "count": c, "expected": index})
    if witnesses:
        return CertReport("oa", False, witnesses)
    return CertReport("oa", True, params={"runs": n, "rows": oa.n_rows, "symbols": k, "index": index})


def recursive_product(base: Plan, oa: OrthogonalArray) -> Plan:
    """Multiply the factors of ``base`` by ``m`` using an OA(k^2, m+1, k, 2).

    Columns of the OA are grouped by their first-row symbol; group i becomes
    block i of the expansion of each base block. Inside a base block, symbol
    number s stands for plot s, so factor P_t in a new plot takes the level
    that P has in the base plot named by OA row t. Output factors are ordered
    P_1..P_m, Q_1..Q_m, ...; ``classes`` records t for each.
    """
    k = base.k
    f = base.m
    if f > k:
        raise ShapeMismatch(f"base has {f} factors but blocks of size {k}; need f <= k")
    if oa.k != k:
        raise ShapeMismatch(f"OA has {oa.k} symbols but base blocks have size {k}")
    if oa.n_runs != k * k or oa.n_rows < 2:
        raise ShapeMismatch(f"need an OA with {k * k} runs and at least 2 rows")
    for b, block in enumerate(base.blocks):
        for i, row in enumerate(block):
            if len(set(row)) != len(row):
                raise PreconditionRepeatLevel(
                    f"factor {base.factor_names[i]} repeats a level in block {b}", block=b, factor=i
                )
    sym_index = {s: a for a, s in enumerate(oa.symbols)}
    m = oa.n_rows - 1
    parts: list[list[tuple[int, ...]]] = [[] for _ in range(k)]
    for c in range(oa.n_runs):
        col = tuple(sym_index[oa.rows[r][c]] for r in range(oa.n_rows))
        parts[col[0]].append(col[1:])
    if any(len(p) != k for p in parts):
        raise ShapeMismatch("first OA row does not use every symbol exactly k times")

    blocks = []
    for block in base.blocks:
        for part in parts:
            rows = []
            for p in range(f):
                for t in range(m):
                    rows.append(tuple(block[p][col[t]] for col in part))
            blocks.append(tuple(rows))
    level_sets = tuple(base.level_sets[p] for p in range(f) for _ in range(m))
    names = tuple(f"{base.factor_names[p]}.{t + 1}" for p in range(f) for t in range(m))
    classes = tuple(t + 1 for _ in range(f) for t in range(m))
    return Plan(level_sets, tuple(blocks), names, group=base.group, classes=classes)


def product_restriction_repeats(base: Plan, product: Plan) -> CertReport:
    """Each factor P_t of the product, restricted to itself, is base factor P with every
    block repeated k times in place."""
    k = base.k
    m = product.m // base.m
    witnesses = []
    for p in range(base.m):
        for t in range(m):
            i = p * m + t
            for b, block in enumerate(base.blocks):
                want = sorted(map(repr, block[p]))
                for r in range(k):
                    got = sorted(map(repr, product.blocks[b * k + r][i]))
                    if got != want:
                        witnesses.append({"factor": product.factor_names[i], "base_block": b, "copy": r})
    if witnesses:
        return CertReport("repetition", False, witnesses)
    return CertReport("repetition", True, params={"k": k})


# row 7 of the balanced-POTB catalog: the 9^4 design with M_ij = J - I
ROW7_PARAMS = dict(n=9, a=3, b=1, c=4, d=7, over="field")

CONSTRUCTIONS = {
    "thm31": thm31_plan,
    "thm32a": thm32a_plan,
    "thm32b": thm32b_plan,
    "thm33a": thm33a_plan,
    "thm33b": thm33b_plan,
    "thm34": thm34_plan,
}
