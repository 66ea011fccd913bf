"""Exact arithmetic over Z_n and GF(p^e), cyclotomic cosets and difference multisets.

Field elements are little-endian tuples of base-p digits, so GF(9) built on
x^2 + 1 represents ``1 + 2x`` as ``(1, 2)``. Prime fields use 1-tuples.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from .errors import BadIndex, DivisionByZero, NotPrime, NotPrimePower, SizeExceeded

FieldElement = tuple[int, ...]

DEFAULT_MAX_ORDER = 2**16


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def prime_factors(n: int) -> list[int]:
    """Distinct prime factors of ``n`` in increasing order."""
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def prime_power(q: int) -> tuple[int, int] | None:
    """Return ``(p, e)`` with ``q == p**e`` or None if q is not a prime power."""
    if q < 2:
        return None
    factors = prime_factors(q)
    if len(factors) != 1:
        return None
    p = factors[0]
    e = 0
    while q > 1:
        q //= p
        e += 1
    return p, e


def odd_prime_powers(upto: int, start: int = 3) -> list[int]:
    return [v for v in range(start, upto + 1) if v % 2 == 1 and prime_power(v)]


@dataclass(frozen=True)
class CyclicGroup:
    """The additive group of integers modulo ``n``."""

    n: int

    def __post_init__(self):
        if self.n < 1:
            raise BadIndex(f"group order must be positive, got {self.n}")

    @property
    def order(self) -> int:
        return self.n

    @property
    def zero(self) -> int:
        return 0

    def elements(self) -> list[int]:
        return list(range(self.n))

    def contains(self, x) -> bool:
        return isinstance(x, int) and not isinstance(x, bool) and 0 <= x < self.n

    def add(self, x: int, y: int) -> int:
        return (x + y) % self.n

    def neg(self, x: int) -> int:
        return (-x) % self.n

    def sub(self, x: int, y: int) -> int:
        return (x - y) % self.n

    def describe(self) -> str:
        return f"Z_{self.n}"


# -- polynomial helpers over GF(p); little-endian coefficient lists --------


def _trim(a: list[int]) -> list[int]:
    while len(a) > 1 and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: Sequence[int], mod: Sequence[int], p: int) -> list[int]:
    """Remainder of ``a`` modulo the monic-or-not polynomial ``mod`` over GF(p)."""
    a = _trim([c % p for c in a])
    dm = len(mod) - 1
    lead_inv = pow(mod[-1], p - 2, p)
    while len(a) - 1 >= dm and any(a):
        shift = len(a) - 1 - dm
        factor = a[-1] * lead_inv % p
        for i, c in enumerate(mod):
            a[i + shift] = (a[i + shift] - factor * c) % p
        _trim(a)
        if len(a) - 1 < dm:
            break
    return a


def _is_irreducible(modulus: Sequence[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree 1..deg/2."""
    e = len(modulus) - 1
    for d in range(1, e // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            divisor = list(low) + [1]
            if not any(_poly_mod(modulus, divisor, p)):
                return False
    return True


@dataclass(frozen=True)
class GaloisField:
    """GF(p^e) as polynomials over GF(p) reduced by ``modulus``.

    ``modulus`` is monic, little-endian, of length e+1; ``alpha`` is a primitive
    element. Build instances with :func:`gf_construct`, which certifies both.
    """

    p: int
    e: int
    modulus: tuple[int, ...]
    alpha: FieldElement

    @property
    def order(self) -> int:
        return self.p**self.e

    v = order

    @property
    def zero(self) -> FieldElement:
        return (0,) * self.e

    @property
    def one(self) -> FieldElement:
        return (1,) + (0,) * (self.e - 1)

    def elements(self) -> list[FieldElement]:
        """All elements in canonical (lexicographic digit-tuple) order."""
        return self._elements

    def nonzero(self) -> list[FieldElement]:
        return self._elements[1:]

    @cached_property
    def _elements(self) -> list[FieldElement]:
        return list(itertools.product(range(self.p), repeat=self.e))

    @cached_property
    def _exp(self) -> list[FieldElement]:
        powers = [self.one]
        for _ in range(self.order - 2):
            powers.append(self._polymul(powers[-1], self.alpha))
        return powers

    @cached_property
    def _log(self) -> dict[FieldElement, int]:
        return {x: s for s, x in enumerate(self._exp)}

    def contains(self, x) -> bool:
        return (
            isinstance(x, tuple)
            and len(x) == self.e
            and all(isinstance(d, int) and 0 <= d < self.p for d in x)
        )

    def element(self, value: int | Sequence[int]) -> FieldElement:
        """Coerce an integer (base-p digits) or digit sequence into a field element."""
        if isinstance(value, int):
            if not 0 <= value < self.order:
                raise ValueError(f"{value} is not an element index of GF({self.order})")
            digits = []
            for _ in range(self.e):
                digits.append(value % self.p)
                value //= self.p
            return tuple(digits)
        x = tuple(value)
        if not self.contains(x):
            raise ValueError(f"{value!r} is not an element of GF({self.order})")
        return x

    def to_int(self, x: FieldElement) -> int:
        return sum(d * self.p**i for i, d in enumerate(x))

    def add(self, x: FieldElement, y: FieldElement) -> FieldElement:
        return tuple((a + b) % self.p for a, b in zip(x, y))

    def neg(self, x: FieldElement) -> FieldElement:
        return tuple((-a) % self.p for a in x)

    def sub(self, x: FieldElement, y: FieldElement) -> FieldElement:
        return tuple((a - b) % self.p for a, b in zip(x, y))

    def _polymul(self, x: FieldElement, y: FieldElement) -> FieldElement:
        prod = [0] * (2 * self.e - 1)
        for i, a in enumerate(x):
            if a:
                for j, b in enumerate(y):
                    prod[i + j] += a * b
        r = _poly_mod(prod, self.modulus, self.p)
        return tuple(r) + (0,) * (self.e - len(r))

    def mul(self, x: FieldElement, y: FieldElement) -> FieldElement:
        return self._polymul(x, y)

    def pow(self, x: FieldElement, k: int) -> FieldElement:
        if k < 0:
            raise ValueError("exponent must be nonnegative")
        result = self.one
        base = x
        while k:
            if k & 1:
                result = self._polymul(result, base)
            base = self._polymul(base, base)
            k >>= 1
        return result

    def inv(self, x: FieldElement) -> FieldElement:
        if not any(x):
            raise DivisionByZero(f"zero has no inverse in GF({self.order})")
        # x^(v-2) = x^-1 by Lagrange
        return self.pow(x, self.order - 2)

    def alpha_pow(self, s: int) -> FieldElement:
        """``alpha**s`` for any integer s, via the exponent table."""
        return self._exp[s % (self.order - 1)]

    def log(self, x: FieldElement) -> int:
        """Discrete log to base alpha, in 0..v-2."""
        try:
            return self._log[x]
        except KeyError:
            raise DivisionByZero("log of zero is undefined") from None

    def multiplicative_order(self, x: FieldElement) -> int:
        if not any(x):
            raise DivisionByZero("zero has no multiplicative order")
        k, y = 1, x
        while y != self.one:
            y = self._polymul(y, x)
            k += 1
        return k

    def describe(self) -> str:
        return f"GF({self.order})"


def _is_primitive(x: FieldElement, field: GaloisField) -> bool:
    if not any(x):
        return False
    n = field.order - 1
    return all(field.pow(x, n // q) != field.one for q in prime_factors(n)) and field.pow(
        x, n
    ) == field.one


def gf_construct(p: int, e: int = 1, max_order: int = DEFAULT_MAX_ORDER) -> GaloisField:
    """Build GF(p^e) with the smallest irreducible modulus and smallest primitive element.

    Monic moduli are ranked by their coefficients from x^(e-1) down to the
    constant term; candidate primitive elements follow canonical element order.
    """
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if e < 1:
        raise BadIndex(f"extension degree must be >= 1, got {e}")
    if p**e > max_order:
        raise SizeExceeded(f"GF({p}^{e}) exceeds the size bound {max_order}")
    modulus = None
    for high_first in itertools.product(range(p), repeat=e):
        candidate = tuple(reversed(high_first)) + (1,)
        if _is_irreducible(candidate, p):
            modulus = candidate
            break
    assert modulus is not None  # irreducible polynomials exist in every degree
    probe = GaloisField(p, e, modulus, (0,) * e)
    for x in probe.elements():
        if _is_primitive(x, probe):
            return GaloisField(p, e, modulus, x)
    raise AssertionError("a finite field always has a primitive element")


def gf_for_order(q: int, max_order: int = DEFAULT_MAX_ORDER) -> GaloisField:
    pe = prime_power(q)
    if pe is None:
        raise NotPrimePower(f"{q} is not a prime power")
    return gf_construct(*pe, max_order=max_order)


def field_arithmetic(field: GaloisField, op: str, *operands):
    """Dispatch ``op`` in {add, neg, sub, mul, inv, pow} on the field.

    Integer operands are read as base-p digit encodings; ``pow`` takes an
    element and a nonnegative integer exponent.
    """
    if op == "pow":
        x, k = operands
        return field.pow(field.element(x), k)
    args = [field.element(x) for x in operands]
    if op in ("add", "sub", "mul"):
        return getattr(field, op)(*args)
    if op in ("neg", "inv"):
        return getattr(field, op)(*args)
    raise ValueError(f"unknown field operation {op!r}")


@dataclass(frozen=True)
class CosetDecomposition:
    """Cosets C_0..C_{m-1} of the index-m subgroup of the nonzero field elements.

    ``cosets[i][k]`` is ``alpha**(i + k*m)``, so each coset is stored in the
    order of successive powers of ``beta = alpha**m``.
    """

    field: GaloisField
    m: int
    f: int
    beta: FieldElement
    cosets: tuple[tuple[FieldElement, ...], ...]

    def coset_of(self, x: FieldElement) -> int:
        return self.field.log(x) % self.m

    def as_set(self, i: int) -> frozenset:
        return frozenset(self.cosets[i])


def cyclotomic_cosets(field: GaloisField, m: int) -> CosetDecomposition:
    v = field.order
    if m < 1 or (v - 1) % m:
        raise BadIndex(f"m={m} does not divide v-1={v - 1}")
    f = (v - 1) // m
    cosets = tuple(tuple(field.alpha_pow(i + k * m) for k in range(f)) for i in range(m))
    return CosetDecomposition(field, m, f, field.alpha_pow(m), cosets)


def cyclotomy_number(decomp: CosetDecomposition, i: int, j: int) -> int:
    """Number of s, t in 0..v-2 with 1 + alpha^s = alpha^t, s = i and t = j mod m."""
    m = decomp.m
    if not (0 <= i < m and 0 <= j < m):
        raise BadIndex(f"cyclotomy indices ({i}, {j}) outside 0..{m - 1}")
    field = decomp.field
    one = field.one
    count = 0
    for s in range(i, field.order - 1, m):
        x = field.add(one, field.alpha_pow(s))
        if any(x) and field.log(x) % m == j:
            count += 1
    return count


def cyclotomy_number_bruteforce(decomp: CosetDecomposition, i: int, j: int) -> int:
    """Independent double loop over (s, t); no logarithm table involved."""
    field = decomp.field
    m = decomp.m
    one = field.one
    powers = []
    x = one
    for _ in range(field.order - 1):
        powers.append(x)
        x = field.mul(x, field.alpha)
    count = 0
    for s in range(i, field.order - 1, m):
        lhs = field.add(one, powers[s])
        for t in range(j, field.order - 1, m):
            if powers[t] == lhs:
                count += 1
    return count


def cyclotomy_matrix(decomp: CosetDecomposition) -> list[list[int]]:
    return [[cyclotomy_number(decomp, i, j) for j in range(decomp.m)] for i in range(decomp.m)]


def multiset_difference(a: Iterable, b: Iterable, group) -> Counter:
    """All ordered differences x - y, x in a, y in b, with multiplicity."""
    b = list(b)
    return Counter(group.sub(x, y) for x in a for y in b)


def scale_multiset(field: GaloisField, c: FieldElement, items: Iterable) -> Counter:
    return Counter(field.mul(c, x) for x in items)
