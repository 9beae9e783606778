"""Subgroups of homocyclic abelian p-groups (Z/p^K)^h.

Subgroups are stored as canonical sorted element lists; at desk scale the
ambient group never exceeds 10^4 elements, so there is no need for
Smith-normal-form canonicalization.  The closed-form sublattice count is
kept deliberately independent of the brute-force enumeration so that each
can act as an oracle for the other.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

from .errors import BadParameters, NotPrime, ResourceLimit

AMBIENT_CAP = 10 ** 4


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def check_prime(p: int):
    if not is_prime(p):
        raise NotPrime("%r is not prime" % (p,))


@dataclass(frozen=True)
class Ambient:
    """The group (Z/p^k)^h, elements represented as h-tuples of ints mod p^k."""

    p: int
    k: int
    h: int

    def __post_init__(self):
        check_prime(self.p)
        if self.k < 0 or self.h < 1:
            raise BadParameters("need k >= 0 and h >= 1")

    @property
    def modulus(self) -> int:
        return self.p ** self.k

    @property
    def order(self) -> int:
        return self.modulus ** self.h

    def zero(self):
        return (0,) * self.h

    def add(self, x, y):
        q = self.modulus
        return tuple((a + b) % q for a, b in zip(x, y))

    def neg(self, x):
        q = self.modulus
        return tuple((-a) % q for a in x)

    def scale(self, c, x):
        q = self.modulus
        return tuple((c * a) % q for a in x)

    def pairing(self, x, y) -> int:
        """sum(x_i * y_i) mod p^k."""
        return sum(a * b for a, b in zip(x, y)) % self.modulus

    def elements(self):
        return _ambient_elements(self)

    def element_order(self, x) -> int:
        q = self.modulus
        if q == 1:
            return 1
        return math.lcm(*(q // math.gcd(a, q) for a in x))


@lru_cache(maxsize=None)
def _ambient_elements(ambient: Ambient):
    if ambient.order > AMBIENT_CAP:
        raise ResourceLimit(
            "ambient group of order %d exceeds cap %d" % (ambient.order, AMBIENT_CAP)
        )
    q = ambient.modulus
    return tuple(itertools.product(range(q), repeat=ambient.h))


class AbSubgroup:
    """A subgroup of an Ambient, canonically a sorted tuple of elements."""

    __slots__ = ("ambient", "elements", "_eset")

    def __init__(self, ambient: Ambient, elements):
        self.ambient = ambient
        elems = tuple(sorted(set(elements)))
        self.elements = elems
        self._eset = frozenset(elems)
        if ambient.zero() not in self._eset:
            raise ValueError("subgroup must contain zero")

    @classmethod
    def span(cls, ambient: Ambient, gens) -> "AbSubgroup":
        """Additive closure of a generating set."""
        members = {ambient.zero()}
        for g in gens:
            g = tuple(v % ambient.modulus for v in g)
            if g in members:
                continue
            # extend the current span by the cyclic group generated by g
            shifts = []
            cur = g
            while cur not in members:
                shifts.append(cur)
                cur = ambient.add(cur, g)
            new = set(members)
            for s in shifts:
                new.update(ambient.add(s, m) for m in members)
            members = new
        return cls(ambient, members)

    @classmethod
    def trivial(cls, ambient: Ambient) -> "AbSubgroup":
        return cls(ambient, [ambient.zero()])

    @classmethod
    def full(cls, ambient: Ambient) -> "AbSubgroup":
        return cls(ambient, ambient.elements())

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def index(self) -> int:
        return self.ambient.order // self.order

    def __contains__(self, x) -> bool:
        return x in self._eset

    def __eq__(self, other):
        return (
            isinstance(other, AbSubgroup)
            and self.ambient == other.ambient
            and self.elements == other.elements
        )

    def __lt__(self, other):
        return self.elements < other.elements

    def __hash__(self):
        return hash((self.ambient, self.elements))

    def __repr__(self):
        return "AbSubgroup(order=%d, gens=%s)" % (self.order, self.generators())

    def is_closed(self) -> bool:
        for x in self.elements:
            if self.ambient.neg(x) not in self._eset:
                return False
            for y in self.elements:
                if self.ambient.add(x, y) not in self._eset:
                    return False
        return True

    def generators(self):
        """Deterministic generating list: greedily take minimal new elements."""
        gens = []
        span = {self.ambient.zero()}
        for x in self.elements:
            if x in span:
                continue
            gens.append(x)
            span = set(AbSubgroup.span(self.ambient, gens).elements)
            if len(span) == self.order:
                break
        return gens

    def intersection(self, other: "AbSubgroup") -> "AbSubgroup":
        return AbSubgroup(self.ambient, self._eset & other._eset)

    def annihilator(self) -> "AbSubgroup":
        """{y : <x, y> = 0 mod p^k for all x in self}."""
        amb = self.ambient
        gens = self.generators()
        out = [
            y
            for y in amb.elements()
            if all(amb.pairing(x, y) == 0 for x in gens)
        ]
        return AbSubgroup(amb, out)

    def id_token(self) -> str:
        gens = self.generators()
        if not gens:
            return "U<0>"
        return "U<" + "|".join(".".join(str(v) for v in g) for g in gens) + ">"


def annihilator(subgroup: AbSubgroup) -> AbSubgroup:
    return subgroup.annihilator()


class _SubgroupLattice:
    """Subgroups of an ambient group, computed lazily level by level.

    Level m+1 subgroups are obtained from level-m ones by adjoining an
    element x with p*x in the subgroup (every maximal chain realizes this),
    deduplicating by element list.  Candidates are scanned in ascending
    order and every element of a freshly built extension is marked as
    covered, so each extension is built at most p-1 times per maximal
    subgroup.
    """

    def __init__(self, ambient: Ambient):
        self.ambient = ambient
        self.levels = [(AbSubgroup.trivial(ambient),)]
        self.max_level = ambient.k * ambient.h

    def up_to(self, m: int):
        ambient = self.ambient
        p = ambient.p
        all_elems = ambient.elements()
        while len(self.levels) <= min(m, self.max_level):
            found = {}
            for sub in self.levels[-1]:
                eset = sub._eset
                candidates = [
                    x
                    for x in all_elems
                    if x not in eset and ambient.scale(p, x) in eset
                ]
                covered = set()
                for x in candidates:
                    if x in covered:
                        continue
                    bigger = AbSubgroup.span(ambient, list(sub.generators()) + [x])
                    found.setdefault(bigger.elements, bigger)
                    covered.update(bigger._eset)
            self.levels.append(tuple(sorted(found.values())))
        return self.levels

    def level(self, m: int):
        if m > self.max_level or m < 0:
            return ()
        self.up_to(m)
        return self.levels[m]


@lru_cache(maxsize=None)
def _lattice(ambient: Ambient) -> _SubgroupLattice:
    if ambient.order > AMBIENT_CAP:
        raise ResourceLimit(
            "ambient group of order %d exceeds cap %d" % (ambient.order, AMBIENT_CAP)
        )
    return _SubgroupLattice(ambient)


def _order_exponent(order: int, p: int) -> int:
    m = 0
    tmp = order
    while tmp > 1:
        if tmp % p:
            raise BadParameters("order %d is not a power of %d" % (order, p))
        tmp //= p
        m += 1
    return m


def enumerate_subgroups(h: int, p: int, K: int, order: int):
    """All subgroups of (Z/p^K)^h with the given order, canonically sorted."""
    ambient = Ambient(p, K, h)
    m = _order_exponent(order, p)
    return list(_lattice(ambient).level(m))


def subgroups_of_ambient(ambient: Ambient, order=None):
    lattice = _lattice(ambient)
    if order is None:
        lattice.up_to(lattice.max_level)
        return [s for level in lattice.levels for s in level]
    return list(lattice.level(_order_exponent(order, ambient.p)))


def count_sublattices(h: int, p: int, m: int) -> int:
    """Number of order-p^m subgroups of the h-fold Pruefer p-group.

    Closed form: sum over compositions a_1 + ... + a_h = m of
    p^(sum_i (i-1) a_i), the count of index-p^m sublattices of Z^h in
    column-reduced echelon form.  Independently cross-checked against
    enumerate_subgroups wherever that is feasible.
    """
    check_prime(p)
    if h < 1 or m < 0:
        raise BadParameters("need h >= 1 and m >= 0")
    total = 0
    for comp in _compositions(m, h):
        exponent = sum(i * a for i, a in enumerate(comp))
        total += p ** exponent
    return total


def _compositions(total, parts):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def sub_leq_count(h: int, p: int, k: int) -> int:
    """Number of subgroups of order at most p^k of the h-fold Pruefer p-group."""
    return sum(count_sublattices(h, p, m) for m in range(k + 1))
