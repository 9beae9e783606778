"""Generalized class functions and the transfer/induction formula.

A class function here assigns an exact rational to every conjugacy class of
actions of L = (Z/p^k)^h on the permuted points of a group.  Induction
along H <= G is computed two independent ways: as a plain sum over the
alpha-stable cosets, and as an orbit-grouped sum weighted by stabilizer
indices.  Their pointwise agreement is the combinatorial content of the
transfer formula, and the orbit data also drives the transfer-ideal
triviality decision.

The codomain of the underlying character theory is modelled by one rational
scalar per class; the transfer along an inclusion of centralizers acts as
multiplication by the index.  This is the exact shape of the classical
induced-character formula and is the maximal desk-scale shadow of the ring
statement; the genuine module structure is out of scope.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from . import homclass as hc_mod
from .abelian import Ambient
from .errors import (
    InternalMismatch,
    NotInGroup,
    NotSubgroup,
    ResourceLimit,
)
from .homclass import (
    CommutingTuple,
    HomClass,
    classify,
    enumerate_hom_classes,
    realize,
)
from .perm import Perm, PermGroup, _compose, _inverse, _coset_table

GENERIC_TABLE_CAP = 10 ** 4
INDEX_CAP = 10 ** 5


def _conj_images(c, s):
    # c * s * c^{-1} on image tuples
    n = len(c)
    out = [0] * n
    for i in range(n):
        out[c[i]] = c[s[i]]
    return tuple(out)


def _commute_images(a, b):
    n = len(a)
    for i in range(n):
        if a[b[i]] != b[a[i]]:
            return False
    return True


class SymmetricClassTable:
    """Hom classes into the full symmetric group on p^k points.

    Keys are HomClass invariants; membership tests classify a tuple by its
    orbit kernels, so the full group is never materialized.
    """

    def __init__(self, lam: Ambient):
        self.lam = lam
        self.degree = lam.p ** lam.k
        from .perm import symmetric_group

        self.group = symmetric_group(self.degree)
        self.classes = tuple(enumerate_hom_classes(lam.p, lam.h, lam.k))
        self._reps = {}
        self._classify_memo = {}

    def key_of_images(self, imgs):
        memo = self._classify_memo
        key = memo.get(imgs)
        if key is None:
            perms = tuple(Perm(t) for t in imgs)
            key = classify(CommutingTuple(self.degree, perms), self.lam)
            memo[imgs] = key
        return key

    def rep_images(self, key: HomClass):
        reps = self._reps.get(key)
        if reps is None:
            reps = tuple(p.images for p in realize(key).perms)
            self._reps[key] = reps
        return reps

    def centralizer_order(self, key: HomClass) -> int:
        return hc_mod.centralizer_order(key)

    def centralizer_generators(self, key: HomClass):
        return hc_mod.centralizer_generators(key)

    def class_id(self, key: HomClass) -> str:
        return key.class_id()


class GenericClassTable:
    """Hom classes into an arbitrary small group, by exhaustive conjugation.

    Keys are the lexicographically minimal tuples in each conjugation orbit.
    """

    def __init__(self, group: PermGroup, lam: Ambient):
        if group.order > GENERIC_TABLE_CAP:
            raise ResourceLimit(
                "group of order %d too large for exhaustive class table" % group.order
            )
        self.group = group
        self.lam = lam
        self.degree = group.degree
        cap = lam.p ** lam.k
        pool = [
            g.images
            for g in group.iter_elements()
            if cap % _perm_order_images(g.images) == 0
        ]
        conjugators = [g.images for g in group.iter_elements()]
        lookup = {}
        classes = []
        cent_orders = {}
        for tup in _commuting_tuples(pool, lam.h):
            if tup in lookup:
                continue
            orbit = set()
            for c in conjugators:
                orbit.add(tuple(_conj_images(c, s) for s in tup))
            for member in orbit:
                lookup[member] = tup
            classes.append(tup)
            if group.order % len(orbit):
                raise InternalMismatch("orbit size does not divide group order")
            cent_orders[tup] = group.order // len(orbit)
        self.classes = tuple(classes)
        self._lookup = lookup
        self._cent_orders = cent_orders

    def key_of_images(self, imgs):
        try:
            return self._lookup[imgs]
        except KeyError:
            raise NotInGroup("tuple is not an action inside this group") from None

    def rep_images(self, key):
        return key

    def centralizer_order(self, key) -> int:
        return self._cent_orders[key]

    def centralizer_generators(self, key):
        out = [
            g
            for g in self.group.iter_elements()
            if all(_commute_images(g.images, s) for s in key)
        ]
        return out

    def class_id(self, key) -> str:
        return ";".join(Perm(s).cycles() for s in key)


def _perm_order_images(images) -> int:
    n = len(images)
    seen = [False] * n
    order = 1
    for start in range(n):
        if seen[start]:
            continue
        length = 0
        x = start
        while not seen[x]:
            seen[x] = True
            x = images[x]
            length += 1
        order = math.lcm(order, length)
    return order


def _commuting_tuples(pool, h):
    """All h-tuples from pool with pairwise-commuting entries, in lex order."""

    def rec(chosen):
        if len(chosen) == h:
            yield tuple(chosen)
            return
        for s in pool:
            if all(_commute_images(s, c) for c in chosen):
                chosen.append(s)
                yield from rec(chosen)
                chosen.pop()

    yield from rec([])


@lru_cache(maxsize=None)
def class_table(group: PermGroup, lam: Ambient):
    """The canonical class table for a group; full symmetric groups of degree
    p^k get the invariant-based table, everything else the exhaustive one."""
    if group.is_full_symmetric() and group.degree == lam.p ** lam.k:
        return SymmetricClassTable(lam)
    return GenericClassTable(group, lam)


class GenClassFunction:
    """A total function from the hom classes of a group to exact rationals."""

    __slots__ = ("table", "values")

    def __init__(self, table, values):
        vals = {}
        for key in table.classes:
            if key not in values:
                raise ValueError("missing value for class %s" % table.class_id(key))
            vals[key] = Fraction(values[key])
        if len(values) != len(table.classes):
            raise ValueError("values contain keys outside the class table")
        self.table = table
        self.values = vals

    @classmethod
    def constant(cls, table, value) -> "GenClassFunction":
        return cls(table, {key: Fraction(value) for key in table.classes})

    @classmethod
    def indicator(cls, table, key) -> "GenClassFunction":
        return cls(table, {k: Fraction(1 if k == key else 0) for k in table.classes})

    @classmethod
    def random(cls, table, rng) -> "GenClassFunction":
        return cls(
            table,
            {
                key: Fraction(rng.randint(-20, 20), rng.randint(1, 12))
                for key in table.classes
            },
        )

    def __getitem__(self, key) -> Fraction:
        return self.values[key]

    def __eq__(self, other):
        return (
            isinstance(other, GenClassFunction)
            and self.table is other.table
            and self.values == other.values
        )

    def items(self):
        return [(key, self.values[key]) for key in self.table.classes]

    def to_json_dict(self):
        return {
            self.table.class_id(key): str(self.values[key])
            for key in self.table.classes
        }

    @classmethod
    def from_json_dict(cls, table, data) -> "GenClassFunction":
        by_id = {table.class_id(key): key for key in table.classes}
        values = {}
        for cid, text in data.items():
            if cid not in by_id:
                raise ValueError("unknown class id %r" % cid)
            values[by_id[cid]] = Fraction(text)
        return cls(table, values)

    def __repr__(self):
        return "GenClassFunction(%s)" % self.to_json_dict()


def inner_product(a: GenClassFunction, b: GenClassFunction) -> Fraction:
    """Sum over classes of a*b / centralizer order; reciprocity holds exactly
    for this normalization."""
    if a.table is not b.table:
        raise ValueError("class functions live on different tables")
    total = Fraction(0)
    for key in a.table.classes:
        total += a[key] * b[key] / a.table.centralizer_order(key)
    return total


# ---------------------------------------------------------------------------
# coset systems


class _GenericCosets:
    """Left cosets from the exhaustive coset table."""

    def __init__(self, G: PermGroup, H: PermGroup):
        cosets, index = _coset_table(G, H)
        if len(cosets) > INDEX_CAP:
            raise ResourceLimit("index %d exceeds cap" % len(cosets))
        self.tokens = tuple(range(len(cosets)))
        self._reps = tuple(c.rep.images for c in cosets)
        self._index = index

    def rep_images(self, token):
        return self._reps[token]

    def act(self, c_images, token):
        return self._index[_compose(c_images, self._reps[token])]

    def fixed(self, alpha_images):
        out = []
        for token in self.tokens:
            if all(self.act(s, token) == token for s in alpha_images):
                out.append(token)
        return out


class _BlockCosets:
    """Left cosets of the standard block subgroup as ordered partitions."""

    def __init__(self, degree: int, block: int):
        self.degree = degree
        self.block = block
        self.partitions = hc_mod.enumerate_block_partitions(degree, block)
        if len(self.partitions) > INDEX_CAP:
            raise ResourceLimit("index %d exceeds cap" % len(self.partitions))
        self.tokens = tuple(self.partitions)

    def rep_images(self, token):
        images = []
        for blk in token:
            images.extend(blk)
        return tuple(images)

    def act(self, c_images, token):
        return hc_mod.partition_act(c_images, token)

    def fixed(self, alpha_images):
        return [
            part
            for part in self.partitions
            if all(hc_mod.partition_fixed(s, part) for s in alpha_images)
        ]


def _standard_block_size(G: PermGroup, H: PermGroup):
    """Block size if H is exactly the full subgroup preserving consecutive
    equal blocks inside the full symmetric group G, else None."""
    if not G.is_full_symmetric():
        return None
    n = G.degree
    for b in range(1, n + 1):
        if n % b:
            continue
        c = n // b
        if H.order != math.factorial(b) ** c:
            continue
        ok = True
        for g in H.iter_elements():
            for j in range(c):
                base = j * b
                if any(not base <= g.images[base + r] < base + b for r in range(b)):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return b
    return None


@lru_cache(maxsize=None)
def _coset_system(G: PermGroup, H: PermGroup):
    if not H.is_subgroup_of(G):
        raise NotSubgroup("H is not a subgroup of G")
    if G.order // H.order > INDEX_CAP:
        raise ResourceLimit("index exceeds cap")
    b = _standard_block_size(G, H)
    if b is not None:
        return _BlockCosets(G.degree, b)
    return _GenericCosets(G, H)


# ---------------------------------------------------------------------------
# transfer data


@dataclass(frozen=True)
class OrbitRecord:
    """One centralizer orbit of alpha-stable cosets."""

    coset_rep: Perm
    h_key: object
    stabilizer_order: int
    index: int  # [C_G(im alpha) : stabilizer] = orbit size


@dataclass(frozen=True)
class TransferDatum:
    alpha_key: object
    fixed_count: int
    centralizer_order: int
    records: tuple

    def is_empty(self) -> bool:
        return not self.records


def _closure_images(gen_images, degree, cap):
    seen = {tuple(range(degree))}
    frontier = list(seen)
    while frontier:
        nxt = []
        for h in frontier:
            for g in gen_images:
                prod = _compose(g, h)
                if prod not in seen:
                    seen.add(prod)
                    nxt.append(prod)
                    if len(seen) > cap:
                        raise ResourceLimit("closure exceeded cap")
        frontier = nxt
    return seen


def _build_datum(g_table, h_table, system, alpha_key) -> TransferDatum:
    alpha = g_table.rep_images(alpha_key)
    fixed = system.fixed(alpha)
    cent_order = g_table.centralizer_order(alpha_key)
    gen_images = [g.images for g in g_table.centralizer_generators(alpha_key)]
    H = h_table.group

    pool = set(fixed)
    unseen = set(fixed)
    records = []
    for start in sorted(unseen):
        if start not in unseen:
            continue
        orbit = {start}
        frontier = [start]
        while frontier:
            nxt = []
            for token in frontier:
                for c in gen_images:
                    moved = system.act(c, token)
                    if moved not in pool:
                        raise InternalMismatch("centralizer left the fixed coset set")
                    if moved not in orbit:
                        orbit.add(moved)
                        nxt.append(moved)
            frontier = nxt
        unseen -= orbit
        token = min(orbit)
        size = len(orbit)
        if cent_order % size:
            raise InternalMismatch("orbit size does not divide centralizer order")
        stab_order = cent_order // size
        g = system.rep_images(token)
        ginv = _inverse(g)
        beta = tuple(_compose(ginv, _compose(s, g)) for s in alpha)
        h_key = h_table.key_of_images(beta)
        _verify_stabilizer(system, token, g, alpha, beta, H, stab_order, cent_order)
        records.append(
            OrbitRecord(
                coset_rep=Perm(g),
                h_key=h_key,
                stabilizer_order=stab_order,
                index=size,
            )
        )
    if sum(r.index for r in records) != len(fixed):
        raise InternalMismatch("orbit sizes do not add up to the fixed-coset count")
    return TransferDatum(
        alpha_key=alpha_key,
        fixed_count=len(fixed),
        centralizer_order=cent_order,
        records=tuple(records),
    )


def _verify_stabilizer(system, token, g, alpha, beta, H, stab_order, cent_order):
    """Check that the stabilizer of the coset is g * C_H(beta) * g^{-1}.

    The set g*C_H(beta)*g^{-1} is shown to consist of elements of the
    centralizer that fix the coset, and to have the stabilizer's exact
    cardinality (orbit-stabilizer); containment plus count gives equality.
    """
    c_h_beta = [
        h.images
        for h in H.iter_elements()
        if all(_commute_images(h.images, s) for s in beta)
    ]
    if len(c_h_beta) != stab_order:
        raise InternalMismatch(
            "conjugated subgroup centralizer has order %d, stabilizer has order %d"
            % (len(c_h_beta), stab_order)
        )
    ginv = _inverse(g)
    for c in c_h_beta:
        conj = _compose(g, _compose(c, ginv))
        if not all(_commute_images(conj, s) for s in alpha):
            raise InternalMismatch("claimed stabilizer element is not in the centralizer")
        if system.act(conj, token) != token:
            raise InternalMismatch("claimed stabilizer element moves the coset")


@lru_cache(maxsize=None)
def _induction_data(g_table_key, h_table_key):
    G, H, lam = g_table_key[0], h_table_key[0], g_table_key[1]
    g_table = class_table(G, lam)
    h_table = class_table(H, lam)
    system = _coset_system(G, H)
    plain = {}
    data = {}
    for alpha_key in g_table.classes:
        alpha = g_table.rep_images(alpha_key)
        fixed = system.fixed(alpha)
        keys = []
        for token in fixed:
            g = system.rep_images(token)
            ginv = _inverse(g)
            beta = tuple(_compose(ginv, _compose(s, g)) for s in alpha)
            keys.append(h_table.key_of_images(beta))
        plain[alpha_key] = tuple(keys)
        data[alpha_key] = _build_datum(g_table, h_table, system, alpha_key)
    return plain, data


def induction_tables(G: PermGroup, H: PermGroup, lam: Ambient):
    return _induction_data((G, lam), (H, lam))


def restrict(chi: GenClassFunction, H: PermGroup) -> GenClassFunction:
    """Pull back along the inclusion H <= G: value at [beta] is chi at the
    class of beta viewed in G."""
    G = chi.table.group
    if not H.is_subgroup_of(G):
        raise NotSubgroup("H is not a subgroup of G")
    h_table = class_table(H, chi.table.lam)
    values = {}
    for key in h_table.classes:
        beta = h_table.rep_images(key)
        values[key] = chi[chi.table.key_of_images(beta)]
    return GenClassFunction(h_table, values)


def induce(chi: GenClassFunction, G: PermGroup) -> GenClassFunction:
    """Plain coset sum: value at [alpha] adds chi([g^{-1} alpha g]) over
    every alpha-stable coset gH."""
    H = chi.table.group
    g_table = class_table(G, chi.table.lam)
    plain, _ = induction_tables(G, H, chi.table.lam)
    values = {}
    for alpha_key in g_table.classes:
        total = Fraction(0)
        for h_key in plain[alpha_key]:
            total += chi[h_key]
        values[alpha_key] = total
    return GenClassFunction(g_table, values)


def induce_grouped(chi: GenClassFunction, G: PermGroup) -> GenClassFunction:
    """Orbit-grouped sum: value at [alpha] adds index * chi([g^{-1} alpha g])
    over centralizer orbits of alpha-stable cosets.  Must agree with
    ``induce`` pointwise."""
    H = chi.table.group
    g_table = class_table(G, chi.table.lam)
    _, data = induction_tables(G, H, chi.table.lam)
    values = {}
    for alpha_key in g_table.classes:
        total = Fraction(0)
        for rec in data[alpha_key].records:
            total += rec.index * chi[rec.h_key]
        values[alpha_key] = total
    return GenClassFunction(g_table, values)


def transfer_datum(G: PermGroup, H: PermGroup, alpha, lam: Ambient = None) -> TransferDatum:
    """Orbit records for one class: representatives, conjugated classes,
    verified stabilizer orders, and indices."""
    if isinstance(alpha, HomClass):
        lam = alpha.lam
    elif lam is None:
        raise ValueError("lam is required when alpha is a permutation tuple")
    g_table = class_table(G, lam)
    h_table = class_table(H, lam)
    system = _coset_system(G, H)
    if isinstance(alpha, HomClass):
        alpha_key = alpha if isinstance(g_table, SymmetricClassTable) else None
        if alpha_key is None:
            imgs = tuple(p.images for p in realize(alpha).perms)
            alpha_key = g_table.key_of_images(imgs)
    else:
        imgs = tuple(p.images for p in alpha)
        alpha_key = g_table.key_of_images(imgs)
    return _build_datum(g_table, h_table, system, alpha_key)


def ideal_trivial(G: PermGroup, H: PermGroup, alpha, t_is_zero: bool, lam: Ambient = None) -> bool:
    """Decide whether the transfer ideal attached to [alpha] is the whole ring.

    With p inverted (t_is_zero) any nonzero transfer is already surjective,
    so the ideal is trivial exactly when some coset is alpha-stable.  In the
    p-local case the transfer composed with restriction multiplies by the
    orbit index, so an index prime to p makes the transfer surjective;
    otherwise every contribution lands in the ideal (p) + augmentation of a
    connected local-type ring and the quotient is nonzero.
    """
    datum = transfer_datum(G, H, alpha, lam)
    if t_is_zero:
        return datum.fixed_count > 0
    p = lam.p if lam is not None else alpha.lam.p
    return any(rec.index % p != 0 for rec in datum.records)


def verify_mainthm_instance(G: PermGroup, H: PermGroup, chi: GenClassFunction) -> bool:
    """Check the transfer formula instance: plain coset sums equal
    orbit-grouped stabilizer-indexed sums on every class."""
    if chi.table.group != H:
        raise ValueError("chi must be a class function on H")
    return induce(chi, G) == induce_grouped(chi, G)
