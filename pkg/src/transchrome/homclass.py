"""Actions of (Z/p^k)^h on p^k points, up to symmetric-group conjugacy.

A tuple of h pairwise-commuting permutations of p-power order is the same
thing as an action of L = (Z/p^k)^h, and conjugacy classes of such tuples
in Sym(p^k) correspond to isomorphism classes of L-sets: a canonical
multiset of (orbit kernel, multiplicity) pairs.  This module enumerates the
classes, realizes them as concrete permutations, and computes the invariants
used by the component decomposition: centralizer structure, minimal block
level, diagonal factorization, dual image, and the fixed-coset fibration
over block subgroups.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

from .abelian import Ambient, AbSubgroup, check_prime, subgroups_of_ambient
from .errors import (
    BadParameters,
    InternalMismatch,
    NotCommuting,
    OrderNotPPower,
    ResourceLimit,
)
from .perm import Perm, _compose

LAMBDA_ORDER_CAP = 10 ** 4
DEGREE_CAP = 16
PARTITION_CAP = 10 ** 5


def lam_group(p: int, h: int, k: int) -> Ambient:
    """The source group (Z/p^k)^h."""
    return Ambient(p, k, h)


@dataclass(frozen=True)
class HomClass:
    """Conjugacy-class invariant of an action of lam on finitely many points.

    ``orbit_types`` is the canonically sorted tuple of (kernel, multiplicity)
    pairs: the action has ``multiplicity`` orbits isomorphic to lam/kernel.
    """

    lam: Ambient
    orbit_types: tuple

    def __post_init__(self):
        seen = set()
        for kernel, mult in self.orbit_types:
            if mult < 1:
                raise BadParameters("orbit multiplicity must be positive")
            if kernel.ambient != self.lam:
                raise BadParameters("kernel lives in the wrong ambient group")
            if kernel in seen:
                raise BadParameters("duplicate kernel in orbit types")
            seen.add(kernel)
            index = kernel.index
            if self.lam.order % index:
                raise BadParameters("orbit size must divide the source order")
        expected = tuple(sorted(self.orbit_types, key=lambda t: (t[0].index, t[0].elements)))
        if expected != self.orbit_types:
            raise BadParameters("orbit types are not canonically sorted")

    @property
    def points(self) -> int:
        return sum(mult * kernel.index for kernel, mult in self.orbit_types)

    def sort_key(self):
        # expanded orbit list: repeated (size, kernel) pairs compare lexicographically
        key = []
        for kernel, mult in self.orbit_types:
            key.extend([(kernel.index, kernel.elements)] * mult)
        return tuple(key)

    def class_id(self) -> str:
        lam = self.lam
        body = ",".join(
            "(%s:idx%d,m%d)" % (kernel.id_token(), kernel.index, mult)
            for kernel, mult in self.orbit_types
        )
        return "p%d.k%d.h%d:[%s]" % (lam.p, lam.k, lam.h, body)

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def __repr__(self):
        return "HomClass(%s)" % self.class_id()


@dataclass(frozen=True)
class CommutingTuple:
    """h pairwise-commuting permutations, each of p-power order dividing p^k."""

    degree: int
    perms: tuple

    def __post_init__(self):
        for s in self.perms:
            if s.degree != self.degree:
                raise BadParameters("permutation degree mismatch")
        for a, b in itertools.combinations(self.perms, 2):
            if a * b != b * a:
                raise NotCommuting("tuple entries do not commute")


def _check_orders(perms, p, k):
    cap = p ** k
    for s in perms:
        d = s.order()
        if cap % d:
            raise OrderNotPPower(
                "element order %d does not divide %d^%d" % (d, p, k)
            )


def make_tuple(perms, lam: Ambient) -> CommutingTuple:
    perms = tuple(perms)
    if not perms:
        raise BadParameters("empty tuple")
    if len(perms) != lam.h:
        raise BadParameters("tuple length %d != rank %d" % (len(perms), lam.h))
    t = CommutingTuple(perms[0].degree, perms)
    _check_orders(perms, lam.p, lam.k)
    return t


def _kernel_subgroups(lam: Ambient, max_index: int):
    """Subgroups of lam whose index is a p-power dividing max_index."""
    out = []
    for sub in subgroups_of_ambient(lam):
        if max_index % sub.index == 0:
            out.append(sub)
    out.sort(key=lambda s: (s.index, s.elements))
    return out


@lru_cache(maxsize=None)
def enumerate_hom_classes(p: int, h: int, k: int):
    """All classes of actions of (Z/p^k)^h on p^k points, canonically sorted."""
    check_prime(p)
    if h < 1 or k < 0:
        raise BadParameters("need h >= 1 and k >= 0")
    if p ** k > DEGREE_CAP:
        raise ResourceLimit("degree %d exceeds cap %d" % (p ** k, DEGREE_CAP))
    if p ** (k * h) > LAMBDA_ORDER_CAP:
        raise ResourceLimit("source group order exceeds cap")
    lam = lam_group(p, h, k)
    degree = p ** k
    kernels = _kernel_subgroups(lam, degree)
    sizes = [s.index for s in kernels]

    classes = []

    def extend(start, remaining, chosen):
        if remaining == 0:
            classes.append(HomClass(lam, tuple(chosen)))
            return
        for i in range(start, len(kernels)):
            size = sizes[i]
            if size > remaining:
                continue
            for mult in range(1, remaining // size + 1):
                chosen.append((kernels[i], mult))
                extend(i + 1, remaining - mult * size, chosen)
                chosen.pop()

    extend(0, degree, [])
    classes.sort(key=HomClass.sort_key)
    return tuple(classes)


@lru_cache(maxsize=None)
def _coset_layout(kernel: AbSubgroup):
    """Cosets of the kernel in canonical order: (reps, element -> coset idx)."""
    lam = kernel.ambient
    lookup = {}
    reps = []
    for x in lam.elements():
        if x in lookup:
            continue
        idx = len(reps)
        reps.append(x)
        for u in kernel.elements:
            lookup[lam.add(x, u)] = idx
    return tuple(reps), lookup


def realize(hc: HomClass) -> CommutingTuple:
    """Concrete commuting permutations with classify(realize(hc)) == hc.

    Points are labelled orbit by orbit in canonical class order, each orbit
    being the coset space lam/kernel with generator i acting by translation.
    """
    lam = hc.lam
    degree = hc.points
    images = [list(range(degree)) for _ in range(lam.h)]
    offset = 0
    basis = [
        tuple(1 if j == i else 0 for j in range(lam.h)) for i in range(lam.h)
    ]
    for kernel, mult in hc.orbit_types:
        reps, lookup = _coset_layout(kernel)
        size = len(reps)
        for _ in range(mult):
            for i, e in enumerate(basis):
                for local, rep in enumerate(reps):
                    target = lookup[lam.add(rep, e)]
                    images[i][offset + local] = offset + target
            offset += size
    perms = tuple(Perm(img) for img in images)
    return CommutingTuple(degree, perms)


def _orbits_of_tuple(perms, degree):
    """Orbits of the generated (abelian) group, in order of smallest point."""
    imgs = [s.images for s in perms]
    seen = [False] * degree
    orbits = []
    for start in range(degree):
        if seen[start]:
            continue
        orbit = [start]
        seen[start] = True
        frontier = [start]
        while frontier:
            nxt = []
            for x in frontier:
                for img in imgs:
                    y = img[x]
                    if not seen[y]:
                        seen[y] = True
                        orbit.append(y)
                        nxt.append(y)
            frontier = nxt
        orbits.append(sorted(orbit))
    return orbits


def _power_tables(perms, modulus):
    tables = []
    for s in perms:
        powers = [tuple(range(s.degree))]
        for _ in range(modulus - 1):
            powers.append(_compose(s.images, powers[-1]))
        tables.append(powers)
    return tables


def classify(t: CommutingTuple, lam: Ambient) -> HomClass:
    """The class invariant of a commuting tuple: orbit kernels with multiplicity."""
    if len(t.perms) != lam.h:
        raise BadParameters("tuple length %d != rank %d" % (len(t.perms), lam.h))
    _check_orders(t.perms, lam.p, lam.k)
    q = lam.modulus
    tables = _power_tables(t.perms, q)
    orbits = _orbits_of_tuple(t.perms, t.degree)
    counts = {}
    for orbit in orbits:
        base = orbit[0]
        members = []
        for vec in lam.elements():
            x = base
            for i, c in enumerate(vec):
                x = tables[i][c][x]
            if x == base:
                members.append(vec)
        kernel = AbSubgroup(lam, members)
        counts[kernel] = counts.get(kernel, 0) + 1
    orbit_types = tuple(
        sorted(counts.items(), key=lambda kv: (kv[0].index, kv[0].elements))
    )
    return HomClass(lam, orbit_types)


def centralizer_order(hc: HomClass) -> int:
    """prod_i [lam : U_i]^{m_i} * m_i!  (automorphisms of the lam-set)."""
    total = 1
    for kernel, mult in hc.orbit_types:
        total *= kernel.index ** mult * math.factorial(mult)
    return total


def centralizer_generators(hc: HomClass):
    """Generators of the centralizer of realize(hc) in Sym(points).

    The centralizer of the action is the product over orbit types of
    (lam/U) wr Sym(mult): translations within one orbit copy plus
    permutations of the copies.  Cross-checked against exhaustive
    centralizer computation in the tests.
    """
    lam = hc.lam
    degree = hc.points
    gens = []
    basis = [
        tuple(1 if j == i else 0 for j in range(lam.h)) for i in range(lam.h)
    ]
    offset = 0
    for kernel, mult in hc.orbit_types:
        reps, lookup = _coset_layout(kernel)
        size = len(reps)
        # translations on the first copy of this orbit type
        for e in basis:
            images = list(range(degree))
            changed = False
            for local, rep in enumerate(reps):
                target = lookup[lam.add(rep, e)]
                if target != local:
                    changed = True
                images[offset + local] = offset + target
            if changed:
                gens.append(Perm(images))
        # permutations of the copies (adjacent swap + full cycle)
        if mult >= 2:
            images = list(range(degree))
            for local in range(size):
                images[offset + local] = offset + size + local
                images[offset + size + local] = offset + local
            gens.append(Perm(images))
        if mult >= 3:
            images = list(range(degree))
            for copy in range(mult):
                dst = (copy + 1) % mult
                for local in range(size):
                    images[offset + copy * size + local] = offset + dst * size + local
            gens.append(Perm(images))
        offset += mult * size
    if not gens:
        gens.append(Perm.identity(degree))
    return gens


def minimal_level(hc: HomClass) -> int:
    """Smallest m such that the action splits into invariant blocks of size p^m.

    This equals the largest orbit-size exponent: a transitive orbit of size
    p^e must lie inside a single block, so m >= e; conversely the orbit
    sizes are p-powers at most p^m summing to a multiple of p^m, so filling
    blocks greedily with orbits in decreasing size leaves each partial block
    with a remainder divisible by the next orbit size, and the packing
    always completes.
    """
    p = hc.lam.p
    best = 0
    for kernel, _ in hc.orbit_types:
        e = 0
        idx = kernel.index
        while idx > 1:
            idx //= p
            e += 1
        best = max(best, e)
    return best


def is_isotypic(hc: HomClass) -> bool:
    """True when all orbits share one kernel (factors through a diagonal block)."""
    return len(hc.orbit_types) == 1


def kernel_of_action(hc: HomClass) -> AbSubgroup:
    kernels = [kernel for kernel, _ in hc.orbit_types]
    out = kernels[0]
    for k in kernels[1:]:
        out = out.intersection(k)
    return out


def dual_image(hc: HomClass) -> AbSubgroup:
    """Annihilator of the action kernel: the dual copy of the image in lam.

    The image of the action is lam/ker; under the self-duality of lam given
    by the standard pairing, its character group embeds as the annihilator
    of ker, so |dual_image| = [lam : ker].
    """
    return kernel_of_action(hc).annihilator()


# ---------------------------------------------------------------------------
# ordered block partitions = cosets of block subgroups


def block_partition_count(degree: int, block: int) -> int:
    blocks = degree // block
    total = math.factorial(degree)
    for _ in range(blocks):
        total //= math.factorial(block)
    return total


def enumerate_block_partitions(degree: int, block: int):
    """All ordered partitions of {0..degree-1} into equal blocks, as tuples
    of sorted tuples.  These are in bijection with the left cosets of the
    standard block subgroup, the partition listing each block's image."""
    if degree % block:
        raise BadParameters("block size %d does not divide degree %d" % (block, degree))
    if block_partition_count(degree, block) > PARTITION_CAP:
        raise ResourceLimit("too many block partitions")
    out = []

    def rec(rest, acc):
        if not rest:
            out.append(tuple(acc))
            return
        for combo in itertools.combinations(rest, block):
            acc.append(combo)
            rec(tuple(x for x in rest if x not in combo), acc)
            acc.pop()

    rec(tuple(range(degree)), [])
    return out


def partition_act(images, partition):
    return tuple(tuple(sorted(images[x] for x in blk)) for blk in partition)


def partition_fixed(images, partition) -> bool:
    for blk in partition:
        if tuple(sorted(images[x] for x in blk)) != blk:
            return False
    return True


def partition_coset_rep(partition) -> Perm:
    """Lex-minimal coset representative sending base block j onto block j."""
    images = []
    for blk in partition:
        images.extend(blk)
    return Perm(images)


def fixed_block_partitions(perms, degree: int, block: int):
    imgs = [s.images for s in perms]
    return [
        part
        for part in enumerate_block_partitions(degree, block)
        if all(partition_fixed(img, part) for img in imgs)
    ]


@dataclass(frozen=True)
class FiberOrbit:
    """One centralizer orbit of alpha-stable ordered block partitions."""

    partition: tuple
    coset_rep: Perm
    block_classes: tuple
    orbit_size: int
    stabilizer_order: int


def coset_fiber(hc: HomClass, m: int, blocks=None):
    """Centralizer orbits of alpha-stable partitions into blocks of p^m.

    Each orbit record carries the canonical representative partition, the
    matching coset representative g, the blockwise class tuple of the
    conjugated action g^{-1} alpha g, the orbit size (which equals the index
    of the stabilizer in the centralizer), and the stabilizer order.
    """
    lam = hc.lam
    p = lam.p
    degree = hc.points
    block = p ** m
    if blocks is None:
        blocks = degree // block
    if block * blocks != degree:
        raise BadParameters("blocks do not tile the permuted points")
    t = realize(hc)
    fixed = fixed_block_partitions(t.perms, degree, block)
    gens = [g.images for g in centralizer_generators(hc)]
    order = centralizer_order(hc)
    pool = set(fixed)
    records = []
    unseen = set(fixed)
    for start in sorted(unseen):
        if start not in unseen:
            continue
        orbit = {start}
        frontier = [start]
        while frontier:
            nxt = []
            for part in frontier:
                for g in gens:
                    moved = partition_act(g, part)
                    # centralizer elements permute the alpha-stable partitions
                    if moved not in pool:
                        raise InternalMismatch("centralizer left the fixed set")
                    if moved not in orbit:
                        orbit.add(moved)
                        nxt.append(moved)
            frontier = nxt
        unseen -= orbit
        rep = min(orbit)
        size = len(orbit)
        if order % size:
            raise InternalMismatch("orbit size does not divide the centralizer order")
        g = partition_coset_rep(rep)
        ginv = g.inverse()
        conj = [ginv * s * g for s in t.perms]
        block_classes = []
        for j in range(blocks):
            base = j * block
            local = []
            for s in conj:
                imgs = s.images
                local.append(Perm(tuple(imgs[base + r] - base for r in range(block))))
            block_classes.append(classify(CommutingTuple(block, tuple(local)), lam))
        records.append(
            FiberOrbit(
                partition=rep,
                coset_rep=g,
                block_classes=tuple(block_classes),
                orbit_size=size,
                stabilizer_order=order // size,
            )
        )
    records.sort(key=lambda r: r.partition)
    return records


def commuting_tuple_count(degree: int, p: int, k: int, h: int) -> int:
    """Direct exhaustion: number of h-tuples of pairwise-commuting
    permutations of p-power order dividing p^k in Sym(degree)."""
    cap = p ** k
    pool = [
        s
        for s in itertools.permutations(range(degree))
        if cap % _perm_order(s) == 0
    ]
    count = 0

    def rec(chosen, depth):
        nonlocal count
        if depth == h:
            count += 1
            return
        for s in pool:
            if all(_compose(s, c) == _compose(c, s) for c in chosen):
                rec(chosen + [s], depth + 1)

    rec([], 0)
    return count


def _perm_order(images) -> int:
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
