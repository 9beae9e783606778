"""Exact permutation-group machinery at desk scale.

Groups are stored as explicit element lists and every operation is an
exhaustive enumeration: the ambient groups used in this package act on at
most nine points, where brute force is simple, deterministic and directly
checkable against independent counts.  There are deliberately no stabilizer
chains and no backtrack search.

Points are 0-based throughout; the transposition of the first two points
prints as ``(0 1)``.
"""

from __future__ import annotations

import itertools
import math
import os
import re
from functools import lru_cache

from .errors import (
    ActionNotClosed,
    DegreeMismatch,
    NotInGroup,
    NotSubgroup,
    ResourceLimit,
)

DEFAULT_MAX_ELEMENTS = 10 ** 6
ENV_MAX_ELEMENTS = "TRANSCHROME_MAX_ELEMENTS"


def max_group_elements() -> int:
    """Group-order cap for closures; override with TRANSCHROME_MAX_ELEMENTS."""
    raw = os.environ.get(ENV_MAX_ELEMENTS)
    if raw is None:
        return DEFAULT_MAX_ELEMENTS
    try:
        value = int(raw)
    except ValueError:
        return DEFAULT_MAX_ELEMENTS
    return value if value > 0 else DEFAULT_MAX_ELEMENTS


def _compose(a, b):
    # image tuples: (a*b)(x) = a(b(x))
    return tuple(a[b[i]] for i in range(len(a)))


def _inverse(a):
    inv = [0] * len(a)
    for i, v in enumerate(a):
        inv[v] = i
    return tuple(inv)


class Perm:
    """A permutation of {0, ..., N-1}, stored as its tuple of images."""

    __slots__ = ("images",)

    def __init__(self, images):
        images = tuple(images)
        n = len(images)
        seen = [False] * n
        for v in images:
            if not isinstance(v, int) or not 0 <= v < n or seen[v]:
                raise ValueError("images do not describe a permutation: %r" % (images,))
            seen[v] = True
        self.images = images

    @classmethod
    def identity(cls, degree: int) -> "Perm":
        return cls(range(degree))

    @classmethod
    def from_cycles(cls, text: str, degree: int) -> "Perm":
        """Parse cycle notation like ``"(0 1)(2 3)"``; ``"e"`` or ``"()"`` is the identity."""
        text = text.strip()
        images = list(range(degree))
        if text in ("e", "()", ""):
            return cls(images)
        body = text.replace(",", " ")
        cycles = re.findall(r"\(([^()]*)\)", body)
        if not cycles or re.sub(r"\([^()]*\)|\s", "", body):
            raise ValueError("cannot parse cycle notation: %r" % text)
        for cyc in cycles:
            pts = [int(tok) for tok in cyc.split()]
            if len(set(pts)) != len(pts):
                raise ValueError("repeated point in cycle: %r" % cyc)
            for p in pts:
                if not 0 <= p < degree:
                    raise ValueError("point %d out of range for degree %d" % (p, degree))
            for i, p in enumerate(pts):
                images[p] = pts[(i + 1) % len(pts)]
        return cls(images)

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, point: int) -> int:
        return self.images[point]

    def __mul__(self, other: "Perm") -> "Perm":
        if self.degree != other.degree:
            raise DegreeMismatch(
                "cannot compose degree %d with degree %d" % (self.degree, other.degree)
            )
        p = Perm.__new__(Perm)
        p.images = _compose(self.images, other.images)
        return p

    def inverse(self) -> "Perm":
        p = Perm.__new__(Perm)
        p.images = _inverse(self.images)
        return p

    __invert__ = inverse

    def __pow__(self, exponent: int) -> "Perm":
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = Perm.identity(self.degree)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def conjugate(self, g: "Perm") -> "Perm":
        """g * self * g^{-1}."""
        return g * self * g.inverse()

    def order(self) -> int:
        n = 1
        for cyc in self._cycle_lists():
            n = math.lcm(n, len(cyc))
        return n

    def is_identity(self) -> bool:
        return all(v == i for i, v in enumerate(self.images))

    def _cycle_lists(self):
        seen = [False] * self.degree
        out = []
        for start in range(self.degree):
            if seen[start]:
                continue
            cyc = [start]
            seen[start] = True
            nxt = self.images[start]
            while nxt != start:
                cyc.append(nxt)
                seen[nxt] = True
                nxt = self.images[nxt]
            if len(cyc) > 1:
                out.append(cyc)
        return out

    def cycles(self) -> str:
        cycs = self._cycle_lists()
        if not cycs:
            return "e"
        return "".join("(" + " ".join(str(p) for p in c) + ")" for c in cycs)

    def __eq__(self, other):
        return isinstance(other, Perm) and self.images == other.images

    def __lt__(self, other):
        return self.images < other.images

    def __le__(self, other):
        return self.images <= other.images

    def __hash__(self):
        return hash(self.images)

    def __repr__(self):
        return "Perm[%s]" % self.cycles()


class PermGroup:
    """A finite permutation group stored as a sorted element list.

    Immutable after construction.  ``generators`` is advisory (may be the
    full element tuple for groups produced by filtering).
    """

    def __init__(self, degree, elements, generators=()):
        self.degree = degree
        elems = sorted(set(elements))
        # identity has the lex-smallest image tuple, so it must sort first
        if not elems or not elems[0].is_identity():
            raise ValueError("group must contain the identity")
        for g in elems:
            if g.degree != degree:
                raise DegreeMismatch("element degree %d != group degree %d" % (g.degree, degree))
        self.elements = tuple(elems)
        self.generators = tuple(generators)
        self._eset = frozenset(g.images for g in elems)

    @property
    def order(self) -> int:
        return len(self.elements)

    def iter_elements(self):
        return iter(self.elements)

    def __contains__(self, perm: Perm) -> bool:
        return perm.degree == self.degree and perm.images in self._eset

    def __iter__(self):
        return self.iter_elements()

    def __len__(self):
        return self.order

    def is_full_symmetric(self) -> bool:
        return self.order == math.factorial(self.degree)

    def is_subgroup_of(self, other: "PermGroup") -> bool:
        if self.degree != other.degree:
            return False
        if other.is_full_symmetric():
            return True
        return all(g in other for g in self.iter_elements())

    def is_abelian(self) -> bool:
        els = self.elements
        for i, a in enumerate(els):
            for b in els[i + 1:]:
                if a * b != b * a:
                    return False
        return True

    def element_order_counts(self) -> dict:
        counts = {}
        for g in self.iter_elements():
            d = g.order()
            counts[d] = counts.get(d, 0) + 1
        return counts

    def working_generators(self):
        return self.generators if self.generators else self.elements

    def __eq__(self, other):
        if not isinstance(other, PermGroup):
            return NotImplemented
        if self.degree != other.degree or self.order != other.order:
            return False
        if self.is_full_symmetric():
            return True
        return self._eset == other._eset

    def __hash__(self):
        # weak on purpose: avoids materializing lazy symmetric groups
        return hash((self.degree, self.order))

    def __repr__(self):
        return "PermGroup(degree=%d, order=%d)" % (self.degree, self.order)


class SymmetricGroup(PermGroup):
    """The full symmetric group, with lazy element materialization."""

    def __init__(self, degree):
        self.degree = degree
        self._elements = None
        gens = []
        if degree >= 2:
            gens.append(Perm.from_cycles("(0 1)", degree))
        if degree >= 3:
            gens.append(Perm(tuple(range(1, degree)) + (0,)))
        self.generators = tuple(gens)

    @property
    def order(self) -> int:
        return math.factorial(self.degree)

    @property
    def elements(self):
        if self._elements is None:
            self._elements = tuple(
                Perm(t) for t in itertools.permutations(range(self.degree))
            )
        return self._elements

    def iter_elements(self):
        # itertools.permutations yields tuples in lexicographic order
        for t in itertools.permutations(range(self.degree)):
            p = Perm.__new__(Perm)
            p.images = t
            yield p

    def __contains__(self, perm: Perm) -> bool:
        return isinstance(perm, Perm) and perm.degree == self.degree

    def is_full_symmetric(self) -> bool:
        return True


@lru_cache(maxsize=None)
def symmetric_group(degree: int) -> SymmetricGroup:
    return SymmetricGroup(degree)


def generate(degree: int, gens, max_elements=None) -> PermGroup:
    """Close a generating set under composition; deterministic sorted output."""
    gens = tuple(gens)
    for g in gens:
        if g.degree != degree:
            raise DegreeMismatch("generator degree %d != %d" % (g.degree, degree))
    cap = max_elements if max_elements is not None else max_group_elements()
    ident = Perm.identity(degree)
    seen = {ident.images: ident}
    frontier = [ident]
    gen_perms = [g for g in gens] + [g.inverse() for g in gens]
    while frontier:
        new_frontier = []
        for h in frontier:
            for g in gen_perms:
                prod = g * h
                if prod.images not in seen:
                    seen[prod.images] = prod
                    new_frontier.append(prod)
                    if len(seen) > cap:
                        raise ResourceLimit(
                            "closure exceeds cap of %d elements" % cap
                        )
        frontier = new_frontier
    return PermGroup(degree, seen.values(), generators=gens)


def block_subgroup(block_size: int, blocks: int) -> PermGroup:
    """The direct product of symmetric groups on consecutive equal blocks.

    ``block_subgroup(2, 2)`` is the subgroup of Sym(4) preserving {0,1} and
    {2,3} setwise; its order is (block_size!)^blocks.
    """
    degree = block_size * blocks
    if math.factorial(block_size) ** blocks > max_group_elements():
        raise ResourceLimit("block subgroup too large to materialize")
    per_block = list(itertools.permutations(range(block_size)))
    elems = []
    for combo in itertools.product(per_block, repeat=blocks):
        images = [0] * degree
        for j, local in enumerate(combo):
            base = j * block_size
            for r in range(block_size):
                images[base + r] = base + local[r]
        elems.append(Perm(images))
    gens = []
    for j in range(blocks):
        base = j * block_size
        if block_size >= 2:
            gens.append(Perm.from_cycles("(%d %d)" % (base, base + 1), degree))
        if block_size >= 3:
            images = list(range(degree))
            for r in range(block_size):
                images[base + r] = base + (r + 1) % block_size
            gens.append(Perm(images))
    return PermGroup(degree, elems, generators=gens)


def centralizer(ambient: PermGroup, perms) -> PermGroup:
    """All elements of ``ambient`` commuting with every permutation in ``perms``."""
    perms = list(perms)
    for s in perms:
        if s not in ambient:
            raise NotInGroup("%r is not in the ambient group" % s)
    imgs = [s.images for s in perms]
    n = ambient.degree
    out = []
    for g in ambient.iter_elements():
        gi = g.images
        ok = True
        for s in imgs:
            for i in range(n):
                if gi[s[i]] != s[gi[i]]:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            out.append(g)
    return PermGroup(ambient.degree, out)


class Coset:
    """A left coset gH, identified by its lexicographically minimal element."""

    __slots__ = ("rep", "subgroup")

    def __init__(self, rep: Perm, subgroup: PermGroup):
        self.rep = rep
        self.subgroup = subgroup

    def __eq__(self, other):
        return (
            isinstance(other, Coset)
            and self.rep == other.rep
            and self.subgroup == other.subgroup
        )

    def __lt__(self, other):
        return self.rep < other.rep

    def __hash__(self):
        return hash((self.rep, self.subgroup.order))

    def __contains__(self, perm: Perm) -> bool:
        return (self.rep.inverse() * perm) in self.subgroup

    def __repr__(self):
        return "Coset[%s]" % self.rep.cycles()


def _check_subgroup(G: PermGroup, H: PermGroup):
    if not H.is_subgroup_of(G):
        raise NotSubgroup("H is not a subgroup of G")


@lru_cache(maxsize=64)
def _coset_table(G: PermGroup, H: PermGroup):
    """(cosets, images-tuple -> coset index) for every element of G."""
    _check_subgroup(G, H)
    if G.order > max_group_elements():
        raise ResourceLimit("coset table over %d elements exceeds cap" % G.order)
    h_imgs = [h.images for h in H.iter_elements()]
    index = {}
    cosets = []
    for g in G.iter_elements():
        gi = g.images
        if gi in index:
            continue
        idx = len(cosets)
        cosets.append(Coset(g, H))
        for h in h_imgs:
            index[_compose(gi, h)] = idx
    return tuple(cosets), index


def left_cosets(G: PermGroup, H: PermGroup):
    """The [G:H] left cosets, each with canonical (lex-minimal) representative."""
    return list(_coset_table(G, H)[0])


def fixed_cosets(G: PermGroup, H: PermGroup, perms):
    """Cosets gH with s*gH == gH for every s in ``perms``."""
    perms = list(perms)
    for s in perms:
        if s not in G:
            raise NotInGroup("%r not in G" % s)
    cosets, index = _coset_table(G, H)
    out = []
    for i, coset in enumerate(cosets):
        rep = coset.rep.images
        if all(index[_compose(s.images, rep)] == i for s in perms):
            out.append(coset)
    return out


def _canonical_coset(rep_images, h_images):
    return min(_compose(rep_images, h) for h in h_images)


def coset_orbits(C: PermGroup, cosets):
    """Orbits of C on a coset list by left multiplication.

    Returns ``[(representative coset, stabilizer subgroup)]`` sorted by
    representative; raises ActionNotClosed if C moves a coset off the list.
    """
    cosets = list(cosets)
    if not cosets:
        return []
    H = cosets[0].subgroup
    h_images = [h.images for h in H.iter_elements()]
    pool = {c.rep.images: c for c in cosets}

    def act_images(c_images, rep_images):
        moved = _canonical_coset(_compose(c_images, rep_images), h_images)
        if moved not in pool:
            raise ActionNotClosed("group moves a coset outside the given list")
        return moved

    gens = [g.images for g in C.working_generators()]
    unseen = set(pool)
    orbits = []
    for start in sorted(unseen):
        if start not in unseen:
            continue
        orbit = {start}
        frontier = [start]
        while frontier:
            nxt = []
            for rep in frontier:
                for c in gens:
                    moved = act_images(c, rep)
                    if moved not in orbit:
                        orbit.add(moved)
                        nxt.append(moved)
            frontier = nxt
        unseen -= orbit
        rep_images = min(orbit)
        stab = [
            c
            for c in C.iter_elements()
            if act_images(c.images, rep_images) == rep_images
        ]
        orbits.append((pool[rep_images], PermGroup(C.degree, stab)))
    return orbits


def conjugating_element(G: PermGroup, a, b):
    """Some g in G with g*a_i*g^{-1} == b_i for all i, or None; exhaustive."""
    a = list(a)
    b = list(b)
    if len(a) != len(b):
        raise ValueError("tuples must have equal length")
    for s in itertools.chain(a, b):
        if s not in G:
            raise NotInGroup("%r not in G" % s)
    a_imgs = [s.images for s in a]
    b_imgs = [s.images for s in b]
    n = G.degree
    for g in G.iter_elements():
        gi = g.images
        ok = True
        for s, t in zip(a_imgs, b_imgs):
            # g*s == t*g avoids computing an explicit inverse
            for i in range(n):
                if gi[s[i]] != t[gi[i]]:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return g
    return None
