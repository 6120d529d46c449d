"""
Group Engine for Schinzel Lab.
Finite permutation groups from generators and the structural queries built on them.

Features:
- Breadth-first closure with an explicit order bound (sympy order pre-check for large n)
- Conjugacy classes with canonical labels
- Coset actions, point stabilizers, block systems and intermediate subgroups
- Normalizers in S_n (brute force at small degree), normality tests
- Automorphisms from generator images, class-preservation, automorphism scans
- Subgroup lattices of small groups (joins of cyclic subgroups)

Canonical element order is lexicographic on image arrays; the identity is
always the first element and every "minimal representative" uses this order.
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from itertools import product as cartesian
from math import factorial
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple

from app.config import resolve_order_bound, resolve_brute_force_degree
from modules.perm_core import Perm, cycle_type_label, symmetric_group
from utils.exceptions import (
    BruteForceBoundError,
    DegreeMismatchError,
    ElementNotInGroupError,
    InvalidAutomorphismError,
    NotASubgroupError,
    OrderBoundExceededError,
)

logger = logging.getLogger(__name__)


# ============================================
# Union-Find (block systems)
# ============================================

class UnionFind:
    """Disjoint sets over hashable items with union by rank."""

    def __init__(self, items: Iterable):
        self.parent = {x: x for x in items}
        self.rank = {x: 0 for x in self.parent}

    def find(self, x):
        y = self.parent[x]
        if self.parent[y] != y:
            y = self.parent[x] = self.find(y)
        return y

    def union(self, x, y) -> bool:
        x, y = self.find(x), self.find(y)
        if x == y:
            return False
        if self.rank[x] < self.rank[y]:
            x, y = y, x
        elif self.rank[x] == self.rank[y]:
            self.rank[x] += 1
        self.parent[y] = x
        return True

    def members(self, x) -> FrozenSet:
        root = self.find(x)
        return frozenset(y for y in self.parent if self.find(y) == root)


# ============================================
# Data Types
# ============================================

@dataclass(frozen=True)
class ConjClass:
    """A conjugacy class; ``representative`` is its lexicographically minimal member."""

    representative: Perm
    members: FrozenSet[Perm]
    label: str

    @property
    def size(self) -> int:
        return len(self.members)

    @property
    def cycle_type(self) -> Tuple[int, ...]:
        return self.representative.cycle_type()

    def __contains__(self, x: Perm) -> bool:
        return x in self.members

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "representative": self.representative.to_json(),
            "size": self.size,
        }


def orbit_under(gens: Sequence[Perm], letter: int) -> List[int]:
    """Orbit of ``letter`` under the group generated by ``gens``."""
    seen = {letter}
    frontier = [letter]
    while frontier:
        nxt = []
        for x in frontier:
            for s in gens:
                y = s(x)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return sorted(seen)


def orbits_under(gens: Sequence[Perm], degree: int) -> List[List[int]]:
    """All orbits on 1..degree, ordered by their minimal letter."""
    remaining = set(range(1, degree + 1))
    result = []
    while remaining:
        orb = orbit_under(gens, min(remaining))
        result.append(orb)
        remaining -= set(orb)
    return result


class PermGroup:
    """
    A finite subgroup of S_n with its elements materialized.

    Build instances through ``generate`` or ``subgroup``; treat them as immutable.
    """

    def __init__(self, degree: int, generators: Sequence[Perm], elements: Iterable[Perm]):
        self.degree = degree
        self.generators: Tuple[Perm, ...] = tuple(generators)
        self.elements: Tuple[Perm, ...] = tuple(sorted(elements))
        self.element_set: FrozenSet[Perm] = frozenset(self.elements)

    # ---- basics -----------------------------------------------------

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def identity(self) -> Perm:
        return Perm.identity(self.degree)

    def __contains__(self, x: Perm) -> bool:
        return x in self.element_set

    def __iter__(self) -> Iterator[Perm]:
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PermGroup):
            return NotImplemented
        return self.degree == other.degree and self.element_set == other.element_set

    def __hash__(self) -> int:
        return hash((self.degree, self.element_set))

    def __repr__(self) -> str:
        return f"PermGroup(order={self.order}, degree={self.degree})"

    def is_subgroup_of(self, other: PermGroup) -> bool:
        return self.degree == other.degree and self.element_set <= other.element_set

    # ---- orbits -----------------------------------------------------

    def orbit(self, letter: int) -> List[int]:
        return orbit_under(self.generators, letter)

    def orbits(self) -> List[List[int]]:
        return orbits_under(self.generators, self.degree)

    def is_transitive(self) -> bool:
        return len(self.orbit(1)) == self.degree

    # ---- classes ----------------------------------------------------

    @cached_property
    def classes(self) -> Tuple[ConjClass, ...]:
        return tuple(conjugacy_classes(self))

    @cached_property
    def _class_lookup(self) -> Dict[Perm, ConjClass]:
        return {x: c for c in self.classes for x in c.members}

    def class_of(self, x: Perm) -> ConjClass:
        try:
            return self._class_lookup[x]
        except KeyError:
            raise ElementNotInGroupError(str(x), "class_of") from None

    def class_by_label(self, label: str) -> ConjClass:
        for c in self.classes:
            if c.label == label:
                return c
        raise ElementNotInGroupError(label, "class_by_label")

    def is_abelian(self) -> bool:
        return all(a * b == b * a for a in self.generators for b in self.generators)

    # ---- serialization ----------------------------------------------

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "generators": [g.to_json() for g in self.generators],
            "order": self.order,
        }

    def describe(self) -> str:
        return f"order {self.order} on {self.degree} letters"


# ============================================
# Generation
# ============================================

def _sympy_order(degree: int, gens: Sequence[Perm]) -> int:
    from sympy.combinatorics import Permutation, PermutationGroup

    group = PermutationGroup([Permutation([x - 1 for x in g.images]) for g in gens])
    return int(group.order())


def _closure(degree: int, gens: Sequence[Perm], bound: int, seed: Iterable[Perm] = ()) -> List[Perm]:
    identity = Perm.identity(degree)
    elements = {identity}
    elements.update(seed)
    frontier = list(elements)
    while frontier:
        nxt = []
        for x in frontier:
            for s in gens:
                y = x * s
                if y not in elements:
                    elements.add(y)
                    nxt.append(y)
                    if len(elements) > bound:
                        raise OrderBoundExceededError(bound, context="enumerating group elements")
        frontier = nxt
    return list(elements)


def generate(
    gens: Sequence[Perm],
    order_bound: Optional[int] = None,
    degree: Optional[int] = None,
) -> PermGroup:
    """
    Closure of ``gens`` under products and inverses.

    Args:
        gens: generators sharing one degree (may be empty when ``degree`` is given)
        order_bound: maximum order; defaults to the configured bound
        degree: required only for the trivial group with no generators

    Raises:
        OrderBoundExceededError: the group is larger than the bound
    """
    gens = list(gens)
    if not gens:
        if degree is None:
            raise DegreeMismatchError(0, 0, "generate() of an empty list needs a degree")
        return PermGroup(degree, (), [Perm.identity(degree)])

    n = gens[0].degree
    for g in gens:
        if g.degree != n:
            raise DegreeMismatchError(n, g.degree, "generate")
    if degree is not None and degree != n:
        raise DegreeMismatchError(degree, n, "generate")

    bound = resolve_order_bound(order_bound)
    if factorial(n) > bound:
        order = _sympy_order(n, gens)
        if order > bound:
            raise OrderBoundExceededError(bound, order, "checking the order before enumeration")

    elements = _closure(n, gens, bound)
    logger.debug(f"Generated group of order {len(elements)} on {n} letters")
    return PermGroup(n, gens, elements)


def small_generating_set(elements: Iterable[Perm], degree: int) -> List[Perm]:
    """Greedy generating set, preferring elements of large order."""
    pool = sorted(elements, key=lambda x: (-x.order(), x))
    target = len(pool)
    gens: List[Perm] = []
    current = {Perm.identity(degree)}
    for x in pool:
        if len(current) == target:
            break
        if x in current:
            continue
        gens.append(x)
        current = set(_closure(degree, gens, max(target, 1)))
    return gens


def subgroup(parent: PermGroup, elements: Iterable[Perm]) -> PermGroup:
    """Wrap a subset known to be a subgroup of ``parent`` as a PermGroup."""
    elements = list(elements)
    for x in elements:
        if x not in parent:
            raise NotASubgroupError(f"Element {x} is not in the parent group")
    return PermGroup(parent.degree, small_generating_set(elements, parent.degree), elements)


def subgroup_generated(parent: PermGroup, gens: Sequence[Perm]) -> PermGroup:
    """The subgroup of ``parent`` generated by ``gens``."""
    for g in gens:
        if g not in parent:
            raise NotASubgroupError(f"Generator {g} is not in the parent group")
    return PermGroup(parent.degree, gens, _closure(parent.degree, gens, parent.order))


# ============================================
# Conjugacy
# ============================================

def conjugacy_classes(G: PermGroup) -> List[ConjClass]:
    """Classes in increasing order of their minimal member; the identity class comes first."""
    assigned = set()
    result = []
    for x in G.elements:
        if x in assigned:
            continue
        members = {x}
        frontier = [x]
        while frontier:
            nxt = []
            for y in frontier:
                for g in G.generators:
                    z = y.conjugate(g)
                    if z not in members:
                        members.add(z)
                        nxt.append(z)
            frontier = nxt
        assigned |= members
        label = f"{cycle_type_label(x)}:{x.to_cycle_string()}"
        result.append(ConjClass(representative=x, members=frozenset(members), label=label))
    return result


def centralizer(G: PermGroup, x: Perm) -> PermGroup:
    return subgroup(G, [g for g in G if g * x == x * g])


def are_conjugate_subgroups(G: PermGroup, H: PermGroup, K: PermGroup) -> bool:
    if H.order != K.order:
        return False
    if H.element_set == K.element_set:
        return True
    target = K.element_set
    for g in G:
        if all(h.conjugate(g) in target for h in H.generators):
            return True
    return False


def is_normal(G: PermGroup, H: PermGroup) -> bool:
    """True iff g H g^-1 = H for every generator g of G."""
    if not H.is_subgroup_of(G):
        raise NotASubgroupError()
    hgens = H.generators or H.elements
    return all(h.conjugate(g) in H for g in G.generators for h in hgens)


# ============================================
# Coset Actions and Blocks
# ============================================

@dataclass(frozen=True, eq=False)
class CosetAction:
    """
    Action of ``parent`` on the left cosets of ``subgroup``.

    Letter 1 is the coset of the subgroup itself; the transversal lists the
    minimal element of every coset in increasing order.
    """

    parent: PermGroup
    subgroup: PermGroup
    coset_reps: Tuple[Perm, ...]
    images: Dict[Perm, Perm] = field(repr=False)

    @property
    def degree(self) -> int:
        return len(self.coset_reps)

    def __call__(self, g: Perm) -> Perm:
        try:
            return self.images[g]
        except KeyError:
            raise ElementNotInGroupError(str(g), "coset action") from None

    @cached_property
    def kernel(self) -> FrozenSet[Perm]:
        identity = Perm.identity(self.degree)
        return frozenset(g for g, t in self.images.items() if t == identity)

    @property
    def is_faithful(self) -> bool:
        return len(self.kernel) == 1

    def image_group(self) -> PermGroup:
        gens = [self.images[g] for g in self.parent.generators]
        return PermGroup(self.degree, gens, set(self.images.values()))

    def generator_images(self) -> List[Perm]:
        return [self.images[g] for g in self.parent.generators]


def coset_action(G: PermGroup, H: PermGroup) -> CosetAction:
    """
    Permutation representation of G on the left cosets gH.

    Raises:
        NotASubgroupError: H is not contained in G
    """
    if not H.is_subgroup_of(G):
        raise NotASubgroupError()
    coset_of: Dict[Perm, int] = {}
    reps: List[Perm] = []
    for x in G.elements:
        if x in coset_of:
            continue
        idx = len(reps)
        reps.append(x)
        for h in H.elements:
            coset_of[x * h] = idx
    images = {
        g: Perm._trusted(tuple(coset_of[g * r] + 1 for r in reps))
        for g in G.elements
    }
    return CosetAction(parent=G, subgroup=H, coset_reps=tuple(reps), images=images)


def point_stabilizer(G: PermGroup, letter: int) -> PermGroup:
    if not 1 <= letter <= G.degree:
        raise ElementNotInGroupError(f"letter {letter}", "point_stabilizer")
    return subgroup(G, [g for g in G if g(letter) == letter])


def _minimal_block(gens: Sequence[Perm], degree: int, seed: Iterable[int]) -> FrozenSet[int]:
    # Atkinson: merge the seed with letter 1, then close under the generators.
    uf = UnionFind(range(1, degree + 1))
    queue = [(1, x) for x in seed if uf.union(1, x)]
    while queue:
        a, b = queue.pop()
        for s in gens:
            x, y = s(a), s(b)
            if uf.union(x, y):
                queue.append((x, y))
    return uf.members(1)


def blocks_containing_one(gens: Sequence[Perm], degree: int) -> List[FrozenSet[int]]:
    """All blocks of imprimitivity containing letter 1 (trivial ones included)."""
    blocks = {frozenset({1}), frozenset(range(1, degree + 1))}
    minimal = {_minimal_block(gens, degree, [j]) for j in range(2, degree + 1)}
    blocks |= minimal
    frontier = set(minimal)
    while frontier:
        nxt = set()
        for block in frontier:
            for other in minimal:
                if other <= block:
                    continue
                joined = _minimal_block(gens, degree, block | other)
                if joined not in blocks:
                    blocks.add(joined)
                    nxt.add(joined)
        frontier = nxt
    return sorted(blocks, key=lambda b: (len(b), sorted(b)))


def block_systems(action: CosetAction) -> List[FrozenSet[int]]:
    """Nontrivial blocks containing letter 1 of a coset action."""
    gens = action.generator_images()
    blocks = blocks_containing_one(gens, action.degree)
    return [b for b in blocks if 1 < len(b) < action.degree]


def intermediate_subgroups(G: PermGroup, H: PermGroup) -> List[PermGroup]:
    """
    All G' with H < G' < G, read off the block systems of G acting on G/H.

    Empty exactly when that action is primitive.
    """
    action = coset_action(G, H)
    result = []
    for block in block_systems(action):
        elements = [g for g in G if action(g)(1) in block]
        result.append(subgroup(G, elements))
    result.sort(key=lambda K: (K.order, K.elements))
    logger.debug(f"{len(result)} intermediate subgroups between orders {H.order} and {G.order}")
    return result


# ============================================
# Normalizers
# ============================================

def normalizer_in_symmetric(
    G: PermGroup,
    classes: Optional[Sequence[ConjClass]] = None,
    brute_force_degree: Optional[int] = None,
) -> PermGroup:
    """
    N_{S_n}(G, C): all a in S_n with a G a^-1 = G permuting the class multiset C.

    Raises:
        BruteForceBoundError: n exceeds the brute-force degree; fall back to G
    """
    bound = resolve_brute_force_degree(brute_force_degree)
    if G.degree > bound:
        raise BruteForceBoundError(G.degree, bound, "normalizer_in_symmetric")

    target = Counter(c.label for c in classes) if classes else None
    gens = G.generators or G.elements
    result = []
    for a in symmetric_group(G.degree):
        if not all(g.conjugate(a) in G for g in gens):
            continue
        if target is not None:
            moved = Counter(G.class_of(c.representative.conjugate(a)).label for c in classes)
            if moved != target:
                continue
        result.append(a)
    return PermGroup(G.degree, small_generating_set(result, G.degree), result)


# ============================================
# Automorphisms
# ============================================

@dataclass(frozen=True, eq=False)
class GroupAutomorphism:
    """An automorphism of ``domain`` with its full element table."""

    domain: PermGroup
    generators: Tuple[Perm, ...]
    generator_images: Tuple[Perm, ...]
    table: Dict[Perm, Perm] = field(repr=False)

    def __call__(self, x: Perm) -> Perm:
        try:
            return self.table[x]
        except KeyError:
            raise ElementNotInGroupError(str(x), "automorphism") from None

    def __eq__(self, other) -> bool:
        if not isinstance(other, GroupAutomorphism):
            return NotImplemented
        return self.domain == other.domain and self.table == other.table

    def __hash__(self) -> int:
        return hash(tuple(self.table[g] for g in self.domain.elements))

    @property
    def is_identity(self) -> bool:
        return all(x == y for x, y in self.table.items())

    def apply_all(self, perms: Sequence[Perm]) -> List[Perm]:
        return [self(x) for x in perms]

    def image_of(self, H: PermGroup) -> PermGroup:
        return subgroup(self.domain, [self(h) for h in H])

    def inverse(self) -> GroupAutomorphism:
        table = {y: x for x, y in self.table.items()}
        return GroupAutomorphism(
            domain=self.domain,
            generators=self.generators,
            generator_images=tuple(table[g] for g in self.generators),
            table=table,
        )

    def then(self, other: GroupAutomorphism) -> GroupAutomorphism:
        """x -> other(self(x))."""
        table = {x: other.table[y] for x, y in self.table.items()}
        return GroupAutomorphism(
            domain=self.domain,
            generators=self.generators,
            generator_images=tuple(table[g] for g in self.generators),
            table=table,
        )

    def power(self, k: int) -> GroupAutomorphism:
        base = self if k >= 0 else self.inverse()
        result = identity_automorphism(self.domain)
        for _ in range(abs(k)):
            result = result.then(base)
        return result

    def equals_inner(self, g: Perm) -> bool:
        """True iff this is x -> g x g^-1."""
        return all(self.table[x] == x.conjugate(g) for x in self.domain.generators or self.domain.elements)

    def conjugated_by(self, g: Perm) -> GroupAutomorphism:
        """Transport along x -> g x g^-1: the map x -> g gamma(g^-1 x g) g^-1 on g G g^-1."""
        elements = [x.conjugate(g) for x in self.domain]
        domain = PermGroup(self.domain.degree, [s.conjugate(g) for s in self.domain.generators], elements)
        table = {x.conjugate(g): y.conjugate(g) for x, y in self.table.items()}
        gens = tuple(s.conjugate(g) for s in self.generators)
        return GroupAutomorphism(
            domain=domain,
            generators=gens,
            generator_images=tuple(table[s] for s in gens),
            table=table,
        )

    def to_json(self) -> dict:
        return {
            "generators": [g.to_json() for g in self.generators],
            "generator_images": [g.to_json() for g in self.generator_images],
        }


def automorphism_from_images(
    G: PermGroup,
    gen_images: Sequence[Perm],
    generators: Optional[Sequence[Perm]] = None,
) -> GroupAutomorphism:
    """
    Extend generator images to an automorphism, validated on the full table.

    Args:
        G: the group
        gen_images: one image per generator
        generators: generating set to use instead of G.generators

    Raises:
        InvalidAutomorphismError: not a homomorphism, or not bijective
    """
    gens = tuple(generators) if generators is not None else G.generators
    images = tuple(gen_images)
    if len(gens) != len(images):
        raise InvalidAutomorphismError(f"{len(images)} images for {len(gens)} generators")
    for x in images:
        if x not in G:
            raise InvalidAutomorphismError(f"image {x} lies outside the group")
    for s in gens:
        if s not in G:
            raise InvalidAutomorphismError(f"generator {s} lies outside the group")

    identity = G.identity
    table = {identity: identity}
    frontier = [identity]
    while frontier:
        nxt = []
        for x in frontier:
            fx = table[x]
            for s, t in zip(gens, images):
                y = x * s
                if y not in table:
                    table[y] = fx * t
                    nxt.append(y)
        frontier = nxt
    if len(table) != G.order:
        raise InvalidAutomorphismError("the given generators do not generate the group")

    for x, fx in table.items():
        for s, t in zip(gens, images):
            if table[x * s] != fx * t:
                raise InvalidAutomorphismError(f"relation broken at {x} * {s}")
    if len(set(table.values())) != G.order:
        raise InvalidAutomorphismError("map is not bijective")
    return GroupAutomorphism(domain=G, generators=gens, generator_images=images, table=table)


def identity_automorphism(G: PermGroup) -> GroupAutomorphism:
    return GroupAutomorphism(
        domain=G,
        generators=G.generators,
        generator_images=G.generators,
        table={x: x for x in G},
    )


def inner_automorphism(G: PermGroup, g: Perm) -> GroupAutomorphism:
    """x -> g x g^-1."""
    if g not in G:
        raise ElementNotInGroupError(str(g), "inner_automorphism")
    return GroupAutomorphism(
        domain=G,
        generators=G.generators,
        generator_images=tuple(s.conjugate(g) for s in G.generators),
        table={x: x.conjugate(g) for x in G},
    )


def is_class_preserving(G: PermGroup, gamma: GroupAutomorphism) -> Tuple[bool, Dict[str, str]]:
    """Whether gamma fixes every class, and the permutation it induces on class labels."""
    mapping = {c.label: G.class_of(gamma(c.representative)).label for c in G.classes}
    return all(k == v for k, v in mapping.items()), mapping


def automorphisms(G: PermGroup, class_preserving_only: bool = False) -> List[GroupAutomorphism]:
    """Every automorphism of G, found by scanning images of a small generating set."""
    gens = small_generating_set(G.elements, G.degree)
    if not gens:
        return [identity_automorphism(G)]
    candidates = []
    for s in gens:
        pool = G.class_of(s).members if class_preserving_only else G.elements
        order = s.order()
        candidates.append(sorted(x for x in pool if x.order() == order))

    result = []
    for images in cartesian(*candidates):
        try:
            result.append(automorphism_from_images(G, images, generators=gens))
        except InvalidAutomorphismError:
            continue
    logger.debug(f"Automorphism scan of a group of order {G.order}: {len(result)} found")
    return result


# ============================================
# Subgroup Lattice
# ============================================

def all_subgroups(G: PermGroup) -> List[PermGroup]:
    """All subgroups of a small group, as joins of cyclic subgroups."""
    cyclic = {}
    for x in G:
        key = frozenset(x ** k for k in range(x.order()))
        cyclic.setdefault(key, x)
    found: Dict[FrozenSet[Perm], Tuple[Perm, ...]] = {
        key: (gen,) for key, gen in cyclic.items()
    }
    frontier = dict(found)
    while frontier:
        nxt = {}
        for key, gens in frontier.items():
            for ckey, cgen in cyclic.items():
                if ckey <= key:
                    continue
                joined_gens = gens + (cgen,)
                joined = frozenset(_closure(G.degree, joined_gens, G.order))
                if joined not in found:
                    found[joined] = joined_gens
                    nxt[joined] = joined_gens
        frontier = nxt
    groups = [PermGroup(G.degree, gens, key) for key, gens in found.items()]
    groups.sort(key=lambda K: (K.order, K.elements))
    return groups


# ============================================
# Serialization
# ============================================

def group_from_json(data: dict, order_bound: Optional[int] = None) -> PermGroup:
    degree = int(data["degree"])
    gens = [Perm.from_json(g) for g in data.get("generators", [])]
    return generate(gens, order_bound=order_bound, degree=degree)


def subgroup_to_json(parent: PermGroup, H: PermGroup) -> dict:
    return {
        "parent_generators": [g.to_json() for g in parent.generators],
        "generators": [g.to_json() for g in H.generators],
        "order": H.order,
    }
