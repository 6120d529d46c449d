"""
Nielsen Class Module for Schinzel Lab.
Branch-cycle tuples, the Nielsen-class conditions and their equivalences.

Features:
- BranchTuple with product-one, generation and class checks
- Genus via Riemann-Hurwitz: 2(n + g - 1) = sum of ind(sigma_i)
- Polynomial tuples (genus 0 with an n-cycle over infinity)
- Enumeration of absolute and inner Nielsen classes with canonical representatives
- The rotation of finite branch points under z -> zeta_v z, cyclic shifts, inner conjugators

Canonical representative of an equivalence class: the lexicographically minimal
tuple (concatenated image arrays) over the acting group.
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from itertools import permutations, product as cartesian
from typing import Dict, List, Optional, Sequence, Tuple

from pydantic import BaseModel, Field

from app.config import resolve_order_bound
from modules.group_engine import (
    ConjClass,
    PermGroup,
    normalizer_in_symmetric,
    subgroup_generated,
)
from modules.perm_core import Perm, n_cycle, product
from utils.exceptions import (
    BruteForceBoundError,
    DegreeMismatchError,
    MalformedTupleError,
    OrderBoundExceededError,
)

logger = logging.getLogger(__name__)


# ============================================
# Enums
# ============================================

class Equivalence(str, Enum):
    """Equivalence relation on Nielsen tuples."""
    ABSOLUTE = "abs"
    INNER = "inner"


# ============================================
# Data Types
# ============================================

@dataclass(frozen=True)
class BranchTuple:
    """
    An ordered tuple (sigma_1, ..., sigma_r) of permutations of one degree.

    ``infinity_slot`` is 1-based and marks sigma_infinity when known.
    """

    degree: int
    entries: Tuple[Perm, ...]
    infinity_slot: Optional[int] = None

    def __post_init__(self):
        entries = tuple(self.entries)
        object.__setattr__(self, "entries", entries)
        if len(entries) < 2:
            raise MalformedTupleError(f"A branch tuple needs r >= 2 entries, got {len(entries)}", "length")
        for p in entries:
            if p.degree != self.degree:
                raise DegreeMismatchError(self.degree, p.degree, "BranchTuple")
        if self.infinity_slot is not None and not 1 <= self.infinity_slot <= len(entries):
            raise MalformedTupleError(f"infinity_slot {self.infinity_slot} outside 1..{len(entries)}", "infinity_slot")

    @property
    def r(self) -> int:
        return len(self.entries)

    @property
    def sigma_infinity(self) -> Optional[Perm]:
        return self.entries[self.infinity_slot - 1] if self.infinity_slot else None

    def __iter__(self):
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, i: int) -> Perm:
        return self.entries[i]

    def product(self) -> Perm:
        return product(self.entries)

    def is_product_one(self) -> bool:
        return self.product().is_identity

    def indices(self) -> List[int]:
        return [p.index() for p in self.entries]

    def key(self) -> Tuple[int, ...]:
        """Concatenated image arrays; the canonical-order key."""
        return tuple(x for p in self.entries for x in p.images)

    def is_transitive(self) -> bool:
        seen = {1}
        frontier = [1]
        while frontier:
            nxt = []
            for x in frontier:
                for p in self.entries:
                    y = p(x)
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return len(seen) == self.degree

    def with_infinity_slot(self, slot: Optional[int]) -> BranchTuple:
        return BranchTuple(self.degree, self.entries, slot)

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "entries": [p.to_json() for p in self.entries],
            "infinity_slot": self.infinity_slot,
        }

    @classmethod
    def from_json(cls, data: dict) -> BranchTuple:
        entries = tuple(Perm.from_json(e) for e in data["entries"])
        degree = int(data.get("degree", entries[0].degree if entries else 0))
        return cls(degree, entries, data.get("infinity_slot"))

    def __str__(self) -> str:
        return "(" + ", ".join(p.to_cycle_string() for p in self.entries) + ")"


@dataclass(frozen=True)
class NielsenClassSpec:
    """(G, C, equivalence): a group, an ordered multiset of class labels, and the equivalence."""

    group: PermGroup
    classes: Tuple[str, ...]
    equivalence: Equivalence = Equivalence.ABSOLUTE

    def __post_init__(self):
        object.__setattr__(self, "classes", tuple(self.classes))
        object.__setattr__(self, "equivalence", Equivalence(self.equivalence))
        known = {c.label for c in self.group.classes}
        for label in self.classes:
            if label not in known:
                raise MalformedTupleError(f"Class label {label!r} does not name a class of the group", "classes")

    @property
    def r(self) -> int:
        return len(self.classes)

    def class_objects(self) -> List[ConjClass]:
        return [self.group.class_by_label(label) for label in self.classes]

    def with_equivalence(self, equivalence: Equivalence) -> NielsenClassSpec:
        return NielsenClassSpec(self.group, self.classes, equivalence)


@dataclass(frozen=True)
class BranchSlotMap:
    """How multiplication by zeta_v permutes the r - 1 finite branch-point slots."""

    v: int
    slot_permutation: Perm
    orbit_sizes: Tuple[int, ...]

    @property
    def one_orbit(self) -> bool:
        return len(self.orbit_sizes) == 1 and self.orbit_sizes[0] == self.v


@dataclass(frozen=True)
class NielsenCheck:
    """Outcome of verify_nielsen; ``failed`` names the first failed condition."""

    ok: bool
    failed: Optional[str] = None
    diagnosis: str = ""

    def __bool__(self) -> bool:
        return self.ok


@dataclass
class NielsenEnumeration:
    spec: NielsenClassSpec
    acting_group: PermGroup
    representatives: List[BranchTuple] = field(default_factory=list)
    normalizer_fallback: bool = False

    @property
    def count(self) -> int:
        return len(self.representatives)


@dataclass
class EquivalenceMap:
    """psi: inner classes -> absolute classes, by index into the two enumerations."""

    inner: NielsenEnumeration
    absolute: NielsenEnumeration
    mapping: Dict[int, int]

    @property
    def fibers(self) -> Dict[int, List[int]]:
        result: Dict[int, List[int]] = {i: [] for i in range(self.absolute.count)}
        for inner_idx, abs_idx in self.mapping.items():
            result[abs_idx].append(inner_idx)
        return result

    @property
    def fiber_sizes(self) -> List[int]:
        return [len(v) for _, v in sorted(self.fibers.items())]

    @property
    def is_surjective(self) -> bool:
        return set(self.mapping.values()) == set(range(self.absolute.count))

    @property
    def is_bijective(self) -> bool:
        return self.is_surjective and self.inner.count == self.absolute.count


# ============================================
# Report Models
# ============================================

class TupleReport(BaseModel):
    """JSON form of a branch tuple."""
    degree: int = Field(..., description="Number of letters n")
    entries: List[List[int]] = Field(..., description="Image arrays of sigma_1..sigma_r")
    infinity_slot: Optional[int] = Field(default=None, description="1-based slot of sigma_infinity")
    cycles: List[str] = Field(default_factory=list, description="Cycle notation of each entry")

    @classmethod
    def from_tuple(cls, t: BranchTuple) -> TupleReport:
        return cls(
            degree=t.degree,
            entries=[p.to_json() for p in t.entries],
            infinity_slot=t.infinity_slot,
            cycles=[p.to_cycle_string() for p in t.entries],
        )


class NielsenReport(BaseModel):
    """Enumeration report for one Nielsen class."""
    group: dict = Field(..., description="Group as {degree, generators, order}")
    classes: List[str] = Field(..., description="Class labels of C")
    equivalence: Equivalence = Field(..., description="abs or inner")
    count: int = Field(..., description="Number of equivalence classes")
    representatives: List[TupleReport] = Field(default_factory=list, description="Canonical representatives")
    normalizer_fallback: bool = Field(
        default=False, description="Absolute equivalence fell back to conjugation by G only"
    )

    @classmethod
    def from_enumeration(cls, result: NielsenEnumeration) -> NielsenReport:
        return cls(
            group=result.spec.group.to_json(),
            classes=list(result.spec.classes),
            equivalence=result.spec.equivalence,
            count=result.count,
            representatives=[TupleReport.from_tuple(t) for t in result.representatives],
            normalizer_fallback=result.normalizer_fallback,
        )


# ============================================
# Tuple Conditions
# ============================================

def verify_nielsen(t: BranchTuple, G: PermGroup, spec: NielsenClassSpec) -> NielsenCheck:
    """Product-one, generation of exactly G, and the class multiset. Never raises."""
    if t.degree != G.degree:
        return NielsenCheck(False, "degree", f"tuple degree {t.degree} != group degree {G.degree}")
    if not t.is_product_one():
        return NielsenCheck(False, "product_one", f"product of entries is {t.product()}, not the identity")
    outside = [p for p in t.entries if p not in G]
    if outside:
        return NielsenCheck(False, "generation", f"entry {outside[0]} is not in G")
    generated = subgroup_generated(G, t.entries)
    if generated.order != G.order:
        return NielsenCheck(False, "generation", f"entries generate order {generated.order}, G has order {G.order}")
    labels = Counter(G.class_of(p).label for p in t.entries)
    if labels != Counter(spec.classes):
        return NielsenCheck(False, "classes", f"entry classes {sorted(labels.elements())} != {sorted(spec.classes)}")
    return NielsenCheck(True)


def genus(t: BranchTuple) -> int:
    """
    Genus from Riemann-Hurwitz.

    Raises:
        MalformedTupleError: odd index sum or negative genus
    """
    total = sum(t.indices())
    if total % 2:
        raise MalformedTupleError(f"Index sum {total} is odd", "riemann_hurwitz_parity")
    g = total // 2 - t.degree + 1
    if g < 0:
        raise MalformedTupleError(f"Index sum {total} < 2(n - 1) = {2 * (t.degree - 1)}", "riemann_hurwitz_bound")
    return g


def is_polynomial_tuple(t: BranchTuple) -> Tuple[bool, Optional[int]]:
    """Genus 0 with an n-cycle entry; returns the sigma_infinity slot (last slot on ties)."""
    if not t.is_product_one() or not t.is_transitive():
        return False, None
    try:
        if genus(t) != 0:
            return False, None
    except MalformedTupleError:
        return False, None
    slots = [i for i, p in enumerate(t.entries, start=1) if p.is_n_cycle()]
    if not slots:
        return False, None
    return True, slots[-1]


# ============================================
# Tuple Transformations
# ============================================

def conjugate_tuple(t: BranchTuple, g: Perm) -> BranchTuple:
    """Simultaneous conjugation g t g^-1."""
    return BranchTuple(t.degree, tuple(p.conjugate(g) for p in t.entries), t.infinity_slot)


def rotate_tuple(t: BranchTuple) -> BranchTuple:
    """
    Branch cycles of zeta_v f from those of f, under the one-orbit condition:
    (sigma_2, ..., sigma_{r-1}, sigma_1, sigma_1^-1 sigma_r sigma_1).

    Raises:
        MalformedTupleError: r < 3, or the infinity slot is not last
    """
    if t.r < 3:
        raise MalformedTupleError(f"rotate_tuple needs r >= 3, got {t.r}", "rotation_length")
    if t.infinity_slot != t.r:
        raise MalformedTupleError("rotate_tuple needs the infinity slot last", "rotation_infinity_slot")
    first = t.entries[0]
    last = t.entries[-1].conjugate(first.inverse())
    entries = t.entries[1:-1] + (first, last)
    return BranchTuple(t.degree, entries, t.r)


def shift_tuple(t: BranchTuple, k: int) -> BranchTuple:
    """Cyclic slot shift (sigma_{k+1}, ..., sigma_r, sigma_1, ..., sigma_k); keeps product-one."""
    k %= t.r
    entries = t.entries[k:] + t.entries[:k]
    slot = None
    if t.infinity_slot is not None:
        slot = (t.infinity_slot - 1 - k) % t.r + 1
    return BranchTuple(t.degree, entries, slot)


def branch_slot_map(r: int, v: int, orbit_sizes: Optional[Sequence[int]] = None) -> BranchSlotMap:
    """
    Slot permutation induced by z -> zeta_v z on the r - 1 finite branch points.

    Orbits occupy consecutive slots; ``orbit_sizes`` defaults to one orbit of
    size r - 1.
    """
    finite = r - 1
    if finite < 1 or v < 1:
        raise MalformedTupleError(f"Need r >= 2 and v >= 1, got r={r}, v={v}", "slot_map")
    sizes = tuple(orbit_sizes) if orbit_sizes is not None else (finite,)
    if sum(sizes) != finite:
        raise MalformedTupleError(f"Orbit sizes {list(sizes)} do not cover {finite} finite slots", "slot_map")
    for size in sizes:
        if size < 1 or v % size:
            raise MalformedTupleError(f"Orbit size {size} does not divide v = {v}", "slot_map")
    cycles = []
    start = 1
    for size in sizes:
        cycles.append(list(range(start, start + size)))
        start += size
    return BranchSlotMap(v=v, slot_permutation=Perm.from_cycles(cycles, finite), orbit_sizes=sizes)


# ============================================
# Equivalence
# ============================================

def canonical_tuple(t: BranchTuple, acting: PermGroup) -> BranchTuple:
    """Lexicographically minimal conjugate of t over the acting group."""
    return min((conjugate_tuple(t, g) for g in acting), key=BranchTuple.key)


def inner_conjugator(t: BranchTuple, s: BranchTuple, G: PermGroup) -> Optional[Perm]:
    """The minimal g in G with g t g^-1 = s, or None."""
    if t.r != s.r or t.degree != s.degree:
        return None
    for g in G:
        if all(p.conjugate(g) == q for p, q in zip(t.entries, s.entries)):
            return g
    return None


def are_inner_equivalent(t: BranchTuple, s: BranchTuple, G: PermGroup) -> bool:
    return inner_conjugator(t, s, G) is not None


def acting_group(spec: NielsenClassSpec) -> Tuple[PermGroup, bool]:
    """The group whose conjugation defines the equivalence, and whether the S_n normalizer fell back to G."""
    if spec.equivalence == Equivalence.INNER:
        return spec.group, False
    try:
        return normalizer_in_symmetric(spec.group, spec.class_objects()), False
    except BruteForceBoundError as e:
        logger.warning(f"{e.message}; absolute equivalence uses conjugation by G only")
        return spec.group, True


def enumerate_nielsen(
    spec: NielsenClassSpec,
    order_bound: Optional[int] = None,
    ordered: bool = False,
) -> NielsenEnumeration:
    """
    One canonical representative per equivalence class of ni(G, C).

    Tuples are taken in every distinct ordering of the class multiset, or only
    in the given ordering when ``ordered`` is set (conjugators must then keep
    every slot in its class).

    Raises:
        OrderBoundExceededError: too many raw tuples to scan
    """
    G = spec.group
    acting, fallback = acting_group(spec)
    result = NielsenEnumeration(spec=spec, acting_group=acting, normalizer_fallback=fallback)
    if spec.r < 2:
        return result

    bound = resolve_order_bound(order_bound)
    orderings = [spec.classes] if ordered else sorted(set(permutations(spec.classes)))
    raw = 0
    for ordering in orderings:
        size = 1
        for label in ordering[:-1]:
            size *= G.class_by_label(label).size
        raw += size
    if raw > bound:
        raise OrderBoundExceededError(bound, raw, "enumerating raw Nielsen tuples")

    seen = set()
    representatives = []
    for ordering in orderings:
        pools = [sorted(G.class_by_label(label).members) for label in ordering[:-1]]
        last_class = G.class_by_label(ordering[-1])
        for head in cartesian(*pools):
            last = product(head, G.degree).inverse()
            if last not in last_class:
                continue
            t = BranchTuple(G.degree, tuple(head) + (last,))
            if t.key() in seen:
                continue
            if subgroup_generated(G, t.entries).order != G.order:
                continue
            orbit = {}
            for g in acting:
                s = conjugate_tuple(t, g)
                if ordered and tuple(G.class_of(p).label for p in s.entries) != spec.classes:
                    continue
                orbit[s.key()] = g
            seen.update(orbit)
            rep_key = min(orbit)
            representatives.append(conjugate_tuple(t, orbit[rep_key]))

    representatives.sort(key=BranchTuple.key)
    result.representatives = representatives
    logger.debug(f"Nielsen enumeration ({spec.equivalence.value}): {result.count} classes from {raw} raw tuples")
    return result


def equivalence_class_map(spec_inner: NielsenClassSpec, spec_abs: NielsenClassSpec) -> EquivalenceMap:
    """The canonical surjection from inner classes to absolute classes."""
    if spec_inner.group != spec_abs.group or Counter(spec_inner.classes) != Counter(spec_abs.classes):
        raise MalformedTupleError("Inner and absolute specs must share (G, C)", "equivalence_map")
    inner = enumerate_nielsen(spec_inner.with_equivalence(Equivalence.INNER))
    absolute = enumerate_nielsen(spec_abs.with_equivalence(Equivalence.ABSOLUTE))
    abs_index = {t.key(): i for i, t in enumerate(absolute.representatives)}
    mapping = {
        i: abs_index[canonical_tuple(t, absolute.acting_group).key()]
        for i, t in enumerate(inner.representatives)
    }
    return EquivalenceMap(inner=inner, absolute=absolute, mapping=mapping)


def cyclic_tuple(n: int) -> BranchTuple:
    """(c, c^-1) for the n-cycle c = (1 2 ... n): branch cycles of x^n."""
    c = n_cycle(n)
    return BranchTuple(n, (c, c.inverse()), 2)
