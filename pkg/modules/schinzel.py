"""
Schinzel Decision Module for Schinzel Lab.
Reducibility of f(x) - g(y) read off the monodromy group, and the extension group G*.

Features:
- Orbit lengths of G(T_g, 1) on the cosets of G(T_f, 1) (degrees of the factors)
- Traces of coset actions and the class-preserving trace profile
- Newly reducible versus composition-reducible verdicts with an intermediate witness
- Extension group G* = union of (sigma*_inf)^j G_f with the c_AZ multiplication rule
- The criterion for f and zeta_v f to share a Galois closure
- Intermediate-level pairs and pairings of the modular example
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple, Union

from pydantic import BaseModel, Field

from app.config import resolve_brute_force_degree
from app.constants import (
    VERDICT_IRREDUCIBLE,
    VERDICT_NEWLY_REDUCIBLE,
    VERDICT_REDUCIBLE_COMPOSITE,
)
from modules.group_engine import (
    CosetAction,
    GroupAutomorphism,
    PermGroup,
    are_conjugate_subgroups,
    coset_action,
    intermediate_subgroups,
    orbits_under,
    point_stabilizer,
)
from modules.nielsen import (
    BranchTuple,
    Equivalence,
    NielsenClassSpec,
    enumerate_nielsen,
    genus,
    inner_conjugator,
    rotate_tuple,
    shift_tuple,
)
from modules.perm_core import Perm, symmetric_group
from utils.exceptions import (
    BruteForceBoundError,
    ElementNotInGroupError,
    ExtensionPreconditionError,
    InvalidAutomorphismError,
    MalformedTupleError,
    NotASubgroupError,
)

logger = logging.getLogger(__name__)


# ============================================
# Enums
# ============================================

class Verdict(str, Enum):
    """Reducibility verdict for a pair (f, g)."""
    NEWLY_REDUCIBLE = VERDICT_NEWLY_REDUCIBLE
    REDUCIBLE_COMPOSITE = VERDICT_REDUCIBLE_COMPOSITE
    IRREDUCIBLE = VERDICT_IRREDUCIBLE


# ============================================
# Data Types
# ============================================

@dataclass(frozen=True, eq=False)
class PairSetup:
    """
    G with the stabilizers h_f, h_g of two degree-n coset representations.

    When ``gamma`` is given it must carry h_f onto h_g element-wise.
    """

    group: PermGroup
    h_f: PermGroup
    h_g: PermGroup
    gamma: Optional[GroupAutomorphism] = None

    def __post_init__(self):
        for name, H in (("h_f", self.h_f), ("h_g", self.h_g)):
            if not H.is_subgroup_of(self.group):
                raise NotASubgroupError(f"{name} is not a subgroup of G")
        if self.h_f.order != self.h_g.order:
            raise NotASubgroupError(
                f"h_f and h_g have different indices {self.index_f} and {self.group.order // self.h_g.order}"
            )
        if self.gamma is not None:
            image = frozenset(self.gamma(h) for h in self.h_f)
            if image != self.h_g.element_set:
                raise InvalidAutomorphismError("gamma does not map h_f onto h_g")

    @property
    def index_f(self) -> int:
        return self.group.order // self.h_f.order

    @property
    def n(self) -> int:
        return self.index_f

    @property
    def T_f(self) -> CosetAction:
        return self._actions[0]

    @property
    def T_g(self) -> CosetAction:
        return self._actions[1]

    @property
    def _actions(self) -> Tuple[CosetAction, CosetAction]:
        cached = self.__dict__.get("_cached_actions")
        if cached is None:
            cached = (coset_action(self.group, self.h_f), coset_action(self.group, self.h_g))
            object.__setattr__(self, "_cached_actions", cached)
        return cached

    def swapped(self) -> PairSetup:
        gamma = self.gamma.inverse() if self.gamma is not None else None
        return PairSetup(self.group, self.h_g, self.h_f, gamma)


@dataclass(frozen=True)
class ReducibilityVerdict:
    verdict: Verdict
    orbit_lengths: Tuple[int, ...]
    witness: Optional[PermGroup] = None
    witness_side: Optional[str] = None

    @property
    def reducible(self) -> bool:
        return self.verdict != Verdict.IRREDUCIBLE

    @property
    def newly_reducible(self) -> bool:
        return self.verdict == Verdict.NEWLY_REDUCIBLE


@dataclass(frozen=True)
class ExtElem:
    """(j, sigma) standing for (sigma*_inf)^j sigma."""

    j: int
    sigma: Perm


@dataclass(frozen=True)
class IntermediatePair:
    """A composition level G' of f with its gamma-image and the orbit lengths there."""

    subgroup: PermGroup
    image: PermGroup
    index: int
    orbit_lengths: Tuple[int, ...]

    @property
    def reducible(self) -> bool:
        return len(self.orbit_lengths) >= 2


# ============================================
# Report Models
# ============================================

class CharSchinzelReport(BaseModel):
    """Itemized outcome of the shared-Galois-closure criterion."""
    cond_i: bool = Field(..., description="gamma fixes sigma_inf, moves h_f to a non-conjugate h_g, gamma^v = inn(sigma_inf)")
    cond_ii: bool = Field(..., description="genus 0, sigma_inf an n-cycle, r - 1 = v")
    cond_iii: bool = Field(..., description="gamma-image tuple inner-equivalent to the rotated tuple")
    conjugator: Optional[List[int]] = Field(default=None, description="g with g * rotated * g^-1 = gamma(tuple)")
    notes: List[str] = Field(default_factory=list, description="Reasons for failed conditions")

    @property
    def passed(self) -> bool:
        return self.cond_i and self.cond_ii and self.cond_iii


class VerdictReport(BaseModel):
    """Reducibility verdicts for one pair, with the optional criterion report."""
    reducible: bool = Field(..., description="f(x) - g(y) has at least two factors")
    orbit_lengths: List[int] = Field(..., description="Factor degrees, ascending")
    newly_reducible: bool = Field(..., description="Reducible, and through no composition factor")
    verdict: Verdict = Field(..., description="Three-way verdict")
    witness_intermediate: Optional[dict] = Field(default=None, description="Intermediate subgroup blocking new reducibility")
    witness_side: Optional[str] = Field(default=None, description="'f' or 'g': whose composition factor")
    charschinzel: Optional[CharSchinzelReport] = Field(default=None, description="Shared Galois closure criterion")

    @classmethod
    def from_verdict(
        cls, verdict: ReducibilityVerdict, charschinzel: Optional[CharSchinzelReport] = None
    ) -> VerdictReport:
        witness = None
        if verdict.witness is not None:
            witness = {
                "generators": [g.to_json() for g in verdict.witness.generators],
                "order": verdict.witness.order,
            }
        return cls(
            reducible=verdict.reducible,
            orbit_lengths=list(verdict.orbit_lengths),
            newly_reducible=verdict.newly_reducible,
            verdict=verdict.verdict,
            witness_intermediate=witness,
            witness_side=verdict.witness_side,
            charschinzel=charschinzel,
        )


class ModularPairingReport(BaseModel):
    """Inner classes of the modular data and those paired by gamma with their half-turn."""
    n: int = Field(..., description="Degree")
    v: int = Field(..., description="Rotation order")
    classes: List[str] = Field(..., description="Ordered class labels of the tuple slots")
    inner_count: int = Field(..., description="Number of inner classes")
    paired_count: int = Field(..., description="Classes whose gamma-image is inner-equivalent to the shifted tuple")
    paired: List[bool] = Field(default_factory=list, description="Pairing flag per inner class")
    representatives: List[List[List[int]]] = Field(default_factory=list, description="Inner class representatives")


# ============================================
# Orbits and Traces
# ============================================

def factor_orbit_lengths(setup: PairSetup) -> List[int]:
    """Orbits of h_g acting through T_f on the cosets of h_f, as ascending lengths."""
    T = setup.T_f
    gens = [T(h) for h in (setup.h_g.generators or setup.h_g.elements)]
    return sorted(len(orb) for orb in orbits_under(gens, T.degree))


def is_reducible_pair(setup: PairSetup) -> bool:
    return len(factor_orbit_lengths(setup)) >= 2


def trace(action: CosetAction, g: Perm) -> int:
    """Number of cosets fixed by g."""
    if g not in action.parent:
        raise ElementNotInGroupError(str(g), "trace")
    return len(action(g).fixed_points())


def trace_profile_equal(
    target: Union[PairSetup, CosetAction],
    gamma: Optional[GroupAutomorphism] = None,
) -> bool:
    """tr(T(sigma)) == tr(T(gamma(sigma))) for all sigma; T is T_f for a PairSetup."""
    action = target.T_f if isinstance(target, PairSetup) else target
    if gamma is None:
        if not isinstance(target, PairSetup) or target.gamma is None:
            raise InvalidAutomorphismError("trace_profile_equal needs an automorphism")
        gamma = target.gamma
    return all(trace(action, x) == trace(action, gamma(x)) for x in action.parent)


def positive_trace_criterion(setup: PairSetup) -> bool:
    """True iff T_f and T_g have positive trace on exactly the same elements."""
    T_f, T_g = setup.T_f, setup.T_g
    return all((trace(T_f, x) > 0) == (trace(T_g, x) > 0) for x in setup.group)


# ============================================
# Reducibility Verdicts
# ============================================

def _product_set_size(A: PermGroup, B: PermGroup) -> int:
    return A.order * B.order // len(A.element_set & B.element_set)


def _first_blocking_level(
    G: PermGroup, base: PermGroup, other: PermGroup
) -> Optional[PermGroup]:
    # other is transitive on G/G' iff other * G' = G.
    for level in intermediate_subgroups(G, base):
        if _product_set_size(other, level) != G.order:
            return level
    return None


def is_newly_reducible(setup: PairSetup) -> ReducibilityVerdict:
    """
    Newly reducible: reducible, and for every G' strictly between h_f and G the
    group h_g is transitive on G/G', and the same with f and g switched.
    """
    lengths = tuple(factor_orbit_lengths(setup))
    if len(lengths) < 2:
        return ReducibilityVerdict(Verdict.IRREDUCIBLE, lengths)

    G = setup.group
    for side, base, other in (("f", setup.h_f, setup.h_g), ("g", setup.h_g, setup.h_f)):
        witness = _first_blocking_level(G, base, other)
        if witness is not None:
            logger.debug(f"Composite on side {side}: intermediate of order {witness.order}")
            return ReducibilityVerdict(Verdict.REDUCIBLE_COMPOSITE, lengths, witness, side)
    return ReducibilityVerdict(Verdict.NEWLY_REDUCIBLE, lengths)


def intermediate_level_pairs(setup: PairSetup) -> List[IntermediatePair]:
    """For each G' between h_f and G: the pair (G', gamma(G')) and its orbit lengths on G/G'."""
    if setup.gamma is None:
        raise ExtensionPreconditionError("intermediate_level_pairs needs gamma", "gamma")
    G = setup.group
    result = []
    for level in intermediate_subgroups(G, setup.h_f):
        image = setup.gamma.image_of(level)
        action = coset_action(G, level)
        gens = [action(h) for h in (image.generators or image.elements)]
        lengths = tuple(sorted(len(orb) for orb in orbits_under(gens, action.degree)))
        result.append(IntermediatePair(level, image, action.degree, lengths))
    return result


# ============================================
# Extension Group G*
# ============================================

class ExtGroup:
    """
    G* = union over j of (sigma*_inf)^j G_f, with (sigma*_inf)^v = sigma_inf and
    conjugation by sigma*_inf acting as gamma on G_f.

    Multiplication: (j', s')(j'', s'') = (j' + j'', gamma^-j''(s') s''), and a
    carry past v left-multiplies by sigma_inf.
    """

    def __init__(self, base: PermGroup, gamma: GroupAutomorphism, sigma_infty: Perm, v: int):
        self.base = base
        self.gamma = gamma
        self.sigma_infty = sigma_infty
        self.v = v
        inverse = gamma.inverse()
        self._neg_tables: List[Dict[Perm, Perm]] = []
        current = {x: x for x in base}
        for _ in range(v):
            self._neg_tables.append(current)
            current = {x: inverse.table[y] for x, y in current.items()}
        self._pos_tables: List[Dict[Perm, Perm]] = []
        current = {x: x for x in base}
        for _ in range(v):
            self._pos_tables.append(current)
            current = {x: gamma.table[y] for x, y in current.items()}

    @property
    def order(self) -> int:
        return self.v * self.base.order

    @property
    def identity(self) -> ExtElem:
        return ExtElem(0, self.base.identity)

    @property
    def sigma_star(self) -> ExtElem:
        return ExtElem(1 % self.v, self.base.identity) if self.v > 1 else ExtElem(0, self.sigma_infty)

    def elements(self) -> List[ExtElem]:
        return [ExtElem(j, x) for j in range(self.v) for x in self.base.elements]

    def __contains__(self, x: ExtElem) -> bool:
        return 0 <= x.j < self.v and x.sigma in self.base

    def embed(self, x: Perm) -> ExtElem:
        return ExtElem(0, x)

    def multiply(self, x: ExtElem, y: ExtElem) -> ExtElem:
        sigma = self._neg_tables[y.j][x.sigma] * y.sigma
        j = x.j + y.j
        if j >= self.v:
            j -= self.v
            sigma = self.sigma_infty * sigma
        return ExtElem(j, sigma)

    def inverse(self, x: ExtElem) -> ExtElem:
        if x.j == 0:
            return ExtElem(0, x.sigma.inverse())
        j = self.v - x.j
        return ExtElem(j, (self.sigma_infty * self._neg_tables[j][x.sigma]).inverse())

    def power(self, x: ExtElem, k: int) -> ExtElem:
        base = x if k >= 0 else self.inverse(x)
        result = self.identity
        for _ in range(abs(k)):
            result = self.multiply(result, base)
        return result

    def element_order(self, x: ExtElem) -> int:
        k, y = 1, x
        while y != self.identity:
            y = self.multiply(y, x)
            k += 1
        return k

    def star_conjugate(self, x: Perm, k: int) -> Perm:
        """(sigma*_inf)^k x (sigma*_inf)^-k, which lies in G_f and equals gamma^k(x)."""
        star = self.power(self.sigma_star, k)
        result = self.multiply(self.multiply(star, self.embed(x)), self.inverse(star))
        if result.j != 0:
            raise ExtensionPreconditionError("conjugate left the base coset", "star_conjugate")
        return result.sigma

    def gamma_power(self, x: Perm, k: int) -> Perm:
        return self._pos_tables[k % self.v][x] if k >= 0 else self._neg_tables[(-k) % self.v][x]

    def is_associative(self, sample: Optional[Sequence[ExtElem]] = None) -> bool:
        elems = list(sample) if sample is not None else self.elements()
        mul = self.multiply
        return all(mul(mul(a, b), c) == mul(a, mul(b, c)) for a in elems for b in elems for c in elems)


def build_ext_group(G: PermGroup, gamma: GroupAutomorphism, sigma_infty: Perm, v: int) -> ExtGroup:
    """
    Raises:
        ExtensionPreconditionError: gamma moves sigma_inf, or gamma^v is not inn(sigma_inf)
    """
    if v < 1:
        raise ExtensionPreconditionError(f"v must be >= 1, got {v}", "v")
    if gamma.domain != G:
        raise ExtensionPreconditionError("gamma is not defined on G", "domain")
    if sigma_infty not in G:
        raise ExtensionPreconditionError("sigma_inf is not in G", "sigma_infty")
    if gamma(sigma_infty) != sigma_infty:
        raise ExtensionPreconditionError("gamma does not fix sigma_inf", "fixes_sigma_infty")
    if not gamma.power(v).equals_inner(sigma_infty):
        raise ExtensionPreconditionError("gamma^v is not conjugation by sigma_inf", "gamma_power")
    return ExtGroup(G, gamma, sigma_infty, v)


def caz_outside_symmetric(
    G: PermGroup,
    gamma: GroupAutomorphism,
    action: CosetAction,
    brute_force_degree: Optional[int] = None,
) -> bool:
    """
    True iff no alpha in S_n has alpha T(sigma) alpha^-1 = T(gamma(sigma)) for all sigma.

    Raises:
        BruteForceBoundError: the action degree exceeds the brute-force bound
        ExtensionPreconditionError: the action is not faithful
    """
    bound = resolve_brute_force_degree(brute_force_degree)
    if action.degree > bound:
        raise BruteForceBoundError(action.degree, bound, "caz_outside_symmetric")
    if not action.is_faithful:
        raise ExtensionPreconditionError("coset action is not faithful", "faithful")
    gens = G.generators or G.elements
    pairs = [(action(s), action(gamma(s))) for s in gens]
    for alpha in symmetric_group(action.degree):
        if all(x.conjugate(alpha) == y for x, y in pairs):
            logger.debug(f"gamma realized in S_{action.degree} by {alpha}")
            return False
    return True


# ============================================
# Shared Galois Closure
# ============================================

def charschinzel_check(
    G: PermGroup,
    classes: Optional[Sequence[str]],
    t: BranchTuple,
    gamma: GroupAutomorphism,
    v: int,
) -> CharSchinzelReport:
    """
    The criterion for f and zeta_v f to have the same Galois closure.

    (i) gamma fixes sigma_inf, sends h_f (stabilizer of letter 1) to a
    non-conjugate subgroup, and gamma^v = inn(sigma_inf);
    (ii) genus 0, sigma_inf an n-cycle, r - 1 = v;
    (iii) gamma(t) is inner-equivalent to rotate_tuple(t).

    Raises:
        MalformedTupleError: t is not a product-one tuple in G with sigma_inf last
    """
    if t.degree != G.degree or any(p not in G for p in t.entries):
        raise MalformedTupleError("tuple entries must lie in G", "membership")
    if not t.is_product_one():
        raise MalformedTupleError("tuple fails product-one", "product_one")
    if t.infinity_slot is None:
        t = t.with_infinity_slot(t.r)
    if t.infinity_slot != t.r:
        raise MalformedTupleError("sigma_inf must occupy the last slot", "infinity_slot")
    if classes is not None:
        labels = sorted(G.class_of(p).label for p in t.entries)
        if labels != sorted(classes):
            raise MalformedTupleError("tuple classes differ from the given class multiset", "classes")

    notes: List[str] = []
    sigma_inf = t.sigma_infinity

    h_f = point_stabilizer(G, 1)
    h_g = gamma.image_of(h_f)
    cond_i = True
    if gamma(sigma_inf) != sigma_inf:
        cond_i = False
        notes.append("gamma moves sigma_inf")
    if are_conjugate_subgroups(G, h_f, h_g):
        cond_i = False
        notes.append("gamma(h_f) is conjugate to h_f")
    if not gamma.power(v).equals_inner(sigma_inf):
        cond_i = False
        notes.append("gamma^v is not conjugation by sigma_inf")

    cond_ii = True
    try:
        if genus(t) != 0:
            cond_ii = False
            notes.append("genus is not 0")
    except MalformedTupleError as e:
        cond_ii = False
        notes.append(e.message)
    if not sigma_inf.is_n_cycle():
        cond_ii = False
        notes.append("sigma_inf is not an n-cycle")
    if t.r - 1 != v:
        cond_ii = False
        notes.append(f"r - 1 = {t.r - 1} differs from v = {v}")

    conjugator = None
    cond_iii = False
    try:
        rotated = rotate_tuple(t)
        image = BranchTuple(t.degree, tuple(gamma(p) for p in t.entries), t.infinity_slot)
        conjugator = inner_conjugator(rotated, image, G)
        cond_iii = conjugator is not None
        if not cond_iii:
            notes.append("gamma-image is not inner-equivalent to the rotated tuple")
    except MalformedTupleError as e:
        notes.append(e.message)

    return CharSchinzelReport(
        cond_i=cond_i,
        cond_ii=cond_ii,
        cond_iii=cond_iii,
        conjugator=conjugator.to_json() if conjugator is not None else None,
        notes=notes,
    )


def modular_pairings(n: int, v: int = 2) -> ModularPairingReport:
    """
    Inner classes of the modular data (sigma1, sigma2, sigma2, sigma1) for D_n, and
    those whose c_AZ-image is inner-equivalent to the tuple shifted by r / v slots.
    """
    from modules.dihedral_catalog import caz_dihedral, dihedral_group, modular_tuple

    D = dihedral_group(n).group
    gamma = caz_dihedral(n)
    base = modular_tuple(n)
    if base.r % v:
        raise ExtensionPreconditionError(f"v = {v} does not divide r = {base.r}", "v")
    labels = tuple(D.class_of(p).label for p in base.entries)
    spec = NielsenClassSpec(D, labels, Equivalence.INNER)
    reps = enumerate_nielsen(spec, ordered=True).representatives
    shift = base.r // v
    paired = []
    for t in reps:
        image = BranchTuple(t.degree, tuple(gamma(p) for p in t.entries))
        paired.append(inner_conjugator(shift_tuple(t, shift), image, D) is not None)
    return ModularPairingReport(
        n=n,
        v=v,
        classes=list(labels),
        inner_count=len(reps),
        paired_count=sum(paired),
        paired=paired,
        representatives=[[p.to_json() for p in t.entries] for t in reps],
    )
