"""
Wreath Extension Module for Schinzel Lab.
G_f wr Z/v on n*v letters, the branch cycle sigma*_inf, and branch cycles of mu o f.

Features:
- Wreath elements (shift, coordinates) and their embedding in S_{nv}
- sigma*_inf as the nv-cycle (1_1 1_2 ... 1_v 2_1 ... n_v)
- Wreath conditions: surjection onto Z/v, coordinate projections onto G_f
- The twisted diagonal sigma -> (sigma, gamma(sigma), ...) and the minimal G*
- Shape-constrained search for branch cycles of mu o f, mu(z) = z^v
- Restriction of branch cycles of mu o f back to the fibers (branch cycles of f)

Letter k of block i is flattened to (i - 1) * n + k.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from math import gcd
from typing import Dict, List, Sequence, Tuple

from pydantic import BaseModel, Field

from modules.group_engine import GroupAutomorphism, PermGroup, generate
from modules.nielsen import BranchTuple, TupleReport
from modules.perm_core import Perm
from utils.exceptions import BlockStructureError, DegreeMismatchError, InvariantViolationError

logger = logging.getLogger(__name__)


# ============================================
# Wreath Elements
# ============================================

@dataclass(frozen=True)
class WreathElem:
    """
    k_i -> (x_i(k))_{i + shift}: apply the block's coordinate, then move the block.

    Product (apply ``other`` first): shift s + s', coordinates y_i = x_{i+s'} * x'_i.
    """

    v: int
    shift: int
    coords: Tuple[Perm, ...]

    def __post_init__(self):
        coords = tuple(self.coords)
        object.__setattr__(self, "coords", coords)
        object.__setattr__(self, "shift", self.shift % self.v if self.v else 0)
        if self.v < 1 or len(coords) != self.v:
            raise BlockStructureError(f"need v = {self.v} >= 1 coordinates, got {len(coords)}", v=self.v)
        n = coords[0].degree
        for x in coords:
            if x.degree != n:
                raise DegreeMismatchError(n, x.degree, "WreathElem")

    @property
    def n(self) -> int:
        return self.coords[0].degree

    @classmethod
    def identity(cls, n: int, v: int) -> WreathElem:
        return cls(v, 0, (Perm.identity(n),) * v)

    def __mul__(self, other: WreathElem) -> WreathElem:
        v = self.v
        coords = tuple(self.coords[(i + other.shift) % v] * other.coords[i] for i in range(v))
        return WreathElem(v, self.shift + other.shift, coords)

    def inverse(self) -> WreathElem:
        v = self.v
        coords = [None] * v
        for i in range(v):
            coords[(i + self.shift) % v] = self.coords[i].inverse()
        return WreathElem(v, -self.shift, tuple(coords))

    def block_image(self) -> Perm:
        """The induced permutation of the v blocks."""
        return Perm(tuple((i + self.shift) % self.v + 1 for i in range(self.v)))

    def to_perm(self) -> Perm:
        n, v = self.n, self.v
        images = [0] * (n * v)
        for i in range(v):
            target = ((i + self.shift) % v) * n
            x = self.coords[i]
            for k in range(1, n + 1):
                images[i * n + k - 1] = target + x(k)
        return Perm(tuple(images))

    @classmethod
    def from_perm(cls, p: Perm, n: int, v: int) -> WreathElem:
        """
        Read a block-respecting permutation as a wreath element with a cyclic block shift.

        Raises:
            BlockStructureError: blocks are split, or not moved by a rotation of Z/v
        """
        if p.degree != n * v:
            raise BlockStructureError(f"degree {p.degree} != n * v = {n * v}", n, v)
        shift = None
        coords = []
        for i in range(v):
            targets = {(p(i * n + k) - 1) // n for k in range(1, n + 1)}
            if len(targets) != 1:
                raise BlockStructureError(f"block {i + 1} is split", n, v)
            j = targets.pop()
            s = (j - i) % v
            if shift is None:
                shift = s
            elif s != shift:
                raise BlockStructureError("block permutation is not a rotation", n, v)
            coords.append(Perm(tuple(p(i * n + k) - j * n for k in range(1, n + 1))))
        return cls(v, shift or 0, tuple(coords))


def wreath_embed(coords: Sequence[Perm], shift: int) -> Perm:
    """The permutation of n*v letters for (shift, coords)."""
    return WreathElem(len(coords), shift, tuple(coords)).to_perm()


def sigma_star_infinity(n: int, v: int) -> Perm:
    """The nv-cycle (1_1 1_2 ... 1_v 2_1 ... n_v); its v-th power is (1 2 ... n) on each block."""
    if n < 1 or v < 1:
        raise BlockStructureError(f"need n, v >= 1, got n={n}, v={v}", n, v)
    cycle = [(i - 1) * n + k for k in range(1, n + 1) for i in range(1, v + 1)]
    return Perm.from_cycles([cycle], n * v)


# ============================================
# Wreath Conditions
# ============================================

@dataclass
class WreathConditionReport:
    block_surjective: bool
    projections: List[bool] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.block_surjective and all(self.projections)

    def __bool__(self) -> bool:
        return self.ok


def fiber_group(H: PermGroup, n: int, v: int) -> PermGroup:
    """The stabilizer of block 1 in H, restricted to block 1: the monodromy group of f."""
    restricted = set()
    for p in H:
        w = WreathElem.from_perm(p, n, v)
        if w.shift == 0:
            restricted.add(w.coords[0])
    return generate(sorted(restricted), degree=n)


def check_wreath_conditions(H: PermGroup, n: int, v: int, base: PermGroup) -> WreathConditionReport:
    """
    (i) H maps onto Z/v through its block action; (ii) the blockwise part of H
    projects onto ``base`` (the monodromy group G_f) in every coordinate.

    Raises:
        BlockStructureError: some element of H does not respect the blocks
    """
    elems = [WreathElem.from_perm(p, n, v) for p in H]
    shifts = {w.shift for w in elems}
    block_surjective = any(gcd(s, v) == 1 for s in shifts) if v > 1 else True
    if base.degree != n:
        raise DegreeMismatchError(n, base.degree, "check_wreath_conditions")
    blockwise = [w for w in elems if w.shift == 0]
    projections = [
        {w.coords[i] for w in blockwise} == set(base.element_set) for i in range(v)
    ]
    return WreathConditionReport(block_surjective=block_surjective, projections=projections)


def disjointness_condition(orbit_sizes: Sequence[int], v: int, collisions: bool = False) -> bool:
    """
    Sufficient condition for the full wreath product: every finite branch point
    is alone in its zeta_v-orbit and none hits a branch point of mu.
    """
    for size in orbit_sizes:
        if size < 1 or v % size:
            raise BlockStructureError(f"orbit size {size} does not divide v = {v}", v=v)
    return not collisions and all(size == 1 for size in orbit_sizes)


# ============================================
# Twisted Diagonal and G*
# ============================================

def twisted_diagonal(G: PermGroup, gamma: GroupAutomorphism, v: int) -> Dict[Perm, Perm]:
    """sigma -> (sigma, gamma(sigma), ..., gamma^{v-1}(sigma)) as block-diagonal permutations."""
    result = {}
    for x in G:
        coords = [x]
        for _ in range(v - 1):
            coords.append(gamma(coords[-1]))
        result[x] = wreath_embed(coords, 0)
    return result


@dataclass(frozen=True, eq=False)
class CompBranchGroup:
    """G* = <sigma*_inf, twisted diagonal of G_f> inside S_{nv}."""

    n: int
    v: int
    base: PermGroup
    group: PermGroup
    sigma_star: Perm
    embedding: Dict[Perm, Perm]


def comp_branch_group(n: int, v: int = 2) -> CompBranchGroup:
    """
    Minimal G* for the dihedral data of even degree n.

    Raises:
        InvariantViolationError: |G*| differs from v * |D_n|
    """
    from modules.dihedral_catalog import caz_dihedral, dihedral_group

    D = dihedral_group(n).group
    gamma = caz_dihedral(n)
    embedding = twisted_diagonal(D, gamma, v)
    star = sigma_star_infinity(n, v)
    group = generate([star] + [embedding[s] for s in D.generators])
    if group.order != v * D.order:
        raise InvariantViolationError(
            f"|G*| = {group.order}, expected {v * D.order}", "comp_branch_group_order"
        )
    return CompBranchGroup(n=n, v=v, base=D, group=group, sigma_star=star, embedding=embedding)


# ============================================
# Branch Cycles of mu o f
# ============================================

class CompBranchReport(BaseModel):
    """Solutions for the branch cycles (sigma*_0, sigma*_1, sigma*_inf) of mu o f."""
    n: int = Field(..., description="Degree of f")
    v: int = Field(..., description="Degree of mu(z) = z^v")
    group_order: int = Field(..., description="|G*|")
    solution_count: int = Field(..., description="Number of tuples with the prescribed shapes")
    class_count: int = Field(..., description="Solutions up to conjugation in S_{nv} fixing sigma*_inf (absolute classes)")
    solutions: List[TupleReport] = Field(default_factory=list, description="All solutions, minimal first")
    restriction_roundtrip: bool = Field(..., description="Fibers recover the branch cycles of f")


@dataclass
class CompBranchSolution:
    data: CompBranchGroup
    solutions: List[BranchTuple]
    class_count: int

    @property
    def minimal(self) -> BranchTuple:
        return self.solutions[0]


def _shape(count_two: int, degree: int) -> Tuple[int, ...]:
    return (2,) * count_two + (1,) * (degree - 2 * count_two)


def solve_comp_branch(n: int, v: int = 2) -> CompBranchSolution:
    """
    All (sigma*_0, sigma*_1, sigma*_inf) in G* with product-one, generating G*,
    sigma*_0 of shape 2^n and sigma*_1 of shape 2^{n-1} 1^2.

    Raises:
        InvariantViolationError: no tuple has the prescribed shapes
    """
    if v != 2:
        raise BlockStructureError("the branch-cycle search covers v = 2", n, v)
    data = comp_branch_group(n, v)
    G_star = data.group
    star = data.sigma_star
    star_inv = star.inverse()
    degree = n * v
    shape_zero = _shape(n, degree)
    shape_one = _shape(n - 1, degree)

    solutions = []
    for s1 in G_star:
        if s1.cycle_type() != shape_one:
            continue
        s0 = star_inv * s1.inverse()
        if s0.cycle_type() != shape_zero:
            continue
        t = BranchTuple(degree, (s0, s1, star), 3)
        if generate(t.entries).order != G_star.order:
            continue
        solutions.append(t)
    if not solutions:
        raise InvariantViolationError(f"no branch cycles of the prescribed shapes for n = {n}", "solve_comp_branch")
    solutions.sort(key=BranchTuple.key)

    # C_{S_nv}(sigma*_inf) is <sigma*_inf>, so these classes are absolute
    centralizer = [star ** k for k in range(degree)]
    seen = set()
    classes = 0
    for t in solutions:
        if t.key() in seen:
            continue
        classes += 1
        for g in centralizer:
            seen.add(tuple(x for p in t.entries for x in p.conjugate(g).images))
    logger.info(f"Composite branch cycles, n={n}: {len(solutions)} solutions in {classes} classes")
    return CompBranchSolution(data=data, solutions=solutions, class_count=classes)


# ============================================
# Fiber Restriction
# ============================================

@dataclass(frozen=True)
class FiberCycle:
    """(sigma*_slot)^length restricted to ``block``: a branch cycle of f."""

    slot: int
    block: int
    length: int
    perm: Perm


def restrict_to_fiber(t_star: BranchTuple, n: int, v: int) -> List[FiberCycle]:
    """
    For each entry and each cycle (length l) of its block image, the l-th power
    restricted to the minimal block of that cycle.

    Raises:
        BlockStructureError: an entry does not respect the blocks
    """
    result = []
    for slot, entry in enumerate(t_star.entries, start=1):
        w = WreathElem.from_perm(entry, n, v)
        for cycle in w.block_image().cycles():
            length = len(cycle)
            block = cycle[0]
            power = w
            for _ in range(length - 1):
                power = power * w
            result.append(FiberCycle(slot=slot, block=block, length=length, perm=power.coords[block - 1]))
    return result


def restriction_roundtrip(solution: BranchTuple, n: int, v: int, targets: Sequence[Perm]) -> bool:
    """Nontrivial fiber cycles match ``targets`` in cycle types and generate a group of the same order."""
    fibers = [f.perm for f in restrict_to_fiber(solution, n, v) if not f.perm.is_identity]
    wanted = [p for p in targets if not p.is_identity]
    if sorted(p.cycle_type() for p in fibers) != sorted(p.cycle_type() for p in wanted):
        return False
    return generate(fibers).order == generate(wanted).order


def comp_branch_report(n: int, v: int = 2) -> CompBranchReport:
    from modules.dihedral_catalog import cheby_tuple

    result = solve_comp_branch(n, v)
    targets = cheby_tuple(n).entries
    return CompBranchReport(
        n=n,
        v=v,
        group_order=result.data.group.order,
        solution_count=len(result.solutions),
        class_count=result.class_count,
        solutions=[TupleReport.from_tuple(t) for t in result.solutions],
        restriction_roundtrip=all(restriction_roundtrip(t, n, v, targets) for t in result.solutions),
    )
