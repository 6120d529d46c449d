"""
Dihedral Catalog for Schinzel Lab.
Constructors for the affine and dihedral families and their branch-cycle data.

Features:
- Affine groups Z/n x| A acting by x -> ax + b on residues
- Dihedral groups D_n with the Chebyshev branch cycles
- The automorphism c_AZ: (1,b) -> (1,b), (-1,b) -> (-1,b-1)
- The modular example (sigma1, sigma2, sigma2, sigma1)
- Genus of the Galois closure via the regular representation
- A full dossier per even degree (tuple, classes, genera, verdicts)

Letters: letter k is the residue k mod n, so letter n is residue 0.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache
from math import gcd
from typing import Dict, Iterable, List, Optional, Tuple

from pydantic import BaseModel, Field

from app.config import resolve_brute_force_degree
from modules.group_engine import (
    GroupAutomorphism,
    PermGroup,
    are_conjugate_subgroups,
    automorphism_from_images,
    coset_action,
    generate,
    is_class_preserving,
    point_stabilizer,
    subgroup_generated,
)
from modules.nielsen import BranchTuple, TupleReport, genus, is_polynomial_tuple
from modules.perm_core import Perm
from modules.schinzel import (
    CharSchinzelReport,
    PairSetup,
    VerdictReport,
    build_ext_group,
    caz_outside_symmetric,
    charschinzel_check,
    is_newly_reducible,
)
from utils.exceptions import CatalogParameterError, InvariantViolationError, MalformedTupleError

logger = logging.getLogger(__name__)


# ============================================
# Affine Elements
# ============================================

@dataclass(frozen=True, order=True)
class AffineElem:
    """The matrix (a b; 0 1) over Z/n, acting by x -> ax + b."""

    modulus: int
    a: int
    b: int

    def __post_init__(self):
        if self.modulus < 1:
            raise CatalogParameterError("modulus must be positive", "modulus", self.modulus)
        object.__setattr__(self, "a", self.a % self.modulus)
        object.__setattr__(self, "b", self.b % self.modulus)
        if gcd(self.a, self.modulus) != 1:
            raise CatalogParameterError(f"{self.a} is not a unit mod {self.modulus}", "a", self.a)

    def __mul__(self, other: AffineElem) -> AffineElem:
        """Matrix product: (a', b')(a, b) = (a'a, a'b + b')."""
        if other.modulus != self.modulus:
            raise CatalogParameterError("moduli differ", "modulus", other.modulus)
        return AffineElem(self.modulus, self.a * other.a, self.a * other.b + self.b)

    def inverse(self) -> AffineElem:
        a_inv = pow(self.a, -1, self.modulus)
        return AffineElem(self.modulus, a_inv, -a_inv * self.b)

    def __call__(self, x: int) -> int:
        return (self.a * x + self.b) % self.modulus

    def to_perm(self) -> Perm:
        n = self.modulus
        return Perm(tuple((self(k) or n) for k in range(1, n + 1)))

    def to_json(self) -> dict:
        return {"n": self.modulus, "a": self.a, "b": self.b}

    def __str__(self) -> str:
        a = self.a if self.a <= self.modulus // 2 else self.a - self.modulus
        return f"({a},{self.b})"


@dataclass(frozen=True, eq=False)
class AffineGroup:
    """A_n(A) as a permutation group together with its affine labels."""

    modulus: int
    units: Tuple[int, ...]
    group: PermGroup
    labels: Dict[Perm, AffineElem]

    def label(self, p: Perm) -> AffineElem:
        return self.labels[p]

    def perm(self, a: int, b: int) -> Perm:
        return AffineElem(self.modulus, a, b).to_perm()

    @property
    def order(self) -> int:
        return self.group.order


# ============================================
# Report Models
# ============================================

class DihedralDossier(BaseModel):
    """Everything the catalog knows about the Chebyshev data of one even degree."""
    n: int = Field(..., description="Even degree")
    group_order: int = Field(..., description="|D_n| = 2n")
    tuple: TupleReport = Field(..., description="Chebyshev branch cycles (sigma1, sigma2, sigma_inf)")
    affine_labels: List[dict] = Field(..., description="Affine (n, a, b) of each entry")
    indices: List[int] = Field(..., description="ind of each entry")
    genus: int = Field(..., description="Genus of the cover")
    polynomial: bool = Field(..., description="Genus 0 with an n-cycle over infinity")
    galois_closure_genus: int = Field(..., description="Genus of the Galois closure")
    modular_galois_closure_genus: int = Field(..., description="Galois closure genus of the modular example")
    classes: Dict[str, str] = Field(..., description="Class label -> affine class name")
    caz_class_permutation: Dict[str, str] = Field(..., description="How c_AZ permutes the class names")
    verdict: VerdictReport = Field(..., description="Reducibility of f(x) + f(y)")
    ext_group_order: int = Field(..., description="|G*|")
    sigma_star_order: int = Field(..., description="Order of sigma*_inf")
    caz_outside_symmetric: Optional[bool] = Field(
        default=None, description="No element of S_n realizes c_AZ (None above the brute-force degree)"
    )
    charschinzel: CharSchinzelReport = Field(..., description="Shared Galois closure criterion, v = 2")


# ============================================
# Constructors
# ============================================

def affine_group(n: int, units: Iterable[int]) -> AffineGroup:
    """
    Z/n x| A acting on letters 1..n.

    Raises:
        CatalogParameterError: n < 2, a non-unit in A, or A not closed
    """
    if n < 2:
        raise CatalogParameterError(f"n must be >= 2, got {n}", "n", n)
    A = sorted({u % n for u in units} | {1})
    for u in A:
        if gcd(u, n) != 1:
            raise CatalogParameterError(f"{u} is not a unit mod {n}", "A", u)
    for u in A:
        for w in A:
            if (u * w) % n not in A:
                raise CatalogParameterError(f"A is not closed: {u} * {w} = {(u * w) % n}", "A", A)

    gens = [AffineElem(n, 1, 1).to_perm()] + [AffineElem(n, u, 0).to_perm() for u in A if u != 1]
    G = generate(gens)
    labels = {AffineElem(n, a, b).to_perm(): AffineElem(n, a, b) for a in A for b in range(n)}
    if len(labels) != G.order or set(labels) != G.element_set:
        raise InvariantViolationError("affine labels do not match the generated group", "affine_group")
    return AffineGroup(modulus=n, units=tuple(A), group=G, labels=labels)


@lru_cache(maxsize=32)
def dihedral_group(n: int) -> AffineGroup:
    """D_n = A_n({+-1})."""
    if n < 3:
        raise CatalogParameterError(f"D_n needs n >= 3, got {n}", "n", n)
    return affine_group(n, (1, n - 1))


def _require_even(n: int, operation: str) -> None:
    if n % 2 or n < 4:
        raise CatalogParameterError(f"{operation} needs even n >= 4, got {n}", "n", n)


def cheby_affine(n: int) -> Tuple[AffineElem, AffineElem, AffineElem]:
    """sigma1 = (-1, 1), sigma2 = (-1, 0), sigma_inf = (1, -1)."""
    return AffineElem(n, -1, 1), AffineElem(n, -1, 0), AffineElem(n, 1, -1)


def cheby_tuple(n: int) -> BranchTuple:
    """
    Branch cycles of the Chebyshev polynomial T_n, infinity last.

    Raises:
        CatalogParameterError: n odd or < 4
    """
    _require_even(n, "cheby_tuple")
    return BranchTuple(n, tuple(x.to_perm() for x in cheby_affine(n)), 3)


def caz_dihedral(n: int) -> GroupAutomorphism:
    """c_AZ on D_n: rotations fixed, (-1, b) -> (-1, b - 1)."""
    _require_even(n, "caz_dihedral")
    D = dihedral_group(n)
    images = []
    for s in D.group.generators:
        x = D.label(s)
        images.append(x.to_perm() if x.a == 1 else AffineElem(n, x.a, x.b - 1).to_perm())
    return automorphism_from_images(D.group, images)


def modular_tuple(n: int) -> BranchTuple:
    """(sigma1, sigma2, sigma2, sigma1): four branch points, no n-cycle."""
    _require_even(n, "modular_tuple")
    s1, s2, _ = cheby_affine(n)
    t = BranchTuple(n, (s1.to_perm(), s2.to_perm(), s2.to_perm(), s1.to_perm()))
    if not t.is_product_one():
        raise InvariantViolationError("modular tuple fails product-one", "modular_tuple")
    return t


def galois_closure_genus(t: BranchTuple, G: PermGroup) -> int:
    """Riemann-Hurwitz in the regular representation: ind(sigma) = |G| (1 - 1/ord(sigma))."""
    if any(p not in G for p in t.entries) or not t.is_product_one():
        raise MalformedTupleError("tuple is not a product-one tuple in G", "galois_closure")
    order = G.order
    total = sum(order - order // p.order() for p in t.entries)
    if total % 2:
        raise MalformedTupleError(f"Regular index sum {total} is odd", "riemann_hurwitz_parity")
    return total // 2 - order + 1


def odd_dihedral_conjugacy(n: int) -> bool:
    """Whether <(-1, 1)> and <(-1, 0)> are conjugate in D_n (so f and -f are equivalent)."""
    D = dihedral_group(n)
    G = D.group
    h1 = subgroup_generated(G, [D.perm(-1, 1)])
    h0 = subgroup_generated(G, [D.perm(-1, 0)])
    return are_conjugate_subgroups(G, h1, h0)


def affine_involutions(n: int, units: Iterable[int]) -> List[AffineElem]:
    """I_n(A) = {(a, b) : a^2 = 1, a != 1, b(a + 1) = 0}."""
    A = affine_group(n, units)
    result = [
        AffineElem(n, a, b)
        for a in A.units
        for b in range(n)
        if a != 1 and (a * a) % n == 1 and (b * (a + 1)) % n == 0
    ]
    return sorted(result)


def dihedral_class_names(n: int) -> Dict[str, str]:
    """Class label -> affine name: C_{1,b} for rotations, C_{-1,0} / C_{-1,1} for reflections."""
    D = dihedral_group(n)
    names = {}
    for c in D.group.classes:
        x = D.label(c.representative)
        if x.a == 1:
            b = min(x.b, n - x.b)
            names[c.label] = f"C_{{1,{b}}}"
        elif n % 2:
            names[c.label] = "C_{-1}"
        else:
            names[c.label] = f"C_{{-1,{x.b % 2}}}"
    return names


def dihedral_pair_setup(n: int) -> PairSetup:
    """
    (D_n, <(-1,0)>, h_g) with h_g the c_AZ-image <(-1,-1)> for even n.

    For odd n there is no gamma and both stabilizers are conjugate.
    """
    D = dihedral_group(n)
    G = D.group
    h_f = subgroup_generated(G, [D.perm(-1, 0)])
    h_g = subgroup_generated(G, [D.perm(-1, -1)])
    gamma = caz_dihedral(n) if n % 2 == 0 and n >= 4 else None
    return PairSetup(G, h_f, h_g, gamma)


def dihedral_dossier(n: int, brute_force_degree: Optional[int] = None) -> DihedralDossier:
    """Assemble the catalog facts for even n."""
    _require_even(n, "dihedral_dossier")
    D = dihedral_group(n)
    G = D.group
    t = cheby_tuple(n)
    gamma = caz_dihedral(n)
    setup = dihedral_pair_setup(n)
    names = dihedral_class_names(n)
    _, class_map = is_class_preserving(G, gamma)

    ext = build_ext_group(G, gamma, t.sigma_infinity, 2)
    bound = resolve_brute_force_degree(brute_force_degree)
    outside = None
    if n <= bound:
        natural = coset_action(G, point_stabilizer(G, 1))
        outside = caz_outside_symmetric(G, gamma, natural, brute_force_degree=bound)

    polynomial, _ = is_polynomial_tuple(t)
    return DihedralDossier(
        n=n,
        group_order=G.order,
        tuple=TupleReport.from_tuple(t),
        affine_labels=[D.label(p).to_json() for p in t.entries],
        indices=t.indices(),
        genus=genus(t),
        polynomial=polynomial,
        galois_closure_genus=galois_closure_genus(t, G),
        modular_galois_closure_genus=galois_closure_genus(modular_tuple(n), G),
        classes=names,
        caz_class_permutation={names[k]: names[v] for k, v in class_map.items()},
        verdict=VerdictReport.from_verdict(is_newly_reducible(setup)),
        ext_group_order=ext.order,
        sigma_star_order=ext.element_order(ext.sigma_star),
        caz_outside_symmetric=outside,
        charschinzel=charschinzel_check(G, None, t, gamma, 2),
    )
