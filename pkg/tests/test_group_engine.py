"""
Tests for group generation, classes, coset actions, blocks and automorphisms.
"""

import random

import pytest
from sympy.combinatorics import Permutation, PermutationGroup

from modules.group_engine import (
    UnionFind,
    all_subgroups,
    are_conjugate_subgroups,
    automorphism_from_images,
    automorphisms,
    block_systems,
    centralizer,
    coset_action,
    generate,
    group_from_json,
    inner_automorphism,
    intermediate_subgroups,
    is_class_preserving,
    is_normal,
    normalizer_in_symmetric,
    orbits_under,
    point_stabilizer,
    subgroup,
    subgroup_generated,
)
from modules.perm_core import Perm, n_cycle, parse_perm, symmetric_group
from utils.exceptions import (
    BruteForceBoundError,
    InvalidAutomorphismError,
    NotASubgroupError,
    OrderBoundExceededError,
)


@pytest.fixture
def s4():
    return generate([parse_perm("(1 2)", 4), n_cycle(4)])


@pytest.fixture
def d4():
    """Symmetries of the square 1-2-3-4."""
    return generate([n_cycle(4), parse_perm("(1 3)", 4)])


def _sympy_order(gens):
    return PermutationGroup([Permutation([x - 1 for x in g.images]) for g in gens]).order()


class TestGeneration:
    """Closure and the order bound."""

    def test_symmetric_groups(self, s4):
        """(1 2) and the n-cycle generate S_n."""
        assert s4.order == 24
        assert generate([parse_perm("(1 2)", 3), n_cycle(3)]).order == 6

    def test_dihedral(self, d4):
        """The square's symmetry group has order 8."""
        assert d4.order == 8
        assert d4.is_transitive()

    def test_order_bound(self):
        """Groups over the bound raise before enumeration."""
        with pytest.raises(OrderBoundExceededError) as excinfo:
            generate([parse_perm("(1 2)", 5), n_cycle(5)], order_bound=100)
        assert excinfo.value.exit_code == 2

    def test_trivial_group_needs_degree(self):
        """generate([]) works once the degree is known."""
        assert generate([], degree=3).order == 1

    def test_orders_match_sympy(self):
        """Closure orders agree with Schreier-Sims."""
        rng = random.Random(5)
        elements = list(symmetric_group(5))
        for _ in range(15):
            gens = rng.sample(elements, 2)
            assert generate(gens).order == _sympy_order(gens)

    def test_orbits(self):
        """Orbits of an intransitive group."""
        gens = [parse_perm("(1 2)", 5), parse_perm("(3 4 5)", 5)]
        assert orbits_under(gens, 5) == [[1, 2], [3, 4, 5]]

    def test_json_roundtrip(self, d4):
        """A group is rebuilt from its generators."""
        assert group_from_json(d4.to_json()) == d4


class TestClasses:
    """Conjugacy classes, centralizers, normality."""

    def test_s4_classes(self, s4):
        """S_4 has five classes; the identity class comes first."""
        sizes = sorted(c.size for c in s4.classes)
        assert sizes == [1, 3, 6, 6, 8]
        assert s4.classes[0].representative.is_identity

    def test_class_lookup(self, s4):
        """class_of and class_by_label agree."""
        c = s4.class_of(parse_perm("(2 3)", 4))
        assert s4.class_by_label(c.label) is c
        assert c.cycle_type == (2, 1, 1)

    def test_centralizer(self, s4):
        """The centralizer of a 4-cycle in S_4 is the cyclic group it generates."""
        assert centralizer(s4, n_cycle(4)).order == 4

    def test_normality(self, s4):
        """V_4 is normal in S_4, the 4-cycle's group is not."""
        v4 = subgroup_generated(s4, [parse_perm("(1 2)(3 4)", 4), parse_perm("(1 3)(2 4)", 4)])
        assert v4.order == 4
        assert is_normal(s4, v4)
        assert not is_normal(s4, subgroup_generated(s4, [n_cycle(4)]))

    def test_conjugate_subgroups(self, d4):
        """Vertex and edge reflections are not conjugate in D_4."""
        vertex = subgroup_generated(d4, [parse_perm("(1 3)", 4)])
        other_vertex = subgroup_generated(d4, [parse_perm("(2 4)", 4)])
        edge = subgroup_generated(d4, [parse_perm("(1 2)(3 4)", 4)])
        assert are_conjugate_subgroups(d4, vertex, other_vertex)
        assert not are_conjugate_subgroups(d4, vertex, edge)

    def test_subgroup_membership(self, d4):
        """Elements outside the parent are rejected."""
        with pytest.raises(NotASubgroupError):
            subgroup(d4, [parse_perm("(1 2)", 4)])


class TestCosetActions:
    """Coset actions and block systems."""

    def test_natural_action(self, s4):
        """S_4 on the cosets of a point stabilizer is faithful of degree 4."""
        action = coset_action(s4, point_stabilizer(s4, 1))
        assert action.degree == 4
        assert action.is_faithful
        assert action.image_group().order == 24

    def test_homomorphism(self, d4):
        """The coset action respects products."""
        action = coset_action(d4, subgroup_generated(d4, [parse_perm("(1 3)", 4)]))
        for x in d4:
            for y in d4:
                assert action(x * y) == action(x) * action(y)

    def test_primitive_has_no_intermediates(self, s4):
        """S_4 is primitive on 4 letters."""
        assert intermediate_subgroups(s4, point_stabilizer(s4, 1)) == []

    def test_dihedral_diagonals(self, d4):
        """D_4 has one intermediate level: the stabilizer of a diagonal."""
        levels = intermediate_subgroups(d4, point_stabilizer(d4, 1))
        assert [K.order for K in levels] == [4]
        assert parse_perm("(1 3)(2 4)", 4) in levels[0]

    def test_regular_cyclic_blocks(self):
        """C_6 acting regularly has blocks of sizes 2 and 3 through 1."""
        c6 = generate([n_cycle(6)])
        trivial = generate([], degree=6)
        action = coset_action(c6, subgroup(c6, trivial.elements))
        assert sorted(len(b) for b in block_systems(action)) == [2, 3]

    def test_union_find(self):
        """Union-find merges classes."""
        uf = UnionFind(range(1, 6))
        assert uf.union(1, 2)
        assert uf.union(2, 3)
        assert not uf.union(1, 3)
        assert uf.members(3) == frozenset({1, 2, 3})


class TestNormalizers:
    """Normalizers in S_n."""

    def test_normalizer_of_cyclic(self):
        """The normalizer of <(1 2 3 4)> in S_4 is D_4."""
        c4 = generate([n_cycle(4)])
        assert normalizer_in_symmetric(c4).order == 8

    def test_brute_force_bound(self):
        """Degrees above the brute-force bound raise."""
        with pytest.raises(BruteForceBoundError):
            normalizer_in_symmetric(generate([n_cycle(9)]), brute_force_degree=8)


class TestAutomorphisms:
    """Automorphisms from generator images."""

    def test_inner(self, d4):
        """Inner automorphisms are recognized as such."""
        g = parse_perm("(1 3)", 4)
        gamma = inner_automorphism(d4, g)
        assert gamma.equals_inner(g)
        assert gamma.power(2).is_identity

    def test_invalid_images(self, d4):
        """Images that do not extend raise."""
        with pytest.raises(InvalidAutomorphismError):
            automorphism_from_images(d4, [n_cycle(4), n_cycle(4)])

    def test_inverse_and_then(self, d4):
        """gamma then gamma^-1 is the identity."""
        gamma = automorphism_from_images(d4, [n_cycle(4), parse_perm("(1 2)(3 4)", 4)])
        assert gamma.then(gamma.inverse()).is_identity
        assert gamma.power(-1) == gamma.inverse()

    def test_counts(self, d4):
        """|Aut(S_3)| = 6, |Aut(D_4)| = 8, four of them class-preserving."""
        s3 = generate([parse_perm("(1 2)", 3), n_cycle(3)])
        assert len(automorphisms(s3)) == 6
        assert len(automorphisms(d4)) == 8
        preserving = automorphisms(d4, class_preserving_only=True)
        assert len(preserving) == 4
        assert all(is_class_preserving(d4, gamma)[0] for gamma in preserving)

    def test_outer_swaps_reflection_classes(self, d4):
        """The non-inner automorphisms of D_4 swap the two reflection classes."""
        outer = [
            gamma for gamma in automorphisms(d4)
            if not any(gamma.equals_inner(g) for g in d4)
        ]
        assert len(outer) == 4
        for gamma in outer:
            preserving, mapping = is_class_preserving(d4, gamma)
            assert not preserving
            vertex = d4.class_of(parse_perm("(1 3)", 4)).label
            edge = d4.class_of(parse_perm("(1 2)(3 4)", 4)).label
            assert mapping[vertex] == edge

    def test_transport(self, d4):
        """conjugated_by moves gamma to the conjugate group."""
        gamma = automorphism_from_images(d4, [n_cycle(4), parse_perm("(1 2)(3 4)", 4)])
        g = parse_perm("(1 2)", 4)
        moved = gamma.conjugated_by(g)
        for x in d4:
            assert moved(x.conjugate(g)) == gamma(x).conjugate(g)


class TestSubgroupLattice:
    """Subgroup enumeration."""

    def test_counts(self, d4):
        """S_3 has 6 subgroups, D_4 has 10."""
        s3 = generate([parse_perm("(1 2)", 3), n_cycle(3)])
        assert len(all_subgroups(s3)) == 6
        assert len(all_subgroups(d4)) == 10

    @pytest.mark.parametrize("name", ["s4", "d4", "d6", "agl15"])
    def test_intermediate_matches_lattice(self, name, s4, d4):
        """Block systems give exactly the subgroups strictly between H and G."""
        G = {
            "s4": s4,
            "d4": d4,
            "d6": generate([n_cycle(6), parse_perm("(2 6)(3 5)", 6)]),
            "agl15": generate([n_cycle(5), parse_perm("(2 3 5 4)", 5)]),
        }[name]
        lattice = all_subgroups(G)
        for H in lattice:
            if H.order == G.order:
                continue
            expected = {
                K.element_set for K in lattice
                if H.element_set < K.element_set < G.element_set
            }
            assert {K.element_set for K in intermediate_subgroups(G, H)} == expected
