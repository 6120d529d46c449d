"""
Tests for branch tuples, Nielsen classes and their equivalences.
"""

import pytest

from modules.dihedral_catalog import cheby_tuple, dihedral_group
from modules.nielsen import (
    BranchTuple,
    Equivalence,
    NielsenClassSpec,
    NielsenReport,
    are_inner_equivalent,
    branch_slot_map,
    conjugate_tuple,
    cyclic_tuple,
    enumerate_nielsen,
    equivalence_class_map,
    genus,
    inner_conjugator,
    is_polynomial_tuple,
    rotate_tuple,
    shift_tuple,
    verify_nielsen,
)
from modules.perm_core import n_cycle, parse_perm
from utils.exceptions import MalformedTupleError


def _cheby_spec(n, equivalence=Equivalence.ABSOLUTE):
    G = dihedral_group(n).group
    t = cheby_tuple(n)
    labels = tuple(G.class_of(p).label for p in t.entries)
    return NielsenClassSpec(G, labels, equivalence)


class TestBranchTuple:
    """Construction, genus and polynomial detection."""

    def test_needs_two_entries(self):
        """r >= 2."""
        with pytest.raises(MalformedTupleError):
            BranchTuple(3, (n_cycle(3),))

    def test_infinity_slot_range(self):
        """The infinity slot is 1-based and in range."""
        with pytest.raises(MalformedTupleError):
            BranchTuple(3, (n_cycle(3), n_cycle(3).inverse()), 3)

    @pytest.mark.parametrize("n", [4, 6, 8, 10, 12])
    def test_chebyshev_genus(self, n):
        """Indices (n/2, n/2 - 1, n - 1) and genus 0."""
        t = cheby_tuple(n)
        assert t.indices() == [n // 2, n // 2 - 1, n - 1]
        assert genus(t) == 0
        assert is_polynomial_tuple(t) == (True, 3)

    def test_cyclic_tuple(self):
        """(c, c^-1) is a genus-0 polynomial tuple."""
        t = cyclic_tuple(5)
        assert t.is_product_one()
        assert genus(t) == 0
        assert is_polynomial_tuple(t)[0]

    def test_odd_index_sum(self):
        """An odd index sum violates Riemann-Hurwitz parity."""
        t = BranchTuple(3, (parse_perm("(1 2)", 3), parse_perm("(1 2)", 3), parse_perm("(1 2)", 3)))
        with pytest.raises(MalformedTupleError):
            genus(t)

    def test_not_polynomial(self):
        """Four transpositions in S_3 have genus 0 but no 3-cycle."""
        t = BranchTuple(3, tuple(parse_perm(x, 3) for x in ("(1 2)", "(1 2)", "(2 3)", "(2 3)")))
        assert t.is_product_one()
        assert is_polynomial_tuple(t) == (False, None)

    def test_json_roundtrip(self):
        """to_json / from_json keep the infinity slot."""
        t = cheby_tuple(6)
        assert BranchTuple.from_json(t.to_json()) == t


class TestVerifyNielsen:
    """The three tuple conditions."""

    def test_chebyshev_in_class(self):
        """The Chebyshev tuple lies in its own Nielsen class."""
        spec = _cheby_spec(4)
        assert verify_nielsen(cheby_tuple(4), spec.group, spec)

    def test_product_one_failure(self):
        """A broken product is diagnosed."""
        spec = _cheby_spec(4)
        t = cheby_tuple(4)
        broken = BranchTuple(4, (t[0], t[0], t[2]))
        check = verify_nielsen(broken, spec.group, spec)
        assert not check
        assert check.failed == "product_one"

    def test_generation_failure(self):
        """A tuple generating a proper subgroup is diagnosed."""
        spec = _cheby_spec(4)
        c = n_cycle(4)
        check = verify_nielsen(BranchTuple(4, (c, c.inverse())), spec.group, spec)
        assert check.failed == "generation"

    def test_unknown_label(self):
        """Class labels must name classes of G."""
        G = dihedral_group(4).group
        with pytest.raises(MalformedTupleError):
            NielsenClassSpec(G, ("nope",))


class TestEnumeration:
    """Absolute and inner Nielsen classes."""

    @pytest.mark.parametrize("n", [4, 6, 8])
    def test_dihedral_absolute_count(self, n):
        """Six absolute classes for the Chebyshev data."""
        result = enumerate_nielsen(_cheby_spec(n))
        assert result.count == 6
        assert not result.normalizer_fallback

    def test_representatives_are_canonical(self):
        """Representatives are sorted and each is verified."""
        spec = _cheby_spec(4)
        result = enumerate_nielsen(spec)
        keys = [t.key() for t in result.representatives]
        assert keys == sorted(keys)
        assert all(verify_nielsen(t, spec.group, spec) for t in result.representatives)

    def test_inner_refines_absolute(self):
        """psi: inner -> absolute is surjective."""
        mapping = equivalence_class_map(
            _cheby_spec(4, Equivalence.INNER), _cheby_spec(4, Equivalence.ABSOLUTE)
        )
        assert mapping.is_surjective
        assert mapping.inner.count >= mapping.absolute.count
        assert sum(mapping.fiber_sizes) == mapping.inner.count

    def test_ordered_enumeration(self):
        """Fixing the slot order keeps every slot in its class."""
        spec = _cheby_spec(4)
        ordered = enumerate_nielsen(spec, ordered=True)
        assert 1 <= ordered.count <= 6
        for t in ordered.representatives:
            labels = tuple(spec.group.class_of(p).label for p in t.entries)
            assert labels == spec.classes

    def test_report(self):
        """The JSON report carries count and representatives."""
        report = NielsenReport.from_enumeration(enumerate_nielsen(_cheby_spec(4)))
        assert report.count == 6
        assert len(report.representatives) == 6
        assert report.equivalence == Equivalence.ABSOLUTE


class TestRotation:
    """The rotation of finite branch points and slot maps."""

    def test_rotation_formula(self):
        """(sigma2, sigma1, sigma1^-1 sigma3 sigma1)."""
        t = cheby_tuple(4)
        rotated = rotate_tuple(t)
        assert rotated.entries[:2] == (t[1], t[0])
        assert rotated[2] == t[2].conjugate(t[0].inverse())
        assert rotated.is_product_one()

    @pytest.mark.parametrize("n", [4, 6, 8])
    def test_rotation_order(self, n):
        """r - 1 rotations give back every enumerated tuple with sigma_inf last."""
        spec = _cheby_spec(n)
        for t in enumerate_nielsen(spec).representatives:
            if not t[-1].is_n_cycle():
                continue
            t = t.with_infinity_slot(t.r)
            s = t
            for _ in range(t.r - 1):
                s = rotate_tuple(s)
            assert s == t

    def test_rotation_needs_three_entries(self):
        """rotate_tuple rejects r = 2."""
        with pytest.raises(MalformedTupleError):
            rotate_tuple(cyclic_tuple(4))

    def test_shift_keeps_product_one(self):
        """A cyclic shift of a product-one tuple is product-one."""
        t = cheby_tuple(6)
        s = shift_tuple(t, 1)
        assert s.is_product_one()
        assert s.infinity_slot == 2

    def test_slot_map(self):
        """One orbit of size v for r - 1 = v."""
        m = branch_slot_map(3, 2)
        assert m.one_orbit
        assert m.slot_permutation == parse_perm("(1 2)", 2)
        with pytest.raises(MalformedTupleError):
            branch_slot_map(4, 2, orbit_sizes=(3,))


class TestInnerEquivalence:
    """Conjugators between tuples."""

    def test_conjugator_found(self):
        """A conjugated tuple is inner-equivalent through the minimal conjugator."""
        G = dihedral_group(4).group
        t = cheby_tuple(4)
        g = parse_perm("(1 2 3 4)", 4)
        s = conjugate_tuple(t, g)
        found = inner_conjugator(t, s, G)
        assert found is not None
        assert conjugate_tuple(t, found) == s
        assert are_inner_equivalent(t, s, G)

    def test_not_equivalent_outside(self):
        """Conjugation by an element outside G may leave the inner class."""
        G = dihedral_group(4).group
        t = cheby_tuple(4)
        s = conjugate_tuple(t, parse_perm("(1 2)", 4))
        assert not are_inner_equivalent(t, s, G)
