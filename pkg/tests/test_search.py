"""
Tests for the Schinzel pair search, classification and conjecture check.
"""

import pytest

from modules.dihedral_catalog import cheby_tuple, dihedral_group
from modules.nielsen import BranchTuple, genus
from modules.perm_core import Perm, n_cycle
from modules.search import (
    CandidateReport,
    SearchConfig,
    classify_normal_sigma_infty,
    enumerate_candidates,
    evaluate_candidate,
    find_gamma,
    gusic_criterion,
    mult_map_index,
    replay_candidate,
    search_schinzel,
    seeds_for_degree,
    standard_sigma_infinity,
    verify_gusic_conjecture,
)
from modules.schinzel import Verdict
from services.cache_service import ResultCache
from utils.exceptions import CatalogParameterError, MalformedTupleError

SIGMA_INF_4 = [4, 1, 2, 3]
# (s3, s2) and (s2, s1) for s_b: x -> b - x on Z/4
D4_SURVIVORS = {
    ((2, 1, 4, 3), (1, 4, 3, 2), tuple(SIGMA_INF_4)),
    ((1, 4, 3, 2), (4, 3, 2, 1), tuple(SIGMA_INF_4)),
}


def _entries(report: CandidateReport):
    return tuple(tuple(e) for e in report.tuple.entries)


class TestCriteria:
    """Normality of <sigma_inf> and multiplication-map indices."""

    @pytest.mark.parametrize("k,n,expected", [(1, 4, 0), (1, 7, 0), (3, 4, 1), (-1, 5, 2), (2, 5, 3)])
    def test_mult_map_index(self, k, n, expected):
        """ind(x -> kx) on Z/n."""
        assert mult_map_index(k, n) == expected

    def test_mult_map_non_unit(self):
        with pytest.raises(CatalogParameterError):
            mult_map_index(2, 4)

    def test_gusic_criterion_dihedral(self):
        """Rotations are normal in D_n."""
        t = cheby_tuple(6)
        assert gusic_criterion(t, dihedral_group(6).group)

    def test_gusic_criterion_needs_slot(self):
        t = cheby_tuple(4).with_infinity_slot(None)
        with pytest.raises(MalformedTupleError):
            gusic_criterion(t, dihedral_group(4).group)


class TestEnumeration:
    """Candidate tuples with the standard sigma_inf."""

    def test_standard_sigma_infinity(self):
        assert standard_sigma_infinity(4).to_json() == SIGMA_INF_4

    @pytest.mark.parametrize("n", [3, 4, 5])
    def test_candidates_are_polynomial(self, n):
        """Every candidate is genus 0, product-one, sigma_inf last and nontrivial entries."""
        for t in enumerate_candidates(n, 2):
            assert t.is_product_one()
            assert genus(t) == 0
            assert t.infinity_slot == 3
            assert t.sigma_infinity == standard_sigma_infinity(n)
            assert all(not p.is_identity for p in t.entries)

    def test_canonical_under_rotation(self):
        """No two candidates are conjugate by a power of sigma_inf."""
        sigma_inf = standard_sigma_infinity(5)
        candidates = enumerate_candidates(5, 2)
        keys = {t.key() for t in candidates}
        for t in candidates:
            for k in range(1, 5):
                g = sigma_inf ** k
                other = BranchTuple(5, tuple(p.conjugate(g) for p in t.entries), 3)
                assert other.key() == t.key() or other.key() not in keys

    def test_v_one(self):
        """v = 1 leaves only (sigma_inf^-1, sigma_inf)."""
        candidates = enumerate_candidates(4, 1)
        assert len(candidates) == 1
        assert candidates[0].entries[0] == n_cycle(4)

    def test_seed_indices(self):
        """Seeds leave index for the remaining entries."""
        assert all(1 <= p.index() <= 2 for p in seeds_for_degree(4, 2))


class TestEvaluation:
    """The per-candidate verdict pipeline."""

    def test_chebyshev_candidate(self):
        """The degree-4 Chebyshev tuple survives."""
        report = evaluate_candidate(cheby_tuple(4), 2)
        assert report.polynomial
        assert report.normal_sigma_infinity
        assert report.gamma is not None
        assert report.charschinzel.passed
        assert report.verdict == Verdict.NEWLY_REDUCIBLE
        assert report.orbit_lengths == [2, 2]
        assert report.survivor

    def test_degree_six_composite(self):
        """A gamma exists for T_6 but the reducibility is composite."""
        report = evaluate_candidate(cheby_tuple(6), 2)
        assert report.gamma is not None
        assert report.verdict == Verdict.REDUCIBLE_COMPOSITE
        assert not report.survivor

    def test_find_gamma_needs_three_entries(self):
        c = n_cycle(4)
        t = BranchTuple(4, (c.inverse(), c), 2)
        assert find_gamma(dihedral_group(4).group, t, 1) == (None, None)

    def test_bound_exceeded(self):
        """Groups above the order bound are flagged, not evaluated."""
        # (1 2), (2 3 4), (1 4 3 2) generate S_4
        t = BranchTuple(4, (Perm((2, 1, 3, 4)), Perm((1, 3, 4, 2)), n_cycle(4).inverse()), 3)
        report = evaluate_candidate(t, 2, order_bound=2)
        assert report.bound_exceeded
        assert report.verdict is None
        assert not report.survivor

    def test_replay(self):
        """A stored report is reproduced from its tuple."""
        report = evaluate_candidate(cheby_tuple(4), 2)
        again = replay_candidate(report, 2)
        assert again.model_dump(mode="json") == report.model_dump(mode="json")

    def test_timings_not_serialized(self):
        report = evaluate_candidate(cheby_tuple(4), 2)
        assert report.timings
        assert "timings" not in report.model_dump(mode="json")


class TestSearch:
    """The search driver."""

    def test_degree_four_survivors(self):
        """Exactly the two D_4 classes survive in degree 4."""
        reports = search_schinzel(SearchConfig(max_degree=4, min_degree=4, use_cache=False))
        survivors = [r for r in reports if r.survivor]
        assert {_entries(r) for r in survivors} == D4_SURVIVORS
        assert all(r.group["order"] == 8 for r in survivors)
        assert all(r.newly_reducible for r in survivors)

    def test_sorted_output(self):
        reports = search_schinzel(SearchConfig(max_degree=5, use_cache=False))
        keys = [(r.degree, [x for e in r.tuple.entries for x in e]) for r in reports]
        assert keys == sorted(keys)
        assert {r.degree for r in reports} <= {2, 3, 4, 5}

    def test_jobs_do_not_change_results(self):
        """Parallel and serial runs give identical reports."""
        serial = search_schinzel(SearchConfig(max_degree=5, jobs=1, use_cache=False))
        parallel = search_schinzel(SearchConfig(max_degree=5, jobs=2, use_cache=False))
        assert [r.model_dump(mode="json") for r in serial] == [r.model_dump(mode="json") for r in parallel]

    def test_cache_reuse(self, isolated_cache):
        """A second run reads every candidate from the cache."""
        config = SearchConfig(max_degree=4, min_degree=4, use_cache=True, cache_dir=isolated_cache)
        first = search_schinzel(config)
        assert list(isolated_cache.glob("*/*.json"))
        second = search_schinzel(config)
        assert [r.model_dump(mode="json") for r in first] == [r.model_dump(mode="json") for r in second]
        entry = ResultCache(isolated_cache).read(first[0].key)
        assert entry["key"] == first[0].key

    def test_degree_guard(self):
        with pytest.raises(ValueError):
            SearchConfig(max_degree=13)


class TestClassification:
    """Classes with <sigma_inf> normal."""

    def test_degree_four(self):
        """Both normal classes in degree 4 are dihedral."""
        report = classify_normal_sigma_infty(4, 2)
        assert report.kinds == {"dihedral": 2}
        assert report.exceptions == []
        for entry in report.entries:
            assert entry.multipliers == [3, 3]

    @pytest.mark.parametrize("n", [5, 6])
    def test_only_cyclic_or_dihedral(self, n):
        report = classify_normal_sigma_infty(n, 2)
        assert set(report.kinds) <= {"cyclic", "dihedral"}
        assert report.exceptions == []
        assert report.normal_count <= report.total_candidates
        for entry in report.entries:
            assert all(check is not False for check in entry.index_checks)


class TestConjecture:
    """Evidence that D_4 gives the only pairs (f, zeta_v f)."""

    def test_up_to_degree_five(self):
        report = verify_gusic_conjecture(5, 2, use_cache=False)
        assert report.unique_survivor_d4
        assert {_entries(r) for r in report.survivors} == D4_SURVIVORS
        assert report.non_normal_candidates == []
        assert report.bound_exceeded == 0

    def test_no_survivor_below_four(self):
        report = verify_gusic_conjecture(3, 2, use_cache=False)
        assert report.survivors == []
        assert not report.unique_survivor_d4

    def test_degree_two_bound(self):
        report = verify_gusic_conjecture(2, 2, use_cache=False)
        assert report.survivors == []
        assert not report.unique_survivor_d4

    def test_cubic_rotation(self):
        """v = 3 in degree 4 has no survivor."""
        report = verify_gusic_conjecture(4, 3, use_cache=False)
        assert report.survivors == []
        assert not report.unique_survivor_d4
