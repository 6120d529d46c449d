"""
Schinzel Pair Search for Schinzel Lab.
Desk-scale exhaustive search for (G, C) giving pairs (f, zeta_v f).

Features:
- Genus-0 polynomial tuples with sigma_inf = (1 2 ... n)^-1 and r = v + 1 entries
- Deduplication by the centralizer of sigma_inf (absolute equivalence)
- Search for gamma fixing sigma_inf and carrying the tuple to its rotation
- Reducibility verdicts per candidate, cached by content
- Classification of classes with <sigma_inf> normal (cyclic / dihedral)
- Evidence for the conjecture that D_4 gives the only Schinzel pair

Output order is canonical (degree, then tuple) and does not depend on jobs.
"""

from __future__ import annotations

import logging
import time
from collections import Counter
from itertools import islice
from math import gcd
from multiprocessing import Pool
from pathlib import Path
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from pydantic import BaseModel, Field

from app.config import get_settings, resolve_order_bound
from app.constants import MAX_DEGREE_GUARD
from modules.group_engine import (
    GroupAutomorphism,
    PermGroup,
    automorphism_from_images,
    generate,
    is_normal,
    point_stabilizer,
    subgroup_generated,
)
from modules.nielsen import BranchTuple, TupleReport, genus, is_polynomial_tuple, rotate_tuple
from modules.perm_core import Perm, n_cycle, product, symmetric_group
from modules.schinzel import (
    CharSchinzelReport,
    PairSetup,
    Verdict,
    charschinzel_check,
    is_newly_reducible,
)
from services.cache_service import ResultCache, cache_key
from utils.exceptions import (
    CatalogParameterError,
    InvalidAutomorphismError,
    InvariantViolationError,
    MalformedTupleError,
    OrderBoundExceededError,
)
from utils.logger import search_trail

logger = logging.getLogger(__name__)


# ============================================
# Models
# ============================================

class SearchConfig(BaseModel):
    """Bounds and parallelism of one search run."""
    max_degree: int = Field(default=8, ge=1, le=MAX_DEGREE_GUARD, description="Largest degree n searched")
    min_degree: int = Field(default=2, ge=1, description="Smallest degree n searched")
    v: int = Field(default=2, ge=1, description="Rotation order; tuples have r = v + 1 entries")
    order_bound: Optional[int] = Field(default=None, ge=1, description="Group order bound (configured default if unset)")
    jobs: int = Field(default=1, ge=1, description="Worker processes")
    report_path: Optional[Path] = Field(default=None, description="Where the CLI writes the JSON report")
    use_cache: bool = Field(default=True, description="Reuse cached per-candidate verdicts")
    cache_dir: Optional[Path] = Field(default=None, description="Cache directory (configured default if unset)")


class CandidateReport(BaseModel):
    """Verdicts for one absolute class of polynomial tuples."""
    degree: int = Field(..., description="Degree n")
    key: str = Field(..., description="Content hash of (tuple, v, order bound)")
    tuple: TupleReport = Field(..., description="Canonical tuple, sigma_inf last")
    group: Optional[dict] = Field(default=None, description="Generated group {degree, generators, order}")
    group_description: str = Field(default="", description="Readable group summary")
    classes: List[str] = Field(default_factory=list, description="Class label of each entry in G")
    genus: int = Field(..., description="Genus of the cover")
    polynomial: bool = Field(..., description="Genus 0 with an n-cycle over infinity")
    normal_sigma_infinity: Optional[bool] = Field(default=None, description="<sigma_inf> is normal in G")
    gamma: Optional[List[List[int]]] = Field(default=None, description="Images of the entries under gamma")
    charschinzel: Optional[CharSchinzelReport] = Field(default=None, description="Shared Galois closure criterion")
    reducible: Optional[bool] = Field(default=None, description="f(x) - g(y) reducible")
    orbit_lengths: Optional[List[int]] = Field(default=None, description="Factor degrees")
    newly_reducible: Optional[bool] = Field(default=None, description="Newly reducible")
    verdict: Optional[Verdict] = Field(default=None, description="Three-way verdict")
    witness_order: Optional[int] = Field(default=None, description="Order of the blocking intermediate subgroup")
    survivor: bool = Field(default=False, description="gamma found and newly reducible")
    bound_exceeded: bool = Field(default=False, description="Group exceeded the order bound")
    timings: Dict[str, float] = Field(default_factory=dict, exclude=True, description="Seconds per stage")


class ClassificationEntry(BaseModel):
    tuple: TupleReport = Field(..., description="Canonical tuple")
    group_order: int = Field(..., description="|G|")
    kind: str = Field(..., description="cyclic, dihedral, or other")
    multipliers: List[Optional[int]] = Field(..., description="k with sigma_i sigma_inf sigma_i^-1 = sigma_inf^k")
    index_checks: List[Optional[bool]] = Field(..., description="ind(sigma_i) == mult_map_index(k); None without a fixed letter")


class ClassificationReport(BaseModel):
    """Genus-0 polynomial classes with <sigma_inf> normal, by isomorphism type."""
    n: int = Field(..., description="Degree")
    v: int = Field(..., description="Rotation order")
    total_candidates: int = Field(..., description="Classes enumerated")
    normal_count: int = Field(..., description="Classes with <sigma_inf> normal")
    kinds: Dict[str, int] = Field(default_factory=dict, description="Count per kind")
    entries: List[ClassificationEntry] = Field(default_factory=list, description="One entry per normal class")
    exceptions: List[ClassificationEntry] = Field(default_factory=list, description="Normal classes neither cyclic nor dihedral")


class ConjectureReport(BaseModel):
    """Evidence (not proof) for D_4 being the only source of Schinzel pairs (f, zeta_v f)."""
    max_n: int = Field(..., description="Largest degree searched")
    v: int = Field(..., description="Rotation order")
    candidates: int = Field(..., description="Classes examined")
    survivors: List[CandidateReport] = Field(default_factory=list, description="Newly reducible with gamma, <sigma_inf> normal")
    non_normal_candidates: List[CandidateReport] = Field(
        default_factory=list, description="Survivors where <sigma_inf> is not normal, for inspection"
    )
    unique_survivor_d4: bool = Field(..., description="Every survivor is D_4 in degree 4, and one exists")
    bound_exceeded: int = Field(default=0, description="Candidates skipped by the order bound")


# ============================================
# Criteria
# ============================================

def gusic_criterion(t: BranchTuple, G: PermGroup) -> bool:
    """
    True iff <sigma_inf> is normal in G.

    Raises:
        MalformedTupleError: the tuple has no sigma_inf slot
    """
    if t.infinity_slot is None:
        raise MalformedTupleError("gusic_criterion needs a sigma_inf slot", "infinity_slot")
    return is_normal(G, subgroup_generated(G, [t.sigma_infinity]))


def mult_map_index(k: int, n: int) -> int:
    """Index of x -> kx on Z/n."""
    if n < 1 or gcd(k, n) != 1:
        raise CatalogParameterError(f"{k} is not a unit mod {n}", "k", k)
    return Perm(tuple(((k * x) % n) or n for x in range(1, n + 1))).index()


# ============================================
# Candidate Enumeration
# ============================================

def standard_sigma_infinity(n: int) -> Perm:
    """(1 2 ... n)^-1."""
    return n_cycle(n).inverse()


def _is_canonical(entries: Sequence[Perm], powers: Sequence[Perm]) -> bool:
    key = tuple(x for p in entries for x in p.images)
    for g in powers[1:]:
        other = tuple(x for p in entries for x in p.conjugate(g).images)
        if other < key:
            return False
    return True


def _completions(
    n: int, v: int, head: Tuple[Perm, ...], budget: int, sigma_inf_inv: Perm, pool: Sequence[Perm]
) -> Iterator[Tuple[Perm, ...]]:
    # head fixes sigma_1..sigma_k; budget is the index still to distribute.
    remaining = v - len(head)
    if remaining == 1:
        last = product(head, n).inverse() * sigma_inf_inv if head else sigma_inf_inv
        if last.index() == budget and budget >= 1:
            yield head + (last,)
        return
    for p in pool:
        ind = p.index()
        if ind < 1 or budget - ind < remaining - 1:
            continue
        yield from _completions(n, v, head + (p,), budget - ind, sigma_inf_inv, pool)


def seeds_for_degree(n: int, v: int) -> List[Perm]:
    """Admissible first entries sigma_1 (each nontrivial, leaving index for the rest)."""
    budget = n - 1
    return [p for p in symmetric_group(n) if 1 <= p.index() <= budget - (v - 1)]


def enumerate_candidates(n: int, v: int, seeds: Optional[Sequence[Perm]] = None) -> List[BranchTuple]:
    """
    Genus-0 tuples (sigma_1, ..., sigma_v, sigma_inf) with sigma_inf = (1 ... n)^-1,
    every entry nontrivial, canonical under conjugation by powers of sigma_inf.
    """
    if v < 1 or n < 2:
        return []
    sigma_inf = standard_sigma_infinity(n)
    sigma_inf_inv = sigma_inf.inverse()
    powers = [sigma_inf ** k for k in range(n)]
    seeds = seeds_for_degree(n, v) if seeds is None else seeds
    budget = n - 1
    result = []
    if v == 1:
        # sigma_1 = sigma_inf^-1 is the only completion.
        if _is_canonical((sigma_inf_inv,), powers):
            result.append(BranchTuple(n, (sigma_inf_inv, sigma_inf), 2))
        return result
    pool = list(symmetric_group(n)) if v > 2 else []
    for seed in seeds:
        for finite in _completions(n, v, (seed,), budget - seed.index(), sigma_inf_inv, pool):
            if _is_canonical(finite, powers):
                result.append(BranchTuple(n, finite + (sigma_inf,), v + 1))
    return result


# ============================================
# Candidate Evaluation
# ============================================

def _word_orders_match(gens: Sequence[Perm], images: Sequence[Perm], length: int = 3) -> bool:
    words: List[Tuple[Perm, Perm]] = [(Perm.identity(gens[0].degree), Perm.identity(gens[0].degree))]
    for _ in range(length):
        nxt = []
        for x, y in words:
            for s, t in zip(gens, images):
                a, b = x * s, y * t
                if a.order() != b.order():
                    return False
                nxt.append((a, b))
        words = nxt
    return True


def find_gamma(
    G: PermGroup, t: BranchTuple, v: int
) -> Tuple[Optional[GroupAutomorphism], Optional[CharSchinzelReport]]:
    """
    gamma with gamma(t) = g rotate(t) g^-1 and gamma(sigma_inf) = sigma_inf.

    Such g lie in C_G(sigma_inf) * sigma_1. Returns the first gamma passing the
    full criterion, else (None, last report).
    """
    if t.r - 1 != v or t.r < 3:
        return None, None
    rotated = rotate_tuple(t)
    if any(p.order() != q.order() for p, q in zip(t.entries, rotated.entries)):
        return None, None
    sigma_inf = t.sigma_infinity
    first = t.entries[0]
    conjugators = sorted({z * first for z in G if z * sigma_inf == sigma_inf * z})

    last_report = None
    for g in conjugators:
        images = [q.conjugate(g) for q in rotated.entries]
        if not _word_orders_match(t.entries, images):
            continue
        try:
            gamma = automorphism_from_images(G, images, generators=t.entries)
        except InvalidAutomorphismError:
            continue
        report = charschinzel_check(G, None, t, gamma, v)
        last_report = report
        if report.passed:
            return gamma, report
    return None, last_report


def candidate_key(t: BranchTuple, v: int, order_bound: int) -> str:
    return cache_key("search_candidate", {"entries": t.to_json()["entries"], "v": v, "order_bound": order_bound})


def evaluate_candidate(t: BranchTuple, v: int, order_bound: Optional[int] = None) -> CandidateReport:
    """Run the verdict pipeline on one tuple (sigma_inf last)."""
    bound = resolve_order_bound(order_bound)
    key = candidate_key(t, v, bound)
    timings: Dict[str, float] = {}
    polynomial, _ = is_polynomial_tuple(t)
    report = CandidateReport(
        degree=t.degree,
        key=key,
        tuple=TupleReport.from_tuple(t),
        genus=genus(t),
        polynomial=polynomial,
    )

    started = time.perf_counter()
    try:
        G = generate(t.entries, order_bound=bound)
    except OrderBoundExceededError:
        search_trail.log_bound_exceeded(t.degree, key, bound)
        report.bound_exceeded = True
        return report
    timings["generate"] = time.perf_counter() - started
    report.group = G.to_json()
    report.group_description = G.describe()
    report.classes = [G.class_of(p).label for p in t.entries]
    report.normal_sigma_infinity = gusic_criterion(t, G)

    started = time.perf_counter()
    gamma, criterion = find_gamma(G, t, v)
    timings["gamma"] = time.perf_counter() - started
    report.charschinzel = criterion
    if gamma is not None:
        report.gamma = [gamma(p).to_json() for p in t.entries]
        started = time.perf_counter()
        h_f = point_stabilizer(G, 1)
        setup = PairSetup(G, h_f, gamma.image_of(h_f), gamma)
        verdict = is_newly_reducible(setup)
        timings["verdict"] = time.perf_counter() - started
        report.reducible = verdict.reducible
        report.orbit_lengths = list(verdict.orbit_lengths)
        report.newly_reducible = verdict.newly_reducible
        report.verdict = verdict.verdict
        report.witness_order = verdict.witness.order if verdict.witness is not None else None
        report.survivor = verdict.newly_reducible
    report.timings = timings
    search_trail.log_candidate(
        t.degree, key, report.verdict.value if report.verdict else "no_gamma", {"order": G.order}
    )
    return report


def replay_candidate(report: CandidateReport, v: int, order_bound: Optional[int] = None) -> CandidateReport:
    """Recompute a report from its stored tuple alone."""
    t = BranchTuple(
        report.tuple.degree,
        tuple(Perm.from_json(e) for e in report.tuple.entries),
        report.tuple.infinity_slot,
    )
    return evaluate_candidate(t, v, order_bound)


# ============================================
# Search Driver
# ============================================

def _search_chunk(args: Tuple[int, int, List[List[int]], int, Optional[str], bool]) -> List[CandidateReport]:
    n, v, seed_images, bound, cache_root, use_cache = args
    seeds = [Perm.from_json(s) for s in seed_images]
    cache = ResultCache(Path(cache_root), use_cache) if cache_root else None
    reports = []
    for t in enumerate_candidates(n, v, seeds):
        if cache is None:
            reports.append(evaluate_candidate(t, v, bound))
            continue
        key = candidate_key(t, v, bound)
        data = cache.get_or_compute(key, lambda t=t: evaluate_candidate(t, v, bound).model_dump(mode="json"))
        reports.append(CandidateReport.model_validate(data))
    return reports


def _chunks(items: Sequence, size: int) -> Iterator[List]:
    it = iter(items)
    while True:
        chunk = list(islice(it, size))
        if not chunk:
            return
        yield chunk


def search_schinzel(config: SearchConfig) -> List[CandidateReport]:
    """
    Every absolute class of genus-0 polynomial tuples with r = v + 1, degree
    min_degree..max_degree, with its verdicts. Sorted by (degree, tuple).
    """
    bound = resolve_order_bound(config.order_bound)
    cache_root = None
    if config.use_cache:
        cache_root = str(config.cache_dir or get_settings().search.cache_dir)

    search_trail.log_stage("search_start", max_degree=config.max_degree, v=config.v, jobs=config.jobs)
    reports: List[CandidateReport] = []
    for n in range(max(config.min_degree, 2), config.max_degree + 1):
        if config.v == 1:
            tasks = [(n, config.v, [], bound, cache_root, config.use_cache)]
        else:
            seeds = [s.to_json() for s in seeds_for_degree(n, config.v)]
            size = max(1, len(seeds) // (config.jobs * 4) + 1)
            tasks = [(n, config.v, chunk, bound, cache_root, config.use_cache) for chunk in _chunks(seeds, size)]
        if config.jobs > 1 and len(tasks) > 1:
            with Pool(config.jobs) as pool:
                results = pool.map(_search_chunk, tasks)
        else:
            results = [_search_chunk(task) for task in tasks]
        found = [r for chunk in results for r in chunk]
        search_trail.log_stage("degree_done", n=n, candidates=len(found), survivors=sum(r.survivor for r in found))
        reports.extend(found)

    reports.sort(key=lambda r: (r.degree, tuple(x for e in r.tuple.entries for x in e)))
    search_trail.log_stage("search_done", candidates=len(reports))
    return reports


# ============================================
# Classification and Conjecture
# ============================================

def _multiplier(sigma: Perm, sigma_inf: Perm) -> Optional[int]:
    conj = sigma_inf.conjugate(sigma)
    power = sigma_inf
    for k in range(1, sigma_inf.order() + 1):
        if power == conj:
            return k
        power = power * sigma_inf
    return None


def _kind(G: PermGroup, sigma_inf: Perm) -> str:
    n = sigma_inf.degree
    if G.order == n:
        return "cyclic"
    rotations = {sigma_inf ** k for k in range(n)}
    if G.order == 2 * n and all(x.order() == 2 for x in G if x not in rotations):
        return "dihedral"
    return "other"


def classify_normal_sigma_infty(
    n: int, v: int, order_bound: Optional[int] = None
) -> ClassificationReport:
    """
    Classify the polynomial classes with <sigma_inf> normal as cyclic or dihedral.

    Raises:
        InvariantViolationError: a branch cycle with a fixed letter has index
            different from that of x -> kx
    """
    bound = resolve_order_bound(order_bound)
    candidates = enumerate_candidates(n, v)
    entries = []
    for t in candidates:
        G = generate(t.entries, order_bound=bound)
        if not gusic_criterion(t, G):
            continue
        sigma_inf = t.sigma_infinity
        multipliers: List[Optional[int]] = []
        checks: List[Optional[bool]] = []
        for sigma in t.entries[:-1]:
            k = _multiplier(sigma, sigma_inf)
            multipliers.append(k)
            if k is None or not sigma.fixed_points():
                checks.append(None)
                continue
            ok = sigma.index() == mult_map_index(k, n)
            if not ok:
                raise InvariantViolationError(
                    f"ind({sigma}) = {sigma.index()} but x -> {k}x has index {mult_map_index(k, n)}",
                    "mult_map_index",
                )
            checks.append(ok)
        entries.append(
            ClassificationEntry(
                tuple=TupleReport.from_tuple(t),
                group_order=G.order,
                kind=_kind(G, sigma_inf),
                multipliers=multipliers,
                index_checks=checks,
            )
        )
    kinds = Counter(e.kind for e in entries)
    return ClassificationReport(
        n=n,
        v=v,
        total_candidates=len(candidates),
        normal_count=len(entries),
        kinds=dict(sorted(kinds.items())),
        entries=entries,
        exceptions=[e for e in entries if e.kind == "other"],
    )


def verify_gusic_conjecture(
    max_n: int,
    v: int,
    jobs: int = 1,
    order_bound: Optional[int] = None,
    use_cache: bool = True,
) -> ConjectureReport:
    """
    Search degrees up to max_n and report whether D_4 is the only newly
    reducible survivor with <sigma_inf> normal; survivors outside the
    normality criterion are listed separately.
    """
    config = SearchConfig(max_degree=max(max_n, 1), v=v, jobs=jobs, order_bound=order_bound, use_cache=use_cache)
    reports = search_schinzel(config) if max_n >= 2 else []
    survivors = [r for r in reports if r.survivor and r.normal_sigma_infinity]
    outside = [r for r in reports if r.survivor and not r.normal_sigma_infinity]
    unique = bool(survivors) and not outside and all(
        r.degree == 4 and r.group is not None and r.group["order"] == 8 for r in survivors
    )
    return ConjectureReport(
        max_n=max_n,
        v=v,
        candidates=len(reports),
        survivors=survivors,
        non_normal_candidates=outside,
        unique_survivor_d4=unique,
        bound_exceeded=sum(r.bound_exceeded for r in reports),
    )
