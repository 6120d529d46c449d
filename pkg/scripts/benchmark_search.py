#!/usr/bin/env python3
"""
Search Benchmark Script for Schinzel Lab.

Times the desk-scale acceptance workloads to detect performance regressions.

Usage:
    python scripts/benchmark_search.py --max-n 7 --jobs 4
    python scripts/benchmark_search.py --max-n 6 --iterations 3 --output reports/search_benchmark.json
"""

import argparse
import json
import sys
import time
from dataclasses import dataclass, asdict
from datetime import datetime
from pathlib import Path
from statistics import mean, median
from typing import Callable, Dict, List, Optional

# Add project root to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from app.config import get_settings
from modules.dihedral_catalog import dihedral_dossier
from modules.search import SearchConfig, search_schinzel, verify_gusic_conjecture
from modules.wreath_ext import solve_comp_branch


@dataclass
class WorkloadSummary:
    """Timing statistics for one workload."""
    workload: str
    iterations: int
    min_seconds: float
    max_seconds: float
    mean_seconds: float
    median_seconds: float
    limit_seconds: float
    passed: bool


def build_workloads(max_n: int, jobs: int) -> Dict[str, tuple]:
    """name -> (callable, time limit in seconds)."""
    return {
        "dihedral_dossiers": (lambda: [dihedral_dossier(n) for n in (4, 6, 8)], 5.0),
        "comp_branch_n8": (lambda: solve_comp_branch(8, 2), 30.0),
        f"search_max_n{max_n}": (
            lambda: search_schinzel(SearchConfig(max_degree=max_n, v=2, jobs=jobs, use_cache=False)),
            600.0,
        ),
        f"conjecture_max_n{max_n}": (
            lambda: verify_gusic_conjecture(max_n, 2, jobs=jobs, use_cache=False),
            600.0,
        ),
    }


def run_workload(name: str, fn: Callable, limit: float, iterations: int, verbose: bool = True) -> WorkloadSummary:
    timings: List[float] = []
    for i in range(iterations):
        start = time.perf_counter()
        fn()
        timings.append(time.perf_counter() - start)
        if verbose:
            print(f"  {name} {i + 1}/{iterations}: {timings[-1]:.2f}s")
    return WorkloadSummary(
        workload=name,
        iterations=iterations,
        min_seconds=min(timings),
        max_seconds=max(timings),
        mean_seconds=mean(timings),
        median_seconds=median(timings),
        limit_seconds=limit,
        passed=max(timings) < limit,
    )


def save_results(summaries: List[WorkloadSummary], output_path: str):
    """Save benchmark results to JSON file."""
    output_file = Path(output_path)
    output_file.parent.mkdir(parents=True, exist_ok=True)
    results = {
        "benchmark_type": "search",
        "timestamp": datetime.now().isoformat(),
        "results": [asdict(s) for s in summaries],
    }
    with open(output_file, "w") as f:
        json.dump(results, f, indent=2)
    print(f"\nResults saved to: {output_file}")


def main(argv: Optional[List[str]] = None):
    parser = argparse.ArgumentParser(description="Benchmark Schinzel Lab search workloads")
    parser.add_argument("--max-n", type=int, default=6, help="Largest search degree (default: 6)")
    parser.add_argument("--jobs", "-j", type=int, default=1, help="Worker processes (default: 1)")
    parser.add_argument("--iterations", "-n", type=int, default=1, help="Runs per workload (default: 1)")
    parser.add_argument(
        "--output", "-o",
        type=str,
        default=None,
        help="Output file path for results (default: SCHINZEL_REPORTS_DIR/search_benchmark.json)",
    )
    parser.add_argument("--quiet", "-q", action="store_true", help="Suppress per-iteration output")
    args = parser.parse_args(argv)

    try:
        from dotenv import load_dotenv
        load_dotenv()
    except ImportError:
        pass

    print("Schinzel Lab Search Benchmark")
    summaries = []
    for name, (fn, limit) in build_workloads(args.max_n, args.jobs).items():
        summaries.append(run_workload(name, fn, limit, args.iterations, verbose=not args.quiet))

    print(f"\n{'=' * 60}")
    for s in summaries:
        print(f"  {s.workload}: max {s.max_seconds:.2f}s / limit {s.limit_seconds:.0f}s - {'PASS' if s.passed else 'FAIL'}")

    output = args.output or str(get_settings().search.reports_dir / "search_benchmark.json")
    save_results(summaries, output)
    sys.exit(0 if all(s.passed for s in summaries) else 1)


if __name__ == "__main__":
    main()
