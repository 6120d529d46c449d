"""
Pytest configuration for benchmark tests.

Fixtures and configuration for the desk-scale acceptance workloads.
"""

import os
import sys
from pathlib import Path

import pytest

# Add project root to path
sys.path.insert(0, str(Path(__file__).parent.parent.parent))


def pytest_addoption(parser):
    """Add custom command line options for benchmarks."""
    parser.addoption(
        "--max-search-degree",
        action="store",
        default=7,
        type=int,
        help="Largest degree for the search and conjecture workloads (default: 7)"
    )
    parser.addoption(
        "--search-jobs",
        action="store",
        default=1,
        type=int,
        help="Worker processes for the search workloads (default: 1)"
    )
    parser.addoption(
        "--search-time-limit",
        action="store",
        default=600.0,
        type=float,
        help="Maximum acceptable search time in seconds (default: 600)"
    )


@pytest.fixture
def max_search_degree(request):
    """Largest search degree from the command line or environment."""
    env_degree = os.getenv("BENCHMARK_MAX_DEGREE")
    return int(env_degree) if env_degree else request.config.getoption("--max-search-degree")


@pytest.fixture
def search_jobs(request):
    """Worker processes for search workloads."""
    return request.config.getoption("--search-jobs")


@pytest.fixture
def search_time_limit(request):
    """Time limit in seconds."""
    return request.config.getoption("--search-time-limit")
