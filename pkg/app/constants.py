"""
Application Constants for Schinzel Lab.
All hardcoded values should be defined here for easy maintenance.
"""

from typing import Dict, List


# ============================================
# Application Info
# ============================================
APP_NAME = "Schinzel Lab"
APP_VERSION = "1.0.0"
APP_TAGLINE = "Branch cycles, Nielsen classes and variables-separated reducibility."
APP_DESCRIPTION = """Library and command-line tool for the group-theoretic side of
Schinzel's problem for pairs (f, zeta_v f): permutation groups, Nielsen classes,
coset actions, extension and wreath groups, and desk-scale exhaustive search."""

# Version tag stored in every cache key; bump when verdict semantics change
RESULT_SCHEMA_VERSION = "1"


# ============================================
# Bounds and Defaults
# ============================================
DEFAULT_ORDER_BOUND = 100_000
DEFAULT_BRUTE_FORCE_DEGREE = 8
DEFAULT_MAX_DEGREE = 8
MAX_DEGREE_GUARD = 12
DEFAULT_CACHE_DIR = ".schinzel_cache"
DEFAULT_REPORTS_DIR = "reports"

# Acceptance range for the dihedral family checks
DIHEDRAL_DEGREES: List[int] = [4, 6, 8, 10, 12]


# ============================================
# Exit Codes
# ============================================
EXIT_OK = 0
EXIT_USAGE = 1
EXIT_BOUND_EXCEEDED = 2
EXIT_INVARIANT_VIOLATION = 3


# ============================================
# Verdicts
# ============================================
VERDICT_NEWLY_REDUCIBLE = "newly_reducible"
VERDICT_REDUCIBLE_COMPOSITE = "reducible_composite"
VERDICT_IRREDUCIBLE = "irreducible"


# ============================================
# CLI Commands
# ============================================
COMMAND_GROUPS: Dict[str, List[str]] = {
    "Catalog": ["dihedral", "compbranch"],
    "Nielsen classes": ["nielsen", "schinzel"],
    "Search": ["search", "classify", "conjecture"],
}

JSON_INDENT = 2
