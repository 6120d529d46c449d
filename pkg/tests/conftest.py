"""
Pytest configuration for the Schinzel Lab test suite.
"""

import sys
from pathlib import Path

import pytest

# Add project root to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from app.config import reset_settings


@pytest.fixture(autouse=True)
def isolated_cache(tmp_path, monkeypatch):
    """Point the result cache at a per-test directory."""
    cache_dir = tmp_path / "cache"
    monkeypatch.setenv("SCHINZEL_CACHE_DIR", str(cache_dir))
    reset_settings()
    yield cache_dir
    monkeypatch.undo()
    reset_settings()


@pytest.fixture
def perm():
    """Shorthand: perm("(1 2)(3 4)", 4)."""
    from modules.perm_core import parse_perm

    return parse_perm
