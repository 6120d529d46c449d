"""
Cache Service
Content-addressed JSON cache for per-candidate verdicts
"""

import hashlib
import json
import os
import tempfile
from pathlib import Path
from typing import Any, Callable, Dict, Optional
import logging

from app.config import get_settings
from app.constants import RESULT_SCHEMA_VERSION
from utils.exceptions import CacheError

logger = logging.getLogger(__name__)


def stable_dumps(obj: Any) -> str:
    """Canonical JSON: sorted keys, no whitespace."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def cache_key(tool: str, inputs: Dict[str, Any], version: str = RESULT_SCHEMA_VERSION) -> str:
    """sha256 of the canonical JSON of (tool, version, inputs)."""
    blob = stable_dumps({"tool": tool, "version": version, "inputs": inputs})
    return hashlib.sha256(blob.encode()).hexdigest()


class ResultCache:
    """JSON files named by key, sharded by the first two hex digits"""

    def __init__(self, root: Path, enabled: bool = True):
        self.root = Path(root)
        self.enabled = enabled
        self.hits = 0
        self.misses = 0

    def _path(self, key: str) -> Path:
        return self.root / key[:2] / f"{key}.json"

    def read(self, key: str) -> Optional[Any]:
        if not self.enabled:
            return None
        path = self._path(key)
        if not path.exists():
            return None
        try:
            return json.loads(path.read_text())
        except (OSError, json.JSONDecodeError) as e:
            logger.warning(f"Ignoring unreadable cache entry {path}: {e}")
            return None

    def write(self, key: str, data: Any) -> None:
        if not self.enabled:
            return
        path = self._path(key)
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            fd, tmp = tempfile.mkstemp(dir=path.parent, suffix=".tmp")
            with os.fdopen(fd, "w") as handle:
                handle.write(stable_dumps(data))
            os.replace(tmp, path)
        except OSError as e:
            raise CacheError(f"Cannot write cache entry: {e}", str(path)) from e

    def get_or_compute(self, key: str, compute: Callable[[], Any]) -> Any:
        """Cached value for key, computing and storing it on a miss."""
        cached = self.read(key)
        if cached is not None:
            self.hits += 1
            return cached
        self.misses += 1
        value = compute()
        self.write(key, value)
        return value

    def clear(self) -> int:
        """Delete every entry; returns the number removed."""
        removed = 0
        if self.root.exists():
            for path in self.root.glob("*/*.json"):
                path.unlink()
                removed += 1
        return removed

    def get_statistics(self) -> Dict[str, int]:
        return {"hits": self.hits, "misses": self.misses}


def get_result_cache(enabled: Optional[bool] = None) -> ResultCache:
    """Cache rooted at the configured directory"""
    search = get_settings().search
    return ResultCache(search.cache_dir, search.use_cache if enabled is None else enabled)


__all__ = [
    'stable_dumps',
    'cache_key',
    'ResultCache',
    'get_result_cache',
]
