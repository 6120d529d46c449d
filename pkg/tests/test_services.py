"""
Tests for the result cache and report assembly.
"""

import io
import json

import pytest

from app.constants import RESULT_SCHEMA_VERSION
from modules.dihedral_catalog import cheby_tuple
from modules.search import evaluate_candidate
from services.cache_service import ResultCache, cache_key, get_result_cache, stable_dumps
from services.report_service import (
    CANDIDATE_COLUMNS,
    build_envelope,
    candidates_frame,
    dumps_report,
    survivor_summary,
    write_candidates_csv,
    write_report,
)
from utils.exceptions import CacheError


class TestCacheKeys:
    """Content addressing."""

    def test_key_ignores_dict_order(self):
        assert cache_key("t", {"a": 1, "b": [1, 2]}) == cache_key("t", {"b": [1, 2], "a": 1})

    def test_key_depends_on_version_and_tool(self):
        base = cache_key("search_candidate", {"v": 2})
        assert base != cache_key("schinzel", {"v": 2})
        assert base != cache_key("search_candidate", {"v": 2}, version=RESULT_SCHEMA_VERSION + "x")
        assert len(base) == 64

    def test_stable_dumps(self):
        assert stable_dumps({"b": 1, "a": [1, 2]}) == '{"a":[1,2],"b":1}'


class TestResultCache:
    """Files on disk."""

    def test_get_or_compute(self, tmp_path):
        cache = ResultCache(tmp_path)
        calls = []

        def compute():
            calls.append(1)
            return {"value": 7}

        key = cache_key("t", {"x": 1})
        assert cache.get_or_compute(key, compute) == {"value": 7}
        assert cache.get_or_compute(key, compute) == {"value": 7}
        assert len(calls) == 1
        assert cache.get_statistics() == {"hits": 1, "misses": 1}
        assert (tmp_path / key[:2] / f"{key}.json").exists()

    def test_disabled(self, tmp_path):
        cache = ResultCache(tmp_path, enabled=False)
        cache.write("ab" * 32, {"x": 1})
        assert cache.read("ab" * 32) is None
        assert not any(tmp_path.iterdir())

    def test_corrupt_entry_is_a_miss(self, tmp_path):
        cache = ResultCache(tmp_path)
        key = "cd" * 32
        path = tmp_path / key[:2] / f"{key}.json"
        path.parent.mkdir(parents=True)
        path.write_text("{not json")
        assert cache.read(key) is None

    def test_clear(self, tmp_path):
        cache = ResultCache(tmp_path)
        for i in range(3):
            cache.write(cache_key("t", {"i": i}), {"i": i})
        assert cache.clear() == 3
        assert cache.clear() == 0

    def test_unwritable_root(self, tmp_path):
        blocker = tmp_path / "file"
        blocker.write_text("")
        cache = ResultCache(blocker)
        with pytest.raises(CacheError):
            cache.write("ef" * 32, {"x": 1})

    def test_configured_root(self, isolated_cache):
        cache = get_result_cache()
        assert cache.root == isolated_cache
        assert cache.enabled
        assert not get_result_cache(enabled=False).enabled


class TestReports:
    """Envelopes, JSON text and CSV tables."""

    @pytest.fixture
    def reports(self):
        return [evaluate_candidate(cheby_tuple(4), 2), evaluate_candidate(cheby_tuple(6), 2)]

    def test_envelope(self, reports):
        envelope = build_envelope("search", reports)
        assert envelope["command"] == "search"
        assert envelope["schema_version"] == RESULT_SCHEMA_VERSION
        assert set(envelope["engine"]) == {"order_bound", "brute_force_degree"}
        assert envelope["result"][0]["degree"] == 4
        assert "timings" not in envelope["result"][0]

    def test_dumps_is_sorted_and_stable(self, reports):
        text = dumps_report(build_envelope("search", reports))
        assert text == dumps_report(json.loads(text))
        assert text.endswith("\n")
        assert text.index('"command"') < text.index('"engine"') < text.index('"result"')

    def test_write_to_stream_and_file(self, tmp_path):
        stream = io.StringIO()
        text = write_report({"a": 1}, stream=stream)
        assert stream.getvalue() == text
        path = tmp_path / "nested" / "report.json"
        write_report({"a": 1}, path=path)
        assert json.loads(path.read_text()) == {"a": 1}

    def test_candidates_frame(self, reports):
        df = candidates_frame(reports)
        assert list(df.columns) == CANDIDATE_COLUMNS
        assert df["survivor"].tolist() == [True, False]
        assert df.loc[0, "orbit_lengths"] == "2 2"

    def test_csv(self, reports, tmp_path):
        df = write_candidates_csv(reports, tmp_path / "out" / "c.csv")
        assert len(df) == 2
        assert (tmp_path / "out" / "c.csv").read_text().startswith("degree,")

    def test_summary(self, reports):
        summary = survivor_summary(reports)
        assert summary["candidates"] == 2
        assert summary["survivors"] == 1
        assert summary["by_degree"]["4"] == {"candidates": 1, "survivors": 1}
        assert survivor_summary([]) == {"candidates": 0, "survivors": 0, "by_degree": {}}
