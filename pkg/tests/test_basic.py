"""
Schinzel Lab Test Suite
Basic tests for imports, constants, configuration and error handling.
"""

import logging

import pytest


class TestImports:
    """Test that all modules can be imported."""

    def test_import_app_modules(self):
        """Test app module imports."""
        from app import config
        from app import constants
        from app import router
        assert config is not None
        assert constants is not None
        assert router is not None

    def test_import_core_modules(self):
        """The package namespace re-exports every module's public API."""
        import modules
        for name in ("Perm", "PermGroup", "BranchTuple", "PairSetup", "dihedral_group",
                     "WreathElem", "search_schinzel"):
            assert hasattr(modules, name)

    def test_import_utils(self):
        """Test utility imports."""
        from utils.logger import get_logger
        from utils.exceptions import SchinzelLabException
        assert get_logger is not None
        assert SchinzelLabException is not None


class TestConstants:
    """Application constants."""

    def test_app_constants(self):
        from app.constants import APP_NAME, APP_VERSION, RESULT_SCHEMA_VERSION
        assert APP_NAME == "Schinzel Lab"
        assert APP_VERSION
        assert RESULT_SCHEMA_VERSION

    def test_exit_codes(self):
        """Exit codes are distinct, 0 for success."""
        from app.constants import EXIT_BOUND_EXCEEDED, EXIT_INVARIANT_VIOLATION, EXIT_OK, EXIT_USAGE
        assert [EXIT_OK, EXIT_USAGE, EXIT_BOUND_EXCEEDED, EXIT_INVARIANT_VIOLATION] == [0, 1, 2, 3]

    def test_command_groups_cover_router(self):
        """Every routed command is listed in exactly one group."""
        from app.constants import COMMAND_GROUPS
        from app.router import CommandRouter
        listed = [c for commands in COMMAND_GROUPS.values() for c in commands]
        assert sorted(listed) == sorted(CommandRouter().routes)


class TestConfiguration:
    """pydantic-settings configuration."""

    def test_defaults(self):
        from app.config import get_settings
        from app.constants import DEFAULT_BRUTE_FORCE_DEGREE, DEFAULT_ORDER_BOUND
        settings = get_settings()
        assert settings.engine.order_bound == DEFAULT_ORDER_BOUND
        assert settings.engine.brute_force_degree == DEFAULT_BRUTE_FORCE_DEGREE

    def test_environment_override(self, monkeypatch):
        from app.config import get_engine_config, reset_settings, resolve_order_bound
        monkeypatch.setenv("SCHINZEL_ORDER_BOUND", "500")
        monkeypatch.setenv("SCHINZEL_BRUTE_FORCE_DEGREE", "6")
        reset_settings()
        assert resolve_order_bound() == 500
        assert resolve_order_bound(42) == 42
        assert get_engine_config() == {"order_bound": 500, "brute_force_degree": 6}

    def test_cache_dir_from_environment(self, isolated_cache):
        from app.config import get_settings
        assert get_settings().search.cache_dir == isolated_cache

    def test_degree_guard(self, monkeypatch):
        """A max degree above the guard is rejected at load time."""
        from pydantic import ValidationError
        from app.config import reset_settings
        monkeypatch.setenv("SCHINZEL_MAX_DEGREE", "20")
        with pytest.raises(ValidationError):
            reset_settings()


class TestExceptions:
    """Exception hierarchy and JSON error payloads."""

    @pytest.mark.parametrize("factory,exit_code,code", [
        (lambda e: e.OrderBoundExceededError(100, 120, "closure"), 2, "ORDER_BOUND_EXCEEDED"),
        (lambda e: e.BruteForceBoundError(9, 8, "normalizer"), 2, "BRUTE_FORCE_BOUND"),
        (lambda e: e.InvariantViolationError("broken", "x"), 3, "INVARIANT_VIOLATION"),
        (lambda e: e.MalformedTupleError("bad", "product_one"), 1, "TUPLE_MALFORMED"),
        (lambda e: e.CatalogParameterError("odd", "n", 5), 1, "CATALOG_PARAMETER"),
    ])
    def test_exit_codes(self, factory, exit_code, code):
        from utils import exceptions
        error = factory(exceptions)
        assert isinstance(error, exceptions.SchinzelLabException)
        assert error.exit_code == exit_code
        payload = exceptions.handle_exception(error)
        assert payload["error"] is True
        assert payload["code"] == code

    def test_unknown_exception(self):
        from utils.exceptions import handle_exception
        payload = handle_exception(KeyError("k"))
        assert payload["code"] == "UNKNOWN_ERROR"
        assert payload["details"]["type"] == "KeyError"


class TestLogging:
    """Logger setup."""

    def test_logger_writes_to_stderr(self):
        import sys
        from utils.logger import setup_logger
        logger = setup_logger("schinzel.test.stderr", level="DEBUG", use_colors=False)
        assert logger.level == logging.DEBUG
        assert logger.handlers[0].stream is sys.stderr

    def test_set_level(self):
        from utils.logger import set_level
        set_level("WARNING")
        assert logging.getLogger("modules").level == logging.WARNING
        set_level("INFO")

    def test_search_trail(self, caplog):
        from utils.logger import search_trail
        with caplog.at_level(logging.INFO, logger="search_trail"):
            search_trail.log_stage("degree_done", n=4, survivors=2)
            search_trail.log_bound_exceeded(6, "a" * 64, 100)
        assert "STAGE: degree_done" in caplog.text
        assert "order bound 100 exceeded" in caplog.text
