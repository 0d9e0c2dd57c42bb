from __future__ import annotations

import sys
from pathlib import Path

import pytest

from hitstand import StrategyTable, VariantConfig, Visibility, build_strategy_table

sys.path.insert(0, str(Path(__file__).parent))

_TABLES: dict[VariantConfig, StrategyTable] = {}


def table_for(config: VariantConfig) -> StrategyTable:
    """Strategy tables are reused across tests; building one takes about a second."""
    if config not in _TABLES:
        _TABLES[config] = build_strategy_table(config)
    return _TABLES[config]


@pytest.fixture(scope="session")
def tables():
    return table_for


@pytest.fixture(params=list(Visibility), ids=lambda v: v.value)
def visibility(request) -> Visibility:
    return request.param


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import LINES
    except ImportError:
        return
    if LINES:
        terminalreporter.section("acceptance criteria")
        for n in sorted(LINES):
            terminalreporter.write_line(LINES[n])
