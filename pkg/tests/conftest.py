import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
if str(ROOT / "src") not in sys.path:
    sys.path.insert(0, str(ROOT / "src"))

import json

import pytest

from budgeted_chores.config import get_settings
from budgeted_chores.validation import build_instance


@pytest.fixture()
def trace_instance():
    """Three chores and two agents with budget 5 (the greedy hand-trace instance)."""

    return build_instance([(3, 6), (2, 2), (4, 4)], budgets=[5, 5])


@pytest.fixture()
def write_json(tmp_path: Path):
    def _write(name: str, payload: dict) -> Path:
        path = tmp_path / name
        path.write_text(json.dumps(payload, indent=2))
        return path

    return _write


@pytest.fixture(autouse=True)
def fresh_settings():
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()
