import sys
from pathlib import Path

import pytest


# Allow `import ecgraph` in tests without requiring an editable install.
ROOT = Path(__file__).resolve().parents[1]
SRC = ROOT / "src"
if str(SRC) not in sys.path:
    sys.path.insert(0, str(SRC))

from ecgraph.config.settings import get_settings  # noqa: E402
from ecgraph.core.cayley import build_graph  # noqa: E402
from ecgraph.state.schema import GraphParams  # noqa: E402


@pytest.fixture(autouse=True)
def _single_worker(monkeypatch):
    # In-process by default; tests that exercise the pool pass workers explicitly.
    monkeypatch.setenv("ECGRAPH_THREADS", "1")
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture(scope="session")
def g5():
    return build_graph(GraphParams(q=5, e=1))


@pytest.fixture(scope="session")
def g13():
    return build_graph(GraphParams(q=13, e=1))


@pytest.fixture(scope="session")
def g53():
    return build_graph(GraphParams(q=53, e=1))


@pytest.fixture(scope="session")
def g125():
    return build_graph(GraphParams(q=5, e=3))


@pytest.fixture(scope="session")
def g2197():
    return build_graph(GraphParams(q=13, e=3))
