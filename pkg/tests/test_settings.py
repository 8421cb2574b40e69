import os

from ecgraph.config.settings import get_settings
from ecgraph.utils.bitset import iter_indexes, lowest_index, make_bitset, rotate_left
from ecgraph.utils.parallel import resolve_workers, run_chunks


def test_settings_from_env(monkeypatch):
    monkeypatch.setenv("ECGRAPH_EC_BUDGET", "1234")
    monkeypatch.setenv("ECGRAPH_SEED", "9")
    get_settings.cache_clear()
    s = get_settings()
    assert s.ec_budget == 1234
    assert s.seed == 9
    assert s.threads == 1
    assert s.numerical_cap == 3000


def test_resolve_workers(monkeypatch):
    assert resolve_workers(3) == 3
    assert resolve_workers() == 1
    monkeypatch.setenv("ECGRAPH_THREADS", "0")
    get_settings.cache_clear()
    assert resolve_workers() == (os.cpu_count() or 1)
    assert resolve_workers(-1) == (os.cpu_count() or 1)


def test_run_chunks_stops_at_first_match():
    seen = []

    def fn(shared, task):
        seen.append(task)
        return task * shared

    out = run_chunks(fn, [1, 2, 3, 4, 5], shared=10, workers=1, stop_when=lambda r: r >= 30)
    assert out == [10, 20, 30]
    assert seen == [1, 2, 3]


def test_bitset_helpers():
    b = make_bitset([0, 3, 4])
    assert list(iter_indexes(b)) == [0, 3, 4]
    assert lowest_index(b) == 0
    assert lowest_index(0) == -1
    assert list(iter_indexes(rotate_left(b, 2, 5))) == [0, 1, 2]
    assert rotate_left(b, 5, 5) == b
