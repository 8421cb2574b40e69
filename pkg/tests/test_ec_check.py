import numpy as np
import pytest
from pydantic import ValidationError

from ecgraph.core.cayley import build_graph
from ecgraph.core.ec_check import (
    brute_force_ec,
    char_sums,
    eq_main_value,
    extender,
    family,
    find_least_q1,
    forbidden_set,
    g_lower_bound,
    scan_cost,
    sufficient_certificate,
    sufficient_condition,
    verify_weil_bound,
)
from ecgraph.errors import BudgetExceededError
from ecgraph.state.schema import Counterexample, EcCertificate, GraphParams
from ecgraph.utils.bitset import iter_indexes


def _extenders(g, a, b):
    out = []
    for z in range(g.n):
        if z in a or z in b:
            continue
        if all((g.rows[v] >> z) & 1 for v in a) and not any((g.rows[v] >> z) & 1 for v in b):
            out.append(z)
    return out


def test_extender_examples(g5, g13):
    assert extender(g13, {0}, set()) == 1
    assert extender(g13, set(), {0}) == 2
    assert extender(g5, {0, 2}, set()) == 1
    assert extender(g5, {0, 1}, set()) is None


def test_extender_rejects_overlap(g13):
    with pytest.raises(ValueError, match="disjoint"):
        extender(g13, {0, 1}, {1})


def test_paley_5_is_1_ec_but_not_2_ec(g5):
    cert = brute_force_ec(g5, 1)
    assert cert.verified
    assert cert.method == "exhaustive"
    assert cert.witness_count_min == 2

    cert = brute_force_ec(g5, 2)
    assert not cert.verified
    assert cert.counterexample.A == [0, 1]
    assert cert.counterexample.B == []
    assert cert.witness_count_min == 0
    assert extender(g5, cert.counterexample.A, cert.counterexample.B) is None


def test_paley_13_is_2_ec(g13):
    cert = brute_force_ec(g13, 2)
    assert cert.verified
    assert cert.counterexample is None
    assert cert.witness_count_min >= 1
    assert cert.subsets_scanned == 12


def test_paley_53_is_3_ec(g53):
    cert = brute_force_ec(g53, 3)
    assert cert.verified
    assert cert.subsets_scanned == 52 * 51 // 2


def test_twins_break_2_ec_for_prime_powers(g2197):
    cert = brute_force_ec(g2197, 2)
    assert not cert.verified
    assert cert.counterexample.A == [0]
    assert cert.counterexample.B == [13]

    cert = brute_force_ec(g2197, 2, residue_distinct=True)
    assert cert.verified
    assert cert.residue_distinct
    assert cert.subsets_scanned == 2196 - 168


@pytest.mark.parametrize("fixture,t", [("g5", 2), ("g13", 2), ("g13", 3), ("g125", 2)])
def test_translation_scan_agrees_with_full_scan(request, fixture, t):
    g = request.getfixturevalue(fixture)
    fast = brute_force_ec(g, t)
    full = brute_force_ec(g, t, use_translation=False)
    assert fast.verified == full.verified
    assert fast.counterexample == full.counterexample
    assert fast.subsets_scanned <= full.subsets_scanned


@pytest.mark.parametrize("fixture,t", [("g53", 3), ("g2197", 2)])
def test_result_does_not_depend_on_workers(request, fixture, t):
    g = request.getfixturevalue(fixture)
    one = brute_force_ec(g, t, workers=1)
    two = brute_force_ec(g, t, workers=2)
    assert one.model_dump() == two.model_dump()


def test_budget_is_enforced(g13):
    assert scan_cost(13, 2) == 12 * 4
    assert scan_cost(13, 2, use_translation=False) == 78 * 4
    with pytest.raises(BudgetExceededError, match="budget"):
        brute_force_ec(g13, 2, budget=10)
    assert brute_force_ec(g13, 2, budget=10, force=True).verified


@pytest.mark.parametrize("t", [0, 13])
def test_t_out_of_range(g13, t):
    with pytest.raises(ValueError):
        brute_force_ec(g13, t)


@pytest.mark.parametrize(
    "q,e,t,expected",
    [(5, 1, 1, True), (5, 1, 2, False), (13, 1, 2, True), (5, 3, 2, False), (13, 3, 2, True), (41, 1, 3, False), (53, 1, 3, True)],
)
def test_sufficient_condition(q, e, t, expected):
    params = GraphParams(q=q, e=e)
    assert sufficient_condition(params, t) is expected
    assert (eq_main_value(params, t) > 0) is expected


def test_sufficient_certificate_scope():
    cert = sufficient_certificate(GraphParams(q=13, e=3), 2)
    assert cert.verified
    assert cert.method == "sufficient_condition"
    assert cert.residue_distinct
    assert not sufficient_certificate(GraphParams(q=13, e=1), 2).residue_distinct


@pytest.mark.parametrize("t,e,q", [(1, 1, 5), (2, 1, 13), (3, 1, 53), (1, 3, 5), (2, 3, 13)])
def test_find_least_q1(t, e, q):
    assert find_least_q1(t, e) == q


@pytest.mark.parametrize("t,e", [(0, 3), (2, 2), (2, 0)])
def test_find_least_q1_rejects_bad_input(t, e):
    with pytest.raises(ValueError):
        find_least_q1(t, e)


def test_family():
    assert [p.q for p in family(2, 3, 3)] == [13, 17, 29]
    assert all(p.e == 3 for p in family(2, 3, 3))
    with pytest.raises(ValueError):
        family(2, 3, 0)


def test_sufficient_condition_agrees_with_exhaustive_for_primes(g13, g53):
    # e = 1: the inequality is sound
    for g, t in ((g13, 2), (g53, 3)):
        assert sufficient_condition(g.params, t)
        assert brute_force_ec(g, t).verified


def test_forbidden_set_sizes(g125):
    assert len(forbidden_set(g125, {0}, set())) == 25
    assert len(forbidden_set(g125, {0}, {5})) == 25
    assert len(forbidden_set(g125, {0}, {1})) == 50
    assert forbidden_set(g125, {0}, set()) == frozenset(range(0, 125, 5))


def test_char_sums_identities(g125):
    rng = np.random.default_rng(2024)
    for _ in range(1000):
        t = int(rng.integers(1, 5))
        pts = [int(v) for v in rng.choice(g125.n, size=t, replace=False)]
        k = int(rng.integers(0, t + 1))
        a, b = pts[:k], pts[k:]
        rep = char_sums(g125, a, b)
        assert rep.t == t
        assert rep.f_value >= 0
        assert rep.g_value == rep.f_value + rep.h_value
        assert 0 <= rep.h_value <= t * 2 ** (t - 1)
        zs = forbidden_set(g125, a, b)
        assert rep.z_forbidden_size == len(zs)
        outside = [z for z in _extenders(g125, a, b) if z not in zs]
        assert rep.f_value == 2**t * len(outside)
        assert (rep.f_value > 0) == bool(outside)
        if extender(g125, a, b) is not None:
            assert rep.f_value > 0 or extender(g125, a, b) in zs


def test_g_lower_bound_for_residue_distinct_points(g2197):
    params = g2197.params
    bound = g_lower_bound(params, 2)
    assert bound == pytest.approx(243.7, abs=0.1)
    rng = np.random.default_rng(7)
    seen = 0
    while seen < 200:
        x, y = (int(v) for v in rng.choice(g2197.n, size=2, replace=False))
        if x % 13 == y % 13:
            continue
        seen += 1
        a, b = ([x, y], []) if seen % 3 == 0 else ([x], [y])
        rep = char_sums(g2197, a, b)
        assert rep.residue_distinct
        assert rep.g_value >= rep.g_lower_bound
        assert rep.f_value > 0


def test_g_lower_bound_fails_for_congruent_points(g2197):
    rep = char_sums(g2197, [0], [13])
    assert not rep.residue_distinct
    assert rep.f_value == 0
    assert rep.h_value == 2
    assert rep.g_value == 2
    assert rep.g_value < rep.g_lower_bound


def test_weil_examples():
    params = GraphParams(q=5, e=3)
    single = verify_weil_bound(params, [7])
    assert single.sum == 0
    assert single.ok

    pair = verify_weil_bound(params, [0, 1])
    assert pair.sum == -25
    assert pair.reduced_sum == -1
    assert pair.ok
    assert pair.reduction_ok
    assert pair.bound == pytest.approx(5**2.5)


def test_weil_bound_needs_incongruent_points():
    check = verify_weil_bound(GraphParams(q=5, e=3), [0, 5])
    assert check.sum == 100
    assert not check.reduced_distinct
    assert not check.ok
    assert check.reduction_ok


@pytest.mark.parametrize("q", [5, 13])
def test_weil_random_tuples(q):
    params = GraphParams(q=q, e=3)
    rng = np.random.default_rng(5)
    for k in (2, 3, 4):
        for _ in range(100):
            residues = rng.choice(q, size=k, replace=False)
            lifts = rng.integers(0, q * q, size=k)
            pts = [int(r + q * l) for r, l in zip(residues, lifts)]
            check = verify_weil_bound(params, pts)
            assert check.reduced_distinct
            assert check.ok
            assert check.reduction_ok
            assert abs(check.sum) <= check.bound


def test_weil_rejects_bad_points():
    params = GraphParams(q=5, e=3)
    with pytest.raises(ValueError):
        verify_weil_bound(params, [])
    with pytest.raises(ValueError):
        verify_weil_bound(params, [3, 128])


def test_adjacent_rows_share_two_neighbours(g13):
    # Paley(13) is strongly regular with parameters (13, 6, 2, 3)
    for y in iter_indexes(g13.rows[0]):
        assert (g13.rows[0] & g13.rows[y]).bit_count() == 2


def test_refuted_exhaustive_certificate_needs_counterexample():
    with pytest.raises(ValidationError, match="counterexample"):
        EcCertificate(t=2, verified=False, method="exhaustive")
    with pytest.raises(ValidationError):
        EcCertificate(t=2, verified=True, method="exhaustive", counterexample=Counterexample(A=[0], B=[1]))
    assert not EcCertificate(t=2, verified=False, method="sufficient_condition").verified
