import itertools
import math

import pytest

from ecgraph.core.pseudorandom import (
    best_pr_trend,
    cheeger_bruteforce,
    cheeger_spectral_lower,
    edge_count,
    jumbledness_alpha,
    mixing_sample,
    mixing_scan,
    quasirandom_stats,
    quasirandom_trend,
)
from ecgraph.core.spectrum import closed_form_spectrum
from ecgraph.errors import SizeCapError
from ecgraph.state.schema import GraphParams

GOLDEN = (1 + math.sqrt(5)) / 2


def _nonempty_subsets(n):
    for k in range(1, n + 1):
        yield from itertools.combinations(range(n), k)


def test_edge_count_examples(g5):
    assert edge_count(g5, {0}, {1, 4}) == 2
    assert edge_count(g5, {0, 1}, {0, 1}) == 2
    assert edge_count(g5, range(5), range(5)) == 10
    assert edge_count(g5, {0}, {2, 3}) == 0


def test_mixing_sample_fields(g5):
    s = mixing_sample(g5, [0, 1], [2, 3, 4])
    assert s.U == (0, 1)
    assert s.e_uw == 2
    assert s.expected == pytest.approx(0.4 * 6)
    assert s.normalized == pytest.approx(0.4 / math.sqrt(6))


def test_exhaustive_mixing_on_paley_13(g13):
    lam = closed_form_spectrum(g13.params).lambda_
    small = [c for k in (1, 2) for c in itertools.combinations(range(13), k)]
    for U in small:
        for W in small:
            assert mixing_sample(g13, U, W).normalized <= lam + 1e-9


@pytest.mark.parametrize("fixture", ["g125", "g2197"])
def test_mixing_scan_respects_lambda(request, fixture):
    g = request.getfixturevalue(fixture)
    spectrum = closed_form_spectrum(g.params)
    rep = mixing_scan(g, spectrum, samples=10_000, seed=0)
    assert rep.ok
    assert rep.violations == 0
    assert 0 < rep.max_normalized <= spectrum.lambda_ + 1e-9
    assert rep.worst.normalized == rep.max_normalized
    assert rep.kept == []


def test_mixing_scan_is_reproducible_across_workers(g125):
    spectrum = closed_form_spectrum(g125.params)
    one = mixing_scan(g125, spectrum, samples=2500, seed=42, workers=1, keep=True)
    two = mixing_scan(g125, spectrum, samples=2500, seed=42, workers=2, keep=True)
    assert one.model_dump() == two.model_dump()
    assert len(one.kept) == 2500
    other = mixing_scan(g125, spectrum, samples=2500, seed=43, workers=1, keep=True)
    assert [(s.U, s.W) for s in other.kept] != [(s.U, s.W) for s in one.kept]


def test_mixing_scan_rejects_zero_samples(g5):
    with pytest.raises(ValueError):
        mixing_scan(g5, closed_form_spectrum(g5.params), samples=0, seed=0)


def test_jumbledness_of_the_pentagon_is_exact(g5):
    p = 0.4
    brute = max(
        abs(edge_count(g5, U, W) - p * len(U) * len(W)) / math.sqrt(len(U) * len(W))
        for U in _nonempty_subsets(5)
        for W in _nonempty_subsets(5)
    )
    alpha = jumbledness_alpha(g5, p, samples=0, seed=0)
    assert alpha == pytest.approx(brute, abs=1e-12)
    assert alpha <= GOLDEN + 1e-9
    assert jumbledness_alpha(g5, p, samples=200, seed=1) == pytest.approx(brute, abs=1e-12)


def test_jumbledness_sampled_is_a_lower_bound(g125):
    lam = closed_form_spectrum(g125.params).lambda_
    alpha = jumbledness_alpha(g125, 0.4, samples=2000, seed=3)
    assert 0 < alpha <= lam + 1e-9


@pytest.mark.parametrize("p", [0, 1, -0.5])
def test_jumbledness_rejects_bad_density(g5, p):
    with pytest.raises(ValueError):
        jumbledness_alpha(g5, p, samples=10, seed=0)


def test_best_pr_trend_grows_for_prime_cubes():
    rep = best_pr_trend([GraphParams(q=q, e=3) for q in (17, 5, 13)])
    assert [row.params.q for row in rep.instances] == [5, 13, 17]
    assert [row.ratio for row in rep.instances] == pytest.approx([5.7206, 12.2213, 15.3960], abs=1e-3)
    assert rep.increasing
    assert not rep.bounded
    assert rep.epsilon == 1.0
    assert rep.edge_probability_ok
    assert rep.instances[0].edge_probability == pytest.approx(0.4)


def test_best_pr_trend_bounded_for_paley_graphs():
    rep = best_pr_trend([GraphParams(q=q, e=1) for q in (5, 13, 17, 29)])
    assert [row.ratio for row in rep.instances] == pytest.approx([1.1441, 0.9401, 0.9056, 0.8533], abs=1e-3)
    assert rep.bounded
    assert not rep.increasing
    assert rep.epsilon == 0.0


def test_best_pr_trend_rejects_bad_families():
    with pytest.raises(ValueError, match="at least 2"):
        best_pr_trend([GraphParams(q=5, e=3)])
    with pytest.raises(ValueError, match="share e"):
        best_pr_trend([GraphParams(q=5, e=3), GraphParams(q=13, e=1)])


def test_cheeger_spectral_lower_bounds():
    assert cheeger_spectral_lower(closed_form_spectrum(GraphParams(q=5, e=1))) == pytest.approx(0.691, abs=1e-3)
    assert cheeger_spectral_lower(closed_form_spectrum(GraphParams(q=13, e=1))) == pytest.approx(2.3486, abs=1e-4)
    assert cheeger_spectral_lower(closed_form_spectrum(GraphParams(q=5, e=3))) == pytest.approx(17.2746, abs=1e-4)


def test_cheeger_bruteforce(g5, g13):
    assert cheeger_bruteforce(g5) == 1.0
    h13 = cheeger_bruteforce(g13)
    assert h13 >= cheeger_spectral_lower(closed_form_spectrum(g13.params))
    assert h13 <= 6


def test_cheeger_bruteforce_cap(g125):
    with pytest.raises(SizeCapError):
        cheeger_bruteforce(g125)


def test_quasirandom_stats(g125):
    stats = quasirandom_stats(g125, closed_form_spectrum(g125.params))
    assert stats.edge_count == 125 * 50 // 2
    assert stats.lambda1_over_pn == pytest.approx(1.0)
    assert stats.lambda2_over_n == pytest.approx(25 * (math.sqrt(5) - 1) / 2 / 125)


def test_quasirandom_trend():
    rep = quasirandom_trend([GraphParams(q=q, e=1) for q in (29, 5, 17, 13)])
    assert [p.q for p, _ in rep.instances] == [5, 13, 17, 29]
    assert rep.decreasing
    assert quasirandom_trend([GraphParams(q=13, e=3)]).instances[0][1] == pytest.approx(0.1002, abs=1e-4)
