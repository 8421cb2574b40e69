"""Pseudo-randomness measurements: expander mixing, bi-jumbledness, the
best-pseudo-random trend, Cheeger bounds and quasi-random statistics."""

from __future__ import annotations

import logging
import math
from fractions import Fraction
from typing import Iterable, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from ..config import get_settings
from ..errors import SizeCapError
from ..state.schema import (
    FamilyTrendReport,
    GraphParams,
    MixingSample,
    MixingScanReport,
    QuasiRandomStats,
    QuasiRandomTrend,
    SpectrumReport,
    TrendRow,
)
from ..utils.bitset import make_bitset
from ..utils.parallel import resolve_workers, run_chunks
from .cayley import CayleyGraph, adjacency_matrix, vertex_mask
from .spectrum import closed_form_spectrum, lambda_ratio

logger = logging.getLogger(__name__)

BOUND_TOL = 1e-9
RATIO_CAP = 2.0


def edge_count(g: CayleyGraph, U: Iterable[int], W: Iterable[int]) -> int:
    """e(U, W) = sum_{u in U} |N(u) ∩ W|; edges inside U ∩ W count twice."""
    w_mask = vertex_mask(g, W)
    return sum((g.rows[u] & w_mask).bit_count() for u in sorted(set(U)))


def _sample(rows: Sequence[int], n: int, p: float, U: Tuple[int, ...], W: Tuple[int, ...]) -> MixingSample:
    w_mask = make_bitset(W)
    e_uw = sum((rows[u] & w_mask).bit_count() for u in U)
    expected = p * len(U) * len(W)
    deviation = abs(e_uw - expected)
    size = math.sqrt(len(U) * len(W))
    return MixingSample(
        U=U,
        W=W,
        e_uw=e_uw,
        expected=expected,
        deviation=deviation,
        normalized=deviation / size if size else 0.0,
    )


def mixing_sample(g: CayleyGraph, U: Iterable[int], W: Iterable[int], p: Optional[float] = None) -> MixingSample:
    """One (U, W) measurement against density p (default d/n)."""
    u = tuple(sorted(set(U)))
    w = tuple(sorted(set(W)))
    vertex_mask(g, u + w)
    p = g.degree / g.n if p is None else p
    return _sample(g.rows, g.n, p, u, w)


def _draw_subset(rng: np.random.Generator, n: int) -> Tuple[int, ...]:
    # size log-uniform on [1, n], membership uniform
    size = int(round(math.exp(rng.uniform(0.0, math.log(n)))))
    size = min(max(size, 1), n)
    return tuple(sorted(int(v) for v in rng.choice(n, size=size, replace=False)))


class _MixingContext(NamedTuple):
    rows: Tuple[int, ...]
    n: int
    p: float
    bound: float
    keep: bool


class _MixingChunk(NamedTuple):
    worst: Optional[MixingSample]
    violations: int
    kept: List[MixingSample]


def _mixing_chunk(ctx: _MixingContext, task: Tuple[np.random.SeedSequence, int]) -> _MixingChunk:
    seed_seq, count = task
    rng = np.random.default_rng(seed_seq)
    worst: Optional[MixingSample] = None
    violations = 0
    kept: List[MixingSample] = []
    for _ in range(count):
        s = _sample(ctx.rows, ctx.n, ctx.p, _draw_subset(rng, ctx.n), _draw_subset(rng, ctx.n))
        if s.normalized > ctx.bound + BOUND_TOL:
            violations += 1
        if worst is None or s.normalized > worst.normalized:
            worst = s
        if ctx.keep:
            kept.append(s)
    return _MixingChunk(worst=worst, violations=violations, kept=kept)


def _sampled_max(
    g: CayleyGraph, p: float, bound: float, samples: int, seed: int, workers: Optional[int], keep: bool
) -> _MixingChunk:
    """Seeded sampling split into fixed seed-derived streams; the result does not
    depend on the number of workers."""
    chunk = max(1, get_settings().mixing_chunk)
    counts = [chunk] * (samples // chunk)
    if samples % chunk:
        counts.append(samples % chunk)
    streams = np.random.SeedSequence(seed).spawn(len(counts))
    ctx = _MixingContext(rows=g.rows, n=g.n, p=p, bound=bound, keep=keep)
    results = run_chunks(_mixing_chunk, list(zip(streams, counts)), shared=ctx, workers=resolve_workers(workers))
    worst: Optional[MixingSample] = None
    kept: List[MixingSample] = []
    for r in results:
        if r.worst is not None and (worst is None or r.worst.normalized > worst.normalized):
            worst = r.worst
        kept.extend(r.kept)
    return _MixingChunk(worst=worst, violations=sum(r.violations for r in results), kept=kept)


def mixing_scan(
    g: CayleyGraph,
    spectrum: SpectrumReport,
    samples: int,
    seed: int,
    *,
    workers: Optional[int] = None,
    keep: bool = False,
) -> MixingScanReport:
    """Check |e(U,W) - (d/n)|U||W|| <= lambda(G) sqrt(|U||W|) on seeded random pairs."""
    if samples < 1:
        raise ValueError(f"samples must be >= 1, got samples={samples}")
    lam = spectrum.lambda_
    out = _sampled_max(g, g.degree / g.n, lam, samples, seed, workers, keep)
    if out.violations:
        logger.error(
            "Expander mixing bound violated %s times on %s (lambda=%s)",
            out.violations, g.params.label(), lam,
        )
    return MixingScanReport(
        samples=samples,
        seed=seed,
        lambda_=lam,
        max_normalized=out.worst.normalized if out.worst else 0.0,
        worst=out.worst,
        violations=out.violations,
        kept=out.kept,
    )


def _exhaustive_alpha(g: CayleyGraph, p: float) -> float:
    """Exact max over all nonempty U, W.

    For fixed U and |W| = k the deviation is extreme when W takes the k vertices
    with the most (or fewest) neighbours in U, so sorting replaces the scan over W.
    """
    n = g.n
    m = adjacency_matrix(g).astype(np.int64)
    masks = np.arange(1, 2**n, dtype=np.int64)
    u_mat = ((masks[:, None] >> np.arange(n, dtype=np.int64)) & 1).astype(np.int64)
    u_size = u_mat.sum(axis=1).astype(np.float64)
    into_u = np.sort(u_mat @ m, axis=1)  # |N(w) ∩ U| per w, ascending
    bottom = np.cumsum(into_u, axis=1)
    top = np.cumsum(into_u[:, ::-1], axis=1)
    k = np.arange(1, n + 1, dtype=np.float64)
    expected = p * u_size[:, None] * k[None, :]
    dev = np.maximum(np.abs(top - expected), np.abs(bottom - expected))
    return float((dev / np.sqrt(u_size[:, None] * k[None, :])).max())


def jumbledness_alpha(
    g: CayleyGraph,
    p: float,
    samples: int,
    seed: int,
    *,
    workers: Optional[int] = None,
    exhaustive_cap: Optional[int] = None,
) -> float:
    """Empirical lower bound on the smallest alpha with G (p, alpha)-bi-jumbled.

    Exact (all subset pairs) when n <= exhaustive_cap. Not a certificate: the
    certified upper bound is lambda(G).
    """
    if not 0 < p < 1:
        raise ValueError(f"p must lie in (0, 1), got p={p}")
    cap = get_settings().jumbled_exhaustive_cap if exhaustive_cap is None else exhaustive_cap
    alpha = 0.0
    if samples > 0:
        worst = _sampled_max(g, p, math.inf, samples, seed, workers, keep=False).worst
        alpha = worst.normalized if worst else 0.0
    if g.n <= cap:
        alpha = max(alpha, _exhaustive_alpha(g, p))
    return alpha


def best_pr_trend(instances: Sequence[GraphParams]) -> FamilyTrendReport:
    """lambda/sqrt(d) across a family sharing e.

    Growth in q for e >= 3 is the desk-scale trace of lambda = Omega(d^{1/2+eps}),
    eps = (e-1)/2; boundedness for e = 1 is what best pseudo-random graphs show.
    """
    if len(instances) < 2:
        raise ValueError(f"best_pr_trend needs at least 2 instances, got {len(instances)}")
    es = {p.e for p in instances}
    if len(es) != 1:
        raise ValueError(f"instances must share e, got e in {sorted(es)}")
    e = es.pop()
    rows: List[TrendRow] = []
    for params in sorted(instances, key=lambda p: p.q):
        spec = closed_form_spectrum(params)
        prob = Fraction(params.degree, params.n)
        rows.append(
            TrendRow(
                params=params,
                degree=params.degree,
                lambda_=spec.lambda_,
                ratio=lambda_ratio(spec),
                edge_probability=float(prob),
                edge_probability_exact=prob == Fraction(1, 2) - Fraction(1, 2 * params.q),
            )
        )
    ratios = [r.ratio for r in rows]
    return FamilyTrendReport(
        e=e,
        epsilon=(e - 1) / 2,
        instances=rows,
        increasing=all(a < b for a, b in zip(ratios, ratios[1:])),
        bounded=all(r <= RATIO_CAP for r in ratios),
        edge_probability_ok=all(r.edge_probability_exact for r in rows),
    )


def cheeger_spectral_lower(spectrum: SpectrumReport) -> float:
    """(d - lambda_2)/2."""
    return (spectrum.degree - spectrum.lambda2.value) / 2


def cheeger_bruteforce(g: CayleyGraph, cap: Optional[int] = None, block: int = 1 << 15) -> float:
    """min over nonempty S, |S| <= n/2, of e(S, V \\ S)/|S|."""
    n = g.n
    cap = get_settings().cheeger_cap if cap is None else cap
    if n > cap:
        raise SizeCapError(f"cheeger_bruteforce refuses n={n} above the cap {cap}")
    m = adjacency_matrix(g).astype(np.int32)
    deg = m.sum(axis=1)
    shifts = np.arange(n, dtype=np.int64)
    best: Optional[Fraction] = None
    for lo in range(1, 2**n, block):
        masks = np.arange(lo, min(2**n, lo + block), dtype=np.int64)
        s = ((masks[:, None] >> shifts) & 1).astype(np.int32)
        size = s.sum(axis=1)
        keep = size <= n // 2
        if not keep.any():
            continue
        s, size = s[keep], size[keep]
        # edges leaving S: degree sum minus twice the edges inside
        boundary = s @ deg - ((s @ m) * s).sum(axis=1)
        ratios = boundary / size
        i = int(ratios.argmin())
        cand = Fraction(int(boundary[i]), int(size[i]))
        if best is None or cand < best:
            best = cand
    assert best is not None
    return float(best)


def quasirandom_stats(g: CayleyGraph, spectrum: SpectrumReport) -> QuasiRandomStats:
    n = g.n
    p = g.degree / n
    return QuasiRandomStats(
        edge_count=g.edge_count,
        lambda1_over_pn=spectrum.degree / (p * n),
        lambda2_over_n=spectrum.lambda2.value / n,
    )


def quasirandom_trend(instances: Sequence[GraphParams]) -> QuasiRandomTrend:
    """lambda_2/n across instances; quasi-randomness needs lambda_2 = o(n)."""
    rows = []
    for params in sorted(instances, key=lambda p: (p.e, p.q)):
        rows.append((params, closed_form_spectrum(params).lambda2.value / params.n))
    vals = [v for _, v in rows]
    return QuasiRandomTrend(instances=rows, decreasing=all(a > b for a, b in zip(vals, vals[1:])))
