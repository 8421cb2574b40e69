"""t-e.c. certification for G_{q^e}.

Exhaustive search over bitset rows, the character sums f, g, h behind the
sufficient inequality, and the least-prime search for the family start.
"""

from __future__ import annotations

import logging
import math
from typing import Iterable, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from ..config import get_settings
from ..errors import BudgetExceededError
from ..state.schema import CharSumReport, Counterexample, EcCertificate, GraphParams, WeilCheck
from ..utils.bitset import full_bitset, lowest_index
from ..utils.parallel import resolve_workers, run_chunks
from .cayley import CayleyGraph, vertex_mask
from .number_theory import character_table, next_pythagorean_prime

logger = logging.getLogger(__name__)


def _split_sets(g: CayleyGraph, A: Iterable[int], B: Iterable[int]) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    a = tuple(sorted(set(A)))
    b = tuple(sorted(set(B)))
    overlap = set(a) & set(b)
    if overlap:
        raise ValueError(f"A and B must be disjoint, both contain {sorted(overlap)}")
    vertex_mask(g, a + b)
    return a, b


def extender(g: CayleyGraph, A: Iterable[int], B: Iterable[int]) -> Optional[int]:
    """Smallest z outside A ∪ B adjacent to all of A and to none of B."""
    a, b = _split_sets(g, A, B)
    cand = full_bitset(g.n) & ~vertex_mask(g, a + b)
    for v in a:
        cand &= g.rows[v]
    for v in b:
        cand &= ~g.rows[v]
    z = lowest_index(cand)
    return None if z < 0 else z


# --- exhaustive search -------------------------------------------------------


class _ChunkResult(NamedTuple):
    scanned: int
    witness_min: Optional[int]
    failure: Optional[Tuple[Tuple[int, ...], Tuple[int, ...]]]


class _ScanContext(NamedTuple):
    n: int
    q: int
    t: int
    rows: Tuple[int, ...]
    # non-neighbours of v, v itself excluded
    others: Tuple[int, ...]
    residue_distinct: bool


class _Task(NamedTuple):
    head: Tuple[int, ...]
    lo: int
    hi: int


def _extend(ctx: _ScanContext, cands: List[int], v: int) -> List[int]:
    # index bit i set <=> the i-th chosen vertex is in A
    return [c & ctx.others[v] for c in cands] + [c & ctx.rows[v] for c in cands]


def _scan_chunk(ctx: _ScanContext, task: _Task) -> _ChunkResult:
    """Scan the t-subsets head + (v, ...) with lo <= v < hi, in lexicographic order."""
    n, t = ctx.n, ctx.t
    scanned = 0
    witness_min: Optional[int] = None

    def leaf(chosen: Tuple[int, ...], cands: List[int]) -> Optional[Tuple[Tuple[int, ...], Tuple[int, ...]]]:
        nonlocal scanned, witness_min
        scanned += 1
        for mask, c in enumerate(cands):
            w = c.bit_count()
            if w == 0:
                a = tuple(v for i, v in enumerate(chosen) if mask >> i & 1)
                b = tuple(v for i, v in enumerate(chosen) if not mask >> i & 1)
                return a, b
            if witness_min is None or w < witness_min:
                witness_min = w
        return None

    def dfs(chosen: Tuple[int, ...], residues: frozenset, cands: List[int], start: int, stop: int):
        left = t - len(chosen)
        if left == 0:
            return leaf(chosen, cands)
        for v in range(start, min(stop, n - left + 1)):
            if ctx.residue_distinct and v % ctx.q in residues:
                continue
            found = dfs(chosen + (v,), residues | {v % ctx.q}, _extend(ctx, cands, v), v + 1, n)
            if found is not None:
                return found
        return None

    cands = [full_bitset(n)]
    residues: frozenset = frozenset()
    for v in task.head:
        cands = _extend(ctx, cands, v)
        residues = residues | {v % ctx.q}
    if len(task.head) == t:
        failure = leaf(task.head, cands)
    else:
        failure = dfs(task.head, residues, cands, task.lo, task.hi)
    return _ChunkResult(scanned=scanned, witness_min=witness_min, failure=failure)


def _plan_tasks(n: int, t: int, head: Tuple[int, ...], chunks: int) -> List[_Task]:
    """Contiguous ranges of the first free vertex, balanced by subset count."""
    depth = t - len(head)
    if depth == 0:
        return [_Task(head, 0, 0)]
    first = head[-1] + 1 if head else 0
    last = n - depth  # inclusive
    weights = [math.comb(n - v - 1, depth - 1) for v in range(first, last + 1)]
    target = max(1, sum(weights) // max(1, chunks))
    tasks: List[_Task] = []
    lo, acc = first, 0
    for v, w in zip(range(first, last + 1), weights):
        acc += w
        if acc >= target:
            tasks.append(_Task(head, lo, v + 1))
            lo, acc = v + 1, 0
    if lo <= last:
        tasks.append(_Task(head, lo, last + 1))
    return tasks


def scan_cost(n: int, t: int, *, use_translation: bool = True, word_bits: int = 64) -> int:
    """Word-operation bound: subsets scanned x 2^t splits x words per row."""
    subsets = math.comb(n - 1, t - 1) if use_translation else math.comb(n, t)
    return subsets * (2**t) * -(-n // word_bits)


def brute_force_ec(
    g: CayleyGraph,
    t: int,
    *,
    budget: Optional[int] = None,
    force: bool = False,
    workers: Optional[int] = None,
    residue_distinct: bool = False,
    use_translation: bool = True,
) -> EcCertificate:
    """Exhaustively decide the t-e.c. property.

    With `use_translation` only t-subsets containing 0 are scanned: x -> x + c is
    an automorphism, and shifting a failing subset by its minimum gives a failing
    subset that contains 0 and is lexicographically no larger. The verdict and
    the first counterexample are the same as for the full scan.

    With `residue_distinct` only subsets whose points are pairwise incongruent
    mod q are considered.
    """
    n = g.n
    if not 1 <= t <= n - 1:
        raise ValueError(f"t must satisfy 1 <= t <= n - 1 = {n - 1}, got t={t}")
    settings = get_settings()
    budget = settings.ec_budget if budget is None else budget
    cost = scan_cost(n, t, use_translation=use_translation, word_bits=settings.word_bits)
    if cost > budget and not force:
        raise BudgetExceededError(
            f"t-e.c. scan of {g.params.label()} at t={t} costs ~{cost:.3e} word-ops, "
            f"over the budget {budget:.3e} (use --force or raise --budget)"
        )

    workers = resolve_workers(workers)
    ctx = _ScanContext(
        n=n,
        q=g.params.q,
        t=t,
        rows=g.rows,
        others=tuple(full_bitset(n) ^ r ^ (1 << v) for v, r in enumerate(g.rows)),
        residue_distinct=residue_distinct,
    )
    head = (0,) if use_translation else ()
    tasks = _plan_tasks(n, t, head, chunks=1 if workers <= 1 else 4 * workers)
    logger.info(
        "Scanning %s for %s-e.c. (%s tasks, %s workers, residue_distinct=%s)",
        g.params.label(), t, len(tasks), workers, residue_distinct,
    )
    results = run_chunks(
        _scan_chunk, tasks, shared=ctx, workers=workers, stop_when=lambda r: r.failure is not None
    )

    scanned = sum(r.scanned for r in results)
    failure = next((r.failure for r in results if r.failure is not None), None)
    if failure is not None:
        a, b = failure
        logger.info("%s is not %s-e.c.: A=%s B=%s has no extender", g.params.label(), t, a, b)
        return EcCertificate(
            t=t,
            verified=False,
            method="exhaustive",
            counterexample=Counterexample(A=list(a), B=list(b)),
            witness_count_min=0,
            residue_distinct=residue_distinct,
            subsets_scanned=scanned,
        )
    mins = [r.witness_min for r in results if r.witness_min is not None]
    if scanned == 0:
        logger.warning("No admissible %s-subsets in %s; verdict is vacuous", t, g.params.label())
    return EcCertificate(
        t=t,
        verified=True,
        method="exhaustive",
        witness_count_min=min(mins) if mins else None,
        residue_distinct=residue_distinct,
        subsets_scanned=scanned,
    )


# --- the sufficient inequality -------------------------------------------------


def _check_t(t: int) -> None:
    if t < 1:
        raise ValueError(f"t must be >= 1, got t={t}")


def _c1(t: int) -> int:
    return t * 2 ** (t - 1) - 2**t + 1


def sufficient_condition(params: GraphParams, t: int) -> bool:
    """q^e - c1 q^{e-1/2} - t 2^t q^{e-1} + t 2^{t-1} > 0, decided in integers.

    With L = q^e - t 2^t q^{e-1} + t 2^{t-1} and c1 >= 0 this is
    L > 0 and L^2 > c1^2 q^{2e-1}.
    """
    _check_t(t)
    q, e = params.q, params.e
    c1 = _c1(t)
    lhs = q**e - t * 2**t * q ** (e - 1) + t * 2 ** (t - 1)
    return lhs > 0 and lhs * lhs > c1 * c1 * q ** (2 * e - 1)


def eq_main_value(params: GraphParams, t: int) -> float:
    _check_t(t)
    q, e = params.q, params.e
    return q**e - _c1(t) * q ** (e - 0.5) - t * 2**t * q ** (e - 1) + t * 2 ** (t - 1)


def g_lower_bound(params: GraphParams, t: int) -> float:
    _check_t(t)
    q, e = params.q, params.e
    return q**e - _c1(t) * q ** (e - 0.5) - t * 2**t * q ** (e - 1) + t * 2**t


def sufficient_certificate(params: GraphParams, t: int) -> EcCertificate:
    """For e > 1 the inequality only covers residue-distinct splits (twins break the rest)."""
    return EcCertificate(
        t=t,
        verified=sufficient_condition(params, t),
        method="sufficient_condition",
        residue_distinct=params.e > 1,
    )


def find_least_q1(t: int, e: int) -> int:
    """Least Pythagorean prime q with sufficient_condition((q, e), t)."""
    _check_t(t)
    if e < 1 or e % 2 == 0:
        raise ValueError(f"e must be an odd positive integer, got e={e}")
    q = 5
    while not sufficient_condition(GraphParams(q=q, e=e), t):
        q = next_pythagorean_prime(q)
    return q


def family(t: int, e: int, count: int) -> List[GraphParams]:
    """Consecutive Pythagorean primes q_1 < q_2 < ... starting at find_least_q1(t, e)."""
    if count < 1:
        raise ValueError(f"count must be >= 1, got count={count}")
    q = find_least_q1(t, e)
    out = [GraphParams(q=q, e=e)]
    while len(out) < count:
        q = next_pythagorean_prime(q)
        out.append(GraphParams(q=q, e=e))
    return out


# --- character sums ------------------------------------------------------------


def _residue_mask(n: int, q: int, points: Sequence[int]) -> np.ndarray:
    return np.isin(np.arange(n, dtype=np.int64) % q, [p % q for p in points])


def forbidden_set(g: CayleyGraph, A: Iterable[int], B: Iterable[int]) -> frozenset:
    """Z_{A,B}: all z congruent mod q to some point of A ∪ B."""
    a, b = _split_sets(g, A, B)
    mask = _residue_mask(g.n, g.params.q, a + b)
    return frozenset(int(z) for z in np.flatnonzero(mask))


def _summands(g: CayleyGraph, a: Sequence[int], b: Sequence[int]) -> np.ndarray:
    chi = character_table(g.params)
    z = np.arange(g.n, dtype=np.int64)
    prod = np.ones(g.n, dtype=np.int64)
    for v in a:
        prod *= 1 + chi.at(z - v).astype(np.int64)
    for v in b:
        prod *= 1 - chi.at(z - v).astype(np.int64)
    return prod


def char_sums(g: CayleyGraph, A: Iterable[int], B: Iterable[int]) -> CharSumReport:
    """f, g, h by direct summation of prod (1 + chi(z - a)) prod (1 - chi(z - b))."""
    a, b = _split_sets(g, A, B)
    t = len(a) + len(b)
    _check_t(t)
    n, q = g.n, g.params.q
    prod = _summands(g, a, b)
    in_z = _residue_mask(n, q, a + b)
    in_s = np.zeros(n, dtype=bool)
    in_s[list(a + b)] = True
    f_value = int(prod[~in_z].sum())
    h_value = int(prod[in_s].sum())
    # Z_n \ Z*_{A,B} is the complement of Z_{A,B} plus A ∪ B itself
    g_value = int(prod[~in_z | in_s].sum())
    return CharSumReport(
        A=a,
        B=b,
        f_value=f_value,
        g_value=g_value,
        h_value=h_value,
        z_forbidden_size=int(in_z.sum()),
        g_lower_bound=g_lower_bound(g.params, t),
        residue_distinct=len({v % q for v in a + b}) == t,
    )


def verify_weil_bound(params: GraphParams, points: Sequence[int]) -> WeilCheck:
    """|sum_x chi(x - a_1)...chi(x - a_k)| <= (k - 1) q^{e-1/2}, plus the reduction to Z_q.

    The bound needs the points pairwise distinct mod q; `reduced_distinct`
    records whether they are.
    """
    pts = tuple(int(p) % params.n for p in points)
    if not pts:
        raise ValueError("verify_weil_bound needs at least one point")
    if len(set(pts)) != len(pts):
        raise ValueError(f"points must be pairwise distinct mod n={params.n}, got {list(points)}")
    q, e, k = params.q, params.e, len(pts)

    chi = character_table(params)
    x = np.arange(params.n, dtype=np.int64)
    prod = np.ones(params.n, dtype=np.int64)
    for p in pts:
        prod *= chi.at(x - p).astype(np.int64)
    total = int(prod.sum())

    base = character_table(GraphParams(q=q, e=1))
    xr = np.arange(q, dtype=np.int64)
    prod_r = np.ones(q, dtype=np.int64)
    for p in pts:
        prod_r *= base.at(xr - p).astype(np.int64)
    reduced = int(prod_r.sum())

    return WeilCheck(
        points=pts,
        sum=total,
        bound=(k - 1) * q ** (e - 0.5),
        ok=total * total <= (k - 1) ** 2 * q ** (2 * e - 1),
        reduced_sum=reduced,
        reduced_distinct=len({p % q for p in pts}) == k,
        reduction_ok=total == q ** (e - 1) * reduced,
    )
