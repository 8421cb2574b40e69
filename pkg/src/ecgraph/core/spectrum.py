"""Exact spectrum of G_{q^e} and the two oracles that check it."""

from __future__ import annotations

import logging
import math
from typing import List, Optional, Tuple

import numpy as np
import scipy.linalg

from ..config import get_settings
from ..errors import EcGraphError, SizeCapError
from ..state.schema import ExactEigenvalue, GraphParams, SpectrumReport
from .cayley import CayleyGraph, adjacency_matrix
from .number_theory import legendre_symbol, unit_squares

logger = logging.getLogger(__name__)

IMAG_TOL = 1e-9


def closed_form_spectrum(params: GraphParams) -> SpectrumReport:
    """Four eigenvalues d, (-q^{e-1} ± q^{e-1/2})/2 and 0.

    Multiplicities come from counting frequencies a per case: a = 0 gives d,
    a = b q^{e-1} with (b/q) = ±1 gives (q - 1)/2 each, the other q^e - q
    frequencies give 0 (absent when e = 1).
    """
    q, n, d = params.q, params.n, params.degree
    p = q ** (params.e - 1)
    half = (q - 1) // 2
    eigenvalues = [
        ExactEigenvalue(a_coeff=2 * d, b_coeff=0, radicand=q, multiplicity=1),
        ExactEigenvalue(a_coeff=-p, b_coeff=p, radicand=q, multiplicity=half),
    ]
    if n - q > 0:
        eigenvalues.append(ExactEigenvalue(a_coeff=0, b_coeff=0, radicand=q, multiplicity=n - q))
    eigenvalues.append(ExactEigenvalue(a_coeff=-p, b_coeff=-p, radicand=q, multiplicity=half))
    lam = max(eigenvalues[1].value, -eigenvalues[-1].value)
    return SpectrumReport(params=params, eigenvalues=eigenvalues, lambda_=lam)


def _q_valuation(a: int, q: int) -> int:
    v = 0
    while a % q == 0:
        a //= q
        v += 1
    return v


def eigenvalue_for_frequency(a: int, params: GraphParams) -> ExactEigenvalue:
    """Eigenvalue of the additive character x -> exp(2 pi i a x / n)."""
    q, n, e = params.q, params.n, params.e
    if not 0 <= a < n:
        raise ValueError(f"frequency a must lie in [0, {n}), got a={a}")
    if a == 0:
        return ExactEigenvalue(a_coeff=2 * params.degree, b_coeff=0, radicand=q)
    p = q ** (e - 1)
    if _q_valuation(a, q) == e - 1:
        sign = legendre_symbol(a // p, q)
        return ExactEigenvalue(a_coeff=-p, b_coeff=sign * p, radicand=q)
    return ExactEigenvalue(a_coeff=0, b_coeff=0, radicand=q)


def _sorted_squares(params: GraphParams) -> np.ndarray:
    return np.array(sorted(unit_squares(params)), dtype=np.int64)


def character_sum_eigenvalue(a: int, params: GraphParams) -> float:
    """sum_{s in Q} exp(2 pi i a s / n) by direct summation."""
    n = params.n
    if not 0 <= a < n:
        raise ValueError(f"frequency a must lie in [0, {n}), got a={a}")
    angles = (2.0 * np.pi / n) * ((a * _sorted_squares(params)) % n)
    imag = math.fsum(np.sin(angles))
    if abs(imag) > IMAG_TOL:
        raise EcGraphError(f"character sum at a={a} has imaginary part {imag:.3e}; Q is not symmetric")
    return math.fsum(np.cos(angles))


def character_sum_spectrum(params: GraphParams, block: int = 256) -> np.ndarray:
    """All n character-sum eigenvalues, indexed by frequency a."""
    n = params.n
    squares = _sorted_squares(params)
    out = np.empty(n, dtype=np.float64)
    for lo in range(0, n, block):
        freqs = np.arange(lo, min(n, lo + block), dtype=np.int64)
        angles = (2.0 * np.pi / n) * (np.outer(freqs, squares) % n)
        imag = np.abs(np.sin(angles).sum(axis=1))
        if imag.max() > IMAG_TOL:
            bad = int(freqs[int(imag.argmax())])
            raise EcGraphError(f"character sum at a={bad} has imaginary part {imag.max():.3e}")
        out[lo : lo + len(freqs)] = np.cos(angles).sum(axis=1)
    return out


def numerical_spectrum(g: CayleyGraph, cap: Optional[int] = None) -> List[float]:
    """Dense symmetric eigendecomposition, descending. Test oracle only."""
    cap = get_settings().numerical_cap if cap is None else cap
    if g.n > cap:
        raise SizeCapError(f"numerical_spectrum refuses n={g.n} above the cap {cap}")
    logger.info("Dense eigendecomposition of %s (n=%s)", g.params.label(), g.n)
    values = scipy.linalg.eigh(
        adjacency_matrix(g).astype(np.float64), eigvals_only=True, check_finite=False
    )
    return sorted((float(v) for v in values), reverse=True)


def moment_identities(report: SpectrumReport) -> Tuple[bool, bool]:
    """(trace == 0, sum of squares == n d), both in exact integer arithmetic.

    With value = (a + b sqrt(q))/2: the trace vanishes iff sum m a = sum m b = 0,
    and sum m value^2 = n d iff sum m (a^2 + b^2 q) = 4 n d and sum m a b = 0.
    """
    q, n, d = report.params.q, report.params.n, report.params.degree
    evs = report.eigenvalues
    mult = [int(ev.multiplicity or 0) for ev in evs]
    trace_ok = (
        sum(m * ev.a_coeff for m, ev in zip(mult, evs)) == 0
        and sum(m * ev.b_coeff for m, ev in zip(mult, evs)) == 0
    )
    second_ok = (
        sum(m * (ev.a_coeff**2 + ev.b_coeff**2 * q) for m, ev in zip(mult, evs)) == 4 * n * d
        and sum(m * ev.a_coeff * ev.b_coeff for m, ev in zip(mult, evs)) == 0
    )
    return trace_ok, second_ok


def lambda_ratio(report: SpectrumReport) -> float:
    """lambda(G) / sqrt(d)."""
    return report.lambda_ / math.sqrt(report.params.degree)
