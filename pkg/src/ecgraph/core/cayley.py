"""G_{q^e} as an immutable circulant graph with bitset adjacency rows."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Iterable, Iterator, List, Tuple, Union

import numpy as np

from ..state.schema import GraphParams
from ..utils.bitset import count_bits, iter_indexes, make_bitset, rotate_left
from ..utils.storage import atomic_write_text
from ..errors import ReportWriteError
from .number_theory import unit_squares

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CayleyGraph:
    """Vertices are the residues 0..n-1; rows[x] has bit y set iff x ~ y."""

    params: GraphParams
    connection_set: Tuple[int, ...]
    rows: Tuple[int, ...]
    degree: int

    @property
    def n(self) -> int:
        return self.params.n

    @property
    def edge_count(self) -> int:
        return sum(count_bits(r) for r in self.rows) // 2


def build_graph(params: GraphParams) -> CayleyGraph:
    """Cay(Z_n, Q) with Q the unit squares; Q = -Q because q ≡ 1 (mod 4)."""
    # re-run validation in case the params were built with model_construct
    params = GraphParams(q=params.q, e=params.e)
    n = params.n
    connection_set = tuple(sorted(unit_squares(params)))
    row0 = make_bitset(connection_set)
    # circulant: row x is row 0 shifted by x
    rows = tuple(rotate_left(row0, x, n) for x in range(n))
    g = CayleyGraph(params=params, connection_set=connection_set, rows=rows, degree=len(connection_set))
    logger.info("Built %s: n=%s degree=%s", params.label(), n, g.degree)
    return g


def _check_vertex(g: CayleyGraph, x: int) -> None:
    if not 0 <= x < g.n:
        raise ValueError(f"vertex {x} out of range [0, {g.n})")


def vertex_mask(g: CayleyGraph, vertices: Iterable[int]) -> int:
    vs = list(vertices)
    for v in vs:
        _check_vertex(g, v)
    return make_bitset(vs)


def is_adjacent(g: CayleyGraph, x: int, y: int) -> bool:
    _check_vertex(g, x)
    _check_vertex(g, y)
    return bool((g.rows[x] >> y) & 1)


def neighbors(g: CayleyGraph, x: int) -> List[int]:
    _check_vertex(g, x)
    return list(iter_indexes(g.rows[x]))


def is_congruent_twin(g: CayleyGraph, x: int, y: int) -> bool:
    """Distinct vertices with identical neighbourhoods (x ≡ y mod q for e > 1)."""
    _check_vertex(g, x)
    _check_vertex(g, y)
    return x != y and g.rows[x] == g.rows[y]


def edges(g: CayleyGraph) -> Iterator[Tuple[int, int]]:
    """Edges (u, v), u < v, in ascending lexicographic order."""
    for u, row in enumerate(g.rows):
        for v in iter_indexes(row >> (u + 1)):
            yield u, u + 1 + v


def adjacency_matrix(g: CayleyGraph) -> np.ndarray:
    n = g.n
    indicator = np.zeros(n, dtype=np.uint8)
    indicator[list(g.connection_set)] = 1
    idx = np.arange(n, dtype=np.int64)
    return indicator[(idx[None, :] - idx[:, None]) % n]


def _edge_list_lines(g: CayleyGraph) -> Iterator[str]:
    yield f"{g.n} {g.edge_count}\n"
    for u, v in edges(g):
        yield f"{u} {v}\n"


def export_edge_list(g: CayleyGraph, destination: Union[str, Path, IO[str]]) -> None:
    """Header "n m", then one "u v" line per edge."""
    if isinstance(destination, (str, Path)):
        atomic_write_text(destination, "".join(_edge_list_lines(g)))
        logger.info("Wrote edge list of %s to %s", g.params.label(), destination)
        return
    name = getattr(destination, "name", "<stream>")
    try:
        destination.writelines(_edge_list_lines(g))
    except OSError as e:
        raise ReportWriteError(f"cannot write edge list to {name}: {e}") from e
