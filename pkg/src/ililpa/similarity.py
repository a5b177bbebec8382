"""Directed link-similarity (tsi) over the edges of a graph.

For adjacent nodes i and j,

    tsi(i, j) = (1 + |N(i) ∩ N(j)|) / |N(j)|

measures how strongly i influences j: the more of j's neighborhood i
touches, the more readily j accepts i. The value is asymmetric (the
denominator is the *target's* degree) and defined only on edges.
"""

from __future__ import annotations

from fractions import Fraction
from pathlib import Path
from typing import IO, Iterator

import numpy as np

from .graph import Graph, _open_text, common_neighbors

__all__ = ["TsiTable", "tsi", "compute_tsi_table", "write_tsi_table"]


class TsiTable:
    """All directed tsi values of a graph, kept in exact rational form.

    The two directions of an edge share the numerator 1 + |N(i) ∩ N(j)|
    and differ only in the denominator (the target's degree), so the table
    stores one common-neighbor count per undirected edge plus a copy
    aligned with the CSR adjacency for O(1) sequential access. Values are
    exposed as :class:`fractions.Fraction` so threshold comparisons are
    exact. Immutable once built.
    """

    __slots__ = ("graph", "ncommon", "csr_common")

    def __init__(self, graph: Graph, ncommon: np.ndarray, csr_common: np.ndarray):
        self.graph = graph
        self.ncommon = ncommon
        self.csr_common = csr_common
        ncommon.setflags(write=False)
        csr_common.setflags(write=False)

    def _csr_pos(self, i: int, j: int) -> int:
        g = self.graph
        lo, hi = int(g.indptr[i]), int(g.indptr[i + 1])
        pos = lo + int(np.searchsorted(g.indices[lo:hi], j))
        if pos >= hi or g.indices[pos] != j:
            raise ValueError(f"tsi is defined only on edges: ({i}, {j}) is not an edge")
        return pos

    def common(self, i: int, j: int) -> int:
        """Shared-neighbor count |N(i) ∩ N(j)| for an adjacent pair."""
        return int(self.csr_common[self._csr_pos(i, j)])

    def value(self, i: int, j: int) -> Fraction:
        """Exact tsi(i, j) for an adjacent pair."""
        return Fraction(1 + self.common(i, j), self.graph.degree(j))

    def value_float(self, i: int, j: int) -> float:
        return float(self.value(i, j))

    def rows(self) -> Iterator[tuple[int, int, Fraction, Fraction]]:
        """(u, v, tsi(u,v), tsi(v,u)) per undirected edge, u < v, edge order."""
        deg = self.graph.degrees
        for e, (u, v) in enumerate(self.graph.edges()):
            num = 1 + int(self.ncommon[e])
            yield u, v, Fraction(num, int(deg[v])), Fraction(num, int(deg[u]))

    def __len__(self) -> int:
        return int(self.ncommon.size)


def tsi(g: Graph, i: int, j: int) -> float:
    """tsi(i, j) for a single adjacent pair, computed directly.

    Raises
    ------
    ValueError
        If (i, j) is not an edge of ``g``.
    """
    if not g.has_edge(i, j):
        raise ValueError(f"tsi is defined only on edges: ({i}, {j}) is not an edge")
    return (1 + common_neighbors(g, i, j)) / g.degree(j)


def compute_tsi_table(g: Graph) -> TsiTable:
    """Common-neighbor counts for every edge, one sorted intersection each.

    Total work is O(sum over edges of deg(u) + deg(v)).
    """
    m = g.num_edges
    ncommon = np.zeros(m, dtype=np.int64)
    indptr, indices = g.indptr, g.indices
    eu, ev = g.edge_u, g.edge_v
    for e in range(m):
        u, v = int(eu[e]), int(ev[e])
        ncommon[e] = np.intersect1d(
            indices[indptr[u]:indptr[u + 1]],
            indices[indptr[v]:indptr[v + 1]],
            assume_unique=True).size

    # Mirror onto the CSR layout: csr_common[k] = |N(i) ∩ N(indices[k])|
    # for every directed slot k of row i.
    csr_common = np.zeros(indices.size, dtype=np.int64)
    for e in range(m):
        u, v = int(eu[e]), int(ev[e])
        pu = int(indptr[u]) + int(np.searchsorted(indices[indptr[u]:indptr[u + 1]], v))
        pv = int(indptr[v]) + int(np.searchsorted(indices[indptr[v]:indptr[v + 1]], u))
        csr_common[pu] = ncommon[e]
        csr_common[pv] = ncommon[e]
    return TsiTable(g, ncommon, csr_common)


def write_tsi_table(table: TsiTable, sink: str | Path | IO[str]) -> None:
    """Dump "u v tsi_uv tsi_vu" per edge with 6 fractional digits, external ids."""
    g = table.graph
    fh, close = _open_text(sink, "w")
    try:
        for u, v, tuv, tvu in table.rows():
            fh.write(f"{g.external_id(u)} {g.external_id(v)} "
                     f"{float(tuv):.6f} {float(tvu):.6f}\n")
    finally:
        if close:
            fh.close()
