"""Immutable undirected graph with edge-list ingestion and neighborhood queries."""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Iterable, Iterator

import numpy as np

__all__ = [
    "Graph",
    "GroundTruth",
    "EdgeListFormatError",
    "GroundTruthFormatError",
    "load_edge_list",
    "load_ground_truth",
    "write_edge_list",
    "write_ground_truth",
    "common_neighbors",
]


class EdgeListFormatError(ValueError):
    """An edge-list source could not be parsed into a valid graph."""


class GroundTruthFormatError(ValueError):
    """A ground-truth source is malformed or does not cover the graph."""


def _open_text(source: str | Path | IO[str], mode: str = "r"):
    """Return (file object, needs_close) for a path or an already-open stream."""
    if hasattr(source, "read") or hasattr(source, "write"):
        return source, False
    return open(source, mode, encoding="utf-8"), True


class Graph:
    """Simple undirected graph in compressed sparse adjacency form.

    Nodes carry dense internal ids ``0..n-1``. The original external ids
    (arbitrary string tokens) are kept in ``node_ids`` in first-appearance
    order, so the internal numbering is deterministic for a given source.
    Adjacency rows are strictly ascending, which keeps neighbor queries and
    sorted-list intersections cheap. Instances are immutable after
    construction and safe for concurrent reads.

    Parameters
    ----------
    n : int
        Number of nodes.
    edge_u, edge_v : array-like of int
        Endpoints of the undirected edges with ``edge_u[i] < edge_v[i]``.
        Must contain no duplicates and no self-loops.
    node_ids : sequence of str, optional
        External id for each internal id. Defaults to ``str(i)``.
    self_loops_dropped : int
        Number of self-loop lines discarded during ingestion (bookkeeping
        only; does not affect the structure).
    """

    __slots__ = ("n", "indptr", "indices", "edge_u", "edge_v", "node_ids",
                 "self_loops_dropped", "_index", "_rows")

    def __init__(self, n, edge_u, edge_v, node_ids=None, self_loops_dropped=0):
        if n <= 0:
            raise ValueError("graph must have at least one node")
        eu = np.asarray(edge_u, dtype=np.int64)
        ev = np.asarray(edge_v, dtype=np.int64)
        if eu.shape != ev.shape or eu.ndim != 1:
            raise ValueError("edge_u and edge_v must be 1-d arrays of equal length")
        if eu.size:
            if eu.min(initial=0) < 0 or ev.max(initial=0) >= n:
                raise ValueError("edge endpoint out of range")
            if not (eu < ev).all():
                raise ValueError("edges must satisfy u < v (no self-loops)")
            order = np.lexsort((ev, eu))
            eu, ev = eu[order], ev[order]
            codes = eu * n + ev
            if np.unique(codes).size != codes.size:
                raise ValueError("duplicate edges")

        if node_ids is None:
            node_ids = tuple(str(i) for i in range(n))
        else:
            node_ids = tuple(str(t) for t in node_ids)
            if len(node_ids) != n or len(set(node_ids)) != n:
                raise ValueError("node_ids must be n distinct tokens")

        self.n = int(n)
        self.edge_u = eu
        self.edge_v = ev
        self.node_ids = node_ids
        self.self_loops_dropped = int(self_loops_dropped)

        # CSR adjacency: both directions, rows ascending.
        heads = np.concatenate([eu, ev])
        tails = np.concatenate([ev, eu])
        order = np.lexsort((tails, heads))
        self.indices = tails[order]
        self.indptr = np.zeros(n + 1, dtype=np.int64)
        np.add.at(self.indptr, heads + 1, 1)
        np.cumsum(self.indptr, out=self.indptr)
        for arr in (self.edge_u, self.edge_v, self.indices, self.indptr):
            arr.setflags(write=False)
        self._index = {tok: i for i, tok in enumerate(node_ids)}
        self._rows = None

    # -- queries ---------------------------------------------------------

    @property
    def num_edges(self) -> int:
        return int(self.edge_u.size)

    @property
    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    def degree(self, i: int) -> int:
        return int(self.indptr[i + 1] - self.indptr[i])

    def neighbors(self, i: int) -> np.ndarray:
        """Sorted internal ids adjacent to ``i`` (read-only view)."""
        return self.indices[self.indptr[i]:self.indptr[i + 1]]

    def adjacency_lists(self) -> list[list[int]]:
        """Adjacency as plain Python lists, built once and cached."""
        if self._rows is None:
            idx = self.indices.tolist()
            ptr = self.indptr.tolist()
            self._rows = [idx[ptr[i]:ptr[i + 1]] for i in range(self.n)]
        return self._rows

    def edges(self) -> Iterator[tuple[int, int]]:
        """Undirected edges as internal pairs (u, v) with u < v."""
        return zip(self.edge_u.tolist(), self.edge_v.tolist())

    def internal_id(self, token: str) -> int:
        try:
            return self._index[str(token)]
        except KeyError:
            raise KeyError(f"unknown node id {token!r}") from None

    def external_id(self, i: int) -> str:
        return self.node_ids[i]

    def has_edge(self, i: int, j: int) -> bool:
        row = self.neighbors(i)
        pos = np.searchsorted(row, j)
        return pos < row.size and row[pos] == j

    # -- identity --------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        if set(self.node_ids) != set(other.node_ids):
            return False
        return self._external_edge_set() == other._external_edge_set()

    __hash__ = None

    def _external_edge_set(self) -> set[frozenset]:
        ids = self.node_ids
        return {frozenset((ids[u], ids[v])) for u, v in self.edges()}

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.num_edges})"


@dataclass(frozen=True)
class GroundTruth:
    """Known community assignment, one dense community code per internal node."""

    labels: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.labels, dtype=np.int64)
        arr.setflags(write=False)
        object.__setattr__(self, "labels", arr)

    @property
    def n_communities(self) -> int:
        return int(np.unique(self.labels).size)


def load_edge_list(source: str | Path | IO[str]) -> Graph:
    """Parse a whitespace-separated edge list into a :class:`Graph`.

    Each non-blank line holds exactly two node tokens; lines starting with
    ``#`` or ``%`` are comments. Duplicate edges are collapsed, self-loops
    dropped (a warning reports the count), and external ids are remapped to
    dense internal ids in first-appearance order.

    Raises
    ------
    EdgeListFormatError
        On a malformed line (with its line number) or an empty source.
    """
    fh, close = _open_text(source)
    index: dict[str, int] = {}
    node_ids: list[str] = []
    pairs: set[tuple[int, int]] = set()
    loops = 0

    def intern(token: str) -> int:
        i = index.get(token)
        if i is None:
            i = len(node_ids)
            index[token] = i
            node_ids.append(token)
        return i

    try:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line[0] in "#%":
                continue
            parts = line.split()
            if len(parts) != 2:
                raise EdgeListFormatError(
                    f"line {lineno}: expected 2 tokens, found {len(parts)}: {line!r}")
            a, b = intern(parts[0]), intern(parts[1])
            if a == b:
                loops += 1
                continue
            pairs.add((a, b) if a < b else (b, a))
    finally:
        if close:
            fh.close()

    if not node_ids:
        raise EdgeListFormatError("empty graph: source contains no nodes")
    if loops:
        warnings.warn(f"dropped {loops} self-loop(s)", stacklevel=2)
    eu = np.fromiter((u for u, _ in pairs), dtype=np.int64, count=len(pairs))
    ev = np.fromiter((v for _, v in pairs), dtype=np.int64, count=len(pairs))
    return Graph(len(node_ids), eu, ev, node_ids, self_loops_dropped=loops)


def write_edge_list(g: Graph, sink: str | Path | IO[str]) -> None:
    """Write ``g`` as one "u v" line per edge, using external ids.

    Isolated nodes are not representable in edge-list form and are omitted.
    """
    fh, close = _open_text(sink, "w")
    try:
        ids = g.node_ids
        for u, v in g.edges():
            fh.write(f"{ids[u]} {ids[v]}\n")
    finally:
        if close:
            fh.close()


def load_ground_truth(source: str | Path | IO[str], g: Graph) -> GroundTruth:
    """Parse "node community" lines into a total assignment over ``g``.

    Community tokens are remapped to dense codes in first-appearance order.

    Raises
    ------
    GroundTruthFormatError
        On malformed lines, unknown node ids, conflicting reassignment, or
        nodes of ``g`` left without a community (absentees are listed).
    """
    fh, close = _open_text(source)
    labels = np.full(g.n, -1, dtype=np.int64)
    codes: dict[str, int] = {}
    try:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line[0] in "#%":
                continue
            parts = line.split()
            if len(parts) != 2:
                raise GroundTruthFormatError(
                    f"line {lineno}: expected 2 tokens, found {len(parts)}: {line!r}")
            node_tok, comm_tok = parts
            try:
                node = g.internal_id(node_tok)
            except KeyError:
                raise GroundTruthFormatError(
                    f"line {lineno}: unknown node id {node_tok!r}") from None
            code = codes.setdefault(comm_tok, len(codes))
            if labels[node] != -1 and labels[node] != code:
                raise GroundTruthFormatError(
                    f"line {lineno}: node {node_tok!r} reassigned to a different community")
            labels[node] = code
    finally:
        if close:
            fh.close()

    missing = np.flatnonzero(labels == -1)
    if missing.size:
        names = [g.external_id(i) for i in missing[:10]]
        more = f" and {missing.size - 10} more" if missing.size > 10 else ""
        raise GroundTruthFormatError(
            f"{missing.size} node(s) missing from ground truth: {', '.join(names)}{more}")
    return GroundTruth(labels)


def write_ground_truth(labels: Iterable[int], g: Graph, sink: str | Path | IO[str]) -> None:
    """Write a per-node assignment as "node community" lines with external ids."""
    fh, close = _open_text(sink, "w")
    try:
        for i, lab in enumerate(labels):
            fh.write(f"{g.external_id(i)} {int(lab)}\n")
    finally:
        if close:
            fh.close()


def common_neighbors(g: Graph, i: int, j: int) -> int:
    """Size of N(i) ∩ N(j), via sorted-array intersection."""
    if not (0 <= i < g.n and 0 <= j < g.n):
        raise IndexError(f"node out of range: ({i}, {j})")
    return int(np.intersect1d(g.neighbors(i), g.neighbors(j), assume_unique=True).size)
