"""Graph containers, edge-list I/O and the structural transforms used by the models.

Adjacency matrices are dense ``float64`` arrays.  Undirected graphs follow the
multigraph convention where a self-edge contributes 2 to the diagonal, so that
``A_ii / 2`` counts self-edges.
"""

from __future__ import annotations

import io
import os
from dataclasses import dataclass
from typing import Iterable, TextIO

import numpy as np

KINDS = ("undirected", "directed", "bipartite", "signed")


class GraphFormatError(ValueError):
    """Malformed edge-list or label file."""


class GraphDomainError(ValueError):
    """Input violates a structural precondition (wrong kind, negative weight, ...)."""


@dataclass(frozen=True)
class Graph:
    """Immutable graph with a dense adjacency matrix.

    For ``kind == "bipartite"`` the stored matrix is the embedded
    ``(n1 + n2) x (n1 + n2)`` form and ``n1`` holds the size of the first part.
    """

    kind: str
    matrix: np.ndarray
    n1: int | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise GraphDomainError(f"unknown graph kind {self.kind!r}")
        a = np.array(self.matrix, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise GraphDomainError(f"adjacency must be square, got shape {a.shape}")
        if self.kind != "signed" and (a < 0).any():
            raise GraphDomainError(f"negative weight in {self.kind} graph")
        if self.kind in ("undirected", "signed", "bipartite") and not np.array_equal(a, a.T):
            raise GraphDomainError(f"{self.kind} adjacency must be symmetric")
        if self.kind == "bipartite":
            if self.n1 is None or not 0 <= self.n1 <= a.shape[0]:
                raise GraphDomainError("bipartite graph needs 0 <= n1 <= n")
            if a[: self.n1, : self.n1].any() or a[self.n1 :, self.n1 :].any():
                raise GraphDomainError("bipartite graph has an edge inside a part")
        a.setflags(write=False)
        object.__setattr__(self, "matrix", a)

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    @property
    def n2(self) -> int | None:
        return None if self.n1 is None else self.n - self.n1

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple], kind: str = "undirected") -> "Graph":
        """Build a graph from ``(src, dst)`` or ``(src, dst, weight)`` tuples.

        Not for bipartite graphs; use :func:`bipartite_graph` instead.
        """
        if kind == "bipartite":
            raise GraphDomainError("use bipartite_graph() for bipartite input")
        a = np.zeros((n, n))
        for e in edges:
            i, j = int(e[0]), int(e[1])
            w = float(e[2]) if len(e) > 2 else 1.0
            _accumulate(a, i, j, w, kind)
        return cls(kind, a)


def _accumulate(a: np.ndarray, i: int, j: int, w: float, kind: str) -> None:
    if kind == "directed":
        a[i, j] += w
    elif i == j:
        a[i, i] += 2.0 * w
    else:
        a[i, j] += w
        a[j, i] += w


def bipartite_embed(b) -> np.ndarray:
    """Return ``[[0, B], [B^T, 0]]`` for an ``n1 x n2`` biadjacency matrix ``B``."""
    b = np.asarray(b, dtype=float)
    if b.ndim != 2:
        raise GraphDomainError("biadjacency must be a 2-d matrix")
    if (b < 0).any():
        raise GraphDomainError("biadjacency must be nonnegative")
    n1, n2 = b.shape
    a = np.zeros((n1 + n2, n1 + n2))
    a[:n1, n1:] = b
    a[n1:, :n1] = b.T
    return a


def bipartite_graph(b) -> Graph:
    b = np.asarray(b, dtype=float)
    return Graph("bipartite", bipartite_embed(b), n1=b.shape[0])


def adjacency(g: Graph) -> np.ndarray:
    """Dense adjacency matrix (a writable copy)."""
    return np.array(g.matrix)


def split_signed(g: Graph) -> tuple[np.ndarray, np.ndarray]:
    """Split a signed graph into nonnegative parts with ``A = A_plus - A_minus``."""
    if g.kind != "signed":
        raise GraphDomainError(f"split_signed needs a signed graph, got {g.kind}")
    a = g.matrix
    aplus = np.where(a > 0, a, 0.0)
    aminus = np.where(a < 0, -a, 0.0)
    return aplus, aminus


def _open_text(source) -> tuple[TextIO, bool]:
    if isinstance(source, (str, os.PathLike)):
        return open(source, encoding="utf-8"), True
    return source, False


def load_edge_list(source, kind: str = "undirected") -> Graph:
    """Parse a whitespace-separated ``src dst [weight]`` edge list.

    ``source`` is a path or a text stream.  Lines starting with ``#`` and blank
    lines are skipped.  Node ids are 0-based and used verbatim, so
    ``n = 1 + max id``.  Repeated lines accumulate weight.  For bipartite input
    ``src`` indexes the first part and ``dst`` the second.
    """
    if kind not in KINDS:
        raise GraphDomainError(f"unknown graph kind {kind!r}")
    stream, owned = _open_text(source)
    rows: list[tuple[int, int, float]] = []
    try:
        for lineno, line in enumerate(stream, start=1):
            text = line.strip()
            if not text or text.startswith("#"):
                continue
            parts = text.split()
            if len(parts) not in (2, 3):
                raise GraphFormatError(f"line {lineno}: expected 'src dst [weight]', got {text!r}")
            try:
                i, j = int(parts[0]), int(parts[1])
                w = float(parts[2]) if len(parts) == 3 else 1.0
            except ValueError:
                raise GraphFormatError(f"line {lineno}: cannot parse {text!r}") from None
            if i < 0 or j < 0:
                raise GraphFormatError(f"line {lineno}: negative node id")
            if not np.isfinite(w):
                raise GraphFormatError(f"line {lineno}: non-finite weight")
            if w < 0 and kind != "signed":
                raise GraphDomainError(f"line {lineno}: negative weight in {kind} graph")
            rows.append((i, j, w))
    finally:
        if owned:
            stream.close()

    if kind == "bipartite":
        n1 = 1 + max((r[0] for r in rows), default=-1)
        n2 = 1 + max((r[1] for r in rows), default=-1)
        b = np.zeros((n1, n2))
        for i, j, w in rows:
            b[i, j] += w
        return bipartite_graph(b)

    n = 1 + max((max(i, j) for i, j, _ in rows), default=-1)
    a = np.zeros((n, n))
    for i, j, w in rows:
        _accumulate(a, i, j, w, kind)
    return Graph(kind, a)


def loads_edge_list(text: str, kind: str = "undirected") -> Graph:
    return load_edge_list(io.StringIO(text), kind)


def write_edge_list(g: Graph, path) -> None:
    """Write ``g`` so that :func:`load_edge_list` reproduces the same adjacency."""
    a = g.matrix
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"# kind={g.kind} n={g.n}\n")
        if g.kind == "bipartite":
            b = a[: g.n1, g.n1 :]
            for i, j in zip(*np.nonzero(b)):
                fh.write(f"{i} {j} {_fmt(b[i, j])}\n")
        elif g.kind == "directed":
            for i, j in zip(*np.nonzero(a)):
                fh.write(f"{i} {j} {_fmt(a[i, j])}\n")
        else:
            for i, j in zip(*np.nonzero(np.triu(a))):
                w = a[i, j] / 2.0 if i == j else a[i, j]
                fh.write(f"{i} {j} {_fmt(w)}\n")


def _fmt(w: float) -> str:
    return str(int(w)) if float(w).is_integer() else repr(float(w))


def read_labels(path) -> np.ndarray:
    """Read a label file: one integer per line, line ``i`` is node ``i``."""
    labels = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            text = line.strip()
            if not text:
                continue
            try:
                labels.append(int(text))
            except ValueError:
                raise GraphFormatError(f"{path}:{lineno}: not an integer label: {text!r}") from None
    if not labels:
        raise GraphFormatError(f"{path}: empty label file")
    return np.asarray(labels, dtype=np.int64)


def write_labels(labels, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for lab in np.asarray(labels, dtype=np.int64):
            fh.write(f"{int(lab)}\n")
