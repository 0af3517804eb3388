"""Graph families, Laplacian spectra, and exact-bandwidth oracles.

Vertex orderings are canonical and deterministic per family:

* Hamming graphs use lexicographic tuples over the alphabet ``0..q-1``.
* Generalized Hamming graphs use lexicographic triples over the three
  coordinate alphabets.
* Johnson and Kneser graphs use lexicographic d-subsets of ``0..v-1``.

All structures are immutable after construction and safe to share.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "Graph",
    "GraphSpec",
    "LaplacianSpectrum",
    "build_graph",
    "known_bandwidth",
    "laplacian_spectrum",
    "load_adjacency",
    "write_edge_list",
]

FAMILIES = ("hamming", "genhamming", "johnson", "kneser", "file")

# Zero-eigenvalue tolerance for Laplacian spectra at n <= 216.
SPECTRUM_TOL = 1e-8


class GraphError(ValueError):
    """Invalid graph specification or malformed graph input."""


@dataclass(frozen=True)
class GraphSpec:
    """Identifies a graph: a named family with parameters, or a file path."""

    family: str
    params: tuple

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise GraphError(f"unknown graph family {self.family!r}")
        if self.family == "file":
            if len(self.params) != 1 or not isinstance(self.params[0], str):
                raise GraphError("file spec takes a single path parameter")
            return
        if not all(isinstance(p, int) for p in self.params):
            raise GraphError(f"{self.family} parameters must be integers")
        if self.family == "hamming":
            d, q = _expect(self.params, 2, "hamming:d,q")
            if d < 1 or q < 2:
                raise GraphError(f"hamming requires d >= 1 and q >= 2, got {d},{q}")
        elif self.family == "genhamming":
            q1, q2, q3 = _expect(self.params, 3, "genhamming:q1,q2,q3")
            if min(q1, q2, q3) < 2:
                raise GraphError("genhamming requires all alphabet sizes >= 2")
        else:  # johnson | kneser
            v, d = _expect(self.params, 2, f"{self.family}:v,d")
            if not 1 <= d <= v / 2:
                raise GraphError(f"{self.family} requires 1 <= d <= v/2, got {v},{d}")

    @classmethod
    def parse(cls, text: str) -> "GraphSpec":
        """Parse ``family:p1,p2,...`` or ``file:path``."""
        family, sep, rest = text.partition(":")
        if not sep or not rest:
            raise GraphError(f"malformed graph spec {text!r}, expected family:params")
        if family == "file":
            return cls("file", (rest,))
        try:
            params = tuple(int(p) for p in rest.split(","))
        except ValueError:
            raise GraphError(f"non-integer parameter in graph spec {text!r}") from None
        return cls(family, params)

    @property
    def label(self) -> str:
        return self.family + ":" + ",".join(str(p) for p in self.params)


def _expect(params, k, usage):
    if len(params) != k:
        raise GraphError(f"expected {usage}, got {len(params)} parameters")
    return params


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph: symmetric 0/1 adjacency with zero diagonal."""

    n: int
    adj: np.ndarray
    spec: GraphSpec | None = None

    def __post_init__(self):
        adj = np.asarray(self.adj, dtype=np.int8)
        if adj.shape != (self.n, self.n):
            raise GraphError(f"adjacency shape {adj.shape} does not match n={self.n}")
        if self.n < 2:
            raise GraphError("graphs must have at least 2 vertices")
        if not np.array_equal(adj, adj.T):
            raise GraphError("adjacency matrix is not symmetric")
        if np.any(np.diag(adj) != 0):
            raise GraphError("adjacency matrix has a nonzero diagonal (self-loop)")
        if not np.isin(adj, (0, 1)).all():
            raise GraphError("adjacency entries must be 0 or 1")
        adj.setflags(write=False)
        object.__setattr__(self, "adj", adj)

    @property
    def degrees(self) -> np.ndarray:
        return self.adj.sum(axis=1, dtype=np.int64)

    @property
    def num_edges(self) -> int:
        return int(self.adj.sum()) // 2

    def edges(self):
        """Edges (u, v) with u < v, in row-major order."""
        iu, iv = np.nonzero(np.triu(self.adj, 1))
        return list(zip(iu.tolist(), iv.tolist()))

    @property
    def label(self) -> str:
        return self.spec.label if self.spec is not None else f"graph-n{self.n}"


@dataclass(frozen=True)
class LaplacianSpectrum:
    """Sorted Laplacian eigenvalues with the two that drive the cut bound."""

    eigenvalues: np.ndarray
    lambda2: float = field(init=False)
    lambda_n: float = field(init=False)

    def __post_init__(self):
        ev = np.sort(np.asarray(self.eigenvalues, dtype=float))
        ev.setflags(write=False)
        object.__setattr__(self, "eigenvalues", ev)
        object.__setattr__(self, "lambda2", float(ev[1]))
        object.__setattr__(self, "lambda_n", float(ev[-1]))


def build_graph(spec: GraphSpec) -> Graph:
    """Construct a family graph in its canonical vertex order, or load a file."""
    if spec.family == "hamming":
        d, q = spec.params
        return _product_of_cliques([q] * d, spec)
    if spec.family == "genhamming":
        return _product_of_cliques(list(spec.params), spec)
    if spec.family in ("johnson", "kneser"):
        v, d = spec.params
        subsets = [frozenset(c) for c in itertools.combinations(range(v), d)]
        n = len(subsets)
        target = d - 1 if spec.family == "johnson" else 0
        adj = np.zeros((n, n), dtype=np.int8)
        for i in range(n):
            for j in range(i + 1, n):
                if len(subsets[i] & subsets[j]) == target:
                    adj[i, j] = adj[j, i] = 1
        return Graph(n, adj, spec)
    return load_adjacency(spec.params[0])


def _product_of_cliques(sizes, spec):
    """Cartesian product of complete graphs: tuples adjacent iff they differ
    in exactly one coordinate."""
    verts = np.array(list(itertools.product(*(range(q) for q in sizes))))
    diff = (verts[:, None, :] != verts[None, :, :]).sum(axis=2)
    adj = (diff == 1).astype(np.int8)
    return Graph(len(verts), adj, spec)


def laplacian_spectrum(g: Graph) -> LaplacianSpectrum:
    """Eigenvalues of Diag(degrees) - adj via a dense symmetric eigensolver."""
    lap = np.diag(g.degrees.astype(float)) - g.adj.astype(float)
    try:
        ev = np.linalg.eigvalsh(lap)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - n <= 216 never hits
        raise ArithmeticError(f"Laplacian eigensolver failed: {exc}") from exc
    spec = LaplacianSpectrum(ev)
    if abs(spec.eigenvalues[0]) > SPECTRUM_TOL * g.n:
        raise ArithmeticError(
            f"smallest Laplacian eigenvalue {spec.eigenvalues[0]:.3e} is not zero"
        )
    return spec


def known_bandwidth(spec: GraphSpec) -> int | None:
    """Exact bandwidth where a closed form is known.

    Covers hypercubes H(d,2), lattice graphs H(2,q), and triangular graphs
    J(v,2).  Returns None for every other spec.
    """
    if spec.family == "hamming":
        d, q = spec.params
        if q == 2:
            return sum(math.comb(i, i // 2) for i in range(d))
        if d == 2:
            return (q + 1) * q // 2 - 1
    elif spec.family == "johnson":
        v, d = spec.params
        if d == 2:
            return v * v // 4 + (v + 1) // 2 - 2
    return None


def load_adjacency(path) -> Graph:
    """Read the edge-list format: first line ``n m``, then m lines ``u v``
    with 1-based vertex indices, undirected, no duplicates or self-loops."""
    with open(path, "r", encoding="utf-8") as fh:
        tokens_per_line = [line.split() for line in fh if line.strip()]
    if not tokens_per_line:
        raise GraphError(f"{path}: empty edge-list file")
    header = tokens_per_line[0]
    if len(header) != 2:
        raise GraphError(f"{path}: header must be 'n m'")
    try:
        n, m = int(header[0]), int(header[1])
    except ValueError:
        raise GraphError(f"{path}: non-integer header") from None
    if len(tokens_per_line) - 1 != m:
        raise GraphError(f"{path}: expected {m} edge lines, found {len(tokens_per_line) - 1}")
    adj = np.zeros((n, n), dtype=np.int8)
    for lineno, tok in enumerate(tokens_per_line[1:], start=2):
        if len(tok) != 2:
            raise GraphError(f"{path}:{lineno}: expected 'u v'")
        try:
            u, v = int(tok[0]), int(tok[1])
        except ValueError:
            raise GraphError(f"{path}:{lineno}: non-integer vertex index") from None
        if not (1 <= u <= n and 1 <= v <= n):
            raise GraphError(f"{path}:{lineno}: vertex index out of range 1..{n}")
        if u == v:
            raise GraphError(f"{path}:{lineno}: self-loop on vertex {u}")
        if adj[u - 1, v - 1]:
            raise GraphError(f"{path}:{lineno}: duplicate edge ({u},{v})")
        adj[u - 1, v - 1] = adj[v - 1, u - 1] = 1
    return Graph(n, adj, GraphSpec("file", (str(path),)))


def write_edge_list(g: Graph, path) -> None:
    """Write a graph in the edge-list format accepted by load_adjacency."""
    edges = g.edges()
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{g.n} {len(edges)}\n")
        for u, v in edges:
            fh.write(f"{u + 1} {v + 1}\n")
