"""Combinatorial symmetry structures for the cut relaxations.

The central object is a coherent configuration: a partition of ordered
vertex pairs into 0/1 matrices that is closed under transposition and
matrix products and contains the identity as a union of diagonal classes.
We compute the coarsest such partition refining a given pair coloring via
2-dimensional Weisfeiler-Leman refinement, which is all the machinery the
relaxations need: restricting an invariant SDP to the span of any coherent
configuration containing its data matrices preserves the optimum.

Also here: the rank-12 configuration of the cut graph together with its
explicit block *-isomorphism (three scalars plus a 3x3 block), and numeric
simultaneous diagonalization for commutative symmetric configurations.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .graphs import Graph

__all__ = [
    "CoherentConfig",
    "CutConfig",
    "OrbitClasses",
    "PhiImage",
    "SchemeSpectrum",
    "cut_config",
    "edge_orbit_classes",
    "scheme_spectrum",
    "stabilizer_config",
    "wl_closure",
]

EIGENSPACE_MERGE_TOL = 1e-6
SCHEME_SPECTRUM_SEED = 20240901


@dataclass(frozen=True)
class CoherentConfig:
    """Partition of all ordered pairs on n points into r coherent classes.

    ``class_of[u, v]`` is the class index in ``0..r-1``; classes are numbered
    by first occurrence in row-major order, so the representative pair of a
    class is also its lexicographically smallest member.
    """

    n: int
    r: int
    class_of: np.ndarray
    diag_classes: tuple
    transpose_of: np.ndarray
    sizes: np.ndarray

    def __post_init__(self):
        self.class_of.setflags(write=False)
        self.transpose_of.setflags(write=False)
        self.sizes.setflags(write=False)

    def class_matrix(self, i: int) -> np.ndarray:
        return (self.class_of == i).astype(np.int8)

    def representative(self, i: int) -> tuple:
        flat = int(np.argmax(self.class_of.reshape(-1) == i))
        return (flat // self.n, flat % self.n)

    @property
    def is_symmetric(self) -> bool:
        return bool(np.all(self.transpose_of == np.arange(self.r)))

    def is_commutative(self) -> bool:
        """Exact commutativity check of the class matrices."""
        mats = [self.class_matrix(i).astype(np.int64) for i in range(self.r)]
        for i in range(self.r):
            for j in range(i + 1, self.r):
                if not np.array_equal(mats[i] @ mats[j], mats[j] @ mats[i]):
                    return False
        return True


def wl_closure(n: int, initial_pair_coloring: np.ndarray) -> CoherentConfig:
    """Coarsest coherent configuration refining the given pair coloring.

    The input coloring is first refined so that the diagonal is separated
    and transpose consistency holds, then each pair (u, v) is iteratively
    recolored by the multiset of intermediate color pairs
    (color(u, w), color(w, v)) until a fixed point.  Terminates in at most
    n^2 rounds since every round strictly refines or stops.
    """
    colors = np.asarray(initial_pair_coloring)
    if colors.shape != (n, n):
        raise ValueError(f"pair coloring must be {n}x{n}")
    # Separate the diagonal and enforce transpose consistency up front.
    base = np.stack(
        [np.eye(n, dtype=np.int64), colors.astype(np.int64), colors.T.astype(np.int64)],
        axis=2,
    )
    colors = _canonical_labels(base.reshape(n * n, 3), n)
    while True:
        r = int(colors.max()) + 1
        # signature[u, v, w] encodes the color pair (c(u,w), c(w,v)).
        sig = colors[:, None, :] * np.int64(r) + colors.T[None, :, :]
        sig.sort(axis=2)
        rows = np.concatenate([colors.reshape(n * n, 1), sig.reshape(n * n, n)], axis=1)
        new_colors = _canonical_labels(rows, n)
        if new_colors.max() == colors.max():
            break
        colors = new_colors
    return _config_from_classes(n, colors)


def _canonical_labels(rows: np.ndarray, n: int) -> np.ndarray:
    """Relabel distinct rows with ids ordered by first occurrence, row-major."""
    _, first, inverse = np.unique(rows, axis=0, return_index=True, return_inverse=True)
    order = np.argsort(np.argsort(first))
    return order[inverse].reshape(n, n)


def _config_from_classes(n: int, class_of: np.ndarray) -> CoherentConfig:
    r = int(class_of.max()) + 1
    sizes = np.bincount(class_of.reshape(-1), minlength=r)
    diag = tuple(sorted(set(np.diag(class_of).tolist())))
    transpose_of = np.empty(r, dtype=np.int64)
    flat_first = np.full(r, -1, dtype=np.int64)
    flat = class_of.reshape(-1)
    seen = np.unique(flat, return_index=True)
    flat_first[seen[0]] = seen[1]
    for i in range(r):
        u, v = divmod(int(flat_first[i]), n)
        transpose_of[i] = class_of[v, u]
    return CoherentConfig(n, r, class_of.astype(np.int64), diag, transpose_of, sizes)


def verify_coherent(cfg: CoherentConfig) -> None:
    """Check the three coherent-configuration axioms by exhaustive counting.

    Quadratic-to-cubic in n; intended for tests on small instances.
    """
    n, r = cfg.n, cfg.r
    if sorted(np.unique(np.diag(cfg.class_of)).tolist()) != list(cfg.diag_classes):
        raise AssertionError("diagonal classes mismatch")
    offdiag = cfg.class_of[~np.eye(n, dtype=bool)]
    if np.isin(offdiag, cfg.diag_classes).any():
        raise AssertionError("a diagonal class leaks off the diagonal")
    for i in range(r):
        mat = cfg.class_of == i
        if not np.array_equal(mat.T, cfg.class_of == cfg.transpose_of[i]):
            raise AssertionError(f"transpose closure fails for class {i}")
    mats = [(cfg.class_of == i).astype(np.int64) for i in range(r)]
    for i in range(r):
        for j in range(r):
            prod = mats[i] @ mats[j]
            for k in range(r):
                vals = prod[cfg.class_of == k]
                if vals.size and not np.all(vals == vals.flat[0]):
                    raise AssertionError(
                        f"intersection number for ({i},{j})->{k} is not constant"
                    )


@dataclass(frozen=True)
class OrbitClasses:
    """Edge/nonedge classes of a graph's coherent closure.

    ``t`` counts the nondiagonal classes; ``representatives[h]`` is the
    lexicographically smallest ordered pair of class h (0-based), and
    ``is_edge[h]`` tells whether that class lies inside the edge set.
    """

    t: int
    representatives: tuple
    is_edge: tuple
    config: CoherentConfig = field(repr=False)
    nondiag_classes: tuple = field(repr=False)


def edge_orbit_classes(g: Graph) -> OrbitClasses:
    """Closure of the diagonal/edge/nonedge coloring, nondiagonal classes only."""
    init = np.where(np.eye(g.n, dtype=bool), 0, np.where(g.adj == 1, 1, 2))
    cfg = wl_closure(g.n, init)
    nondiag = [i for i in range(cfg.r) if i not in cfg.diag_classes]
    reps = []
    is_edge = []
    for i in nondiag:
        u, v = cfg.representative(i)
        reps.append((u, v))
        is_edge.append(bool(g.adj[u, v]))
    return OrbitClasses(len(nondiag), tuple(reps), tuple(is_edge), cfg, tuple(nondiag))


def stabilizer_config(g: Graph, r1: int, r2: int) -> CoherentConfig:
    """Coherent configuration on V minus {r1, r2} refining adjacency together
    with adjacency to the two removed vertices.

    The span of the result contains A(alpha), Diag(A(alpha, r1)),
    Diag(A(alpha, r2)), I and J by construction.  Ground points keep the
    original vertex order with r1 and r2 removed.
    """
    if r1 == r2:
        raise ValueError("stabilizer_config requires two distinct vertices")
    alpha = [v for v in range(g.n) if v not in (r1, r2)]
    sub = g.adj[np.ix_(alpha, alpha)].astype(np.int64)
    to_r1 = g.adj[alpha, r1].astype(np.int64)
    to_r2 = g.adj[alpha, r2].astype(np.int64)
    m = len(alpha)
    init = (
        sub
        + 2 * (to_r1[:, None] + 2 * to_r2[:, None] + 4 * to_r1[None, :] + 8 * to_r2[None, :])
    )
    return wl_closure(m, init)


# ----------------------------------------------------------------------------
# The cut-graph configuration and its block *-isomorphism
# ----------------------------------------------------------------------------

# Class ids follow the fixed rank-12 pattern on three parts: 1/6/11 are the
# within-part identities, 2/7/12 the within-part off-diagonals, and
# 3=5^T, 4=9^T, 8=10^T the between-part blocks (part pairs (1,2), (1,3), (2,3)).
_DIAG_CLASS = {1: 1, 2: 6, 3: 11}
_OFFDIAG_CLASS = {1: 2, 2: 7, 3: 12}
_CROSS_CLASS = {(1, 2): 3, (2, 1): 5, (1, 3): 4, (3, 1): 9, (2, 3): 8, (3, 2): 10}
_TRANSPOSE = {1: 1, 2: 2, 3: 5, 4: 9, 5: 3, 6: 6, 7: 7, 8: 10, 9: 4, 10: 8, 11: 11, 12: 12}
CUT_DIAG_IDS = (1, 6, 11)
CUT_EDGE_IDS = (3, 5)


@dataclass(frozen=True)
class CutConfig:
    """Rank-12 configuration of the cut graph on parts (a, b, c); classes
    with no pairs are dropped."""

    part_sizes: tuple
    classes: tuple  # class ids present, in increasing id order
    class_of: np.ndarray  # n x n matrix of class ids (from the fixed pattern)
    sizes: dict  # id -> number of pairs q_j
    transpose_of: dict  # id -> id

    @property
    def n(self) -> int:
        return int(sum(self.part_sizes))

    def class_matrix(self, j: int) -> np.ndarray:
        return (self.class_of == j).astype(np.int8)

    def part_of(self) -> np.ndarray:
        a, b, c = self.part_sizes
        return np.repeat([1, 2, 3], [a, b, c])


@dataclass(frozen=True)
class PhiImage:
    """Block images of the cut classes under the algebra *-isomorphism.

    Each class j maps to up to three scalars (one per part whose within-part
    off-diagonal space is nonempty, i.e. part size >= 2) plus one k x k
    matrix indexed by the nonempty parts (k <= 3).
    """

    part_sizes: tuple
    scalar_parts: tuple  # parts (1-based) with an active scalar slot
    block_parts: tuple  # nonempty parts indexing the small matrix block
    scalars: dict  # id -> tuple of scalar values aligned with scalar_parts
    blocks: dict  # id -> (k, k) ndarray

    @property
    def block_dim(self) -> int:
        return len(self.block_parts)

    def apply(self, coeffs: dict) -> tuple:
        """Image of sum_j coeffs[j] * B_j as (scalar vector, block matrix)."""
        scal = np.zeros(len(self.scalar_parts))
        blk = np.zeros((self.block_dim, self.block_dim))
        for j, w in coeffs.items():
            scal += w * np.asarray(self.scalars[j])
            blk += w * self.blocks[j]
        return scal, blk


def cut_config(a: int, b: int, c: int) -> tuple:
    """Cut-graph configuration with part sizes (a, b, c) and its block map.

    For the beta side of a fixed-pair subproblem the caller passes
    (m1-1, m2-1, m3).
    """
    if min(a, b, c) < 0 or a + b + c < 1:
        raise ValueError(f"invalid cut part sizes ({a},{b},{c})")
    sizes_all = {
        1: a, 2: a * (a - 1), 3: a * b, 4: a * c, 5: a * b,
        6: b, 7: b * (b - 1), 8: b * c, 9: a * c, 10: b * c,
        11: c, 12: c * (c - 1),
    }
    part = np.repeat([1, 2, 3], [a, b, c])
    n = a + b + c
    class_of = np.zeros((n, n), dtype=np.int64)
    for u in range(n):
        for v in range(n):
            pu, pv = part[u], part[v]
            if pu == pv:
                class_of[u, v] = _DIAG_CLASS[pu] if u == v else _OFFDIAG_CLASS[pu]
            else:
                class_of[u, v] = _CROSS_CLASS[(pu, pv)]
    present = tuple(j for j in range(1, 13) if sizes_all[j] > 0)
    cfg = CutConfig(
        (a, b, c),
        present,
        class_of,
        {j: sizes_all[j] for j in present},
        {j: _TRANSPOSE[j] for j in present},
    )
    return cfg, _phi_image(a, b, c, present)


def _phi_image(a, b, c, present) -> PhiImage:
    sizes = (a, b, c)
    scalar_parts = tuple(k for k in (1, 2, 3) if sizes[k - 1] >= 2)
    block_parts = tuple(k for k in (1, 2, 3) if sizes[k - 1] >= 1)
    pos = {k: i for i, k in enumerate(block_parts)}
    kdim = len(block_parts)
    sq = {
        3: np.sqrt(a * b), 5: np.sqrt(a * b),
        4: np.sqrt(a * c), 9: np.sqrt(a * c),
        8: np.sqrt(b * c), 10: np.sqrt(b * c),
    }
    # (scalar slot part, scalar value, block row part, block col part, block value)
    table = {
        1: (1, 1.0, 1, 1, 1.0),
        2: (1, -1.0, 1, 1, a - 1.0),
        3: (None, 0.0, 1, 2, sq.get(3, 0.0)),
        4: (None, 0.0, 1, 3, sq.get(4, 0.0)),
        5: (None, 0.0, 2, 1, sq.get(5, 0.0)),
        6: (2, 1.0, 2, 2, 1.0),
        7: (2, -1.0, 2, 2, b - 1.0),
        8: (None, 0.0, 2, 3, sq.get(8, 0.0)),
        9: (None, 0.0, 3, 1, sq.get(9, 0.0)),
        10: (None, 0.0, 3, 2, sq.get(10, 0.0)),
        11: (3, 1.0, 3, 3, 1.0),
        12: (3, -1.0, 3, 3, c - 1.0),
    }
    scalars = {}
    blocks = {}
    for j in present:
        slot, sval, rp, cp, bval = table[j]
        svec = np.zeros(len(scalar_parts))
        if slot in scalar_parts:
            svec[scalar_parts.index(slot)] = sval
        blk = np.zeros((kdim, kdim))
        blk[pos[rp], pos[cp]] = bval
        scalars[j] = tuple(svec.tolist())
        blocks[j] = blk
    return PhiImage(sizes, scalar_parts, block_parts, scalars, blocks)


# ----------------------------------------------------------------------------
# Simultaneous diagonalization of commutative symmetric configurations
# ----------------------------------------------------------------------------


@dataclass(frozen=True)
class SchemeSpectrum:
    """Eigenvalue table of a commutative symmetric configuration.

    ``table[e, i]`` is the eigenvalue of class matrix i on common eigenspace
    e; ``multiplicities[e]`` its dimension.
    """

    table: np.ndarray
    multiplicities: np.ndarray

    @property
    def num_spaces(self) -> int:
        return self.table.shape[0]


def scheme_spectrum(cfg: CoherentConfig, attempts: int = 3) -> SchemeSpectrum:
    """Common eigenvalues of all class matrices of an association scheme.

    Diagonalizes a random generic combination of the classes (seeded RNG,
    reproducible) and recovers per-class eigenvalues by Rayleigh quotients;
    eigenspaces whose eigenvalue rows agree within 1e-6 are merged.
    """
    if not cfg.is_symmetric:
        raise ValueError("scheme_spectrum requires all classes symmetric")
    if not cfg.is_commutative():
        raise ValueError("scheme_spectrum requires a commutative configuration")
    mats = [cfg.class_matrix(i).astype(float) for i in range(cfg.r)]
    rng = np.random.default_rng(SCHEME_SPECTRUM_SEED)
    for _ in range(attempts):
        w = rng.uniform(1.0, 2.0, size=cfg.r)
        generic = sum(wi * m for wi, m in zip(w, mats))
        _, vecs = np.linalg.eigh(generic)
        rows = np.empty((cfg.n, cfg.r))
        ok = True
        for i, m in enumerate(mats):
            proj = vecs.T @ m @ vecs
            rows[:, i] = np.diag(proj)
            if np.max(np.abs(proj - np.diag(np.diag(proj)))) > 1e-7 * max(1.0, cfg.n):
                ok = False
                break
        if not ok:
            continue
        return _merge_eigenspaces(rows)
    raise ArithmeticError("failed to separate scheme eigenspaces after reseeding")


def _merge_eigenspaces(rows: np.ndarray) -> SchemeSpectrum:
    n = rows.shape[0]
    used = np.zeros(n, dtype=bool)
    table = []
    mult = []
    for i in range(n):
        if used[i]:
            continue
        same = np.all(np.abs(rows - rows[i]) <= EIGENSPACE_MERGE_TOL, axis=1) & ~used
        used |= same
        group = rows[same]
        table.append(group.mean(axis=0))
        mult.append(int(same.sum()))
    return SchemeSpectrum(np.array(table), np.array(mult, dtype=np.int64))
