"""Min-cut relaxations and their conversion to bandwidth lower bounds.

Three bound families, ordered by strength (and cost):

* ``eig_bound``: the closed-form Laplacian eigenvalue bound.
* ``mcqap``: the cut-graph QAP relaxation, reduced through the rank-12
  coherent configuration of the cut graph; variables become coefficients
  over the graph's own coherent closure.
* ``mc_fix``: the fixed-pair strengthening, one SDP subproblem per
  edge/nonedge class of the closure; the bound is the minimum over the
  subproblem values.

A certified min-cut lower bound alpha converts to a bandwidth lower bound.
For the SDP methods both the classic inequality
``max(m3+1, m3 + ceil(sqrt(2 alpha)) - 1)`` and its integer-rounded
improvement ``m3 + ceil(-1/2 + sqrt(2 ceil(alpha) + 1/4))`` are applied and
the maximum taken; both are valid because the exact min-cut value is an
integer.  The eigenvalue scan reports the classic conversion only, which is
what the reference bound tables use.
"""

from __future__ import annotations

import itertools
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import conic
from .conic import ConicProblem, LMIBlock, SolverFailure
from .graphs import Graph, laplacian_spectrum
from .heuristic import HeuristicConfig, run_heuristic
from .symmetry import (
    CUT_DIAG_IDS,
    OrbitClasses,
    SchemeSpectrum,
    cut_config,
    edge_orbit_classes,
    scheme_spectrum,
    stabilizer_config,
)

__all__ = [
    "EigBound",
    "FixSubproblem",
    "McBound",
    "PartitionM",
    "bandwidth_from_mincut",
    "brute_force_mincut",
    "build_fix_subproblem",
    "build_mcqap",
    "eig_bound",
    "eig_scan",
    "mc_fix",
    "mcqap",
    "reduce_mcqap_scheme",
    "scan",
]

# Guard subtracted before every integer ceiling so a certified alpha sitting
# numerically just above an integer cannot round up.
CEIL_GUARD = 1e-6
VARIABLE_CAP = 5000
ENUM_CAP = 10 ** 7

# Source (row) part and target (column) part of each cut class in the fixed
# rank-12 pattern.
_CUT_SRC = {1: 1, 2: 1, 3: 1, 4: 1, 5: 2, 6: 2, 7: 2, 8: 2, 9: 3, 10: 3, 11: 3, 12: 3}
_CUT_TGT = {1: 1, 2: 1, 3: 2, 4: 3, 5: 1, 6: 2, 7: 2, 8: 3, 9: 1, 10: 2, 11: 3, 12: 3}
_PART_DIAG = {1: 1, 2: 6, 3: 11}


@dataclass(frozen=True)
class PartitionM:
    """Part sizes (m1, m2, m3) of a min-cut instance; m3 may be zero."""

    m1: int
    m2: int
    m3: int

    def __post_init__(self):
        if self.m1 < 1 or self.m2 < 1 or self.m3 < 0:
            raise ValueError(f"invalid partition sizes {self.as_tuple()}")

    def validate(self, n: int) -> "PartitionM":
        if self.m1 + self.m2 + self.m3 != n:
            raise ValueError(f"partition {self.as_tuple()} does not sum to n={n}")
        return self

    def as_tuple(self):
        return (self.m1, self.m2, self.m3)


@dataclass(frozen=True)
class EigBound:
    mu1: float
    mu2: float
    value: float


@dataclass(frozen=True)
class FixSubproblem:
    h: int  # 1-based class index
    representative: tuple
    is_edge: bool
    chat: np.ndarray
    dh: float
    problem: ConicProblem
    num_classes: int


@dataclass
class McBound:
    method: str
    m: PartitionM
    alpha: float
    bandwidth_lb: int
    sub_values: list = field(default_factory=list)  # dicts (h, rep, classes, mu) for fix
    solver_info: dict = field(default_factory=dict)
    wall_time_s: float = 0.0


def _ceil_guarded(x: float) -> int:
    return math.ceil(x - CEIL_GUARD)


def bandwidth_from_mincut(alpha: float, m3: int, improved: bool = True) -> int:
    """Bandwidth lower bound from a certified min-cut lower bound alpha.

    Returns 0 when alpha <= 0 (no information).
    """
    if alpha <= 0:
        return 0
    classic = max(m3 + 1, m3 + _ceil_guarded(math.sqrt(2 * alpha)) - 1)
    if not improved:
        return classic
    rounded_alpha = _ceil_guarded(alpha)
    improved_bound = m3 + _ceil_guarded(-0.5 + math.sqrt(2 * rounded_alpha + 0.25))
    return max(classic, improved_bound)


# ----------------------------------------------------------------------------
# Eigenvalue bound
# ----------------------------------------------------------------------------


def eig_bound(g: Graph, m: PartitionM, spectrum=None) -> EigBound:
    """Closed-form cut bound -mu2*lambda2/2 - mu1*lambda_n/2."""
    m.validate(g.n)
    if spectrum is None:
        spectrum = laplacian_spectrum(g)
    n = g.n
    prod = m.m1 * m.m2
    root = math.sqrt(prod * (n - m.m1) * (n - m.m2))
    mu1 = (-prod + root) / n
    mu2 = (-prod - root) / n
    value = -0.5 * mu2 * spectrum.lambda2 - 0.5 * mu1 * spectrum.lambda_n
    return EigBound(mu1, mu2, value)


# ----------------------------------------------------------------------------
# Shared assembly of the block-mapped PSD constraints
# ----------------------------------------------------------------------------


def _sparse_classes(mats):
    out = []
    for mat in mats:
        rr, cc = np.nonzero(mat)
        out.append((rr.astype(np.int64), cc.astype(np.int64), np.ones(len(rr))))
    return out


def _fiber_diag_classes(cfg):
    """Per class: the diagonal class of its source (row) and target (column)
    fiber, looked up via the class representative."""
    dsrc, dtgt = {}, {}
    diag = np.diag(cfg.class_of)
    for k in range(cfg.r):
        u, v = cfg.representative(k)
        dsrc[k] = int(diag[u])
        dtgt[k] = int(diag[v])
    return dsrc, dtgt


def _proportion_rows(prob, cut, jlist, vid, dsrc, fibers, classes, mass):
    """Cross-term identities of the lifted matrix's all-ones action.

    For every source fiber f and cut row-part r, the per-target-part masses
    (t1+t2)/m1' = t3/m2' = t4/m3' (and the analogues for rows 2 and 3) are
    forced at every PSD feasible point; stating them linearly lets the
    solver's facial reduction stay exact.  ``mass(j, i)`` gives the weight of
    variable (j, i) in t_j^f, and ``classes`` iterates the A-side classes.
    """
    sizes = cut.part_sizes
    for f in fibers:
        members = [i for i in classes if dsrc[i] == f]
        for r in (1, 2, 3):
            targets = [c for c in (1, 2, 3) if sizes[c - 1] >= 1]
            terms = []
            for c in targets:
                idx, vals = [], []
                for j in jlist:
                    if _CUT_SRC[j] != r or _CUT_TGT[j] != c:
                        continue
                    for i in members:
                        if (j, i) in vid:
                            idx.append(vid[(j, i)])
                            vals.append(mass(j, i) / sizes[c - 1])
                terms.append((idx, vals))
            terms = [t for t in terms if t[0]]
            for (i1, v1), (i2, v2) in zip(terms, terms[1:]):
                prob.add_equality(i1 + i2, list(v1) + [-v for v in v2], 0.0)


def _append_phi_blocks(prob, dim, jlist, klist, acoo, weight, vid, phi, spectrum=None):
    """PSD blocks of  sum_{j,k} w(j,k) x[j,k] (phi(B_j) kron A_k).

    One block per scalar slot of the cut algebra (order ``dim``) plus one for
    the small matrix slot (order ``block_dim * dim``).  With ``spectrum``
    each A_k collapses to its per-eigenspace eigenvalue and every block is
    emitted once per eigenspace with ``dim`` = 1.
    """
    spaces = [None] if spectrum is None else list(range(spectrum.num_spaces))
    for e in spaces:
        if e is None:
            adata = acoo
            d = dim
        else:
            adata = [
                (np.zeros(1, dtype=np.int64), np.zeros(1, dtype=np.int64),
                 np.array([spectrum.table[e, k]]))
                for k in range(len(klist))
            ]
            d = 1
        for slot_i in range(len(phi.scalar_parts)):
            var, row, col, val = [], [], [], []
            for j in jlist:
                sval = phi.scalars[j][slot_i]
                if sval == 0.0:
                    continue
                for kpos, k in enumerate(klist):
                    rr, cc, vv = adata[kpos]
                    if (j, k) not in vid:
                        continue
                    w = weight(j, k) * sval
                    var.append(np.full(len(rr), vid[(j, k)], dtype=np.int64))
                    row.append(rr)
                    col.append(cc)
                    val.append(w * vv)
            if var:
                prob.blocks.append(_cat_block(d, var, row, col, val))
        var, row, col, val = [], [], [], []
        for j in jlist:
            blk = phi.blocks[j]
            for br, bc in zip(*np.nonzero(blk)):
                bval = blk[br, bc]
                for kpos, k in enumerate(klist):
                    rr, cc, vv = adata[kpos]
                    if (j, k) not in vid:
                        continue
                    w = weight(j, k) * bval
                    var.append(np.full(len(rr), vid[(j, k)], dtype=np.int64))
                    row.append(rr + br * d)
                    col.append(cc + bc * d)
                    val.append(w * vv)
        if var:
            prob.blocks.append(_cat_block(phi.block_dim * d, var, row, col, val))


def _cat_block(order, var, row, col, val):
    return LMIBlock(
        order,
        np.concatenate(var),
        np.concatenate(row),
        np.concatenate(col),
        np.concatenate(val),
    )


# ----------------------------------------------------------------------------
# Cut-graph QAP relaxation over the coherent closure
# ----------------------------------------------------------------------------


def build_mcqap(g: Graph, m: PartitionM, orbits: OrbitClasses | None = None) -> ConicProblem:
    """Cut relaxation with matrix variables X_j per cut class, expanded over
    the coherent closure of g: X_j = sum_k y[j,k] A_k.

    Constraints: the within-part identities sum to I, all X_j sum to J,
    tr(J X_j) matches the cut class size, everything entrywise nonnegative,
    transpose links y[j,k] = y[j*,k*], and the PSD blocks produced by the
    cut algebra's block map (one order-n block per part of size >= 2, one of
    order (number of nonempty parts) * n).
    """
    m.validate(g.n)
    if orbits is None:
        orbits = edge_orbit_classes(g)
    closure = orbits.config
    cut, phi = cut_config(m.m1, m.m2, m.m3)
    jlist = list(cut.classes)
    klist = list(range(closure.r))
    if len(jlist) * len(klist) > VARIABLE_CAP:
        raise SolverFailure(
            f"coherent closure too large ({closure.r} classes); "
            "this relaxation targets graphs with symmetry"
        )
    # Coefficients pairing a diagonal class with an off-diagonal one vanish in
    # every feasible point (the within-part identities must sum to I while all
    # twelve matrices sum to J), so those variables are never created.
    pairs = [
        (j, k)
        for j, k in itertools.product(jlist, klist)
        if (j in CUT_DIAG_IDS) == (k in closure.diag_classes)
    ]
    vid = {p: t for t, p in enumerate(pairs)}
    nvars = len(pairs)
    amats = [closure.class_matrix(k) for k in klist]
    psize = closure.sizes.astype(float)
    # tr(A A_k) equals the class size exactly when class k lies in the edge set
    tr_a = np.array([float(np.sum(g.adj * amats[k].T)) for k in klist])

    c = np.zeros(nvars)
    for j in (3, 5):
        if j in cut.sizes:
            for k in klist:
                if (j, k) in vid:
                    c[vid[(j, k)]] += 0.5 * tr_a[k]
    # barycenter over all partitions: a PSD feasible point used by the
    # solver's facial reduction
    hint = np.empty(nvars)
    n = g.n
    for (j, k), t in vid.items():
        if j in CUT_DIAG_IDS:
            hint[t] = cut.sizes[j] / n
        else:
            hint[t] = cut.sizes[j] / (n * (n - 1))
    prob = ConicProblem(nvars=nvars, c=c, nonneg=np.arange(nvars), interior_hint=hint)
    prob.meta = {
        "kind": "mcqap",
        "m": m.as_tuple(),
        "jlist": jlist,
        "klist": klist,
        "pairs": pairs,
        "closure_rank": closure.r,
    }

    for k in klist:
        idx = [vid[(j, k)] for j in jlist if (j, k) in vid]
        prob.add_equality(idx, np.ones(len(idx)), 1.0)
    for j in jlist:
        idx = [vid[(j, k)] for k in klist if (j, k) in vid]
        prob.add_equality(idx, psize[[k for k in klist if (j, k) in vid]],
                          float(cut.sizes[j]))
    # Row/column-sum identities: summing the matrices with a common target
    # (resp. source) part reproduces u diag(X_part)^T (resp. its transpose).
    # They hold at every PSD feasible point of the relaxation, so the optimum
    # is unchanged, but stating them linearly removes a degenerate face that
    # otherwise stalls interior-point convergence.
    dsrc, dtgt = _fiber_diag_classes(closure)
    for part in (1, 2, 3):
        jd = _PART_DIAG[part]
        if jd not in cut.sizes:
            continue
        for k in klist:
            if k in closure.diag_classes:
                continue
            idx = [vid[(j, k)] for j in jlist if _CUT_TGT[j] == part and (j, k) in vid]
            vals = [1.0] * len(idx)
            idx.append(vid[(jd, dtgt[k])])
            vals.append(-1.0)
            prob.add_equality(idx, vals, 0.0)
            idx = [vid[(j, k)] for j in jlist if _CUT_SRC[j] == part and (j, k) in vid]
            vals = [1.0] * len(idx)
            idx.append(vid[(jd, dsrc[k])])
            vals.append(-1.0)
            prob.add_equality(idx, vals, 0.0)
    _proportion_rows(prob, cut, jlist, vid, dsrc, list(closure.diag_classes),
                     klist, lambda j, k: float(psize[k]))
    for j, k in pairs:
        jt = cut.transpose_of[j]
        kt = int(closure.transpose_of[k])
        if (j, k) < (jt, kt):
            prob.var_links.append((vid[(j, k)], vid[(jt, kt)]))

    _append_phi_blocks(
        prob, g.n, jlist, klist, _sparse_classes(amats),
        weight=lambda j, k: 1.0 / cut.sizes[j], vid=vid, phi=phi,
    )
    return prob


def reduce_mcqap_scheme(g: Graph, problem: ConicProblem, spectrum: SchemeSpectrum,
                        orbits: OrbitClasses | None = None) -> ConicProblem:
    """Replace the order-n and order-kn LMI blocks of a build_mcqap problem
    by per-eigenspace blocks of orders 1 and k; the optimum is unchanged."""
    if problem.meta.get("kind") != "mcqap":
        raise ValueError("reduce_mcqap_scheme expects a problem built by build_mcqap")
    if spectrum.table.shape[1] != problem.meta["closure_rank"]:
        raise ValueError("scheme spectrum is inconsistent with the problem dimensions")
    if int(spectrum.multiplicities.sum()) != g.n:
        raise ValueError("scheme spectrum multiplicities do not sum to n")
    m = PartitionM(*problem.meta["m"])
    cut, phi = cut_config(m.m1, m.m2, m.m3)
    jlist = problem.meta["jlist"]
    klist = problem.meta["klist"]
    vid = {tuple(p): t for t, p in enumerate(problem.meta["pairs"])}
    reduced = ConicProblem(
        nvars=problem.nvars,
        c=problem.c.copy(),
        c0=problem.c0,
        eq_coeffs=list(problem.eq_coeffs),
        eq_rhs=list(problem.eq_rhs),
        nonneg=problem.nonneg,
        var_links=list(problem.var_links),
        interior_hint=problem.interior_hint,
        meta=dict(problem.meta, reduced=True),
    )
    _append_phi_blocks(
        reduced, g.n, jlist, klist, None,
        weight=lambda j, k: 1.0 / cut.sizes[j], vid=vid, phi=phi, spectrum=spectrum,
    )
    return reduced


def mcqap(g: Graph, m: PartitionM, tol: float = conic.DEFAULT_TOL,
          orbits: OrbitClasses | None = None, spectrum: SchemeSpectrum | None = None,
          use_scheme: bool | None = None) -> McBound:
    """Build, reduce when the closure is an association scheme, and solve."""
    t0 = time.time()
    if orbits is None:
        orbits = edge_orbit_classes(g)
    closure = orbits.config
    problem = build_mcqap(g, m, orbits)
    if use_scheme is None:
        use_scheme = closure.is_symmetric and closure.is_commutative()
    if use_scheme:
        if spectrum is None:
            spectrum = scheme_spectrum(closure)
        problem = reduce_mcqap_scheme(g, problem, spectrum, orbits)
    sol = conic.solve(problem, tol=tol)
    if sol.status not in ("optimal", "max_iter"):
        raise SolverFailure(f"mcqap solve failed with status {sol.status}")
    alpha = conic.safe_lower_bound(problem, sol)
    return McBound(
        "qap", m, alpha, bandwidth_from_mincut(alpha, m.m3),
        solver_info={"gap": sol.gap, "iters": sol.iterations, "status": sol.status},
        wall_time_s=time.time() - t0,
    )


# ----------------------------------------------------------------------------
# Fixed-pair subproblems
# ----------------------------------------------------------------------------


def build_fix_subproblem(g: Graph, m: PartitionM, h: int,
                         orbits: OrbitClasses | None = None) -> FixSubproblem:
    """Subproblem for edge/nonedge class h (1-based).

    Fixes the representative pair of class h onto the endpoints of a cut
    edge (any edge works, the cut graph being edge-transitive), builds the
    two-vertex stabilizer configuration on the remaining vertices, and
    assembles the reduced SDP: variables x[j, i] over (punctured-cut class,
    stabilizer class), J-reconstruction and size equalities, complementary
    pair links, nonnegativity, and the PSD blocks through the cut algebra's
    block map.  Pairs of a diagonal with an off-diagonal class are
    identically zero in every feasible point and are omitted.
    """
    m.validate(g.n)
    if m.m1 == 1 and m.m2 == 1 and m.m3 == 0:
        raise ValueError("fixing both endpoints of K_2 leaves an empty subproblem")
    if orbits is None:
        orbits = edge_orbit_classes(g)
    if not 1 <= h <= orbits.t:
        raise ValueError(f"class index h={h} out of range 1..{orbits.t}")
    r1, r2 = orbits.representatives[h - 1]
    dh = 2.0 * float(g.adj[r1, r2])

    alpha = [v for v in range(g.n) if v not in (r1, r2)]
    a_sub = g.adj[np.ix_(alpha, alpha)].astype(float)
    a1 = g.adj[alpha, r1].astype(float)
    a2 = g.adj[alpha, r2].astype(float)

    stab = stabilizer_config(g, r1, r2)
    cut, phi = cut_config(m.m1 - 1, m.m2 - 1, m.m3)
    jlist = list(cut.classes)
    if stab.r * len(jlist) > VARIABLE_CAP:
        raise SolverFailure(
            f"stabilizer configuration too large ({stab.r} classes) for class h={h}"
        )
    part = cut.part_of()
    b1 = (part == 2).astype(float)  # cut column of s1, restricted to beta
    b2 = (part == 1).astype(float)
    chat = 2.0 * np.outer(a1, b1) + 2.0 * np.outer(a2, b2)

    qsize = cut.sizes
    psize = stab.sizes.astype(float)

    pairs = []
    for j in jlist:
        for i in range(stab.r):
            if (j in CUT_DIAG_IDS) == (i in stab.diag_classes):
                pairs.append((j, i))
    vid = {p: t for t, p in enumerate(pairs)}
    nvars = len(pairs)

    amats = [stab.class_matrix(i) for i in range(stab.r)]
    tr_a = np.array([float(np.sum(a_sub * amats[i].T)) for i in range(stab.r)])
    c = np.zeros(nvars)
    for j in (3, 5):
        if j in qsize:
            for i in range(stab.r):
                if (j, i) in vid:
                    c[vid[(j, i)]] += 0.5 * tr_a[i] / psize[i]
    part_of_diag = {1: 1, 6: 2, 11: 3}
    for j in CUT_DIAG_IDS:
        if j not in qsize:
            continue
        dvec = (part == part_of_diag[j]).astype(float)
        bj1, bj2 = float(b1 @ dvec), float(b2 @ dvec)
        if bj1 == 0.0 and bj2 == 0.0:
            continue
        for i in stab.diag_classes:
            di = np.diag(amats[i]).astype(float)
            coeff = (bj1 * float(a1 @ di) + bj2 * float(a2 @ di)) / (qsize[j] * psize[i])
            if coeff and (j, i) in vid:
                c[vid[(j, i)]] += coeff

    # barycenter over assignments fixing the representative pair: PSD feasible
    nn = len(alpha)
    hint = np.empty(nvars)
    for (j, i), t in vid.items():
        if j in CUT_DIAG_IDS:
            hint[t] = psize[i] * qsize[j] / nn
        else:
            hint[t] = psize[i] * qsize[j] / (nn * (nn - 1))
    prob = ConicProblem(nvars=nvars, c=c, c0=0.5 * dh, nonneg=np.arange(nvars),
                        interior_hint=hint)
    prob.meta = {"kind": "mcfix", "m": m.as_tuple(), "h": h,
                 "rep": (r1, r2), "num_classes": stab.r}
    for j in jlist:
        idx = [vid[(j, i)] for i in range(stab.r) if (j, i) in vid]
        prob.add_equality(idx, np.ones(len(idx)), float(qsize[j]))
    for i in range(stab.r):
        idx = [vid[(j, i)] for j in jlist if (j, i) in vid]
        prob.add_equality(idx, np.ones(len(idx)), psize[i])
    # Row/column-sum identities, as in build_mcqap; per-class aggregation of
    # the lifted matrix gives sum_{j: tgt part} x[j,i] = (p_i/p_id) x[jd,id].
    dsrc, dtgt = _fiber_diag_classes(stab)
    for part in (1, 2, 3):
        jd = _PART_DIAG[part]
        if jd not in qsize:
            continue
        for i in range(stab.r):
            if i in stab.diag_classes:
                continue
            for sides, dmap in ((_CUT_TGT, dtgt), (_CUT_SRC, dsrc)):
                idx = [vid[(j, i)] for j in jlist
                       if sides[j] == part and (j, i) in vid]
                vals = [1.0] * len(idx)
                i_d = dmap[i]
                idx.append(vid[(jd, i_d)])
                vals.append(-psize[i] / psize[i_d])
                prob.add_equality(idx, vals, 0.0)
    _proportion_rows(prob, cut, jlist, vid, dsrc, list(stab.diag_classes),
                     range(stab.r), lambda j, i: 1.0)
    for j, i in pairs:
        jt = cut.transpose_of[j]
        it = int(stab.transpose_of[i])
        if (j, i) < (jt, it):
            prob.var_links.append((vid[(j, i)], vid[(jt, it)]))

    _append_phi_blocks(
        prob, len(alpha), jlist, list(range(stab.r)), _sparse_classes(amats),
        weight=lambda j, i: 1.0 / (qsize[j] * psize[i]), vid=vid, phi=phi,
    )
    return FixSubproblem(h, (r1, r2), orbits.is_edge[h - 1], chat, dh, prob, stab.r)


def _solve_fix_subproblem(args):
    g, m, h, tol = args
    sub = build_fix_subproblem(g, m, h)
    sol = conic.solve(sub.problem, tol=tol)
    if sol.status not in ("optimal", "max_iter"):
        raise SolverFailure(
            f"fix subproblem h={sub.h} rep={sub.representative} failed: {sol.status}"
        )
    mu = conic.safe_lower_bound(sub.problem, sol)
    return {
        "h": sub.h,
        "rep": list(sub.representative),
        "classes": sub.num_classes,
        "mu": mu,
        "gap": sol.gap,
        "iters": sol.iterations,
    }


def mc_fix(g: Graph, m: PartitionM, tol: float = conic.DEFAULT_TOL,
           orbits: OrbitClasses | None = None, workers: int = 1) -> McBound:
    """Minimum over all edge/nonedge-class subproblem values.

    A failed subproblem invalidates the bound and raises; it is never
    silently skipped.
    """
    t0 = time.time()
    if orbits is None:
        orbits = edge_orbit_classes(g)
    jobs = [(g, m, h, tol) for h in range(1, orbits.t + 1)]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            subs = list(pool.map(_solve_fix_subproblem, jobs))
    else:
        subs = [_solve_fix_subproblem(job) for job in jobs]
    alpha = min(s["mu"] for s in subs)
    info = {
        "gap": max(s["gap"] for s in subs),
        "iters": max(s["iters"] for s in subs),
    }
    return McBound(
        "fix", m, alpha, bandwidth_from_mincut(alpha, m.m3),
        sub_values=subs, solver_info=info, wall_time_s=time.time() - t0,
    )


# ----------------------------------------------------------------------------
# Scanning over partition vectors
# ----------------------------------------------------------------------------


def _partitions(n, m3_min):
    for m3 in range(m3_min, n - 1):
        rest = n - m3
        for m1 in range(1, rest // 2 + 1):
            yield PartitionM(m1, rest - m1, m3)


def _cut_upper_bound(g: Graph, labeling_phi: np.ndarray, m: PartitionM) -> int:
    """Cut value of the contiguous split of a labeling: an upper bound on
    the exact min-cut, hence on every relaxation value."""
    in_s1 = labeling_phi <= m.m1
    in_s2 = labeling_phi > m.m1 + m.m3
    return int(g.adj[np.ix_(in_s1, in_s2)].sum())


def eig_scan(g: Graph, m3_min: int = 0, spectrum=None) -> McBound:
    """Exhaustive closed-form scan; reports the classic conversion.

    Best m maximizes (bound, m3, alpha); remaining ties break toward the
    lexicographically smallest (m1, m2).
    """
    t0 = time.time()
    if spectrum is None:
        spectrum = laplacian_spectrum(g)
    best = None
    for m in _partitions(g.n, m3_min):
        val = eig_bound(g, m, spectrum).value
        bound = bandwidth_from_mincut(val, m.m3, improved=False)
        key = (bound, m.m3, val, -m.m1, -m.m2)
        if best is None or key > best[0]:
            best = (key, m, val)
    if best is None:
        raise ValueError("no feasible partition vectors")
    _, m, val = best
    return McBound("eig", m, val, bandwidth_from_mincut(val, m.m3, improved=False),
                   wall_time_s=time.time() - t0)


def scan(g: Graph, method: str, m3_min: int | None = None, budget: int | None = None,
         tol: float = conic.DEFAULT_TOL, workers: int = 1,
         prune_floor: int | None = None, seed: int = 0) -> McBound:
    """Best bound over partition vectors m with m1 <= m2.

    The eigenvalue scan is exhaustive.  For qap/fix, m3 ranges upward from
    the best eigenvalue scan's m3 by default (the reference protocol);
    points are visited in descending order of a certified potential (the
    conversion applied to a cheap upper bound on the exact min-cut), points
    that cannot beat the incumbent are pruned, and at most ``budget`` points
    are solved.
    """
    if method == "eig":
        return eig_scan(g, 0 if m3_min is None else m3_min)
    if method not in ("qap", "fix"):
        raise ValueError(f"unknown scan method {method!r}")
    t0 = time.time()
    spectrum = laplacian_spectrum(g)
    eig_best = eig_scan(g, 0, spectrum)
    if m3_min is None:
        m3_min = eig_best.m.m3
    orbits = edge_orbit_classes(g)
    closure = orbits.config
    scheme = None
    if closure.is_symmetric and closure.is_commutative():
        scheme = scheme_spectrum(closure)
    lab = run_heuristic(g, HeuristicConfig(runs=32, seed=seed))

    cands = []
    for m in _partitions(g.n, m3_min):
        cap = min(m.m1 * m.m2, _cut_upper_bound(g, lab.phi, m))
        potential = bandwidth_from_mincut(float(cap), m.m3)
        proxy = eig_bound(g, m, spectrum).value
        cands.append((potential, proxy, m))
    cands.sort(key=lambda t: (-t[0], -t[1], t[2].m3, t[2].m1))
    floor = eig_best.bandwidth_lb if prune_floor is None else prune_floor
    keep = [cand for cand in cands if cand[0] >= floor]
    if not keep and cands:
        keep = cands[:1]

    best = None
    solved = 0
    for potential, _, m in keep:
        if best is not None and potential <= best.bandwidth_lb:
            continue
        if budget is not None and solved >= budget:
            break
        if method == "qap":
            res = mcqap(g, m, tol=tol, orbits=orbits, spectrum=scheme,
                        use_scheme=scheme is not None)
        else:
            res = mc_fix(g, m, tol=tol, orbits=orbits, workers=workers)
        solved += 1
        if best is None or (res.bandwidth_lb, res.m.m3, res.alpha) > (
            best.bandwidth_lb, best.m.m3, best.alpha
        ):
            best = res
    if best is None:
        raise ValueError("scan evaluated no partition vectors")
    best.wall_time_s = time.time() - t0
    best.solver_info["points_solved"] = solved
    return best


# ----------------------------------------------------------------------------
# Exact oracle
# ----------------------------------------------------------------------------


def brute_force_mincut(g: Graph, m: PartitionM, cap: int = ENUM_CAP) -> int:
    """Exact minimum cut by exhaustive enumeration of (S1, S2) partitions."""
    m.validate(g.n)
    total = math.comb(g.n, m.m1) * math.comb(g.n - m.m1, m.m2)
    if total > cap:
        raise ValueError(f"enumeration of {total} partitions exceeds the cap {cap}")
    nbr_mask = []
    for v in range(g.n):
        mask = 0
        for u in np.nonzero(g.adj[v])[0]:
            mask |= 1 << int(u)
        nbr_mask.append(mask)
    best = None
    verts = list(range(g.n))
    for s1 in itertools.combinations(verts, m.m1):
        s1_mask = 0
        for v in s1:
            s1_mask |= 1 << v
        rest = [v for v in verts if not (s1_mask >> v) & 1]
        cut_deg = [(nbr_mask[v] & s1_mask).bit_count() for v in rest]
        for s2 in itertools.combinations(cut_deg, m.m2):
            cut = sum(s2)
            if best is None or cut < best:
                best = cut
                if best == 0:
                    return 0
    return int(best)
