"""Small-to-medium conic programming: linear objective over scalar variables
with linear equalities, componentwise nonnegativity, and LMI blocks.

The native problem shape is

    minimize    c^T x + c0
    subject to  A x = b
                x_i >= 0              for i in nonneg
                F0_b + sum_i x_i Fi_b  PSD   for every block b
                x_i = x_j             for (i, j) in var_links

solved by an infeasible-start primal-dual interior-point method with
Mehrotra predictor-corrector steps and HKM scaling.  Nonnegative variables
are folded in as 1x1 LMI blocks and the PSD slacks are independent
variables driven onto the affine image, so no strictly feasible starting
point is required.  All computations are deterministic for a given input.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
import scipy.sparse

__all__ = [
    "ConicProblem",
    "LMIBlock",
    "Solution",
    "SolverFailure",
    "dump_problem",
    "safe_lower_bound",
    "solve",
]

DEFAULT_TOL = 1e-8
MAX_ITER = 200
SCHUR_REG = 1e-12
REG_RETRIES = 3
STEP_FRACTION = 0.98
SAFE_KAPPA = 10.0
SAFE_EPS = 1e-9


class SolverFailure(RuntimeError):
    """A solve did not reach a usable optimal/dual state."""


@dataclass
class LMIBlock:
    """One constraint F0 + sum_i x_i F_i PSD, coefficients in COO form.

    ``var``, ``row``, ``col``, ``val`` are parallel arrays listing every
    nonzero of every F_i; F0 is dense (or None for a homogeneous block).
    Every F_i must be symmetric once entries are accumulated.
    """

    order: int
    var: np.ndarray
    row: np.ndarray
    col: np.ndarray
    val: np.ndarray
    const: np.ndarray | None = None

    @classmethod
    def from_entries(cls, order, entries, const=None):
        """entries: iterable of (var, row, col, value); symmetric part only
        may be given, the off-diagonal mirror is added automatically."""
        var, row, col, val = [], [], [], []
        for i, r, c, v in entries:
            var.append(i)
            row.append(r)
            col.append(c)
            val.append(v)
            if r != c:
                var.append(i)
                row.append(c)
                col.append(r)
                val.append(v)
        return cls(
            order,
            np.asarray(var, dtype=np.int64),
            np.asarray(row, dtype=np.int64),
            np.asarray(col, dtype=np.int64),
            np.asarray(val, dtype=float),
            None if const is None else np.asarray(const, dtype=float),
        )


@dataclass
class ConicProblem:
    """See module docstring for the mathematical shape.

    ``interior_hint``, when set, is a feasible point with every LMI block
    PSD (typically a barycenter of integer solutions).  The solver uses its
    block kernels for facial reduction; a wrong hint can only weaken the
    computed bound, never invalidate it.
    """

    nvars: int
    c: np.ndarray
    c0: float = 0.0
    eq_coeffs: list = field(default_factory=list)  # (indices, values) per row
    eq_rhs: list = field(default_factory=list)
    nonneg: np.ndarray | None = None
    blocks: list = field(default_factory=list)
    var_links: list = field(default_factory=list)
    interior_hint: np.ndarray | None = None
    meta: dict = field(default_factory=dict)

    def add_equality(self, indices, values, rhs):
        self.eq_coeffs.append(
            (np.asarray(indices, dtype=np.int64), np.asarray(values, dtype=float))
        )
        self.eq_rhs.append(float(rhs))

    @property
    def num_equalities(self) -> int:
        return len(self.eq_rhs)


@dataclass
class Solution:
    status: str  # optimal | infeasible | unbounded_or_infeasible_dual | max_iter | numeric_failure
    x: np.ndarray | None
    primal_obj: float
    dual_obj: float
    gap: float
    residuals: dict  # eq, lmi_min_eig, nonneg_min
    iterations: int
    dual_resid: float = float("inf")

    @property
    def max_residual(self) -> float:
        vals = [
            self.residuals.get("eq", np.inf),
            max(0.0, -self.residuals.get("lmi_min_eig", 0.0)),
            max(0.0, -self.residuals.get("nonneg_min", 0.0)),
            self.dual_resid,
        ]
        return float(max(vals))


def safe_lower_bound(problem: ConicProblem, sol: Solution, kappa: float = SAFE_KAPPA) -> float:
    """Dual objective reduced by a residual-based safety margin.

    Heuristic but monotone in solver accuracy: the returned value stays below
    the primal optimum whenever the dual point is feasible within the stated
    residuals.  Undefined when no finite dual point exists.
    """
    if sol.status not in ("optimal", "max_iter") or not np.isfinite(sol.dual_obj):
        raise SolverFailure(f"no usable dual bound from status {sol.status!r}")
    return sol.dual_obj - kappa * (sol.gap + sol.max_residual) - SAFE_EPS


# ----------------------------------------------------------------------------
# Preprocessing
# ----------------------------------------------------------------------------


def _merge_links(problem: ConicProblem):
    """Union-find elimination of var_links; returns (rep_of, nreps)."""
    parent = np.arange(problem.nvars)

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i, j in problem.var_links:
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[max(ri, rj)] = min(ri, rj)
    roots = np.array([find(i) for i in range(problem.nvars)])
    uniq, rep_of = np.unique(roots, return_inverse=True)
    return rep_of, len(uniq)


class _Work:
    """Solver-internal form: merged variables, nonneg as 1x1 blocks, dense A,
    and per-block facial compression.

    The relaxations this solver targets carry linear identities that force
    common null vectors on every LMI block over the whole equality-affine
    hull (so the primal has no interior and the dual optimum is unattained,
    stalling any interior-point method).  Each block's forced kernel is
    detected numerically from a few random points of the hull and projected
    out; iterating in the compressed coordinates restores strict feasibility.
    Compression never invalidates bounds: projecting a PSD constraint can
    only enlarge the feasible set, so dual values stay true lower bounds.
    """

    def __init__(self, problem: ConicProblem):
        self.problem = problem
        self.rep_of, self.m = _merge_links(problem)
        self.c = np.zeros(self.m)
        np.add.at(self.c, self.rep_of, problem.c)

        p = problem.num_equalities
        self.A = np.zeros((p, self.m))
        self.b = np.asarray(problem.eq_rhs, dtype=float)
        for k, (idx, vals) in enumerate(problem.eq_coeffs):
            np.add.at(self.A[k], self.rep_of[idx], vals)

        self.blocks = []
        for blk in problem.blocks:
            self.blocks.append(self._prepare_block(blk))
        if problem.nonneg is not None and len(problem.nonneg):
            nn = np.asarray(problem.nonneg, dtype=np.int64)
            # one 1x1 block per linked group that has a nonnegative member
            _, first = np.unique(self.rep_of[nn], return_index=True)
            for i in sorted(nn[first].tolist()):
                self.blocks.append(self._prepare_block(LMIBlock(
                    1,
                    np.array([i]),
                    np.array([0]),
                    np.array([0]),
                    np.array([1.0]),
                )))
        # Diagonal column equilibration keeps the Schur complement well scaled.
        norms = np.zeros(self.m)
        for b in self.blocks:
            coef = b["F"]
            sq = np.asarray(coef.multiply(coef).sum(axis=1)).ravel()
            norms = np.maximum(norms, np.sqrt(sq))
        if p:
            norms = np.maximum(norms, np.abs(self.A).max(axis=0))
        self.colscale = 1.0 / np.maximum(norms, 1e-8)
        self.c *= self.colscale
        if p:
            self.A *= self.colscale[None, :]
            rownorm = np.maximum(np.abs(self.A).max(axis=1), 1e-12)
            self.A /= rownorm[:, None]
            self.b = self.b / rownorm
        for b in self.blocks:
            b["F"] = b["F"].multiply(self.colscale[:, None]).tocsr()

        self.hint = None
        if problem.interior_hint is not None:
            hint = np.zeros(self.m)
            firsts = np.full(self.m, -1, dtype=np.int64)
            for i in range(problem.nvars):
                if firsts[self.rep_of[i]] < 0:
                    firsts[self.rep_of[i]] = i
            hint = np.asarray(problem.interior_hint, dtype=float)[firsts]
            self.hint = hint / self.colscale

        self._compress_blocks()
        self.orders = [b["n_eff"] for b in self.blocks]
        self.total_dim = sum(self.orders)

    def _prepare_block(self, blk: LMIBlock):
        N = blk.order
        var = self.rep_of[blk.var]
        flat = blk.row * N + blk.col
        F = scipy.sparse.coo_matrix(
            (blk.val, (var, flat)), shape=(self.m, N * N)
        ).tocsr()
        F.sum_duplicates()
        const = np.zeros((N, N)) if blk.const is None else np.array(blk.const, dtype=float)
        if not np.allclose(const, const.T, atol=1e-12):
            raise ValueError("LMI constant matrix is not symmetric")
        return {"N": N, "F": F, "F0": const, "Q": None, "n_eff": N}

    def _hull_points(self, count, rng):
        """Random points of the affine hull {x : Ax = b} (cone ignored)."""
        if self.A.shape[0] == 0:
            x0 = np.zeros(self.m)
            Z = np.eye(self.m)
        else:
            x0, *_ = np.linalg.lstsq(self.A, self.b, rcond=None)
            Z = scipy.linalg.null_space(self.A)
        scale = 1.0 + np.abs(x0).max()
        points = [x0]
        for _ in range(count - 1):
            if Z.shape[1] == 0:
                points.append(x0)
            else:
                points.append(x0 + scale * (Z @ rng.normal(size=Z.shape[1])))
        return points

    def _compress_blocks(self):
        """Facial reduction: project out, per block, the subspace on which
        the quadratic form vanishes across the whole feasible set.

        With an interior hint x*, a PSD point, kernel(M(x*)) is the candidate
        face; it is accepted once U^T M(x) U = 0 is confirmed to hold as a
        linear identity at random points x of the equality hull (PSD-ness
        then forces M U = 0 at every feasible point).  Without a hint only
        full kernels common to random hull points are projected out.  Either
        way a wrong face weakens the bound but cannot invalidate it.
        """
        if all(b["N"] == 1 for b in self.blocks):
            return
        points = self._hull_points(4, np.random.default_rng(0))
        kill = []
        for bi, b in enumerate(self.blocks):
            total_q = None
            for _ in range(3):  # nested faces need repeated passes
                kernel = self._face_candidate(b, total_q, points)
                if kernel is None or kernel.shape[1] == 0:
                    break
                cur = np.eye(b["N"]) if total_q is None else total_q
                if kernel.shape[1] == cur.shape[1]:
                    total_q = cur[:, :0]
                    break
                w, V = scipy.linalg.eigh(kernel @ kernel.T)
                comp = V[:, w <= 0.5]
                total_q = cur @ comp
            if total_q is None:
                continue
            if total_q.shape[1] == 0:
                kill.append(bi)  # identically zero on the feasible set
                continue
            b["Q"] = np.ascontiguousarray(total_q)
            b["n_eff"] = total_q.shape[1]
            b["F0"] = total_q.T @ b["F0"] @ total_q
        for bi in reversed(kill):
            del self.blocks[bi]

    def _face_candidate(self, b, total_q, points):
        """Kernel (in current compressed coordinates) forced on the block."""

        def mat(x):
            M = (b["F"].T @ x).reshape(b["N"], b["N"])
            M = 0.5 * (M + M.T) + b["F0"]
            return M if total_q is None else total_q.T @ M @ total_q

        if self.hint is not None:
            M = mat(self.hint)
            scale = max(1.0, float(np.abs(M).max()))
            w, V = scipy.linalg.eigh(M)
            if w[0] < -1e-6 * scale:
                kernel = None  # hint is not PSD on this block; distrust it
            else:
                kernel = V[:, np.abs(w) <= 1e-7 * scale]
                if kernel.shape[1]:
                    ok = all(
                        np.abs(kernel.T @ mat(x) @ kernel).max()
                        <= 1e-6 * max(1.0, np.abs(mat(x)).max())
                        for x in points
                    )
                    if not ok:
                        kernel = None
            if kernel is not None:
                return kernel
        kernel = None  # fall back: common linear kernel of hull points
        for x in points:
            M = mat(x)
            tol = 1e-7 * max(1.0, np.abs(M).max())
            if kernel is None:
                w, V = scipy.linalg.eigh(M)
                kernel = V[:, np.abs(w) <= tol]
            else:
                R = M @ kernel
                _, sv, Vt = np.linalg.svd(R, full_matrices=False)
                kernel = kernel @ Vt.T[:, sv <= tol]
            if kernel.shape[1] == 0:
                break
        return kernel

    # -- per-block linear algebra ------------------------------------------

    def slack_matrices(self, x):
        """Compressed affine images Q^T (F0 + sum x_i F_i) Q per block."""
        out = []
        for b in self.blocks:
            M = (b["F"].T @ x).reshape(b["N"], b["N"])
            M = 0.5 * (M + M.T)
            if b["Q"] is not None:
                M = b["Q"].T @ M @ b["Q"] + b["F0"]
            else:
                M = M + b["F0"]
            out.append(M)
        return out

    def adjoint(self, mats):
        """g_i = sum_b <F_i^b, Q mats_b Q^T>."""
        g = np.zeros(self.m)
        for b, M in zip(self.blocks, mats):
            big = M if b["Q"] is None else b["Q"] @ M @ b["Q"].T
            g += b["F"] @ big.reshape(-1)
        return g


def _sym(M):
    return 0.5 * (M + M.T)


def _chol(M):
    return np.linalg.cholesky(M)


def _max_step(M, L, dM):
    """Largest alpha with M + alpha dM PSD, given L = chol(M)."""
    W = scipy.linalg.solve_triangular(L, dM, lower=True)
    W = scipy.linalg.solve_triangular(L, W.T, lower=True)
    w = scipy.linalg.eigvalsh(_sym(W))
    lo = w[0]
    if lo >= -1e-14:
        return np.inf
    return -1.0 / lo


def _schur_matrix(work, Xs, Sinvs, chunk=256):
    """H_ij = sum_b sym tr(F_i X F_j S^-1), assembled per block.

    For compressed blocks X and S^-1 live in the reduced coordinates; the
    products are taken with their expansions Q X Q^T so that the sparse
    original coefficients can be used directly.
    """
    m = work.m
    H = np.zeros((m, m))
    for b, X, Sinv in zip(work.blocks, Xs, Sinvs):
        N = b["N"]
        F = b["F"]
        if N == 1:
            d = np.asarray(F[:, 0].todense()).ravel()
            H += np.outer(d, d) * (X[0, 0] * Sinv[0, 0])
            continue
        if b["Q"] is not None:
            Q = b["Q"]
            Xbig = Q @ X @ Q.T
            Sinvbig = Q @ Sinv @ Q.T
        else:
            Xbig, Sinvbig = X, Sinv
        M = np.zeros((m, m))
        for lo in range(0, m, chunk):
            hi = min(lo + chunk, m)
            Fd = np.asarray(F[lo:hi].todense()).reshape(hi - lo, N, N)
            T = Xbig @ Fd @ Sinvbig
            M[:, lo:hi] = F @ T.reshape(hi - lo, N * N).T
        H += 0.5 * (M + M.T)
    return H


def solve(problem: ConicProblem, tol: float = DEFAULT_TOL, max_iter: int = MAX_ITER,
          verbose: bool = False) -> Solution:
    """Solve the conic problem; see module docstring for the method."""
    if problem.nvars < 1:
        raise ValueError("problem must have at least one variable")
    work = _Work(problem)
    if not work.blocks:
        raise ValueError("problem has no conic constraints (blocks or nonneg)")
    p = work.A.shape[0]

    # Linear feasibility pre-check catches contradictory equalities early.
    if p:
        x_ls, *_ = np.linalg.lstsq(work.A, work.b, rcond=None)
        if np.max(np.abs(work.A @ x_ls - work.b)) > 1e-7 * (1 + np.abs(work.b).max()):
            return _final(problem, work, None, "infeasible", 0)
        keep = _independent_rows(work.A)
        work.A = work.A[keep]
        work.b = work.b[keep]
        p = len(keep)

    m = work.m
    x = np.zeros(m)
    lam = np.zeros(p)
    f0max = max(float(np.abs(b["F0"]).max()) if b["F0"].size else 0.0 for b in work.blocks)
    bmax = float(np.abs(work.b).max()) if p else 0.0
    tau = 10.0 * max(1.0, f0max, bmax)
    Xs = [tau * np.eye(b["n_eff"]) for b in work.blocks]
    Ss = [tau * np.eye(b["n_eff"]) for b in work.blocks]
    total_dim = work.total_dim
    bnorm = 1 + (np.abs(work.b).max() if p else 0.0)
    cnorm = 1 + np.abs(work.c).max()

    reg = SCHUR_REG
    status = "max_iter"
    iters = 0
    for it in range(1, max_iter + 1):
        iters = it
        affine = work.slack_matrices(x)
        Rc = [Smat - S for Smat, S in zip(affine, Ss)]  # affine image minus slack
        rp = work.b - work.A @ x if p else np.zeros(0)
        rd = work.c - (work.A.T @ lam if p else 0.0) - work.adjoint(Xs)
        mu = sum(np.vdot(X, S) for X, S in zip(Xs, Ss)) / total_dim

        pobj = float(work.c @ x)
        dobj = float(work.b @ lam) - sum(np.vdot(b["F0"], X) for b, X in zip(work.blocks, Xs))
        gap = abs(pobj - dobj) / (1 + max(abs(pobj), abs(dobj)))
        err_p = max(np.abs(rp).max() / bnorm if p else 0.0,
                    max(np.abs(R).max() for R in Rc))
        err_d = np.abs(rd).max() / cnorm
        if verbose:
            print(f"  iter {it:3d}  mu={mu:.2e} gap={gap:.2e} "
                  f"pinf={err_p:.2e} dinf={err_d:.2e}")
        if gap <= tol and err_p <= tol and err_d <= tol:
            status = "optimal"
            break
        ray = _ray_certificate(work, x, lam, Xs, Ss, rp, rd, dobj, pobj)
        if ray is not None:
            status = ray
            break

        try:
            Ls = [_chol(S) for S in Ss]
            Sinvs = [scipy.linalg.cho_solve((L, True), np.eye(len(L))) for L in Ls]
            LXs = [_chol(X) for X in Xs]
        except np.linalg.LinAlgError:
            status = "numeric_failure"
            break

        H = _schur_matrix(work, Xs, Sinvs)
        cholH = None
        for attempt in range(REG_RETRIES + 1):
            try:
                cholH = scipy.linalg.cho_factor(
                    H + (reg * 10.0 ** (2 * attempt)) * (1 + np.trace(H) / m) * np.eye(m)
                )
                break
            except np.linalg.LinAlgError:
                continue
        if cholH is None:
            status = "numeric_failure"
            break
        if p:
            HinvAT = scipy.linalg.cho_solve(cholH, work.A.T)
            Ssmall = work.A @ HinvAT
            Ssmall[np.diag_indices_from(Ssmall)] += reg * (1 + np.trace(Ssmall) / p)
        else:
            HinvAT = None
            Ssmall = None

        def newton(sigma_mu, correctors):
            G = []
            for b, X, S, Sinv, R, K in zip(work.blocks, Xs, Ss, Sinvs, Rc, correctors):
                core = sigma_mu * Sinv - X - (K @ Sinv if K is not None else 0.0)
                G.append(_sym(core) - _sym(X @ R @ Sinv))
            g = work.adjoint(G)
            rhs_x = g - rd
            if p:
                Hinvr = scipy.linalg.cho_solve(cholH, rhs_x)
                try:
                    dlam = scipy.linalg.solve(
                        Ssmall, rp - work.A @ Hinvr, assume_a="pos"
                    )
                except np.linalg.LinAlgError:
                    dlam = np.linalg.lstsq(Ssmall, rp - work.A @ Hinvr, rcond=None)[0]
                dx = Hinvr + HinvAT @ dlam
            else:
                dlam = np.zeros(0)
                dx = scipy.linalg.cho_solve(cholH, rhs_x)
            dSs, dXs = [], []
            for b, X, S, Sinv, R, K, Gb in zip(work.blocks, Xs, Ss, Sinvs, Rc, correctors, G):
                dS = _sym((b["F"].T @ dx).reshape(b["N"], b["N"]))
                if b["Q"] is not None:
                    dS = b["Q"].T @ dS @ b["Q"]
                dS = dS + R
                dX = Gb - _sym(X @ dS @ Sinv) + _sym(X @ R @ Sinv)
                dSs.append(dS)
                dXs.append(dX)
            return dx, dlam, dSs, dXs

        # Predictor (affine scaling) step.
        none_corr = [None] * len(work.blocks)
        dx_a, dlam_a, dS_a, dX_a = newton(0.0, none_corr)
        ap = min(
            [1.0] + [STEP_FRACTION * _max_step(S, L, dS) for S, L, dS in zip(Ss, Ls, dS_a)]
        )
        ad = min(
            [1.0] + [STEP_FRACTION * _max_step(X, L, dX) for X, L, dX in zip(Xs, LXs, dX_a)]
        )
        mu_aff = sum(
            np.vdot(X + ad * dX, S + ap * dS)
            for X, S, dX, dS in zip(Xs, Ss, dX_a, dS_a)
        ) / total_dim
        sigma = min(1.0, max((mu_aff / mu) ** 3, 1e-10))

        # Corrector step reuses the factored Schur complement.
        correctors = [dX @ dS for dX, dS in zip(dX_a, dS_a)]
        dx, dlam, dSs, dXs = newton(sigma * mu, correctors)
        ap = min(
            [1.0] + [STEP_FRACTION * _max_step(S, L, dS) for S, L, dS in zip(Ss, Ls, dSs)]
        )
        ad = min(
            [1.0] + [STEP_FRACTION * _max_step(X, L, dX) for X, L, dX in zip(Xs, LXs, dXs)]
        )
        if min(ap, ad) < 1e-10:
            status = "numeric_failure" if mu > tol else "max_iter"
            break
        x = x + ap * dx
        lam = lam + ad * dlam
        Ss = [S + ap * dS for S, dS in zip(Ss, dSs)]
        Xs = [X + ad * dX for X, dX in zip(Xs, dXs)]

    return _final(problem, work, (x, lam, Xs, Ss), status, iters)


def _independent_rows(A, rtol=1e-10):
    """Indices of a maximal independent row subset via pivoted QR of A^T."""
    if A.shape[0] == 0:
        return []
    _, R, piv = scipy.linalg.qr(A.T, mode="economic", pivoting=True)
    diag = np.abs(np.diag(R))
    if diag.size == 0 or diag[0] == 0.0:
        return []
    rank = int(np.sum(diag > rtol * diag[0]))
    return sorted(piv[:rank].tolist())


def _ray_certificate(work, x, lam, Xs, Ss, rp, rd, dobj, pobj):
    """Detect improving rays once the iterates blow up.

    A dual ray (lambda, X)/nu with vanishing A^T lambda + adj(X) and positive
    objective certifies primal infeasibility; a primal ray x/nu with vanishing
    Ax, PSD slack direction and negative objective certifies an unbounded (or
    dual-infeasible) problem.
    """
    big, eps = 1e8, 1e-7
    nu_d = (np.abs(lam).max() if len(lam) else 0.0) + max(np.abs(X).max() for X in Xs)
    if nu_d > big and dobj > 0:
        # A^T lam + adj(X) = c - rd at the current iterate
        if np.abs(work.c - rd).max() / nu_d < eps and dobj / nu_d > eps:
            return "infeasible"
    nu_p = np.abs(x).max()
    if nu_p > big and pobj < 0:
        eqdir = (np.abs(work.b - rp).max() if len(rp) else 0.0) / nu_p
        slack_dir_ok = all(
            scipy.linalg.eigvalsh(_sym(S - b["F0"]))[0] / nu_p > -eps
            for b, S in zip(work.blocks, Ss)
        )
        if eqdir < eps and slack_dir_ok and -pobj / nu_p > eps:
            return "unbounded_or_infeasible_dual"
    if max(nu_d, nu_p) > 1e13:
        return "numeric_failure"
    return None


def _final(problem, work, state, status, iters):
    if state is None:
        return Solution(status, None, np.nan, np.nan, np.inf,
                        {"eq": np.inf, "lmi_min_eig": -np.inf, "nonneg_min": -np.inf},
                        iters)
    x, lam, Xs, Ss = state
    x_user_rep = x * work.colscale
    x_user = x_user_rep[work.rep_of]
    pobj = float(work.c @ x) + problem.c0
    dobj = (float(work.b @ lam) if len(lam) else 0.0) - sum(
        np.vdot(b["F0"], X) for b, X in zip(work.blocks, Xs)
    ) + problem.c0
    gap = abs(pobj - dobj) / (1 + abs(pobj))
    p_full = problem.num_equalities
    if p_full:
        eq_err = 0.0
        for (idx, vals), rhs in zip(problem.eq_coeffs, problem.eq_rhs):
            eq_err = max(eq_err, abs(float(vals @ x_user[idx]) - rhs))
    else:
        eq_err = 0.0
    lmi_min = np.inf
    for blk in problem.blocks:
        M = np.zeros((blk.order, blk.order))
        np.add.at(M, (blk.row, blk.col), blk.val * x_user[blk.var])
        if blk.const is not None:
            M += blk.const
        lmi_min = min(lmi_min, float(scipy.linalg.eigvalsh(_sym(M))[0]))
    if not problem.blocks:
        lmi_min = 0.0
    if problem.nonneg is not None and len(problem.nonneg):
        nonneg_min = float(x_user[np.asarray(problem.nonneg)].min())
    else:
        nonneg_min = 0.0
    rd = work.c - (work.A.T @ lam if len(lam) else 0.0) - work.adjoint(Xs)
    dual_resid = float(np.abs(rd).max() / (1 + np.abs(work.c).max()))
    return Solution(
        status,
        x_user,
        pobj,
        dobj,
        gap,
        {"eq": eq_err, "lmi_min_eig": lmi_min, "nonneg_min": nonneg_min},
        iters,
        dual_resid,
    )


def dump_problem(problem: ConicProblem, path) -> None:
    """Plain-text sparse dump for cross-checking against external solvers.

    Line format: ``block var row col value``.  Block 0 with var 0 carries the
    objective (row = variable index, col = 0) and constant (row = col = 0);
    block -k is equality row k (var 0 entry is the right-hand side); positive
    blocks list LMI entries, var 0 being the constant matrix.  Nonnegative
    variable indices appear as ``nonneg i`` lines and links as ``link i j``.
    """
    buf = io.StringIO()
    buf.write(f"# mincutbw conic dump: nvars={problem.nvars}\n")
    buf.write(f"0 0 0 0 {problem.c0!r}\n")
    for i, ci in enumerate(problem.c):
        if ci:
            buf.write(f"0 0 {i + 1} 0 {ci!r}\n")
    for k, ((idx, vals), rhs) in enumerate(zip(problem.eq_coeffs, problem.eq_rhs), start=1):
        buf.write(f"{-k} 0 0 0 {rhs!r}\n")
        for i, v in zip(idx, vals):
            buf.write(f"{-k} {i + 1} 0 0 {v!r}\n")
    for bno, blk in enumerate(problem.blocks, start=1):
        if blk.const is not None:
            rr, cc = np.nonzero(blk.const)
            for r, c in zip(rr, cc):
                buf.write(f"{bno} 0 {r + 1} {c + 1} {blk.const[r, c]!r}\n")
        for i, r, c, v in zip(blk.var, blk.row, blk.col, blk.val):
            buf.write(f"{bno} {i + 1} {r + 1} {c + 1} {v!r}\n")
    if problem.nonneg is not None:
        for i in problem.nonneg:
            buf.write(f"nonneg {i + 1}\n")
    for i, j in problem.var_links:
        buf.write(f"link {i + 1} {j + 1}\n")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(buf.getvalue())
