"""Deterministic optimizers behind the exhaustion values.

The quantity maximized over the compact group is the branch value

    branch(k; subject) = r_S(slice intersection of the k-moved subject)
                       = log ||p||^2 - log |sigma . p|^2

with p the homogeneous vector of (k.C) cap Sigma, computed in closed
form (the subject is a point for su11 and the cross product of two dual
vectors for su21).  Moving the subject by k and evaluating the base
machinery gives the same supremum as moving the Schubert machinery by
k^{-1}, since the compact group is a group.

All searches are derivative free and seeded: a coarse grid over group
coordinates followed by compass ascent with halving steps.  Identical
settings give identical results bit for bit; CYCLELAB_THREADS only
parallelizes over fixed subject blocks and never changes the output.
"""

from dataclasses import dataclass

import numpy as np

from .errors import NumericalDegeneracy, OptimizerStall
from .liecore import k0_sample_matrices
from .schubert import make_schubert
from .sections import highest_weight_section
from .utils import expm_antihermitian, run_chunked

ASCENT_SIGMA0 = 0.5
IMPROVE_EPS = 1e-15
ALIGN_TOL = 1e-15
MAX_SWEEPS = 4000


@dataclass(frozen=True)
class OptimizerSettings:
    """Knobs for the compact-group search; None fields fall back to the
    scenario defaults."""

    resolution: int = None
    extras: int = None
    seed: int = 42
    step_tol: float = None
    refine_top: int = 3
    chunk: int = 256

    def resolved(self, sc):
        return (
            self.resolution if self.resolution is not None else sc.k0_resolution,
            self.extras if self.extras is not None else sc.k0_extras,
            self.seed,
            self.step_tol if self.step_tol is not None else sc.tol.step_tol,
        )


_ENGINES = {}


class BranchEngine:
    """Vectorized branch evaluation for one scenario.

    Subjects are rows: the cycle point for su11, the cycle dual vector
    for su21.  Group elements act on the subject directly.
    """

    def __init__(self, sc):
        self.sc = sc
        self.schubert = make_schubert(sc)
        self.section = highest_weight_section(self.schubert, sc)
        self.sigma = self.section.row
        self.variety_dual = self.schubert.variety_dual
        self.k0_basis = np.asarray(sc.rf.k0_basis)
        self.dim = self.k0_basis.shape[0]
        self._step_cache = {}

    def subject_row(self, c):
        if self.sc.cycle_dim == 0:
            return c.point.homogeneous
        return c.dual

    def _value_from_p(self, p):
        den = np.abs(np.einsum("...a,a->...", p, self.sigma)) ** 2
        num = np.sum(np.abs(p) ** 2, axis=-1)
        with np.errstate(divide="ignore", invalid="ignore"):
            v = np.log(num) - np.log(den)
        return np.where(den <= 1e-28 * num, np.inf, v)

    def values_shared(self, subjects, ks):
        """branch values, subjects (m, n) against a common stack ks (K, n, n)."""
        if self.sc.cycle_dim == 0:
            p = np.einsum("kab,mb->mka", ks, subjects)
        else:
            moved = np.einsum("mi,kji->mkj", subjects, np.conj(ks))
            p = np.cross(moved, self.variety_dual[None, None, :])
        return self._value_from_p(p)

    def values_own(self, subjects, ks):
        """branch values, subjects (m, n) each against its own ks (m, s, n, n)."""
        if self.sc.cycle_dim == 0:
            p = np.einsum("msab,mb->msa", ks, subjects)
        else:
            moved = np.einsum("mi,msji->msj", subjects, np.conj(ks))
            p = np.cross(moved, self.variety_dual[None, None, :])
        return self._value_from_p(p)

    def step_matrices(self, level):
        """Compass moves exp(+-sigma_l kappa_i) at halving scale sigma_l."""
        if level not in self._step_cache:
            sig = ASCENT_SIGMA0 * 0.5**level
            gens = np.concatenate([sig * self.k0_basis, -sig * self.k0_basis])
            self._step_cache[level] = expm_antihermitian(gens)
        return self._step_cache[level]


def get_engine(sc):
    if sc.name not in _ENGINES:
        _ENGINES[sc.name] = BranchEngine(sc)
    return _ENGINES[sc.name]


def coarse_group_stack(sc, resolution, seed, extras):
    return k0_sample_matrices(sc.rf, resolution, seed, extras)


def _compass_ascent(engine, subjects, ks, vals, step_tol):
    m = subjects.shape[0]
    max_level = int(np.ceil(np.log2(ASCENT_SIGMA0 / step_tol)))
    level = np.zeros(m, dtype=int)
    ks = ks.copy()
    vals = vals.copy()
    for _ in range(MAX_SWEEPS):
        active = np.flatnonzero(level <= max_level)
        if active.size == 0:
            return vals, ks
        steps = np.stack([engine.step_matrices(l) for l in level[active]])
        cand = np.einsum("msij,mjk->msik", steps, ks[active])
        cvals = engine.values_own(subjects[active], cand)
        best = np.argmax(cvals, axis=1)
        bvals = cvals[np.arange(active.size), best]
        took = bvals > vals[active] + IMPROVE_EPS
        upd = active[took]
        vals[upd] = bvals[took]
        ks[upd] = cand[np.flatnonzero(took), best[took]]
        level[active[~took]] += 1
    raise OptimizerStall("compass ascent exceeded the sweep budget")


def maximize_branch(subjects, sc, settings=None):
    """sup over the compact group of the branch value per subject row.

    Returns (values, argmax group matrices).  Coarse grid then compass
    ascent from the refine_top best coarse starts; the result never
    falls below the coarse maximum.
    """
    settings = settings or OptimizerSettings()
    resolution, extras, seed, step_tol = settings.resolved(sc)
    engine = get_engine(sc)
    coarse = coarse_group_stack(sc, resolution, seed, extras)
    top = max(1, min(settings.refine_top, coarse.shape[0]))

    def block(rows):
        cvals = engine.values_shared(rows, coarse)
        order = np.argsort(-cvals, axis=1)[:, :top]
        best_v = np.full(rows.shape[0], -np.inf)
        best_k = np.empty((rows.shape[0],) + coarse.shape[1:], dtype=complex)
        for t in range(top):
            start_k = coarse[order[:, t]]
            start_v = np.take_along_axis(cvals, order[:, t:t + 1], axis=1)[:, 0]
            v, k = _compass_ascent(engine, rows, start_k, start_v, step_tol)
            gain = v > best_v
            best_v[gain] = v[gain]
            best_k[gain] = k[gain]
        return best_v, best_k

    subjects = np.atleast_2d(np.asarray(subjects, complex))
    return run_chunked(block, subjects, chunk=settings.chunk)


def _align_newton(engine, points, ks, iters=60):
    """Drive ell_S . (k v) to its rounding floor per subject.

    Quadratic steps run until the residual either clears ALIGN_TOL or
    stops shrinking; near the boundary the branch denominator is tiny
    and a residual above the floor would contaminate it at first order.
    Returns ks and residuals.
    """
    ls = engine.variety_dual
    kb = engine.k0_basis
    ks = ks.copy()
    prev = np.full(points.shape[0], np.inf)
    for _ in range(iters):
        g = np.einsum("a,mab,mb->m", ls, ks, points)
        ag = np.abs(g)
        # far from the solution always step; once below 1e-10 keep
        # polishing only while each step still contracts the residual
        live = np.flatnonzero((ag > ALIGN_TOL)
                              & ((ag > 1e-10) | (ag <= 0.25 * prev)))
        prev = ag
        if live.size == 0:
            break
        kv = np.einsum("mab,mb->ma", ks[live], points[live])
        d = np.einsum("a,iab,mb->mi", ls, kb, kv)
        jac = np.stack([d.real, d.imag], axis=1)
        jjt = np.einsum("mia,mja->mij", jac, jac)
        det = jjt[:, 0, 0] * jjt[:, 1, 1] - jjt[:, 0, 1] * jjt[:, 1, 0]
        if np.any(det < 1e-20):
            raise NumericalDegeneracy("alignment jacobian lost rank")
        rhs = -np.stack([g[live].real, g[live].imag], axis=1)
        inv = np.empty_like(jjt)
        inv[:, 0, 0], inv[:, 1, 1] = jjt[:, 1, 1], jjt[:, 0, 0]
        inv[:, 0, 1], inv[:, 1, 0] = -jjt[:, 0, 1], -jjt[:, 1, 0]
        lam = np.einsum("mij,mj->mi", inv, rhs) / det[:, None]
        delta = np.einsum("mia,mi->ma", jac, lam)
        move = expm_antihermitian(np.einsum("mi,iab->mab", delta, kb))
        ks[live] = np.einsum("mab,mbc->mac", move, ks[live])
    g = np.einsum("a,mab,mb->m", ls, ks, points)
    return ks, np.abs(g)


def _project_to_variety(engine, ks, points):
    """Moved vectors k.v with the residual dual component removed.

    The Newton loop leaves |ell_S . (k v)| below ALIGN_TOL but not at
    zero; near the boundary that residual would contaminate the branch
    denominator at first order, so it is projected out exactly.
    """
    ls = engine.variety_dual
    kv = np.einsum("mab,mb->ma", ks, points)
    return kv - np.einsum("ma,a->m", kv, ls)[:, None] * np.conj(ls)[None, :]


def aligned_values_from(points, sc, k_init, settings=None):
    """Branch values from alignment Newton seeded at explicit group elements.

    points (m, n) rows, k_init a single matrix or a stack (m, n, n).
    Returns (values, aligned group elements, aligned vectors).  Feasibility
    of the aligned vectors (domain membership) is the caller's check.
    """
    engine = get_engine(sc)
    points = np.atleast_2d(np.asarray(points, complex))
    points = points / np.linalg.norm(points, axis=1, keepdims=True)
    k_init = np.asarray(k_init, complex)
    if k_init.ndim == 2:
        k_init = np.broadcast_to(k_init, (points.shape[0],) + k_init.shape)
    ks, res = _align_newton(engine, points, k_init.copy())
    if np.max(res) > 1e-10:
        raise OptimizerStall(f"warm slice alignment stalled at {np.max(res):.2e}")
    aligned = _project_to_variety(engine, ks, points)
    return engine._value_from_p(aligned), ks, aligned


def aligned_domain_values(points, sc, settings=None, audit=False):
    """Domain exhaustion by slice alignment, batched over points.

    For su11 the slice is the whole domain and the value is the plain
    branch supremum.  For su21 the branch value is constant on the set
    of aligning group elements, so one aligning element per point gives
    the value exactly; audit verifies that constancy from a second
    independent start.
    """
    settings = settings or OptimizerSettings()
    points = np.atleast_2d(np.asarray(points, complex))
    points = points / np.linalg.norm(points, axis=1, keepdims=True)
    engine = get_engine(sc)
    if sc.cycle_dim == 0:
        return maximize_branch(points, sc, settings)
    resolution, extras, seed, _ = settings.resolved(sc)
    coarse = coarse_group_stack(sc, resolution, seed, extras)

    def solve(rows, start_rule):
        g = np.abs(np.einsum("a,kab,mb->mk", engine.variety_dual, coarse, rows))
        idx = start_rule(g)
        ks, res = _align_newton(engine, rows, coarse[idx])
        if np.max(res) > 1e-10:
            raise OptimizerStall(f"slice alignment stalled at {np.max(res):.2e}")
        vals = engine._value_from_p(_project_to_variety(engine, ks, rows))
        return vals, ks

    def block(rows):
        vals, ks = solve(rows, lambda g: np.argmin(g, axis=1))
        if audit:
            vals2, _ = solve(rows, lambda g: np.argsort(g, axis=1)[:, 1])
            if np.max(np.abs(vals2 - vals)) > 1e-9:
                raise NumericalDegeneracy("aligned value not constant across starts")
        return vals, ks

    return run_chunked(block, points, chunk=settings.chunk)


def fiber_infimum(y, sc, settings=None, grid_count=32, margin=None):
    """inf of the cycle-space exhaustion over cycles through y.

    Candidate duals come from a deterministic sphere grid on the fiber
    plus a radially constructed warm start; descent is a two-real-dim
    compass walk in the chart around the incumbent, skipping candidates
    whose cycle leaves the cycle space.
    """
    from .cycles import cycle_from_dual, cycle_in_domain, mu_fiber

    settings = settings or OptimizerSettings(refine_top=1)
    if sc.cycle_dim == 0:
        row = y.homogeneous[None, :]
        vals, ks = maximize_branch(row, sc, settings)
        return float(vals[0]), None
    fib = mu_fiber(y, sc)

    def feasible(dual):
        return cycle_in_domain(cycle_from_dual(dual, sc), sc, margin=margin)

    def rmd(coefs):
        duals = fib.member_duals(np.atleast_2d(coefs))
        keep = np.array([feasible(d) for d in duals])
        out = np.full(duals.shape[0], np.inf)
        if np.any(keep):
            vals, _ = maximize_branch(duals[keep], sc, settings)
            out[keep] = vals
        return out

    # warm start: the radial dual through y, whose dual-ball radius matches
    # the point's own boundary distance
    v = y.homogeneous
    w12sq = abs(v[0]) ** 2 + abs(v[1]) ** 2
    if abs(v[2]) > 1e-14:
        wd = np.array([np.conj(v[0]), np.conj(v[1]), -w12sq / v[2]])
    else:
        wd = np.array([0.0, 0.0, 1.0], complex)
    wd = wd / np.linalg.norm(wd)
    warm = wd @ np.conj(fib.basis).T
    cands = np.vstack([fib.sphere_grid(grid_count), warm[None, :]])
    vals = rmd(cands)
    best = int(np.argmin(vals))
    cur, cur_v = cands[best], float(vals[best])
    if not np.isfinite(cur_v):
        raise OptimizerStall("no feasible cycle through the point was found")
    delta = 0.3
    while delta > 1e-5:
        u = cur / np.linalg.norm(cur)
        perp = np.array([-np.conj(u[1]), np.conj(u[0])])
        moves = np.stack([np.cos(delta) * u + np.sin(delta) * ph * perp
                          for ph in (1, -1, 1j, -1j)])
        mv = rmd(moves)
        j = int(np.argmin(mv))
        if mv[j] < cur_v - 1e-12:
            cur, cur_v = moves[j], float(mv[j])
        else:
            delta *= 0.5
    dual = fib.member_duals(cur[None, :])[0]
    return cur_v, dual
