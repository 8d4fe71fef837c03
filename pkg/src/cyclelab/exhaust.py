"""Exhaustion values on the cycle space, incidence space, and domain.

cycle_space_exhaustion is the supremum over translated Schubert slices
of the cell exhaustion at the slice intersection; lifted_exhaustion is
its pullback to incident pairs; domain_exhaustion is the infimum over
the cycles through a point, evaluated by slice alignment and optionally
cross-checked by explicit fiber descent.

Everything here is seeded and deterministic: the same inputs, settings,
and seed give byte-identical values.
"""

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .cycles import (cycle_from_dual, cycle_in_domain, incidence_pair,
                     translate_cycle)
from .errors import InvalidInput, NotInDomain
from .flags import FlagPoint, in_domain
from .optimize import (OptimizerSettings, aligned_domain_values, fiber_infimum,
                       get_engine, maximize_branch)
from .schubert import intersect_base_cycle, intersect_slice, schubert_slice, \
    translate_schubert, translate_slice
from .sections import cell_exhaustion, exhaustion_values, highest_weight_section
from .utils import expm_antihermitian

TARGETS = ("r_s", "r_md", "r_d")


@dataclass(eq=False)
class ExhaustionSample:
    value: float
    argmax: np.ndarray = None
    notes: dict = field(default_factory=dict)


def _base_slice(sc):
    engine = get_engine(sc)
    z_j = intersect_base_cycle(engine.schubert, sc)[0]
    return engine, schubert_slice(engine.schubert, z_j, sc)


def cycle_space_exhaustion(c, sc, settings=None, enforce_domain=True, margin=None):
    """Value of the cycle-space exhaustion at a cycle."""
    if enforce_domain and not cycle_in_domain(c, sc, margin=margin):
        raise NotInDomain("cycle is not contained in the domain")
    engine = get_engine(sc)
    vals, ks = maximize_branch(engine.subject_row(c)[None, :], sc, settings)
    return ExhaustionSample(value=float(vals[0]), argmax=ks[0])


def lifted_exhaustion(c, z, sc, settings=None):
    """Exhaustion of the incidence space at a pair (C, z) with z on C.

    The value is the pullback of the cycle-space exhaustion along the
    projection that forgets the point, so it only depends on C; the pair
    is still validated as genuinely incident.
    """
    pair = incidence_pair(z, c)
    sample = cycle_space_exhaustion(pair.nu, sc, settings)
    sample.notes["incident_point"] = pair.mu.homogeneous
    return sample


def domain_exhaustion(y, sc, settings=None, enforce_domain=True,
                      cross_check=False):
    """Value of the domain exhaustion at a point.

    Computed by slice alignment; cross_check additionally runs the
    explicit infimum over the fiber of cycles through y and records the
    discrepancy in the notes.
    """
    if enforce_domain and not in_domain(y, sc):
        raise NotInDomain("point is outside the domain")
    vals, ks = aligned_domain_values(y.homogeneous[None, :], sc, settings,
                                     audit=cross_check)
    sample = ExhaustionSample(value=float(vals[0]), argmax=ks[0])
    if cross_check:
        inf_v, _ = fiber_infimum(y, sc, settings or OptimizerSettings(refine_top=1))
        sample.notes["fiber_infimum"] = float(inf_v)
        sample.notes["alignment_gap"] = float(inf_v - sample.value)
    return sample


def batch_values(rows, sc, target, settings=None):
    """Target values over subject rows, without domain enforcement.

    Rows are chart-appropriate homogeneous vectors: points for r_s and
    r_d, cycle duals (or cycle points for su11) for r_md.
    """
    rows = np.atleast_2d(np.asarray(rows, complex))
    if target == "r_s":
        engine = get_engine(sc)
        return exhaustion_values(engine.section, rows)
    if target == "r_md":
        vals, _ = maximize_branch(rows, sc, settings)
        return vals
    if target == "r_d":
        vals, _ = aligned_domain_values(rows, sc, settings)
        return vals
    raise InvalidInput(f"unknown target {target!r}")


def translation_branch_pair(k, c, sc):
    """Both sides of the slice translation identity for a group element.

    Left: the exhaustion of the k-translated cell at the intersection of
    C with the translated slice.  Right: the base cell exhaustion at the
    intersection of the k^{-1}-translated cycle with the base slice.
    """
    engine, sl = _base_slice(sc)
    s_t = translate_schubert(k, engine.schubert, sc)
    sec_t = highest_weight_section(s_t, sc)
    sl_t = translate_slice(k, sl)
    z_l = intersect_slice(sl_t, c).point
    lhs = cell_exhaustion(z_l, s_t, sc, section=sec_t)
    z_r = intersect_slice(sl, translate_cycle(k.inverse(), c, sc)).point
    rhs = cell_exhaustion(z_r, engine.schubert, sc, section=engine.section)
    return lhs, rhs


def boundary_depths(samples=15, decade=1.0):
    """Geometric boundary-distance schedule 0.5 * 10^(-t * decade)."""
    return 0.5 * 10.0 ** (-decade * np.arange(samples, dtype=float))


def _depth_decade(sc, target):
    # depths are kept above the scales the evaluation can resolve: the
    # rotation argmax is found to step_tol, and the section ratio
    # underflows once the approach distance nears the inverse of its
    # dynamic range; the dual-ball and alignment paths resolve to
    # machine precision and take the full schedule
    if sc.n == 2 or target == "r_s":
        return 0.5
    return 1.0


def divergence_path(sc, target, index, seed=42, samples=15):
    """Values of a target exhaustion along a seeded path to the boundary.

    Returns (depths, values); evaluation skips domain enforcement since
    the late samples sit below the sign margin on purpose.
    """
    rng = np.random.default_rng((seed, index, 17))
    d = boundary_depths(samples, decade=_depth_decade(sc, target))
    if sc.n == 2:
        w = (1.0 - d) * np.exp(2j * np.pi * rng.uniform())
        rows = np.stack([w, np.ones_like(w)], axis=1)
        if target == "r_s":
            # approach the boundary point of the cell instead
            rows = np.stack([1.0 - d + 0j, np.ones_like(d) + 0j], axis=1)
        return d, batch_values(rows, sc, target)
    if target == "r_s":
        c = 1.0 / d
        rows = (get_engine(sc).schubert.borel.matrix @
                np.stack([c, np.ones_like(c), np.zeros_like(c)])).T
        return d, batch_values(rows, sc, target)
    if target == "r_md":
        e = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        e /= np.linalg.norm(e)
        beta = (1.0 - d)[:, None] * e[None, :]
        rows = np.concatenate([beta, np.ones((samples, 1))], axis=1)
        return d, batch_values(rows, sc, target)
    coeff = rng.uniform(-np.pi, np.pi, len(sc.rf.k0_basis))
    u = expm_antihermitian(
        np.einsum("d,dij->ij", coeff, np.asarray(sc.rf.k0_basis))[None])[0]
    rows = np.stack([np.ones_like(d) + 0j, np.zeros_like(d) + 0j,
                     (1.0 - d) + 0j], axis=1)
    rows = rows @ u.T
    return d, batch_values(rows, sc, target)


def submeanvalue_discs(sc, target, count, seed=42, boundary_points=16,
                       settings=None):
    """Center values and circle means over seeded holomorphic discs.

    Discs are affine in the natural bounded chart of the target's home
    space (the disk for su11, the dual ball for su21 cycles, the domain
    chart for su21 points), with radii keeping them strictly inside.
    Returns (center_values, circle_means).
    """
    rng = np.random.default_rng((seed, 23))
    phases = np.exp(2j * np.pi * np.arange(boundary_points) / boundary_points)
    centers, circles = [], []
    for _ in range(count):
        if sc.n == 2:
            wc = 0.92 * np.sqrt(rng.uniform()) * np.exp(2j * np.pi * rng.uniform())
            rad = (1.0 - abs(wc)) * (0.2 + 0.6 * rng.uniform())
            pts = np.concatenate([[wc], wc + rad * phases])
            rows = np.stack([pts, np.ones_like(pts)], axis=1)
        elif target in ("r_md",):
            bc = rng.standard_normal(2) + 1j * rng.standard_normal(2)
            bc *= 0.92 * np.sqrt(rng.uniform()) / np.linalg.norm(bc)
            e = rng.standard_normal(2) + 1j * rng.standard_normal(2)
            e /= np.linalg.norm(e)
            rad = (1.0 - np.linalg.norm(bc)) * (0.2 + 0.6 * rng.uniform())
            pts = np.concatenate([[0.0], rad * phases])
            beta = bc[None, :] + pts[:, None] * e[None, :]
            rows = np.concatenate([beta, np.ones((len(pts), 1))], axis=1)
        else:
            # domain chart (1, z2, z3): inside iff |z3|^2 < 1 + |z2|^2
            zc = rng.standard_normal(2) + 1j * rng.standard_normal(2)
            zc[1] *= 0.8 * np.sqrt(rng.uniform()) * np.sqrt(1 + abs(zc[0]) ** 2) \
                / max(abs(zc[1]), 1e-12)
            e = rng.standard_normal(2) + 1j * rng.standard_normal(2)
            e /= np.linalg.norm(e)
            slack = np.sqrt(1 + abs(zc[0]) ** 2) - abs(zc[1])
            rad = 0.3 * slack * (0.2 + 0.6 * rng.uniform())
            pts = np.concatenate([[0.0], rad * phases])
            z = zc[None, :] + pts[:, None] * e[None, :]
            rows = np.concatenate([np.ones((len(pts), 1)), z], axis=1)
        vals = batch_values(rows, sc, target, settings)
        centers.append(vals[0])
        circles.append(float(np.mean(vals[1:])))
    return np.array(centers), np.array(circles)


def seeded_domain_points(sc, count, seed=42, cap=0.9):
    """Deterministic interior points, boundary distance controlled by cap."""
    rng = np.random.default_rng((seed, 31))
    pts = []
    for _ in range(count):
        if sc.n == 2:
            w = cap * np.sqrt(rng.uniform()) * np.exp(2j * np.pi * rng.uniform())
            pts.append(FlagPoint(np.array([w, 1.0])))
        else:
            v12 = rng.standard_normal(2) + 1j * rng.standard_normal(2)
            v12 /= np.linalg.norm(v12)
            rho = cap * np.sqrt(rng.uniform())
            v3 = rho * np.exp(2j * np.pi * rng.uniform())
            pts.append(FlagPoint(np.concatenate([v12, [v3]])))
    return pts


def seeded_cycles(sc, count, seed=42, cap=0.95):
    """Deterministic cycles inside the domain."""
    from .cycles import cycle_from_point

    rng = np.random.default_rng((seed, 37))
    out = []
    for _ in range(count):
        if sc.n == 2:
            w = cap * np.sqrt(rng.uniform()) * np.exp(2j * np.pi * rng.uniform())
            out.append(cycle_from_point(FlagPoint(np.array([w, 1.0])), sc))
        else:
            beta = rng.standard_normal(2) + 1j * rng.standard_normal(2)
            beta *= cap * np.sqrt(rng.uniform()) / np.linalg.norm(beta)
            out.append(cycle_from_dual(np.concatenate([beta, [1.0]]), sc))
    return out


def k0_log_coordinates(k, rf):
    """Coefficients of log(k) in the compact algebra basis (for reports)."""
    x = scipy.linalg.logm(np.asarray(k, complex))
    x = 0.5 * (x - np.conj(x.T))
    basis = np.asarray(rf.k0_basis)
    gram = np.einsum("aij,bij->ab", np.conj(basis), basis).real
    rhs = np.einsum("aij,ij->a", np.conj(basis), x).real
    return np.linalg.solve(gram, rhs)


def grid_axis(spec):
    lo, hi, n = spec
    if n < 1 or not np.isfinite([lo, hi]).all() or hi < lo:
        raise InvalidInput("grid spec must be min:max:n with n >= 1 and max >= min")
    return np.linspace(lo, hi, int(n))


@dataclass(eq=False)
class GridRow:
    re: float
    im: float
    value: float = None
    argmax: np.ndarray = None
    n_pos: int = -1
    error: str = ""


def _grid_rows_and_errors(sc, target, cs):
    """Subject rows for grid coordinates c, with per-point error strings."""
    n = cs.shape[0]
    errors = np.array([""] * n, dtype=object)
    if sc.n == 2:
        rows = np.stack([cs, np.ones(n, complex)], axis=1)
        errors[np.abs(cs) >= 1.0] = "outside the domain"
        return rows, errors
    if target == "r_s":
        stack = np.stack([cs, np.ones(n, complex), np.zeros(n, complex)])
        return (get_engine(sc).schubert.borel.matrix @ stack).T, errors
    if target == "r_md":
        rows = np.stack([cs, np.zeros(n, complex), np.ones(n, complex)], axis=1)
        errors[np.abs(cs) >= 1.0] = "outside the cycle space"
        return rows, errors
    rows = np.stack([np.ones(n, complex), np.zeros(n, complex), cs], axis=1)
    errors[np.abs(cs) >= 1.0] = "outside the domain"
    return rows, errors


def evaluate_grid(sc, target, grid_spec, settings=None, levi_mode="auto"):
    """Evaluate a target over a square grid in its natural chart.

    The grid coordinate is the disk chart w for su11; for su21 it is the
    cell coordinate (r_s), the first dual-ball coordinate (r_md), or the
    fiber coordinate of [1 : 0 : c] (r_d).  Points outside the chart's
    admissible set get an error string instead of a value.  levi_mode
    "on" attaches the count of positive Levi eigenvalues at each point;
    "auto" does so only for r_s, where the computation is closed form
    cheap; "off" leaves the sentinel -1.
    """
    if target not in TARGETS:
        raise InvalidInput(f"unknown target {target!r}")
    axis = grid_axis(grid_spec)
    re, im = np.meshgrid(axis, axis, indexing="ij")
    cs = (re + 1j * im).ravel()
    rows, errors = _grid_rows_and_errors(sc, target, cs)
    ok = errors == ""
    values = np.full(cs.shape[0], np.nan)
    if np.any(ok):
        values[ok] = batch_values(rows[ok], sc, target, settings)
    argmaxes = [None] * cs.shape[0]
    if target in ("r_md", "r_d") and np.any(ok):
        if target == "r_md":
            _, ks = maximize_branch(rows[ok], sc, settings)
        else:
            _, ks = aligned_domain_values(rows[ok], sc, settings)
        for slot, k in zip(np.flatnonzero(ok), ks):
            argmaxes[slot] = k0_log_coordinates(k, sc.rf)
    do_levi = levi_mode == "on" or (levi_mode == "auto" and target == "r_s")
    npos = np.full(cs.shape[0], -1, dtype=int)
    if do_levi:
        from .levi import eig_signature, levi_form_fd

        def fn(zs):
            r, _ = _grid_rows_and_errors(sc, target, np.atleast_1d(zs))
            return batch_values(r, sc, target, settings)

        for i in np.flatnonzero(ok):
            # the stencil passes (m, 1) stacks; the chart wants scalars
            lev = levi_form_fd(lambda dz: fn(cs[i] + dz[:, 0]),
                               np.zeros(1, complex), h=sc.tol.fd_step)
            npos[i] = eig_signature(lev, sc.tol.zero_band)[0]
    out = []
    for i in range(cs.shape[0]):
        out.append(GridRow(re=float(cs[i].real), im=float(cs[i].imag),
                           value=None if not ok[i] else float(values[i]),
                           argmax=argmaxes[i], n_pos=int(npos[i]),
                           error=str(errors[i])))
    return out
