"""Finite-difference Levi forms and the pseudoconvexity certificate.

levi_form_fd computes the complex Hessian (d^2 f / dz_a dzbar_b) of a
real-valued function on C^d from central differences, with one
Richardson extrapolation step.  The certificate realizes the defining
datum of q-pseudoconvexity at a point y: a smooth local minorant of the
domain exhaustion, touching at y, whose Levi form has at least n - q
positive eigenvalues.

The minorant is built from the slice alignment of y.  When the cycles
are points the fixed aligned branch is itself a global minorant (the
supremum over branches dominates any single branch).  In the positive
cycle dimension a single frozen branch fails to minorize on any full
neighborhood: the deficit carries a bilinear slice-transverse cross
term, so no purely transverse quadratic padding can absorb it.  The
certificate instead follows the aligning group element smoothly with
the chart point; each member of that family is a feasible branch for
its own point, so the family value minorizes the exhaustion exactly,
and a small transverse quadratic is subtracted to make the domination
strict off the slice.  The Levi form of the result keeps the positive
slice curvature on its diagonal, so its positive count stays at least
the slice dimension.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import (MinorantFailure, NotInDomain, NumericalDegeneracy,
                     StencilFailure)
from .flags import FlagPoint, in_domain
from .optimize import (aligned_domain_values, aligned_values_from, get_engine,
                       maximize_branch)
from .utils import sobol_points

PROBE_GAP_TOL = 1e-9
TOUCH_TOL = 1e-10
MAX_SHRINKS = 4
SOUNDNESS_PROBES = 20
SOUNDNESS_TOL = 1e-8


def levi_form_fd(fn, z0, h, richardson=True):
    """Complex Hessian of fn at z0 by central differences.

    fn maps an (m, d) complex array to m real values and must be finite
    on the stencil.  One Richardson step (4 L_{h/2} - L_h) / 3 removes
    the leading O(h^2) error when richardson is set.
    """
    z0 = np.atleast_1d(np.asarray(z0, complex))
    d = z0.shape[0]

    def raw(step):
        pts = [z0]
        slots = {}
        for a in range(d):
            for delta in (step, -step, 1j * step, -1j * step):
                slots[(a, delta)] = len(pts)
                pts.append(z0 + delta * np.eye(d)[a])
        for a in range(d):
            for b in range(a + 1, d):
                for da in (step, -step, 1j * step, -1j * step):
                    for db in (step, -step, 1j * step, -1j * step):
                        key = (a, b, da, db)
                        slots[key] = len(pts)
                        pts.append(z0 + da * np.eye(d)[a] + db * np.eye(d)[b])
        vals = np.asarray(fn(np.stack(pts)), float)
        if not np.all(np.isfinite(vals)):
            raise StencilFailure("non-finite value on the Levi stencil")
        lev = np.zeros((d, d), complex)
        for a in range(d):
            s = sum(vals[slots[(a, delta)]]
                    for delta in (step, -step, 1j * step, -1j * step))
            lev[a, a] = (s - 4 * vals[0]) / (4 * step**2)

        def d2(a, b, da, db):
            return (vals[slots[(a, b, da, db)]] - vals[slots[(a, b, da, -db)]]
                    - vals[slots[(a, b, -da, db)]]
                    + vals[slots[(a, b, -da, -db)]]) / (4 * step**2)

        for a in range(d):
            for b in range(a + 1, d):
                real = d2(a, b, step, step) + d2(a, b, 1j * step, 1j * step)
                imag = d2(a, b, step, 1j * step) - d2(a, b, 1j * step, step)
                lev[a, b] = 0.25 * (real + 1j * imag)
                lev[b, a] = np.conj(lev[a, b])
        return lev

    lev = raw(h)
    if richardson:
        lev = (4.0 * raw(h / 2) - lev) / 3.0
    return 0.5 * (lev + np.conj(lev.T))


def levi_refinement_ratio(fn, z0, h):
    """||L_h - L_{h/2}|| / ||L_{h/2} - L_{h/4}||, ~4 for clean second order."""
    l1 = levi_form_fd(fn, z0, h, richardson=False)
    l2 = levi_form_fd(fn, z0, h / 2, richardson=False)
    l4 = levi_form_fd(fn, z0, h / 4, richardson=False)
    den = np.linalg.norm(l2 - l4)
    if den < 1e-15:
        raise StencilFailure("refinement differences vanished; h too small")
    return float(np.linalg.norm(l1 - l2) / den)


def eig_signature(lev, zero_band):
    """(positive, zero, negative) eigenvalue counts within a zero band."""
    eigs = np.linalg.eigvalsh(0.5 * (lev + np.conj(lev.T)))
    pos = int(np.sum(eigs > zero_band))
    neg = int(np.sum(eigs < -zero_band))
    return pos, lev.shape[0] - pos - neg, neg


def submeanvalue_margins(center_values, circle_means):
    """Circle mean minus center value; nonnegative for plurisubharmonic."""
    return np.asarray(circle_means, float) - np.asarray(center_values, float)


@dataclass(eq=False)
class LeviReport:
    matrix: np.ndarray
    eigenvalues: np.ndarray
    n_pos: int
    n_zero: int
    n_neg: int
    refinement_ratio: float = None


def levi_report(fn, z0, sc, h=None, with_ratio=False):
    h = h if h is not None else sc.tol.fd_step
    lev = levi_form_fd(fn, z0, h)
    pos, zero, neg = eig_signature(lev, sc.tol.zero_band)
    ratio = levi_refinement_ratio(fn, z0, max(h, 0.02)) if with_ratio else None
    return LeviReport(matrix=lev, eigenvalues=np.linalg.eigvalsh(lev),
                      n_pos=pos, n_zero=zero, n_neg=neg,
                      refinement_ratio=ratio)


@dataclass(eq=False)
class CertificateReport:
    """Local minorant datum certifying q-pseudoconvexity at a point."""

    point: np.ndarray
    value: float
    chart: np.ndarray
    slice_coord: complex
    padding: float
    radius: float
    touch_gap: float
    probe_gap_min: float
    levi_matrix: np.ndarray
    levi_eigenvalues: np.ndarray
    n_pos: int
    required_pos: int
    q_convex_ok: bool
    notes: dict = field(default_factory=dict)


def _aligned_chart(y, sc, settings):
    """Aligned branch data at y: value, k-hat, and chart directions."""
    from .cycles import plane_basis

    engine = get_engine(sc)
    v = y.homogeneous
    vals, ks = aligned_domain_values(v[None, :], sc, settings)
    value, khat = float(vals[0]), ks[0]
    borel = engine.schubert.borel.matrix
    if sc.cycle_dim == 0:
        # slice = whole domain; one chart direction suffices
        b_s = np.array([1.0, 0.0], complex)
        frame = np.stack([v, b_s])
        if abs(np.linalg.det(frame)) < 1e-8:
            b_s = np.array([0.0, 1.0], complex)
            frame = np.stack([v, b_s])
        return value, khat, None, frame
    ad = np.linalg.inv(borel) @ (khat @ v)
    c0 = complex(ad[0] / ad[1])
    lam = complex(ad[1])
    b_s = np.linalg.inv(khat) @ borel[:, 0]
    w12sq = abs(v[0]) ** 2 + abs(v[1]) ** 2
    if abs(v[2]) > 1e-14:
        lmin = np.array([np.conj(v[0]), np.conj(v[1]), -w12sq / v[2]])
    else:
        lmin = np.array([0.0, 0.0, 1.0], complex)
    rows = plane_basis(lmin / np.linalg.norm(lmin))
    t = rows[0] - (np.conj(v) @ rows[0]) * v
    if np.linalg.norm(t) < 1e-8:
        t = rows[1] - (np.conj(v) @ rows[1]) * v
    b_p = t / np.linalg.norm(t)
    frame = np.stack([v, b_s, b_p])
    if abs(np.linalg.det(frame)) < 1e-8:
        raise NumericalDegeneracy("certificate chart is degenerate")
    return value, khat, (c0, lam), frame


def q_pseudoconvex_certificate(y, sc, settings=None, probes=200, radius=1e-2,
                               seed=42):
    """Build and check the local minorant certificate at an interior point.

    Probes are Sobol points of the chart polydisk; the certificate holds
    when the exhaustion dominates the minorant at every probe within
    PROBE_GAP_TOL and the minorant's Levi form has at least n - q
    positive eigenvalues.  The radius shrinks a bounded number of times
    before the attempt is abandoned.
    """
    if not in_domain(y, sc):
        raise NotInDomain("certificates exist at interior points only")
    value, khat, slice_data, frame = _aligned_chart(y, sc, settings)
    v = frame[0]
    n_z, q = sc.ambient_dim, sc.cycle_dim
    required = n_z - q
    sigma = get_engine(sc).sigma

    if sc.cycle_dim == 0:
        def minorant(xi):
            rows = v[None, :] + xi[:, 0:1] * frame[1][None, :]
            moved = np.einsum("ab,mb->ma", khat, rows)
            num = np.sum(np.abs(moved) ** 2, axis=1)
            den = np.abs(moved @ sigma) ** 2
            return np.log(num) - np.log(den)

        def exhaustion(xi):
            rows = v[None, :] + xi[:, 0:1] * frame[1][None, :]
            vals, _ = maximize_branch(rows, sc, settings)
            return vals

        def family_points(xi):
            return None

        dims, padding = 1, 0.0
        notes = {}
    else:
        c0, lam = slice_data

        def slice_branch(xi_s):
            return np.log1p(np.abs(c0 + xi_s / lam) ** 2)

        def chart_rows(xi):
            return (v[None, :] + xi[:, 0:1] * frame[1][None, :]
                    + xi[:, 1:2] * frame[2][None, :])

        def exhaustion(xi):
            vals, _ = aligned_domain_values(chart_rows(xi), sc, settings)
            return vals

        def family_points(xi):
            _, _, aligned = aligned_values_from(chart_rows(xi), sc, khat)
            return aligned

        dims = 2
        notes = {}

    for attempt in range(MAX_SHRINKS + 1):
        rad = radius * 0.5**attempt
        if sc.cycle_dim != 0:
            # transverse decrease of the frozen branch at y; it scales the
            # padding and is recorded, but the minorant itself follows the
            # aligning element, which the frozen branch cannot (the frozen
            # deficit has a slice-transverse cross term)
            probe_p = rad * np.array([1, -1, 1j, -1j])
            xi_t = np.stack([np.zeros(4, complex), probe_p], axis=1)
            drop = slice_branch(xi_t[:, 0]) - exhaustion(xi_t)
            a_meas = float(np.max(drop / np.abs(xi_t[:, 1]) ** 2))
            padding = 0.5 * max(a_meas, 2e-3)
            notes = {"transverse_decay": a_meas}

            def minorant(xi):
                vals, _, _ = aligned_values_from(chart_rows(xi), sc, khat)
                return vals - padding * np.abs(xi[:, 1]) ** 2

        u = sobol_points(2 * dims, probes, seed)
        xi = (2.0 * u - 1.0) * rad
        xi = xi[:, 0::2] + 1j * xi[:, 1::2]
        rows = v[None, :] + xi[:, 0:1] * frame[1][None, :]
        if dims == 2:
            rows = rows + xi[:, 1:2] * frame[2][None, :]
        inside = np.array([in_domain_row(r, sc) for r in rows])
        if not np.all(inside):
            continue
        fam = family_points(xi)
        if fam is not None:
            # each family element must stay a feasible branch of its point
            feasible = np.array([in_domain_row(r, sc) for r in fam])
            if not np.all(feasible):
                continue
        gaps = exhaustion(xi) - minorant(xi)
        touch = float(abs(minorant(np.zeros((1, dims), complex))[0] - value))
        if touch > TOUCH_TOL:
            raise MinorantFailure(f"minorant misses the value by {touch:.2e}")
        gap_min = float(np.min(gaps))
        if gap_min >= -PROBE_GAP_TOL:
            # soundness recheck: fresh probes, independent of the batch
            # that tuned the radius
            u2 = sobol_points(2 * dims, SOUNDNESS_PROBES, seed + 1)
            xi2 = (2.0 * u2 - 1.0) * rad
            xi2 = xi2[:, 0::2] + 1j * xi2[:, 1::2]
            sound = float(np.min(exhaustion(xi2) - minorant(xi2)))
            if sound < -SOUNDNESS_TOL:
                continue
            lev = levi_form_fd(minorant, np.zeros(dims, complex),
                               h=sc.tol.fd_step)
            pos, _, _ = eig_signature(lev, sc.tol.zero_band)
            return CertificateReport(
                point=v, value=value, chart=frame,
                slice_coord=None if sc.cycle_dim == 0 else slice_data[0],
                padding=float(padding), radius=rad, touch_gap=touch,
                probe_gap_min=gap_min, levi_matrix=lev,
                levi_eigenvalues=np.linalg.eigvalsh(lev), n_pos=pos,
                required_pos=required, q_convex_ok=bool(pos >= required),
                notes=dict(notes, probes=probes, shrinks=attempt,
                           soundness_gap_min=sound))
    raise MinorantFailure("no radius produced a verified minorant")


def in_domain_row(row, sc):
    return in_domain(FlagPoint(row), sc)
