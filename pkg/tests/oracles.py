"""Independent closed-form oracles and frozen spot values.

Derived by hand from the defining formulas (Mobius geometry of the
disk, the dual-ball radius for lines, the fiber radius for points);
kept free of package code so tests compare two independent paths.
"""

import numpy as np

LOG2 = 0.6931471805599453
LOG10 = 2.302585092994046
LOG362 = 5.8916442118257715
TANH1 = 0.7615941559557649


def rs_disk(w):
    """Cell exhaustion on the disk: -log(|w - 1|^2 / (2 (1 + |w|^2)))."""
    w = np.asarray(w, complex)
    return -np.log(np.abs(w - 1.0) ** 2 / (2.0 * (1.0 + np.abs(w) ** 2)))


def rmd_disk(w):
    """Cycle-space exhaustion on the disk (cycles are points)."""
    aw = np.abs(np.asarray(w, complex))
    return -2.0 * np.log1p(-aw) + np.log1p(aw**2) + np.log(2.0)


def rmd_dual_ball(beta):
    """Cycle-space exhaustion for a line with dual (beta_1, beta_2, 1)."""
    rho_sq = np.sum(np.abs(np.asarray(beta, complex)) ** 2, axis=-1)
    return np.log((1.0 + rho_sq) / (1.0 - rho_sq))


def rd_ball(v):
    """Domain exhaustion at a positive line [v] via the fiber radius."""
    v = np.asarray(v, complex)
    rho_sq = np.abs(v[..., 2]) ** 2 / (np.abs(v[..., 0]) ** 2
                                       + np.abs(v[..., 1]) ** 2)
    return np.log((1.0 + rho_sq) / (1.0 - rho_sq))


def fubini_study_levi(z):
    """Levi form of log(1 + ||z||^2) at z, any dimension."""
    z = np.atleast_1d(np.asarray(z, complex))
    d = z.shape[0]
    s = 1.0 + np.sum(np.abs(z) ** 2)
    return (np.eye(d) * s - np.conj(z)[:, None] * z[None, :]) / s**2
