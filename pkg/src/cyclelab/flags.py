"""Flag manifold points, the group action, domain membership, charts.

Both built-in scenarios have Z = P(C^n) (parabolic type [1]), so a flag
point is a single homogeneous line stored as its canonical unit
representative.  The open orbit D of the real form is cut out by the sign
of the Hermitian form on that line.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidInput, NumericalDegeneracy
from .liecore import RealFormSpec
from .utils import check_finite, gauge_vector

SIGN_MARGIN = 1e-12
RANK_TOLERANCE = 1e-8


@dataclass(frozen=True)
class ParabolicSpec:
    """Flag type as the increasing list of subspace dimensions."""

    dimension_steps: tuple

    def __post_init__(self):
        steps = tuple(int(s) for s in self.dimension_steps)
        if not steps or any(b <= a for a, b in zip(steps, steps[1:])):
            raise InvalidInput("dimension_steps must be strictly increasing")
        object.__setattr__(self, "dimension_steps", steps)


@dataclass(eq=False)
class FlagPoint:
    """Point of P(C^n) as a gauge-fixed unit homogeneous vector.

    Gauge: unit norm, first effectively nonzero coordinate real positive.
    The representative is unique, so points compare by array closeness.
    """

    homogeneous: np.ndarray

    def __post_init__(self):
        v = gauge_vector(check_finite(self.homogeneous, "flag point"))
        v.setflags(write=False)
        object.__setattr__(self, "homogeneous", v)

    @property
    def n(self):
        return self.homogeneous.shape[0]

    def is_close(self, other, tol=1e-10):
        return bool(np.max(np.abs(self.homogeneous - other.homogeneous)) < tol)


@dataclass(frozen=True)
class Tolerances:
    det: float = 1e-10
    membership: float = 1e-10
    intersection: float = 1e-10
    sign_margin: float = SIGN_MARGIN
    rank: float = RANK_TOLERANCE
    residual: float = 1e-9
    zero_band: float = 1e-6
    fd_step: float = 1e-3
    step_tol: float = 1e-8


@dataclass(eq=False)
class ScenarioConfig:
    """Everything a built-in scenario pins down.

    domain_sign: the open orbit D is {v : sign(v* J v) == domain_sign}.
    cycle_dim is the complex dimension q of the base cycle, ambient_dim
    the complex dimension of Z.  base_cycle_dual is the dual vector of
    the base cycle when cycles are hypersurfaces (ambient_dim 2), None
    when cycles are points.
    """

    name: str
    rf: RealFormSpec
    parabolic: ParabolicSpec
    base_point: FlagPoint
    domain_sign: int
    cycle_dim: int
    ambient_dim: int
    weight_tag: str = "fundamental-1"
    tol: Tolerances = field(default_factory=Tolerances)
    base_cycle_dual: np.ndarray = None
    k0_resolution: int = 32
    k0_extras: int = 0

    @property
    def n(self):
        return self.rf.n

    def form_value(self, v):
        v = np.asarray(v, complex)
        return float(np.real(np.conj(v) @ self.rf.form_matrix @ v))


def act(g, z, tol=1e-14):
    """Canonical representative of g.z."""
    w = g.matrix @ z.homogeneous
    if np.linalg.norm(w) < tol:
        raise NumericalDegeneracy("group action produced a numerically zero vector")
    return FlagPoint(w)


def in_domain(z, sc):
    """Membership in the open orbit D, boundary excluded by sign_margin."""
    val = sc.form_value(z.homogeneous)
    return bool(sc.domain_sign * val > sc.tol.sign_margin)


def orbit_is_open(z, sc):
    """True iff the real-form orbit of z is open in Z.

    The tangent space of the orbit at z is spanned by X.v projected off
    the line C.v, for X running over a real basis of the algebra; the
    orbit is open iff that real span has full real dimension 2*(n-1).
    """
    v = z.homogeneous
    tangents = []
    for x in sc.rf.g0_basis:
        t = x @ v
        t = t - (np.conj(v) @ t) * v
        tangents.append(np.concatenate([t.real, t.imag]))
    sv = np.linalg.svd(np.stack(tangents), compute_uv=False)
    rank = int(np.sum(sv > sc.tol.rank))
    return rank == 2 * sc.ambient_dim


class Chart:
    """Affine chart of P(C^n) centered at a point.

    The pivot is the largest-modulus coordinate of the center (first such
    index on ties).  Coordinates c map to the point with homogeneous
    vector base + sum(c_j e_j) over the non-pivot indices, so 0 maps to
    the center and the map is holomorphic and injective on its chart.
    """

    def __init__(self, center):
        v = center.homogeneous
        self.center = center
        self.pivot = int(np.argmax(np.abs(v)))
        self.base = v / v[self.pivot]
        self.free = [i for i in range(v.shape[0]) if i != self.pivot]
        self.dim = len(self.free)

    def point(self, c):
        c = np.atleast_1d(np.asarray(c, complex))
        if c.shape[0] != self.dim:
            raise InvalidInput("chart coordinate has wrong length")
        w = self.base.copy()
        for i, idx in enumerate(self.free):
            w[idx] += c[i]
        return FlagPoint(w)

    def lift(self, c):
        """Un-normalized homogeneous vectors for a batch of coordinates."""
        c = np.atleast_2d(np.asarray(c, complex))
        w = np.tile(self.base, (c.shape[0], 1))
        for i, idx in enumerate(self.free):
            w[:, idx] += c[:, i]
        return w

    def coords(self, z):
        v = z.homogeneous
        if abs(v[self.pivot]) < 1e-12:
            raise NumericalDegeneracy("point leaves the chart")
        w = v / v[self.pivot]
        return np.array([w[i] - self.base[i] for i in self.free])


def chart(z, sc=None):
    """Deterministic affine chart centered at z."""
    return Chart(z)
