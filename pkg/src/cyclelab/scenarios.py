"""Built-in scenario definitions.

su11: G0 = SU(1,1) on Z = P^1, D the unit disk of negative lines, cycles
are points (q = 0).

su21: G0 = SU(2,1) on Z = P^2, D the set of positive lines, base cycle
the projective line P(C^2 + 0) (q = 1); translated cycles are lines and
are stored by dual vectors.

The adapted frames diagonalize the split torus generator: its null
eigenvectors stay fixed and the +/-1 eigenvectors v+ and v- become the
first and last frame columns, so A0 is diagonal and N0 strictly upper
triangular in frame coordinates for both scenarios.
"""

from functools import lru_cache

import numpy as np

from .errors import InvalidInput
from .flags import FlagPoint, ParabolicSpec, ScenarioConfig, Tolerances
from .liecore import RealFormSpec

SCENARIO_NAMES = ("su11", "su21")


def _frozen(*arrays):
    out = []
    for a in arrays:
        a = np.array(a, dtype=complex)
        a.setflags(write=False)
        out.append(a)
    return out


def _e(n, i, j):
    m = np.zeros((n, n), dtype=complex)
    m[i, j] = 1.0
    return m


def _build_su11():
    s2 = np.sqrt(2.0)
    j = np.diag([1.0, -1.0]).astype(complex)
    # columns: v+ = (1,1)/s2 and -v- = (-1,1)/s2, so det = 1
    p = np.array([[1.0, -1.0], [1.0, 1.0]], dtype=complex) / s2
    k0 = np.array([np.diag([1j, -1j])])
    a = np.array([[[0.0, 1.0], [1.0, 0.0]]], dtype=complex)
    n0 = np.array([p @ (1j * _e(2, 0, 1)) @ np.conj(p.T)])
    s0 = np.array([[[0, 1], [1, 0]], [[0, 1j], [-1j, 0]]], dtype=complex)
    j, p, k0, a, n0, s0 = _frozen(j, p, k0, a, n0, s0)
    rf = RealFormSpec(
        name="su11", form_matrix=j, signature=(1, 1), cartan_matrix=j,
        adapted_frame=p, k0_basis=k0, a_basis=a, n0_basis=n0, s0_basis=s0,
    )
    return ScenarioConfig(
        name="su11",
        rf=rf,
        parabolic=ParabolicSpec((1,)),
        base_point=FlagPoint(np.array([0.0, 1.0])),
        domain_sign=-1,
        cycle_dim=0,
        ambient_dim=1,
        tol=Tolerances(),
        base_cycle_dual=None,
        k0_resolution=32,
        k0_extras=0,
    )


def _build_su21():
    s2 = np.sqrt(2.0)
    j = np.diag([1.0, 1.0, -1.0]).astype(complex)
    vp = np.array([0.0, 1.0, 1.0]) / s2
    vm = np.array([0.0, 1.0, -1.0]) / s2
    e1 = np.array([1.0, 0.0, 0.0])
    p = np.stack([vp, e1, vm], axis=1)
    k0 = np.array([
        np.diag([1j, 0.0, -1j]),
        np.diag([0.0, 1j, -1j]),
        _e(3, 0, 1) - _e(3, 1, 0),
        1j * (_e(3, 0, 1) + _e(3, 1, 0)),
    ])
    a = np.array([_e(3, 1, 2) + _e(3, 2, 1)])
    n0_adapted = [
        _e(3, 0, 1) - _e(3, 1, 2),
        1j * (_e(3, 0, 1) + _e(3, 1, 2)),
        1j * _e(3, 0, 2),
    ]
    n0 = np.array([p @ m @ np.conj(p.T) for m in n0_adapted])
    s0 = np.array([
        _e(3, 0, 2) + _e(3, 2, 0),
        1j * (_e(3, 0, 2) - _e(3, 2, 0)),
        _e(3, 1, 2) + _e(3, 2, 1),
        1j * (_e(3, 1, 2) - _e(3, 2, 1)),
    ])
    j, p, k0, a, n0, s0 = _frozen(j, p, k0, a, n0, s0)
    rf = RealFormSpec(
        name="su21", form_matrix=j, signature=(2, 1), cartan_matrix=j,
        adapted_frame=p, k0_basis=k0, a_basis=a, n0_basis=n0, s0_basis=s0,
    )
    dual = np.array([0.0, 0.0, 1.0], dtype=complex)
    dual.setflags(write=False)
    return ScenarioConfig(
        name="su21",
        rf=rf,
        parabolic=ParabolicSpec((1,)),
        base_point=FlagPoint(np.array([1.0, 0.0, 0.0])),
        domain_sign=1,
        cycle_dim=1,
        ambient_dim=2,
        tol=Tolerances(),
        base_cycle_dual=dual,
        # 32 coarse points per compact dimension is affordable only for a
        # one-dimensional K0; the 4-dimensional K0 of su21 uses a 6^4 grid
        # plus 36 scrambled-Sobol extras, refined by local ascent.
        k0_resolution=6,
        k0_extras=36,
    )


@lru_cache(maxsize=None)
def get_scenario(name):
    if name == "su11":
        return _build_su11()
    if name == "su21":
        return _build_su21()
    raise InvalidInput(f"unknown scenario {name!r}; available: {SCENARIO_NAMES}")
