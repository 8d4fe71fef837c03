"""The three exhaustions: closed forms, invariance, divergence, grids."""

import os

import numpy as np
import pytest

from cyclelab import (FlagPoint, InvalidInput, cycle_from_dual,
                      cycle_from_point, divergence_path, evaluate_grid,
                      k0_sample, lifted_exhaustion, seeded_cycles,
                      seeded_domain_points, translation_branch_pair)
from cyclelab.errors import NotInDomain
from cyclelab.exhaust import (batch_values, boundary_depths,
                              cycle_space_exhaustion, domain_exhaustion,
                              submeanvalue_discs)
from cyclelab.cycles import cycle_points

from oracles import LOG2, LOG10, rd_ball, rmd_disk, rmd_dual_ball


def test_disk_cycle_space_closed_form(su11):
    rng = np.random.default_rng(1)
    w = 0.95 * np.sqrt(rng.uniform(size=12)) * np.exp(
        2j * np.pi * rng.uniform(size=12))
    rows = np.stack([w, np.ones_like(w)], axis=1)
    vals = batch_values(rows, su11, "r_md")
    assert np.max(np.abs(vals - rmd_disk(w))) < 1e-9


def test_disk_spot_values(su11):
    c0 = cycle_from_point(su11.base_point, su11)
    assert cycle_space_exhaustion(c0, su11).value == pytest.approx(
        LOG2, abs=1e-9)
    c5 = cycle_from_point(FlagPoint(np.array([0.5, 1.0])), su11)
    assert cycle_space_exhaustion(c5, su11).value == pytest.approx(
        LOG10, abs=1e-9)


def test_ball_cycle_space_closed_form(su21):
    rng = np.random.default_rng(2)
    beta = rng.standard_normal((10, 2)) + 1j * rng.standard_normal((10, 2))
    beta *= (0.9 * np.sqrt(rng.uniform(size=10))
             / np.linalg.norm(beta, axis=1))[:, None]
    rows = np.concatenate([beta, np.ones((10, 1))], axis=1)
    vals = batch_values(rows, su21, "r_md")
    assert np.max(np.abs(vals - rmd_dual_ball(beta))) < 1e-9


def test_ball_domain_closed_form(su21):
    for y in seeded_domain_points(su21, 8, seed=5):
        got = domain_exhaustion(y, su21).value
        assert got == pytest.approx(float(rd_ball(y.homogeneous)), abs=1e-9)


def test_domain_exhaustion_cross_check(su21):
    y = seeded_domain_points(su21, 1, seed=3)[0]
    sample = domain_exhaustion(y, su21, cross_check=True)
    assert "fiber_infimum" in sample.notes
    assert abs(sample.notes["alignment_gap"]) < 1e-6


def test_disk_domain_equals_cycle_space(su11):
    # q = 0: cycles are points, so the two exhaustions coincide
    w = np.array([0.1, 0.4 + 0.2j, -0.7j])
    rows = np.stack([w, np.ones_like(w)], axis=1)
    diff = batch_values(rows, su11, "r_d") - batch_values(rows, su11, "r_md")
    assert np.max(np.abs(diff)) < 1e-12


def test_exhaustion_requires_domain(su11, su21):
    with pytest.raises(NotInDomain):
        cycle_space_exhaustion(
            cycle_from_point(FlagPoint(np.array([1.5, 1.0])), su11), su11)
    with pytest.raises(NotInDomain):
        domain_exhaustion(FlagPoint(np.array([0.0, 0.0, 1.0])), su21)
    with pytest.raises(NotInDomain):
        cycle_space_exhaustion(cycle_from_dual([1.3, 0.0, 1.0], su21), su21)


def test_lifted_exhaustion_is_a_pullback(su21):
    c = seeded_cycles(su21, 1, seed=7)[0]
    z = cycle_points(c, 2, seed=1)[0]
    lift = lifted_exhaustion(c, z, su21)
    assert lift.value == pytest.approx(
        cycle_space_exhaustion(c, su21).value, abs=1e-12)
    assert "incident_point" in lift.notes


def test_translation_identity(su11, su21):
    for sc in (su11, su21):
        cycles = seeded_cycles(sc, 4, seed=11)
        ks = k0_sample(sc.rf, 2, seed=12, extras=4)[-4:]
        for k, c in zip(ks, cycles):
            lhs, rhs = translation_branch_pair(k, c, sc)
            assert abs(lhs - rhs) < 1e-9


def test_compact_invariance(su21):
    c = seeded_cycles(su21, 1, seed=9)[0]
    base = cycle_space_exhaustion(c, su21).value
    from cyclelab import translate_cycle

    for k in k0_sample(su21.rf, 2, seed=10, extras=3)[-3:]:
        moved = cycle_space_exhaustion(translate_cycle(k, c, su21), su21).value
        assert abs(moved - base) < 1e-6


def test_boundary_depths_schedule():
    d = boundary_depths(5, decade=1.0)
    assert np.allclose(d, [0.5, 0.05, 0.005, 5e-4, 5e-5])
    assert np.allclose(boundary_depths(3, decade=0.5),
                       [0.5, 0.5 * 10**-0.5, 0.05])


@pytest.mark.parametrize("target", ["r_s", "r_md", "r_d"])
@pytest.mark.parametrize("name", ["su11", "su21"])
def test_divergence_along_boundary_paths(name, target, su11, su21):
    sc = {"su11": su11, "su21": su21}[name]
    depths, vals = divergence_path(sc, target, index=0, seed=42)
    assert np.all(np.isfinite(vals))
    assert np.max(vals) > 30.0
    assert np.all(np.diff(vals[-5:]) > 0)
    assert np.all(np.diff(depths) < 0)


def test_submeanvalue_margins(su11, su21):
    for sc in (su11, su21):
        centers, means = submeanvalue_discs(sc, "r_md", 12, seed=42)
        assert np.min(np.asarray(means) - np.asarray(centers)) > -1e-6


def test_batch_values_rejects_unknown_target(su11):
    with pytest.raises(InvalidInput):
        batch_values(np.array([[0.0, 1.0]]), su11, "r_x")


def test_grid_rows_and_error_strings(su11):
    rows = evaluate_grid(su11, "r_md", (-1.2, 1.2, 5), levi_mode="off")
    assert len(rows) == 25
    bad = [r for r in rows if r.error]
    good = [r for r in rows if not r.error]
    assert bad and good
    assert {r.error for r in bad} == {"outside the domain"}
    for r in bad:
        assert r.value is None and r.argmax is None and r.n_pos == -1
    for r in good:
        assert np.isfinite(r.value)
        assert r.argmax is not None
        assert abs(r.value - float(rmd_disk(r.re + 1j * r.im))) < 1e-9


def test_grid_error_strings_ball(su21):
    rows = evaluate_grid(su21, "r_d", (-1.5, 1.5, 3), levi_mode="off")
    assert {r.error for r in rows if r.error} == {"outside the domain"}
    rows_md = evaluate_grid(su21, "r_md", (-1.5, 1.5, 3), levi_mode="off")
    assert {r.error for r in rows_md if r.error} == {"outside the cycle space"}


def test_grid_center_value(su11):
    rows = evaluate_grid(su11, "r_md", (-0.9, 0.9, 3), levi_mode="off")
    center = min(rows, key=lambda r: abs(r.re) + abs(r.im))
    assert center.value == pytest.approx(LOG2, abs=1e-9)


def test_grid_levi_column(su11):
    rows = evaluate_grid(su11, "r_s", (-0.4, 0.4, 3), levi_mode="auto")
    assert all(r.n_pos == 1 for r in rows)
    rows_off = evaluate_grid(su11, "r_s", (-0.4, 0.4, 3), levi_mode="off")
    assert all(r.n_pos == -1 for r in rows_off)


def test_thread_cap_does_not_change_values(su21, monkeypatch):
    y = seeded_domain_points(su21, 6, seed=4)
    rows = np.stack([p.homogeneous for p in y])
    monkeypatch.setenv("CYCLELAB_THREADS", "1")
    serial = batch_values(rows, su21, "r_d")
    monkeypatch.setenv("CYCLELAB_THREADS", "4")
    threaded = batch_values(rows, su21, "r_d")
    assert np.array_equal(serial, threaded)


def test_seeded_samplers_are_deterministic(su21):
    a = seeded_domain_points(su21, 5, seed=99)
    b = seeded_domain_points(su21, 5, seed=99)
    assert all(x.is_close(y, tol=0.0) or x.is_close(y) for x, y in zip(a, b))
    ca = seeded_cycles(su21, 5, seed=98)
    cb = seeded_cycles(su21, 5, seed=98)
    assert all(np.array_equal(x.dual, y.dual) for x, y in zip(ca, cb))
    c2 = seeded_cycles(su21, 5, seed=97)
    assert not all(np.array_equal(x.dual, y.dual) for x, y in zip(ca, c2))
