import csv
import math

import numpy as np
import pytest

from multisym import fieldsim as fs
from multisym.symalg import Poly
from polyoracle import BumpPoly, diff, integrate, mul


def test_zero_field_stays_zero():
    g = fs.Grid.cube(8)
    s = fs.evolve(fs.zero_state(g), 10)
    assert not s.A.any() and not s.E.any()
    assert fs.energy(s) == 0.0


def test_cfl_violation_is_detected():
    g = fs.Grid((8, 8, 8), 1 / 8, 2 / 8)
    assert not g.stable()
    with pytest.raises(fs.InstabilityError):
        fs.evolve(fs.plane_wave(g), 200)


def test_plane_wave_error_shrinks():
    errs = []
    for n in (8, 16):
        g = fs.Grid.cube(n)
        s = fs.evolve(fs.plane_wave(g), int(round(0.25 / g.dt)))
        errs.append(fs.l2_error_plane_wave(s))
    assert 3 <= errs[0] / errs[1] <= 5


def test_energy_conserved_to_roundoff():
    s = fs.plane_wave(fs.Grid.cube(12))
    e0 = fs.energy(s)
    assert abs(fs.energy(fs.evolve(s, 40)) - e0) / e0 < 1e-12


def test_snapshot_antisymmetry():
    snap = fs.snapshot(fs.plane_wave(fs.Grid.cube(8)))
    assert np.allclose(snap.Pi, -np.swapaxes(snap.Pi, 0, 1))
    assert not snap.A[0].any()


@pytest.mark.parametrize("k,i", [(3, 2), (1, 3), (2, 1)])
def test_smeared_bracket_against_exact_integral(k, i):
    t1 = BumpPoly({(0, 0, 0): 1, (1, 0, 0): 2, (0, 2, 0): 1})
    t2 = BumpPoly({(1, 1, 0): 1, (0, 0, 1): -3})
    (j,) = {1, 2, 3} - {k, i}
    want = float(-fs._eps3(k, i, j) * integrate(mul(diff(t1.exact, j - 1), t2.exact)))
    got = fs.smeared_bracket(t1, t2, k, i, 16)
    assert abs(got - want) <= 1e-6 * abs(want)


def test_smeared_bracket_vanishing_cases():
    t1 = BumpPoly({(0, 0, 0): 1})
    t2 = BumpPoly({(1, 0, 0): 1})
    assert fs.smeared_bracket(t1, t2, 1, 2, 8, "EE") == 0
    assert fs.smeared_bracket(t1, t2, 1, 2, 8, "BB") == 0
    # eps^{kij} vanishes for i = k
    assert abs(fs.smeared_bracket(t1, t2, 2, 2, 8)) < 1e-15


def test_slice_invariance():
    traj = fs.trajectory(fs.plane_wave(fs.Grid.cube(12), uniform_e=(0.3, 0.0, 0.0)), 10)
    e = fs.slice_invariance("energy", traj)
    p = fs.slice_invariance("P_phi", traj, phi=[0, 1, 2, -1])
    assert e.delta < 1e-10 and p.delta < 1e-10
    assert p.value0 == pytest.approx(0.3)
    with pytest.raises(ValueError):
        fs.slice_invariance("P_phi", traj, phi=[0, Poly.var("x[2]"), 0, 0])
    with pytest.raises(ValueError):
        fs.slice_invariance("other", traj)


def test_flatness():
    n = 32
    x = np.arange(n) / n
    X, Y = np.meshgrid(x, x, indexing="ij")
    A1 = np.sin(2 * np.pi * Y)
    A2 = np.cos(2 * np.pi * X) * np.sin(2 * np.pi * Y)
    rep = fs.ld2_flatness(A1, A2, flux=0.25)
    assert rep.final_deviation < 1e-10
    assert rep.mean_F12 == pytest.approx(0.25)
    assert rep.divergence_residual < 1e-8
    with pytest.raises(fs.ConvergenceError):
        fs.ld2_flatness(A1, A2, max_iter=0)


def test_config_validation():
    with pytest.raises(ValueError):
        fs.load_config({"bogus": 1})
    with pytest.raises(ValueError):
        fs.load_config({"dims": [8, 8]})
    g, c = fs.load_config({"dims": 8})
    assert g.dims == (8, 8, 8) and g.dt == g.h / 2 and c["steps"] == 100
    with pytest.raises(ValueError):
        fs.initial_state(g, {"kind": "nope"})


def test_simulate_and_csv(tmp_path):
    diag, snaps = fs.simulate({"dims": 6, "steps": 4, "snapshot_every": 2})
    assert diag["steps"] == 4 and diag["energy_drift"] < 1e-12
    assert len(snaps) == 3 and math.isclose(snaps[-1].t, 4 * diag["grid"]["dt"])
    path = tmp_path / "s.csv"
    fs.write_csv(path, snaps)
    rows = list(csv.reader(open(path)))
    assert rows[0] == fs.CSV_HEADER and len(rows) == 1 + 3 * 6 ** 3


def test_slice_density_is_energy_density():
    density, expected = fs.eta0_slice_density()
    assert density == expected
