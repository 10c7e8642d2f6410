import math
import os

import numpy as np
import pytest

import scatlab


def small_grid(M=100):
    return scatlab.Grid(n=1, L=80.0, N=512, t0=-5.0, t1=5.0, M=M)


def test_free_gaussian_matches_closed_form():
    g = small_grid()
    dg = scatlab.DataGrid.for_grid(g, 512)
    u = scatlab.free_poisson(scatlab.gaussian_data(dg, 1.0), g)
    vals = u.values
    assert vals.shape == (g.M + 1, g.N)
    z = np.array([g.coord(j) for j in range(g.N)])
    t = g.time(g.M)
    a = 1.0 + 2.0j * t
    exact = np.exp(-z * z / (2.0 * a)) / np.sqrt(2.0 * math.pi * a)
    assert np.max(np.abs(vals[-1] - exact)) < 1e-12


def test_evolve_from_numpy_preserves_norm():
    g = small_grid()
    z = np.array([g.coord(j) for j in range(g.N)])
    u = scatlab.evolve(np.exp(-z * z) + 0j, g, scatlab.PotentialSpec.compact_bump(1.0))
    norms = [u.slice_norm(k) for k in range(g.M + 1)]
    assert max(norms) / min(norms) - 1.0 < 1e-12


def test_values_round_trip_and_shape_check():
    dg = scatlab.DataGrid.for_grid(small_grid(), 64)
    f = scatlab.DataFunction(dg)
    f.values = np.arange(64, dtype=complex)
    assert f.values[10] == 10
    with pytest.raises(scatlab.ScatlabError):
        f.values = np.zeros(3, dtype=complex)


def test_flow_reaches_outgoing_radial_set():
    seed = scatlab.PhasePoint(z=[0.0], t=0.0, zeta=[1.0], tau=-1.0)
    tr = scatlab.trace_bicharacteristic(seed, scatlab.FlowDirection.Forward)
    assert tr.endpoint_class == scatlab.EndpointClass.PlusRadial
    end = tr.points[-1]
    assert abs(end.z[0] / end.t - 2.0) < 1e-4


def test_non_characteristic_seed_raises():
    with pytest.raises(scatlab.ScatlabError, match="NotCharacteristic"):
        scatlab.trace_bicharacteristic(
            scatlab.PhasePoint(z=[0.0], t=0.0, zeta=[1.0], tau=0.0), scatlab.FlowDirection.Forward
        )


def test_wk_norm_of_gaussian():
    dg = scatlab.DataGrid.for_grid(scatlab.Grid(n=1, L=24.0, N=256, t0=-1.0, t1=1.0, M=4), 256)
    f = scatlab.gaussian_data(dg, 1.0)
    assert scatlab.data_norm_Wk(f, 1) == pytest.approx(math.sqrt(3.0 * math.sqrt(math.pi)), rel=1e-10)


def test_acceptance_criterion_runs():
    r = scatlab.run_criterion(1)
    assert r.passed
    assert str(r).startswith("PASS")


def test_reports_module_location():
    build_dir = os.environ.get("SCATLAB_PYTHON_DIR")
    if build_dir:
        assert scatlab._core.__file__.startswith(build_dir)
