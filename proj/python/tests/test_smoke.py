import math

import numpy as np
import pytest

import mfgrid


@pytest.fixture(scope="module")
def setup():
    params = mfgrid.ModelParams()
    grid = mfgrid.TimeGrid(params.T, 400)
    pop = mfgrid.draw_population(64, 7)
    return params, grid, pop


def test_riccati_terminal(setup):
    params, grid, _ = setup
    branch, a = mfgrid.riccati(params, grid)
    # gamma = sqrt(c eta) for the reference parameters, so a stays at gamma / 2
    assert branch == "equal"
    assert a.shape == (401,)
    np.testing.assert_allclose(a, params.gamma / 2, atol=1e-12)
    below = mfgrid.ModelParams(gamma=1.0)
    branch, a = mfgrid.riccati(below, grid)
    assert branch == "below"
    assert a[-1] == pytest.approx(0.5, abs=1e-12)
    assert np.all(np.diff(a) < 0)
    assert mfgrid.verify_riccati(params, grid) < 1e-3


def test_diagnostics(setup):
    params, grid, _ = setup
    b1, holds = mfgrid.nash_diagnostics(params, grid)
    assert holds and abs(b1) > 1.0
    d = mfgrid.social_diagnostics(params, grid)
    assert d["holds"]
    assert d["det"] == pytest.approx(d["b1"] * d["l2"] - d["b2"] * d["l1"], rel=1e-9)


def test_nash_mean_field(setup):
    params, grid, pop = setup
    mf = mfgrid.solve_nash(params, pop, grid)
    assert mf["B"][-1] == pytest.approx(-params.gamma * params.zeta, abs=1e-8)
    assert mf["xbar"][0] == pytest.approx(pop.mean_x0(), rel=1e-12)
    assert mf["Pbar"][0] == pytest.approx(params.p0, abs=1e-12)


def test_social_mean_field(setup):
    params, grid, pop = setup
    mf = mfgrid.solve_social(params, pop, grid)
    assert abs(mf["l"][-1]) < 1e-8
    assert mf["coercive"]


def test_population_bounds():
    pop = mfgrid.draw_population(100, 3)
    x0 = np.asarray(pop.x0)
    assert len(pop) == 100
    assert x0.min() >= 2.0 and x0.max() <= 2.5
    assert pop.within_bounds()
    with pytest.raises(ValueError):
        mfgrid.ModelParams(c=-1.0)


def test_simulate_deterministic(setup):
    params, grid, pop = setup
    r1 = mfgrid.simulate(params, pop, grid, replications=4, seed=11, threads=2)
    r2 = mfgrid.simulate(params, pop, grid, replications=4, seed=11, threads=1)
    np.testing.assert_array_equal(r1["P_mean"], r2["P_mean"])
    assert math.isfinite(r1["err_P"])
    assert r1["J_hat"].shape == (len(pop),)


def test_deviate_not_profitable(setup):
    params, grid, pop = setup
    rows = mfgrid.deviate(params, pop, grid, "nash", [("constant", 1.0)],
                          replications=8, seed=5)
    assert len(rows) == 1
    assert rows[0]["diff"] > -3 * rows[0]["stderr"]


def test_lmi():
    eps2 = 0.5
    n = math.ceil(mfgrid.lmi_nash_threshold(eps2))
    assert mfgrid.lmi_nash(0.1, eps2, n)[0]
    assert not mfgrid.lmi_nash(0.1, eps2, n - 1)[0]
    assert mfgrid.lmi_social(2.0)[0]
