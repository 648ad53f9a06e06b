import math

import numpy as np
import pytest

import probreach as pr


def test_epsilon_constants():
    e = pr.epsilon_constants(1 / 16)
    assert e.eps1 == pytest.approx(7.956, rel=1e-3)
    assert e.eps2 == pytest.approx(2.2756, rel=1e-4)


def test_linear_bound_matches_closed_form():
    s = pr.constant_schedule(0.93, 0.2, 15)
    e = pr.epsilon_constants(1 / 16)
    psi = 0.2 * (0.93 ** 30 - 1) / (0.93 ** 2 - 1)
    expect = math.sqrt(psi * (2 * e.eps1 + e.eps2 * math.log(1e3)))
    assert pr.amgf_bound(s, 2, 1e-3, e, 15) == pytest.approx(expect, rel=1e-12)
    assert pr.linear_exact_bound(0.93, [0.2] * 15, 2, 1e-3, e, 15) == pr.amgf_bound(s, 2, 1e-3, e, 15)
    assert pr.worstcase_bound(s, 2, 1e-3, e, 15) >= pr.amgf_bound(s, 2, 1e-3, e, 15)
    assert pr.markov_bound(pr.constant_schedule(1, 1, 1), 1, 0.25, 1) == pytest.approx(2.0)
    eps, radius = pr.optimize_epsilon(s, 2, 1e-3, 15)
    assert radius <= pr.amgf_bound(s, 2, 1e-3, e, 15)
    assert 0 < eps.epsilon < 1


def test_amgf():
    assert pr.amgf(1, 1.0, 1.0) == pytest.approx(math.cosh(1.0))
    assert pr.amgf(3, 2.0, 1.0) == pytest.approx(math.sinh(2.0) / 2)
    assert pr.amgf_quadrature_oracle(5, 1.0, 4.0) == pytest.approx(pr.amgf(5, 1.0, 4.0), rel=1e-8)


def test_amgf_suite_small():
    report = pr.amgf_lemma_suite(mc_samples=20000)
    assert report["pass"] is True


def test_ensemble_and_tube():
    dev = pr.simulate_deviations("linear", n_traj=2000, seed=3)
    assert dev.shape == (2000, 16)
    assert np.all(dev[:, 0] == 0)
    tube = pr.reach_tube("linear")
    r = np.array(tube["r_delta"])
    assert r.shape == (16,)
    assert np.all(dev <= r)
    assert pr.quantile_radius([1, 2, 3, 4], 0.5) == 3
    cob = pr.reach_tube("cobweb", backend="interval")
    assert len(cob["lipschitz"]) == 5
    assert max(cob["r_delta"]) < 0.05


def test_errors():
    with pytest.raises(pr.ConfigError):
        pr.reach_tube("nope")
    with pytest.raises(pr.ConfigError):
        pr.run("bound", preset="linear", delta=1.5)
    with pytest.raises(ValueError):
        pr.quantile_radius([1.0, 2.0], 0.1)


def test_run_is_deterministic(tmp_path):
    a = pr.run("bound", preset="linear", delta=1e-3, T=15, out=tmp_path / "a")
    b = pr.run("bound", preset="linear", delta=1e-3, T=15, out=tmp_path / "b")
    assert a == b
    header = (tmp_path / "a" / "bounds.csv").read_text().splitlines()[0]
    assert header == "t,Psi,r_amgf,r_markov,r_worstcase"
    assert a["files"]["bounds.csv"]["sha256"]
