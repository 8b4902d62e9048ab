import math

import numpy as np
import pytest

import _mhdlab as mhd


def test_parseval_and_norms():
    n = 16
    g = mhd.Grid3(n)
    rng = np.random.default_rng(42)
    samples = rng.standard_normal((n, n, n))
    f = mhd.SpectralField(g, samples.ravel())
    assert f.l2_norm() == pytest.approx(math.sqrt((samples**2).mean()), rel=1e-10)
    back = f.to_physical()
    assert np.max(np.abs(back - samples)) < 1e-12


def test_sobolev_norm_of_cosine():
    n = 16
    g = mhd.Grid3(n)
    x = np.arange(n) / n
    samples = np.cos(2 * np.pi * x)[:, None, None] * np.ones((n, n, n))
    f = mhd.SpectralField(g, samples.ravel())
    assert f.sobolev_norm(0.0) == pytest.approx(math.sqrt(0.5), rel=1e-12)
    expected = math.sqrt((1 + 4 * math.pi**2) / 2)
    assert f.sobolev_norm(1.0) == pytest.approx(expected, rel=1e-12)


def test_diophantine_margins():
    margin, argmin = mhd.dot_margin((1.0, 0.0, 0.0), 3.0, 4)
    assert margin == 0.0
    assert tuple(argmin) == (0, 1, 0)
    margin, _ = mhd.dot_margin(mhd.default_diophantine_w(), 3.0, 10)
    assert margin > 0.0


def test_mode_eigenvalues_w_zero():
    vals = mhd.mode_eigenvalues((1, 0, 0), (0.0, 0.0, 0.0), 1.0, 1.0)
    res = sorted(v.real for v in vals)
    kappa_sq = 4 * math.pi**2
    assert res[0] == pytest.approx(-kappa_sq, abs=1e-9)
    assert res[1] == pytest.approx(-kappa_sq, abs=1e-9)
    assert abs(res[-1]) < 1e-9
    imag = sorted(v.imag for v in vals)
    assert imag[-1] == pytest.approx(2 * math.pi, abs=1e-9)


def test_decay_fit_recovery():
    t = np.linspace(0.0, 20.0, 100)
    e = 2.0 * (1.0 + 0.5 * t) ** -3.0
    fit = mhd.decay_fit(list(t), list(e))
    assert fit["C"] == pytest.approx(2.0, abs=1e-6)
    assert fit["alpha"] == pytest.approx(0.5, abs=1e-6)
    assert fit["p"] == pytest.approx(3.0, abs=1e-6)


def test_small_run_dissipates():
    res = mhd.run_decay(n=8, t_end=0.3, amplitude=1e-3, kmax=1, cadence=0.1)
    assert res["completed"]
    assert res["E_phys"][-1] <= res["E_phys"][0]
    assert res["h_energy"][-1] < res["h_energy"][0]
