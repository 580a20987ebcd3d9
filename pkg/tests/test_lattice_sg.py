import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lattice_nls.lattice_sg import (Field2D, SGParams, SingularStepError, background_shift,
                                    dispersion, group_velocity, linear_residual, omega_of_k,
                                    plane_wave, sg_evolve, sg_quad_step, sg_solve_corner,
                                    write_dispersion_csv)

P = SGParams(math.sqrt(2), 1.0)


def test_params():
    assert P.sigma == pytest.approx(2.0)
    with pytest.raises(ValueError):
        SGParams(0.0, 1.0)


def test_quad_step_examples():
    c = P.background
    assert sg_quad_step(c, c, c, P) == pytest.approx(c, rel=1e-15)
    eq = SGParams(0.7, 0.7)
    assert sg_quad_step(1.0, 1.0, 1.0, eq) == pytest.approx(1.0, rel=1e-15)
    with pytest.raises(SingularStepError):
        sg_quad_step(0.0, 1.0, 1.0, P)
    with pytest.raises(SingularStepError) as info:
        sg_quad_step(1.0, 1.0, 1.0, SGParams(2.0, 1.0))  # 1 - q^4 u10 u01 = 0
    assert info.value.denominator == 0.0


def test_corner_solve_inverts_quad_step():
    u00, u10, u01 = 1.3, 1.1, 1.6
    u11 = sg_quad_step(u00, u10, u01, P)
    assert sg_solve_corner(u00, u10, u11, P) == pytest.approx(u01, rel=1e-13)


def _plane_data(nn=200, mm=50, k=1.0, amp=1e-8):
    n = np.arange(nn)[:, None]
    m = np.arange(mm)[None, :]
    return P.background + plane_wave(n, m, k, P.sigma, 2 * amp)


@pytest.mark.parametrize("side, width, tol", [("right", 40, 1e-13), ("left", 6, 1e-9)])
def test_evolve_background(side, width, tol):
    # the left sweep amplifies even roundoff (about 30x per unit of a square window)
    c = P.background
    f = sg_evolve(np.full(width, c), np.full(width, c), P, side=side, n_min=-10)
    assert f.n_min == -10 and f.n_max == width - 11 and f.m_max == width - 1
    assert np.max(np.abs(f.values - c)) < tol
    ones = sg_evolve(np.ones(10), np.ones(10), SGParams(0.8, 0.8), side=side)
    np.testing.assert_allclose(ones.values, 1.0, rtol=1e-14)


def test_evolve_linear_regime_right_sweep():
    ex = _plane_data()
    f = sg_evolve(ex[:, 0], ex[-1, :], P)
    assert np.max(np.abs(f.values - ex)) / 1e-8 < 1e-6


def test_left_sweep_is_unstable_for_sigma_not_one():
    # the growth factor per site is (sigma+1)/|sigma-1| = 3 for sigma = 2
    ex = _plane_data(nn=60, mm=8)
    f = sg_evolve(ex[:, 0], ex[0, :], P, side="left")
    err = np.abs(f.values - ex)[:, 3]
    assert err[40] > 1e3 * max(err[5], 1e-16)


def test_background_is_a_pole_at_sigma_one():
    # 1 - q^4 (p/q)^2 = 1 - sigma vanishes, so the constant state is singular
    eq = SGParams(2.0, 0.5)
    with pytest.raises(SingularStepError):
        sg_quad_step(eq.background, eq.background, eq.background, eq)


def test_nonlinear_deviation_is_quadratic():
    devs = []
    for amp in (1e-3, 5e-4):
        ex = _plane_data(nn=120, mm=40, amp=amp)
        f = sg_evolve(ex[:, 0], ex[-1, :], P)
        devs.append(np.max(np.abs(f.values - ex)))
    assert devs[0] / devs[1] >= 3.5


def test_evolve_reports_singular_location():
    row = np.full(6, P.background)
    col = np.full(4, P.background)
    row[2] = 0.0
    with pytest.raises(SingularStepError) as info:
        sg_evolve(row, col, P, side="left", n_min=5)
    assert (info.value.n, info.value.m) == (8, 1)


def test_evolve_rejects_inconsistent_corner():
    with pytest.raises(ValueError):
        sg_evolve(np.ones(5), np.full(3, 2.0), P)


def test_evolve_deterministic():
    ex = _plane_data(amp=1e-3)
    a = sg_evolve(ex[:, 0], ex[-1, :], P).values
    b = sg_evolve(ex[:, 0], ex[-1, :], P).values
    assert a.tobytes() == b.tobytes()


def test_background_shift():
    c = P.background
    f = Field2D(0, np.full((3, 2), c))
    assert np.all(background_shift(f, P).values == 0)
    g = Field2D(-2, np.random.default_rng(0).normal(size=(4, 3)))
    back = background_shift(background_shift(g, P), P, "from_perturbation")
    np.testing.assert_allclose(back.values, g.values, atol=1e-15)
    np.testing.assert_array_equal(background_shift(Field2D(0, np.zeros((2, 2))), P, "from_perturbation").values, c)


def test_linear_residual_examples():
    n = np.arange(30)[:, None]
    m = np.arange(20)[None, :]
    v = plane_wave(n, m, 1.3, 2.0, 0.4 - 0.2j)
    assert linear_residual(v, 2.0) <= 1e-12 * abs(0.4 - 0.2j)
    assert linear_residual(np.zeros((3, 3)), 2.0) == 0
    noise = np.random.default_rng(1).uniform(-1, 1, size=(20, 20))
    assert linear_residual(noise, 2.0) > 0.1


def test_dispersion_examples():
    for k in (0.3, 1.7, -2.5):
        np.testing.assert_allclose(dispersion(k, 1.0).Omega, -np.exp(1j * k), atol=1e-15)
    for s in (0.3, 2.0, 5.0):
        assert dispersion(0.0, s).Omega == pytest.approx(-1.0)
    assert abs(dispersion(math.pi / 2, 2.0).Omega) == pytest.approx(1.0, abs=1e-12)
    assert dispersion(0.0, 2.0).omega == pytest.approx(-math.pi)


def test_omega_is_continuous_and_consistent():
    ks = np.linspace(-9, 9, 4001)
    w = omega_of_k(ks, 2.0)
    assert np.max(np.abs(np.diff(w))) < 0.02
    Om = np.array([dispersion(k, 2.0).Omega for k in ks])
    np.testing.assert_allclose(np.exp(-1j * w), Om, atol=1e-12)


def test_group_velocity_examples():
    assert group_velocity(0.0, 2.0) == pytest.approx(-0.5, abs=1e-15)
    np.testing.assert_allclose(group_velocity(np.linspace(-3, 3, 7), 1.0), -1.0, atol=1e-15)
    h = 1e-5
    for s in (0.5, 2.0, 3.0):
        for k in (0.3, 1.0, 2.0):
            fd = (omega_of_k(k + h, s) - omega_of_k(k - h, s)) / (2 * h)
            assert abs(fd - group_velocity(k, s)) < 1e-8
    # closed form -2 sigma / ((sigma^2-1) cos k + sigma^2 + 1)
    k = 1.1
    assert group_velocity(k, 3.0) == pytest.approx(-6 / (8 * math.cos(k) + 10), rel=1e-14)


@settings(max_examples=60, deadline=None)
@given(st.floats(-math.pi, math.pi), st.floats(0.05, 20))
def test_unit_modulus_property(k, sigma):
    assert abs(abs(dispersion(k, sigma).Omega) - 1) < 1e-12


def test_field_csv_round_trip(tmp_path):
    f = Field2D(-1, np.arange(6, dtype=float).reshape(3, 2) / 7)
    path = tmp_path / "f.csv"
    f.to_csv(path)
    assert path.read_text().splitlines()[0] == "n,m,u"
    g = Field2D.from_csv(path)
    assert g.n_min == -1 and np.array_equal(g.values, f.values)


def test_dispersion_csv(tmp_path):
    path = tmp_path / "d.csv"
    write_dispersion_csv(path, 2.0, np.linspace(0, 3, 5))
    lines = path.read_text().splitlines()
    assert lines[0] == "k,re_Omega,im_Omega,abs_Omega,omega,group_velocity"
    assert len(lines) == 6
