"""Acceptance criteria 1-10, each printing one PASS/FAIL line (run with ``pytest -s`` to see them)."""
import math
import random
import time
from fractions import Fraction

import numpy as np

from lattice_nls.lattice_sg import Field2D, SGParams, dispersion, group_velocity, omega_of_k, sg_evolve
from lattice_nls.multiscale import (GridFunction1D, difference_transform, forward_difference,
                                    shift_one_scale, shift_two_scale)
from lattice_nls.reduction import (Envelope2D, ReductionConfig, build_ansatz, coefficients_for,
                                   compute_S, extract_envelope, gaussian_profile, nls_step,
                                   residual_order2, select_wavenumber, substitute_wide_stencil,
                                   validate_reduction)


def report(number, ok, detail):
    print("criterion %2d: %s  %s" % (number, "PASS" if ok else "FAIL", detail))
    assert ok, detail


def test_criterion_01_multiscale_exactness():
    t0 = time.perf_counter()
    rng = random.Random(2024)
    bad = 0
    for _ in range(50):
        a, b, c = (Fraction(rng.randint(-99, 99), rng.randint(1, 9)) for _ in range(3))
        f = lambda n: a * n * n + b * n + c
        for N in range(2, 11):
            n1 = rng.randint(-5, 5)
            g = GridFunction1D.from_function(lambda j: f(N * j), n1 - 1, n1 + 2)
            for h in (1, -1):
                bad += shift_one_scale(g, n1, N, p=2, mode="symmetric", sign=h) != f(N * n1 + h)
    dt = time.perf_counter() - t0
    report(1, bad == 0 and dt < 1, "%d nonzero residuals over 900 shifts, %.2fs" % (bad, dt))


def test_criterion_02_coefficient_duality():
    t0 = time.perf_counter()
    rng = random.Random(17)
    bad = 0
    for _ in range(30):
        coeffs = [Fraction(rng.randint(-20, 20), rng.randint(1, 6)) for _ in range(5)]
        start = rng.randint(-4, 4)
        f = GridFunction1D.from_function(lambda n: sum(c * n ** j for j, c in enumerate(coeffs)),
                                         start, start + 5)
        diffs = [forward_difference(f, i)[f.start] for i in range(5)]
        N = rng.randint(2, 12)
        bad += difference_transform(difference_transform(diffs, N), Fraction(1, N)) != diffs
    dt = time.perf_counter() - t0
    report(2, bad == 0 and dt < 1, "%d mismatches in 30 round trips, %.2fs" % (bad, dt))


def test_criterion_03_two_scale_truncation_order():
    t0 = time.perf_counter()
    g2 = lambda a, b: 3 * a * a - 2 * b + 5 * b * b + 7 * a * b * b
    g1 = lambda a, b: 3 * a * a - 2 * b + 5 * a * b

    def residual(g, N, order):
        return max(abs(shift_two_scale(g, 2, 3, N, n2_order=order, sign=h)
                       - g(Fraction(2) + Fraction(h, N), Fraction(3) + Fraction(h, N * N)))
                   for h in (1, -1))

    r2 = [residual(g2, N, 2) for N in (8, 16, 32)]
    r1 = [residual(g1, N, 1) for N in (8, 16, 32)]
    q2 = [float(r2[i] / r2[i + 1]) for i in range(2)]
    q1 = [float(r1[i] / r1[i + 1]) for i in range(2)]
    dt = time.perf_counter() - t0
    ok = min(q2) >= 8 / 1.2 and min(q1) >= 4 / 1.2 and dt < 1
    report(3, ok, "two-scale ratios %s, mixed-order ratios %s" % (
        ["%.2f" % x for x in q2], ["%.2f" % x for x in q1]))


def test_criterion_04_dispersion():
    t0 = time.perf_counter()
    ks = np.linspace(-math.pi, math.pi, 100)
    sigmas = [0.25, 0.5, 1.0, 2.0, 5.0]
    mod = max(abs(abs(dispersion(k, s).Omega) - 1) for k in ks for s in sigmas)
    h = 1e-5
    fd = max(abs((omega_of_k(k + h, s) - omega_of_k(k - h, s)) / (2 * h) - group_velocity(k, s))
             for s in (0.5, 2.0, 3.0) for k in (0.3, 1.0, 2.0))
    one = max(max(abs(dispersion(k, 1.0).Omega + np.exp(1j * k)) for k in ks),
              float(np.max(np.abs(group_velocity(ks, 1.0) + 1))))
    dt = time.perf_counter() - t0
    ok = mod <= 1e-12 and fd <= 1e-8 and one <= 1e-12 and dt < 1
    report(4, ok, "max unit-modulus defect %.1e, FD mismatch %.1e, sigma=1 deviation %.1e" % (mod, fd, one))


def test_criterion_05_fixed_point():
    t0 = time.perf_counter()
    P = SGParams(math.sqrt(2), 1.0)
    c = P.background
    side = 318  # 317^2 > 1e5 elementary squares
    f = sg_evolve(np.full(side, c), np.full(side, c), P)
    drift = float(np.max(np.abs(f.values - c)))
    dt = time.perf_counter() - t0
    report(5, drift <= 1e-10 and dt < 1, "%d quad steps, drift %.1e, %.2fs" % ((side - 1) ** 2, drift, dt))


def test_criterion_06_coefficient_identity():
    t0 = time.perf_counter()
    worst = imag = 0.0
    for s in np.linspace(0.1, 6, 20):
        params = SGParams(math.sqrt(s), 1.0)
        for k in np.linspace(-3.0, 3.0, 20):
            for M2 in (1, -2, 3):
                c = coefficients_for(k, params, M2)
                worst = max(worst, abs(4 * c.c1_hat + c.c2_hat - c.combined))
                imag = max(imag, abs((4 * c.c1_hat + c.c2_hat).imag), abs(complex(c.c3_hat).imag))
    spot = coefficients_for(math.pi / 2, SGParams(math.sqrt(2), 1.0), 1).combined
    dt = time.perf_counter() - t0
    ok = worst <= 1e-12 and imag <= 1e-12 and abs(spot + 3 / 8) <= 1e-12 and dt < 1
    report(6, ok, "max identity gap %.1e, imaginary parts %.1e, spot %.15g" % (worst, imag, spot))


def test_criterion_07_secularity():
    t0 = time.perf_counter()
    rng = np.random.default_rng(77)
    on, off = 0.0, math.inf
    for _ in range(10):
        sigma = rng.uniform(0.3, 4)
        k = rng.uniform(0.2, 3.0)
        M1 = int(rng.integers(1, 4))
        _, M2 = compute_S(M1, k, sigma)
        c = rng.normal(size=3) + 1j * rng.normal(size=3)
        phi = lambda x: c[0] * np.exp(-(x - c[1].real) ** 2 / 30) + c[2] * np.sin(0.4 * x)
        on = max(on, residual_order2(phi, M1, M2, k, sigma))
        off = min(off, residual_order2(phi, M1, M2 + 1, k, sigma))
    dt = time.perf_counter() - t0
    report(7, on <= 1e-12 and off > 1e-3 and dt < 1,
           "matched residual %.1e, perturbed residual %.2e" % (on, off))


def test_criterion_08_stencil_equivalence():
    t0 = time.perf_counter()
    coeffs = coefficients_for(1.4, SGParams(1.2, 0.9), -2)
    x = np.arange(-15, 16)
    quad = (0.004 * x ** 2 - 0.03 * x + 0.7) * (0.6 - 0.8j)
    gap = float(np.max(np.abs(substitute_wide_stencil(quad, coeffs) - nls_step(quad, coeffs))[2:-2]))
    rng = np.random.default_rng(8)
    phi = rng.normal(size=40) + 1j * rng.normal(size=40)
    d4 = np.roll(phi, -2) - 4 * np.roll(phi, -1) + 6 * phi - 4 * np.roll(phi, 1) + np.roll(phi, 2)
    diff = substitute_wide_stencil(phi, coeffs) - nls_step(phi, coeffs)
    gen = float(np.max(np.abs(diff - 1j * coeffs.c1_hat * d4)))
    dt = time.perf_counter() - t0
    report(8, gap <= 1e-12 and gen <= 1e-12 and dt < 1,
           "order-2 gap %.1e, generic fourth-difference gap %.1e" % (gap, gen))


def test_criterion_09_ansatz_round_trip():
    t0 = time.perf_counter()
    P = SGParams(math.sqrt(2), 1.0)
    profile = gaussian_profile(0.5, 3.0)
    n2 = np.arange(-15, 16)
    errs = []
    for N in (8, 16):
        cfg = ReductionConfig.from_ratio(P, 1, -1, N)
        env = Envelope2D(-60, profile(np.arange(-60, 61)))
        lo, hi = -40 * N, 40 * N
        row, _ = build_ansatz(env, cfg, lo, hi, 0)
        est = extract_envelope(Field2D(lo, row[:, None]), cfg, 0, n2)
        errs.append(float(np.max(np.abs(est.values - profile(n2)))) / 0.5)
    dt = time.perf_counter() - t0
    ok = errs[0] <= 0.1 and errs[1] <= 0.6 * errs[0] and dt < 5
    report(9, ok, "relative error N=8: %.2e, N=16: %.2e (ratio %.3f)" % (errs[0], errs[1], errs[1] / errs[0]))


def test_criterion_10_far_field_validation():
    t0 = time.perf_counter()
    P = SGParams(math.sqrt(2), 1.0)
    k = select_wavenumber(Fraction(-1), P.sigma)
    cfg = ReductionConfig(P, k, 1, -1, 8, cubic="paper")
    rep = validate_reduction(cfg, [8, 12, 16], gaussian_profile(0.5, 4.0), T=2, support=20)
    errs = [r.error for r in rep.runs]
    ratio = errs[0] / errs[-1]
    size_ok = all(r.grid[0] <= 5000 and r.grid[1] <= 1000 for r in rep.runs)
    dt = time.perf_counter() - t0
    ok = rep.monotone and ratio >= 1.5 and size_ok
    report(10, ok, "e(N) = %s, e(8)/e(16) = %.3f, monotone=%s, %.1fs" % (
        ["%.4g" % e for e in errs], ratio, rep.monotone, dt))
