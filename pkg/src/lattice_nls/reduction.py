"""Reduction of the lattice sine-Gordon equation to a discrete NLS equation.

A small-amplitude wave on the background ``p/q`` is written as

    u = p/q + eps^2 psi0 + [eps phi E + eps^2 psi2 E^2 + c.c.],   E = z^n Omega^m,

with ``eps = 1/N`` and the envelope ``phi`` depending on the slow variables

    n2 = (M1 n - M2 m) / N,      m2 = m / N^2.

The integers ``M1, M2`` satisfy ``M2 = omega'(k) M1`` so that the envelope
travels with the group velocity.  On the coarse lattice ``phi`` obeys the
explicit, local update

    phi(m2+1) = phi + i [C (phi_{+1} + phi_{-1} - 2 phi) + c3 phi |phi|^2],

``C = -M2^2 (sigma^2-1) sin k / (4 sigma)``.  This module builds ansatz data,
steps the envelope equation, and measures how well a full lattice run
follows it.
"""
from __future__ import annotations

import cmath
import math
import time
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np
from scipy.optimize import brentq, least_squares

from .lattice_sg import (Field2D, SGParams, SingularStepError, dispersion,
                         group_velocity, sg_evolve)


# ---------------------------------------------------------------------------
# wavenumber and integer scale ratios


def _D(k: float, sigma: float) -> float:
    return (sigma ** 2 - 1) * math.cos(k) + sigma ** 2 + 1


def group_velocity_range(sigma: float, samples: int = 2001):
    """Interval of group velocities attained on ``k in [0, pi]`` (scanned)."""
    ks = np.linspace(0.0, math.pi, samples)
    v = group_velocity(ks, sigma)
    return float(np.min(v)), float(np.max(v))


def select_wavenumber(ratio, sigma: float) -> float:
    """``k in (0, pi)`` whose group velocity equals ``ratio = M2/M1``.

    The group velocity ``-2 sigma / D(k)`` is monotone on ``(0, pi)``, so a
    bracketing root search on the closed form is enough.  At ``sigma = 1``
    every ``k`` has velocity ``-1``; ``pi/2`` is returned by convention.
    """
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    r = float(Fraction(ratio)) if isinstance(ratio, (str, Fraction)) else float(ratio)
    lo, hi = group_velocity_range(sigma)
    if sigma == 1:
        if abs(r + 1) > 1e-12:
            raise ValueError("no wavenumber: at sigma=1 the group velocity is always -1, "
                             "requested %r" % r)
        return math.pi / 2
    f = lambda k: group_velocity(k, sigma) - r
    a, b = 0.0, math.pi
    if not (min(f(a), f(b)) < 0 < max(f(a), f(b))):
        raise ValueError("no wavenumber in (0, pi) with group velocity %r; attainable "
                         "interval is (%.12g, %.12g)" % (r, lo, hi))
    return brentq(f, a, b, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200)


def compute_S(M1: int, k: float, sigma: float, ell: Optional[int] = None):
    """Constant ``S`` making ``M1 = S Omega [(sigma-1) z + sigma+1]`` the given integer.

    Returns ``(S, M2)`` with ``M2 = S z [(sigma-1) Omega + sigma+1]`` (real).
    The phase is ``theta = pi - arg A + ell pi``, ``A = (sigma+1) z + sigma-1``,
    taken with the full-quadrant argument, and ``rho = (-1)^ell M1 / sqrt(2 D)``.
    When ``ell`` is omitted it is chosen so that ``rho > 0``.  Changing ``ell``
    by one rotates the phase by ``pi`` and flips the sign of ``rho``, so ``S``
    itself does not change.
    """
    if M1 == 0:
        raise ValueError("M1 must be a nonzero integer")
    D = _D(k, sigma)
    if D <= 0:
        raise ValueError("degenerate modulus: (sigma^2-1) cos k + sigma^2 + 1 = %r" % D)
    if ell is None:
        ell = 0 if M1 > 0 else 1
    argA = math.atan2((sigma + 1) * math.sin(k), (sigma + 1) * math.cos(k) + sigma - 1)
    theta = math.remainder(math.pi - argA + ell * math.pi, 2 * math.pi)
    if theta >= math.pi:
        theta -= 2 * math.pi
    rho = (-1) ** ell * M1 / math.sqrt(2 * D)
    S = rho * cmath.exp(1j * theta)
    wave = dispersion(k, sigma)
    z, Om = wave.z, wave.Omega
    M1_back = S * Om * ((sigma - 1) * z + sigma + 1)
    M2 = S * z * ((sigma - 1) * Om + sigma + 1)
    if abs(M1_back - M1) > 1e-10 * max(1, abs(M1)) or abs(M2.imag) > 1e-10 * max(1.0, abs(M2)):
        raise ArithmeticError("scale reconstruction failed: M1=%r, M2=%r" % (M1_back, M2))
    return S, float(M2.real)


# ---------------------------------------------------------------------------
# configuration and coefficients


@dataclass
class ReductionConfig:
    """Carrier wave, integer scale ratios and slow scale ``eps = 1/N``."""

    params: SGParams
    k: float
    M1: int
    M2: int
    N: int = 8
    ell: Optional[int] = None
    cubic: str = "paper"

    def __post_init__(self):
        if self.N < 2:
            raise ValueError("N must be >= 2")
        if not isinstance(self.M1, (int, np.integer)) or not isinstance(self.M2, (int, np.integer)):
            raise TypeError("M1 and M2 must be integers")
        v = group_velocity(self.k, self.sigma)
        if abs(v * self.M1 - self.M2) > 1e-8 * max(1, abs(self.M1)):
            raise ValueError("M2/M1 = %d/%d does not match the group velocity %.12g at k=%.12g"
                             % (self.M2, self.M1, v, self.k))

    @classmethod
    def from_ratio(cls, params: SGParams, M1: int, M2: int, N: int = 8, **kw):
        k = select_wavenumber(Fraction(M2, M1), params.sigma)
        return cls(params, k, M1, M2, N, **kw)

    def with_N(self, N: int) -> "ReductionConfig":
        return ReductionConfig(self.params, self.k, self.M1, self.M2, N, self.ell, self.cubic)

    @property
    def sigma(self) -> float:
        return self.params.sigma

    @property
    def eps(self) -> float:
        return 1.0 / self.N

    @property
    def wave(self):
        return dispersion(self.k, self.sigma)

    @property
    def S(self) -> complex:
        return compute_S(self.M1, self.k, self.sigma, self.ell)[0]


@dataclass(frozen=True)
class NLSCoeffs:
    c1_hat: complex
    c2_hat: complex
    c3_hat: float
    combined: float
    cubic: str = "paper"


def cubic_coefficient(k: float, params: SGParams, form: str = "paper") -> float:
    """Coefficient of ``phi |phi|^2`` in the envelope equation.

    ``form="paper"`` is ``2 q^4 (sigma^2-1) sin^3 k / D`` with
    ``D = (sigma^2-1) cos k + sigma^2 + 1``.  ``form="corrected"`` divides by
    ``D^2`` instead, which is what a direct expansion of the lattice equation
    (and :func:`stokes_frequency_shift`) gives.
    """
    s = params.sigma
    D = _D(k, s)
    if D == 0:
        raise ZeroDivisionError("cubic coefficient denominator vanishes")
    num = 2 * params.q ** 4 * (s ** 2 - 1) * math.sin(k) ** 3
    if form == "paper":
        return num / D
    if form == "corrected":
        return num / D ** 2
    raise ValueError("cubic form must be 'paper' or 'corrected'")


def nls_coefficients(config: ReductionConfig, cubic: Optional[str] = None) -> NLSCoeffs:
    return coefficients_for(config.k, config.params, config.M2, cubic or config.cubic)


def coefficients_for(k: float, params: SGParams, M2, cubic: str = "paper") -> NLSCoeffs:
    s = params.sigma
    c, sn = math.cos(k), math.sin(k)
    c1 = 1j * M2 ** 2 * (s - 1) * ((s + 1) * complex(c, sn) + s + 1) / (16 * s)
    c2 = -1j * M2 ** 2 * (s - 1) * ((s + 1) * c + s + 1) / (4 * s)
    combined = -M2 ** 2 * (s ** 2 - 1) * sn / (4 * s)
    total = 4 * c1 + c2
    if abs(total - combined) > 1e-12 * max(1.0, abs(combined)):
        raise ArithmeticError("4 c1 + c2 = %r differs from %r" % (total, combined))
    return NLSCoeffs(c1, c2, cubic_coefficient(k, params, cubic), float(combined), cubic)


def stokes_frequency_shift(k: float, params: SGParams, amplitude: float,
                           harmonics: int = 8) -> float:
    """Nonlinear frequency of a periodic travelling wave of the full lattice map.

    Looks for ``u[n, m] = F(k n - w m)``, ``F(t) = a0 + sum_j a_j cos(j t)``
    with ``a_1 = amplitude`` held fixed, by Fourier collocation.  Returns the
    frequency ``w``; ``w - omega(k)`` behaves like ``-c3 (amplitude/2)^2``.
    """
    p4, q4 = params.p ** 4, params.q ** 4
    J = harmonics
    thetas = 2 * np.pi * np.arange(4 * J + 4) / (4 * J + 4)
    js = np.arange(J + 1)

    def F(coef, t):
        return np.cos(np.outer(t, js)) @ coef

    def unpack(x):
        coef = np.empty(J + 1)
        coef[0] = x[0]
        coef[1] = amplitude
        coef[2:] = x[1:J]
        return coef, x[J]

    def resid(x):
        coef, w = unpack(x)
        u00 = F(coef, thetas)
        u10 = F(coef, thetas + k)
        u01 = F(coef, thetas - w)
        u11 = F(coef, thetas + k - w)
        return u11 * u00 * (1 - q4 * u10 * u01) - (u10 * u01 - p4)

    x0 = np.zeros(J + 1)
    x0[0] = params.background
    x0[J] = dispersion(k, params.sigma).omega
    sol = least_squares(resid, x0, xtol=1e-15, ftol=1e-15, gtol=1e-15)
    if np.max(np.abs(sol.fun)) > 1e-11:
        raise ArithmeticError("travelling-wave collocation did not converge")
    return float(sol.x[J])


# ---------------------------------------------------------------------------
# envelopes


@dataclass
class Envelope:
    """One row of complex envelope values ``phi[n2]`` for ``n2 = n2_start + j``."""

    n2_start: int
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=complex)

    @property
    def n2(self) -> np.ndarray:
        return self.n2_start + np.arange(self.values.size)

    def to_csv(self, path) -> None:
        with open(path, "w") as fh:
            fh.write("n2,re_phi,im_phi\n")
            for n2, v in zip(self.n2, self.values):
                fh.write("%d,%.17g,%.17g\n" % (n2, v.real, v.imag))


@dataclass
class Envelope2D:
    """Envelope rows ``values[m2, j]`` on ``n2 = n2_start + j``, ``m2 = 0, 1, ...``."""

    n2_start: int
    values: np.ndarray

    def __post_init__(self):
        self.values = np.atleast_2d(np.asarray(self.values, dtype=complex))

    def row(self, m2: int) -> Envelope:
        return Envelope(self.n2_start, self.values[m2])

    def sample(self, n2, m2) -> np.ndarray:
        """Envelope at real ``(n2, m2)``.

        Cubic Lagrange interpolation through the four nearest coarse points
        in ``n2`` (values outside the stored window are zero) and linear
        interpolation between rows in ``m2``.
        """
        n2 = np.asarray(n2, dtype=float)
        m2 = np.broadcast_to(np.asarray(m2, dtype=float), n2.shape)
        rows, width = self.values.shape
        j0 = np.floor(n2).astype(np.int64)
        t = n2 - j0
        lag = (-t * (t - 1) * (t - 2) / 6, (t + 1) * (t - 1) * (t - 2) / 2,
               -(t + 1) * t * (t - 2) / 2, (t + 1) * t * (t - 1) / 6)
        if rows == 1:
            r0 = np.zeros(n2.shape, dtype=np.int64)
            s = np.zeros(n2.shape)
        else:
            r0 = np.clip(np.floor(m2).astype(np.int64), 0, rows - 2)
            s = np.clip(m2 - r0, 0.0, 1.0)
        out = np.zeros(n2.shape, dtype=complex)
        for r, wr in ((r0, 1 - s), (np.minimum(r0 + 1, rows - 1), s)):
            acc = np.zeros(n2.shape, dtype=complex)
            for off, l in zip(range(-1, 3), lag):
                idx = j0 + off - self.n2_start
                inside = (idx >= 0) & (idx < width)
                acc += l * np.where(inside, self.values[r, np.clip(idx, 0, width - 1)], 0)
            out += wr * acc
        return out


@dataclass
class HarmonicFields:
    psi0: np.ndarray
    psi2: np.ndarray


def harmonic_fields(phi, params: SGParams) -> HarmonicFields:
    """Zeroth and second harmonics slaved to the fundamental envelope."""
    vals = phi.values if isinstance(phi, (Envelope, Envelope2D)) else np.asarray(phi, dtype=complex)
    r = params.q / params.p
    return HarmonicFields(r * np.abs(vals) ** 2, 0.5 * r * vals ** 2)


def slow_variables(config: ReductionConfig, n, m):
    n = np.asarray(n, dtype=float)
    m = np.asarray(m, dtype=float)
    return (config.M1 * n - config.M2 * m) / config.N, m / config.N ** 2


def ansatz_field(envelope: Envelope2D, config: ReductionConfig, n, m) -> np.ndarray:
    """Real lattice field of the modulated-wave ansatz at fine points ``(n, m)``."""
    n = np.asarray(n)
    m = np.asarray(m)
    eps = config.eps
    n2, m2 = slow_variables(config, n, m)
    phi = envelope.sample(n2, m2)
    h = harmonic_fields(phi, config.params)
    wave = config.wave
    E = wave.z ** n * wave.Omega ** m
    return (config.params.background + eps ** 2 * h.psi0
            + 2 * np.real(eps * phi * E + eps ** 2 * h.psi2 * E ** 2))


def build_ansatz(envelope: Envelope2D, config: ReductionConfig, n_min: int, n_max: int,
                 m_max: int):
    """Initial row ``u[n, 0]`` and right boundary column ``u[n_max, m]``.

    The column uses the envelope rows for ``m2 > 0``; ``envelope`` must hold
    enough rows to cover ``m_max / N^2``.
    """
    if n_max <= n_min:
        raise ValueError("empty fine window")
    if envelope.values.shape[0] < 2 and m_max > 0 and np.any(envelope.values):
        raise ValueError("envelope rows do not cover the requested time window")
    if (envelope.values.shape[0] - 1) * config.N ** 2 < m_max and envelope.values.shape[0] > 1:
        raise ValueError("envelope rows cover m <= %d, need %d"
                         % ((envelope.values.shape[0] - 1) * config.N ** 2, m_max))
    n = np.arange(n_min, n_max + 1)
    m = np.arange(m_max + 1)
    row = ansatz_field(envelope, config, n, np.zeros_like(n))
    col = ansatz_field(envelope, config, np.full_like(m, n_max), m)
    return row, col


# ---------------------------------------------------------------------------
# envelope equation


def _coeff_values(row):
    return row.values if isinstance(row, Envelope) else np.asarray(row, dtype=complex)


def _shift(phi, s, boundary):
    if boundary == "periodic":
        return np.roll(phi, -s)
    if boundary == "zero":
        out = np.zeros_like(phi)
        if s > 0:
            out[:-s] = phi[s:]
        else:
            out[-s:] = phi[:s]
        return out
    raise ValueError("boundary must be 'periodic' or 'zero'")


def nls_step(row, coeffs: NLSCoeffs, boundary: str = "periodic"):
    """One explicit step of the three-point envelope equation."""
    phi = _coeff_values(row)
    if phi.size < 3:
        raise ValueError("need at least 3 points")
    lap = _shift(phi, 1, boundary) + _shift(phi, -1, boundary) - 2 * phi
    out = phi + 1j * (coeffs.combined * lap + coeffs.c3_hat * phi * np.abs(phi) ** 2)
    if not np.isfinite(out).all():
        raise FloatingPointError("envelope overflow")
    return Envelope(row.n2_start, out) if isinstance(row, Envelope) else out


def substitute_wide_stencil(row, coeffs: NLSCoeffs, boundary: str = "periodic"):
    """One step of the five-point form carrying the ``phi_{n2 +- 2}`` terms."""
    phi = _coeff_values(row)
    if phi.size < 5:
        raise ValueError("need at least 5 points")
    sh = lambda s: _shift(phi, s, boundary)
    out = phi + 1j * (coeffs.c1_hat * (sh(2) + sh(-2) - 2 * phi)
                      + coeffs.c2_hat * (sh(1) + sh(-1) - 2 * phi)
                      + coeffs.c3_hat * phi * np.abs(phi) ** 2)
    return Envelope(row.n2_start, out) if isinstance(row, Envelope) else out


def nls_evolve(phi0: Envelope, coeffs: NLSCoeffs, steps: int,
               boundary: str = "periodic") -> Envelope2D:
    rows = [phi0.values]
    phi = phi0.values
    for _ in range(steps):
        phi = nls_step(phi, coeffs, boundary)
        rows.append(phi)
    return Envelope2D(phi0.n2_start, np.array(rows))


def residual_order2(phi: Callable, M1, M2, k: float, sigma: float,
                    n1=range(-6, 7), m1=range(-6, 7), branch: int = -1) -> float:
    """Largest modulus of the order-eps^2 secularity equation.

    ``psi[n1, m1] = phi(n1 + branch * m1)``; ``branch=-1`` is the travelling
    wave ``n2 = n1 - m1`` and ``branch=+1`` the alternative ``n2 = n1 + m1``.
    """
    wave = dispersion(k, sigma)
    z, Om = wave.z, wave.Omega
    a = M1 * z * ((sigma - 1) * Om + sigma + 1)
    b = M2 * Om * ((sigma - 1) * z + sigma + 1)
    N1, M1g = np.meshgrid(np.asarray(list(n1)), np.asarray(list(m1)), indexing="ij")
    psi = lambda i, j: np.asarray(phi(i + branch * j), dtype=complex)
    r = a * (psi(N1 + 1, M1g) - psi(N1 - 1, M1g)) + b * (psi(N1, M1g + 1) - psi(N1, M1g - 1))
    return float(np.max(np.abs(r)))


# ---------------------------------------------------------------------------
# envelope extraction


@dataclass
class DemodulationFilter:
    """Complex weights turning ``u[n0 + j] - p/q`` into the local fundamental amplitude.

    The window samples are fitted, with Hann weights, by harmonics
    ``s = 0, 1, 2`` of the carrier, each multiplied by a low-degree
    polynomial in ``j``.  ``weights[d]`` evaluates the fitted ``s = 1``
    polynomial at offset ``d``.
    """

    offsets: np.ndarray
    basis_rows: np.ndarray
    condition: float
    degree: int

    def weights(self, delta: float = 0.0) -> np.ndarray:
        powers = delta ** np.arange(self.degree + 1)
        return powers @ self.basis_rows


def demodulation_filter(k: float, half_width: int, degrees: Dict[int, int] = None) -> DemodulationFilter:
    degrees = {0: 2, 1: 2, 2: 2} if degrees is None else dict(degrees)
    j = np.arange(-half_width, half_width + 1)
    hann = 0.5 * (1 + np.cos(np.pi * j / (half_width + 1)))
    cols, tags = [], []
    for s, deg in sorted(degrees.items()):
        for l in range(deg + 1):
            b = np.exp(1j * s * k * j) * j.astype(float) ** l
            cols.append(b.real)
            tags.append((s, l, "re"))
            if s != 0:
                cols.append(b.imag)
                tags.append((s, l, "im"))
    X = np.array(cols).T
    sw = np.sqrt(hann)
    Xw = X * sw[:, None]
    cond = float(np.linalg.cond(Xw))
    if cond > 1e8:
        warnings.warn("demodulation fit is ill conditioned (cond=%.2e); the carrier "
                      "harmonics alias on this window" % cond, RuntimeWarning)
    pinv = np.linalg.pinv(Xw) * sw[None, :]
    # u ~ a e^{ikj} + conj(a) e^{-ikj}: cos-coefficient 2 Re a, sin-coefficient -2 Im a
    d1 = degrees[1]
    rows = np.array([(pinv[tags.index((1, l, "re"))] - 1j * pinv[tags.index((1, l, "im"))]) / 2
                     for l in range(d1 + 1)])
    return DemodulationFilter(j, rows, cond, d1)


def extract_envelope(u: Field2D, config: ReductionConfig, m: int, n2_values,
                     half_width: Optional[int] = None, degrees: Dict[int, int] = None) -> Envelope:
    """Estimate ``phi(n2, m2 = m/N^2)`` at integer ``n2_values`` from row ``m`` of ``u``.

    Each target corresponds to the fine position ``n = (N n2 + M2 m)/M1``; the
    window is centred at the nearest lattice site and the fitted fundamental
    is evaluated at the exact (possibly fractional) position.
    """
    N = config.N
    h = N if half_width is None else half_width
    filt = demodulation_filter(config.k, h, degrees)
    n2_values = np.asarray(n2_values, dtype=np.int64)
    target = (N * n2_values + config.M2 * m) / config.M1
    centre = np.rint(target).astype(np.int64)
    lo, hi = centre.min() - h, centre.max() + h
    if lo < u.n_min or hi > u.n_max or m < 0 or m > u.m_max:
        raise ValueError("demodulation window [%d, %d] at m=%d exceeds the field [%d, %d] x [0, %d]"
                         % (lo, hi, m, u.n_min, u.n_max, u.m_max))
    wave = config.wave
    c = config.params.background
    out = np.empty(n2_values.size, dtype=complex)
    for i, (n0, t) in enumerate(zip(centre, target)):
        seg = u.values[n0 - h - u.n_min:n0 + h + 1 - u.n_min, m] - c
        amp = filt.weights(t - n0) @ seg
        out[i] = amp * wave.z ** (-float(n0)) * wave.Omega ** (-m) * N
    return Envelope(int(n2_values[0]) if n2_values.size else 0, out)


# ---------------------------------------------------------------------------
# validation


def gaussian_profile(amplitude: float, width: float) -> Callable:
    return lambda n2: amplitude * np.exp(-np.asarray(n2, dtype=float) ** 2 / (2 * width ** 2)) + 0j


@dataclass
class ValidationRun:
    N: int
    k: float
    sigma: float
    M1: int
    M2: int
    coeffs: NLSCoeffs
    error: float
    runtime: float
    grid: tuple

    def as_dict(self) -> dict:
        return {
            "N": self.N, "k": self.k, "sigma": self.sigma, "M1": self.M1, "M2": self.M2,
            "coeffs": {"c1_hat": [self.coeffs.c1_hat.real, self.coeffs.c1_hat.imag],
                       "c2_hat": [self.coeffs.c2_hat.real, self.coeffs.c2_hat.imag],
                       "c3_hat": self.coeffs.c3_hat, "combined": self.coeffs.combined,
                       "cubic": self.coeffs.cubic},
            "error": self.error, "runtime": self.runtime, "grid": list(self.grid),
        }


@dataclass
class ValidationReport:
    runs: List[ValidationRun]
    ratios: List[float] = field(default_factory=list)
    monotone: bool = True

    def as_dict(self) -> dict:
        return {"runs": [r.as_dict() for r in self.runs], "ratios": self.ratios,
                "monotone": self.monotone}


ERROR_FLOOR = 1e-12


def run_reduction(config: ReductionConfig, profile: Callable, T: int, support: float,
                  reference: Optional[Callable] = None, tol: float = 1e-12) -> ValidationRun:
    """One lattice run at scale ``N``; see :func:`validate_reduction`."""
    t0 = time.perf_counter()
    N, M1, M2 = config.N, config.M1, config.M2
    if M1 != 1:
        raise ValueError("validation runs require M1 = 1 (coarse points on fine sites)")
    coeffs = nls_coefficients(config)
    sigma = config.sigma
    steps = T * N ** 2
    half = int(math.ceil(support))
    # envelope equation on a periodic window much larger than the support
    L = 8 * half + 2 * T + 4
    n2 = np.arange(-L, L + 1)
    phi0 = Envelope(-L, profile(n2))
    rows = nls_evolve(phi0, coeffs, T)
    # fine window: envelope support at both times, the demodulation half-width,
    # and a margin that right-boundary data cannot cross within `steps` rows
    drift = M2 * steps
    margin = int(math.ceil(max(sigma, 1 / sigma))) * steps
    n_lo = min(-half * N, -half * N + drift) - 2 * N
    n_hi = max(half * N, half * N + drift) + 2 * N + margin
    row, col = build_ansatz(rows, config, n_lo, n_hi, steps)
    u = sg_evolve(row, col, config.params, tol=tol, side="right", n_min=n_lo)
    targets = np.arange(-half, half + 1)
    est = extract_envelope(u, config, steps, targets)
    final = rows.values[T] if reference is None else np.asarray(reference(phi0, coeffs, T))
    ref = final[targets + L]
    scale = float(np.max(np.abs(phi0.values)))
    diff = float(np.max(np.abs(est.values - ref)))
    error = diff / scale if scale > 0 else diff
    return ValidationRun(N, config.k, sigma, M1, M2, coeffs, error,
                         time.perf_counter() - t0, u.values.shape)


def validate_reduction(config: ReductionConfig, Ns: Sequence[int], profile: Callable, T: int = 2,
                       support: float = 20.0, reference: Optional[Callable] = None) -> ValidationReport:
    """Compare a full lattice run with the envelope equation for each ``N``.

    For every ``N`` the ansatz built from ``profile`` (a function of ``n2``)
    seeds the lattice, which is swept ``T N^2`` rows; the envelope is then
    extracted on the coarse points ``|n2| <= support`` and compared with
    ``T`` steps of the envelope equation:

        e(N) = max |phi_est - phi_NLS| / max |phi0|.

    The report lists ``e(N)`` in ascending ``N`` with successive ratios
    ``e(N_i)/e(N_{i+1})``; ``monotone`` is true when the errors strictly
    decrease (or all lie below a roundoff floor).
    """
    Ns = sorted(Ns)
    runs = [run_reduction(config.with_N(N), profile, T, support, reference) for N in Ns]
    errs = [r.error for r in runs]
    ratios = [a / b if b > 0 else math.inf for a, b in zip(errs, errs[1:])]
    monotone = all(b < a for a, b in zip(errs, errs[1:])) or max(errs) <= ERROR_FLOOR
    return ValidationReport(runs, ratios, monotone)
