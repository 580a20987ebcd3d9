"""Discrete-time lattice sine-Gordon equation.

The quad map

    u11 = (u10 u01 - p^4) / (u00 (1 - q^4 u10 u01))

relates the four corners of an elementary square ``(n, m), (n+1, m),
(n, m+1), (n+1, m+1)``.  This module evolves it on a rectangle and provides
its linear analysis (dispersion relation and group velocity).
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np


class SingularStepError(ArithmeticError):
    """A quad step came within tolerance of a pole of the map."""

    def __init__(self, n, m, denominator, what="denominator"):
        self.n = int(n)
        self.m = int(m)
        self.denominator = float(denominator)
        super().__init__("singular step at (n=%d, m=%d): %s = %.3e"
                         % (self.n, self.m, what, self.denominator))


@dataclass(frozen=True)
class SGParams:
    p: float
    q: float

    def __post_init__(self):
        if self.p == 0 or self.q == 0:
            raise ValueError("lattice parameters p and q must be nonzero")

    @property
    def sigma(self) -> float:
        return self.p ** 2 * self.q ** 2

    @property
    def background(self) -> float:
        return self.p / self.q


@dataclass
class Field2D:
    """Real field ``u[n, m]`` stored as ``values[n - n_min, m]``, ``m = 0..m_max``."""

    n_min: int
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.ndim != 2:
            raise ValueError("field values must be two-dimensional")

    @property
    def n_max(self) -> int:
        return self.n_min + self.values.shape[0] - 1

    @property
    def m_max(self) -> int:
        return self.values.shape[1] - 1

    @property
    def n(self) -> np.ndarray:
        return np.arange(self.n_min, self.n_max + 1)

    def at(self, n, m):
        return self.values[np.asarray(n) - self.n_min, m]

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["n", "m", "u"])
            for i, n in enumerate(self.n):
                for m in range(self.m_max + 1):
                    w.writerow([n, m, "%.17g" % self.values[i, m]])

    @classmethod
    def from_csv(cls, path) -> "Field2D":
        data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
        n = data[:, 0].astype(int)
        m = data[:, 1].astype(int)
        vals = np.full((n.max() - n.min() + 1, m.max() + 1), np.nan)
        vals[n - n.min(), m] = data[:, 2]
        if np.isnan(vals).any():
            raise ValueError("CSV does not cover a full rectangle")
        return cls(int(n.min()), vals)


def sg_quad_step(u00, u10, u01, params: SGParams, tol: float = 1e-12):
    """Corner ``u11`` of the elementary square from the other three."""
    scale = abs(params.background)
    den = 1.0 - params.q ** 4 * u10 * u01
    if abs(u00) <= tol * scale:
        raise SingularStepError(0, 0, u00, "u00")
    if abs(den) <= tol:
        raise SingularStepError(0, 0, den)
    return (u10 * u01 - params.p ** 4) / (u00 * den)


def sg_solve_corner(u00, u10, u11, params: SGParams, tol: float = 1e-12):
    """The same relation solved for ``u01`` (used by the right-boundary sweep)."""
    scale = abs(params.background)
    den = 1.0 + params.q ** 4 * u00 * u11
    if abs(u10) <= tol * scale:
        raise SingularStepError(0, 0, u10, "u10")
    if abs(den) <= tol:
        raise SingularStepError(0, 0, den)
    return (u00 * u11 + params.p ** 4) / (u10 * den)


def _check(mask, den, n, m, what):
    if mask.any():
        idx = int(np.argmax(mask))
        raise SingularStepError(n[idx], m[idx], den[idx], what)


def sg_evolve(initial_row, boundary_column, params: SGParams, tol: float = 1e-12,
              side: str = "right", n_min: int = 0) -> Field2D:
    """Fill the rectangle ``[n_min, n_max] x [0, m_max]``.

    ``initial_row`` holds ``u[n, 0]``; ``boundary_column`` holds ``u[n_edge, m]``
    for ``m = 0..m_max`` where ``n_edge`` is ``n_max`` for ``side="right"`` and
    ``n_min`` for ``side="left"``.

    With the left column the map is used as written and sites are swept with
    ``n`` increasing.  For ``sigma != 1`` that sweep amplifies errors by a
    factor ``(sigma+1)/|sigma-1|`` per site, so it is only usable on narrow
    windows.  The right-column problem solves the same relation for
    ``u[n, m+1]`` and sweeps ``n`` decreasing, which is stable; it is the
    default.  Each anti-diagonal (resp. diagonal) wavefront is updated as one
    vector operation, so results are deterministic.
    """
    row = np.asarray(initial_row, dtype=float)
    col = np.asarray(boundary_column, dtype=float)
    if row.ndim != 1 or col.ndim != 1 or row.size < 2 or col.size < 1:
        raise ValueError("initial row needs >= 2 points and the column >= 1")
    if not (np.isfinite(row).all() and np.isfinite(col).all()):
        raise ValueError("initial and boundary data must be finite")
    nn, mm = row.size, col.size
    edge = nn - 1 if side == "right" else 0
    if side not in ("right", "left"):
        raise ValueError("side must be 'right' or 'left'")
    if abs(col[0] - row[edge]) > 1e-12 * max(1.0, abs(row[edge])):
        raise ValueError("boundary column and initial row disagree at the corner")
    u = np.empty((nn, mm))
    u[:, 0] = row
    scale = abs(params.background)
    p4, q4 = params.p ** 4, params.q ** 4
    if side == "right":
        u[-1, :] = col
        for d in range(nn - 3, -mm, -1):
            j = np.arange(max(1, -d), min(mm, nn - 1 - d))
            if j.size == 0:
                continue
            i = j + d
            a, b, e = u[i, j - 1], u[i + 1, j - 1], u[i + 1, j]
            den = 1.0 + q4 * a * e
            _check(np.abs(b) <= tol * scale, b, i + n_min, j, "u10")
            _check(np.abs(den) <= tol, den, i + n_min, j, "denominator")
            u[i, j] = (a * e + p4) / (b * den)
    else:
        u[0, :] = col
        for s in range(2, nn + mm - 1):
            i = np.arange(max(1, s - mm + 1), min(nn, s))
            if i.size == 0:
                continue
            j = s - i
            a, b, e = u[i - 1, j - 1], u[i, j - 1], u[i - 1, j]
            den = 1.0 - q4 * b * e
            _check(np.abs(a) <= tol * scale, a, i + n_min, j, "u00")
            _check(np.abs(den) <= tol, den, i + n_min, j, "denominator")
            u[i, j] = (b * e - p4) / (a * den)
    if not np.isfinite(u).all():
        bad = np.argwhere(~np.isfinite(u))[0]
        raise SingularStepError(bad[0] + n_min, bad[1], np.nan, "overflow")
    return Field2D(n_min, u)


def background_shift(u: Field2D, params: SGParams, direction: str = "to_perturbation") -> Field2D:
    """Subtract (``to_perturbation``) or add (``from_perturbation``) the background p/q."""
    c = params.background
    if direction == "to_perturbation":
        return Field2D(u.n_min, u.values - c)
    if direction == "from_perturbation":
        return Field2D(u.n_min, u.values + c)
    raise ValueError("direction must be 'to_perturbation' or 'from_perturbation'")


def linear_residual(v, sigma: float) -> float:
    """Largest violation of the linearized equation over all elementary squares."""
    a = v.values if isinstance(v, Field2D) else np.asarray(v)
    if a.shape[0] < 2 or a.shape[1] < 2:
        raise ValueError("need at least a 2x2 window")
    r = (sigma - 1) * (a[:-1, :-1] + a[1:, 1:]) + (sigma + 1) * (a[1:, :-1] + a[:-1, 1:])
    return float(np.max(np.abs(r)))


@dataclass(frozen=True)
class PlaneWave:
    k: float
    sigma: float
    z: complex
    Omega: complex
    omega: float


def omega_of_k(k, sigma):
    """Continuous branch of ``omega = -Arg(Omega)`` with ``omega(0) = -pi``.

    ``Omega = -A / (z conj(A))`` with ``A = (sigma+1) z + sigma - 1``; ``A``
    winds once around the origin, so ``omega = k - 2 arg A - pi`` with ``arg A``
    continued across ``k = +-pi``.
    """
    k = np.asarray(k, dtype=float)
    wraps = np.round(k / (2 * np.pi))
    k0 = k - 2 * np.pi * wraps
    arg = np.arctan2((sigma + 1) * np.sin(k0), (sigma + 1) * np.cos(k0) + sigma - 1)
    return k0 - 2 * arg - np.pi - 2 * np.pi * wraps


def dispersion(k: float, sigma: float) -> PlaneWave:
    z = complex(math.cos(k), math.sin(k))
    den = (sigma - 1) * z + sigma + 1
    if abs(den) < 1e-300:
        raise ZeroDivisionError("dispersion relation has a pole at k=%r, sigma=%r" % (k, sigma))
    Omega = -((sigma + 1) * z + sigma - 1) / den
    return PlaneWave(k, sigma, z, Omega, float(omega_of_k(k, sigma)))


def group_velocity(k, sigma: float):
    """d omega / d k from the closed form; real for real ``k`` and ``sigma > 0``."""
    z = np.exp(1j * np.asarray(k, dtype=float))
    den = ((sigma + 1) * z + sigma - 1) * ((sigma - 1) * z + sigma + 1)
    if np.any(np.abs(den) < 1e-300):
        raise ZeroDivisionError("group velocity pole")
    v = -4 * sigma * z / den
    if np.any(np.abs(v.imag) > 1e-10 * np.maximum(1.0, np.abs(v.real))):
        raise ArithmeticError("group velocity is not real (max imaginary part %.3e)"
                              % np.max(np.abs(v.imag)))
    out = v.real
    return float(out) if out.ndim == 0 else out


def plane_wave(n, m, k: float, sigma: float, amplitude: complex = 1.0):
    """``Re(A z^n Omega^m)``, a solution of the linearized equation."""
    wave = dispersion(k, sigma)
    n = np.asarray(n)
    m = np.asarray(m)
    return np.real(amplitude * wave.z ** n * wave.Omega ** m)


def write_dispersion_csv(path, sigma: float, ks) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["k", "re_Omega", "im_Omega", "abs_Omega", "omega", "group_velocity"])
        for k in ks:
            pw = dispersion(float(k), sigma)
            w.writerow(["%.17g" % v for v in (k, pw.Omega.real, pw.Omega.imag,
                                              abs(pw.Omega), pw.omega, group_velocity(k, sigma))])
