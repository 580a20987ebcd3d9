"""Exact multiscale difference calculus.

A function ``f_n`` on a fine lattice is identified with ``g`` sampled on one
or two coarser lattices (``n1 = n/N``, ``n2 = n/N**2``).  Everything here is
exact rational arithmetic (:class:`fractions.Fraction`); floats only enter
when the caller supplies float-valued grid data.
"""
from __future__ import annotations

import csv
import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Sequence, Tuple, Union

Number = Union[int, Fraction, float]


class WindowExhaustedError(ValueError):
    """No candidate slow-varying order fits inside the sample window."""


class StirlingCache:
    """Append-only tables of Stirling numbers.

    ``first(i, a)`` is the signed first-kind number S_i^a and ``second(a, k)``
    the second-kind number.  Tables grow on demand; growth is serialized by a
    lock so concurrent readers are safe.
    """

    def __init__(self):
        self._first: List[List[int]] = [[1]]
        self._second: List[List[int]] = [[1]]
        self._lock = threading.Lock()

    def _grow(self, table, size, rule):
        with self._lock:
            while len(table) <= size:
                n = len(table) - 1
                prev = table[-1]
                row = []
                for a in range(n + 2):
                    lower = prev[a - 1] if a >= 1 else 0
                    same = prev[a] if a <= n else 0
                    row.append(rule(n, a, lower, same))
                table.append(row)

    def first(self, i: int, a: int) -> int:
        if i < 0 or a < 0 or a > i:
            return 0
        if i >= len(self._first):
            # S_{n+1}^a = S_n^{a-1} - n S_n^a
            self._grow(self._first, i, lambda n, a, lo, same: lo - n * same)
        return self._first[i][a]

    def second(self, a: int, k: int) -> int:
        if a < 0 or k < 0 or k > a:
            return 0
        if a >= len(self._second):
            # T_{n+1}^k = k T_n^k + T_n^{k-1}
            self._grow(self._second, a, lambda n, k, lo, same: k * same + lo)
        return self._second[a][k]

    def precompute(self, size: int) -> None:
        self.first(size, 0)
        self.second(size, 0)


_CACHE = StirlingCache()


def stirling_first(i: int, alpha: int) -> int:
    """Signed Stirling number of the first kind S_i^alpha (0 outside the triangle)."""
    return _CACHE.first(i, alpha)


def stirling_second(alpha: int, k: int) -> int:
    """Stirling number of the second kind (0 outside the triangle)."""
    return _CACHE.second(alpha, k)


def as_rational(value) -> Fraction:
    if isinstance(value, float):
        raise TypeError("exact rational expected, got float %r" % value)
    return Fraction(value)


def coeff_P(i: int, k: int, omega) -> Fraction:
    """sum_{a=k}^{i} omega^a S_i^a T_a^k, exact.

    ``omega = N`` gives the coarse-from-fine coefficients P(i, k);
    ``omega = 1/N`` gives the inverse coefficients Q(i, k).
    """
    if k < 0 or i < k:
        raise ValueError("invalid order pair (i=%d, k=%d): need i >= k >= 0" % (i, k))
    w = as_rational(omega)
    return sum((w ** a * stirling_first(i, a) * stirling_second(a, k)
                for a in range(k, i + 1)), Fraction(0))


def difference_transform(diffs: Sequence, omega) -> List:
    """Map differences Delta^i (i = 0..K) on one lattice to the other.

    ``out[k] = sum_{i>=k} k!/i! P(i, k; omega) diffs[i]``; the sum is finite
    because differences beyond ``K`` are taken to vanish (slow order <= K).
    """
    K = len(diffs) - 1
    out = []
    for k in range(K + 1):
        acc = 0
        for i in range(k, K + 1):
            acc = acc + Fraction(math.factorial(k), math.factorial(i)) * coeff_P(i, k, omega) * diffs[i]
        out.append(acc)
    return out


def coefficient_table(max_i: int, omega) -> List[Tuple[int, int, Fraction]]:
    return [(i, k, coeff_P(i, k, omega)) for i in range(max_i + 1) for k in range(i + 1)]


def write_coefficient_csv(path, max_i: int, omega) -> None:
    w = as_rational(omega)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["i", "k", "omega_num", "omega_den", "value_num", "value_den"])
        for i, k, value in coefficient_table(max_i, w):
            writer.writerow([i, k, w.numerator, w.denominator, value.numerator, value.denominator])


# ---------------------------------------------------------------------------
# grid functions


@dataclass
class GridFunction1D:
    """Samples ``values[j]`` at lattice index ``start + j``."""

    start: int
    values: list

    def __post_init__(self):
        self.values = list(self.values)
        for v in self.values:
            if isinstance(v, float) and not math.isfinite(v):
                raise ValueError("grid values must be finite")

    @classmethod
    def from_function(cls, func: Callable[[int], Number], start: int, stop: int):
        return cls(start, [func(n) for n in range(start, stop)])

    def __len__(self):
        return len(self.values)

    @property
    def stop(self) -> int:
        return self.start + len(self.values)

    def __getitem__(self, n: int):
        j = n - self.start
        if j < 0 or j >= len(self.values):
            raise KeyError("index %d outside window [%d, %d)" % (n, self.start, self.stop))
        return self.values[j]

    @property
    def exact(self) -> bool:
        return all(isinstance(v, (int, Fraction)) for v in self.values)


@dataclass
class GridFunction2D:
    """Samples ``values[i][j]`` at ``(start1 + i, start2 + j)``."""

    start1: int
    start2: int
    values: list

    def __call__(self, n1: int, n2: int):
        i, j = n1 - self.start1, n2 - self.start2
        if i < 0 or j < 0 or i >= len(self.values) or j >= len(self.values[i]):
            raise KeyError("sample (%d, %d) missing" % (n1, n2))
        return self.values[i][j]


def forward_difference(f: GridFunction1D, k: int) -> GridFunction1D:
    """Delta^k f_n = sum_i (-1)^(k-i) C(k, i) f_{n+i} on the valid sub-window."""
    if k < 0:
        raise ValueError("difference order must be nonnegative")
    if len(f) < k + 1:
        raise ValueError("window of %d samples too short for Delta^%d" % (len(f), k))
    weights = [(-1) ** (k - i) * math.comb(k, i) for i in range(k + 1)]
    vals = f.values
    out = [sum(wt * vals[j + i] for i, wt in enumerate(weights)) for j in range(len(vals) - k)]
    return GridFunction1D(f.start, out)


def slow_order(f: GridFunction1D, tolerance: float = 1e-10) -> int:
    """Smallest p with Delta^{p+1} f = 0 on the window.

    Exact data (ints/Fractions) uses an exact zero test; float data passes
    when ``max|Delta^{p+1} f| <= tolerance * max|f|``.
    """
    exact = f.exact
    scale = max((abs(v) for v in f.values), default=0)
    diff = f
    for p in range(0, len(f) - 1):
        diff = forward_difference(diff, 1)
        peak = max(abs(v) for v in diff.values)
        if (peak == 0) if exact else (peak <= tolerance * scale):
            return p
    raise WindowExhaustedError("order exceeds window (%d samples)" % len(f))


# ---------------------------------------------------------------------------
# one slow scale


def shift_one_scale(g: GridFunction1D, n1: int, N: int, p: int = 2,
                    mode: str = "symmetric", sign: int = 1):
    """Value of ``f_{n+sign}`` from coarse samples of ``g`` around ``n1 = n/N``.

    ``p`` is the slow-varying order (1 or 2).  ``mode="forward"`` uses the
    one-sided stencil ``g_{n1}, g_{n1+h}, g_{n1+2h}``; ``"symmetric"`` (p = 2
    only) the centred three-point stencil.  ``sign=-1`` applies the same
    formulas with a negative increment.
    """
    if N < 2:
        raise ValueError("N must be >= 2")
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    h = sign
    a = Fraction(1, N)
    g0 = g[n1]
    if p == 1:
        if mode != "forward":
            raise ValueError("odd slow order admits no symmetric stencil")
        return g0 + a * (g[n1 + h] - g0)
    if p != 2:
        raise ValueError("unsupported slow order p=%r (only 1 and 2)" % p)
    if mode == "forward":
        g1, g2 = g[n1 + h], g[n1 + 2 * h]
        return g0 + a / 2 * (-g2 + 4 * g1 - 3 * g0) + a * a / 2 * (g2 - 2 * g1 + g0)
    if mode == "symmetric":
        gp, gm = g[n1 + 1], g[n1 - 1]
        return g0 + h * a / 2 * (gp - gm) + a * a / 2 * (gp - 2 * g0 + gm)
    raise ValueError("mode must be 'forward' or 'symmetric'")


# ---------------------------------------------------------------------------
# two slow scales

Offset = Tuple[int, int]

# order of the 8 coarse (and fine) neighbour shifts used by the oracle
OFFSETS: Tuple[Offset, ...] = ((1, 0), (-1, 0), (0, 1), (0, -1),
                               (1, 1), (1, -1), (-1, 1), (-1, -1))


def p27b_coefficients(N: int, M1: int = 1, M2: int = 1, sign: int = 1) -> Dict[Offset, Fraction]:
    """Stencil weights on ``g_{n1+i, n2+j}`` giving ``f_{n+sign}`` to O(N^-4)."""
    h = sign
    a1 = Fraction(M1, 2 * N)
    a2 = Fraction(M2, 2 * N * N)
    c11 = Fraction(M1 * M1, 2 * N * N)
    mix = Fraction(M1 * M2, 4 * N ** 3)
    return {
        (0, 0): 1 - 2 * c11,
        (1, 0): h * a1 + c11,
        (-1, 0): -h * a1 + c11,
        (0, 1): h * a2,
        (0, -1): -h * a2,
        (1, 1): mix,
        (-1, 1): -mix,
        (1, -1): -mix,
        (-1, -1): mix,
    }


def h16_coefficients(N: int, M1: int = 1, M2: int = 1, sign: int = 1) -> Dict[Offset, Fraction]:
    """Weights for data of order 2 in ``n1`` and order 1 in ``n2`` (error O(N^-3))."""
    h = sign
    a1 = Fraction(M1, 2 * N)
    b2 = Fraction(M2, N * N)
    c11 = Fraction(M1 * M1, 2 * N * N)
    return {
        (0, 0): 1 - 2 * c11 - b2,
        (1, 0): h * a1 + c11,
        (-1, 0): -h * a1 + c11,
        (0, h): b2,
    }


def _sampler(g):
    if isinstance(g, GridFunction2D) or callable(g):
        return g
    raise TypeError("g must be callable (n1, n2) -> value or a GridFunction2D")


def shift_two_scale(g, n1: int, n2: int, N: int, M1: int = 1, M2: int = 1,
                    n2_order: int = 2, sign: int = 1,
                    require_integer_lattice: bool = False):
    """``f_{n+sign}`` for ``f_n = g_{n1, n2}`` with ``n1 = M1 n/N``, ``n2 = M2 n/N^2``.

    ``g`` is sampled on the nine points ``(n1+i, n2+j)``, ``i, j in {-1,0,1}``.
    ``n2_order=2`` uses the symmetric two-scale stencil (remainder O(N^-4));
    ``n2_order=1`` the variant for data linear in ``n2`` (remainder O(N^-3)).
    """
    if N < 2:
        raise ValueError("N must be >= 2")
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    if require_integer_lattice and (M1 == 0 or M2 == 0 or N % M1 or (N * N) % M2):
        raise ValueError("M1=%d must divide N=%d and M2=%d must divide N^2" % (M1, N, M2))
    if n2_order == 2:
        weights = p27b_coefficients(N, M1, M2, sign)
    elif n2_order == 1:
        weights = h16_coefficients(N, M1, M2, sign)
    else:
        raise ValueError("n2_order must be 1 or 2")
    sample = _sampler(g)
    total = 0
    for (i, j), w in weights.items():
        if w:
            total = total + w * sample(n1 + i, n2 + j)
    return total


# -- the 8x8 system behind the two-scale stencil ------------------------------

_Op = Dict[int, Fraction]


def _tensor(op1: _Op, op2: _Op) -> Dict[Offset, Fraction]:
    return {(i, j): a * b for i, a in op1.items() for j, b in op2.items()}


def _axis_expansion(shift: int, scale: int) -> List[Tuple[Fraction, _Op]]:
    """Terms of E^(shift*scale) truncated at second differences.

    Second differences are centred (they are constant for order-2 data), so
    a negative increment only changes the first-difference stencil.
    """
    if shift == 0:
        return [(Fraction(1), {0: Fraction(1)})]
    first = {shift: Fraction(1), 0: Fraction(-1)}
    second = {1: Fraction(1), 0: Fraction(-2), -1: Fraction(1)}
    return [(Fraction(1), {0: Fraction(1)}),
            (Fraction(scale), first),
            (Fraction(scale * (scale - 1), 2), second)]


def _solve_exact(A: List[List[Fraction]]) -> List[List[Fraction]]:
    """Inverse of a square Fraction matrix by Gauss-Jordan elimination."""
    n = len(A)
    aug = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(A)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            raise ArithmeticError("singular two-scale system")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [v * inv for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                fac = aug[r][col]
                aug[r] = [v - fac * w for v, w in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


@dataclass
class TwoScaleSystem:
    """``g_{ab} - g_00 = sum_ij forward[ab][ij] (f_ij - f_00)`` and its inverse.

    Rows and columns follow :data:`OFFSETS`; ``f_ij`` is the two-index fine
    function shifted by ``(i, j)`` and ``g_ab`` the coarse one.
    """

    N: int
    forward: List[List[Fraction]]
    inverse: List[List[Fraction]]

    def fine_from_coarse(self, target: Offset) -> Dict[Offset, Fraction]:
        """Exact weights on ``g`` samples (including ``(0, 0)``) giving ``f_target``."""
        row = self.inverse[OFFSETS.index(target)]
        weights = {off: w for off, w in zip(OFFSETS, row)}
        weights[(0, 0)] = 1 - sum(row)
        return weights


def two_scale_system_oracle(N: int) -> TwoScaleSystem:
    """Build the 8 relations between coarse and fine shifts and invert them exactly."""
    if N < 2:
        raise ValueError("N must be >= 2")
    forward = []
    for a, b in OFFSETS:
        ops: Dict[Offset, Fraction] = {}
        for c1, op1 in _axis_expansion(a, N):
            for c2, op2 in _axis_expansion(b, N * N):
                for off, w in _tensor(op1, op2).items():
                    ops[off] = ops.get(off, Fraction(0)) + c1 * c2 * w
        forward.append([ops.get(off, Fraction(0)) for off in OFFSETS])
    return TwoScaleSystem(N, forward, _solve_exact(forward))


def inverse_expansion(target: Offset = (1, 1), order: int = 3,
                      samples: Sequence[int] = range(2, 11)) -> Dict[Offset, List[Fraction]]:
    """Coefficients of the exact inverse weights as a polynomial in ``1/N``.

    The weights are polynomials in ``u = 1/N`` of degree at most 6; they are
    recovered by exact interpolation over ``samples`` and the interpolant is
    checked on the surplus points.  Returns, per coarse offset, the list of
    coefficients of ``u^0 .. u^order``.
    """
    samples = list(samples)
    degree = 6
    if len(samples) < degree + 2:
        raise ValueError("need at least %d sample values of N" % (degree + 2))
    weights = {N: two_scale_system_oracle(N).fine_from_coarse(target) for N in samples}
    offsets = [(0, 0)] + list(OFFSETS)
    fit_N = samples[:degree + 1]
    us = [Fraction(1, N) for N in fit_N]
    out = {}
    for off in offsets:
        ys = [weights[N][off] for N in fit_N]
        coeffs = _interpolate(us, ys)
        for N in samples[degree + 1:]:
            u = Fraction(1, N)
            if sum(c * u ** j for j, c in enumerate(coeffs)) != weights[N][off]:
                raise ArithmeticError("inverse weights are not polynomial in 1/N")
        out[off] = (coeffs + [Fraction(0)] * (order + 1))[:order + 1]
    return out


def _interpolate(xs: Sequence[Fraction], ys: Sequence[Fraction]) -> List[Fraction]:
    """Monomial coefficients of the interpolating polynomial (exact)."""
    n = len(xs)
    V = [[x ** j for j in range(n)] for x in xs]
    Vinv = _solve_exact(V)
    return [sum(Vinv[j][i] * ys[i] for i in range(n)) for j in range(n)]
