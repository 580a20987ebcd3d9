"""Exact coarse-to-fine shift formulas on a small polynomial example.

A function sampled on the fine lattice ``n = N n1`` is known only at the
coarse points.  The Stirling-number coefficients rebuild its value one fine
step away from the coarse samples, exactly in rational arithmetic.
"""
from fractions import Fraction

from lattice_nls.multiscale import (GridFunction1D, coeff_P, difference_transform,
                                    forward_difference, shift_one_scale, shift_two_scale)


def main():
    print("P(i, k, omega=4) table")
    for i in range(4):
        print("  i=%d:" % i, [str(coeff_P(i, k, 4)) for k in range(i + 1)])

    f = lambda n: Fraction(3, 2) * n * n - 5 * n + 7
    N = 6
    coarse = GridFunction1D.from_function(lambda j: f(N * j), -1, 3)
    for h in (1, -1):
        value = shift_one_scale(coarse, 1, N, p=2, mode="symmetric", sign=h)
        print("f(N*1 %+d): reconstructed %s, exact %s" % (h, value, f(N + h)))

    diffs = [forward_difference(coarse, i)[coarse.start] for i in range(3)]
    back = difference_transform(difference_transform(diffs, N), Fraction(1, N))
    print("differences", [str(d) for d in diffs], "round trip", [str(d) for d in back])

    g = lambda a, b: a * a - 3 * b + 2 * b * b
    for N in (8, 16, 32):
        approx = shift_two_scale(g, 2, 3, N, n2_order=2)
        exact = g(Fraction(2) + Fraction(1, N), Fraction(3) + Fraction(1, N * N))
        print("two-scale shift, N=%2d: residual %s" % (N, approx - exact))


if __name__ == "__main__":
    main()
