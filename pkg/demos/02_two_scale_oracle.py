"""Exact inversion of the eight coarse/fine shift relations.

The inverse weights are polynomials in ``1/N``; their truncation at third
order reproduces the two-scale stencil used by the reduction.
"""
from lattice_nls.multiscale import inverse_expansion, two_scale_system_oracle


def main():
    system = two_scale_system_oracle(8)
    weights = system.fine_from_coarse((1, 1))
    print("N=8, weights giving f(1,1) from coarse samples:")
    for off, w in sorted(weights.items()):
        if w:
            print("  g%s: %s" % (off, w))
    print("expansion in u = 1/N (coefficients of u^0..u^3):")
    for off, coeffs in sorted(inverse_expansion((1, 1)).items()):
        if any(coeffs):
            print("  g%s: %s" % (off, [str(c) for c in coeffs]))


if __name__ == "__main__":
    main()
