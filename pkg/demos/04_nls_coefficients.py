"""Envelope equation coefficients for the demonstration carrier.

The cubic coefficient is checked against the amplitude-dependent frequency
of an exact periodic travelling wave of the lattice map.
"""
import math
from fractions import Fraction

from lattice_nls.lattice_sg import SGParams, omega_of_k
from lattice_nls.reduction import (ReductionConfig, cubic_coefficient, nls_coefficients,
                                   select_wavenumber, stokes_frequency_shift)


def main():
    params = SGParams(math.sqrt(2), 1.0)
    k = select_wavenumber(Fraction(-1), params.sigma)
    config = ReductionConfig(params, k, 1, -1)
    c = nls_coefficients(config)
    print("carrier k=%.6f  S=%s" % (k, config.S))
    print("c1=%s  c2=%s  combined=%.15g" % (c.c1_hat, c.c2_hat, c.combined))
    a = 0.05
    shift = stokes_frequency_shift(k, params, a) - omega_of_k(k, params.sigma)
    chi = -shift / (a / 2) ** 2
    print("cubic from travelling wave  %.5f" % chi)
    print("cubic, printed form         %.5f" % cubic_coefficient(k, params, "paper"))
    print("cubic, corrected form       %.5f" % cubic_coefficient(k, params, "corrected"))


if __name__ == "__main__":
    main()
