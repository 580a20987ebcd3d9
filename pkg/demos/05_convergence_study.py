"""Far-field comparison of the lattice map with the envelope equation.

Both cubic forms are run: a weak packet (nearly linear) and the demonstration
packet of amplitude 0.5.
"""
import math
from fractions import Fraction

from lattice_nls.lattice_sg import SGParams
from lattice_nls.reduction import (ReductionConfig, gaussian_profile, select_wavenumber,
                                   validate_reduction)


def main():
    params = SGParams(math.sqrt(2), 1.0)
    k = select_wavenumber(Fraction(-1), params.sigma)
    for amplitude, width in ((0.01, 6.0), (0.5, 4.0)):
        for cubic in ("paper", "corrected"):
            config = ReductionConfig(params, k, 1, -1, cubic=cubic)
            rep = validate_reduction(config, [8, 12, 16], gaussian_profile(amplitude, width), T=2)
            errs = ", ".join("%.4g" % r.error for r in rep.runs)
            print("A=%-5g cubic=%-9s e(N)=[%s] ratio=%.3f monotone=%s" % (
                amplitude, cubic, errs, rep.runs[0].error / rep.runs[-1].error, rep.monotone))


if __name__ == "__main__":
    main()
