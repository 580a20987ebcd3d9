"""Dispersion of the lattice sine-Gordon map and a small-amplitude sweep.

A plane wave of amplitude 1e-8 on the constant background is evolved by the
nonlinear quad-graph map and compared with the linear prediction.
"""
import math

import numpy as np

from lattice_nls.lattice_sg import SGParams, dispersion, group_velocity, plane_wave, sg_evolve


def main():
    params = SGParams(math.sqrt(2), 1.0)
    for k in (0.5, 1.0, math.pi / 2, 2.5):
        d = dispersion(k, params.sigma)
        print("k=%.3f  omega=%+.6f  |Omega|=%.15f  v_g=%+.6f" % (
            k, d.omega, abs(d.Omega), float(group_velocity(k, params.sigma))))

    n, m = np.arange(0, 60), np.arange(0, 30)
    exact = params.background + plane_wave(n[:, None], m[None, :], 1.0, params.sigma, 1e-8)
    field = sg_evolve(exact[:, 0], exact[-1, :], params)
    dev = np.max(np.abs(field.values - exact)) / 1e-8
    print("relative deviation of the nonlinear sweep from the linear wave: %.2e" % dev)


if __name__ == "__main__":
    main()
