"""Independent reference solvers used only by the tests."""
import numpy as np


def continuum_nls(phi0, coeffs, T, dt=1e-3):
    """Split-step Fourier solution of i phi_t + C phi_xx + c3 |phi|^2 phi = 0 on the n2 window.

    This is the continuous-time, continuous-space limit of the envelope
    update; the lattice envelope converges to it as N grows.
    """
    phi = np.asarray(phi0.values, dtype=complex)
    kk = 2 * np.pi * np.fft.fftfreq(phi.size)
    steps = int(round(T / dt))
    lin = np.exp(-1j * coeffs.combined * kk ** 2 * dt)
    half = lambda v: v * np.exp(0.5j * coeffs.c3_hat * np.abs(v) ** 2 * dt)
    for _ in range(steps):
        phi = half(np.fft.ifft(lin * np.fft.fft(half(phi))))
    return phi
