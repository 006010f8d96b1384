"""Independent reference implementations used by the tests.

Nothing here calls into platelab's numerics: transforms are direct sums,
the STFT is a double loop, and the solver reference is a classical RK4
integrator for the first-order system in Fourier variables.
"""

import numpy as np


def direct_dft(samples, spacing):
    """``h^d sum_j f(x_j) exp(-2 pi i j.k / N)`` by explicit summation."""
    a = np.asarray(samples, dtype=complex)
    n = a.shape[0]
    d = a.ndim
    j = np.arange(n)
    W = np.exp(-2j * np.pi * np.outer(j, j) / n)
    out = a
    for axis in range(d):
        out = np.moveaxis(np.tensordot(W, out, axes=([1], [axis])), 0, axis)
    return spacing**d * out


def direct_stft_1d(f, g_centered, L):
    """Double-loop STFT on a 1-d torus with the window centered at each x_m."""
    n = len(f)
    h = L / n
    out = np.empty((n, n), dtype=complex)
    j = np.arange(n)
    for m in range(n):
        win = np.conj(g_centered[(j - m + n // 2) % n])
        for k in range(n):
            out[m, k] = h * np.sum(f * win * np.exp(-2j * np.pi * j * k / n))
    return out


def gaussian_stft_abs(x_rel, omega):
    """``|V_g g|`` for ``g = exp(-pi x^2)`` in one dimension."""
    return 2**-0.5 * np.exp(-np.pi * (x_rel**2 + omega**2) / 2)


def rk4_plate(u0, u1, L, rhs, T, steps):
    """Integrate ``u_tt + Delta^2 u = rhs(u)`` on a 1-d torus with RK4.

    The state is the pair of DFT coefficients ``(U, V)`` with
    ``U' = V`` and ``V' = -w^2 U + DFT(rhs(u))``, ``w = 4 pi^2 xi^2``.
    """
    n = len(u0)
    xi = np.fft.fftfreq(n, d=L / n)
    w2 = (4 * np.pi**2 * xi**2) ** 2

    def deriv(U, V):
        u = np.fft.ifft(U)
        return V, -w2 * U + np.fft.fft(rhs(u))

    U = np.fft.fft(np.asarray(u0, complex))
    V = np.fft.fft(np.asarray(u1, complex))
    dt = T / steps
    for _ in range(steps):
        k1u, k1v = deriv(U, V)
        k2u, k2v = deriv(U + dt / 2 * k1u, V + dt / 2 * k1v)
        k3u, k3v = deriv(U + dt / 2 * k2u, V + dt / 2 * k2v)
        k4u, k4v = deriv(U + dt * k3u, V + dt * k3v)
        U = U + dt / 6 * (k1u + 2 * k2u + 2 * k3u + k4u)
        V = V + dt / 6 * (k1v + 2 * k2v + 2 * k3v + k4v)
    return np.fft.ifft(U)
