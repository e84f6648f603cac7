"""Numpy fallback for the hot numeric kernels.

Same algorithms as ``_fastkernels.pyx``: Aberth-Ehrlich simultaneous root
iteration, bivariate Horner evaluation and Taylor line restriction.  Selected
at import time by :mod:`curvedist._kernels` when the compiled extension is
unavailable.
"""

import math

import numpy as np

_FACT = np.array([float(math.factorial(k)) for k in range(34)])


def polyval(c, z):
    """Horner evaluation of ascending coefficients ``c`` at (array) ``z``."""
    acc = np.zeros_like(np.asarray(z, dtype=np.complex128))
    for ck in c[::-1]:
        acc = acc * z + ck
    return acc


def aberth(c, max_sweeps=200, step_tol=1e-13):
    """All roots of the polynomial with ascending coefficients ``c``.

    Assumes ``c[-1] != 0`` and ``len(c) >= 2``.  Returns the root array and
    the number of sweeps used (``max_sweeps`` when the iteration did not meet
    the step criterion; the caller decides via residuals whether that is
    acceptable).
    """
    c = np.asarray(c, dtype=np.complex128)
    n = len(c) - 1
    if n == 1:
        return np.array([-c[0] / c[1]]), 0
    dc = c[1:] * np.arange(1, n + 1)

    radius = 1.0 + np.max(np.abs(c[:-1] / c[-1]))
    k = np.arange(n)
    # perturbed circle: irrational angular offset plus a mild radial spiral
    angles = 2.0 * np.pi * (k / n) + 0.3761403
    z = 0.5 * radius * (0.85 + 0.3 * (k + 1) / n) * np.exp(1j * angles)

    sweeps = max_sweeps
    for it in range(max_sweeps):
        pz = polyval(c, z)
        dpz = polyval(dc, z)
        small = np.abs(dpz) < 1e-300
        if np.any(small):
            z = np.where(small, z * (1.0 + 1e-6) + 1e-6, z)
            continue
        w = pz / dpz
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, 1.0)
        inv = 1.0 / diff
        np.fill_diagonal(inv, 0.0)
        s = inv.sum(axis=1)
        denom = 1.0 - w * s
        bad = np.abs(denom) < 1e-300
        denom = np.where(bad, 1.0, denom)
        corr = np.where(bad, w, w / denom)
        z = z - corr
        if not np.all(np.isfinite(z)):
            z = np.where(np.isfinite(z), z, 0.5 * radius * np.exp(1j * (angles + it)))
            continue
        if np.max(np.abs(corr) / (1.0 + np.abs(z))) <= step_tol:
            sweeps = it + 1
            break
    return z, sweeps


def eval2(grid, x, y):
    """Evaluate the bivariate grid ``grid[i, j] x^i y^j`` at a point."""
    acc = 0.0 + 0.0j
    for row in grid[::-1]:
        inner = 0.0 + 0.0j
        for cij in row[::-1]:
            inner = inner * y + cij
        acc = acc * x + inner
    return acc


def line_coeffs(pstack, nx, ny, bx, by, dx, dy, d):
    """Taylor coefficients of ``f(base + s*dir)`` in ``s``.

    ``pstack[v1, v2]`` holds the coefficient grid of the (v1, v2) partial
    derivative of ``f`` (padded to a common shape); ``d`` is the total degree.
    """
    out = np.zeros(d + 1, dtype=np.complex128)
    dxp = np.ones(d + 1, dtype=np.complex128)
    dyp = np.ones(d + 1, dtype=np.complex128)
    for k in range(1, d + 1):
        dxp[k] = dxp[k - 1] * dx
        dyp[k] = dyp[k - 1] * dy
    for i in range(d + 1):
        acc = 0.0 + 0.0j
        for v1 in range(i + 1):
            v2 = i - v1
            val = eval2(pstack[v1, v2], bx, by)
            acc += val * dxp[v1] * dyp[v2] / (_FACT[v1] * _FACT[v2])
        out[i] = acc
    return out
