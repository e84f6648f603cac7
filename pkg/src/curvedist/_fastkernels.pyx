# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: Aberth-Ehrlich iteration, Horner evaluation, Taylor
line restriction.  Mirrors ``_purekernels`` exactly."""

import numpy as np
cimport numpy as cnp

cnp.import_array()

cdef double _FACT[9]
_FACT[0] = 1.0; _FACT[1] = 1.0; _FACT[2] = 2.0; _FACT[3] = 6.0
_FACT[4] = 24.0; _FACT[5] = 120.0; _FACT[6] = 720.0; _FACT[7] = 5040.0
_FACT[8] = 40320.0


def polyval(c, z):
    c = np.asarray(c, dtype=np.complex128)
    zarr = np.asarray(z, dtype=np.complex128)
    scalar = zarr.ndim == 0
    zflat = np.atleast_1d(zarr)
    out = np.empty_like(zflat)
    cdef double complex[:] cv = c
    cdef double complex[:] zv = zflat
    cdef double complex[:] ov = out
    cdef Py_ssize_t i, k, n = cv.shape[0], m = zv.shape[0]
    cdef double complex acc
    for i in range(m):
        acc = 0
        for k in range(n - 1, -1, -1):
            acc = acc * zv[i] + cv[k]
        ov[i] = acc
    return out[0] if scalar else out


def aberth(c, int max_sweeps=200, double step_tol=1e-13):
    c = np.ascontiguousarray(c, dtype=np.complex128)
    cdef Py_ssize_t n = c.shape[0] - 1
    if n == 1:
        return np.array([-c[0] / c[1]]), 0
    cdef cnp.ndarray dcp = np.ascontiguousarray(c[1:] * np.arange(1, n + 1))

    cdef double radius = 1.0 + np.max(np.abs(c[:n] / c[n]))
    k = np.arange(n)
    angles = 2.0 * np.pi * (k / float(n)) + 0.3761403
    z_init = 0.5 * radius * (0.85 + 0.3 * (k + 1) / float(n)) * np.exp(1j * angles)
    cdef cnp.ndarray zarr = np.ascontiguousarray(z_init, dtype=np.complex128)
    cdef cnp.ndarray corr_arr = np.zeros(n, dtype=np.complex128)

    cdef double complex[:] cv = c
    cdef double complex[:] dcv = dcp
    cdef double complex[:] z = zarr
    cdef double complex[:] corr = corr_arr
    cdef double[:] ang = np.ascontiguousarray(angles)

    cdef Py_ssize_t it, i, j, m
    cdef double complex pz, dpz, w, s, denom, cc
    cdef double maxstep, st, az
    cdef int sweeps = max_sweeps
    cdef bint restart

    for it in range(max_sweeps):
        restart = False
        for i in range(n):
            pz = 0
            for m in range(n, -1, -1):
                pz = pz * z[i] + cv[m]
            dpz = 0
            for m in range(n - 1, -1, -1):
                dpz = dpz * z[i] + dcv[m]
            if abs(dpz) < 1e-300:
                z[i] = z[i] * (1.0 + 1e-6) + 1e-6
                restart = True
                corr[i] = 0
                continue
            w = pz / dpz
            s = 0
            for j in range(n):
                if j != i:
                    s = s + 1.0 / (z[i] - z[j])
            denom = 1.0 - w * s
            if abs(denom) < 1e-300:
                cc = w
            else:
                cc = w / denom
            corr[i] = cc
        if restart:
            continue
        maxstep = 0.0
        for i in range(n):
            z[i] = z[i] - corr[i]
        restart = False
        for i in range(n):
            az = abs(z[i])
            if not (az == az) or az > 1e300:
                restart = True
        if restart:
            for i in range(n):
                az = abs(z[i])
                if not (az == az) or az > 1e300:
                    z[i] = 0.5 * radius * (np.cos(ang[i] + it) + 1j * np.sin(ang[i] + it))
            continue
        for i in range(n):
            st = abs(corr[i]) / (1.0 + abs(z[i]))
            if st > maxstep:
                maxstep = st
        if maxstep <= step_tol:
            sweeps = it + 1
            break
    return zarr, sweeps


cdef double complex _eval2(double complex[:, :] grid, double complex x, double complex y) noexcept:
    cdef Py_ssize_t nx = grid.shape[0], ny = grid.shape[1]
    cdef Py_ssize_t i, j
    cdef double complex acc = 0, inner
    for i in range(nx - 1, -1, -1):
        inner = 0
        for j in range(ny - 1, -1, -1):
            inner = inner * y + grid[i, j]
        acc = acc * x + inner
    return acc


def eval2(grid, x, y):
    g = np.ascontiguousarray(grid, dtype=np.complex128)
    return complex(_eval2(g, x, y))


def line_coeffs(pstack, Py_ssize_t nx, Py_ssize_t ny, bx, by, dx, dy, Py_ssize_t d):
    ps = np.ascontiguousarray(pstack, dtype=np.complex128)
    cdef double complex[:, :, :, :] pv = ps
    out = np.zeros(d + 1, dtype=np.complex128)
    dxp_arr = np.ones(d + 1, dtype=np.complex128)
    dyp_arr = np.ones(d + 1, dtype=np.complex128)
    cdef double complex[:] ov = out
    cdef double complex[:] dxp = dxp_arr
    cdef double complex[:] dyp = dyp_arr
    cdef double complex bxv = bx, byv = by, dxv = dx, dyv = dy
    cdef Py_ssize_t i, v1, v2
    cdef double complex acc, val
    for i in range(1, d + 1):
        dxp[i] = dxp[i - 1] * dxv
        dyp[i] = dyp[i - 1] * dyv
    for i in range(d + 1):
        acc = 0
        for v1 in range(i + 1):
            v2 = i - v1
            val = _eval2(pv[v1, v2], bxv, byv)
            acc = acc + val * dxp[v1] * dyp[v2] / (_FACT[v1] * _FACT[v2])
        ov[i] = acc
    return out
