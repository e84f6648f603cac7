"""Compiled and pure kernel backends agree."""

import os
import subprocess
import sys

import numpy as np
import pytest

from curvedist import _fastkernels, _purekernels
from curvedist.polycore import BiPoly


@pytest.fixture(scope="module")
def cases(rng):
    out = []
    for _ in range(20):
        deg = int(rng.integers(2, 12))
        c = rng.standard_normal(deg + 1) + 1j * rng.standard_normal(deg + 1)
        out.append(c.astype(np.complex128))
    return out


def test_polyval_agreement(cases, rng):
    for c in cases:
        for _ in range(5):
            z = complex(rng.standard_normal(), rng.standard_normal())
            a = _fastkernels.polyval(c, z)
            b = _purekernels.polyval(c, z)
            assert abs(a - b) <= 1e-12 * (1.0 + abs(b))


def test_aberth_agreement(cases):
    for c in cases:
        ra, sa = _fastkernels.aberth(c)
        rb, sb = _purekernels.aberth(c)
        ra = sorted(np.asarray(ra), key=lambda z: (z.real, z.imag))
        rb = sorted(np.asarray(rb), key=lambda z: (z.real, z.imag))
        for x, y in zip(ra, rb):
            assert abs(x - y) <= 1e-8 * (1.0 + abs(y))


def test_line_coeffs_agreement(rng):
    for _ in range(10):
        grid = rng.standard_normal((5, 5))
        for i in range(5):
            for j in range(5):
                if i + j > 4:
                    grid[i, j] = 0.0
        f = BiPoly(grid.astype(np.complex128), trim=False)
        stack = f._partial_stack()
        args = (f.c.shape[0], f.c.shape[1],
                complex(rng.standard_normal()), complex(rng.standard_normal()),
                complex(rng.standard_normal()), complex(rng.standard_normal()),
                f.total_degree)
        a = _fastkernels.line_coeffs(stack, *args)
        b = _purekernels.line_coeffs(stack, *args)
        assert np.allclose(a, b, rtol=1e-12, atol=1e-12)


def test_eval2_agreement(rng):
    grid = rng.standard_normal((4, 4)).astype(np.complex128)
    for _ in range(10):
        x, y = rng.standard_normal(2)
        a = _fastkernels.eval2(grid, complex(x), complex(y))
        b = _purekernels.eval2(grid, complex(x), complex(y))
        assert abs(a - b) <= 1e-12 * (1.0 + abs(b))


def test_force_pure_env_selects_fallback():
    code = ("import curvedist._kernels as k; print(k.BACKEND)")
    env = dict(os.environ, CURVEDIST_FORCE_PURE="1")
    out = subprocess.run([sys.executable, "-c", code], env=env,
                         capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "pure"
    env.pop("CURVEDIST_FORCE_PURE")
    out = subprocess.run([sys.executable, "-c", code], env=env,
                         capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "compiled"
