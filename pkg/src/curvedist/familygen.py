"""Deterministic reconstruction of the quartic test family.

A six-parameter linear system of degree-4 curves with prescribed double
points at (2,0), (0,0) and (1,1) is specialized on a 10 x 6 grid and
perturbed with small random terms; each member is screened for the input
hypotheses and for eps-rationality.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from curvedist.errors import CurveDistError
from curvedist.polycore import BiPoly
from curvedist.epsgeo import (check_hypotheses, cluster_decompose,
                              find_eps_singularities, is_eps_rational)

_MASK64 = (1 << 64) - 1


class SplitMix64:
    """SplitMix64 PRNG (Steele-Lea-Flood constants)."""

    def __init__(self, seed: int):
        self.state = seed & _MASK64

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def next_in_0_100(self) -> int:
        # multiply-shift on the high 32 bits: uniform over {0, ..., 100}
        return ((self.next_u64() >> 32) * 101) >> 32


@dataclass
class FamilySpec:
    seed: int
    epsilon: float = 1e-2
    count_i: int = 10
    count_j: int = 6

    def __post_init__(self):
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")


@dataclass
class FamilyMember:
    i: int
    j: int
    r_ij: int
    r1: int
    r2: int
    r3: int
    G_ij: BiPoly
    g_ij: BiPoly
    status: str  # rational | not_rational | hypothesis_failed:<reason>


def base_system():
    """Terms of the base polynomial: list of (ix, iy, u_coeffs) where
    ``u_coeffs[k]`` multiplies u_{k+1} and the z-exponent is 4 - ix - iy."""
    def u(**kw):
        v = np.zeros(6)
        for key, val in kw.items():
            v[int(key[1]) - 1] = val
        return v

    return [
        (0, 2, u(u2=1)),
        (0, 3, u(u3=1)),
        (0, 4, u(u4=1)),
        (1, 1, u(u5=1)),
        (1, 2, u(u2=-2, u3=-3, u4=-4, u5=-0.5, u6=-2)),
        (1, 3, u(u6=1)),
        (2, 0, u(u1=1)),
        (2, 1, u(u5=-1.5, u3=2, u4=4, u6=2, u1=-1)),
        (2, 2, u(u2=1, u3=1, u5=0.5, u1=0.25, u4=1)),
        (3, 0, u(u1=-1)),
        (3, 1, u(u5=0.5, u3=-1, u4=-2, u6=-1, u1=0.5)),
        (4, 0, u(u1=0.25)),
    ]


def specialize(i: int, j: int, r_ij: int) -> BiPoly:
    """G_ij(x, y, 1): set u_j = (r_ij/100)^i and every other u_k = 1."""
    if not (1 <= j <= 6 and 1 <= i <= 10 and 0 <= r_ij <= 100):
        raise ValueError("indices or draw out of range")
    u = np.ones(6)
    u[j - 1] = (r_ij / 100.0) ** i
    return BiPoly.from_terms((ix, iy, float(uc @ u)) for ix, iy, uc in base_system())


def perturb(G_ij: BiPoly, r1: int, r2: int, r3: int, epsilon: float) -> BiPoly:
    p = BiPoly.from_terms(
        [(1, 0, epsilon * r1 / 100.0), (0, 1, epsilon * r1 / 100.0)]
        + [(a, 2 - a, epsilon ** 2 * r2 / 100.0) for a in range(3)]
        + [(a, 3 - a, epsilon ** 3 * r3 / 100.0) for a in range(4)]
    )
    return G_ij + p


def screen(g: BiPoly, epsilon: float) -> str:
    """Hypothesis check plus the genus-zero test on the cluster multiplicities."""
    hyp = check_hypotheses(g, epsilon)
    if not hyp.all_hold():
        return f"hypothesis_failed:{hyp.failure_reason()}"
    try:
        clusters = cluster_decompose(find_eps_singularities(g, epsilon))
    except CurveDistError as exc:
        return f"hypothesis_failed:{type(exc).__name__}"
    if is_eps_rational(g.total_degree, clusters):
        return "rational"
    return "not_rational"


def generate_family(spec: FamilySpec):
    rng = SplitMix64(spec.seed)
    members = []
    for i in range(1, spec.count_i + 1):
        for j in range(1, spec.count_j + 1):
            r_ij = rng.next_in_0_100()
            r1 = rng.next_in_0_100()
            r2 = rng.next_in_0_100()
            r3 = rng.next_in_0_100()
            G_ij = specialize(i, j, r_ij)
            g_ij = perturb(G_ij, r1, r2, r3, spec.epsilon)
            status = screen(g_ij, spec.epsilon)
            members.append(FamilyMember(i=i, j=j, r_ij=r_ij, r1=r1, r2=r2,
                                        r3=r3, G_ij=G_ij, g_ij=g_ij,
                                        status=status))
    return members
