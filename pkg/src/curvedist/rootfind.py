"""Root finding and maximization of |rational function| over real domains.

Complex roots come from an Aberth-Ehrlich simultaneous iteration (see the
kernel backends); everything else is filtering and candidate bookkeeping.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from curvedist import _kernels
from curvedist.errors import NoConvergence, Unbounded
from curvedist.polycore import RatFun, UniPoly, _trim1, abs_eval

REAL_TOL = 1e-7
CLUSTER_TOL = 1e-6
RESIDUAL_TOL = 1e-8
LARGE_T = 1e9


@dataclass
class RootSet:
    roots: list  # one entry per cluster
    mults: list
    residuals: list

    def with_multiplicity(self):
        out = []
        for r, m in zip(self.roots, self.mults):
            out.extend([r] * m)
        return out


@dataclass
class Interval:
    lo: float
    hi: float

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError("interval with lo > hi")

    @property
    def length(self):
        return self.hi - self.lo

    @property
    def mid(self):
        return 0.5 * (self.lo + self.hi)

    def contains(self, t, closed=True):
        if closed:
            return self.lo <= t <= self.hi
        return self.lo < t < self.hi


def all_roots(p: UniPoly, max_sweeps: int = 200) -> RootSet:
    """All complex roots with multiplicity estimates and residuals."""
    c = _trim1(p.c)
    deg = len(c) - 1
    if deg < 1:
        raise ValueError("degree must be >= 1")
    norm = float(np.max(np.abs(c)))
    nz = int(np.nonzero(c)[0][0])
    work = c[nz:] / norm
    raw = [0j] * nz
    if len(work) > 1:
        roots, sweeps = _kernels.aberth(work, max_sweeps=max_sweeps)
        if sweeps >= max_sweeps:
            # stalled simultaneous iteration: companion eigenvalues instead
            roots = np.roots(work[::-1]).astype(np.complex128)
        raw.extend(sorted(roots, key=lambda z: (z.real, z.imag)))

    # residuals against the original polynomial, on its natural local scale
    residual_bound = []
    for r in raw:
        res = abs(_kernels.polyval(c, r))
        bound = RESIDUAL_TOL * abs_eval(c, abs(r))
        if not np.isfinite(bound):
            bound = np.inf  # |r| so large the scaled check is vacuous
        residual_bound.append((res, bound))
    bad = [i for i, (res, b) in enumerate(residual_bound) if res > b]
    if bad:
        raise NoConvergence(
            f"{len(bad)} root(s) failed the residual check",
            residuals=[residual_bound[i][0] for i in bad],
        )

    # cluster for multiplicity estimates
    clusters = []
    for r in raw:
        for cl in clusters:
            if abs(r - cl[0][0]) <= CLUSTER_TOL * (1.0 + abs(cl[0][0])):
                cl[0].append(r)
                break
        else:
            clusters.append([[r]])
    roots, mults, residuals = [], [], []
    for (members,) in clusters:
        rep = complex(np.mean(members))
        roots.append(rep)
        mults.append(len(members))
        residuals.append(abs(_kernels.polyval(c, rep)))
    return RootSet(roots=roots, mults=mults, residuals=residuals)


def real_roots(p: UniPoly, tol: float = REAL_TOL):
    """Sorted real parts of the near-real roots (one entry per cluster)."""
    rs = all_roots(p)
    out = sorted(
        {r.real for r in rs.roots if abs(r.imag) <= tol * (1.0 + abs(r.real))}
    )
    return list(out)


def min_abs_root(p: UniPoly, real_only: bool = False, tol: float = REAL_TOL):
    """Minimum |root|; None when real_only is set and no real root exists."""
    rs = all_roots(p)
    if real_only:
        cands = [abs(r.real) for r in rs.roots if abs(r.imag) <= tol * (1.0 + abs(r.real))]
        if not cands:
            return None
        return min(cands)
    return min(abs(r) for r in rs.roots)


def _limit_value(r: RatFun, sign: int, value_fn=None):
    if value_fn is not None:
        v = value_fn(sign * LARGE_T)
        return abs(v) if v is not None and np.isfinite(v) else None
    plus, minus = r.limit_at_infinity()
    v = plus if sign > 0 else minus
    if v is None:
        raise Unbounded("limit at infinity is infinite")
    return abs(v)


def max_abs_ratfun(r: RatFun, domain, root_order: int = 1, value_fn=None,
                   extra_candidates=()):
    """Maximize |r(t)|^(1/root_order) over a union of closed intervals.

    ``domain`` is a list of (lo, hi) pairs; ``lo``/``hi`` may be +-inf.
    Candidates: real roots of the derivative numerator, finite endpoints,
    limits at infinity for unbounded pieces, plus ``extra_candidates``.
    ``value_fn``, when given, overrides pointwise evaluation of r (used for
    conditioning; candidates still come from r's coefficient structure).
    Returns (value, argmax); argmax is +-inf when a limit wins.
    """
    intervals = [(float(lo), float(hi)) for lo, hi in domain]
    if not intervals:
        return 0.0, None

    def in_domain(t):
        return any(lo <= t <= hi for lo, hi in intervals)

    def evaluate(t):
        if value_fn is not None:
            v = value_fn(t)
            return None if v is None or not np.isfinite(v) else abs(v)
        return abs(r(t))

    # poles strictly inside the closed domain make the sup infinite
    if value_fn is None and not r.den.is_zero() and r.den.degree >= 1:
        nscale = max(r.num.inf_norm(), 1e-300)
        for pole in real_roots(r.den):
            if in_domain(pole):
                if abs(r.num(pole)) > RESIDUAL_TOL * nscale * max(1.0, abs(pole)) ** max(r.num.degree, 1):
                    raise Unbounded(f"pole at t={pole} inside the domain")

    candidates = []
    dn = r.deriv_num()
    if dn.degree >= 1:
        candidates.extend(real_roots(dn))
    for lo, hi in intervals:
        if np.isfinite(lo):
            candidates.append(lo)
        if np.isfinite(hi):
            candidates.append(hi)
    candidates.extend(extra_candidates)

    best_val, best_arg = -1.0, None
    for t in candidates:
        if not np.isfinite(t) or not in_domain(t):
            continue
        v = evaluate(t)
        if v is not None and v > best_val:
            best_val, best_arg = v, t
    for lo, hi in intervals:
        for sign, end in ((-1, lo), (1, hi)):
            if not np.isfinite(end) and sign * end > 0:
                v = _limit_value(r, sign, value_fn)
                if v is not None and v > best_val:
                    best_val, best_arg = v, sign * np.inf
    if best_arg is None:
        return 0.0, None
    return best_val ** (1.0 / root_order), best_arg


def isolating_interval(target: float, others, k: int | None = None, poles=()):
    """Interval around ``target``.

    With ``k`` given: length 10^-(k+5), centered (sequence mode).  Otherwise:
    the widest symmetric interval separating ``target`` from ``others`` and
    ``poles``, capped at half the distance to the nearest excluded point.
    """
    if k is not None:
        w = 0.5 * 10.0 ** (-(k + 5))
        return Interval(target - w, target + w)
    excluded = [e for e in list(others) + list(poles) if e != target]
    if not excluded:
        w = 0.5
    else:
        w = 0.5 * min(abs(target - e) for e in excluded)
    return Interval(target - w, target + w)
