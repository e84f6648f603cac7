"""Command-line driver: family generation, parametrization, and analysis.

Exit status taxonomy (stable contract for scripting):
    0  success
    2  input curve is not (affine) eps-rational
    3  degenerate case in the parametrization algorithm
    4  hypothesis failure on the input curve
    5  numeric failure anywhere downstream
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass

import numpy as np

from curvedist import fileio, hausdorff
from curvedist.errors import (CurveDistError, Degenerate,
                              DegenerateParametrization, NotEpsRational,
                              QuotientDegreeUnexpected)
from curvedist.familygen import FamilyMember, FamilySpec, generate_family, screen
from curvedist.paramalg import approx_parametrize, implicitize

ENV_PREFIX = "CURVEDIST_"

EXIT_OK = 0
EXIT_NOT_RATIONAL = 2
EXIT_DEGENERATE = 3
EXIT_HYPOTHESIS = 4
EXIT_NUMERIC = 5


@dataclass
class RunConfig:
    epsilon: float = 0.01
    seed: int = 0
    stop_eps: float = 1e-3
    tau_cap: int = 200
    sample_count: int = 1000
    output_dir: str = "."

    def __post_init__(self):
        if min(self.epsilon, self.stop_eps) <= 0 or \
                min(self.tau_cap, self.sample_count) <= 0 or self.seed < 0:
            raise ValueError("config values must be positive")


def _env_default(name, cast, fallback):
    raw = os.environ.get(ENV_PREFIX + name)
    return cast(raw) if raw is not None else fallback


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--epsilon", type=float,
                   default=_env_default("EPSILON", float, 0.01))
    p.add_argument("--out", default=_env_default("OUT", str, "."))
    p.add_argument("--samples", type=int,
                   default=_env_default("SAMPLES", int, 1000))


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="curvedist", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen-family", help="generate the 60-member curve family")
    g.add_argument("--seed", type=int, default=_env_default("SEED", int, 0))
    g.add_argument("--zero-perturbation", action="store_true")
    _add_common(g)

    p = sub.add_parser("parametrize", help="parametrize one CURVE v1 file")
    p.add_argument("curve")
    _add_common(p)

    a = sub.add_parser("analyze", help="distance analysis for a curve/param pair")
    a.add_argument("curve")
    a.add_argument("param")
    a.add_argument("--index", type=int, default=0,
                   help="row label for the CSV outputs")
    a.add_argument("--stop-eps", type=float,
                   default=_env_default("STOP_EPS", float, 1e-3))
    a.add_argument("--tau-cap", type=int,
                   default=_env_default("TAU_CAP", int, 200))
    a.add_argument("--h0", default=_env_default("H0", str, "1,-1,0.8,0.05"),
                   help="comma-separated fallback directions")
    _add_common(a)
    return ap


def cmd_gen_family(args) -> int:
    spec = FamilySpec(seed=args.seed, epsilon=args.epsilon)
    members = generate_family(spec)
    if args.zero_perturbation:
        members = [
            FamilyMember(i=m.i, j=m.j, r_ij=m.r_ij, r1=0, r2=0, r3=0,
                         G_ij=m.G_ij, g_ij=m.G_ij,
                         status=screen(m.G_ij, spec.epsilon))
            for m in members
        ]
    os.makedirs(args.out, exist_ok=True)
    fileio.save_manifest(os.path.join(args.out, "manifest.txt"), members)
    for m in members:
        fileio.save_curve(os.path.join(args.out, f"curve_{m.i}_{m.j}.txt"),
                          m.g_ij)
    count = sum(1 for m in members if m.status == "rational")
    print(f"eps-rational members: {count} of {len(members)}")
    return EXIT_OK


def _sample_residual(f, P, count):
    # Near a pole of the parametrization the traced point escapes to
    # infinity and |f| grows like the fourth power of its magnitude, so a
    # fixed margin keeps the sample set where the residual is informative.
    worst = 0.0
    ts = np.linspace(-10.0, 10.0, count)
    scale = f.inf_norm()
    for t in ts:
        if any(abs(t - b) < 0.05 for b in P.poles):
            continue
        x, y = P.eval(t)
        worst = max(worst, abs(f(x, y)) / scale)
    return worst


def cmd_parametrize(args) -> int:
    f = fileio.load_curve(args.curve)
    P = approx_parametrize(f, args.epsilon)
    fbar = implicitize(P)
    os.makedirs(args.out, exist_ok=True)
    stem = os.path.splitext(os.path.basename(args.curve))[0]
    fileio.save_param(os.path.join(args.out, f"{stem}.param.txt"), P)
    fileio.save_curve(os.path.join(args.out, f"{stem}.implicit.txt"), fbar)
    print(f"residual: {_sample_residual(f, P, args.samples):.3e}")
    return EXIT_OK


def _csv(path, header, rows):
    lines = [header] + [",".join(str(v) for v in row) for row in rows]
    fileio._atomic_write(path, "\n".join(lines) + "\n")


def _jsonable(x):
    if isinstance(x, (np.floating, np.integer)):
        x = x.item()
    if isinstance(x, float) and not np.isfinite(x):
        return str(x)
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, hausdorff.Line):
        return {"a": x.a, "b": x.b, "c": x.c}
    return x


def cmd_analyze(args) -> int:
    f = fileio.load_curve(args.curve)
    P = fileio.load_param(args.param)
    h0_list = tuple(float(v) for v in args.h0.split(","))
    fbar = implicitize(P)
    pencil = hausdorff.normal_pencil(f, P)
    bound = hausdorff.bound_B(pencil)
    dir_bound = hausdorff.bound_B(hausdorff.directional_pencil(f, P, h0_list[0]))
    lattice = hausdorff.lattice_scan(f, fbar, P, stop_eps=args.stop_eps,
                                     tau_cap=args.tau_cap)
    evidence = hausdorff.critical_evidence(pencil, P, bound=bound,
                                           fallback_h=h0_list)

    os.makedirs(args.out, exist_ok=True)
    i = args.index
    _csv(os.path.join(args.out, "bounds.csv"), "i,B1,B2,B",
         [(i, repr(float(bound.B1b)), repr(float(bound.B2b)),
           repr(float(bound.B)))])
    t1, t2, t3, t4 = lattice.box if lattice.box else ("", "", "", "")
    _csv(os.path.join(args.out, "lattice.csv"),
         "i,tau1,tau2,tau3,tau4,m,eta",
         [(i, t1, t2, t3, t4, repr(lattice.m),
           "" if lattice.eta is None else repr(lattice.eta))])
    _csv(os.path.join(args.out, "evidence.csv"),
         "i,chi,chi1,chi2,mu,nu,gamma1,gamma2,gamma3,gamma2_prime,flags",
         [(i, repr(evidence.chi), repr(evidence.chi1), repr(evidence.chi2),
           repr(evidence.mu), repr(evidence.nu),
           "" if evidence.gamma1 is None else repr(evidence.gamma1),
           "" if evidence.gamma2 is None else repr(evidence.gamma2),
           "" if evidence.gamma3 is None else repr(evidence.gamma3),
           "" if evidence.gamma2_prime is None else repr(evidence.gamma2_prime),
           ";".join(evidence.flags))])

    report = {
        "bound": {
            "B1": bound.B1b, "B2": bound.B2b, "B": bound.B,
            "B_h0": dir_bound.B, "h0": h0_list[0],
            "alpha": list(bound.alpha),
            "I1": [bound.I1.lo, bound.I1.hi] if bound.I1 else None,
            "I2": [bound.I2.lo, bound.I2.hi] if bound.I2 else None,
            "argmaxes": bound.argmaxes,
            "gamma_1_candidates": list(bound.gamma_1_candidates),
            "gamma_2_candidates": list(bound.gamma_2_candidates),
        },
        "lattice": {
            "box": list(lattice.box) if lattice.box else None,
            "m": lattice.m, "eta": lattice.eta,
            "stop_eps": lattice.stop_eps, "truncated": lattice.truncated,
            "compact": lattice.compact,
            "per_line": [list(row) for row in lattice.per_line],
        },
        "evidence": {
            "chi": evidence.chi, "chi1": evidence.chi1, "chi2": evidence.chi2,
            "mu": evidence.mu, "nu": evidence.nu,
            "gamma1": evidence.gamma1, "gamma2": evidence.gamma2,
            "gamma3": evidence.gamma3,
            "gamma2_prime": evidence.gamma2_prime,
            "flags": list(evidence.flags),
        },
    }
    fileio._atomic_write(os.path.join(args.out, "report.json"),
                         json.dumps(_jsonable(report), indent=2) + "\n")

    plot_rows = []
    for t in np.linspace(-10.0, 10.0, args.samples):
        if any(abs(t - b) < 1e-6 for b in P.poles):
            continue
        try:
            v = hausdorff.rho1(pencil, t, real_only=True)
        except CurveDistError:
            continue
        if v is not None:
            plot_rows.append((repr(float(t)), repr(float(v))))
    _csv(os.path.join(args.out, "plotdata.csv"), "t,rho1", plot_rows)

    eta_s = "n/a" if lattice.eta is None else f"{lattice.eta:.10g}"
    print(f"B={bound.B:.10g} m={lattice.m:.10g} eta={eta_s}")
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {"gen-family": cmd_gen_family,
                "parametrize": cmd_parametrize,
                "analyze": cmd_analyze}
    try:
        return handlers[args.command](args)
    except NotEpsRational as exc:
        if "hypothesis failed" in str(exc):
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_HYPOTHESIS
        print(f"error: the curve is not (affine) eps-rational: {exc}",
              file=sys.stderr)
        return EXIT_NOT_RATIONAL
    except (Degenerate, QuotientDegreeUnexpected,
            DegenerateParametrization) as exc:
        print(f"error: degenerate case: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except CurveDistError as exc:
        print(f"error: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
