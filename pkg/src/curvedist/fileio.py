"""Text file formats: CURVE v1, PARAM v1, and the family manifest.

All writers are atomic (write to a sibling temp file, then rename) and print
floats with Python's shortest-representation repr, so a save/load cycle is
bit-exact.
"""

from __future__ import annotations

import os

import numpy as np

from curvedist.errors import BadFileFormat
from curvedist.familygen import FamilyMember
from curvedist.paramalg import Parametrization
from curvedist.polycore import BiPoly, RatFun, UniPoly
from curvedist.rootfind import real_roots


def _atomic_write(path, text: str):
    tmp = f"{path}.tmp"
    with open(tmp, "w", encoding="utf-8") as fh:
        fh.write(text)
    os.replace(tmp, path)


def _fmt(x: float) -> str:
    return repr(float(x))


# ---------------------------------------------------------------- CURVE v1

def save_curve(path, f: BiPoly):
    lines = [f"CURVE v1 {f.degx} {f.degy}"]
    for i in range(f.degx + 1):
        for j in range(f.degy + 1):
            z = complex(f.c[i, j])
            if z == 0:
                continue
            if z.imag == 0.0:
                lines.append(f"{i} {j} {_fmt(z.real)}")
            else:
                lines.append(f"{i} {j} {_fmt(z.real)} {_fmt(z.imag)}")
    _atomic_write(path, "\n".join(lines) + "\n")


def load_curve(path) -> BiPoly:
    with open(path, encoding="utf-8") as fh:
        raw = [ln.strip() for ln in fh if ln.strip()]
    if not raw or not raw[0].startswith("CURVE v1"):
        raise BadFileFormat(f"{path}: missing CURVE v1 header")
    head = raw[0].split()
    if len(head) != 4:
        raise BadFileFormat(f"{path}: malformed header {raw[0]!r}")
    degx, degy = int(head[2]), int(head[3])
    c = np.zeros((degx + 1, degy + 1), dtype=np.complex128)
    for ln in raw[1:]:
        parts = ln.split()
        if len(parts) not in (3, 4):
            raise BadFileFormat(f"{path}: malformed coefficient line {ln!r}")
        i, j = int(parts[0]), int(parts[1])
        if not (0 <= i <= degx and 0 <= j <= degy):
            raise BadFileFormat(f"{path}: exponent ({i},{j}) out of range")
        im = float(parts[3]) if len(parts) == 4 else 0.0
        c[i, j] = complex(float(parts[2]), im)
    return BiPoly(c, trim=False)


# ---------------------------------------------------------------- PARAM v1

def save_param(path, P: Parametrization):
    def coeff_line(label, p: UniPoly):
        vals = " ".join(_fmt(z.real) for z in p.c)
        return f"{label} {vals}"

    lines = [
        "PARAM v1",
        coeff_line("num1", P.p1.num),
        coeff_line("den1", P.p1.den),
        coeff_line("num2", P.p2.num),
        coeff_line("den2", P.p2.den),
    ]
    _atomic_write(path, "\n".join(lines) + "\n")


def load_param(path) -> Parametrization:
    with open(path, encoding="utf-8") as fh:
        raw = [ln.strip() for ln in fh if ln.strip()]
    if not raw or raw[0] != "PARAM v1":
        raise BadFileFormat(f"{path}: missing PARAM v1 header")
    parts = {}
    for ln in raw[1:]:
        toks = ln.split()
        if toks[0] not in ("num1", "den1", "num2", "den2") or len(toks) < 2:
            raise BadFileFormat(f"{path}: malformed line {ln!r}")
        parts[toks[0]] = UniPoly(
            np.array([float(v) for v in toks[1:]], dtype=np.complex128),
            trim=False)
    missing = {"num1", "den1", "num2", "den2"} - set(parts)
    if missing:
        raise BadFileFormat(f"{path}: missing lines {sorted(missing)}")
    den1, den2 = parts["den1"], parts["den2"]
    if np.array_equal(den1.c, den2.c):
        den2 = den1  # keep the shared-denominator structure
    p1 = RatFun(parts["num1"], den1)
    p2 = RatFun(parts["num2"], den2)
    raw_poles = []
    for pi in (p1, p2):
        if pi.den.degree >= 1:
            raw_poles.extend(real_roots(pi.den))
    poles = []
    for b in sorted(raw_poles):
        if not poles or abs(b - poles[-1]) > 1e-7 * (1.0 + abs(b)):
            poles.append(b)
    return Parametrization(p1=p1, p2=p2, poles=poles)


# ------------------------------------------------------------- family manifest

def save_manifest(path, members):
    lines = [f"{m.i} {m.j} {m.r_ij} {m.r1} {m.r2} {m.r3} {m.status}"
             for m in members]
    _atomic_write(path, "\n".join(lines) + "\n")


def load_manifest(path):
    """Manifest rows as (i, j, r_ij, r1, r2, r3, status) tuples."""
    rows = []
    with open(path, encoding="utf-8") as fh:
        for ln in fh:
            ln = ln.strip()
            if not ln:
                continue
            parts = ln.split()
            if len(parts) != 7:
                raise BadFileFormat(f"{path}: malformed manifest line {ln!r}")
            rows.append(tuple(int(v) for v in parts[:6]) + (parts[6],))
    return rows
