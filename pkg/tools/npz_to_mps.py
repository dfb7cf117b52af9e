"""Regenerate fixed-format MPS files from the scipy NETLIB benchmark archives.

The scipy benchmark suite stores a handful of NETLIB problems as ``.npz``
files with keys ``c, A_ub, b_ub, A_eq, b_eq, bounds``.  Inequality rows are
stored in ``<=`` form, so ``>=`` rows of the original deck come back as
negated ``L`` rows.  That is the same LP (the dual multiplier flips sign).

Usage::

    python3 tools/npz_to_mps.py tools/npz src/entropy_ipm/data/netlib SC50A SC50B BLEND SHARE2B
"""
import sys
from pathlib import Path

import numpy as np


def _num(v):
    s = repr(float(v))
    if s.endswith(".0"):
        s = s[:-1]
    if s.startswith("0."):
        s = s[1:]
    elif s.startswith("-0."):
        s = "-" + s[2:]
    return s


def _line(tag, name, pairs):
    out = []
    for k in range(0, len(pairs), 2):
        chunk = pairs[k:k + 2]
        s = f" {tag:<2} {name:<8}  {chunk[0][0]:<8}  {chunk[0][1]:>12}"
        if len(chunk) == 2:
            s += f"   {chunk[1][0]:<8}  {chunk[1][1]:>12}"
        out.append(s.rstrip())
    return out


def npz_to_mps(src, name):
    d = np.load(src, allow_pickle=True)
    c = np.asarray(d["c"], float)
    blocks = []
    for key, sense in (("A_eq", "E"), ("A_ub", "L")):
        a = np.asarray(d[key], float)
        if a.size:
            blocks.append((a, np.asarray(d["b" + key[1:]], float), sense))
    if len(d["bounds"]):
        raise ValueError("bounds are not handled by this converter")
    rows, senses, rhs = [], [], []
    for a, b, sense in blocks:
        rows.append(a)
        senses += [sense] * a.shape[0]
        rhs.append(b)
    A = np.vstack(rows)
    b = np.concatenate(rhs)
    m, n = A.shape
    rnames = [f"R{i + 1:04d}" for i in range(m)]
    cnames = [f"C{j + 1:04d}" for j in range(n)]
    lines = [f"NAME          {name}", "ROWS", " N  COST"]
    lines += [f" {s}  {r}" for s, r in zip(senses, rnames)]
    lines.append("COLUMNS")
    for j in range(n):
        pairs = []
        if c[j] != 0:
            pairs.append(("COST", _num(c[j])))
        pairs += [(rnames[i], _num(A[i, j])) for i in np.flatnonzero(A[:, j])]
        lines += _line("", cnames[j], pairs)
    lines.append("RHS")
    pairs = [(rnames[i], _num(b[i])) for i in np.flatnonzero(b)]
    lines += _line("", "RHS", pairs)
    lines.append("ENDATA")
    return "\n".join(lines) + "\n"


if __name__ == "__main__":
    src_dir, dst_dir = Path(sys.argv[1]), Path(sys.argv[2])
    for name in sys.argv[3:]:
        text = npz_to_mps(src_dir / f"{name}.npz", name)
        (dst_dir / f"{name.lower()}.mps").write_text(text)
        print("wrote", dst_dir / f"{name.lower()}.mps")
