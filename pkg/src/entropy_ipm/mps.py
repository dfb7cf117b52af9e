"""MPS reader and conversion to standard form ``min c'x, Ax = b, x >= 0``.

Fixed-format decks are read by column position.  Lines that do not fit the
fixed layout (long names, numbers wider than 12 characters, free-format
files) fall back to whitespace splitting.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

_SECTIONS = ("NAME", "ROWS", "COLUMNS", "RHS", "RANGES", "BOUNDS", "ENDATA",
             "OBJSENSE", "OBJSENSE MAX", "OBJSENSE MIN")
_BOUND_TYPES = ("UP", "LO", "FX", "FR", "MI", "PL", "BV")


class MpsError(ValueError):
    """Malformed or unsupported MPS input.  ``line`` is 1-based (0 if n/a)."""

    def __init__(self, msg, line=0):
        self.line = line
        super().__init__(f"line {line}: {msg}" if line else msg)


@dataclass
class RawMps:
    """The deck as written, before any reformulation."""
    name: str
    obj_row: str
    row_names: list
    row_types: dict
    col_names: list
    entries: dict            # (row, col) -> value, duplicates summed
    rhs: dict
    ranges: dict
    lower: dict
    upper: dict
    maximize: bool = False

    @property
    def nnz(self):
        """Nonzero coefficients in COLUMNS, objective row included."""
        return sum(1 for v in self.entries.values() if v != 0.0)


@dataclass
class TransformLog:
    """Maps standard-form solutions back to the original variables.

    ``x_orig = offset + T @ x_std`` and
    ``c_orig' x_orig + obj_shift = c_std' x_std + constant``.
    """
    col_names: list
    offset: np.ndarray
    T: sp.csr_matrix
    constant: float
    obj_sign: float = 1.0
    dropped_rows: list = field(default_factory=list)
    column_roles: list = field(default_factory=list)

    def recover(self, x_std):
        return self.offset + self.T @ np.asarray(x_std, float)

    def objective(self, std_value):
        """Objective of the original deck given the standard-form value."""
        return self.obj_sign * (std_value + self.constant)


@dataclass
class LpProblem:
    A: sp.csr_matrix
    b: np.ndarray
    c: np.ndarray
    name: str = ""
    log: TransformLog | None = None

    @property
    def shape(self):
        return self.A.shape

    @property
    def nnz(self):
        return int(self.A.count_nonzero())


# ----------------------------------------------------------------- parsing

def _fixed_fields(line):
    # field starts (0-based) of the classical layout
    pad = line.ljust(61)
    return [pad[1:3].strip(), pad[4:12].strip(), pad[14:22].strip(),
            pad[24:36].strip(), pad[39:47].strip(), pad[49:61].strip()]


def _is_num(s):
    try:
        float(s)
        return True
    except ValueError:
        return False


def _split_data(line, section, lineno):
    """Return (type, name1, [(name, value), ...]) for a data line."""
    fx = _fixed_fields(line)
    fixed_ok = (len(line.rstrip()) <= 61 and line[:1] == " "
                and all(line[k:k + 1] in (" ", "") for k in (3, 12, 13, 22, 23) if k < len(line)))
    if section == "ROWS":
        toks = line.split()
        if len(toks) != 2:
            raise MpsError("expected '<type> <name>' in ROWS", lineno)
        return toks[0].upper(), toks[1], []
    if section == "BOUNDS":
        if fixed_ok and fx[0] and fx[2] and (fx[3] == "" or _is_num(fx[3])) and not fx[4]:
            pairs = [(fx[2], fx[3])]
            return fx[0].upper(), fx[1], pairs
        toks = line.split()
        if len(toks) == 4:
            return toks[0].upper(), toks[1], [(toks[2], toks[3])]
        if len(toks) == 3:
            if toks[0].upper() in ("FR", "MI", "PL", "BV"):
                return toks[0].upper(), toks[1], [(toks[2], "")]
            # bound set name omitted
            return toks[0].upper(), "", [(toks[1], toks[2])]
        if len(toks) == 2 and toks[0].upper() in ("FR", "MI", "PL", "BV"):
            return toks[0].upper(), "", [(toks[1], "")]
        raise MpsError("cannot parse BOUNDS line", lineno)
    # COLUMNS / RHS / RANGES
    if fixed_ok and fx[2] and _is_num(fx[3]) and (not fx[4] or _is_num(fx[5])) and not fx[0]:
        pairs = [(fx[2], fx[3])]
        if fx[4]:
            pairs.append((fx[4], fx[5]))
        return "", fx[1], pairs
    toks = line.split()
    if section in ("RHS", "RANGES") and len(toks) % 2 == 0:
        toks = [""] + toks      # set name omitted
    if len(toks) not in (3, 5):
        raise MpsError(f"cannot parse {section} line", lineno)
    pairs = [(toks[1], toks[2])]
    if len(toks) == 5:
        pairs.append((toks[3], toks[4]))
    return "", toks[0], pairs


def _float(s, lineno):
    try:
        return float(s.replace("D", "E").replace("d", "e"))
    except ValueError:
        raise MpsError(f"bad number {s!r}", lineno) from None


def parse_mps(text: str) -> RawMps:
    """Parse MPS text into a :class:`RawMps`."""
    name = ""
    section = None
    obj_row = None
    row_names, row_types = [], {}
    col_names, col_seen = [], set()
    entries, rhs, ranges = {}, {}, {}
    lower, upper = {}, {}
    maximize = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.rstrip("\n\r")
        if not line.strip() or line.startswith("*"):
            continue
        if not line[0].isspace():
            head = line.split()
            key = head[0].upper()
            if key not in {s.split()[0] for s in _SECTIONS}:
                raise MpsError(f"unknown section header {head[0]!r}", lineno)
            if key == "NAME":
                name = line[4:].strip().split()[0] if len(head) > 1 else ""
            elif key == "OBJSENSE":
                if len(head) > 1:
                    maximize = head[1].upper().startswith("MAX")
                section = "OBJSENSE"
                continue
            elif key == "ENDATA":
                section = "ENDATA"
                break
            section = key
            continue
        if section == "OBJSENSE":
            maximize = line.strip().upper().startswith("MAX")
            continue
        if section in (None, "NAME"):
            raise MpsError("data line outside of a section", lineno)
        kind, name1, pairs = _split_data(line, section, lineno)
        if section == "ROWS":
            if kind not in ("N", "E", "L", "G"):
                raise MpsError(f"unknown row type {kind!r}", lineno)
            if name1 in row_types:
                raise MpsError(f"duplicate row {name1!r}", lineno)
            if kind == "N":
                if obj_row is None:
                    obj_row = name1
                    row_types[name1] = "N"
                else:
                    row_types[name1] = "FREE"   # extra objective rows are ignored
                continue
            row_types[name1] = kind
            row_names.append(name1)
        elif section == "COLUMNS":
            if "MARKER" in line.upper():
                raise MpsError("integrality unsupported", lineno)
            if name1 not in col_seen:
                col_seen.add(name1)
                col_names.append(name1)
            for r, v in pairs:
                if r not in row_types:
                    raise MpsError(f"column {name1!r} references undeclared row {r!r}", lineno)
                if row_types[r] == "FREE":
                    continue
                key = (r, name1)
                entries[key] = entries.get(key, 0.0) + _float(v, lineno)
        elif section in ("RHS", "RANGES"):
            dest = rhs if section == "RHS" else ranges
            for r, v in pairs:
                if r not in row_types:
                    raise MpsError(f"{section} for undeclared row {r!r}", lineno)
                if row_types[r] == "FREE":
                    continue
                if section == "RANGES" and row_types[r] == "N":
                    raise MpsError("RANGES on the objective row", lineno)
                dest[r] = dest.get(r, 0.0) + _float(v, lineno)
        elif section == "BOUNDS":
            if kind not in _BOUND_TYPES:
                raise MpsError(f"unknown bound type {kind!r}", lineno)
            col, v = pairs[0]
            if col not in col_seen:
                raise MpsError(f"bound on undeclared column {col!r}", lineno)
            if kind == "BV":
                raise MpsError("integrality unsupported", lineno)
            val = _float(v, lineno) if v else 0.0
            if kind == "UP":
                upper[col] = val
                if val < 0 and lower.get(col, 0.0) == 0.0 and col not in lower:
                    lower[col] = -np.inf
            elif kind == "LO":
                lower[col] = val
            elif kind == "FX":
                lower[col] = upper[col] = val
            elif kind == "FR":
                lower[col], upper[col] = -np.inf, np.inf
            elif kind == "MI":
                lower[col] = -np.inf
            elif kind == "PL":
                upper[col] = np.inf
    if obj_row is None:
        raise MpsError("no objective (N) row")
    if not col_names:
        raise MpsError("no columns")
    for col in col_names:
        lo, up = lower.get(col, 0.0), upper.get(col, np.inf)
        if lo > up:
            raise MpsError(f"column {col!r} has lower bound {lo} > upper bound {up}")
    entries = {k: v for k, v in entries.items() if v != 0.0}
    return RawMps(name=name, obj_row=obj_row, row_names=row_names, row_types=row_types,
                  col_names=col_names, entries=entries, rhs=rhs, ranges=ranges,
                  lower=lower, upper=upper, maximize=maximize)


def read_mps(path) -> RawMps:
    with open(path) as fh:
        return parse_mps(fh.read())


# --------------------------------------------------------- standard form

def to_standard_form(raw: RawMps) -> LpProblem:
    """Reformulate ``raw`` as ``min c'x, Ax = b, x >= 0``.

    Column order: structural pieces (in deck order), then row slacks, then
    upper-bound slacks.  Empty rows with zero right-hand side are dropped.
    """
    rows = {r: i for i, r in enumerate(raw.row_names)}
    m0, n0 = len(raw.row_names), len(raw.col_names)
    A0 = sp.lil_matrix((m0, n0))
    c0 = np.zeros(n0)
    cidx = {cn: j for j, cn in enumerate(raw.col_names)}
    for (r, cn), v in raw.entries.items():
        if r == raw.obj_row:
            c0[cidx[cn]] += v
        else:
            A0[rows[r], cidx[cn]] += v
    A0 = A0.tocsc()
    sign = -1.0 if raw.maximize else 1.0
    c0 = sign * c0
    b0 = np.array([raw.rhs.get(r, 0.0) for r in raw.row_names])
    # RHS on the objective row is minus the objective constant
    constant = -sign * raw.rhs.get(raw.obj_row, 0.0)

    # ---- columns: x_orig = offset + T x_std
    cols = []          # (orig index, coefficient) per std structural column
    offset = np.zeros(n0)
    ub_rows = []       # (std col, bound) for explicit upper bounds
    roles = []
    for j, cn in enumerate(raw.col_names):
        lo = raw.lower.get(cn, 0.0)
        up = raw.upper.get(cn, np.inf)
        if np.isfinite(lo) and lo == up:
            offset[j] = lo                          # pinned, column eliminated
            continue
        if np.isfinite(lo):
            offset[j] = lo
            cols.append((j, 1.0))
            roles.append(f"{cn}")
            if np.isfinite(up):
                ub_rows.append((len(cols) - 1, up - lo))
        elif np.isfinite(up):
            offset[j] = up
            cols.append((j, -1.0))
            roles.append(f"-{cn}")
        else:
            cols.append((j, 1.0))
            roles.append(f"{cn}+")
            cols.append((j, -1.0))
            roles.append(f"{cn}-")
    nstruct = len(cols)
    T = sp.csr_matrix((np.array([s for _, s in cols]),
                       (np.array([j for j, _ in cols], dtype=int), np.arange(nstruct))),
                      shape=(n0, nstruct))
    A_s = (A0 @ T).tocsr()
    c_s = T.T @ c0
    b_s = b0 - A0 @ offset
    constant += c0 @ offset

    # ---- rows: slacks, surpluses and ranges
    slack_cols = []    # (row, coef)
    extra_rows = []    # (col index in std, bound) slack <= bound
    for i, r in enumerate(raw.row_names):
        t = raw.row_types[r]
        R = raw.ranges.get(r)
        if R is None:
            if t == "L":
                slack_cols.append((i, 1.0))
                roles.append(f"slack:{r}")
            elif t == "G":
                slack_cols.append((i, -1.0))
                roles.append(f"surplus:{r}")
            continue
        # two-sided row lo <= a'x <= hi  ->  a'x - r = lo, 0 <= r <= hi - lo
        rhs = b0[i]
        if t == "L":
            lo_i, hi_i = rhs - abs(R), rhs
        elif t == "G":
            lo_i, hi_i = rhs, rhs + abs(R)
        else:
            lo_i, hi_i = (rhs, rhs + R) if R >= 0 else (rhs + R, rhs)
        shift = lo_i - rhs
        b_s[i] += shift
        slack_cols.append((i, -1.0))
        roles.append(f"range:{r}")
        if hi_i > lo_i:
            extra_rows.append((nstruct + len(slack_cols) - 1, hi_i - lo_i))
        else:
            extra_rows.append((nstruct + len(slack_cols) - 1, 0.0))
    ns = len(slack_cols)
    S = sp.csr_matrix((np.array([v for _, v in slack_cols]),
                       (np.array([i for i, _ in slack_cols], dtype=int), np.arange(ns))),
                      shape=(m0, ns))
    A_s = sp.hstack([A_s, S]).tocsr()
    c_s = np.concatenate([c_s, np.zeros(ns)])

    # ---- explicit upper-bound rows  x_k + w_k = u_k
    bound_rows = ub_rows + extra_rows
    nb = len(bound_rows)
    if nb:
        ncur = A_s.shape[1]
        Bm = sp.lil_matrix((nb, ncur + nb))
        bb = np.zeros(nb)
        for k, (col, u) in enumerate(bound_rows):
            Bm[k, col] = 1.0
            Bm[k, ncur + k] = 1.0
            bb[k] = u
        A_s = sp.vstack([sp.hstack([A_s, sp.csr_matrix((m0, nb))]), Bm.tocsr()]).tocsr()
        b_s = np.concatenate([b_s, bb])
        c_s = np.concatenate([c_s, np.zeros(nb)])
        roles += [f"ubslack:{k}" for k in range(nb)]
    row_labels = list(raw.row_names) + [f"bound:{k}" for k in range(nb)]

    # ---- drop empty rows with zero right-hand side
    A_s.eliminate_zeros()
    counts = np.diff(A_s.indptr)
    keep = ~((counts == 0) & (b_s == 0.0))
    dropped = [row_labels[i] for i in np.flatnonzero(~keep)]
    A_s = A_s[keep]
    b_s = b_s[keep]

    ntot = A_s.shape[1]
    T_full = sp.hstack([T, sp.csr_matrix((n0, ntot - nstruct))]).tocsr()
    log = TransformLog(col_names=list(raw.col_names), offset=offset, T=T_full,
                       constant=float(constant), obj_sign=sign,
                       dropped_rows=dropped, column_roles=roles)
    return LpProblem(A=A_s.tocsr(), b=np.asarray(b_s, float), c=np.asarray(c_s, float),
                     name=raw.name, log=log)


def load_lp(path) -> LpProblem:
    return to_standard_form(read_mps(path))


def dump_standard_form(lp: LpProblem) -> str:
    """Plain-text dump of (A, b, c) for debugging."""
    m, n = lp.shape
    out = [f"# {lp.name} m={m} n={n} nnz={lp.nnz}"]
    out.append("c " + " ".join(f"{v:.17g}" for v in lp.c))
    out.append("b " + " ".join(f"{v:.17g}" for v in lp.b))
    coo = lp.A.tocoo()
    order = np.lexsort((coo.col, coo.row))
    out += [f"A {coo.row[k]} {coo.col[k]} {coo.data[k]:.17g}" for k in order]
    return "\n".join(out) + "\n"
