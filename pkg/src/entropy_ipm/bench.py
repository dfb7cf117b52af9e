"""Iteration-count benchmark over a directory of MPS decks.

Counts are compared against the published reference table with a band of
``max(10, 35%)`` iterations; exact reproduction is not expected since the
standard-form conversion and the linear algebra differ.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

from .mps import read_mps, to_standard_form
from .solver import DATA_DIR, RunConfig, eta_label, parse_eta, run

DEFAULT_MODES = ("fixed:1", "fixed:2", "fixed:3", "fixed:4", "heuristic", "exact")
BAND_ABS, BAND_REL = 10, 0.35
_REF_COLUMNS = {"fixed:1": "eta1", "fixed:2": "eta2", "fixed:3": "eta3", "fixed:4": "eta4",
                "heuristic": "heuristic", "exact": "exact"}


def reference_table(path=None):
    """``name -> {rows, cols, nnz, eta1..eta4, heuristic, exact}`` as integers."""
    path = path or DATA_DIR / "reference_iterations.csv"
    with open(path) as fh:
        return {r["name"]: {k: int(v) for k, v in r.items() if k != "name"}
                for r in csv.DictReader(fh)}


def band(ref):
    return max(BAND_ABS, BAND_REL * ref)


def within_band(iters, ref):
    return abs(iters - ref) <= band(ref)


def reference_for(name, mode, table=None):
    table = reference_table() if table is None else table
    row = table.get(name.lower())
    col = _REF_COLUMNS.get(mode)
    return None if row is None or col is None else row[col]


@dataclass
class BenchRow:
    name: str
    rows: int
    cols: int
    nnz: int
    iterations: dict = field(default_factory=dict)     # mode -> count or None
    status: dict = field(default_factory=dict)
    reference: dict = field(default_factory=dict)
    error: str = ""

    def verdict(self, mode):
        it, ref = self.iterations.get(mode), self.reference.get(mode)
        if ref is None:
            return ""
        if it is None or self.status.get(mode) != "optimal":
            return "fail"
        return "ok" if within_band(it, ref) else "out-of-band"


def bench_problem(path, modes=DEFAULT_MODES, table=None, max_iter=1000) -> BenchRow:
    path = Path(path)
    table = reference_table() if table is None else table
    name = path.stem
    try:
        raw = read_mps(path)
        lp = to_standard_form(raw)
    except Exception as exc:            # recorded, the run continues
        return BenchRow(name, 0, 0, 0, error=f"{type(exc).__name__}: {exc}")
    row = BenchRow(name, len(raw.row_names) + 1, len(raw.col_names), raw.nnz)
    for mode in modes:
        em, eta = parse_eta(mode)
        label = eta_label(em, eta)
        row.reference[label] = reference_for(name, label, table)
        try:
            res = run(lp, RunConfig(eta_mode=em, eta=eta, max_iter=max_iter))
            row.iterations[label] = res.iterations
            row.status[label] = res.status.value
        except Exception as exc:
            row.iterations[label] = None
            row.status[label] = f"error: {exc}"
    return row


def bench_dir(directory, modes=DEFAULT_MODES, max_iter=1000):
    table = reference_table()
    files = sorted(Path(directory).glob("*.mps"))
    return [bench_problem(p, modes, table, max_iter) for p in files]


def header(modes):
    labels = [eta_label(*parse_eta(m)) for m in modes]
    cols = ["name", "rows", "cols", "nnz"]
    for lab in labels:
        cols += [f"iters[{lab}]", f"status[{lab}]", f"ref[{lab}]", f"verdict[{lab}]"]
    return cols + ["error"]


def write_csv(rows, modes, path):
    labels = [eta_label(*parse_eta(m)) for m in modes]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header(modes))
        for r in rows:
            line = [r.name, r.rows, r.cols, r.nnz]
            for lab in labels:
                ref = r.reference.get(lab)
                it = r.iterations.get(lab)
                line += ["" if it is None else it, r.status.get(lab, ""),
                         "" if ref is None else ref, r.verdict(lab)]
            w.writerow(line + [r.error])
