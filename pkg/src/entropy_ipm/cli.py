"""Command line: ``solve``, ``bench``, ``kernel-check`` and ``props``.

``solve`` exits 0 when the problem is classified (optimal or infeasible) and
2 on an iteration limit or numerical failure.  Input errors exit 1.
"""
from __future__ import annotations

import argparse
import math
import json
import sys

from . import bench as bench_mod
from . import kernel, properties
from .mps import MpsError
from .solver import RunConfig, parse_eta, solve
from .stopping import R_MAX

EXIT_INPUT = 1


def _cmd_solve(args):
    try:
        mode, eta = parse_eta(args.eta)
        cfg = RunConfig(algorithm=args.algorithm, eta_mode=mode, eta=eta, beta=args.beta,
                        r_max=args.rmax, max_iter=args.max_iter, log_path=args.log,
                        summary_path=args.summary, gap_eps=args.gap_eps)
        res, summ = solve(args.file, cfg)
    except (OSError, MpsError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    print(json.dumps(summ, indent=2))
    return res.status.exit_code


def _cmd_bench(args):
    modes = [m for m in args.modes.split(",") if m.strip()]
    try:
        for m in modes:
            parse_eta(m)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    rows = bench_mod.bench_dir(args.dir, modes, args.max_iter)
    if args.out:
        bench_mod.write_csv(rows, modes, args.out)
    labels = bench_mod.header(modes)
    print(",".join(labels))
    for r in rows:
        cells = [r.name, str(r.rows), str(r.cols), str(r.nnz)]
        for m in modes:
            lab = m if not m.startswith("fixed:") else f"fixed:{float(m[6:]):g}"
            it, ref = r.iterations.get(lab), r.reference.get(lab)
            cells += ["" if it is None else str(it), r.status.get(lab, ""),
                      "" if ref is None else str(ref), r.verdict(lab)]
        print(",".join(cells + [r.error]))
    return 0


def _cmd_kernel(args):
    pairs = kernel.registry()
    if args.corrected:
        pairs = pairs + kernel.corrected_registry()
    checks = kernel.check_all(pairs, tol=args.tol)
    width = max(len(c.name) for c in checks)
    print(f"{'pair':<{width}}  {'K':>8}  {'max rel err':>11}  shape  verdict")
    for c in checks:
        verdict = "PASS" if c.passed else "FAIL"
        print(f"{c.name:<{width}}  {c.K:8.4g}  {c.error:11.3e}  {'ok' if c.shape else 'no':>5}  {verdict}")
    neg = kernel.negative_control()
    err = kernel.verify_correspondence(neg)
    print(f"{neg.name:<{width}}  {neg.constant():8.4g}  {err:11.3e}  {'':>5}  "
          f"{'rejected' if err >= 0.1 else 'NOT rejected'}")
    return 0 if all(c.passed for c in checks) and err >= 0.1 else 1


def _cmd_props(args):
    reports, l22, witness = properties.run_default_suites(args.samples, args.seed)
    ok = all(r.passed for r in reports) and l22.passed
    for r in reports:
        print("\n".join(r.lines()))
    print(f"{'PASS' if l22.passed else 'FAIL'} {l22.name}: {l22.checked} checked, "
          f"{l22.failures} failed")
    wit_ok = witness >= 0.3 * math.log(64)
    ok = ok and wit_ok
    print(f"{'PASS' if wit_ok else 'FAIL'} Delta12 tightness witness N=64: Delta12/(N delta) = {witness:.4f}")
    return 0 if ok else 1


def build_parser():
    p = argparse.ArgumentParser(prog="entropy-ipm",
                                description="Entropy-direction interior-point LP solver")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="solve one MPS file")
    s.add_argument("file")
    s.add_argument("--algorithm", choices=("wide", "pc"), default="wide")
    s.add_argument("--eta", default="fixed:1",
                   help="fixed:<v> | heuristic | exact | two-value (wide only)")
    s.add_argument("--beta", type=float, default=0.5)
    s.add_argument("--rmax", type=float, default=R_MAX)
    s.add_argument("--max-iter", type=int, default=1000)
    s.add_argument("--log", help="per-iteration CSV")
    s.add_argument("--summary", help="summary JSON")
    s.add_argument("--gap-eps", type=float, default=None,
                   help="stop when x's + t kappa <= GAP_EPS instead of the residual criterion")
    s.set_defaults(func=_cmd_solve)

    b = sub.add_parser("bench", help="iteration counts over a directory of MPS files")
    b.add_argument("--dir", required=True)
    b.add_argument("--modes", default=",".join(bench_mod.DEFAULT_MODES))
    b.add_argument("--out")
    b.add_argument("--max-iter", type=int, default=1000)
    b.set_defaults(func=_cmd_bench)

    k = sub.add_parser("kernel-check", help="verify the kernel / transform correspondence")
    k.add_argument("--corrected", action="store_true", help="also list the amended pairs")
    k.add_argument("--tol", type=float, default=1e-9)
    k.set_defaults(func=_cmd_kernel)

    r = sub.add_parser("props", help="run the randomised lemma suite")
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--samples", type=int, default=1000)
    r.set_defaults(func=_cmd_props)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
