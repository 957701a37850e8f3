"""Command-line interface: ``flatorth {gen,verify,plan,baseline,bounds}``."""

from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys

import numpy as np

from .baseline import random_baseline
from .circulant import detect_circulant, is_circulant_orthogonal
from .errors import FlatnessInsufficientError, FlatOrthError, InternalContradictionError
from .hadamard import envelope_epsilon, extract_hadamard, extraction_threshold, hadamard_available
from .linalg import ORTHO_TOL, flatness_metrics
from .matrixio import FORMATS, dumps_matrix, read_matrix_with_provenance, write_matrix
from .planner import generate, plan

EXIT_OK, EXIT_PRECONDITION, EXIT_VERIFY, EXIT_CONTRADICTION = 0, 2, 3, 4
SEED_ENV = "FLATORTH_SEED"
OBJECTIVE_CHOICES = ("max-l", "min-u", "min-f", "circulant")


def default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    return int(raw) if raw not in (None, "") else 0


def _print_report(report, out=None) -> None:
    out = out or sys.stdout
    print(f"n            {report.n}", file=out)
    print(f"l (min |m|)  {report.l:.17g}", file=out)
    print(f"u (max |m|)  {report.u:.17g}", file=out)
    print(f"f            {report.f:.17g}", file=out)
    print(f"gram_defect  {report.gram_defect:.3e}", file=out)


def cmd_gen(args) -> int:
    seed = args.seed if args.seed is not None else default_seed()
    res = generate(args.n, args.objective, seed)
    if args.out:
        write_matrix(res, args.out, args.format)
        print(f"plan         {res.provenance['plan']}")
        _print_report(res.report)
        print(f"wrote        {args.out}")
    else:
        sys.stdout.write(dumps_matrix(res.matrix, args.format or "csv", res.provenance))
    return EXIT_OK


def cmd_verify(args) -> int:
    m, prov = read_matrix_with_provenance(args.path)
    report = flatness_metrics(m)
    _print_report(report)
    ok = report.gram_defect <= ORTHO_TOL
    print(f"orthogonal   {'yes' if ok else 'NO'} (tolerance {ORTHO_TOL:g})")
    row = detect_circulant(m)
    if row is None:
        print("circulant    no")
    else:
        spectral = is_circulant_orthogonal(row)
        print(f"circulant    yes (spectrum unimodular: {'yes' if spectral else 'no'})")
    values = np.unique(np.round(m, 12))
    if values.size <= 4:
        print(f"entries      {values.size}-valued: " + ", ".join(f"{v:.12g}" for v in values))
    else:
        print(f"entries      {values.size} distinct values")
    if prov.get("construction") or prov.get("plan"):
        print(f"provenance   {prov.get('plan', prov.get('construction'))}")
    if not ok:
        return EXIT_VERIFY
    eps = envelope_epsilon(m)
    limit = extraction_threshold(report.n)
    try:
        s = extract_hadamard(m)
    except FlatnessInsufficientError:
        print(f"hadamard     not extractable (envelope {eps:.6g} >= {limit:.6g})")
    else:
        print(f"hadamard     extracted (envelope {eps:.3g} < {limit:.6g})")
        if report.n <= 32:
            for r in s:
                print("  " + " ".join("+" if v > 0 else "-" for v in r))
    return EXIT_OK


def cmd_plan(args) -> int:
    seed = args.seed if args.seed is not None else default_seed()
    pl = plan(args.n, args.objective, seed)
    if args.json:
        print(json.dumps(pl.as_dict(), indent=2))
        return EXIT_OK
    p = pl.predicted
    print(f"n={pl.target_n} objective={pl.objective} seed={pl.seed}")
    print(f"plan       {pl.describe()}")
    print(f"predicted  l={p.l:.6g} u={p.u:.6g} f={p.f:.6g}")
    for tree, pred in pl.alternatives:
        print(f"  alt      {tree.describe()}  l={pred.l:.6g} u={pred.u:.6g} f={pred.f:.6g}")
    return EXIT_OK


def cmd_baseline(args) -> int:
    seed = args.seed if args.seed is not None else default_seed()
    stats = random_baseline(args.n, args.trials, seed)
    print(json.dumps(stats.summary(), indent=2))
    return EXIT_OK


def bounds_lines(n: int) -> list[str]:
    root = math.sqrt(n)
    lines = [
        f"n = {n}",
        f"trivial        l_n <= {1 / root:.6g} <= u_n",
        f"l_n floor      l_n >= 1/(2 sqrt n) = {1 / (2 * root):.6g}",
    ]
    if n % 2:
        lines.append(f"u_n ceiling    u_n <= (sqrt3 + o(1))/sqrt n  ~ {math.sqrt(3) / root:.6g}")
    else:
        lines.append(f"u_n ceiling    u_n <= (2 + o(1))/sqrt n  ~ {2 / root:.6g}")
    c = 1.0 if n % 2 else 2.0
    floor = math.sqrt(1.0 + c / n) - 1.0
    if hadamard_available(n):
        lines.append("f_n            0 (a Hadamard matrix of this order is constructible)")
    elif n >= 3 and n % 4:
        lines.append(f"f_n floor      f_n >= sqrt(1 + {c:g}/n) - 1 = {floor:.6g} (no Hadamard matrix of order n)")
    else:
        lines.append(f"f_n floor      f_n >= {floor:.6g} unless a Hadamard matrix of order n exists"
                     " (none constructible here)")
    return lines


def cmd_bounds(args) -> int:
    print("\n".join(bounds_lines(args.n)))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="flatorth", description="Flat real orthogonal matrices.")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="construct and certify a matrix")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--objective", choices=OBJECTIVE_CHOICES, default="min-f")
    g.add_argument("--seed", type=int, default=None)
    g.add_argument("--out", default=None)
    g.add_argument("--format", choices=FORMATS, default=None)
    g.set_defaults(func=cmd_gen)

    v = sub.add_parser("verify", help="certify a matrix file")
    v.add_argument("path")
    v.set_defaults(func=cmd_verify)

    p = sub.add_parser("plan", help="print the construction tree without building it")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--objective", choices=OBJECTIVE_CHOICES, default="min-f")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_plan)

    b = sub.add_parser("baseline", help="entry statistics of random orthogonal matrices")
    b.add_argument("--n", type=int, required=True)
    b.add_argument("--trials", type=int, default=50)
    b.add_argument("--seed", type=int, default=None)
    b.set_defaults(func=cmd_baseline)

    bd = sub.add_parser("bounds", help="theoretical bounds applicable at n")
    bd.add_argument("--n", type=int, required=True)
    bd.set_defaults(func=cmd_bounds)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except InternalContradictionError as exc:
        print(f"internal contradiction: {exc}", file=sys.stderr)
        return EXIT_CONTRADICTION
    except (FlatOrthError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
