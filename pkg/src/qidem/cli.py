"""Command-line interface.

Exit codes: 0 success, 1 verification failure, 2 usage or schema error,
3 quantum-group axiom failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path


from . import config
from .coidalgebra import coidalgebra_of, haar_equivalence_report, known_subgroups
from .hopf import AxiomError, QuantumGroup, validate
from .io import SchemaError, load_json, parse_dict
from .lattice import build_lattice, export
from .models import BUILTINS, builtin, match_oracle
from .presubgroups import search_idempotents
from .suites import SUITES, run_suite

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_AXIOM = 0, 1, 2, 3


class UsageError(Exception):
    pass


def fmt(x: complex) -> str:
    """12 significant digits; parts below 1e-12 print as 0."""
    re = 0.0 if abs(x.real) < 1e-12 else x.real
    im = 0.0 if abs(x.imag) < 1e-12 else x.imag
    if im == 0.0:
        return f"{re:.12g}"
    sign = "+" if im > 0 else "-"
    return f"{re:.12g}{sign}{abs(im):.12g}j"


def fmt_vec(v) -> str:
    return "[" + ", ".join(fmt(complex(z)) for z in v) + "]"


def _pairs(v) -> list[list[float]]:
    return [[float(fmt(complex(z.real))), float(fmt(complex(z.imag)))] for z in v]


def _load(args, out) -> QuantumGroup:
    if args.example:
        try:
            return builtin(args.example)
        except KeyError as exc:
            raise UsageError(str(exc.args[0])) from exc
    data = load_json(args.input)
    alg, cop, counit, meta = parse_dict(data)
    return QuantumGroup(alg, cop, counit, name=str(meta.get("name", Path(args.input).stem)),
                        metadata=meta)


def _search(qg: QuantumGroup, args):
    return search_idempotents(qg, seeds=args.seeds, rng_seed=args.rng_seed)


def cmd_validate(args, out) -> int:
    if args.example:
        qg = _load(args, out)
        report = qg.report
    else:
        alg, cop, counit, _ = parse_dict(load_json(args.input))
        report, _ = validate(alg, cop, counit)
    print(report.format(), file=out)
    print(f"max residual {report.max_residual():.3e}", file=out)
    if report.ok:
        print("all axioms pass", file=out)
        return EXIT_OK
    print("axiom failures: " + ", ".join(report.failures()), file=out)
    return EXIT_AXIOM


def cmd_haar(args, out) -> int:
    qg = _load(args, out)
    labels = qg.algebra.labels
    print(f"quantum group {qg.name} (dim {qg.dim})", file=out)
    print("Haar state on the basis:", file=out)
    for lab, v in zip(labels, qg.haar):
        print(f"  h({lab}) = {fmt(v)}", file=out)
    print(f"Haar element eta = {fmt_vec(qg.eta)}", file=out)
    print("antipode on the basis:", file=out)
    for i, lab in enumerate(labels):
        print(f"  S({lab}) = {fmt_vec(qg.antipode[:, i])}", file=out)
    return EXIT_OK


def _records(qg, states):
    subs = known_subgroups(states)
    oracle = match_oracle(qg, states)
    recs = []
    for i, st in enumerate(states):
        rep = haar_equivalence_report(st, subs)
        recs.append({
            "index": i,
            "state": st.phi.values,
            "rho": st.rho.coords,
            "f": st.f.coords,
            "p": st.p.coords,
            "haar": rep.is_haar,
            "coidalgebra_dim": coidalgebra_of(st).dim,
            "subgroup": None if oracle is None else sorted(int(g) for g in oracle[i]),
        })
    return recs, oracle is not None


def cmd_idempotents(args, out) -> int:
    qg = _load(args, out)
    states = _search(qg, args)
    recs, certified = _records(qg, states)
    if args.format == "json":
        data = {
            "quantum_group": qg.name,
            "dim": qg.dim,
            "rng_seed": args.rng_seed,
            "seeds": args.seeds,
            "exhaustive": certified,
            "states": [
                {**r, **{k: _pairs(r[k]) for k in ("state", "rho", "f", "p")}} for r in recs
            ],
        }
        print(json.dumps(data, indent=1), file=out)
        return EXIT_OK
    n_haar = sum(r["haar"] for r in recs)
    print(f"quantum group {qg.name} (dim {qg.dim}): {len(recs)} idempotent states, "
          f"{n_haar} Haar, {len(recs) - n_haar} non-Haar", file=out)
    print("completeness: " + ("certified by the subgroup oracle" if certified
                              else "not certified (heuristic search)"), file=out)
    for r in recs:
        flag = "Haar" if r["haar"] else "non-Haar"
        extra = "" if r["subgroup"] is None else f", subgroup {r['subgroup']}"
        print(f"[{r['index']}] {flag}, dim C = {r['coidalgebra_dim']}{extra}", file=out)
        print(f"  rho = {fmt_vec(r['rho'])}", file=out)
        print(f"  f   = {fmt_vec(r['f'])}", file=out)
        print(f"  p   = {fmt_vec(r['p'])}", file=out)
    return EXIT_OK


def cmd_lattice(args, out) -> int:
    qg = _load(args, out)
    states = _search(qg, args)
    lat = build_lattice(states, exhaustive=match_oracle(qg, states) is not None)
    text = export(lat, args.format)
    if args.out:
        Path(args.out).write_text(text + "\n")
    else:
        print(text, file=out)
    return EXIT_OK


def cmd_verify(args, out) -> int:
    qg = _load(args, out)
    states = _search(qg, args)
    items = run_suite(args.what, states, rng_seed=args.rng_seed)
    for it in items:
        print(f"{'PASS' if it.passed else 'FAIL'}  {it.name}  {it.value:.3e}", file=out)
    bad = sum(not it.passed for it in items)
    print(f"{args.what}: {len(items) - bad}/{len(items)} checks pass on {len(states)} states",
          file=out)
    return EXIT_OK if bad == 0 else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qidem",
                                     description="Idempotent states on finite quantum groups.")
    sub = parser.add_subparsers(dest="command", required=True)

    def source(p):
        g = p.add_mutually_exclusive_group(required=True)
        g.add_argument("--example", metavar="NAME", help=f"builtin: {', '.join(BUILTINS)}")
        g.add_argument("--input", metavar="FILE", help="quantum-group JSON file")
        p.add_argument("--tol", type=float, default=None, help="global tolerance override")

    def search(p):
        p.add_argument("--seeds", type=int, default=64)
        p.add_argument("--rng-seed", type=int, default=0)

    p = sub.add_parser("validate", help="check the quantum-group axioms")
    source(p)
    p.set_defaults(func=cmd_validate)
    p = sub.add_parser("haar", help="Haar state, Haar element and antipode")
    source(p)
    p.set_defaults(func=cmd_haar)
    p = sub.add_parser("idempotents", help="search for idempotent states")
    source(p)
    search(p)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_idempotents)
    p = sub.add_parser("lattice", help="lattice of idempotent states")
    source(p)
    search(p)
    p.add_argument("--format", choices=("dot", "json"), default="dot")
    p.add_argument("--out", metavar="FILE")
    p.set_defaults(func=cmd_lattice)
    p = sub.add_parser("verify", help="run a residual suite on the discovered idempotents")
    source(p)
    search(p)
    p.add_argument("--what", choices=SUITES, required=True)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) and EXIT_USAGE
    try:
        with config.tolerance(args.tol if args.tol is not None else config.get_tol()):
            return args.func(args, out)
    except (UsageError, SchemaError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except AxiomError as exc:
        print(f"error: axiom check failed: {', '.join(exc.report.failures())}", file=sys.stderr)
        print(exc.report.format(), file=out)
        return EXIT_AXIOM


if __name__ == "__main__":
    sys.exit(main())
