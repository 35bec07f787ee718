"""Command-line entry point.

Subcommands: ``check`` (completability bound on a support matrix),
``build`` (construct and verify a fitting generator matrix), ``reduce``
(run the root-removal process and print its trace), ``w`` (dump the
coefficient-matrix determinant in canonical text; alias ``det``) and
``verify`` (run a verification suite).

Exit codes are stable: 0 success / property verified, 1 domain-negative
(bound fails, counterexample, nothing found), 2 unusable input.
All randomness is seeded; the seed appears in every report header.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass

from . import codegen, reduction, verify
from .fields import FieldElem
from .polyring import coeff_matrix_det
from .structures import (ParseError, RootFamily, SupportMatrix, mds_condition,
                         root_polys, to_root_family)

DEFAULT_SEED = 1729


@dataclass(frozen=True)
class Config:
    command: str
    args: argparse.Namespace

    @property
    def seed(self) -> int:
        return getattr(self.args, "seed", DEFAULT_SEED)

    @property
    def as_json(self) -> bool:
        return getattr(self.args, "json", False)


def _read(path: str) -> str:
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc


def _load_family(cfg: Config) -> RootFamily:
    args = cfg.args
    if getattr(args, "family", None):
        text = _read(args.family)
        try:
            family = RootFamily.from_json(json.loads(text))
        except json.JSONDecodeError as exc:
            raise ParseError(f"bad family JSON: {exc}") from exc
        family.validate(allow_loose_n=getattr(args, "allow_loose_n", False))
        return family
    if getattr(args, "matrix", None):
        return to_root_family(SupportMatrix.loads(_read(args.matrix)))
    raise ParseError("need --family or --matrix")


def _elem(e: FieldElem):
    return e.to_int() if e.spec.k == 1 else list(e.coeffs)


def _header(cfg: Config) -> None:
    if not cfg.as_json:
        print(f"# mdsfit seed={cfg.seed}")


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_check(cfg: Config) -> int:
    mat = SupportMatrix.loads(_read(cfg.args.path))
    ok, witness = mds_condition(mat)
    payload = {"m": mat.m, "n": mat.n, "ok": ok,
               "witness": list(witness) if witness else None}
    if cfg.as_json:
        print(json.dumps(payload, sort_keys=True))
    else:
        _header(cfg)
        if ok:
            print(f"MDS condition holds for the {mat.m}x{mat.n} matrix")
        else:
            print(f"MDS condition FAILS: rows {list(witness)} cover too few columns")
    return 0 if ok else 1


def cmd_build(cfg: Config) -> int:
    args = cfg.args
    mat = SupportMatrix.loads(_read(args.matrix))
    try:
        inst = codegen.build_code(mat, args.q, strategy=args.strategy, seed=cfg.seed,
                                  allow_small_field=args.allow_small_field)
    except (codegen.NotMDSCondition, codegen.FieldTooSmall, codegen.NotFound) as exc:
        print(f"build failed: {exc}", file=sys.stderr)
        return 1
    if cfg.as_json:
        payload = inst.to_json()
        payload["seed"] = cfg.seed
        payload["strategy"] = args.strategy
        print(json.dumps(payload, sort_keys=True))
    else:
        _header(cfg)
        print(f"points: {' '.join(str(_elem(p)) for p in inst.points)}")
        print(f"det(T): {_elem(inst.det_t)}")
        print("G:")
        for i in range(inst.G.rows):
            print(" ".join(str(_elem(e)) for e in inst.G.row(i)))
        print(f"minors checked: {inst.report.minors_checked}, all invertible")
    return 0


def cmd_reduce(cfg: Config) -> int:
    family = _load_family(cfg)
    try:
        trace = reduction.reduce_family(family, policy=cfg.args.policy)
    except reduction.StuckGRP as exc:
        if cfg.as_json:
            print(json.dumps({"status": "stuck", "identical_pair": list(exc.pair)},
                             sort_keys=True))
        else:
            _header(cfg)
            print(f"stuck: identical degree-(m-1) sets {exc.pair}")
        return 1
    except ValueError as exc:
        print(f"reduce failed: {exc}", file=sys.stderr)
        return 1
    if cfg.as_json:
        print(json.dumps(trace.to_json(), sort_keys=True))
    else:
        _header(cfg)
        print("round  subset          (r,s)   beta  degrees")
        for r in trace.rounds:
            subset = "{" + ",".join(map(str, sorted(r.subset.elements))) + "}"
            print(f"{r.index:<6} {subset:<15} ({r.subset.r},{r.subset.s})   "
                  f"{r.beta:<5} {r.degrees_after}")
        print(f"removed: {sorted(trace.removed)}")
        print(f"survivor: set {trace.survivor}, final degrees {trace.final.degrees}")
    return 0


def cmd_dump_det(cfg: Config) -> int:
    family = _load_family(cfg)
    w = coeff_matrix_det(root_polys(family))
    if cfg.as_json:
        print(json.dumps({"m": family.m, "n": family.n, "det": w.text()},
                         sort_keys=True))
    else:
        print(w.text())
    return 0


def cmd_verify(cfg: Config) -> int:
    args = cfg.args
    suite = args.suite
    if suite == "zero-grp":
        profiles = ((tuple(args.profile),) if args.profile
                    else verify.all_profiles(args.m))
        scope = verify.SuiteScope(m=args.m, n=args.n, profiles=profiles,
                                  mode=args.mode, samples=args.samples,
                                  seed=cfg.seed, exact=not args.fast)
        report = verify.run_suite(scope, budget=args.budget, threads=args.threads,
                                  ce_path=args.counterexamples)
        payload = report.to_json()
        ok = report.ok
    elif suite == "support-equivalence":
        rep = verify.check_mds_rp_equivalence(args.m, args.n, limit=args.samples or None,
                                              seed=cfg.seed)
        payload = rep.to_json()
        ok = rep.ok
    elif suite == "reduction":
        if not args.profile:
            raise ParseError("the reduction suite needs --profile")
        rep = verify.check_reduction_properties(
            args.m, tuple(args.profile), n=args.n,
            samples=args.samples, seed=cfg.seed,
            exhaustive=(args.mode == "exhaustive"))
        payload = rep.to_json()
        ok = rep.ok
    else:  # pragma: no cover - argparse restricts choices
        raise ParseError(f"unknown suite {suite}")
    payload["seed"] = cfg.seed
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
    if cfg.as_json:
        print(json.dumps(payload, sort_keys=True))
    else:
        _header(cfg)
        print(json.dumps(payload, indent=2, sort_keys=True))
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _profile_arg(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x != ""]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad profile {text!r}: {exc}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mdsfit", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="test the completability bound on a support matrix")
    p.add_argument("path", help="matrix file (0/1 rows, or JSON)")
    p.add_argument("--json", action="store_true")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)

    p = sub.add_parser("build", help="construct a fitting generator matrix")
    p.add_argument("--matrix", required=True)
    p.add_argument("--q", type=int, required=True, help="field size (prime power)")
    p.add_argument("--strategy", default="auto",
                   choices=["auto", "exhaustive", "greedy", "random"])
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--allow-small-field", action="store_true")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("reduce", help="run the root-removal process")
    p.add_argument("--family", help="family JSON file")
    p.add_argument("--matrix", help="support matrix file (complemented first)")
    p.add_argument("--policy", default="lex", choices=["lex"])
    p.add_argument("--allow-loose-n", action="store_true")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("w", aliases=["det"],
                       help="print the coefficient-matrix determinant (canonical text)")
    p.add_argument("--family", help="family JSON file")
    p.add_argument("--matrix", help="support matrix file (complemented first)")
    p.add_argument("--allow-loose-n", action="store_true")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("--suite", default="zero-grp",
                   choices=["zero-grp", "support-equivalence", "reduction"])
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--profile", type=_profile_arg, default=None,
                   help="comma-separated degrees, e.g. 2,2,2")
    p.add_argument("--mode", default="exhaustive", choices=["exhaustive", "random"])
    p.add_argument("--samples", type=int, default=0)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--fast", action="store_true",
                   help="randomized zero test (flagged cases get exact rechecks)")
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    p.add_argument("--counterexamples", default=None,
                   help="write confirmed counterexamples to this JSON file")
    p.add_argument("--out", default=None, help="write the report JSON here")
    p.add_argument("--json", action="store_true")

    return parser


_HANDLERS = {
    "check": cmd_check,
    "build": cmd_build,
    "reduce": cmd_reduce,
    "w": cmd_dump_det,
    "det": cmd_dump_det,
    "verify": cmd_verify,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = Config(command=args.command, args=args)
    try:
        return _HANDLERS[args.command](cfg)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
