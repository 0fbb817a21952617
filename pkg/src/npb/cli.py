"""
``npb``: command-line front end.

Exit codes: 0 success, 1 a mathematical check failed, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor

from . import __version__
from .actions import (Representation, action_failures, derivations, enumerate_extensions,
                      load_representation)
from .algebra import (DEFINING, BiAlgebra, Variety, check_derived_identities, classify,
                      identity_failure)
from .cohomology import (VARIETY_KEY, CochainContext, build_complex, chain_map_failures,
                         cohomology_dims, cohomology_table, restricted_h2, variety_maps)
from .errors import (ActionAxiomsFail, GuardExceeded, NPBError, ParseError, RangeTooSmall,
                     ShapeMismatch, VarietyMismatch)
from .exactlin import FieldSpec
from .freealg import dependence_witnesses, enumerate_basis, normalize, underlying_free_basis_report
from .lescheck import LES, SES, verify_les
from .samples import SampleConfig, random_instance

SIX = [v.value.lower() for v in VARIETY_KEY]
NP = {Variety.NPL, Variety.NPR, Variety.NPLR}


class MathFailure(Exception):
    """A mathematical check failed; the message locates the witness."""


def _emit(args, obj, text_lines):
    if args.format == "json":
        if isinstance(obj, list) and getattr(args, "jsonl", False):
            for row in obj:
                print(json.dumps(row, sort_keys=True, default=str))
        else:
            print(json.dumps(obj, sort_keys=True, indent=2, default=str))
    else:
        for line in text_lines:
            print(line)


def _load_algebra(path, field=None) -> BiAlgebra:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: line {exc.lineno}: {exc.msg}") from None
    if field is not None:
        data["field"] = field
    try:
        return BiAlgebra.from_json(data)
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"{path}: malformed algebra ({exc})") from None


def _load_rep(P: BiAlgebra, spec) -> Representation:
    if spec is None or spec == "regular":
        return Representation.regular(P).abelian()
    if spec.startswith("zero"):
        m = int(spec.split(":", 1)[1]) if ":" in spec else 1
        return Representation.zero(P, m)
    try:
        return load_representation(P, spec)
    except OSError as exc:
        raise ParseError(f"{spec}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ParseError(f"{spec}: line {exc.lineno}: {exc.msg}") from None
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"{spec}: malformed representation ({exc})") from None


def _tags(P):
    return sorted(v.value for v in classify(P))


# ---------------------------------------------------------------------------
# subcommands


def cmd_classify(args):
    P = _load_algebra(args.algebra, args.field)
    tags = _tags(P)
    _emit(args, {"algebra": args.algebra, "field": P.field.name, "tags": tags},
          [" ".join(tags) if tags else "(none)"])


def cmd_check(args):
    P = _load_algebra(args.algebra, args.field)
    out = {"algebra": args.algebra, "field": P.field.name, "failures": []}
    lines = []
    if args.variety:
        v = Variety.parse(args.variety)
        for tag in DEFINING[v]:
            w = identity_failure(P, tag)
            if w is not None:
                out["failures"].append({"identity": tag, "at": w})
                lines.append(f"identity ({tag}) fails at {w}")
        if args.rep:
            for f in action_failures(v, _load_rep(P, args.rep)):
                out["failures"].append({"action": f})
                lines.append(f"action axiom {f}")
    rows = check_derived_identities(P)
    out["derived"] = rows
    for r in rows:
        lines.append(f"({r['identity']}) premise {r['premise']}: {r['verdict']}")
        if r["verdict"] == "VIOLATION":
            out["failures"].append({"identity": r["identity"], "verdict": "VIOLATION"})
    out["ok"] = not out["failures"]
    lines.append("ok" if out["ok"] else "FAILED")
    _emit(args, out, lines)
    if not out["ok"]:
        raise MathFailure("check failed")


def cmd_free(args):
    v = Variety.parse(args.variety or "nplr")
    gens = [g for g in args.generators.split(",") if g]
    F = FieldSpec.parse(args.field or "Q")
    if args.normalize:
        e = normalize(v, args.normalize, gens, F)
        _emit(args, {"variety": v.value, "term": args.normalize, "normal_form": str(e)}, [str(e)])
        return
    if args.underlying:
        rep = underlying_free_basis_report(v, gens, args.underlying, args.max_degree, F)
        lines = [f"{v.value} underlying {args.underlying} on {','.join(gens)}: "
                 f"{'free' if rep['free'] else 'NOT free'} up to degree {args.max_degree}"]
        for r in rep["rows"]:
            lines.append(f"  md {r['multidegree']}: dim {r['dim']}, rank {r['rank']}, "
                         f"independent {r['independent']}, spanning {r['spanning']}")
            if "dependence" in r:
                lines.append(f"    dependence: {r['dependence']}")
        _emit(args, rep, lines)
        if not rep["free"] and args.strict:
            raise MathFailure("underlying algebra is not free")
        return
    if args.witnesses:
        ws = dependence_witnesses(v, F)
        _emit(args, ws, [f"({w['identity']}) {w['witness']}: vanishes={w['relation_vanishes']}"
                         for w in ws])
        return
    out, lines = {"variety": v.value, "generators": gens, "degrees": {}}, []
    for n in range(1, args.max_degree + 1):
        words = [str(w) for w in enumerate_basis(v, gens, n, F)]
        out["degrees"][str(n)] = words
        lines.append(f"degree {n}: {len(words)}")
        if args.verbose:
            lines += [f"  {w}" for w in words]
    _emit(args, out, lines)


def cmd_cohomology(args):
    P = _load_algebra(args.algebra, args.field)
    R = _load_rep(P, args.rep)
    v = Variety.parse(args.variety)
    rows = cohomology_table(v, R, args.max_degree, verbose=args.verbose)
    head = rows[0]
    lines = [f"{head['variety']} over {head['field']}: dim P = {head['dim_P']}, "
             f"dim M = {head['dim_M']}, input {head['input_hash']}"]
    for r in rows[1:]:
        extra = f"  (standard sign: {r['h_dim_standard_sign']})" if "h_dim_standard_sign" in r else ""
        lines.append(f"  H^{r['n']}: {r['h_dim']:>5}   cochains {r['cochain_dim']:>6}   "
                     f"rank d {r['rank']:>6}{extra}")
    if "restricted_h2" in head:
        lines.append(f"  restricted H^2: {head['restricted_h2']}")
    args.jsonl = True
    _emit(args, rows, lines)


def _les_tags(args, P):
    if args.tag and args.tag != "all":
        if args.tag not in LES:
            raise ParseError(f"unknown tag {args.tag!r}; choose from {', '.join(LES)}")
        return [args.tag]
    tags = classify(P)
    return [t for t, s in LES.items() if SES[s].variety in tags]


def cmd_les(args):
    P = _load_algebra(args.algebra, args.field)
    R = _load_rep(P, args.rep)
    ctx = CochainContext(R)
    reports = [verify_les(t, R, args.max_degree, ctx) for t in _les_tags(args, P)]
    lines = []
    for r in reports:
        lines += r.lines()
    _emit(args, [r.to_json() for r in reports], lines)
    if not all(r.exact for r in reports):
        bad = [r.tag for r in reports if not r.exact]
        raise MathFailure(f"not exact: {', '.join(bad)}")


def cmd_extensions(args):
    P = _load_algebra(args.algebra, args.field)
    R = _load_rep(P, args.rep)
    v = Variety.parse(args.variety)
    res = enumerate_extensions(P, R, v)
    if v in NP:
        h, name = restricted_h2(v, R), "restricted H^2"
    else:
        h, name = cohomology_dims(build_complex(v, R, 2), 2)[2], "H^2"
    p = P.field.p
    res = dict(res, cohomology=name, h_dim=h, predicted=p ** h, agree=p ** h == res["classes"])
    res.pop("field", None)
    _emit(args, res, [f"{v.value}: {res['valid']} valid factor sets of {res['candidates']}, "
                      f"{res['classes']} classes; {name} = {h} predicts {p ** h}: "
                      f"{'agree' if res['agree'] else 'DISAGREE'}"])
    if not res["agree"]:
        raise MathFailure("extension count differs from cohomology")


def _report_one(job):
    variety, field, seed, N, cfg = job
    R = random_instance(variety, field, seed, cfg)
    v = Variety.parse(variety)
    ctx = CochainContext(R)
    c = build_complex(v, R, N, ctx)
    dims = cohomology_dims(c, N)
    row = {"variety": v.value, "field": field, "seed": seed, "dim_P": R.algebra.dim,
           "dim_M": R.module_dim, "tags": _tags(R.algebra), "h_dims": dims,
           "dd_zero": not c.check(), "der_dim": derivations(v, R).dim}
    row["h1_is_der"] = dims[1] == row["der_dim"]
    # only the maps of the variety's own diagram need to be chain maps
    row["chain_maps"] = {name: not chain_map_failures(ctx, name, N - 1)
                         for name in variety_maps(v)}
    row["alpha1_is_beta1"] = ctx.alpha(1) == ctx.beta(1) and ctx.alpha_prime(1) == ctx.beta_prime(1)
    if v in NP:
        row["restricted_h2"] = restricted_h2(v, R, ctx, check=False)
    row["ok"] = (row["dd_zero"] and row["h1_is_der"] and dims[0] == 0
                 and all(row["chain_maps"].values()) and row["alpha1_is_beta1"])
    return row


def cmd_report(args):
    varieties = [args.variety] if args.variety else SIX
    fields = [args.field] if args.field else ["Q", "F2"]
    cfg = SampleConfig(max_dim_P=args.max_dim_P, max_dim_M=args.max_dim_M)
    jobs = [(v, f, args.seed * 1000 + k, args.max_degree, cfg)
            for v in varieties for f in fields for k in range(args.samples)]
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as ex:
            rows = list(ex.map(_report_one, jobs))
    else:
        rows = [_report_one(j) for j in jobs]
    out = {"seed": args.seed, "samples": args.samples, "max_degree": args.max_degree,
           "rows": rows, "ok": all(r["ok"] for r in rows)}
    lines = [f"seed {args.seed}"]
    for r in rows:
        lines.append(f"{r['variety']:<6} {r['field']:<3} seed {r['seed']:<6} P{r['dim_P']} M{r['dim_M']} "
                     f"H {r['h_dims']} {'ok' if r['ok'] else 'FAILED'}")
    lines.append("all ok" if out["ok"] else "FAILED")
    _emit(args, out, lines)
    if not out["ok"]:
        raise MathFailure("report found failures")


# ---------------------------------------------------------------------------
# parser


def _field_arg(s):
    try:
        return FieldSpec.parse(s).name
    except (ValueError, ParseError) as exc:
        raise argparse.ArgumentTypeError(str(exc))


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--variety", choices=SIX, type=str.lower)
    common.add_argument("--max-degree", type=int, default=4)
    common.add_argument("--field", type=_field_arg, help="Q, F2, F3, ... (overrides the file)")
    common.add_argument("--format", choices=["text", "json"], default="text")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--verbose", action="store_true")

    ap = argparse.ArgumentParser(prog="npb", description="Noncommutative Poisson algebras and algebras with bracket.")
    ap.add_argument("--version", action="version", version=f"npb {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", parents=[common], help="print the varieties an algebra lies in")
    p.add_argument("algebra")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("check", parents=[common], help="check identities and action axioms")
    p.add_argument("algebra")
    p.add_argument("--rep")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("free", parents=[common], help="free-algebra bases and normal forms")
    p.add_argument("--generators", default="x,y")
    p.add_argument("--normalize", metavar="TERM")
    p.add_argument("--underlying", choices=["assoc", "leibniz"])
    p.add_argument("--witnesses", action="store_true")
    p.add_argument("--strict", action="store_true", help="exit 1 when the underlying check fails")
    p.set_defaults(func=cmd_free)

    for name, func, helptext in (("cohomology", cmd_cohomology, "cohomology dimension table"),
                                 ("extensions", cmd_extensions, "count abelian extensions"),
                                 ("les", cmd_les, "verify the long exact sequences")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("algebra")
        p.add_argument("--rep", help="representation file, 'regular' or 'zero:m'")
        if name == "les":
            p.add_argument("--tag", default="all", help="one of " + ", ".join(LES) + " or 'all'")
        p.set_defaults(func=func)

    p = sub.add_parser("report", parents=[common], help="randomized property report")
    p.add_argument("--samples", type=int, default=3)
    p.add_argument("--max-dim-P", type=int, default=2)
    p.add_argument("--max-dim-M", type=int, default=2)
    p.set_defaults(func=cmd_report)
    return ap


def run(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
        if args.command in ("cohomology", "extensions") and not args.variety:
            ap.error(f"{args.command} needs --variety")
        if args.max_degree < 0 or args.jobs < 1:
            ap.error("--max-degree must be >= 0 and --jobs >= 1")
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        args.func(args)
    except MathFailure as exc:
        print(f"npb: {exc}", file=sys.stderr)
        return 1
    except (VarietyMismatch, ActionAxiomsFail) as exc:
        print(f"npb: {exc}", file=sys.stderr)
        return 1
    except (ParseError, ShapeMismatch, GuardExceeded, RangeTooSmall, ValueError) as exc:
        print(f"npb: {exc}", file=sys.stderr)
        return 2
    except NPBError as exc:
        print(f"npb: {exc}", file=sys.stderr)
        return 1
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
