"""Command-line driver.

Exit status: 0 all checks passed, 1 a hypothesis was refuted, 2 a search
budget or bound was exhausted, 3 the input could not be used.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import catalog, certifier
from .exactpoly import IntPoly
from .instance import InstanceError, parse_element_list, parse_instance, parse_subset_spec, resolve_subset
from .lawkit import PreconditionError, SearchExhausted, width
from .pcgroup import (
    InconsistentPresentation,
    derived_series,
    gamma,
    lower_central_series,
    power_subgroup,
)
from .words import Law, Word, WordSyntaxError

EXIT_INPUT = 3


class UsageError(Exception):
    pass


def load_instance(arg):
    """Instance from a file path or ``catalog:<name>``."""
    if arg.startswith("catalog:"):
        name = arg.split(":", 1)[1]
        try:
            text = catalog.source(name)
        except KeyError as exc:
            raise UsageError(exc.args[0]) from None
    else:
        try:
            with open(arg) as fh:
                text = fh.read()
        except OSError as exc:
            raise UsageError(f"cannot read {arg}: {exc.strerror}") from None
    return parse_instance(text)


def _semple_bounds(text):
    try:
        vals = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("expected i_max,deg_max,param_max") from None
    if len(vals) != 3 or min(vals) < 1:
        raise argparse.ArgumentTypeError("expected three positive integers i_max,deg_max,param_max")
    return vals


def _poly(text):
    try:
        coeffs = [int(x) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError("expected coefficients c0,c1,...,cd") from None
    return IntPoly(coeffs)


def _parse_normal(inst, text):
    G = inst.group()
    parts = text.split()
    kind = parts[0] if parts else ""
    if kind == "whole" and len(parts) == 1:
        return G.whole
    if kind == "trivial" and len(parts) == 1:
        return G.trivial
    if kind in ("power", "gamma", "derived") and len(parts) == 2 and parts[1].isdigit():
        k = int(parts[1])
        if kind == "power":
            return power_subgroup(G.whole, k)
        if kind == "gamma":
            if k < 1:
                raise UsageError("gamma index must be at least 1")
            return gamma(G.whole, k)
        series = derived_series(G.whole)
        return series[min(k, len(series) - 1)]
    return G.subgroup(parse_element_list(G, text))


def _subset(inst, args, budget):
    spec = parse_subset_spec(args.subset) if args.subset else inst.subset
    if spec is None:
        raise UsageError("no subset given (use --subset or a 'subset' line)")
    elements, sampled = resolve_subset(inst, spec, budget)
    return elements, sampled


def _law(inst, args, attr="law"):
    text = getattr(args, attr, None) or inst.law
    if text is None:
        raise UsageError("no law given (use --law or a 'law' line)")
    return Law.parse(text)


def _word(inst, args):
    text = args.word or inst.word
    if text is None:
        raise UsageError("no word given (use --word or a 'word' line)")
    return Word.parse(text)


def _budget(args):
    return certifier.default_budget() if args.budget is None else args.budget


def _emit(cert, args, out):
    for c in cert.checks:
        mark = {"pass": "PASS", "fail": "FAIL", "exhausted": "EXHAUSTED"}[c.verdict]
        line = f"{mark:9} {c.name}"
        if c.verdict != "pass" and c.witness is not None:
            line += f"  witness: {json.dumps(c.witness)}"
        print(line, file=out)
    for key in ("d", "m", "f", "derived_length", "black_k", "observed_class", "c", "e", "k",
                "class", "|G_w|", "|w(G)|", "width_G_w", "v", "observed_class_w(G)"):
        if key in cert.quantities:
            print(f"{key} = {cert.quantities[key]}", file=out)
    levels = cert.quantities.get("levels") or cert.quantities.get("w(G)", {}).get("levels", [])
    for lv in levels:
        keys = ("m", "h_factors", "c", "r", "q", "semple_k", "ell", "s", "n", "index")
        print(f"level {lv['level']}: " + ", ".join(f"{k}={lv[k]}" for k in keys if k in lv), file=out)
    for k, v in cert.flags.items():
        print(f"flag {k}: {v}", file=out)
    print(f"verdict: {cert.verdict}", file=out)
    if args.report:
        text = cert.to_json() + "\n"
        if args.report == "-":
            out.write(text)
        else:
            with open(args.report, "w") as fh:
                fh.write(text)
    return cert.exit_code


def _instance_record(inst, pipeline, extra=None):
    G = inst.group()
    rec = {"name": inst.name, "source": inst.emit(), "prime": G.prime, "order": G.order,
           "pipeline": pipeline}
    if extra:
        rec.update(extra)
    return rec


def _oracle(G, out):
    bad = G.consistency_check(exhaustive_cap=G.order)
    print("oracle: associativity on all triples " + ("ok" if bad is None else f"fails at {bad}"),
          file=out)
    if bad is not None:
        raise InconsistentPresentation("associativity fails", bad)


def cmd_certify_general(args, out):
    inst = load_instance(args.instance)
    G = inst.group()
    budget = _budget(args)
    if args.oracle:
        _oracle(G, out)
    T, sampled = _subset(inst, args, budget)
    law = _law(inst, args)
    v = Word.parse(args.v) if args.v else None
    sections = "full" if args.oracle else args.sections
    record = _instance_record(inst, "certify-general")
    if args.f is not None:
        record["f"] = args.f.to_list()
    cert = certifier.certify_general(G, T, law, v=v, budget=budget, semple_bounds=args.semple_bounds,
                                     sections=sections, levels=args.levels, f=args.f,
                                     instance=record)
    if sampled:
        cert.flags["subset_coverage"] = "sampled"
    if args.oracle:
        cert.flags["oracle"] = True
    return _emit(cert, args, out)


def cmd_certify_verbal(args, out):
    inst = load_instance(args.instance)
    G = inst.group()
    budget = _budget(args)
    if args.oracle:
        _oracle(G, out)
    sections = "full" if args.oracle else args.sections
    cert = certifier.certify_verbal(G, _word(inst, args), _law(inst, args), budget=budget,
                                    semple_bounds=args.semple_bounds, sections=sections,
                                    instance=_instance_record(inst, "certify-verbal"))
    return _emit(cert, args, out)


def cmd_hall(args, out):
    inst = load_instance(args.instance)
    N = _parse_normal(inst, args.normal)
    try:
        res = certifier.hall_check(inst.group(), N)
    except ValueError as exc:
        print(f"FAIL      N normal  {exc}", file=out)
        return 1
    print(f"k = {res['k']}\nc = {res['c']}\nclass = {res['class']}", file=out)
    if args.report:
        _write_json(args.report, {"instance": _instance_record(inst, "hall", {"normal": args.normal}),
                                  "quantities": res, "verdict": "passed"}, out)
    return 0


def cmd_nbf(args, out):
    inst = load_instance(args.instance)
    G = inst.group()
    N = _parse_normal(inst, args.normal)
    try:
        cert = certifier.nbf_powerful_check(G, N)
    except ValueError as exc:
        print(f"FAIL      N normal  {exc}", file=out)
        return 1
    cert.instance.update(_instance_record(inst, "nbf", {"normal": args.normal}))
    return _emit(cert, args, out)


def cmd_black(args, out):
    inst = load_instance(args.instance)
    v = Law.parse(args.law_word) if "=" in args.law_word else Word.parse(args.law_word)
    try:
        k = certifier.black_check(inst.group(), v, budget=_budget(args))
    except PreconditionError as exc:
        print(f"FAIL      {exc.check}  witness: {json.dumps(exc.witness)}", file=out)
        return 1
    print(f"k = {k}", file=out)
    if args.report:
        _write_json(args.report, {"instance": _instance_record(inst, "black", {"v": args.law_word}),
                                  "quantities": {"k": k}, "verdict": "passed"}, out)
    return 0


def cmd_width(args, out):
    inst = load_instance(args.instance)
    T, _ = _subset(inst, args, _budget(args))
    print(width(inst.group(), T), file=out)
    return 0


def cmd_catalog(args, out):
    if args.action == "list":
        for name in catalog.names():
            G = catalog.group(name)
            print(f"{name:8} p={G.prime} order={G.order} class={len(lower_central_series(G.whole)) - 1}",
                  file=out)
        return 0
    if not args.name:
        raise UsageError("catalog show needs a group name")
    try:
        out.write(catalog.source(args.name))
    except KeyError as exc:
        raise UsageError(exc.args[0]) from None
    return 0


def cmd_replay(args, out):
    try:
        with open(args.report_file) as fh:
            report = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read report: {exc}") from None
    new = certifier.replay(report)
    same = json.dumps(new, sort_keys=True) == json.dumps(report, sort_keys=True)
    print("replay: " + ("identical" if same else "differs"), file=out)
    print(f"verdict: {new['verdict']}", file=out)
    return certifier.EXIT_CODES[new["verdict"]] if same else 1


def _write_json(path, data, out):
    text = json.dumps(data, indent=2) + "\n"
    if path == "-":
        out.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--report", metavar="PATH", help="write the JSON report ('-' for stdout)")
    common.add_argument("--budget", type=int, help="tuples tested before sampling")
    common.add_argument("--semple-bounds", type=_semple_bounds, default=certifier.DEFAULT_SEMPLE_BOUNDS,
                        metavar="I,D,P", help="i_max,deg_max,param_max (default 8,32,8)")
    common.add_argument("--oracle", action="store_true",
                        help="full enumeration cross-checks (all triples, all sections)")
    common.add_argument("--sections", choices=("standard", "full"), default="standard")

    parser = argparse.ArgumentParser(prog="nilcert", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("certify-general", parents=[common], help="run the general pipeline")
    p.add_argument("instance", help="instance file or catalog:<name>")
    p.add_argument("--subset", help='e.g. "conj-closure a,b" or "a, b*c"')
    p.add_argument("--law", help='positive law, e.g. "x1 x2 = x2 x1"')
    p.add_argument("--v", help="optional law word v, checked as v = 1 on G")
    p.add_argument("--levels", type=int, help="run exactly this many induction levels")
    p.add_argument("--f", type=_poly, metavar="C0,C1,...", help="use this annihilator instead of deriving it")
    p.set_defaults(func=cmd_certify_general)

    p = sub.add_parser("certify-verbal", parents=[common], help="run the verbal pipeline")
    p.add_argument("instance")
    p.add_argument("--word")
    p.add_argument("--law")
    p.set_defaults(func=cmd_certify_verbal)

    for name, func in (("hall", cmd_hall), ("nbf", cmd_nbf)):
        p = sub.add_parser(name, parents=[common])
        p.add_argument("instance")
        p.add_argument("--normal", required=True,
                       help="power K | gamma K | derived K | whole | trivial | element list")
        p.set_defaults(func=func)

    p = sub.add_parser("black", parents=[common])
    p.add_argument("instance")
    p.add_argument("--law-word", required=True, help="v, meaning v = 1 (or a law a = b)")
    p.set_defaults(func=cmd_black)

    p = sub.add_parser("width", parents=[common])
    p.add_argument("instance")
    p.add_argument("--subset")
    p.set_defaults(func=cmd_width)

    p = sub.add_parser("catalog")
    p.add_argument("action", choices=("list", "show"))
    p.add_argument("name", nargs="?")
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("replay", help="re-run a JSON report and compare")
    p.add_argument("report_file")
    p.set_defaults(func=cmd_replay)
    return parser


def run(argv=None, out=None):
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else EXIT_INPUT
    try:
        return args.func(args, out)
    except (InstanceError, WordSyntaxError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except InconsistentPresentation as exc:
        print(f"error: inconsistent presentation: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except SearchExhausted as exc:
        print(f"exhausted: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
