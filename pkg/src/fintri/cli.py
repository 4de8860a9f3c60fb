"""Command line interface: ``fintri <command> ...``.

Exit codes: 0 when the answer is decided, 2 when a search ran out of budget,
1 on bad input.
"""
from __future__ import annotations

import argparse
import logging
import sys

from .algebra import is_selfinjective
from .catalog import CATALOG, build_named_example
from .hochschild import SelfCoefficients, TwistedFamily, cohomology_space, hh_dimensions_via_resolution
from .identities import verify_identities
from .lambda_sigma import build_lambda_sigma, cone_space, verify_les
from .modules import IsoSearchConfig, minimal_resolution, regular_bimodule, simple_module, direct_sum
from .specfile import SpecError, load_automorphism, load_spec
from .workbench import check_enhancement

log = logging.getLogger("fintri")


class _Out:
    def __init__(self, mode: str):
        self.mode = mode

    def emit(self, key, value, label=None):
        if self.mode == "machine":
            print(f"{key}={value}")
        else:
            print(f"{label or key}: {value}")


def _load(path):
    return load_spec(path)


def cmd_build(args, out):
    a, sigma = _load(args.file)
    out.emit("name", a.name)
    out.emit("field", a.field)
    out.emit("dim", a.dim, "dimension")
    out.emit("graded", str(a.is_graded).lower())
    out.emit("selfinjective", str(is_selfinjective(a)).lower(), "self-injective")
    out.emit("basis", " ".join(a.labels))
    if sigma is not None:
        for k, v in sigma.describe().items():
            out.emit(f"automorphism.{k}", v)
    return 0


def cmd_hh(args, out):
    a, _ = _load(args.file)
    if args.coefficients:
        sigma = load_automorphism(args.coefficients, a)
        coeff = TwistedFamily(a, sigma)
    else:
        coeff = SelfCoefficients(a)
    H = cohomology_space(coeff, args.n, args.q)
    out.emit(f"hh.{args.n}.{args.q}", H.dim, f"dim HH^({args.n},{args.q})")
    if not args.coefficients and not a.is_graded and args.q == 0:
        dims = hh_dimensions_via_resolution(regular_bimodule(a), args.n)
        out.emit("resolution_check", dims[args.n], "via minimal resolution")
    return 0


def cmd_resolve(args, out):
    a, _ = _load(args.file)
    if args.bimodule:
        m = regular_bimodule(a)
    else:
        m = direct_sum(*[simple_module(a, v) for v in range(a.n_vertices)])
    res = minimal_resolution(m, args.length)
    out.emit("module", "regular bimodule" if args.bimodule else "top of the regular module")
    for i in range(res.length + 1):
        out.emit(f"P{i}", res.projectives[i].dim, f"dim P_{i}")
    for i in range(1, len(res.syzygies)):
        out.emit(f"Omega{i}", res.syzygies[i].dim, f"dim Omega^{i}")
    out.emit("exact", str(res.is_exact()).lower())
    out.emit("minimal", str(res.is_minimal()).lower())
    return 0


def cmd_check(args, out):
    a, _ = _load(args.file)
    report = check_enhancement(a, IsoSearchConfig(budget=args.budget, seed=args.seed))
    if out.mode == "machine":
        for k, v in report.records().items():
            print(f"{k}={v}")
    else:
        print(report)
    return 0 if report.decided else 2


def cmd_lambda_sigma(args, out):
    a, _ = _load(args.file)
    sigma = load_automorphism(args.sigma, a)
    ls = build_lambda_sigma(a, sigma)
    cone = cone_space(ls, args.p, args.q)
    down = cohomology_space(ls.family, args.p, args.q)
    out.emit(f"hh_lambda_sigma.{args.p}.{args.q}", cone.dim, f"dim HH^({args.p},{args.q})(Lambda(sigma))")
    out.emit(f"hh_twisted.{args.p}.{args.q}", down.dim, f"dim HH^({args.p},{args.q})(Lambda, Lambda(sigma))")
    rep = verify_les(ls, max_p=args.p, max_q=abs(args.q))
    out.emit("les", rep.summary(), "long exact sequence")
    return 0 if rep.exact else 1


def cmd_verify(args, out):
    a, _ = _load(args.file)
    rep = verify_identities(a, trials=args.trials, seed=args.seed)
    for line in rep.lines():
        print(line)
    out.emit("all_passed", str(rep.ok).lower())
    return 0 if rep.ok else 1


def cmd_example(args, out):
    field = args.field
    if field is not None and field.upper() != "Q":
        field = int(field)
    a = build_named_example(args.name, args.params, field)
    out.emit("name", a.name)
    out.emit("field", a.field)
    out.emit("dim", a.dim, "dimension")
    out.emit("basis", " ".join(a.labels))
    if args.check:
        report = check_enhancement(a)
        if out.mode == "machine":
            for k, v in report.records().items():
                print(f"{k}={v}")
        else:
            print(report)
        return 0 if report.decided else 2
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fintri", description="Hochschild cohomology and enhancement checks for finite-dimensional algebras")
    ap.add_argument("--output", choices=["text", "machine"], default="text")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="build an algebra from a spec file")
    p.add_argument("file")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("hh", help="dimension of a Hochschild cohomology group")
    p.add_argument("file")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--q", type=int, default=0)
    p.add_argument("--coefficients", help="file with an automorphism sigma; uses Lambda(sigma) coefficients")
    p.set_defaults(func=cmd_hh)

    p = sub.add_parser("resolve", help="minimal projective resolution")
    p.add_argument("file")
    p.add_argument("--length", type=int, required=True)
    p.add_argument("--bimodule", action="store_true", help="resolve the regular bimodule")
    p.set_defaults(func=cmd_resolve)

    p = sub.add_parser("check-enhancement", help="run the enhancement criterion")
    p.add_argument("file")
    p.add_argument("--budget", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", choices=["text", "machine"], default=argparse.SUPPRESS)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("lambda-sigma", help="HH of Lambda(sigma) through the cone complex")
    p.add_argument("file")
    p.add_argument("--sigma", required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--q", type=int, default=0)
    p.set_defaults(func=cmd_lambda_sigma)

    p = sub.add_parser("verify-identities", help="randomized Gerstenhaber and Euler identity checks")
    p.add_argument("file")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("example", help="build a named example")
    p.add_argument("name", choices=sorted(CATALOG))
    p.add_argument("--params", nargs="*", default=[])
    p.add_argument("--field", default=None, help="prime p or Q")
    p.add_argument("--check", action="store_true", help="also run the enhancement criterion")
    p.set_defaults(func=cmd_example)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    out = _Out(args.output)
    try:
        return args.func(args, out)
    except (SpecError, ValueError, KeyError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
