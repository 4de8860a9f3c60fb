#!/usr/bin/env python3
"""Enhancement verdicts and small Hochschild tables for the catalogued examples.

    python3 scripts/survey.py [--field P] [--with-d4]
"""
import argparse
import time

from fintri.catalog import d4_deformed_preprojective, dual_numbers, nakayama, product_field, truncated_poly
from fintri.hochschild import cohomology_space, self_coefficients
from fintri.workbench import check_enhancement


def examples(p, with_d4):
    yield dual_numbers(p)
    yield truncated_poly(3, field=p)
    for m, n in [(1, 1), (2, 1), (3, 1), (1, 2), (2, 2), (3, 3)]:
        yield nakayama(m, n, field=p)
    for n in (1, 2, 3):
        yield product_field(n, field=p)
    if with_d4:
        yield d4_deformed_preprojective(2)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--field", type=int, default=3)
    ap.add_argument("--with-d4", action="store_true")
    ap.add_argument("--hh", type=int, default=3, help="print dim HH^n for n up to this value")
    args = ap.parse_args()
    print(f"{'algebra':<26}{'dim':>5}{'Omega3':>8}  {'verdict':<8} {'sigma':<30} HH^0..")
    for a in examples(args.field, args.with_d4):
        t = time.perf_counter()
        r = check_enhancement(a)
        sigma = "" if r.sigma is None else ", ".join(f"{k}->{v}" for k, v in r.sigma.describe().items()) or "id"
        hh = ""
        if a.dim <= 8:
            C = self_coefficients(a)
            hh = " ".join(str(cohomology_space(C, n, 0).dim) for n in range(args.hh + 1))
        label = f"{a.name}/{a.field}"
        om = "" if r.omega3_dim is None else str(r.omega3_dim)
        print(f"{label:<26}{a.dim:>5}{om:>8}  {r.verdict.value:<8} {sigma:<30} {hh}  ({time.perf_counter() - t:.1f}s)")


if __name__ == "__main__":
    main()
