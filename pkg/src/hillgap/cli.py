"""Command-line front end.

Reports go to stdout (CSV by default, JSON with --format json), a one-line
JSON echo of the effective configuration goes to stderr, and failures exit
with code 1 for bad arguments or 2 for computation errors (with a JSON error
object on stderr).
"""
import argparse
import json
import os
import sys
from dataclasses import dataclass

import gmpy2

from . import mpx
from .asymptotics import (predict_alpha_to_zero, predict_coeff_form,
                          predict_n_to_infty, ratio_report)
from .errors import HillgapError
from .exactcomb import identity_sides, p_polynomial_exact, p_polynomial_general
from .gapseries import gap_series
from .potential import TwoTermParams, from_coeff_pair, from_two_term, mathieu
from .qes import closed_gap_scan
from .spectrum import slices_to_csv, spectrum_slices


@dataclass
class RunConfig:
    """Validated global knobs shared by every subcommand."""
    precision_bits: int = 128
    rel_tol: str = "1e-9"
    output_format: str = "csv"

    def __post_init__(self):
        if self.precision_bits < 64:
            raise ValueError("precision_bits must be at least 64")
        rt = float(self.rel_tol)
        if not 0 < rt <= 0.1:
            raise ValueError("rel_tol must lie in (0, 0.1]")
        if self.output_format not in ("csv", "json"):
            raise ValueError("output_format must be csv or json")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print("%s: error: %s" % (self.prog, message), file=sys.stderr)
        raise SystemExit(1)


def _build_parser():
    common = _Parser(add_help=False)
    common.add_argument("--precision-bits", type=int,
                        default=int(os.environ.get("HILLGAP_PRECISION", "128")))
    common.add_argument("--rel-tol", default="1e-9")
    common.add_argument("--format", choices=("csv", "json"), default="csv")

    p = _Parser(prog="hillgap", description=__doc__.splitlines()[0],
                parents=[common])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("gaps", parents=[common],
                       help="instability-zone table for one potential")
    pot = g.add_mutually_exclusive_group(required=True)
    pot.add_argument("--zero", action="store_true")
    pot.add_argument("--mathieu", metavar="A")
    pot.add_argument("--two-term", nargs=2, metavar=("ALPHA", "T"))
    g.add_argument("--nmax", type=int, default=8)
    g.add_argument("--method", choices=("matrix", "series", "both"),
                   default="matrix")

    pr = sub.add_parser("predict", parents=[common],
                        help="closed-form zone-length predictions")
    pr.add_argument("--regime", choices=("alpha_to_zero", "n_to_infty",
                                         "coeff_form"), default="alpha_to_zero")
    pr.add_argument("--alpha")
    pr.add_argument("--t")
    pr.add_argument("--a1")
    pr.add_argument("--a2")
    pr.add_argument("--nmax", type=int, default=8)

    ra = sub.add_parser("ratio", parents=[common],
                        help="computed/predicted ratio diagnostics")
    ra.add_argument("--t", required=True)
    mode = ra.add_mutually_exclusive_group(required=True)
    mode.add_argument("--alpha")
    mode.add_argument("--alpha-ladder", help="comma-separated couplings")
    ra.add_argument("--n-values", required=True,
                    help="comma list or LO:HI inclusive range")
    ra.add_argument("--method", choices=("matrix", "series"), default="matrix")

    po = sub.add_parser("poly", parents=[common],
                        help="exact leading gap polynomial as JSON")
    po.add_argument("--n", type=int, required=True)
    po.add_argument("--k-max", type=int,
                    help="general weights with this maximum half step")

    idp = sub.add_parser("identity", parents=[common],
                         help="exact index-identity certificates")
    fam = idp.add_mutually_exclusive_group(required=True)
    fam.add_argument("--even", action="store_true")
    fam.add_argument("--odd", action="store_true")
    idp.add_argument("--m", type=int, required=True)
    idp.add_argument("--k", type=int, help="single selection size (default all)")

    q = sub.add_parser("qes", parents=[common],
                       help="closed-zone scan at one parameter point")
    q.add_argument("--alpha", required=True)
    q.add_argument("--t", required=True)
    q.add_argument("--nmax", type=int, default=10)
    q.add_argument("--tol")
    q.add_argument("--method", choices=("matrix", "series"), default="matrix")

    return p


def _parse_n_values(text):
    if ":" in text:
        lo, hi = text.split(":", 1)
        return list(range(int(lo), int(hi) + 1))
    return [int(x) for x in text.split(",") if x.strip()]


def _csv_to_json(text):
    """Rows of the first CSV block as a JSON object {"rows": [...]}."""
    blocks = text.strip().split("\n\n")
    out = {}
    for bi, block in enumerate(blocks):
        lines = block.strip().splitlines()
        header = lines[0].split(",")
        rows = [dict(zip(header, line.split(","))) for line in lines[1:]]
        out["rows" if bi == 0 else "rows_%d" % bi] = rows
    return json.dumps(out, indent=2)


def _emit(cfg, csv_text):
    if cfg.output_format == "json":
        print(_csv_to_json(csv_text))
    else:
        sys.stdout.write(csv_text)


def _potential_from_args(args, bits):
    if args.zero:
        return from_coeff_pair(0, 0, bits)
    if args.mathieu is not None:
        return mathieu(args.mathieu, bits)
    a, t = args.two_term
    return from_two_term(TwoTermParams(a, t, precision_bits=bits))


def _cmd_gaps(args, cfg):
    v = _potential_from_args(args, cfg.precision_bits)
    if args.method in ("matrix", "both"):
        mslices = spectrum_slices(v, args.nmax, cfg.rel_tol,
                                  precision_bits=cfg.precision_bits)
    if args.method in ("series", "both"):
        sslices = [gap_series(v, n) for n in range(1, args.nmax + 1)]
    if args.method == "matrix":
        _emit(cfg, slices_to_csv(mslices))
    elif args.method == "series":
        _emit(cfg, slices_to_csv(sslices))
    else:
        nd = mpx.digits_for(cfg.precision_bits)
        lines = ["n,gamma_matrix,gamma_series,rel_diff"]
        with mpx.ctx(cfg.precision_bits):
            for ms, ss in zip(mslices, sslices):
                denom = max(abs(ms.gamma), gmpy2.mpfr(2) ** (-(cfg.precision_bits - 16)))
                rel = abs(ms.gamma - ss.gamma) / denom
                lines.append("%d,%s,%s,%s" % (ms.n, mpx.sci(ms.gamma, nd),
                                              mpx.sci(ss.gamma, nd),
                                              mpx.sci(rel, 8)))
        _emit(cfg, "\n".join(lines) + "\n")


def _cmd_predict(args, cfg, parser):
    bits = cfg.precision_bits
    rows = []
    if args.regime == "coeff_form":
        if args.a1 is None or args.a2 is None:
            parser.error("coeff_form needs --a1 and --a2")
        for n in range(1, args.nmax + 1):
            rows.append((n, predict_coeff_form(args.a1, args.a2, n, bits)))
    else:
        if args.alpha is None or args.t is None:
            parser.error("this regime needs --alpha and --t")
        fn = (predict_alpha_to_zero if args.regime == "alpha_to_zero"
              else predict_n_to_infty)
        start = 1 if args.regime == "alpha_to_zero" else 3
        for n in range(start, args.nmax + 1):
            rows.append((n, fn(args.alpha, args.t, n, bits)))
    nd = mpx.digits_for(bits)
    lines = ["n,regime,predicted"]
    for n, pred in rows:
        lines.append("%d,%s,%s" % (n, pred.regime, mpx.sci(pred.value, nd)))
    _emit(cfg, "\n".join(lines) + "\n")


def _cmd_ratio(args, cfg):
    n_values = _parse_n_values(args.n_values)
    kw = dict(method=args.method, precision_bits=cfg.precision_bits,
              rel_tol=cfg.rel_tol)
    if args.alpha_ladder is not None:
        ladder = [x for x in args.alpha_ladder.split(",") if x.strip()]
        rep = ratio_report(args.t, n_values, alpha_ladder=ladder, **kw)
    else:
        rep = ratio_report(args.t, n_values, alpha=args.alpha, **kw)
    _emit(cfg, rep.to_csv())


def _cmd_poly(args, cfg):
    if args.k_max is not None:
        poly = p_polynomial_general(args.n, args.k_max)
    else:
        poly = p_polynomial_exact(args.n)
    print(poly.to_json())


def _cmd_identity(args, cfg):
    parity = "even" if args.even else "odd"
    m = args.m
    if args.k is not None:
        ks = [args.k]
    else:
        ks = list(range(1, (m if parity == "even" else m - 1) + 1))
    lines = ["m,k,parity,lhs,rhs,equal"]
    for k in ks:
        lhs, rhs = identity_sides(m, k, parity)
        lines.append("%d,%d,%s,%d,%d,%s" % (m, k, parity, lhs, rhs,
                                            str(lhs == rhs).lower()))
    _emit(cfg, "\n".join(lines) + "\n")


def _cmd_qes(args, cfg):
    rep = closed_gap_scan(args.alpha, args.t, args.nmax, tol=args.tol,
                          precision_bits=cfg.precision_bits,
                          method=args.method)
    _emit(cfg, rep.to_csv())


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = RunConfig(args.precision_bits, args.rel_tol, args.format)
    except ValueError as e:
        parser.error(str(e))
    print(json.dumps({"precision_bits": cfg.precision_bits,
                      "rel_tol": cfg.rel_tol,
                      "format": cfg.output_format,
                      "command": args.command}), file=sys.stderr)
    try:
        if args.command == "gaps":
            _cmd_gaps(args, cfg)
        elif args.command == "predict":
            _cmd_predict(args, cfg, parser)
        elif args.command == "ratio":
            _cmd_ratio(args, cfg)
        elif args.command == "poly":
            _cmd_poly(args, cfg)
        elif args.command == "identity":
            _cmd_identity(args, cfg)
        elif args.command == "qes":
            _cmd_qes(args, cfg)
    except HillgapError as e:
        print(json.dumps({"error": type(e).__name__, "message": str(e)}),
              file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
