"""Large-index trend study: how fast computed zone lengths approach the
closed-form limit.

For a fixed two-term potential the n-th zone length has an explicit
large-index form; the relative error of that prediction should decay like
log(n)/n.  This script sweeps n, prints the measured ratio table, the error
scaled by n/log(n) (which should flatten), and the least-squares slope of the
scaled error (which should be non-positive).

Run from the repository root:

    python scripts/gap_trend_study.py
    python scripts/gap_trend_study.py --alpha 0.4 --t 0.3 --n-lo 10 --n-hi 30
"""
import argparse
from dataclasses import dataclass

import gmpy2

from hillgap import mpx
from hillgap.asymptotics import least_squares_slope, ratio_report


@dataclass
class StudyConfig:
    alpha: str = "0.4"
    t: str = "0.3"
    n_lo: int = 10
    n_hi: int = 24
    n_step: int = 2
    precision_bits: int = 224
    method: str = "series"

    def n_values(self):
        return list(range(self.n_lo, self.n_hi + 1, self.n_step))


def run(cfg: StudyConfig) -> int:
    print("# coupling=%s shape=%s method=%s precision=%d bits"
          % (cfg.alpha, cfg.t, cfg.method, cfg.precision_bits))
    rep = ratio_report(cfg.t, cfg.n_values(), alpha=cfg.alpha,
                       method=cfg.method, precision_bits=cfg.precision_bits)
    print("%4s  %-14s %-14s %-12s %-12s" % ("n", "gamma", "predicted",
                                            "rel_error", "scaled"))
    ns = []
    scaled = []
    for r in rep.rows:
        if r.indeterminate:
            print("%4d  prediction vanished, row skipped" % r.n)
            continue
        ns.append(r.n)
        scaled.append(r.scaled_error)
        print("%4d  %-14s %-14s %-12s %-12s" % (
            r.n, mpx.sci(r.gamma, 8), mpx.sci(r.predicted, 8),
            mpx.sci(r.ratio_error, 6), mpx.sci(r.scaled_error, 6)))
    if len(ns) >= 2:
        with mpx.ctx(cfg.precision_bits):
            slope = least_squares_slope(ns, scaled)
            print("# scaled-error least-squares slope: %s" % mpx.sci(slope, 6))
            print("# max scaled error: %s"
                  % mpx.sci(max(scaled, key=lambda s: gmpy2.mpfr(s)), 6))
    return 0


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--alpha", default=StudyConfig.alpha)
    ap.add_argument("--t", default=StudyConfig.t)
    ap.add_argument("--n-lo", type=int, default=StudyConfig.n_lo)
    ap.add_argument("--n-hi", type=int, default=StudyConfig.n_hi)
    ap.add_argument("--n-step", type=int, default=StudyConfig.n_step)
    ap.add_argument("--precision-bits", type=int,
                    default=StudyConfig.precision_bits)
    ap.add_argument("--method", choices=("series", "matrix"),
                    default=StudyConfig.method)
    a = ap.parse_args()
    cfg = StudyConfig(a.alpha, a.t, a.n_lo, a.n_hi, a.n_step,
                      a.precision_bits, a.method)
    return run(cfg)


if __name__ == "__main__":
    raise SystemExit(main())
