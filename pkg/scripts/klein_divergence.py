"""Bounce-by-bounce growth of the multiple-reflection series in the Klein zone.

Contrasts the divergent partial sums with the bounded linear-system result
for the same configuration.
"""

import argparse

from weylbarrier.barrier import BarrierConfig, klein_report, matrix_solve, series_expand
from weylbarrier.kinematics import Kinematics


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--E", type=float, default=1.0)
    ap.add_argument("--V0", type=float, default=3.0)
    ap.add_argument("--p2", type=float, default=0.5)
    ap.add_argument("--L", type=float, default=1.0)
    ap.add_argument("--bounces", type=int, default=10)
    args = ap.parse_args(argv)

    cfg = BarrierConfig(Kinematics(args.E, args.V0, args.p2), args.L)
    rep = klein_report(cfg, args.bounces)
    ser = series_expand(cfg, max_terms=args.bounces + 1)
    mx = matrix_solve(cfg)
    print(f"|loop| = {rep.loop_magnitude:.6g}, bounce period = {rep.bounce_period:.6g}")
    print(f"linear system: |t|^2 = {mx.T:.6g}, |r|^2 = {mx.R:.6g}")
    print(f"{'s':>3} {'time':>10} {'|term|':>12} {'|partial t|^2':>14} {'hole proxy':>12}")
    for s, (t, g, h) in enumerate(zip(rep.times, rep.per_bounce_growth, rep.hole_count_proxy)):
        print(f"{s:3d} {t:10.4f} {g:12.5g} {abs(ser.partial_sums_t[s]) ** 2:14.5g} {h:12.5g}")


if __name__ == "__main__":
    main()
