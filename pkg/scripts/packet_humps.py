"""Separate transmitted packets behind a wide barrier.

Evolves the first few terms of the multiple-reflection series and lists
each transmitted hump with its norm; consecutive norms fall by |loop|^2.
"""

import argparse

from weylbarrier.barrier import BarrierConfig, loop_factor
from weylbarrier.kinematics import Kinematics
from weylbarrier.plots import plot_packet
from weylbarrier.wavepacket import (
    WavePacketSpec,
    evolve,
    late_spec,
    settle_time,
    sigma_for_width,
    transmitted_humps,
)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--E0", type=float, default=3.0)
    ap.add_argument("--V0", type=float, default=2.0)
    ap.add_argument("--p2", type=float, default=0.7)
    ap.add_argument("--width", type=float, default=10.0)
    ap.add_argument("--L-over-width", type=float, default=10.0)
    ap.add_argument("--n-terms", type=int, default=3)
    ap.add_argument("--plot", default=None)
    args = ap.parse_args(argv)

    spec = WavePacketSpec(args.E0, sigma_for_width(args.width, args.E0, args.p2), args.p2)
    cfg = BarrierConfig(Kinematics(args.E0, args.V0, args.p2), args.L_over_width * args.width)
    loop2 = abs(loop_factor(cfg)) ** 2
    t = settle_time(spec, cfg)
    grid = late_spec(spec, cfg, t)
    state = evolve(grid, cfg, t, mode="per_term", n_terms=args.n_terms)
    humps = sorted(transmitted_humps(state), key=lambda h: -h.center)
    print(f"t = {t:.1f}, |loop|^2 = {loop2:.5g}")
    prev = None
    for k, h in enumerate(humps):
        ratio = "" if prev is None else f"  ratio {h.norm / prev:.5g}"
        print(f"hump {k}: center {h.center:9.2f}  norm {h.norm:.5g}{ratio}")
        prev = h.norm
    if args.plot:
        plot_packet([evolve(grid, cfg, 0.0, mode="per_term", n_terms=args.n_terms), state], args.plot)


if __name__ == "__main__":
    main()
