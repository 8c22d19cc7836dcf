"""Transmitted norm of a Gaussian packet against barrier width.

Prints one CSV row per width and, with --plot, draws P_T(L) between the
plane-wave value |t(E0)|^2 and the sum-of-squares limit.
"""

import argparse
import csv
import sys
import time

import numpy as np

from weylbarrier.wavepacket import WavePacketSpec, coherence_crossover, sigma_for_width


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--E0", type=float, default=3.0)
    ap.add_argument("--V0", type=float, default=2.0)
    ap.add_argument("--p2", type=float, default=0.7)
    ap.add_argument("--width", type=float, default=10.0, help="rms width of the packet density")
    ap.add_argument("--points", type=int, default=13)
    ap.add_argument("--min-ratio", type=float, default=0.05)
    ap.add_argument("--max-ratio", type=float, default=12.0)
    ap.add_argument("--method", choices=["grid", "spectral"], default="grid")
    ap.add_argument("--plot", default=None)
    args = ap.parse_args(argv)

    spec = WavePacketSpec(args.E0, sigma_for_width(args.width, args.E0, args.p2), args.p2)
    ratios = np.geomspace(args.min_ratio, args.max_ratio, args.points)
    t0 = time.perf_counter()
    rows = coherence_crossover(spec, args.V0, ratios * args.width, method=args.method)
    elapsed = time.perf_counter() - t0

    out = csv.writer(sys.stdout, lineterminator="\n")
    out.writerow(["L", "L_over_width", "P_T", "T_coherent", "T_incoherent"])
    for r in rows:
        out.writerow([f"{v:.10g}" for v in (r.L, r.L_over_width, r.P_T, r.T_coherent, r.T_incoherent)])
    print(f"# {len(rows)} widths in {elapsed:.1f}s", file=sys.stderr)

    if args.plot:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt

        fig, ax = plt.subplots(figsize=(6, 4))
        x = [r.L_over_width for r in rows]
        ax.semilogx(x, [r.P_T for r in rows], "o-", label="packet P_T")
        ax.semilogx(x, [r.T_coherent for r in rows], "--", label="|t(E0)|^2")
        ax.axhline(rows[0].T_incoherent, color="k", lw=0.8, label="incoherent limit")
        ax.set_xlabel("L / packet width")
        ax.set_ylabel("transmission")
        ax.legend()
        fig.tight_layout()
        fig.savefig(args.plot, metadata={"Date": None})


if __name__ == "__main__":
    main()
