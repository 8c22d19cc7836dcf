"""Angular transmission maps for a graphene p-n-p barrier in device units.

Energies in eV, lengths in nm, v_F = 1e6 m/s.  The head-on column is
transparent for every energy; the width sweep shows the q1 L = n pi family.
"""

import argparse

import numpy as np

from weylbarrier.graphene import device_units, energy_map, width_map


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--E", type=float, default=0.08, help="Fermi energy [eV]")
    ap.add_argument("--V0", type=float, default=0.2, help="barrier height [eV]")
    ap.add_argument("--L", type=float, default=100.0, help="barrier width [nm]")
    ap.add_argument("--phi-steps", type=int, default=361)
    ap.add_argument("--out", default="graphene_map.svg")
    args = ap.parse_args(argv)

    c = device_units()["c"]
    phis = np.linspace(-1.5, 1.5, args.phi_steps)
    em = energy_map([args.E / 2, args.E, 1.5 * args.E], args.V0, args.L, phis, v_F=c)
    wm = width_map([args.L / 2, args.L, 2 * args.L], args.E, args.V0, phis, v_F=c)

    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, axes = plt.subplots(1, 2, figsize=(10, 4), sharey=True)
    for ax, m, unit in ((axes[0], em, "eV"), (axes[1], wm, "nm")):
        for i, a in enumerate(m.axis):
            ax.plot(np.degrees(phis), m.T[i], label=f"{m.axis_name} = {a:.3g} {unit}")
        ax.set_xlabel("incidence angle [deg]")
        ax.legend(fontsize="small")
    axes[0].set_ylabel("|t|^2")
    fig.tight_layout()
    fig.savefig(args.out, metadata={"Date": None})
    klein = int(np.sum(em.regime == "Klein"))
    print(f"wrote {args.out}; {klein} Klein-zone cells flagged formal in the energy map")


if __name__ == "__main__":
    main()
