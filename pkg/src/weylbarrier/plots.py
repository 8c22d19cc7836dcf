"""Static SVG figures; matplotlib is imported lazily so the core stays light."""

from __future__ import annotations

from collections import defaultdict


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    matplotlib.rcParams["svg.hashsalt"] = "weylbarrier"
    import matplotlib.pyplot as plt

    return plt


def _save(fig, path: str) -> None:
    fig.savefig(path, format="svg", metadata={"Date": None})


def plot_angular(rows: list[dict], axis_name: str, path: str) -> None:
    """|t|^2 against phi, one curve per value of the swept axis."""
    plt = _pyplot()
    curves = defaultdict(list)
    for rec in rows:
        if rec.get("T") is not None:
            curves[rec[axis_name]].append((rec["phi"], rec["T"]))
    fig, ax = plt.subplots(figsize=(6, 4))
    for key, pts in curves.items():
        pts.sort()
        ax.plot([p for p, _ in pts], [t for _, t in pts], label=f"{axis_name}={key:.4g}")
    ax.set_xlabel("phi [rad]")
    ax.set_ylabel("|t|^2")
    ax.set_ylim(0, 1.05)
    if 0 < len(curves) <= 10:
        ax.legend(fontsize="small")
    fig.tight_layout()
    _save(fig, path)
    plt.close(fig)


def plot_packet(states, path: str) -> None:
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(8, 4))
    for st in states:
        ax.plot(st.x, st.density, lw=0.8, label=f"t={st.t:.4g}")
    L = states[0].L
    ax.axvspan(0, L, color="0.85", zorder=0)
    ax.set_yscale("log")
    top = max(float(st.density.max()) for st in states)
    ax.set_ylim(top * 1e-6, top * 2)
    ax.set_xlabel("x")
    ax.set_ylabel("|psi|^2")
    ax.legend(fontsize="small")
    fig.tight_layout()
    _save(fig, path)
    plt.close(fig)
