"""Command-line front end.

Subcommands: step, barrier, series, klein-report, resonances, packet, graphene.
Every subcommand accepts --units, --format, --out, --threads and --config;
``--sweep NAME:START:STOP:STEPS`` scans one parameter.
"""

from __future__ import annotations

import argparse
import math
import sys
from contextlib import contextmanager
from dataclasses import replace

from . import barrier as bar
from . import graphene as gr
from . import wavepacket as wp
from .errors import WeylError
from .kinematics import Kinematics, classify_regime
from .output import RecordWriter, ordered_map, parse_sweep, read_config
from .steps import alpha_factor, step1, step_reflection_probability

SWEEPABLE = ("E", "V0", "L", "phi", "p2")


def _units(ns) -> tuple[float, float]:
    if ns.units == "device":
        u = gr.device_units()
        c, hbar = u["c"], u["hbar"]
    else:
        c, hbar = 1.0, 1.0
    if ns.c is not None:
        c = ns.c
    if ns.hbar is not None:
        hbar = ns.hbar
    return c, hbar


def _kin(p: dict, c: float, hbar: float) -> Kinematics:
    p2, p3 = p["p2"], p["p3"]
    if p.get("phi") is not None:
        p2, p3 = p["E"] / c * math.sin(p["phi"]), 0.0
    return Kinematics(p["E"], p["V0"], p2, p3, c, hbar)


def _points(ns) -> list[dict]:
    base = {k: getattr(ns, k, None) for k in ("E", "V0", "p2", "p3", "phi", "L")}
    if not getattr(ns, "sweep", None):
        return [base]
    name, values = ns.sweep
    return [{**base, name: v} for v in values]


def _echo(kin: Kinematics) -> dict:
    return {"E": kin.E, "V0": kin.V0, "p2": kin.p2, "p3": kin.p3, "c": kin.c, "hbar": kin.hbar}


def _raw_echo(p: dict, c: float, hbar: float) -> dict:
    return {"E": p["E"], "V0": p["V0"], "p2": p["p2"], "p3": p["p3"], "c": c, "hbar": hbar}


# step ---------------------------------------------------------------------

def step_record(p: dict, c: float, hbar: float) -> dict:
    try:
        kin = _kin(p, c, hbar)
    except (WeylError, ValueError) as exc:
        return {**_raw_echo(p, c, hbar), "error": str(exc)}
    rec = {**_echo(kin), "regime": str(classify_regime(kin))}
    try:
        rec["R0"] = step_reflection_probability(kin)
        af = alpha_factor(kin)
        s = step1(kin, af)
    except (WeylError, ValueError) as exc:
        rec["error"] = str(exc)
        return rec
    rec.update(re_alpha=af.alpha.real, im_alpha=af.alpha.imag, N=af.N,
               re_r0=s.r.real, im_r0=s.r.imag, re_t0=s.t.real, im_t0=s.t.imag)
    return rec


def run_step(ns, writer: RecordWriter) -> int:
    c, hbar = _units(ns)
    recs = ordered_map(lambda p: step_record(p, c, hbar), _points(ns), ns.threads)
    return writer.write_all(recs)


# barrier ------------------------------------------------------------------

def barrier_record(p: dict, c: float, hbar: float, method: str, formal: bool,
                   max_terms: int, tol: float) -> dict:
    try:
        cfg = bar.BarrierConfig(_kin(p, c, hbar), p["L"])
    except (WeylError, ValueError) as exc:
        return {**_raw_echo(p, c, hbar), "L": p["L"], "method": method, "error": str(exc)}
    kin = cfg.kin
    rec = {**_echo(kin), "L": cfg.L, "regime": str(cfg.regime), "method": method, "formal": False}
    wanted = ("closed", "series", "matrix") if method == "all" else (method,)
    results = {}
    errors = []
    for m in wanted:
        try:
            if m == "closed":
                res = bar.closed_form(cfg, formal=formal)
                rec["formal"] = res.formal
            elif m == "matrix":
                res = bar.matrix_solve(cfg)
                rec["cond"] = res.cond
            else:
                ser = bar.series_expand(cfg, max_terms, tol)
                rec.update(loop_mag=abs(ser.loop_factor), convergent=ser.convergent,
                           truncation_index=ser.truncation_index)
                if not ser.convergent:
                    continue
                res = ser.result()
        except (WeylError, ValueError) as exc:
            errors.append(f"{m}: {exc}")
            continue
        results[m] = res
        rec.update({f"re_t_{m}": res.t.real, f"im_t_{m}": res.t.imag,
                    f"re_r_{m}": res.r.real, f"im_r_{m}": res.r.imag})
    if "loop_mag" not in rec:
        try:
            rec["loop_mag"] = abs(bar.loop_factor(cfg))
        except (WeylError, ValueError):
            pass
    if results:
        first = next(iter(results.values()))
        rec["T"], rec["R"] = first.T, first.R
    if len(results) > 1:
        vals = list(results.values())
        rec["max_delta"] = max(max(abs(a.t - b.t), abs(a.r - b.r))
                               for i, a in enumerate(vals) for b in vals[i + 1:])
    if errors:
        rec["error"] = "; ".join(errors)
    return rec


def run_barrier(ns, writer: RecordWriter) -> int:
    c, hbar = _units(ns)
    recs = ordered_map(lambda p: barrier_record(p, c, hbar, ns.method, ns.formal, ns.max_terms, ns.tol),
                       _points(ns), ns.threads)
    return writer.write_all(recs)


# series -------------------------------------------------------------------

def run_series(ns, writer: RecordWriter) -> int:
    c, hbar = _units(ns)
    p = _points(ns)[0]
    try:
        cfg = bar.BarrierConfig(_kin(p, c, hbar), p["L"])
        ser = bar.series_expand(cfg, ns.max_terms, ns.tol)
    except (WeylError, ValueError) as exc:
        writer.write({**_raw_echo(p, c, hbar), "L": p["L"], "error": str(exc)})
        return writer.count
    head = {**_echo(cfg.kin), "L": cfg.L, "regime": str(cfg.regime),
            "loop_mag": abs(ser.loop_factor), "convergent": ser.convergent}
    for s, (tt, pt) in enumerate(zip(ser.terms_t, ser.partial_sums_t)):
        tr, pr = ser.terms_r[s + 1], ser.partial_sums_r[s + 1]
        writer.write({**head, "s": s, "re_term_t": tt.real, "im_term_t": tt.imag,
                      "re_partial_t": pt.real, "im_partial_t": pt.imag,
                      "re_term_r": tr.real, "im_term_r": tr.imag,
                      "re_partial_r": pr.real, "im_partial_r": pr.imag})
    return writer.count


# klein-report -------------------------------------------------------------

def run_klein(ns, writer: RecordWriter) -> int:
    c, hbar = _units(ns)
    p = _points(ns)[0]
    try:
        cfg = bar.BarrierConfig(_kin(p, c, hbar), p["L"])
        rep = bar.klein_report(cfg, ns.bounces)
    except (WeylError, ValueError) as exc:
        writer.write({**_raw_echo(p, c, hbar), "L": p["L"], "error": str(exc)})
        return writer.count
    for s, (g, h, t) in enumerate(zip(rep.per_bounce_growth, rep.hole_count_proxy, rep.times)):
        writer.write({**_echo(cfg.kin), "L": cfg.L, "s": s, "time": t, "per_bounce_growth": g,
                      "hole_count_proxy": h, "loop_mag": rep.loop_magnitude,
                      "bounce_period": rep.bounce_period})
    return writer.count


# resonances ---------------------------------------------------------------

def run_resonances(ns, writer: RecordWriter) -> int:
    c, hbar = _units(ns)
    echo = {"E": None, "V0": ns.V0, "p2": ns.p2, "p3": ns.p3, "c": c, "hbar": hbar, "L": ns.L}
    try:
        scan = bar.find_resonances(ns.E_min, ns.E_max, ns.V0, ns.L, ns.p2, ns.p3, c, hbar)
    except (WeylError, ValueError) as exc:
        writer.write({**echo, "error": str(exc)})
        return writer.count
    for n, E in zip(scan.orders, scan.energies):
        kin = Kinematics(E, ns.V0, ns.p2, ns.p3, c, hbar)
        T = bar.closed_form(bar.BarrierConfig(kin, ns.L)).T
        writer.write({**echo, "E": E, "n": n, "E_res": E, "T": T, "head_on": scan.head_on})
    if not scan.energies:
        writer.write({**echo, "head_on": scan.head_on})
    return writer.count


# packet -------------------------------------------------------------------

def _packet_spec(ns, c: float, hbar: float) -> wp.WavePacketSpec:
    if ns.sigma_E is not None:
        sigma = ns.sigma_E
    else:
        sigma = wp.sigma_for_width(ns.width, ns.E0, ns.p2, ns.p3, c, hbar)
    probe = wp.WavePacketSpec(ns.E0, sigma, ns.p2, ns.p3, n_E=ns.n_E)
    width = wp.spatial_width(probe, c, hbar)
    x0 = -6.0 * width
    return replace(probe, x0=x0, x_min=x0 - 8 * width, x_max=8 * width)


def packet_record(spec: wp.WavePacketSpec, V0: float, L: float, c: float, hbar: float, method: str) -> dict:
    width = wp.spatial_width(spec, c, hbar)
    rec = {"E0": spec.E0, "sigma_E": spec.sigma_E, "V0": V0, "p2": spec.p2, "p3": spec.p3,
           "c": c, "hbar": hbar, "L": L, "width": width, "L_over_width": L / width, "method": method}
    try:
        row = wp.coherence_crossover(spec, V0, [L], c, hbar, method=method)[0]
    except (WeylError, ValueError) as exc:
        rec["error"] = str(exc)
        return rec
    rec.update(P_T=row.P_T, T_coherent=row.T_coherent, T_incoherent=row.T_incoherent,
               rel_dev_coherent=abs(row.P_T - row.T_coherent) / row.T_coherent,
               rel_dev_incoherent=abs(row.P_T - row.T_incoherent) / row.T_incoherent)
    return rec


def run_packet(ns, writer: RecordWriter) -> int:
    c, hbar = _units(ns)
    try:
        spec = _packet_spec(ns, c, hbar)
    except (WeylError, ValueError) as exc:
        writer.write({"E0": ns.E0, "V0": ns.V0, "p2": ns.p2, "p3": ns.p3, "c": c, "hbar": hbar,
                      "error": str(exc)})
        return writer.count
    width = wp.spatial_width(spec, c, hbar)
    if ns.sweep:
        name, values = ns.sweep
        if name != "L":
            raise SystemExit("packet only sweeps L")
        widths = values
    elif ns.L is not None:
        widths = [ns.L]
    else:
        widths = [ns.L_over_width * width]
    recs = ordered_map(lambda L: packet_record(spec, ns.V0, L, c, hbar, ns.method), widths, ns.threads)
    writer.write_all(recs)
    if ns.frames:
        _write_frames(ns, spec, widths[0], c, hbar)
    return writer.count


def _write_frames(ns, spec, L, c, hbar) -> None:
    cfg = bar.BarrierConfig(Kinematics(spec.E0, ns.V0, spec.p2, spec.p3, c, hbar), L)
    times = [float(t) for t in ns.times.split(",")] if ns.times else [0.0, wp.settle_time(spec, cfg)]
    t_max = max(times)
    frame_spec = wp.late_spec(spec, cfg, t_max, dx=ns.frame_dx)
    states = [wp.evolve(frame_spec, cfg, t, mode=ns.mode, n_terms=ns.n_terms) for t in times]
    with _open(ns.frames) as fh:
        fw = RecordWriter(fh, "packet-frame", ns.format)
        for st in states:
            fw.write_all(st.records())
    if ns.plot:
        from .plots import plot_packet
        plot_packet(states, ns.plot)


# graphene -----------------------------------------------------------------

def _phi_grid(steps: int, phi_max: float) -> list[float]:
    if steps < 1:
        raise ValueError("phi steps must be >= 1")
    if steps == 1:
        return [0.0]
    return [phi_max * (2.0 * i / (steps - 1) - 1.0) for i in range(steps)]


def run_graphene(ns, writer: RecordWriter) -> int:
    c, hbar = _units(ns)
    if ns.action == "point":
        phis = [ns.phi if ns.phi is not None else 0.0]
    else:
        phis = _phi_grid(ns.phi_steps, ns.phi_max)
    if ns.sweep:
        name, values = ns.sweep
        if name not in ("E", "L"):
            raise SystemExit("graphene map sweeps E or L")
    else:
        name, values = "E", [ns.E]
    cells = [(a, phi) for a in values for phi in phis]

    def cell(item):
        a, phi = item
        E = a if name == "E" else ns.E
        L = a if name == "L" else ns.L
        rec = {"phi": phi, "E": E, "V0": ns.V0, "L": L, "v_F": c, "hbar": hbar}
        try:
            T, regime, formal = gr._cell(E, ns.V0, phi, L, c, hbar)
        except (WeylError, ValueError) as exc:
            rec["error"] = str(exc)
            return rec
        rec.update(T=T, regime=regime, formal=formal)
        return rec

    rows = []
    for rec in ordered_map(cell, cells, ns.threads):
        writer.write(rec)
        if ns.plot:
            rows.append(rec)
    if ns.plot:
        from .plots import plot_angular
        plot_angular(rows, name, ns.plot)
    return writer.count


# parser -------------------------------------------------------------------

def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--units", choices=["natural", "device"], default="natural",
                   help="natural: hbar = c = 1; device: E in eV, lengths in nm, v_F = 1e6 m/s")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--out", default="-", help="output path ('-' for stdout)")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--config", help="flat key = value file; flags override it")
    p.add_argument("--c", type=float, default=None, help="override the speed constant")
    p.add_argument("--hbar", type=float, default=None)
    return p


def _physics(p: argparse.ArgumentParser, E=3.0, V0=1.0, p2=0.0, L=1.0, sweep=True) -> None:
    p.add_argument("--E", type=float, default=E)
    p.add_argument("--V0", type=float, default=V0)
    p.add_argument("--p2", type=float, default=p2)
    p.add_argument("--p3", type=float, default=0.0)
    p.add_argument("--phi", type=float, default=None,
                   help="incidence angle; sets p2 = (E/c) sin(phi), p3 = 0")
    p.add_argument("--L", type=float, default=L)
    if sweep:
        p.add_argument("--sweep", default=None, metavar="NAME:START:STOP:STEPS")


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="weylbarrier", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("step", parents=[common], help="single-step amplitudes r0, t0")
    _physics(sp)

    sp = sub.add_parser("barrier", parents=[common], help="total barrier amplitudes")
    _physics(sp)
    sp.add_argument("--method", choices=["closed", "series", "matrix", "all"], default="all")
    sp.add_argument("--formal", action="store_true", help="allow the closed form in the Klein zone")
    sp.add_argument("--max-terms", type=int, default=bar.MAX_TERMS)
    sp.add_argument("--tol", type=float, default=bar.SERIES_TOL)

    sp = sub.add_parser("series", parents=[common], help="multiple-reflection series term by term")
    _physics(sp, sweep=False)
    sp.add_argument("--max-terms", type=int, default=bar.MAX_TERMS)
    sp.add_argument("--tol", type=float, default=bar.SERIES_TOL)

    sp = sub.add_parser("klein-report", parents=[common], help="bounce growth in the Klein zone")
    _physics(sp, E=1.0, V0=3.0, p2=0.5, sweep=False)
    sp.add_argument("--bounces", type=int, default=8)

    sp = sub.add_parser("resonances", parents=[common], help="energies with q1 L = n pi hbar")
    sp.add_argument("--E-min", type=float, default=2.5)
    sp.add_argument("--E-max", type=float, default=10.0)
    sp.add_argument("--V0", type=float, default=1.0)
    sp.add_argument("--p2", type=float, default=1.0)
    sp.add_argument("--p3", type=float, default=0.0)
    sp.add_argument("--L", type=float, default=5.0)

    sp = sub.add_parser("packet", parents=[common], help="wave-packet transmission")
    sp.add_argument("--E0", type=float, default=3.0)
    sp.add_argument("--V0", type=float, default=2.0)
    sp.add_argument("--p2", type=float, default=0.7)
    sp.add_argument("--p3", type=float, default=0.0)
    sp.add_argument("--width", type=float, default=10.0, help="rms width of |psi|^2")
    sp.add_argument("--sigma-E", type=float, default=None, help="spectral width (overrides --width)")
    sp.add_argument("--L", type=float, default=None)
    sp.add_argument("--L-over-width", type=float, default=10.0)
    sp.add_argument("--sweep", default=None, metavar="L:START:STOP:STEPS")
    sp.add_argument("--method", choices=["grid", "spectral"], default="grid")
    sp.add_argument("--n-E", type=int, default=257)
    sp.add_argument("--frames", default=None, help="write |psi|^2 snapshots here")
    sp.add_argument("--times", default=None, help="comma-separated snapshot times")
    sp.add_argument("--frame-dx", type=float, default=None)
    sp.add_argument("--mode", choices=["full", "per_term"], default="full")
    sp.add_argument("--n-terms", type=int, default=3)
    sp.add_argument("--plot", default=None, help="SVG of the snapshots")

    sp = sub.add_parser("graphene", parents=[common], help="graphene transmission maps")
    sp.add_argument("action", choices=["map", "point"])
    sp.add_argument("--E", type=float, default=3.0)
    sp.add_argument("--V0", type=float, default=1.0)
    sp.add_argument("--L", type=float, default=5.0)
    sp.add_argument("--phi", type=float, default=None)
    sp.add_argument("--phi-steps", type=int, default=181)
    sp.add_argument("--phi-max", type=float, default=1.5)
    sp.add_argument("--sweep", default=None, metavar="E|L:START:STOP:STEPS")
    sp.add_argument("--plot", default=None, help="SVG of |t|^2 against phi")
    return parser


RUNNERS = {
    "step": run_step,
    "barrier": run_barrier,
    "series": run_series,
    "klein-report": run_klein,
    "resonances": run_resonances,
    "packet": run_packet,
    "graphene": run_graphene,
}


def _subparser(parser: argparse.ArgumentParser, name: str) -> argparse.ArgumentParser:
    for action in parser._actions:
        if isinstance(action, argparse._SubParsersAction):
            return action.choices[name]
    raise KeyError(name)


def _apply_config(parser, argv, ns):
    sp = _subparser(parser, ns.command)
    values = read_config(ns.config)
    known = {a.dest: a for a in sp._actions}
    defaults = {}
    for key, value in values.items():
        if key not in known or key in ("help", "config"):
            parser.error(f"unknown config key {key!r} for {ns.command}")
        action = known[key]
        if isinstance(action, argparse._StoreTrueAction):
            defaults[key] = value.lower() in ("1", "true", "yes", "on")
        else:
            defaults[key] = value
    sp.set_defaults(**defaults)
    return parser.parse_args(argv)


@contextmanager
def _open(path: str):
    if path == "-":
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            yield fh


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    ns = parser.parse_args(argv)
    if ns.config:
        try:
            ns = _apply_config(parser, argv, ns)
        except OSError as exc:
            parser.error(f"cannot read config: {exc}")
    if ns.threads < 1:
        parser.error("--threads must be >= 1")
    if getattr(ns, "sweep", None):
        try:
            ns.sweep = parse_sweep(ns.sweep, SWEEPABLE)
        except ValueError as exc:
            parser.error(str(exc))
    with _open(ns.out) as fh:
        writer = RecordWriter(fh, "graphene" if ns.command == "graphene" else ns.command, ns.format)
        RUNNERS[ns.command](ns, writer)
    return 0


if __name__ == "__main__":
    sys.exit(main())
