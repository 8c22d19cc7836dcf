"""Record serialisation: CSV and newline-delimited JSON, 17 significant digits."""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, Iterator, Sequence, TextIO

SCHEMA_VERSION = 1

_PARAMS = ["E", "V0", "p2", "p3", "c", "hbar"]

SCHEMAS: dict[str, list[str]] = {
    "step": ["seq", "schema_version", "command", *_PARAMS, "regime",
             "re_alpha", "im_alpha", "N", "re_r0", "im_r0", "re_t0", "im_t0", "R0", "error"],
    "barrier": ["seq", "schema_version", "command", *_PARAMS, "L", "regime", "method", "formal",
                "re_t_closed", "im_t_closed", "re_r_closed", "im_r_closed",
                "re_t_series", "im_t_series", "re_r_series", "im_r_series",
                "re_t_matrix", "im_t_matrix", "re_r_matrix", "im_r_matrix",
                "T", "R", "loop_mag", "convergent", "truncation_index", "cond", "max_delta", "error"],
    "series": ["seq", "schema_version", "command", *_PARAMS, "L", "regime", "s",
               "re_term_t", "im_term_t", "re_partial_t", "im_partial_t",
               "re_term_r", "im_term_r", "re_partial_r", "im_partial_r",
               "loop_mag", "convergent", "error"],
    "klein-report": ["seq", "schema_version", "command", *_PARAMS, "L", "s", "time",
                     "per_bounce_growth", "hole_count_proxy", "loop_mag", "bounce_period", "error"],
    "resonances": ["seq", "schema_version", "command", *_PARAMS, "L", "n", "E_res", "T", "head_on", "error"],
    "packet": ["seq", "schema_version", "command", "E0", "sigma_E", "V0", "p2", "p3", "c", "hbar",
               "L", "width", "L_over_width", "method", "P_T", "T_coherent", "T_incoherent",
               "rel_dev_coherent", "rel_dev_incoherent", "error"],
    "packet-frame": ["seq", "schema_version", "command", "t", "x", "psi1_sq", "psi2_sq", "region"],
    "graphene": ["seq", "schema_version", "command", "phi", "E", "V0", "L", "v_F", "hbar",
                 "T", "regime", "formal", "error"],
}


def format_value(v, for_json: bool = False) -> str:
    if v is None:
        return "null" if for_json else ""
    if isinstance(v, bool):
        if for_json:
            return "true" if v else "false"
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        if not math.isfinite(v):
            return "null" if for_json else repr(v)
        return format(v, ".17g")
    s = str(v)
    return json.dumps(s) if for_json else _csv_escape(s)


def _csv_escape(s: str) -> str:
    if any(ch in s for ch in ',"\n\r'):
        return '"' + s.replace('"', '""') + '"'
    return s


class RecordWriter:
    """Streams records in a fixed column order; missing keys are empty/null."""

    def __init__(self, stream: TextIO, schema: str, fmt: str = "csv"):
        if fmt not in ("csv", "json"):
            raise ValueError(f"unknown format {fmt!r}")
        self.stream = stream
        self.schema = schema
        self.columns = SCHEMAS[schema]
        self.fmt = fmt
        self.count = 0
        if fmt == "csv":
            stream.write(",".join(self.columns) + "\n")

    def write(self, record: dict) -> None:
        rec = dict(record)
        rec.setdefault("schema_version", SCHEMA_VERSION)
        rec.setdefault("command", self.schema)
        rec.setdefault("seq", self.count)
        unknown = set(rec) - set(self.columns)
        if unknown:
            raise KeyError(f"fields not in schema {self.schema!r}: {sorted(unknown)}")
        if self.fmt == "csv":
            line = ",".join(format_value(rec.get(c)) for c in self.columns)
        else:
            line = "{" + ", ".join(f"{json.dumps(c)}: {format_value(rec.get(c), True)}" for c in self.columns) + "}"
        self.stream.write(line + "\n")
        self.count += 1

    def write_all(self, records: Iterable[dict]) -> int:
        for rec in records:
            self.write(rec)
        return self.count


def ordered_map(fn: Callable, items: Iterable, threads: int = 1, window: int = 256) -> Iterator:
    """Map ``fn`` over ``items`` with up to ``threads`` workers, yielding in input order.

    At most ``window`` results are in flight, so long scans stay memory-bounded.
    """
    if threads <= 1:
        for item in items:
            yield fn(item)
        return
    pending = []
    with ThreadPoolExecutor(max_workers=threads) as pool:
        for item in items:
            pending.append(pool.submit(fn, item))
            if len(pending) >= window:
                yield pending.pop(0).result()
        for fut in pending:
            yield fut.result()


def read_config(path: str) -> dict[str, str]:
    """Flat ``key = value`` file; ``#`` starts a comment, dashes in keys become underscores."""
    out: dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key = value")
            key, value = (part.strip() for part in line.split("=", 1))
            out[key.lstrip("-").replace("-", "_")] = value
    return out


def linspace(start: float, stop: float, steps: int) -> list[float]:
    if steps < 1:
        raise ValueError("step count must be >= 1")
    if steps == 1:
        return [float(start)]
    h = (stop - start) / (steps - 1)
    return [start + i * h for i in range(steps - 1)] + [float(stop)]


def parse_sweep(text: str, allowed: Sequence[str]) -> tuple[str, list[float]]:
    """``NAME:START:STOP:STEPS`` -> (name, values)."""
    parts = text.split(":")
    if len(parts) != 4:
        raise ValueError(f"sweep must be NAME:START:STOP:STEPS, got {text!r}")
    name = parts[0]
    if name not in allowed:
        raise ValueError(f"cannot sweep {name!r}; choose from {', '.join(allowed)}")
    start, stop = float(parts[1]), float(parts[2])
    if not (math.isfinite(start) and math.isfinite(stop)):
        raise ValueError("sweep bounds must be finite")
    return name, linspace(start, stop, int(parts[3]))
