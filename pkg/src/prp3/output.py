"""CSV tables and standalone SVG plots for simulated trajectories."""
import csv
import io
from dataclasses import dataclass
from xml.sax.saxutils import escape

import numpy as np

from .geometry import LEGS

LEG_NAMES = ("a", "b", "c")


def fmt(value):
    """17 significant digits, round-trippable."""
    return format(float(value) + 0.0, ".17g")


@dataclass(frozen=True)
class OutputTable:
    header: tuple
    rows: np.ndarray

    def __post_init__(self):
        if len(set(self.header)) != len(self.header):
            raise ValueError("duplicate column names")
        if self.rows.ndim != 2 or self.rows.shape[1] != len(self.header):
            raise ValueError("rows do not match header")

    def to_csv(self):
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.header)
        for row in self.rows:
            writer.writerow([fmt(v) for v in row])
        return buf.getvalue()


def simulation_table(table, passive=False):
    names = ["lambda10", "v10", "gamma10"]
    if passive:
        names += ["lambda32", "v32", "gamma32"]
    header = ["t", "x", "y", "phi"]
    cols = [table.t, table.pose[:, 0], table.pose[:, 1], table.pose[:, 2]]
    for name in names:
        for leg in LEGS:
            header.append(f"{name}_{LEG_NAMES[leg]}")
            cols.append(table.column(name, leg))
    return OutputTable(tuple(header), np.column_stack(cols))


_STYLES = (("#1f77b4", ""), ("#d62728", "6,3"), ("#2ca02c", "2,3"))
_PANELS = (("lambda10", "displacement [m]"), ("v10", "velocity [m/s]"),
           ("gamma10", "acceleration [m/s^2]"))


def _ticks(lo, hi):
    return [lo + (hi - lo) * k / 4 for k in range(5)]


def render_svg(table, title="", width=640, panel_height=200):
    """Three stacked panels (displacement, velocity, acceleration vs time),
    one polyline per leg."""
    ml, mr, mt, mb = 80, 20, 30, 35
    height = len(_PANELS) * panel_height + 30
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
           f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="11">',
           f'<rect width="{width}" height="{height}" fill="white"/>']
    if title:
        out.append(f'<text x="{width / 2:.1f}" y="16" text-anchor="middle" '
                   f'font-size="13">{escape(title)}</text>')
    t = table.t
    t0, t1 = float(t[0]), float(t[-1])
    pw = width - ml - mr
    for p, (name, label) in enumerate(_PANELS):
        top = 20 + p * panel_height + mt
        ph = panel_height - mt - mb
        series = [table.column(name, leg) for leg in LEGS]
        lo = min(float(s.min()) for s in series)
        hi = max(float(s.max()) for s in series)
        if hi - lo < 1e-12:
            lo, hi = lo - 1e-3, hi + 1e-3

        def sx(v):
            return ml + (v - t0) / (t1 - t0) * pw

        def sy(v):
            return top + ph - (v - lo) / (hi - lo) * ph

        out.append(f'<rect x="{ml}" y="{top}" width="{pw}" height="{ph}" '
                   f'fill="none" stroke="black"/>')
        for v in _ticks(lo, hi):
            out.append(f'<text x="{ml - 4}" y="{sy(v) + 4:.1f}" text-anchor="end">{v:.3g}</text>')
        for v in _ticks(t0, t1):
            out.append(f'<text x="{sx(v):.1f}" y="{top + ph + 14}" text-anchor="middle">{v:.3g}</text>')
        out.append(f'<text x="{ml + pw / 2:.1f}" y="{top + ph + 28}" text-anchor="middle">t [s]</text>')
        out.append(f'<text x="14" y="{top + ph / 2:.1f}" text-anchor="middle" '
                   f'transform="rotate(-90 14 {top + ph / 2:.1f})">{escape(label)}</text>')
        for leg, s in zip(LEGS, series):
            color, dash = _STYLES[leg]
            pts = " ".join(f"{sx(a):.2f},{sy(b):.2f}" for a, b in zip(t, s))
            dash_attr = f' stroke-dasharray="{dash}"' if dash else ""
            out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5"'
                       f'{dash_attr} points="{pts}"/>')
        for leg in LEGS:
            color, dash = _STYLES[leg]
            lx, ly = ml + pw - 90 + leg * 30, top + 10
            dash_attr = f' stroke-dasharray="{dash}"' if dash else ""
            out.append(f'<line x1="{lx}" y1="{ly}" x2="{lx + 14}" y2="{ly}" stroke="{color}" '
                       f'stroke-width="1.5"{dash_attr}/>')
            out.append(f'<text x="{lx + 16}" y="{ly + 4}">{LEG_NAMES[leg].upper()}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
