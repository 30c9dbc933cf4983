"""SVG figures of planar polytopes with tropicalizations drawn over them."""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from . import hspace  # noqa: E402
from .metrics import box_system, convex_hull  # noqa: E402
from .polytope import Polytope  # noqa: E402
from .tropical import PLComplex  # noqa: E402

PALETTE = ("#1f77b4", "#2ca02c", "#9467bd", "#8c564b", "#e377c2", "#17becf", "#bcbd22")


@dataclass(frozen=True)
class RenderSpec:
    width: int = 480
    height: int = 480
    margin: Fraction = Fraction(1, 4)
    colors: tuple = PALETTE
    locus_color: str = "#d62728"
    point_radius: float = 5.0
    extra: dict = field(default_factory=dict)


def _num(x) -> float:
    # twelve significant digits, the only place rationals become decimals
    return float(f"{float(x):.12g}")


def viewport(P: Polytope, margin) -> tuple:
    lo, hi = P.bounding_box()
    pad = Fraction(margin) * max(h - l for l, h in zip(lo, hi))
    return tuple(x - pad for x in lo), tuple(x + pad for x in hi)


def _clipped(cell_system, box):
    S = cell_system.closure() & box_system(*box)
    if hspace.feasible(S) is None:
        return []
    return convex_hull(hspace.vertices(S))


def render(P: Polytope, layers: Sequence[tuple] = (), locus: PLComplex | None = None,
           points: Sequence = (), spec: RenderSpec = RenderSpec(), title: str = "") -> str:
    """SVG text for P, labelled complexes ``layers`` = [(label, PLComplex)], an emphasized locus and points."""
    if P.dim != 2:
        raise ValueError("rendering needs a planar polytope")
    box = viewport(P, spec.margin)
    with plt.rc_context({"svg.hashsalt": "tropfiber", "svg.fonttype": "none"}):
        fig, ax = plt.subplots(figsize=(spec.width / 100, spec.height / 100), dpi=100)
        ax.set_xlim(_num(box[0][0]), _num(box[1][0]))
        ax.set_ylim(_num(box[0][1]), _num(box[1][1]))
        ax.set_aspect("equal")
        for j, f in enumerate(P.facets, 1):
            face = P.system() & hspace.HSystem(2, eq=((f.normal, f.offset),))
            vs = hspace.vertices(face)
            a, b = vs[0], vs[-1]
            ax.plot([_num(a[0]), _num(b[0])], [_num(a[1]), _num(b[1])],
                    color="black", lw=1.5, gid=f"facet-{j}")
        for k, (label, C) in enumerate(layers):
            color = spec.colors[k % len(spec.colors)]
            first = True
            for i, c in enumerate(C.cells):
                _draw_cell(ax, c, box, color, f"cell-{k}-{i}", label if first else None, lw=1.0)
                first = False
        if locus is not None:
            for i, c in enumerate(locus.cells):
                _draw_cell(ax, c, box, spec.locus_color, f"locus-{i}", "locus" if i == 0 else None, lw=3.0)
        for i, p in enumerate(points):
            ax.plot([_num(p[0])], [_num(p[1])], "o", color=spec.locus_color,
                    ms=spec.point_radius, gid=f"point-{i}")
        if title:
            ax.set_title(title)
        if layers or locus is not None:
            ax.legend(loc="upper right", fontsize=7)
        buf = io.StringIO()
        fig.savefig(buf, format="svg", metadata={"Date": None})
        plt.close(fig)
    return buf.getvalue()


def _draw_cell(ax, cell, box, color, gid, label, lw):
    hull = _clipped(cell.system, box)
    if not hull:
        return
    xs = [_num(p[0]) for p in hull]
    ys = [_num(p[1]) for p in hull]
    if len(hull) == 1:
        ax.plot(xs, ys, "o", color=color, ms=lw * 2, gid=gid, label=label)
    elif len(hull) == 2:
        ax.plot(xs, ys, color=color, lw=lw, gid=gid, label=label)
    else:
        ax.fill(xs, ys, color=color, alpha=0.15, gid=gid, label=label)
