"""Deterministic SVG diagrams of 2D systems.

Visual vocabulary: small gray dots for the ambient lattice, filled black dots
for lattice points surviving the multiplicity conditions, open circles for
the points the conditions cut, solid segments for the polytope boundary, and
one solid cutting line per marked point (the level set where the vanishing
order equals the required multiplicity minus one, i.e. the boundary of the
cut region).

The circled points are exactly the set removed by the effective-dimension
count; a diagram can therefore be diffed against the counts.  Dimension 3 and
up is out of scope for graphics; see :func:`slice_report` for the per-slice
counts used instead.
"""

from __future__ import annotations

from dataclasses import dataclass

from .divisor import LatticePolytope, lattice_points, polytope_of
from .errors import InputError
from .fan import walls
from .lattice import Vec
from .linsys import LinearSystemSpec, split_points


@dataclass(frozen=True)
class RenderSpec:
    polytope: LatticePolytope
    kept: tuple[Vec, ...]
    cut: tuple[Vec, ...]
    cut_lines: tuple[tuple[int, int, int], ...]  # (a, b, c) for a*x + b*y = c
    size: int


def build_render_spec(spec: LinearSystemSpec, size: int = 480) -> RenderSpec:
    if spec.fan.dim != 2:
        raise InputError("SVG rendering is 2D only; use slice_report for higher dimension")
    p = polytope_of(spec.divisor)
    kept, cut = split_points(spec)
    lines = []
    for i, m in enumerate(spec.mults):
        if m <= 0:
            continue
        r1, r2 = spec.fan.max_cones[i]
        v1, v2 = spec.fan.rays[r1], spec.fan.rays[r2]
        normal = (v1[0] + v2[0], v1[1] + v2[1])
        rhs = m - 1 - spec.divisor.alpha[r1] - spec.divisor.alpha[r2]
        lines.append((normal[0], normal[1], rhs))
    return RenderSpec(p, tuple(kept), tuple(cut), tuple(lines), size)


def polygon_cycle(p: LatticePolytope) -> list[Vec]:
    """Polytope vertices in boundary order, by walking the wall adjacency."""
    neighbors: dict[int, list[int]] = {}
    for w in walls(p.fan):
        neighbors.setdefault(w.cone_a, []).append(w.cone_b)
        neighbors.setdefault(w.cone_b, []).append(w.cone_a)
    start = 0
    cycle = [start]
    prev, cur = None, start
    while True:
        nxt = [k for k in sorted(neighbors[cur]) if k != prev]
        step = nxt[0]
        if step == start:
            break
        cycle.append(step)
        prev, cur = cur, step
    return [p.vertices[k] for k in cycle]


def _clip_line(a: int, b: int, c: int, box) -> tuple | None:
    """Clip a*x + b*y = c to a rectangle; returns endpoint pair or None."""
    x0, y0, x1, y1 = box
    pts: list[tuple[float, float]] = []

    def push(x, y):
        if x0 - 1e-9 <= x <= x1 + 1e-9 and y0 - 1e-9 <= y <= y1 + 1e-9:
            for px, py in pts:
                if abs(px - x) < 1e-9 and abs(py - y) < 1e-9:
                    return
            pts.append((x, y))

    if b != 0:
        for x in (x0, x1):
            push(x, (c - a * x) / b)
    if a != 0:
        for y in (y0, y1):
            push((c - b * y) / a, y)
    if len(pts) < 2:
        return None
    best = None
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            d = (pts[i][0] - pts[j][0]) ** 2 + (pts[i][1] - pts[j][1]) ** 2
            if best is None or d > best[0]:
                best = (d, pts[i], pts[j])
    return best[1], best[2]


def render_svg(rs: RenderSpec) -> str:
    verts = polygon_cycle(rs.polytope)
    n = rs.polytope.fan.dim
    assert n == 2
    all_pts = list(rs.kept) + list(rs.cut)
    xs = [v[0] for v in verts] + [p[0] for p in all_pts]
    ys = [v[1] for v in verts] + [p[1] for p in all_pts]
    pad = 1
    x0, x1 = min(xs) - pad, max(xs) + pad
    y0, y1 = min(ys) - pad, max(ys) + pad
    span = max(x1 - x0, y1 - y0, 1)
    margin = 24.0
    scale = (rs.size - 2 * margin) / span
    height = margin * 2 + (y1 - y0) * scale
    width = margin * 2 + (x1 - x0) * scale

    def px(pt) -> tuple[float, float]:
        return (margin + (pt[0] - x0) * scale, height - margin - (pt[1] - y0) * scale)

    def fmt(v: float) -> str:
        return f"{v:.2f}"

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{fmt(width)}" height="{fmt(height)}" '
        f'viewBox="0 0 {fmt(width)} {fmt(height)}">',
        f'<rect x="0" y="0" width="{fmt(width)}" height="{fmt(height)}" fill="white"/>',
    ]
    r_grid, r_pt, r_cut = 0.045 * scale, 0.09 * scale, 0.16 * scale
    for gy in range(y0, y1 + 1):
        for gx in range(x0, x1 + 1):
            cx, cy = px((gx, gy))
            out.append(
                f'<circle class="grid" cx="{fmt(cx)}" cy="{fmt(cy)}" r="{fmt(r_grid)}" fill="#bbbbbb"/>'
            )
    ring = [px(v) for v in verts] + [px(verts[0])]
    path = " ".join(f"{fmt(x)},{fmt(y)}" for x, y in ring)
    out.append(f'<polyline class="polytope" points="{path}" fill="none" stroke="black" stroke-width="1.4"/>')
    for a, b, c in rs.cut_lines:
        seg = _clip_line(a, b, c, (x0, y0, x1, y1))
        if seg is None:
            continue
        (ax, ay), (bx, by) = px(seg[0]), px(seg[1])
        out.append(
            f'<line class="cutline" x1="{fmt(ax)}" y1="{fmt(ay)}" x2="{fmt(bx)}" y2="{fmt(by)}" '
            'stroke="black" stroke-width="1.0"/>'
        )
    for p in sorted(rs.kept):
        cx, cy = px(p)
        out.append(f'<circle class="pt" cx="{fmt(cx)}" cy="{fmt(cy)}" r="{fmt(r_pt)}" fill="black"/>')
    for p in sorted(rs.cut):
        cx, cy = px(p)
        out.append(
            f'<circle class="cut" cx="{fmt(cx)}" cy="{fmt(cy)}" r="{fmt(r_cut)}" '
            'fill="none" stroke="black" stroke-width="1.2"/>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def render_system_svg(spec: LinearSystemSpec, size: int = 480) -> str:
    return render_svg(build_render_spec(spec, size))


def slice_report(spec: LinearSystemSpec) -> list[dict]:
    """Lattice-point counts per last-coordinate slice (any dimension)."""
    pts = lattice_points(polytope_of(spec.divisor))
    kept, cut = split_points(spec, pts)
    kept_set = set(kept)
    slices: dict[int, dict] = {}
    for p in pts:
        rec = slices.setdefault(p[-1], {"slice": p[-1], "points": 0, "kept": 0, "cut": 0})
        rec["points"] += 1
        rec["kept" if p in kept_set else "cut"] += 1
    return [slices[z] for z in sorted(slices)]
