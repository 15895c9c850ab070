"""SVG rendering of the two-agent feasible utility region.

The feasible utility profiles of a two-agent instance form a convex polygon
whose vertices are the utilities of the 2m+2 prefix/suffix split allocations
taken in disutility-ratio order; the efficient boundary is the chain of
splits favoring agent 1 progressively over agent 2. Competitive profiles are
drawn as marked dots. The output is a deterministic standalone SVG string;
floating point appears here only, for pixel coordinates.
"""

from __future__ import annotations

from fractions import Fraction

from .core import Instance, Vector
from .errors import InvalidInstanceError
from .formats import rational_str

_WIDTH, _HEIGHT, _MARGIN = 640, 480, 60


def split_vertices(inst: Instance) -> tuple[list[tuple[Fraction, Fraction]], list[tuple[Fraction, Fraction]]]:
    """Utility profiles of all split allocations, in ratio order.

    Returns (efficient chain, anti-efficient chain): the k-th efficient point
    gives the k cheapest-ratio chores to agent 1 and the rest to agent 2, the
    anti chain does the opposite. Their union, walked in order, is the closed
    boundary of the feasible utility polygon.
    """
    if inst.n != 2:
        raise InvalidInstanceError("the utility-region plot requires exactly 2 agents")
    m = inst.m
    order = sorted(
        range(m),
        key=lambda j: (abs(inst.values[0][j]) / abs(inst.values[1][j]), j),
    )
    pareto = []
    anti = []
    for k in range(m + 1):
        first = order[:k]
        rest = order[k:]
        pareto.append(
            (
                sum((inst.values[0][j] for j in first), start=Fraction(0)),
                sum((inst.values[1][j] for j in rest), start=Fraction(0)),
            )
        )
        anti.append(
            (
                sum((inst.values[0][j] for j in rest), start=Fraction(0)),
                sum((inst.values[1][j] for j in first), start=Fraction(0)),
            )
        )
    return pareto, anti


def render_utility_svg(inst: Instance, profiles: tuple[Vector, ...]) -> str:
    """Standalone SVG of the feasible polygon, efficient frontier, and equilibria."""
    pareto, anti = split_vertices(inst)
    boundary = pareto + anti
    xs = [float(pt[0]) for pt in boundary]
    ys = [float(pt[1]) for pt in boundary]
    xmin, xmax = min(xs), 0.0
    ymin, ymax = min(ys), 0.0
    xspan = (xmax - xmin) or 1.0
    yspan = (ymax - ymin) or 1.0

    def sx(x: float) -> float:
        return _MARGIN + (x - xmin) / xspan * (_WIDTH - 2 * _MARGIN)

    def sy(y: float) -> float:
        return _HEIGHT - _MARGIN - (y - ymin) / yspan * (_HEIGHT - 2 * _MARGIN)

    def pts(seq) -> str:
        return " ".join(f"{sx(float(a)):.2f},{sy(float(b)):.2f}" for a, b in seq)

    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_WIDTH}" height="{_HEIGHT}" '
        f'viewBox="0 0 {_WIDTH} {_HEIGHT}">',
        '<rect width="100%" height="100%" fill="white"/>',
        f'<polygon points="{pts(boundary)}" fill="#dce9f5" stroke="#8aa6c0" stroke-width="1"/>',
        f'<polyline points="{pts(pareto)}" fill="none" stroke="#1f4e79" stroke-width="2.5"/>',
        f'<line x1="{sx(xmin):.2f}" y1="{sy(0.0):.2f}" x2="{sx(0.0):.2f}" y2="{sy(0.0):.2f}" '
        'stroke="#444444" stroke-width="1"/>',
        f'<line x1="{sx(0.0):.2f}" y1="{sy(ymin):.2f}" x2="{sx(0.0):.2f}" y2="{sy(0.0):.2f}" '
        'stroke="#444444" stroke-width="1"/>',
        f'<text x="{_WIDTH - _MARGIN:.2f}" y="{sy(0.0) - 8:.2f}" font-size="13" '
        'text-anchor="end" fill="#444444">u1</text>',
        f'<text x="{sx(0.0) + 8:.2f}" y="{_MARGIN:.2f}" font-size="13" fill="#444444">u2</text>',
    ]
    for u in profiles:
        cx, cy = sx(float(u[0])), sy(float(u[1]))
        label = f"({rational_str(u[0])}, {rational_str(u[1])})"
        lines.append(f'<circle cx="{cx:.2f}" cy="{cy:.2f}" r="4.5" fill="#1f6fd0"/>')
        lines.append(
            f'<text x="{cx + 8:.2f}" y="{cy - 6:.2f}" font-size="12" fill="#1f6fd0">{label}</text>'
        )
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
