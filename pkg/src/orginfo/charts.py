"""Hand-written SVG charts for sweep and bounds results."""
from __future__ import annotations

from pathlib import Path
from xml.sax.saxutils import escape

import numpy as np

from .experiments import BoundsResult, SweepResult

__all__ = ["emit_svg_chart", "svg_text"]

WIDTH, HEIGHT = 640, 420
MARGIN = dict(left=60, right=20, top=30, bottom=50)
GRAY = "#999999"


class _Canvas:
    def __init__(self, xlim, ylim):
        self.x0, self.x1 = xlim
        self.y0, self.y1 = ylim
        if self.x1 == self.x0:
            self.x1 = self.x0 + 1.0
        if self.y1 == self.y0:
            self.y1 = self.y0 + 1.0
        self.parts: list[str] = []

    def px(self, x):
        span = WIDTH - MARGIN["left"] - MARGIN["right"]
        return MARGIN["left"] + (x - self.x0) / (self.x1 - self.x0) * span

    def py(self, y):
        span = HEIGHT - MARGIN["top"] - MARGIN["bottom"]
        return HEIGHT - MARGIN["bottom"] - (y - self.y0) / (self.y1 - self.y0) * span

    def line(self, x1, y1, x2, y2, stroke="black", dash=None, cls=None, width=1):
        extra = f' stroke-dasharray="{dash}"' if dash else ""
        extra += f' class="{cls}"' if cls else ""
        self.parts.append(
            f'<line x1="{self.px(x1):.2f}" y1="{self.py(y1):.2f}" x2="{self.px(x2):.2f}" '
            f'y2="{self.py(y2):.2f}" stroke="{stroke}" stroke-width="{width}"{extra}/>'
        )

    def text(self, x, y, s, anchor="middle", size=11):
        self.parts.append(
            f'<text x="{x:.2f}" y="{y:.2f}" font-size="{size}" text-anchor="{anchor}">{escape(s)}</text>'
        )

    def axes(self, xlabel, ylabel, title):
        self.line(self.x0, self.y0, self.x1, self.y0, cls="axis")
        self.line(self.x0, self.y0, self.x0, self.y1, cls="axis")
        base = self.py(self.y0)
        for t in np.linspace(self.x0, self.x1, 6):
            self.parts.append(
                f'<line class="tick" x1="{self.px(t):.2f}" y1="{base:.2f}" '
                f'x2="{self.px(t):.2f}" y2="{base + 5:.2f}" stroke="black"/>'
            )
            self.text(self.px(t), HEIGHT - MARGIN["bottom"] + 16, f"{t:g}")
        for t in np.linspace(self.y0, self.y1, 6):
            self.text(MARGIN["left"] - 6, self.py(t) + 4, f"{t:.3g}", anchor="end")
        self.text(WIDTH / 2, HEIGHT - 10, xlabel)
        self.text(16, HEIGHT / 2, ylabel, anchor="middle")
        self.text(WIDTH / 2, 18, title, size=13)

    def render(self) -> str:
        body = "\n".join(self.parts)
        return (
            '<?xml version="1.0" encoding="UTF-8"?>\n'
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
            f'viewBox="0 0 {WIDTH} {HEIGHT}">\n'
            f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>\n{body}\n</svg>\n'
        )


def _sweep_svg(result: SweepResult) -> str:
    x = result.beta_inv
    cutoff = result.full_revelation_cutoff
    c = _Canvas((0.0, max(float(x.max()), cutoff) * 1.05), (0.0, max(float(result.n), 1.0)))
    c.axes("1/beta", "signal dimension", "Optimal signal dimension")
    pts = " ".join(f"{c.px(a):.2f},{c.py(b):.2f}" for a, b in zip(x, result.mean_dim))
    c.parts.append(f'<polyline class="mean" fill="none" stroke="black" points="{pts}"/>')
    for a, m, s in zip(x, result.mean_dim, result.std_dim):
        c.line(a, m - s, a, m + s, stroke="black", cls="errorbar")
    c.line(cutoff, 0.0, cutoff, result.n, stroke=GRAY, dash="4,3", cls="cutoff")
    return c.render()


def _bounds_svg(result: BoundsResult) -> str:
    xs = np.array([r.d_max for r in result.records])
    ys = np.array([r.lambda_n for r in result.records])
    hi = float(max(xs.max(), ys.max())) + 6.0
    c = _Canvas((0.0, hi), (0.0, hi))
    c.axes("max degree", "Laplacian spectral radius", "Spectral radius and degree")
    c.line(0.0, 0.0, hi, hi, stroke=GRAY, cls="reference")
    c.line(0.0, 5.0, hi - 5.0, hi, stroke=GRAY, dash="4,3", cls="reference")
    for a, b in zip(xs, ys):
        c.parts.append(f'<circle class="point" cx="{c.px(a):.2f}" cy="{c.py(b):.2f}" r="2.5" fill="black"/>')
    return c.render()


def svg_text(result: SweepResult | BoundsResult, kind: str | None = None) -> str:
    if kind is None:
        kind = "line_errorbar" if isinstance(result, SweepResult) else "scatter"
    if isinstance(result, SweepResult):
        if result.beta_inv.size == 0:
            raise ValueError("cannot chart an empty sweep")
        if kind != "line_errorbar":
            raise ValueError(f"sweep results are drawn as line_errorbar, not {kind!r}")
        return _sweep_svg(result)
    if isinstance(result, BoundsResult):
        if not result.records:
            raise ValueError("cannot chart an empty bounds result")
        if kind != "scatter":
            raise ValueError(f"bounds results are drawn as scatter, not {kind!r}")
        return _bounds_svg(result)
    raise TypeError(f"cannot chart {type(result).__name__}")


def emit_svg_chart(result: SweepResult | BoundsResult, path, kind: str | None = None) -> None:
    Path(path).write_text(svg_text(result, kind), encoding="utf-8")
