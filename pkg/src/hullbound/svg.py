"""Static SVG pictures: point sets, their convex hull, construction circles, grid verdicts."""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .exact import convex_hull_indices

STATUS_FILL = {"member": "#d62728", "borderline": "#ffbf00", "non-member": "#f2f2f2"}


class Canvas:
    def __init__(self, bbox: tuple[float, float, float, float], size: int = 480):
        x0, x1, y0, y1 = bbox
        if x1 <= x0 or y1 <= y0:
            raise ValueError("empty bounding box")
        self.bbox = bbox
        self.size = size
        self.k = size / max(x1 - x0, y1 - y0)
        self.items: list[str] = []

    def xy(self, z: complex) -> tuple[float, float]:
        x0, _, _, y1 = self.bbox
        return (z.real - x0) * self.k, (y1 - z.imag) * self.k

    def points(self, zs: Iterable[complex], r: float = 2.5, fill: str = "#1f77b4") -> None:
        for z in zs:
            x, y = self.xy(complex(z))
            self.items.append(f'<circle cx="{x:.3f}" cy="{y:.3f}" r="{r}" fill="{fill}"/>')

    def polyline(self, zs: Sequence[complex], closed: bool = False, stroke: str = "#555", width: float = 1) -> None:
        if len(zs) < 2:
            return
        pts = " ".join("{:.3f},{:.3f}".format(*self.xy(complex(z))) for z in zs)
        tag = "polygon" if closed else "polyline"
        self.items.append(f'<{tag} points="{pts}" fill="none" stroke="{stroke}" stroke-width="{width}"/>')

    def circle(self, center: complex, radius: float, stroke: str = "#2ca02c") -> None:
        x, y = self.xy(complex(center))
        self.items.append(f'<circle cx="{x:.3f}" cy="{y:.3f}" r="{radius * self.k:.3f}" fill="none" '
                          f'stroke="{stroke}" stroke-dasharray="4 3"/>')

    def cells(self, xs: np.ndarray, ys: np.ndarray, status: np.ndarray) -> None:
        dx = (xs[1] - xs[0]) * self.k if len(xs) > 1 else self.k
        dy = (ys[1] - ys[0]) * self.k if len(ys) > 1 else self.k
        for iy, y in enumerate(ys):
            for ix, x in enumerate(xs):
                s = str(status[iy, ix])
                if s == "non-member":
                    continue
                px, py = self.xy(complex(x, y))
                self.items.append(f'<rect x="{px - dx / 2:.3f}" y="{py - dy / 2:.3f}" width="{dx:.3f}" '
                                  f'height="{dy:.3f}" fill="{STATUS_FILL[s]}"/>')

    def render(self) -> str:
        x0, x1, y0, y1 = self.bbox
        w, h = (x1 - x0) * self.k, (y1 - y0) * self.k
        body = "\n".join(self.items)
        return (f'<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0f}" height="{h:.0f}" '
                f'viewBox="0 0 {w:.3f} {h:.3f}">\n<rect width="100%" height="100%" fill="white"/>\n{body}\n</svg>\n')


def _bbox(zs: Sequence[complex], margin: float = 0.15) -> tuple[float, float, float, float]:
    z = np.asarray(zs, dtype=complex)
    x0, x1, y0, y1 = z.real.min(), z.real.max(), z.imag.min(), z.imag.max()
    pad = margin * max(x1 - x0, y1 - y0, 1e-9)
    return x0 - pad, x1 + pad, y0 - pad, y1 + pad


def configuration_svg(points: Sequence[complex], w: complex | None = None,
                      circles: Sequence[tuple[complex, float]] = ()) -> str:
    """Points, their convex hull, an optional query point and construction circles."""
    pts = [complex(p) for p in points]
    extra = list(pts) + ([complex(w)] if w is not None else [])
    for c, r in circles:
        extra += [c + r, c - r, c + 1j * r, c - 1j * r]
    cv = Canvas(_bbox(extra))
    for c, r in circles:
        cv.circle(c, r)
    hull = convex_hull_indices(pts)
    cv.polyline([pts[i] for i in hull], closed=True)
    cv.points(pts)
    if w is not None:
        cv.points([w], r=3.5, fill="#d62728")
    return cv.render()


def grid_svg(grid, samples: Sequence[complex] = ()) -> str:
    """Grid verdicts as coloured cells with the sample set on top."""
    xs, ys = grid.xs, grid.ys
    cv = Canvas((xs[0], xs[-1], ys[0], ys[-1]))
    cv.cells(xs, ys, grid.status)
    cv.points(samples, r=1.2, fill="#1f77b4")
    return cv.render()


def curve_svg(parts: Sequence[Sequence[complex]], marks: Sequence[complex] = ()) -> str:
    """Polyline pieces (rings, arcs, connectors) with marked points."""
    allpts = [complex(z) for part in parts for z in part] + [complex(m) for m in marks]
    cv = Canvas(_bbox(allpts))
    for part in parts:
        cv.polyline(list(part))
    cv.points(marks, r=2.0, fill="#d62728")
    return cv.render()
