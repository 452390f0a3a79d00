"""Sampled compact sets in C and C^2.

A :class:`SampledSet` remembers the textual descriptor of the set it was drawn
from (``"arc alpha=0.5236 N=2000"``), so it can be regenerated at a higher
density for independent re-verification of certificates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np


@dataclass(frozen=True, eq=False)
class SampledSet:
    dimension: int
    points: np.ndarray = field(repr=False)
    generator: str = "points"
    density: float = 0.0

    def __post_init__(self):
        pts = np.array(self.points, dtype=complex)
        if self.dimension == 1:
            pts = pts.reshape(-1)
        elif self.dimension == 2:
            if pts.ndim != 2 or pts.shape[1] != 2:
                raise ValueError("two-dimensional samples must have shape (N, 2)")
        else:
            raise ValueError(f"dimension must be 1 or 2, got {self.dimension}")
        if pts.shape[0] == 0:
            raise ValueError("sampled set is empty")
        if not np.all(np.isfinite(pts)):
            raise ValueError("sampled set has non-finite points")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    def __len__(self) -> int:
        return self.points.shape[0]

    @property
    def radius(self) -> float:
        """Largest coordinate modulus; used to scale monomial bases."""
        return float(np.max(np.abs(self.points)))

    @property
    def finite(self) -> bool:
        return parse_descriptor(self.generator)[0] == "points"


def finite_set(points: Sequence[complex]) -> SampledSet:
    return SampledSet(1, np.asarray(points, dtype=complex), "points", float(len(points)))


def finite_set2(points: Sequence[tuple[complex, complex]]) -> SampledSet:
    return SampledSet(2, np.asarray(points, dtype=complex), "points", float(len(points)))


def parse_descriptor(text: str) -> tuple[str, dict[str, float]]:
    parts = text.split()
    if not parts:
        raise ValueError("empty generator descriptor")
    params: dict[str, float] = {}
    for tok in parts[1:]:
        key, sep, val = tok.partition("=")
        if not sep:
            raise ValueError(f"malformed descriptor token {tok!r}")
        params[key] = float(val)
    return parts[0], params


def format_descriptor(kind: str, **params) -> str:
    toks = [kind]
    for k, v in params.items():
        if isinstance(v, int) or float(v).is_integer() and k in ("N", "p", "q", "n", "n_max"):
            toks.append(f"{k}={int(v)}")
        else:
            toks.append(f"{k}={float(v)!r}")
    return " ".join(toks)


def _circle(N, cx=0.0, cy=0.0, r=1.0):
    th = 2 * np.pi * np.arange(int(N)) / int(N)
    return complex(cx, cy) + r * np.exp(1j * th), 1, 2 * np.pi * r


def _arc(N, alpha, r=1.0):
    th = np.linspace(-alpha, alpha, int(N))
    return r * np.exp(1j * th), 1, 2 * alpha * r


def _segment(N, x0, y0, x1, y1):
    a, b = complex(x0, y0), complex(x1, y1)
    return a + (b - a) * np.linspace(0.0, 1.0, int(N)), 1, abs(b - a)


def _disk_points(N, r):
    # concentric rings with roughly uniform area density, centre included
    N = int(N)
    rings = max(1, int(round(math.sqrt(N / math.pi))))
    pts = [0j]
    for k in range(1, rings + 1):
        rk = r * k / rings
        m = max(6, int(round(2 * math.pi * k)))
        pts.extend(rk * np.exp(2j * np.pi * (np.arange(m) + 0.5 * (k % 2)) / m))
    return np.array(pts)


def _disk(N, r=1.0, cx=0.0, cy=0.0):
    return complex(cx, cy) + _disk_points(N, r), 1, math.pi * r * r


def _knot(N, p, q):
    p, q = int(p), int(q)
    if math.gcd(p, q) != 1:
        raise ValueError(f"torus knot needs coprime (p, q), got ({p}, {q})")
    th = 2 * np.pi * np.arange(int(N)) / int(N)
    pts = np.stack([np.exp(1j * p * th), np.exp(-1j * q * th)], axis=1)
    return pts, 2, 2 * np.pi


def _vcircle(N, r=1.0, cx=0.0, cy=0.0):
    z, _, ext = _circle(N, cx, cy, r)
    return np.stack([z, np.conj(z)], axis=1), 2, ext


def _vdisk(N, r=1.0, cx=0.0, cy=0.0):
    z = complex(cx, cy) + _disk_points(N, r)
    return np.stack([z, np.conj(z)], axis=1), 2, math.pi * r * r


GENERATORS: dict[str, Callable] = {
    "circle": _circle,
    "arc": _arc,
    "segment": _segment,
    "disk": _disk,
    "knot": _knot,
    "vcircle": _vcircle,
    "vdisk": _vdisk,
}


def sample(descriptor: str) -> SampledSet:
    """Build a sampled set from a descriptor such as ``"knot p=2 q=1 N=2000"``."""
    kind, params = parse_descriptor(descriptor)
    if kind == "points":
        raise ValueError("finite point sets have no generator; use finite_set")
    if kind == "pathological":
        from .experiments import PathologicalCurveSpec

        spec = PathologicalCurveSpec(int(params.get("n_max", 6)))
        return spec.sampled_set(int(params.get("N", 200)))
    try:
        fn = GENERATORS[kind]
    except KeyError:
        raise ValueError(f"unknown generator {kind!r}") from None
    if "N" not in params:
        raise ValueError(f"descriptor {descriptor!r} lacks N")
    pts, dim, extent = fn(**params)
    return SampledSet(dim, pts, descriptor, len(pts) / extent if extent else float(len(pts)))


def resample(K: SampledSet, factor: int = 10) -> SampledSet:
    """Regenerate ``K`` with ``factor`` times as many samples.

    Finite sets are returned unchanged: they are their own dense resample.
    """
    kind, params = parse_descriptor(K.generator)
    if kind == "points":
        return K
    params["N"] = int(params["N"]) * factor
    return sample(format_descriptor(kind, **params))


def arc_set(alpha: float, N: int = 2000) -> SampledSet:
    return sample(format_descriptor("arc", alpha=alpha, N=N))


def circle_set(N: int = 2000, r: float = 1.0) -> SampledSet:
    return sample(format_descriptor("circle", N=N, r=r))


def roots_of_unity(count: int, phase: float = 0.0) -> np.ndarray:
    return np.exp(1j * (phase + 2 * np.pi * np.arange(count) / count))
