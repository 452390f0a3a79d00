"""Deterministic JSON for reports: complex numbers as [re, im], floats at 17 significant digits."""

from __future__ import annotations

import json
import math
from typing import Any

import numpy as np

from .cheb import MinimaxSolution
from .exact import PointConfiguration
from .poly import Poly1, Poly2, from_basis, poly_from_json, poly_to_json
from .verdict import MembershipVerdict


def cnum(z) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def from_cnum(v) -> complex:
    re, im = v
    return complex(float(re), float(im))


def to_plain(obj: Any) -> Any:
    """Reduce numpy, complex and polynomial values to JSON-ready Python values."""
    if isinstance(obj, (Poly1, Poly2)):
        return poly_to_json(obj)
    if isinstance(obj, MembershipVerdict):
        return verdict_to_json(obj)
    if isinstance(obj, MinimaxSolution):
        return solution_to_json(obj)
    if isinstance(obj, PointConfiguration):
        return [cnum(z) for z in obj.points]
    if isinstance(obj, dict):
        return {str(k): to_plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [to_plain(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return cnum(obj)
    if obj is None or isinstance(obj, str):
        return obj
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def _emit(v: Any, out: list[str], indent: int, level: int) -> None:
    pad = "\n" + " " * (indent * (level + 1))
    end = "\n" + " " * (indent * level)
    if isinstance(v, dict):
        if not v:
            out.append("{}")
            return
        out.append("{")
        for i, (k, x) in enumerate(v.items()):
            out.append(("," if i else "") + pad + json.dumps(k) + ": ")
            _emit(x, out, indent, level + 1)
        out.append(end + "}")
    elif isinstance(v, list):
        if not v:
            out.append("[]")
            return
        if all(not isinstance(x, (dict, list)) for x in v):
            parts: list[str] = []
            for x in v:
                _emit(x, parts, indent, level + 1)
            out.append("[" + ", ".join(parts) + "]")
            return
        out.append("[")
        for i, x in enumerate(v):
            out.append(("," if i else "") + pad)
            _emit(x, out, indent, level + 1)
        out.append(end + "]")
    elif isinstance(v, bool) or v is None:
        out.append(json.dumps(v))
    elif isinstance(v, int):
        out.append(str(v))
    elif isinstance(v, float):
        out.append(format(v, ".17g") if math.isfinite(v) else "null")
    else:
        out.append(json.dumps(v))


def dumps(obj: Any, indent: int = 2) -> str:
    """Byte-stable JSON text; non-finite floats become null."""
    out: list[str] = []
    _emit(to_plain(obj), out, indent, 0)
    return "".join(out) + "\n"


def loads(text: str) -> Any:
    return json.loads(text)


def verdict_to_json(v: MembershipVerdict) -> dict:
    w = v.w
    point = [cnum(x) for x in w] if isinstance(w, (tuple, list)) else cnum(w)
    return {
        "status": v.status,
        "w": point,
        "degree_bound": v.degree_bound,
        "residual": v.residual,
        "value": v.value,
        "certificate": poly_to_json(v.certificate) if v.certificate is not None else None,
        "verification_failed": v.verification_failed,
        "diagnostics": to_plain(v.diagnostics),
    }


def verdict_from_json(obj: dict) -> MembershipVerdict:
    w = obj["w"]
    point = tuple(from_cnum(x) for x in w) if isinstance(w[0], list) else from_cnum(w)
    cert = obj.get("certificate")
    return MembershipVerdict(obj["status"], point, int(obj["degree_bound"]), obj.get("residual"),
                             obj.get("value"), poly_from_json(cert) if cert else None,
                             bool(obj.get("verification_failed", False)), dict(obj.get("diagnostics", {})))


def solution_to_json(s: MinimaxSolution) -> dict:
    return {
        "value": s.value,
        "basis": [list(e) for e in s.basis],
        "coefficients": [cnum(c) for c in s.coefficients],
        "active_points": list(s.active_points),
        "directions_used": s.directions_used,
        "achieved": s.achieved,
        "iterations": s.iterations,
        "box_active": s.box_active,
    }


def solution_from_json(obj: dict) -> MinimaxSolution:
    return MinimaxSolution(float(obj["value"]), np.array([from_cnum(c) for c in obj["coefficients"]]),
                           [tuple(e) for e in obj["basis"]], list(obj["active_points"]),
                           int(obj["directions_used"]), float(obj["achieved"]), int(obj.get("iterations", 0)),
                           bool(obj.get("box_active", False)))


def polynomial_of(obj: dict):
    """Polynomial stored as a basis/coefficient pair or in the plain polynomial layout."""
    if "basis" in obj:
        return from_basis([tuple(e) for e in obj["basis"]], [from_cnum(c) for c in obj["coefficients"]])
    return poly_from_json(obj)
