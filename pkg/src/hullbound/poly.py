"""Dense complex polynomials in one and two variables.

Coefficients are stored densely. Trailing zeros are trimmed only when they are
exactly zero, since the degree of a polynomial decides which hull it tests.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

Number = Union[complex, float, int]


def _trim(coeffs: Sequence[Number]) -> tuple[complex, ...]:
    out = [complex(c) for c in coeffs]
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


@dataclass(frozen=True)
class Poly1:
    """Polynomial in z; ``coeffs[k]`` multiplies ``z**k``.

    The zero polynomial is the empty tuple and has degree ``None``.
    """

    coeffs: tuple[complex, ...]

    def __init__(self, coeffs: Sequence[Number] = ()):
        object.__setattr__(self, "coeffs", _trim(coeffs))

    @property
    def degree(self) -> int | None:
        return len(self.coeffs) - 1 if self.coeffs else None

    @property
    def dim(self) -> int:
        return 1

    def __call__(self, z):
        return eval1(self, z)

    def __add__(self, other: "Poly1") -> "Poly1":
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [0] * (n - len(self.coeffs))
        b = list(other.coeffs) + [0] * (n - len(other.coeffs))
        return Poly1([x + y for x, y in zip(a, b)])

    def scale(self, alpha: Number) -> "Poly1":
        return Poly1([alpha * c for c in self.coeffs])

    @classmethod
    def from_roots(cls, roots: Sequence[Number]) -> "Poly1":
        c = np.array([1.0 + 0j])
        for r in roots:
            c = np.concatenate([[0], c]) - r * np.concatenate([c, [0]])
        return cls(c)


@dataclass(frozen=True)
class Poly2:
    """Polynomial in (z, w) with dense triangular storage.

    ``coeffs[i][j]`` is the coefficient of ``z**i * w**j`` and row ``i`` has
    ``degree - i + 1`` entries. Accepts a ``{(i, j): c}`` mapping, a sequence of
    ``((i, j), c)`` pairs, or a square array.
    """

    coeffs: tuple[tuple[complex, ...], ...]

    def __init__(self, terms=()):
        if isinstance(terms, np.ndarray):
            items = [((i, j), terms[i, j]) for i in range(terms.shape[0]) for j in range(terms.shape[1])]
        elif isinstance(terms, dict):
            items = list(terms.items())
        else:
            items = list(terms)
        acc: dict[tuple[int, int], complex] = {}
        for (i, j), c in items:
            if i < 0 or j < 0:
                raise ValueError(f"negative exponent ({i}, {j})")
            acc[(int(i), int(j))] = acc.get((int(i), int(j)), 0j) + complex(c)
        nz = [k for k, v in acc.items() if v != 0]
        if not nz:
            object.__setattr__(self, "coeffs", ())
            return
        d = max(i + j for i, j in nz)
        rows = tuple(tuple(acc.get((i, j), 0j) for j in range(d - i + 1)) for i in range(d + 1))
        object.__setattr__(self, "coeffs", rows)

    @property
    def degree(self) -> int | None:
        return len(self.coeffs) - 1 if self.coeffs else None

    @property
    def dim(self) -> int:
        return 2

    @property
    def terms(self) -> dict[tuple[int, int], complex]:
        return {(i, j): c for i, row in enumerate(self.coeffs) for j, c in enumerate(row) if c != 0}

    def coefficient(self, i: int, j: int) -> complex:
        if i < len(self.coeffs) and j < len(self.coeffs[i]):
            return self.coeffs[i][j]
        return 0j

    def to_array(self) -> np.ndarray:
        d = self.degree
        if d is None:
            return np.zeros((1, 1), dtype=complex)
        a = np.zeros((d + 1, d + 1), dtype=complex)
        for i, row in enumerate(self.coeffs):
            a[i, : len(row)] = row
        return a

    def __call__(self, z, w):
        return eval2(self, z, w)

    def __add__(self, other: "Poly2") -> "Poly2":
        return Poly2(list(self.terms.items()) + list(other.terms.items()))

    def scale(self, alpha: Number) -> "Poly2":
        return Poly2({k: alpha * c for k, c in self.terms.items()})


Poly = Union[Poly1, Poly2]


def eval1(p: Poly1, z):
    """Horner evaluation; ``z`` may be a scalar or an array."""
    z = np.asarray(z, dtype=complex)
    acc = np.zeros_like(z)
    for c in reversed(p.coeffs):
        acc = acc * z + c
    return acc[()] if acc.ndim == 0 else acc


def eval2(p: Poly2, z, w):
    """Nested Horner: inner in w, outer in z."""
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    z, w = np.broadcast_arrays(z, w)
    a = p.to_array()
    acc = np.zeros(z.shape, dtype=complex)
    for i in range(a.shape[0] - 1, -1, -1):
        inner = np.zeros(z.shape, dtype=complex)
        for j in range(a.shape[1] - 1 - i, -1, -1):
            inner = inner * w + a[i, j]
        acc = acc * z + inner
    return acc[()] if acc.ndim == 0 else acc


def monomial_basis(dimension: int, degree: int) -> list[tuple[int, ...]]:
    """Exponent tuples of all monomials of total degree <= ``degree``.

    Graded-lex order, higher z-power first within a degree: 1, z, w, z^2, zw, w^2, ...
    """
    if degree < 0:
        raise ValueError("degree must be >= 0")
    if dimension == 1:
        return [(k,) for k in range(degree + 1)]
    if dimension == 2:
        return [(t - j, j) for t in range(degree + 1) for j in range(t + 1)]
    raise ValueError(f"dimension must be 1 or 2, got {dimension}")


def basis_values(basis: Sequence[tuple[int, ...]], points: np.ndarray) -> np.ndarray:
    """Matrix ``V[k, j] = phi_j(points[k])`` for a monomial basis.

    ``points`` has shape (N,) for one variable and (N, 2) for two.
    """
    pts = np.asarray(points, dtype=complex)
    if pts.ndim == 1:
        pts = pts[:, None]
    dim = pts.shape[1]
    top = max(max(e) for e in basis)
    powers = [np.vander(pts[:, a], top + 1, increasing=True) for a in range(dim)]
    out = np.ones((pts.shape[0], len(basis)), dtype=complex)
    for j, e in enumerate(basis):
        for a in range(dim):
            if e[a]:
                out[:, j] *= powers[a][:, e[a]]
    return out


def from_basis(basis: Sequence[tuple[int, ...]], coeffs: Sequence[Number]) -> Poly:
    if len(basis) != len(coeffs):
        raise ValueError("basis and coefficient lengths differ")
    dim = len(basis[0])
    if dim == 1:
        top = max(e[0] for e in basis)
        c = [0j] * (top + 1)
        for e, v in zip(basis, coeffs):
            c[e[0]] += v
        return Poly1(c)
    return Poly2([(tuple(e), v) for e, v in zip(basis, coeffs)])


def to_basis(p: Poly, basis: Sequence[tuple[int, ...]] | None = None) -> np.ndarray:
    """Coefficient vector of ``p`` in ``basis`` (graded-lex of its own degree by default)."""
    if basis is None:
        basis = monomial_basis(p.dim, p.degree or 0)
    if isinstance(p, Poly1):
        lookup = {(k,): c for k, c in enumerate(p.coeffs)}
    else:
        lookup = p.terms
    known = set(map(tuple, basis))
    if any(k not in known for k in lookup):
        raise ValueError("polynomial has terms outside the basis")
    return np.array([lookup.get(tuple(e), 0j) for e in basis], dtype=complex)


def sup_norm(p: Poly, K) -> float:
    """Largest modulus of ``p`` over the points of a sampled set."""
    if p.dim != K.dimension:
        raise ValueError(f"dimension mismatch: polynomial dim {p.dim}, set dim {K.dimension}")
    if K.dimension == 1:
        vals = eval1(p, K.points)
    else:
        vals = eval2(p, K.points[:, 0], K.points[:, 1])
    return float(np.max(np.abs(vals)))


def poly_to_json(p: Poly) -> dict:
    d = p.degree
    if d is None:
        return {"dim": p.dim, "degree": None, "coeffs": []}
    c = to_basis(p, monomial_basis(p.dim, d))
    return {"dim": p.dim, "degree": d, "coeffs": [[float(v.real), float(v.imag)] for v in c]}


def poly_from_json(obj: dict) -> Poly:
    dim, d = int(obj["dim"]), obj["degree"]
    if d is None:
        return Poly1() if dim == 1 else Poly2()
    basis = monomial_basis(dim, int(d))
    coeffs = [complex(re, im) for re, im in obj["coeffs"]]
    if len(coeffs) != len(basis):
        raise ValueError(f"expected {len(basis)} coefficients for dim {dim} degree {d}")
    return from_basis(basis, coeffs)
