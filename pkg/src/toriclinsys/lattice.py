"""Exact integer linear algebra on Z^n.

Lattice vectors are plain tuples of Python ints and matrices are tuples of
row vectors, so every operation is exact: Python integers never overflow and
nothing in this module (or anywhere else in the engine) touches floating
point.  Determinants use Bareiss fraction-free elimination; unimodular solves
go through Cramer's rule, which stays in the integers because the divisor of
every quotient is a determinant of absolute value 1.

Only what the fan/polytope layers need lives here: no Smith normal form, no
lattice reduction.
"""

from __future__ import annotations

from math import gcd
from typing import Sequence

from .errors import InputError

Vec = tuple[int, ...]


def vec(coords) -> Vec:
    v = tuple(int(c) for c in coords)
    if not v:
        raise InputError("lattice vectors must have dimension >= 1")
    return v


def dot(u: Vec, v: Vec) -> int:
    if len(u) != len(v):
        raise InputError(f"dimension mismatch: {len(u)} vs {len(v)}")
    return sum(a * b for a, b in zip(u, v))


def vadd(u: Vec, v: Vec) -> Vec:
    return tuple(a + b for a, b in zip(u, v))


def vsub(u: Vec, v: Vec) -> Vec:
    return tuple(a - b for a, b in zip(u, v))


def vneg(u: Vec) -> Vec:
    return tuple(-a for a in u)


def vscale(k: int, u: Vec) -> Vec:
    return tuple(k * a for a in u)


def content(u: Vec) -> int:
    """gcd of the coordinates (0 for the zero vector)."""
    g = 0
    for a in u:
        g = gcd(g, abs(a))
    return g


def is_primitive(u: Vec) -> bool:
    return content(u) == 1


def determinant(vectors: Sequence[Vec]) -> int:
    """Exact determinant of n vectors in Z^n, taken as matrix rows.

    Bareiss elimination: every division below is exact, intermediate entries
    are minors of the input, so growth stays polynomial and the result is an
    exact integer.
    """
    n = len(vectors)
    if n == 0:
        raise InputError("determinant needs at least one vector")
    if any(len(v) != n for v in vectors):
        raise InputError(f"determinant needs {n} vectors of dimension {n}")
    m = [list(row) for row in vectors]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def _replace_column(rows: Sequence[Vec], col: int, rhs: Vec) -> list[Vec]:
    return [row[:col] + (rhs[i],) + row[col + 1:] for i, row in enumerate(rows)]


def solve_unimodular_rows(rows: Sequence[Vec], rhs: Vec) -> Vec:
    """Solve R x = rhs for integer x, where the rows of R form a unimodular matrix.

    Cramer's rule: x_i = det(R with column i replaced by rhs) / det(R), and
    det(R) = +-1 keeps everything integral.
    """
    n = len(rows)
    if len(rhs) != n or any(len(r) != n for r in rows):
        raise InputError("solve needs a square system matching the rhs dimension")
    d = determinant(rows)
    if d not in (1, -1):
        raise InputError(f"matrix is not unimodular (det = {d})")
    return tuple(d * determinant(_replace_column(rows, j, rhs)) for j in range(n))


def unimodular_solve(basis: Sequence[Vec], target: Vec) -> Vec:
    """Integer coefficients c with sum_i c_i * basis_i = target.

    The basis must be unimodular (|det| = 1), which makes the coefficients
    unique integers.
    """
    n = len(basis)
    if any(len(b) != n for b in basis) or len(target) != n:
        raise InputError(f"need {n} basis vectors of dimension {n} and a matching target")
    # The basis vectors are the columns of the system matrix.
    rows = [tuple(b[i] for b in basis) for i in range(n)]
    return solve_unimodular_rows(rows, target)


def unimodular_inverse(rows: Sequence[Vec]) -> tuple[Vec, ...]:
    """Exact inverse of a unimodular integer matrix, given and returned as rows."""
    n = len(rows)
    cols = []
    for j in range(n):
        e = tuple(1 if i == j else 0 for i in range(n))
        cols.append(solve_unimodular_rows(rows, e))
    return tuple(tuple(cols[j][i] for j in range(n)) for i in range(n))


def dual_basis(rays: Sequence[Vec]) -> tuple[Vec, ...]:
    """Vectors u_j with <u_j, rays_i> = delta_ij, for a unimodular ray basis."""
    inv = unimodular_inverse(rays)
    n = len(rays)
    return tuple(tuple(inv[i][j] for i in range(n)) for j in range(n))


def segment_lattice_count(p: Vec, q: Vec) -> int:
    """Number of lattice points on the closed segment [p, q].

    Equals gcd of the coordinate differences plus one; a degenerate segment
    (p = q) counts a single point.
    """
    if len(p) != len(q):
        raise InputError("segment endpoints must share a dimension")
    return content(vsub(q, p)) + 1
