"""Invariant divisors, their support polytopes, and invariant-curve degrees.

A divisor D = sum_i alpha_i D_i on the fan determines the support function
h(v_i) = -alpha_i and the polytope

    P = { m : <m, v_i> >= -alpha_i for every ray v_i },

whose lattice points index a monomial basis of the global sections of O(D).
Each maximal cone sigma contributes the vertex V_sigma solving
<V, v> = -alpha_v for the rays v of sigma; D is ample exactly when every
other ray inequality is strict at every vertex (strict convexity of h).

The degree of D on the invariant curve of a wall is

    D . C = sum_i gamma_i alpha_{facet_i} + alpha_a + alpha_b

in the wall-relation convention of :mod:`toriclinsys.fan`; for ample D it
always equals the number of lattice points on the dual polytope edge minus
one, which is this module's core cross-check.

Lattice-point enumeration is a bounding-box scan filtered by the half-space
constraints.  Desk-scale polytopes stay well under 10^6 candidate points, so
exactness and simplicity beat clever counting machinery.  Enumeration is pure
and returns points in lexicographic order.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import InputError
from .fan import Fan, Wall
from .lattice import Vec, dot, segment_lattice_count, solve_unimodular_rows


@dataclass(frozen=True)
class ToricDivisor:
    fan: Fan
    alpha: tuple[int, ...]


def divisor(fan: Fan, alpha) -> ToricDivisor:
    coeffs = tuple(int(a) for a in alpha)
    if len(coeffs) != len(fan.rays):
        raise InputError(
            f"divisor needs one coefficient per ray ({len(fan.rays)}), got {len(coeffs)}"
        )
    return ToricDivisor(fan, coeffs)


@dataclass(frozen=True)
class LatticePolytope:
    """Support polytope of a divisor: half-spaces per ray, one vertex per cone."""

    fan: Fan
    alpha: tuple[int, ...]
    vertices: tuple[Vec, ...]

    def contains(self, m: Vec) -> bool:
        return all(dot(m, v) >= -a for v, a in zip(self.fan.rays, self.alpha))


def polytope_of(d: ToricDivisor) -> LatticePolytope:
    """Vertex map of the support polytope (exact; vertices are integral).

    On a smooth fan the per-cone ray matrix is unimodular, so each vertex is
    the unique integer solution of its cone's equalities.  The vertex map is
    computed for any integer divisor; for non-ample divisors vertices may
    coincide or violate other half-spaces (that is what ampleness checks).
    """
    verts = []
    for k in range(len(d.fan.max_cones)):
        rows = d.fan.cone_rays(k)
        rhs = tuple(-d.alpha[i] for i in d.fan.max_cones[k])
        verts.append(solve_unimodular_rows(rows, rhs))
    return LatticePolytope(d.fan, d.alpha, tuple(verts))


def is_ample(d: ToricDivisor) -> bool:
    """Strict convexity of the support function.

    True iff for every maximal cone sigma and every ray v outside sigma the
    vertex of sigma satisfies <V_sigma, v> > -alpha_v strictly.
    """
    p = polytope_of(d)
    for k, cone in enumerate(d.fan.max_cones):
        inside = set(cone)
        v = p.vertices[k]
        for j, ray in enumerate(d.fan.rays):
            if j in inside:
                continue
            if dot(v, ray) <= -d.alpha[j]:
                return False
    return True


def lattice_points(p: LatticePolytope) -> list[Vec]:
    """All lattice points of the polytope, in lexicographic order.

    Scans the integer bounding box of the vertex map and filters by every
    half-space.  Correct whenever the polytope is the convex hull of the
    vertex map (ample or nef divisors).
    """
    if not p.vertices:
        return []
    n = p.fan.dim
    lo = [min(v[i] for v in p.vertices) for i in range(n)]
    hi = [max(v[i] for v in p.vertices) for i in range(n)]
    out = []
    for m in itertools.product(*(range(a, b + 1) for a, b in zip(lo, hi))):
        if p.contains(m):
            out.append(m)
    return out


def edge_point_count(d: ToricDivisor, w: Wall) -> int:
    """Number of lattice points on the polytope edge dual to a wall."""
    p = polytope_of(d)
    va = p.vertices[w.cone_a]
    vb = p.vertices[w.cone_b]
    if va == vb:
        raise InputError(
            f"wall {w.facet_rays}: adjacent vertices coincide at {va}; divisor is not ample"
        )
    return segment_lattice_count(va, vb)


def curve_degree(d: ToricDivisor, w: Wall) -> int:
    """Intersection number of the divisor with the wall's invariant curve.

    Symmetric in the two extra rays, so their canonical order is irrelevant.
    """
    total = d.alpha[w.extra_rays[0]] + d.alpha[w.extra_rays[1]]
    for g, i in zip(w.gamma, w.facet_rays):
        total += g * d.alpha[i]
    return total
