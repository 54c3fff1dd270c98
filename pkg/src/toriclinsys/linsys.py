"""Linear systems with torus-fixed base points: dimensions, h^1, witnesses.

A system is an ample divisor D plus one multiplicity per fixed point (one per
maximal cone; unmarked points carry multiplicity 0).  Everything reduces to
exact lattice counts:

* The monomial section of a lattice point m vanishes at the fixed point of
  cone sigma_i to order sum_j (<m, v_j> + alpha_j) over the rays of sigma_i;
  these summands are the coordinates of m - V_i in the dual basis of sigma_i
  and are nonnegative on the polytope.
* Requiring multiplicity m_i cuts the points of order < m_i.  Counting the
  survivors gives the effective dimension; the virtual dimension subtracts
  C(m_i + n - 1, n) conditions per point from the complete system instead.
* h^1 is the difference, which is always >= 0 here, and the system is special
  when it is positive.

The wall criterion scans the invariant curves through pairs of fixed points:
a wall is a witness when (degree of D on the curve) - m_j - m_k <= -2,
equivalently m_j + m_k exceeds the edge's lattice points.  Witness search and
the counting oracle are independent routes; :func:`speciality_report` raises
:class:`CriterionMismatch` whenever they disagree.

Multiplicities at every fixed point default to 0 and the witness scan runs
over all walls, so single-point speciality is found on walls with an
unmarked endpoint.  ``strict_marked=True`` restricts the scan to walls whose
endpoints are both marked (comparison mode; no mismatch diagnostics there).
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from math import comb
from typing import Mapping, Sequence

from .divisor import (
    LatticePolytope,
    ToricDivisor,
    curve_degree,
    divisor,
    is_ample,
    lattice_points,
    polytope_of,
)
from .errors import CriterionMismatch, InputError, InternalError, NotAmpleError
from .fan import Fan, Wall, fan_from_json_dict, fan_to_json_dict, load_fan, walls
from .lattice import Vec, dot


@dataclass(frozen=True)
class LinearSystemSpec:
    divisor: ToricDivisor
    mults: tuple[int, ...]  # one entry per maximal cone; 0 = unmarked

    @property
    def fan(self) -> Fan:
        return self.divisor.fan


def linear_system(
    d: ToricDivisor, mults: Mapping[int, int] | Sequence[int], require_ample: bool = True
) -> LinearSystemSpec:
    """Build a system spec; refuses non-ample divisors with NotAmpleError."""
    k = len(d.fan.max_cones)
    if isinstance(mults, Mapping):
        vec = [0] * k
        for key, m in mults.items():
            i = int(key)
            if not 0 <= i < k:
                raise InputError(f"multiplicity refers to cone {i}, but there are {k} cones")
            vec[i] = int(m)
    else:
        vec = [int(m) for m in mults]
        if len(vec) != k:
            raise InputError(f"need one multiplicity per cone ({k}), got {len(vec)}")
    if any(m < 0 for m in vec):
        raise InputError("multiplicities must be >= 0")
    if require_ample and not is_ample(d):
        raise NotAmpleError("divisor is not ample; the speciality pipeline requires ampleness")
    return LinearSystemSpec(d, tuple(vec))


def multiplicity_at(d: ToricDivisor, m: Vec, cone_index: int) -> int:
    """Vanishing order of the monomial section of m at the fixed point of a cone.

    Sums the dual-basis coordinates of m - V_i, i.e. <m, v_j> + alpha_j over
    the cone's rays.  Negative coordinates mean m is outside the polytope.
    """
    if not 0 <= cone_index < len(d.fan.max_cones):
        raise InputError(f"cone index {cone_index} out of range")
    total = 0
    for i in d.fan.max_cones[cone_index]:
        c = dot(m, d.fan.rays[i]) + d.alpha[i]
        if c < 0:
            raise InputError(f"{m} lies outside the polytope (ray {i} defect {c})")
        total += c
    return total


def conditions_count(m: int, n: int) -> int:
    """Number of linear conditions a point of multiplicity m imposes in dim n."""
    return comb(m + n - 1, n)


def virtual_dim(spec: LinearSystemSpec) -> int:
    pts = lattice_points(polytope_of(spec.divisor))
    return _virtual_dim_from_count(spec, len(pts))


def _virtual_dim_from_count(spec: LinearSystemSpec, npoints: int) -> int:
    n = spec.fan.dim
    return npoints - sum(conditions_count(m, n) for m in spec.mults) - 1


def _marked(spec: LinearSystemSpec) -> list[int]:
    return [i for i, m in enumerate(spec.mults) if m > 0]


def split_points(
    spec: LinearSystemSpec, pts: list[Vec] | None = None
) -> tuple[list[Vec], list[Vec]]:
    """(kept, cut) lattice points: cut = failing some multiplicity condition."""
    if pts is None:
        pts = lattice_points(polytope_of(spec.divisor))
    marked = _marked(spec)
    kept, cut = [], []
    for m in pts:
        ok = True
        for i in marked:
            if multiplicity_at(spec.divisor, m, i) < spec.mults[i]:
                ok = False
                break
        (kept if ok else cut).append(m)
    return kept, cut


def effective_dim(spec: LinearSystemSpec) -> int:
    """Exact h^0 of the system minus one; -1 for the empty system.

    Torus-invariance of the base scheme makes the surviving-monomial count
    exact, so no general interpolation machinery is needed.
    """
    kept, _ = split_points(spec)
    return len(kept) - 1


def h1(spec: LinearSystemSpec) -> int:
    pts = lattice_points(polytope_of(spec.divisor))
    kept, _ = split_points(spec, pts)
    value = (len(kept) - 1) - _virtual_dim_from_count(spec, len(pts))
    if value < 0:
        raise InternalError(f"negative h1 = {value}; counting oracle inconsistent")
    return value


def system_curve_intersection(spec: LinearSystemSpec, w: Wall) -> int:
    """Degree of the system on a wall's invariant curve after the base points.

    Strict-transform arithmetic collapses to the curve degree minus the
    multiplicities at the two fixed points the curve joins.
    """
    return curve_degree(spec.divisor, w) - spec.mults[w.cone_a] - spec.mults[w.cone_b]


def speciality_witnesses(
    spec: LinearSystemSpec, strict_marked: bool = False
) -> list[tuple[Wall, int]]:
    """All walls with system intersection <= -2, in canonical wall order."""
    out = []
    for w in walls(spec.fan):
        if strict_marked and (spec.mults[w.cone_a] == 0 or spec.mults[w.cone_b] == 0):
            continue
        value = system_curve_intersection(spec, w)
        if value <= -2:
            out.append((w, value))
    return out


def speciality_witness(
    spec: LinearSystemSpec, strict_marked: bool = False
) -> tuple[Wall, int] | None:
    found = speciality_witnesses(spec, strict_marked)
    return found[0] if found else None


@dataclass(frozen=True)
class SpecialityReport:
    virtual_dim: int
    effective_dim: int
    h1: int
    special: bool
    witnesses: tuple[tuple[Wall, int], ...]

    def to_json_dict(self) -> dict:
        return {
            "virtual_dim": self.virtual_dim,
            "effective_dim": self.effective_dim,
            "h1": self.h1,
            "special": self.special,
            "witnesses": [dict(w.to_json_dict(), value=v) for w, v in self.witnesses],
        }


def speciality_report(spec: LinearSystemSpec, strict_marked: bool = False) -> SpecialityReport:
    """Full report; cross-checks the counting oracle against the wall criterion.

    In the default all-fixed-points mode a disagreement between h^1 > 0 and
    witness existence raises CriterionMismatch with a reproducer.  In
    strict-marked mode the scan is deliberately narrower, so no cross-check
    is performed.
    """
    pts = lattice_points(polytope_of(spec.divisor))
    kept, _ = split_points(spec, pts)
    v = _virtual_dim_from_count(spec, len(pts))
    eff = len(kept) - 1
    h_one = eff - v
    if h_one < 0:
        raise InternalError(f"negative h1 = {h_one}; counting oracle inconsistent")
    found = speciality_witnesses(spec, strict_marked)
    special = h_one > 0
    if not strict_marked and special != bool(found):
        raise CriterionMismatch(
            f"counting oracle says special={special} but witness walls = "
            f"{[w.facet_rays for w, _ in found]}",
            reproducer=system_to_json_dict(spec, inline_fan=True)
            | {"h1": h_one, "witnesses": [dict(w.to_json_dict(), value=val) for w, val in found]},
        )
    return SpecialityReport(v, eff, h_one, special, tuple(found))


# ---------------------------------------------------------------------------
# JSON interface


def system_to_json_dict(spec: LinearSystemSpec, inline_fan: bool = True) -> dict:
    return {
        "fan": fan_to_json_dict(spec.fan) if inline_fan else None,
        "alpha": list(spec.divisor.alpha),
        "mults": {str(i): m for i, m in enumerate(spec.mults) if m > 0},
    }


def system_from_json_dict(
    obj: dict,
    base_dir: str = ".",
    check: bool = True,
    require_ample: bool = True,
) -> LinearSystemSpec:
    try:
        fan_field = obj["fan"]
        alpha = obj["alpha"]
        mults = obj.get("mults", {})
    except (KeyError, TypeError) as exc:
        raise InputError(f"system JSON needs 'fan', 'alpha' and optional 'mults': {exc}") from exc
    if isinstance(fan_field, str):
        fan = load_fan(os.path.join(base_dir, fan_field), check=check)
    elif isinstance(fan_field, dict):
        fan = fan_from_json_dict(fan_field, check=check)
    else:
        raise InputError("'fan' must be a file path or an inline fan object")
    return linear_system(divisor(fan, alpha), mults, require_ample=require_ample)


def load_system(path: str, check: bool = True, require_ample: bool = True) -> LinearSystemSpec:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InputError(f"{path}: not valid JSON ({exc})") from exc
    return system_from_json_dict(
        obj, base_dir=os.path.dirname(os.path.abspath(path)), check=check, require_ample=require_ample
    )
