"""Nonsingular complete fans, their walls, and the standard constructors.

A fan is stored as primitive ray generators plus the maximal cones as sets of
ray indices.  Maximal cones are in bijection with the torus-fixed points; a
wall (a shared facet of two maximal cones) is in bijection with the invariant
curve joining the two fixed points.

Every wall satisfies an integer relation

    v_a + v_b + gamma_1 w_1 + ... + gamma_{n-1} w_{n-1} = 0

where w_* are the facet rays and v_a, v_b the two rays completing the facet
to its adjacent cones.  The sign convention is fixed once and for all by the
coefficient +1 on both v_a and v_b; the degree formula in
:mod:`toriclinsys.divisor` depends on it.

Completeness of user-supplied fans is certified by a proxy: every facet must
be shared by exactly two maximal cones and the facet graph must be connected.
In dimension 2 an exact angular-coverage check is performed in addition, so
2D validation is sound and complete.  In higher dimension the proxy accepts
some non-complete configurations in principle; all built-in constructors are
complete by construction.

Fans are immutable after construction and safe to share across threads.
"""

from __future__ import annotations

import functools
import json
from dataclasses import dataclass
from itertools import combinations

from .errors import InputError, InternalError
from .lattice import (
    Vec,
    determinant,
    dual_basis,
    is_primitive,
    unimodular_solve,
    vadd,
    vneg,
)


@dataclass(frozen=True)
class Fan:
    dim: int
    rays: tuple[Vec, ...]
    max_cones: tuple[tuple[int, ...], ...]

    def cone_rays(self, cone_index: int) -> tuple[Vec, ...]:
        return tuple(self.rays[i] for i in self.max_cones[cone_index])

    def __repr__(self):  # keep reprs short; fans appear in fuzz reproducers
        return f"Fan(dim={self.dim}, rays={len(self.rays)}, cones={len(self.max_cones)})"


def make_fan(dim: int, rays, cones) -> Fan:
    """Build a Fan after structural normalization (no completeness checks here).

    Raises InputError for shape problems: wrong vector dimensions, cone index
    out of range, or a cone whose size differs from ``dim``.  Geometric
    soundness is the job of :func:`validate`.
    """
    dim = int(dim)
    if dim < 1:
        raise InputError("fan dimension must be >= 1")
    rays_t = tuple(tuple(int(c) for c in r) for r in rays)
    for i, r in enumerate(rays_t):
        if len(r) != dim:
            raise InputError(f"ray {i} has dimension {len(r)}, expected {dim}")
    cones_t = []
    for k, cone in enumerate(cones):
        idx = tuple(sorted(int(i) for i in cone))
        if len(idx) != dim or len(set(idx)) != dim:
            raise InputError(f"cone {k} must consist of {dim} distinct ray indices")
        if idx[0] < 0 or idx[-1] >= len(rays_t):
            raise InputError(f"cone {k} references a ray index out of range")
        cones_t.append(idx)
    return Fan(dim, rays_t, tuple(cones_t))


# ---------------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class CheckResult:
    name: str
    ok: bool
    detail: str = ""


@dataclass(frozen=True)
class ValidationReport:
    checks: tuple[CheckResult, ...]

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def failures(self) -> list[CheckResult]:
        return [c for c in self.checks if not c.ok]

    def summary(self) -> str:
        lines = []
        for c in self.checks:
            status = "ok" if c.ok else "FAIL"
            lines.append(f"{c.name}: {status}" + (f" ({c.detail})" if c.detail else ""))
        return "\n".join(lines)


def _ccw_key(rays):
    """Comparator-based counterclockwise order of 2D rays, exact arithmetic."""

    def half(v):
        x, y = v
        return 0 if (y > 0 or (y == 0 and x > 0)) else 1

    def cmp(i, j):
        a, b = rays[i], rays[j]
        ha, hb = half(a), half(b)
        if ha != hb:
            return -1 if ha < hb else 1
        cross = a[0] * b[1] - a[1] * b[0]
        if cross == 0:
            return 0
        return -1 if cross > 0 else 1

    return functools.cmp_to_key(cmp)


def validate(fan: Fan) -> ValidationReport:
    """Check the fan invariants and report each one with the offender named.

    Checks: primitive distinct rays, unimodular maximal cones, every facet
    shared by exactly two cones, connected facet graph, and (dimension <= 2)
    an exact completeness test via the angular order of the rays.
    """
    checks: list[CheckResult] = []
    n = fan.dim

    bad = [i for i, r in enumerate(fan.rays) if not is_primitive(r)]
    checks.append(
        CheckResult("rays-primitive", not bad, f"non-primitive rays {bad}" if bad else "")
    )
    dupes = len(fan.rays) != len(set(fan.rays))
    checks.append(CheckResult("rays-distinct", not dupes, "duplicate rays" if dupes else ""))

    non_unimodular = []
    for k in range(len(fan.max_cones)):
        try:
            d = determinant(fan.cone_rays(k))
        except InputError:
            d = 0
        if d not in (1, -1):
            non_unimodular.append((k, d))
    checks.append(
        CheckResult(
            "cones-unimodular",
            not non_unimodular,
            f"cones with |det| != 1: {non_unimodular}" if non_unimodular else "",
        )
    )

    facet_map: dict[tuple[int, ...], list[int]] = {}
    for k, cone in enumerate(fan.max_cones):
        for facet in combinations(cone, n - 1):
            facet_map.setdefault(tuple(facet), []).append(k)
    unpaired = sorted(f for f, ks in facet_map.items() if len(ks) != 2)
    checks.append(
        CheckResult(
            "facets-paired",
            not unpaired,
            f"facets not shared by exactly two cones: {unpaired}" if unpaired else "",
        )
    )

    connected = True
    if fan.max_cones:
        seen = {0}
        frontier = [0]
        adj: dict[int, set[int]] = {k: set() for k in range(len(fan.max_cones))}
        for ks in facet_map.values():
            if len(ks) == 2:
                adj[ks[0]].add(ks[1])
                adj[ks[1]].add(ks[0])
        while frontier:
            k = frontier.pop()
            for j in adj[k]:
                if j not in seen:
                    seen.add(j)
                    frontier.append(j)
        connected = len(seen) == len(fan.max_cones)
    checks.append(
        CheckResult("facet-graph-connected", connected, "" if connected else "facet graph splits")
    )

    if n == 1:
        ok = set(fan.rays) == {(1,), (-1,)} and len(fan.max_cones) == 2
        checks.append(CheckResult("coverage-1d", ok, "" if ok else "1D fan must be {(1), (-1)}"))
    elif n == 2:
        ok = True
        detail = ""
        m = len(fan.rays)
        if len(fan.max_cones) != m or m < 3:
            ok, detail = False, f"{m} rays but {len(fan.max_cones)} cones"
        else:
            order = sorted(range(m), key=_ccw_key(fan.rays))
            expected = {frozenset((order[i], order[(i + 1) % m])) for i in range(m)}
            actual = {frozenset(c) for c in fan.max_cones}
            if expected != actual:
                ok, detail = False, "cones are not the consecutive pairs of the angular order"
            else:
                for i in range(m):
                    a = fan.rays[order[i]]
                    b = fan.rays[order[(i + 1) % m]]
                    if a[0] * b[1] - a[1] * b[0] <= 0:
                        ok, detail = False, f"rays {order[i]},{order[(i + 1) % m]} span >= half plane"
                        break
        checks.append(CheckResult("coverage-2d", ok, detail))

    return ValidationReport(tuple(checks))


def require_valid(fan: Fan) -> Fan:
    report = validate(fan)
    if not report.ok:
        raise InputError("invalid fan: " + "; ".join(c.detail or c.name for c in report.failures()))
    return fan


# ---------------------------------------------------------------------------
# walls


@dataclass(frozen=True)
class Wall:
    """Shared facet of two maximal cones; carries the wall relation.

    ``extra_rays`` holds the two rays completing the facet, lowest ray index
    first; ``cone_a``/``cone_b`` are the adjacent maximal cones in the same
    order.  ``gamma`` is aligned with ``facet_rays`` and satisfies

        rays[extra_a] + rays[extra_b] + sum_i gamma_i * rays[facet_i] = 0.
    """

    facet_rays: tuple[int, ...]
    cone_a: int
    cone_b: int
    extra_rays: tuple[int, int]
    gamma: tuple[int, ...]

    def to_json_dict(self) -> dict:
        return {
            "facet_rays": list(self.facet_rays),
            "cones": [self.cone_a, self.cone_b],
            "extra_rays": list(self.extra_rays),
            "gamma": list(self.gamma),
        }


def _wall_gamma(fan: Fan, facet: tuple[int, ...], extra_a: int, extra_b: int) -> tuple[int, ...]:
    basis = [fan.rays[i] for i in facet] + [fan.rays[extra_a]]
    coeffs = unimodular_solve(basis, vneg(fan.rays[extra_b]))
    if coeffs[-1] != 1:
        raise InternalError(
            f"wall relation at facet {facet} has coefficient {coeffs[-1]} on the opposite ray; "
            "fan is not smooth-complete as paired"
        )
    return tuple(coeffs[:-1])


def walls(fan: Fan) -> list[Wall]:
    """All walls in canonical order (sorted facet-ray index tuples)."""
    facet_map: dict[tuple[int, ...], list[int]] = {}
    for k, cone in enumerate(fan.max_cones):
        for facet in combinations(cone, fan.dim - 1):
            facet_map.setdefault(tuple(facet), []).append(k)
    out = []
    for facet in sorted(facet_map):
        ks = facet_map[facet]
        if len(ks) != 2:
            raise InputError(f"facet {facet} is shared by {len(ks)} cones; fan is not complete")
        extras = []
        for k in ks:
            (e,) = [i for i in fan.max_cones[k] if i not in facet]
            extras.append((e, k))
        extras.sort()
        (ea, ca), (eb, cb) = extras
        out.append(Wall(facet, ca, cb, (ea, eb), _wall_gamma(fan, facet, ea, eb)))
    return out


def cone_dual_basis(fan: Fan, cone_index: int) -> tuple[Vec, ...]:
    """Dual basis of a maximal cone's rays; pairs to the identity against them."""
    return dual_basis(fan.cone_rays(cone_index))


# ---------------------------------------------------------------------------
# constructors


def projective_space(n: int) -> Fan:
    """Fan of P^n: the n standard basis rays plus their negative sum."""
    if n < 1:
        raise InputError("projective_space needs n >= 1")
    rays = [tuple(1 if j == i else 0 for j in range(n)) for i in range(n)]
    rays.append(tuple(-1 for _ in range(n)))
    cones = list(combinations(range(n + 1), n))
    return make_fan(n, rays, cones)


def hirzebruch(a: int) -> Fan:
    """Fan of the Hirzebruch surface F_a (a >= 0); F_0 is P^1 x P^1."""
    if a < 0:
        raise InputError("hirzebruch needs a >= 0")
    rays = [(1, 0), (0, 1), (-1, a), (0, -1)]
    cones = [(0, 1), (1, 2), (2, 3), (3, 0)]
    return make_fan(2, rays, cones)


def product(f1: Fan, f2: Fan) -> Fan:
    """Product fan; rays of the factors embedded in complementary coordinates."""
    z1 = (0,) * f1.dim
    z2 = (0,) * f2.dim
    rays = [r + z2 for r in f1.rays] + [z1 + r for r in f2.rays]
    shift = len(f1.rays)
    cones = [
        tuple(c1) + tuple(i + shift for i in c2)
        for c1 in f1.max_cones
        for c2 in f2.max_cones
    ]
    return make_fan(f1.dim + f2.dim, rays, cones)


def blowup_fixed_point(fan: Fan, cone_index: int) -> Fan:
    """Star subdivision at the sum of a maximal cone's rays (equivariant blow-up).

    The sum of a lattice basis is primitive and becomes the new ray; the cone
    is replaced by one new cone per facet.
    """
    if not 0 <= cone_index < len(fan.max_cones):
        raise InputError(f"cone index {cone_index} out of range")
    cone = fan.max_cones[cone_index]
    new_ray = functools.reduce(vadd, fan.cone_rays(cone_index))
    if not is_primitive(new_ray):
        raise InternalError("sum of a unimodular cone's rays must be primitive")
    new_index = len(fan.rays)
    cones = [c for k, c in enumerate(fan.max_cones) if k != cone_index]
    for facet in combinations(cone, fan.dim - 1):
        cones.append(tuple(facet) + (new_index,))
    return make_fan(fan.dim, fan.rays + (new_ray,), cones)


# ---------------------------------------------------------------------------
# JSON interface


def fan_to_json_dict(fan: Fan) -> dict:
    return {
        "dim": fan.dim,
        "rays": [list(r) for r in fan.rays],
        "cones": [list(c) for c in fan.max_cones],
    }


def fan_from_json_dict(obj: dict, check: bool = True) -> Fan:
    try:
        fan = make_fan(obj["dim"], obj["rays"], obj["cones"])
    except (KeyError, TypeError) as exc:
        raise InputError(f"fan JSON needs 'dim', 'rays', 'cones': {exc}") from exc
    if check:
        require_valid(fan)
    return fan


def load_fan(path: str, check: bool = True) -> Fan:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InputError(f"{path}: not valid JSON ({exc})") from exc
    return fan_from_json_dict(obj, check=check)


def save_fan(fan: Fan, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(fan_to_json_dict(fan), fh, indent=1)
        fh.write("\n")
