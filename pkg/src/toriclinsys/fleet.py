"""Seeded random fleets and the identity/criterion fuzz runners.

Everything is driven by ``random.Random(seed)``, so each runner is
deterministic per seed and every violation comes with a JSON-able reproducer.
Runners evaluate instances independently; results do not depend on the order
of evaluation.

Random 2D fans start from P^2 or a Hirzebruch surface F_a (a <= 4) and apply
equivariant blow-ups.  The matching random ample divisor is built
inductively: on each blow-up all coefficients are doubled and the new ray
gets the sum of its two parent coefficients minus one, then strict convexity
is verified (with rescale-and-retry as a backstop).  For user-supplied 2D
fans, where no blow-up history exists, a random ample divisor is built
directly as a lattice polygon with one edge of positive length per ray.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .divisor import (
    ToricDivisor,
    curve_degree,
    divisor,
    edge_point_count,
    is_ample,
    lattice_points,
    polytope_of,
)
from .errors import CriterionMismatch, InputError, InternalError
from .fan import Fan, blowup_fixed_point, fan_to_json_dict, hirzebruch, projective_space, product, walls
from .lattice import dot, unimodular_solve
from .linsys import (
    LinearSystemSpec,
    conditions_count,
    linear_system,
    multiplicity_at,
    speciality_report,
    system_to_json_dict,
)
from .picard import (
    PicardClass,
    candidate_curves,
    fa_model,
    genus,
    intersect,
    is_minus_one_special,
    p2_model,
    picard_class,
    picard_class_of_system,
    reduce as picard_reduce,
    rr_virtual_dim,
)

MAX_RANDOM_STEPS = 12


# ---------------------------------------------------------------------------
# random fans and divisors


def _random_base(rng: random.Random) -> tuple[Fan, list[int]]:
    if rng.random() < 0.3:
        fan = projective_space(2)
    else:
        fan = hirzebruch(rng.randint(0, 4))
    for _ in range(40):
        alpha = [rng.randint(0, 3) for _ in fan.rays]
        if is_ample(divisor(fan, alpha)):
            return fan, alpha
    scale = rng.randint(1, 2)
    if len(fan.rays) == 3:
        alpha = [0, 0, scale]
    else:
        a = fan.rays[2][1]
        alpha = [0, 0, scale, scale * (a + 1)]
    return fan, alpha


def _bump_alpha(alpha: list[int], i: int, j: int) -> list[int]:
    doubled = [2 * a for a in alpha]
    return doubled + [doubled[i] + doubled[j] - 1]


def random_fan_divisor_2d(seed, steps: int) -> tuple[Fan, ToricDivisor]:
    """Random smooth complete 2D fan with a matching random ample divisor."""
    if steps > MAX_RANDOM_STEPS or steps < 0:
        raise InputError(f"steps must be between 0 and {MAX_RANDOM_STEPS}")
    rng = random.Random(seed)
    return _random_fan_divisor(rng, steps)


def _random_fan_divisor(rng: random.Random, steps: int) -> tuple[Fan, ToricDivisor]:
    fan, alpha = _random_base(rng)
    for _ in range(steps):
        k = rng.randrange(len(fan.max_cones))
        i, j = fan.max_cones[k]
        new_fan = blowup_fixed_point(fan, k)
        new_alpha = _bump_alpha(alpha, i, j)
        for _ in range(6):
            if is_ample(divisor(new_fan, new_alpha)):
                break
            alpha = [2 * a for a in alpha]
            new_alpha = _bump_alpha(alpha, i, j)
        else:
            raise InternalError("could not restore ampleness after blow-up")
        fan, alpha = new_fan, new_alpha
    return fan, divisor(fan, alpha)


def random_fan_2d(seed, steps: int) -> Fan:
    """Deterministic random 2D fan: seed-chosen base plus ``steps`` blow-ups."""
    return random_fan_divisor_2d(seed, steps)[0]


def random_ample_on(fan: Fan, rng: random.Random, spread: int = 3) -> ToricDivisor:
    """Random ample divisor on an arbitrary valid 2D fan.

    Builds a lattice polygon with one edge per ray: positive integer edge
    lengths l_i with sum_i l_i v_i = 0 close up into a convex polygon whose
    inner edge normals are exactly the rays, and its support coefficients are
    ample by construction (verified).
    """
    if fan.dim != 2:
        raise InputError("random_ample_on only supports 2D fans")
    m = len(fan.rays)
    lengths = [1] * m
    total = tuple(sum(r[c] for r in fan.rays) for c in range(2))
    deficit = (-total[0], -total[1])
    if deficit != (0, 0):
        lengths = _absorb(fan, lengths, deficit)
    scale = rng.randint(1, spread)
    lengths = [scale * l for l in lengths]
    for _ in range(rng.randint(0, 4)):
        w = (rng.randint(-3, 3), rng.randint(-3, 3))
        if w == (0, 0):
            continue
        lengths = _absorb(fan, lengths, w)
        lengths = _absorb(fan, lengths, (-w[0], -w[1]))

    order = sorted(range(m), key=_ccw_sort_key(fan))
    alpha = [0] * m
    point = (0, 0)
    for idx in order:
        v = fan.rays[idx]
        alpha[idx] = -dot(point, v)
        point = (point[0] + lengths[idx] * v[1], point[1] - lengths[idx] * v[0])
    if point != (0, 0):
        raise InternalError("edge vectors did not close up")
    d = divisor(fan, alpha)
    if not is_ample(d):
        raise InternalError("edge-length construction produced a non-ample divisor")
    return d


def _absorb(fan: Fan, lengths: list[int], w) -> list[int]:
    """Add nonnegative cone coordinates of w to the edge lengths (keeps closure)."""
    for cone in fan.max_cones:
        rays = [fan.rays[i] for i in cone]
        coeffs = unimodular_solve(rays, tuple(w))
        if all(c >= 0 for c in coeffs):
            out = list(lengths)
            for c, i in zip(coeffs, cone):
                out[i] += c
            return out
    raise InternalError(f"no cone contains {w}; fan is not complete")


def _ccw_sort_key(fan: Fan):
    import functools

    def half(v):
        return 0 if (v[1] > 0 or (v[1] == 0 and v[0] > 0)) else 1

    def cmp(i, j):
        a, b = fan.rays[i], fan.rays[j]
        if half(a) != half(b):
            return -1 if half(a) < half(b) else 1
        cross = a[0] * b[1] - a[1] * b[0]
        return 0 if cross == 0 else (-1 if cross > 0 else 1)

    return functools.cmp_to_key(cmp)


def random_product_3d(rng: random.Random) -> tuple[Fan, ToricDivisor]:
    """Random 3D product fan (P^1/P^2/F_a factors) with a small ample divisor."""
    p1 = projective_space(1)

    def p1_alpha():
        return [rng.randint(0, 2), rng.randint(1, 2)]

    choice = rng.randrange(3)
    if choice == 0:
        fan = product(product(p1, p1), p1)
        alpha = p1_alpha() + p1_alpha() + p1_alpha()
    elif choice == 1:
        fan = product(projective_space(2), p1)
        alpha = [0, 0, rng.randint(1, 3)] + p1_alpha()
    else:
        fa = hirzebruch(rng.randint(0, 3))
        fan = product(fa, p1)
        a = fa.rays[2][1]
        alpha = [0, 0, rng.randint(1, 2), rng.randint(1, 2) * (a + 1)] + p1_alpha()
    d = divisor(fan, alpha)
    if not is_ample(d):
        raise InternalError("product of ample factor divisors must be ample")
    return fan, d


def _random_mults(rng: random.Random, ncones: int, max_mult: int, zero_bias: float) -> dict[int, int]:
    mults = {}
    for i in range(ncones):
        if rng.random() >= zero_bias:
            mults[i] = rng.randint(1, max_mult)
    return mults


def random_system_2d(
    seed, steps: int, max_mult: int = 6, zero_bias: float = 0.55
) -> LinearSystemSpec:
    rng = random.Random(seed)
    fan, d = _random_fan_divisor(rng, steps)
    return linear_system(d, _random_mults(rng, len(fan.max_cones), max_mult, zero_bias))


# ---------------------------------------------------------------------------
# degree = edge points - 1


@dataclass(frozen=True)
class EdgeFuzzSummary:
    trials: int
    walls_checked: int
    violations: tuple[dict, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


def degree_edge_violations(d: ToricDivisor) -> list[dict]:
    """Walls where the invariant-curve degree differs from edge points minus 1."""
    out = []
    for w in walls(d.fan):
        deg = curve_degree(d, w)
        pts = edge_point_count(d, w)
        if deg != pts - 1:
            out.append(
                {
                    "fan": fan_to_json_dict(d.fan),
                    "alpha": list(d.alpha),
                    "wall": w.to_json_dict(),
                    "degree": deg,
                    "edge_points": pts,
                }
            )
    return out


def run_edge_degree_fuzz(
    trials_2d: int, seed, trials_3d: int = 0, max_steps: int = 5, fan: Fan | None = None
) -> EdgeFuzzSummary:
    """Random ample divisors; asserts degree = edge points - 1 on every wall.

    With ``fan`` given, all trials draw random ample divisors on that fan;
    otherwise each 2D trial draws a fresh random fan.
    """
    rng = random.Random(seed)
    violations: list[dict] = []
    walls_checked = 0
    for _ in range(trials_2d):
        if fan is not None:
            d = random_ample_on(fan, rng)
        else:
            _, d = _random_fan_divisor(rng, rng.randint(0, max_steps))
        walls_checked += len(walls(d.fan))
        violations.extend(degree_edge_violations(d))
    for _ in range(trials_3d):
        _, d = random_product_3d(rng)
        walls_checked += len(walls(d.fan))
        violations.extend(degree_edge_violations(d))
    return EdgeFuzzSummary(trials_2d + trials_3d, walls_checked, tuple(violations))


# ---------------------------------------------------------------------------
# speciality criterion


@dataclass(frozen=True)
class WitnessFuzzSummary:
    trials: int
    specials: int
    violations: tuple[dict, ...]  # counting oracle vs wall criterion mismatches
    pair_failures: tuple[dict, ...]  # special systems with no special 2-point restriction

    @property
    def ok(self) -> bool:
        return not self.violations and not self.pair_failures


def _restricted_h1(
    spec: LinearSystemSpec, npoints: int, table: dict[int, list[int]], keep: tuple[int, int]
) -> int:
    n = spec.fan.dim
    kept = 0
    for p in range(npoints):
        if all(table[i][p] >= spec.mults[i] for i in keep if spec.mults[i] > 0):
            kept += 1
    v = npoints - sum(conditions_count(spec.mults[i], n) for i in keep) - 1
    return (kept - 1) - v


def special_pair(spec: LinearSystemSpec) -> tuple[int, int] | None:
    """A pair of fixed points whose 2-point restriction is already special."""
    pts = lattice_points(polytope_of(spec.divisor))
    marked = [i for i, m in enumerate(spec.mults) if m > 0]
    table = {i: [multiplicity_at(spec.divisor, m, i) for m in pts] for i in marked}
    ncones = len(spec.fan.max_cones)
    for j in marked:
        for k in range(ncones):
            if k == j:
                continue
            pair = (j, k) if j < k else (k, j)
            if _restricted_h1(spec, len(pts), table, pair) > 0:
                return pair
    return None


def run_witness_criterion_fuzz(
    trials: int, seed, include_3d: bool = True, max_mult: int = 6
) -> WitnessFuzzSummary:
    """Random systems; asserts h^1 > 0 iff a witness wall exists.

    Every special instance is additionally required to stay special after
    restriction to some pair of its points.
    """
    rng = random.Random(seed)
    violations: list[dict] = []
    pair_failures: list[dict] = []
    specials = 0
    for t in range(trials):
        if include_3d and t % 12 == 11:
            fan, d = random_product_3d(rng)
        else:
            fan, d = _random_fan_divisor(rng, rng.randint(0, 4))
        spec = linear_system(d, _random_mults(rng, len(fan.max_cones), max_mult, 0.55))
        try:
            report = speciality_report(spec)
        except CriterionMismatch as exc:
            violations.append(exc.reproducer)
            continue
        if report.special:
            specials += 1
            if special_pair(spec) is None:
                pair_failures.append(system_to_json_dict(spec) | {"h1": report.h1})
    return WitnessFuzzSummary(trials, specials, tuple(violations), tuple(pair_failures))


# ---------------------------------------------------------------------------
# Picard-side fleets


def random_model(rng: random.Random, a_max: int = 8, r_max: int = 11):
    if rng.random() < 0.4:
        return p2_model(rng.randint(0, r_max))
    return fa_model(rng.randint(0, a_max), rng.randint(0, r_max))


def random_class(rng: random.Random, model, base_bound: int = 10, mult_bound: int = 6) -> PicardClass:
    base = tuple(rng.randint(-base_bound, base_bound) for _ in range(model.base_rank))
    mults = tuple(rng.randint(-mult_bound, mult_bound) for _ in range(model.r))
    return picard_class(model, base, mults)


@dataclass(frozen=True)
class IdentityFuzzSummary:
    trials: int
    violations: tuple[dict, ...] = field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        return not self.violations


def run_vdim_recursion_fuzz(trials: int, seed) -> IdentityFuzzSummary:
    """v(L) = v(L - C) + L.C + 1 for random L and random genus-0 C, exactly."""
    rng = random.Random(seed)
    violations = []
    for _ in range(trials):
        model = random_model(rng)
        pool = candidate_curves(model, bound=rng.randint(1, 3))
        c = rng.choice(pool).cls
        if genus(c) != 0:
            raise InternalError("candidate pool must be genus 0")
        L = random_class(rng, model)
        lhs = rr_virtual_dim(L)
        rhs = rr_virtual_dim(L - c) + intersect(L, c) + 1
        if lhs != rhs:
            violations.append({"model": (model.kind, model.a, model.r), "L": L.coeffs(), "C": c.coeffs()})
    return IdentityFuzzSummary(trials, tuple(violations))


def run_reduction_termination_fuzz(trials: int, seed, cap: int = 10000) -> IdentityFuzzSummary:
    """Random reductions must stop before the cap; reports any that do not."""
    rng = random.Random(seed)
    violations = []
    for _ in range(trials):
        model = random_model(rng, a_max=4, r_max=8)
        pool = candidate_curves(model, bound=2)
        start = random_class(rng, model, base_bound=6, mult_bound=5)
        trace = picard_reduce(start, pool, cap=cap)
        if trace.stop_reason == "cap":
            violations.append({"model": (model.kind, model.a, model.r), "start": start.coeffs()})
    return IdentityFuzzSummary(trials, tuple(violations))


def run_cross_module_check(trials: int, seed, a_max: int = 4) -> IdentityFuzzSummary:
    """Toric virtual dimension equals Riemann-Roch on the blown-up class."""
    rng = random.Random(seed)
    violations = []
    for _ in range(trials):
        fan = hirzebruch(rng.randint(0, a_max))
        d = random_ample_on(fan, rng)
        spec = linear_system(d, _random_mults(rng, 4, 6, 0.35))
        model, cls = picard_class_of_system(spec)
        pts = len(lattice_points(polytope_of(d)))
        toric_v = pts - sum(conditions_count(m, 2) for m in spec.mults) - 1
        if rr_virtual_dim(cls) != toric_v:
            violations.append(system_to_json_dict(spec) | {"rr": rr_virtual_dim(cls), "toric": toric_v})
    return IdentityFuzzSummary(trials, tuple(violations))


# ---------------------------------------------------------------------------
# empirical comparison: exact speciality vs (-1)-special verdict


@dataclass(frozen=True)
class ConjectureScan:
    records: tuple[dict, ...]
    agree: int
    disagree: int
    undecided: int


def conjecture_scan(trials: int, seed, a_max: int = 3, bound: int = 3) -> ConjectureScan:
    """Compare exact toric speciality with the heuristic (-1)-special verdict.

    Disagreements are expected to be possible: the candidate set is an
    under-approximation of the curves on the blow-up, and invariant base
    points sit in special position.  The scan only reports, it asserts
    nothing.
    """
    rng = random.Random(seed)
    records = []
    agree = disagree = undecided = 0
    for _ in range(trials):
        fan = hirzebruch(rng.randint(0, a_max)) if rng.random() < 0.75 else projective_space(2)
        d = random_ample_on(fan, rng, spread=2)
        spec = linear_system(d, _random_mults(rng, len(fan.max_cones), 4, 0.4))
        try:
            exact = speciality_report(spec).special
        except CriterionMismatch as exc:
            exact = exc.reproducer["h1"] > 0
        model, cls = picard_class_of_system(spec)
        try:
            verdict, trace = is_minus_one_special(cls, candidate_curves(model, bound=bound))
            stop = trace.stop_reason
        except InternalError:
            verdict, stop = None, "cap"
        if verdict is None:
            undecided += 1
        elif verdict == exact:
            agree += 1
        else:
            disagree += 1
        records.append(
            system_to_json_dict(spec)
            | {"exact_special": exact, "minus_one_special": verdict, "stop": stop}
        )
    return ConjectureScan(tuple(records), agree, disagree, undecided)


# ---------------------------------------------------------------------------
# misc test helpers


def random_unimodular(rng: random.Random, n: int, ops: int = 12) -> tuple[tuple[int, ...], ...]:
    """Random unimodular matrix as a product of elementary integer operations."""
    m = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    for _ in range(ops):
        kind = rng.randrange(3)
        i, j = rng.randrange(n), rng.randrange(n)
        if kind == 0 and i != j:
            c = rng.randint(-3, 3)
            for k in range(n):
                m[i][k] += c * m[j][k]
        elif kind == 1 and i != j:
            m[i], m[j] = m[j], m[i]
        elif kind == 2:
            for k in range(n):
                m[i][k] = -m[i][k]
    return tuple(tuple(row) for row in m)
