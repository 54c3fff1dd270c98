"""Picard-lattice calculus on blow-ups of rational surfaces.

Models are P^2 or a Hirzebruch surface F_a with r blown-up points.  Classes
live in the basis (L; E_1..E_r) or (H, F; E_1..E_r) with the intersection
form

    L^2 = 1                  (P^2)
    H^2 = a, F^2 = 0, H.F = 1  (F_a)
    E_i^2 = -1, all cross terms 0,

and a class is stored as base coefficients plus multiplicities m_i, meaning
base - sum_i m_i E_i.  The canonical class is -3L + sum E_i resp.
-2H + (a-2)F + sum E_i.  Riemann-Roch gives the virtual dimension
v(c) = (c.c - c.K)/2 and the genus formula g(c) = (c.c + c.K)/2 + 1; both
divisions are exact on this lattice and asserted.

The reduction procedure repeatedly subtracts a "plausible rational curve"
class meeting the system in <= -1 and compares the final virtual dimension
with the initial one; a strict increase is the (-1)-special verdict.  The
candidate classes are heuristic: genus-0 plus a self-intersection bound plus
coefficient patterns.  They are labelled by source and never claimed to be
actual irreducible curves; deciding that is out of scope, and a verdict of
"not (-1)-special" only means "not detected within the candidate bounds".

Candidate order is canonical so the reduction is deterministic: classes whose
expected dimension is nonnegative come first (for generic points these are
honestly expected to contain curves), then the speculative rigid classes;
within each group most negative self-intersection first, ties broken by the
coefficient vector.  ``explore_orders`` checks bounded order sensitivity.

Everything here is immutable and pure.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

from .errors import InputError, InternalError
from .linsys import LinearSystemSpec

P2 = "P2"
FA = "Fa"


@dataclass(frozen=True)
class SurfaceModel:
    kind: str
    a: int
    r: int

    @property
    def base_rank(self) -> int:
        return 1 if self.kind == P2 else 2


def p2_model(r: int) -> SurfaceModel:
    if r < 0:
        raise InputError("number of blown-up points must be >= 0")
    return SurfaceModel(P2, 0, r)


def fa_model(a: int, r: int) -> SurfaceModel:
    if a < 0 or r < 0:
        raise InputError("need a >= 0 and r >= 0")
    return SurfaceModel(FA, a, r)


@dataclass(frozen=True)
class PicardClass:
    model: SurfaceModel
    base: tuple[int, ...]
    mults: tuple[int, ...]

    def __post_init__(self):
        if len(self.base) != self.model.base_rank or len(self.mults) != self.model.r:
            raise InputError("coefficient vector does not match the model")

    def coeffs(self) -> tuple[int, ...]:
        return self.base + self.mults

    def __add__(self, other: "PicardClass") -> "PicardClass":
        _same_model(self, other)
        return PicardClass(
            self.model,
            tuple(x + y for x, y in zip(self.base, other.base)),
            tuple(x + y for x, y in zip(self.mults, other.mults)),
        )

    def __sub__(self, other: "PicardClass") -> "PicardClass":
        _same_model(self, other)
        return PicardClass(
            self.model,
            tuple(x - y for x, y in zip(self.base, other.base)),
            tuple(x - y for x, y in zip(self.mults, other.mults)),
        )

    def __neg__(self) -> "PicardClass":
        return PicardClass(self.model, tuple(-x for x in self.base), tuple(-x for x in self.mults))

    def __rmul__(self, k: int) -> "PicardClass":
        return PicardClass(
            self.model, tuple(k * x for x in self.base), tuple(k * x for x in self.mults)
        )

    def is_zero(self) -> bool:
        return not any(self.base) and not any(self.mults)


def picard_class(model: SurfaceModel, base, mults=()) -> PicardClass:
    return PicardClass(model, tuple(int(x) for x in base), tuple(int(x) for x in mults))


def _same_model(c1: PicardClass, c2: PicardClass) -> None:
    if c1.model != c2.model:
        raise InputError(f"classes live on different models: {c1.model} vs {c2.model}")


def exceptional(model: SurfaceModel, i: int) -> PicardClass:
    if not 0 <= i < model.r:
        raise InputError(f"exceptional index {i} out of range")
    return PicardClass(
        model, (0,) * model.base_rank, tuple(-1 if j == i else 0 for j in range(model.r))
    )


def canonical_class(model: SurfaceModel) -> PicardClass:
    base = (-3,) if model.kind == P2 else (-2, model.a - 2)
    return PicardClass(model, base, (-1,) * model.r)


def intersect(c1: PicardClass, c2: PicardClass) -> int:
    """Intersection pairing via the model's Gram matrix."""
    _same_model(c1, c2)
    if c1.model.kind == P2:
        base = c1.base[0] * c2.base[0]
    else:
        h1, f1 = c1.base
        h2, f2 = c2.base
        base = c1.model.a * h1 * h2 + h1 * f2 + f1 * h2
    return base - sum(m1 * m2 for m1, m2 in zip(c1.mults, c2.mults))


def self_intersection(c: PicardClass) -> int:
    return intersect(c, c)


def rr_virtual_dim(c: PicardClass) -> int:
    """Riemann-Roch virtual dimension (c.c - c.K)/2; division is exact."""
    num = intersect(c, c) - intersect(c, canonical_class(c.model))
    if num % 2:
        raise InternalError(f"parity failure in virtual dimension of {c}")
    return num // 2


def genus(c: PicardClass) -> int:
    """Arithmetic genus (c.c + c.K)/2 + 1; division is exact."""
    num = intersect(c, c) + intersect(c, canonical_class(c.model))
    if num % 2:
        raise InternalError(f"parity failure in genus of {c}")
    return num // 2 + 1


def reference_nef(model: SurfaceModel) -> PicardClass:
    """Pullback of an ample class from the unblown surface (nef reference).

    Every effective class pairs >= 0 with it, which is the certificate used
    to stop the reduction once the running class cannot be effective.
    """
    base = (1,) if model.kind == P2 else (1, 1)
    return PicardClass(model, base, (0,) * model.r)


# ---------------------------------------------------------------------------
# candidate curves


@dataclass(frozen=True)
class CandidateCurve:
    """A heuristic rational-curve class; ``source`` records where it came from.

    ``always_curve`` marks the classes represented by an irreducible curve for
    every position of the points (exceptionals, plain fibers, fibers through
    one point, the negative section).  Enumerated classes and fibers through
    two points exist only generically resp. in special position.
    """

    cls: PicardClass
    source: str  # "exceptional" | "fiber" | "negative-section" | "enumerated" | "user"

    @property
    def expected_effective(self) -> bool:
        return rr_virtual_dim(self.cls) >= 0

    @property
    def always_curve(self) -> bool:
        if self.source in ("exceptional", "negative-section"):
            return True
        if self.source == "fiber":
            return sum(1 for m in self.cls.mults if m) <= 1
        return False


def candidate_key(c: PicardClass) -> tuple:
    tier = 0 if rr_virtual_dim(c) >= 0 else 1
    return (tier, self_intersection(c), c.coeffs())


def _mult_patterns(r: int) -> list[tuple[int, ...]]:
    patterns = [(0,) * r]
    if r:
        patterns.append((1,) * r)
        patterns.extend(tuple(1 if j == i else 0 for j in range(r)) for i in range(r))
    return patterns


def candidate_curves(model: SurfaceModel, bound: int = 3) -> list[CandidateCurve]:
    """Deterministic candidate list, deduplicated and canonically sorted.

    Contains every exceptional class, the fiber classes through at most two
    points and the negative section (Hirzebruch models), and all genus-0
    classes with base coefficients in [-bound, bound], multiplicities uniform
    in {0,1} or supported at one point, and self-intersection >= -max(a, 2).
    """
    if bound < 1 or bound > 10:
        raise InputError("candidate bound must be between 1 and 10")
    found: dict[tuple, CandidateCurve] = {}

    def put(cls: PicardClass, source: str) -> None:
        key = cls.coeffs()
        if key not in found and not cls.is_zero():
            found[key] = CandidateCurve(cls, source)

    for i in range(model.r):
        put(exceptional(model, i), "exceptional")
    if model.kind == FA:
        fiber = picard_class(model, (0, 1), (0,) * model.r)
        put(fiber, "fiber")
        for size in (1, 2):
            for subset in combinations(range(model.r), size):
                mults = tuple(1 if j in subset else 0 for j in range(model.r))
                put(picard_class(model, (0, 1), mults), "fiber")
        put(picard_class(model, (1, -model.a), (0,) * model.r), "negative-section")

    floor = -max(model.a, 2)
    base_range = range(-bound, bound + 1)
    bases = [(d,) for d in base_range] if model.kind == P2 else [
        (h, f) for h in base_range for f in base_range
    ]
    for base in bases:
        for mults in _mult_patterns(model.r):
            cls = PicardClass(model, base, mults)
            if cls.is_zero():
                continue
            if genus(cls) != 0 or self_intersection(cls) < floor:
                continue
            put(cls, "enumerated")

    return sorted(found.values(), key=lambda cand: candidate_key(cand.cls))


# ---------------------------------------------------------------------------
# reduction


@dataclass(frozen=True)
class ReductionStep:
    candidate: CandidateCurve
    intersection: int
    v_after: int


@dataclass(frozen=True)
class ReductionTrace:
    start: PicardClass
    steps: tuple[ReductionStep, ...]
    final: PicardClass
    v_start: int
    v_final: int
    minus_one_special: bool
    stop_reason: str  # "exhausted" | "degree" | "cap"
    flagged_steps: tuple[int, ...]  # steps whose candidate has nef-degree <= 0

    def table(self) -> str:
        lines = [f"start {_fmt(self.start)}   v = {self.v_start}"]
        for i, s in enumerate(self.steps):
            flag = " *" if i in self.flagged_steps else ""
            lines.append(
                f"step {i + 1}: subtract {_fmt(s.candidate.cls)} "
                f"[{s.candidate.source}]  intersection {s.intersection}  v -> {s.v_after}{flag}"
            )
        lines.append(f"final {_fmt(self.final)}   v = {self.v_final}  ({self.stop_reason})")
        lines.append(
            "verdict: " + ("(-1)-special" if self.minus_one_special else "not (-1)-special")
        )
        return "\n".join(lines)


def _fmt(c: PicardClass) -> str:
    names = ["L"] if c.model.kind == P2 else ["H", "F"]
    parts = []
    for coef, name in zip(c.base, names):
        if coef:
            parts.append(f"{coef:+d}{name}")
    for i, m in enumerate(c.mults):
        if m:
            parts.append(f"{-m:+d}E{i + 1}")
    return "".join(parts) if parts else "0"


def _normalize(candidates: Iterable) -> list[CandidateCurve]:
    out = []
    for cand in candidates:
        if isinstance(cand, CandidateCurve):
            out.append(cand)
        else:
            out.append(CandidateCurve(cand, "user"))
    return sorted(out, key=lambda cand: candidate_key(cand.cls))


def reduce(start: PicardClass, candidates: Iterable, cap: int = 10000) -> ReductionTrace:
    """Greedy reduction: subtract canonically-first candidate meeting <= -1.

    Stops when no candidate qualifies, when the running class pairs
    negatively with the nef reference (it can no longer be effective, so
    further subtraction is meaningless), or at the iteration cap.
    """
    cands = _normalize(candidates)
    if not cands:
        raise InputError("reduction needs a nonempty candidate list")
    ref = reference_nef(start.model)
    v_start = rr_virtual_dim(start)
    current = start
    steps: list[ReductionStep] = []
    flagged: list[int] = []
    reason = "exhausted"
    while True:
        if len(steps) >= cap:
            reason = "cap"
            break
        if intersect(current, ref) < 0:
            reason = "degree"
            break
        pick = None
        for cand in cands:
            value = intersect(current, cand.cls)
            if value <= -1:
                pick = (cand, value)
                break
        if pick is None:
            break
        cand, value = pick
        if intersect(ref, cand.cls) <= 0:
            flagged.append(len(steps))
        current = current - cand.cls
        steps.append(ReductionStep(cand, value, rr_virtual_dim(current)))
    v_final = rr_virtual_dim(current)
    return ReductionTrace(
        start,
        tuple(steps),
        current,
        v_start,
        v_final,
        v_final > v_start,
        reason,
        tuple(flagged),
    )


def is_minus_one_special(
    start: PicardClass, candidates: Iterable, cap: int = 10000
) -> tuple[bool, ReductionTrace]:
    """Verdict of the reduction: final virtual dimension exceeds the initial one.

    The verdict is only as good as the candidate list; it never caps the
    truth from above (a missed curve can only hide speciality).
    """
    trace = reduce(start, candidates, cap=cap)
    if trace.stop_reason == "cap":
        raise InternalError(f"reduction did not terminate within {cap} steps: {trace.start}")
    return trace.minus_one_special, trace


@dataclass(frozen=True)
class OrderExploration:
    verdicts: frozenset  # of bool, over all terminated subtraction orders
    truncated: bool  # some path exceeded the depth or node budget
    nodes: int

    @property
    def order_sensitive(self) -> bool:
        return len(self.verdicts) > 1


def explore_orders(
    start: PicardClass, candidates: Iterable, depth: int = 6, node_budget: int = 200_000
) -> OrderExploration:
    """Try every subtraction order up to ``depth`` steps; collect the verdicts.

    The canonical order is one path in this tree, so its verdict is always a
    member of the result unless that path is deeper than ``depth``.
    """
    cands = _normalize(candidates)
    ref = reference_nef(start.model)
    v_start = rr_virtual_dim(start)
    memo: dict[tuple[PicardClass, int], tuple[frozenset, bool]] = {}
    nodes = 0

    def rec(current: PicardClass, remaining: int) -> tuple[frozenset, bool]:
        nonlocal nodes
        key = (current, remaining)
        if key in memo:
            return memo[key]
        nodes += 1
        if nodes > node_budget:
            return frozenset(), True
        if intersect(current, ref) >= 0:
            qualifying = [c for c in cands if intersect(current, c.cls) <= -1]
        else:
            qualifying = []
        if not qualifying:
            result = (frozenset({rr_virtual_dim(current) > v_start}), False)
        elif remaining == 0:
            result = (frozenset(), True)
        else:
            verdicts: set = set()
            truncated = False
            seen_children = set()
            for cand in qualifying:
                child = current - cand.cls
                if child in seen_children:
                    continue
                seen_children.add(child)
                vs, tr = rec(child, remaining - 1)
                verdicts |= vs
                truncated |= tr
            result = (frozenset(verdicts), truncated)
        memo[key] = result
        return result

    verdicts, truncated = rec(start, depth)
    return OrderExploration(verdicts, truncated, nodes)


# ---------------------------------------------------------------------------
# bridge from toric systems


_P2_RAYS = ((1, 0), (0, 1), (-1, -1))


def picard_class_of_system(spec: LinearSystemSpec) -> tuple[SurfaceModel, PicardClass]:
    """Class of a toric system on P^2 or F_a in the blown-up Picard basis.

    Marked fixed points (multiplicity > 0) become the blown-up points, in
    cone order.  Only the fans produced by :func:`projective_space` (n = 2)
    and :func:`hirzebruch` are recognized.
    """
    fan = spec.fan
    alpha = spec.divisor.alpha
    marked = [m for m in spec.mults if m > 0]
    r = len(marked)
    if fan.dim == 2 and fan.rays == _P2_RAYS:
        model = p2_model(r)
        return model, PicardClass(model, (sum(alpha),), tuple(marked))
    if (
        fan.dim == 2
        and len(fan.rays) == 4
        and fan.rays[0] == (1, 0)
        and fan.rays[1] == (0, 1)
        and fan.rays[3] == (0, -1)
        and fan.rays[2][0] == -1
    ):
        a = fan.rays[2][1]
        if a >= 0:
            model = fa_model(a, r)
            base = (alpha[3] + alpha[1], alpha[0] + alpha[2] - a * alpha[1])
            return model, PicardClass(model, base, tuple(marked))
    raise InputError("system is not on a recognized P^2 or Hirzebruch fan")


# ---------------------------------------------------------------------------
# JSON interface


def class_to_json_dict(c: PicardClass) -> dict:
    if c.model.kind == P2:
        surface: object = "P2"
        coeffs: dict = {"L": c.base[0]}
    else:
        surface = {"Fa": c.model.a}
        coeffs = {"H": c.base[0], "F": c.base[1]}
    coeffs["m"] = list(c.mults)
    return {"surface": surface, "r": c.model.r, "coeffs": coeffs}


def class_from_json_dict(obj: dict) -> PicardClass:
    try:
        surface = obj["surface"]
        r = int(obj["r"])
        coeffs = obj["coeffs"]
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"class JSON needs 'surface', 'r', 'coeffs': {exc}") from exc
    mults = tuple(int(m) for m in coeffs.get("m", []))
    if len(mults) < r:
        mults = mults + (0,) * (r - len(mults))
    if len(mults) != r:
        raise InputError(f"'m' has {len(mults)} entries but r = {r}")
    if surface == "P2":
        model = p2_model(r)
        d = coeffs.get("L", coeffs.get("H"))
        if d is None:
            raise InputError("P2 class needs coefficient 'L'")
        return PicardClass(model, (int(d),), mults)
    if isinstance(surface, dict) and "Fa" in surface:
        model = fa_model(int(surface["Fa"]), r)
        try:
            base = (int(coeffs["H"]), int(coeffs["F"]))
        except KeyError as exc:
            raise InputError("Hirzebruch class needs coefficients 'H' and 'F'") from exc
        return PicardClass(model, base, mults)
    raise InputError(f"unknown surface {surface!r}")


def load_class(path: str) -> PicardClass:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InputError(f"{path}: not valid JSON ({exc})") from exc
    return class_from_json_dict(obj)
