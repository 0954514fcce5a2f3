"""(1, eps)-restricted machinery: phase coefficients, r_c, f, limits.

In the two-values regime every thin resource has value eps, so cover
accounting is pure cardinality.  The phase coefficient a_r(X) is the
piecewise function

    a_r(X) = 3r - X - 1        for r <= X <= (3r-1)/2
             2r - (X+1)/3      for 3r/2 <= X <= 2r
             (4r-1)/3          for X >= 2r + 1

and r_c is the largest r whose reciprocal sum over X = r..c reaches 1.
The resulting integrality-gap bound is f(x) = 1/(x * r_ceil(1/x)).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .allocation_graph import build_H, build_J, compute_fat, restrict
from .instance import Instance, InstanceError
from .lp_core import build_dual_basic, hypothesis_holds_basic, verify_dual
from .topology import (
    DeStep,
    all_deletions,
    basic_cover,
    search_de_sequence,
    shrink_cover,
)


@dataclass(frozen=True)
class RcEntry:
    c: int
    r_c: int
    ratio: Fraction


@dataclass(frozen=True)
class HarmonicSums:
    A_r: Fraction
    B_r: Fraction
    C_r: Fraction


@dataclass(frozen=True)
class LimitConstants:
    A_limit: float
    B_limit: float
    bound: float


def a_coeff(r: int, X: int) -> Fraction:
    """The phase coefficient a_r(X); exact, and positive for X >= r >= 1."""
    if not (isinstance(r, int) and isinstance(X, int)):
        raise TypeError("a_coeff takes integers")
    if r < 1 or X < r:
        raise ValueError(f"need X >= r >= 1, got r={r}, X={X}")
    if 2 * X <= 3 * r - 1:
        return Fraction(3 * r - X - 1)
    if 2 * X >= 3 * r and X <= 2 * r:
        return 2 * r - Fraction(X + 1, 3)
    return Fraction(4 * r - 1, 3)


def reciprocal_sum(r: int, c: int) -> Fraction:
    """Sum of 1/a_r(X) for X = r..c (empty sums are 0)."""
    return sum((Fraction(1) / a_coeff(r, X) for X in range(r, c + 1)), Fraction(0))


@lru_cache(maxsize=None)
def r_c(c: int) -> int:
    """Largest r with reciprocal_sum(r, c) >= 1; r = 1 always qualifies."""
    if c < 1:
        raise ValueError("c must be a positive integer")
    for r in range(c, 0, -1):
        if reciprocal_sum(r, c) >= 1:
            return r
    raise AssertionError("unreachable: r = 1 gives a sum of c >= 1")


def rc_table(max_c: int) -> list[RcEntry]:
    if max_c < 1:
        raise ValueError("max_c must be >= 1")
    return [RcEntry(c, r_c(c), Fraction(c, r_c(c))) for c in range(1, max_c + 1)]


def check_obs_crc(c: int) -> dict[str, bool]:
    """The three r_c observations, vacuously true below their thresholds:
    (i) r_c >= c/4 for c >= 4, (ii) c >= 2 r_c + 1 for c >= 5,
    (iii) c >= 2 r_c + 2 for c >= 10."""
    r = r_c(c)
    return {
        "i": c < 4 or Fraction(r) >= Fraction(c, 4),
        "ii": c < 5 or c >= 2 * r + 1,
        "iii": c < 10 or c >= 2 * r + 2,
    }


def f_gap(x: Fraction) -> Fraction:
    """The two-values integrality-gap bound f(x) = 1/(x * r_ceil(1/x))."""
    x = Fraction(x)
    if not 0 < x <= 1:
        raise ValueError(f"x must lie in (0, 1], got {x}")
    c = math.ceil(Fraction(1) / x)
    return Fraction(1) / (x * r_c(c))


def harmonic_number(n: int) -> Fraction:
    return sum((Fraction(1, k) for k in range(1, n + 1)), Fraction(0))


def harmonic_sums(r: int, c: int) -> HarmonicSums:
    """The three exact partial sums A_r, B_r, C_r of the reciprocal sum.

    A_r = H_{2r-1} - H_{ceil((3r-1)/2)-1} covers the first coefficient
    range, B_r = 3(H_{floor(9r/2)-1} - H_{4r-2}) the second, and
    C_r = 3(c-2r)/(4r-1) the constant tail (0 when c < 2r+1).
    """
    if r < 2:
        raise ValueError("r must be >= 2")
    A = harmonic_number(2 * r - 1) - harmonic_number(math.ceil(Fraction(3 * r - 1, 2)) - 1)
    B = 3 * (harmonic_number((9 * r) // 2 - 1) - harmonic_number(4 * r - 2))
    C = Fraction(3 * (c - 2 * r), 4 * r - 1) if c >= 2 * r + 1 else Fraction(0)
    return HarmonicSums(A, B, C)


def limit_constants() -> LimitConstants:
    a = math.log(4 / 3)
    b = 3 * math.log(9 / 8)
    return LimitConstants(a, b, 10 / 3 - (4 / 3) * a - (4 / 3) * b)


def limit_bound() -> float:
    """10/3 - (4/3) ln(4/3) - 4 ln(9/8), the eps -> 0 gap bound (< 2.479)."""
    return 10 / 3 - (4 / 3) * math.log(4 / 3) - 4 * math.log(9 / 8)


# ---------------------------------------------------------------------------
# (1, eps) instance analysis and the phase-X driver
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TwoValueShape:
    eps: Fraction
    fat_ids: frozenset[str]
    thin_ids: frozenset[str]


def analyze_two_value(inst: Instance) -> TwoValueShape:
    """Check the instance uses only the values 1 and eps and split it."""
    values = set(inst.resources.values())
    others = values - {Fraction(1)}
    if len(others) > 1:
        raise InstanceError(f"more than two distinct values: {sorted(values)}")
    eps = min(others) if others else Fraction(1)
    if eps >= 1 and values == {Fraction(1)}:
        raise InstanceError("no eps-valued resource present")
    fats = frozenset(r for r, v in inst.resources.items() if v == 1)
    thins = frozenset(r for r, v in inst.resources.items() if v == eps)
    return TwoValueShape(eps, fats, thins)


def rescale_small_target(inst: Instance, t_star: Fraction) -> Instance:
    """The T* < 1 reduction: bump every eps to eps/T* so the target is 1."""
    shape = analyze_two_value(inst)
    eps_new = shape.eps / t_star
    resources = {
        rid: (Fraction(1) if rid in shape.fat_ids else eps_new)
        for rid in inst.resource_ids
    }
    return Instance.build(inst.players, resources, {p: set(inst.covets[p]) for p in inst.players})


@dataclass
class PhaseXLedger:
    counts: dict[int, int] = field(default_factory=dict)
    covers: dict[int, frozenset[str]] = field(default_factory=dict)

    def add(self, X: int, ell: int, cover: frozenset[str]) -> None:
        self.counts[X] = self.counts.get(X, 0) + ell
        self.covers[X] = self.covers.get(X, frozenset()) | cover

    def checks(self, r: int) -> dict[int, bool]:
        return {
            X: Fraction(len(self.covers.get(X, frozenset())))
            <= self.counts.get(X, 0) * a_coeff(r, X)
            for X in self.counts
        }


@dataclass
class TwoValueResult:
    outcome: str  # "certified" | "trivial" | "additive-regime" | "inconclusive"
    alpha: Fraction | None = None
    r: int | None = None
    c: int | None = None
    allocation: object = None
    per_U: dict = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)


def two_value_driver(
    inst: Instance,
    target: Fraction,
    *,
    search_budget: int = 1500,
    max_players: int = 6,
    dual_snapshots: bool = True,
    **eta_caps,
) -> TwoValueResult:
    """Run the descending phase-X process and certify an allocation.

    For each player subset U the process dismantles the thin graph with
    DE-sequences based in large configurations, average cover cost at
    most a(X) in Phase X.  A subset is certified by a KO-sequence or by
    total explosion count >= |U| - |F_U|; when every subset certifies,
    an independent transversal (hence an allocation of min-value
    r * eps) must exist and is returned.
    """
    shape = analyze_two_value(inst)
    eps = shape.eps
    target = Fraction(target)
    if eps >= Fraction(1, 2):
        raise InstanceError(f"driver needs eps < 1/2, got {eps}")
    if target >= 2:
        return TwoValueResult(
            "additive-regime",
            notes=["target >= 2: assignment-LP rounding bounds the gap by 2"],
        )
    if target < 1:
        scaled = rescale_small_target(inst, target)
        result = two_value_driver(
            scaled,
            Fraction(1),
            search_budget=search_budget,
            max_players=max_players,
            dual_snapshots=dual_snapshots,
            **eta_caps,
        )
        result.notes.append(f"rescaled from T={target} (eps'={eps/target})")
        return result
    c = math.ceil(target / eps)
    if c < 4:
        raise InstanceError(f"driver needs ceil(T/eps) >= 4, got c={c}")
    if len(inst.players) > max_players:
        raise InstanceError(f"more than {max_players} players")
    r = r_c(c)
    alpha = r * eps / target
    H = build_H(inst, target, alpha)
    J = build_J(H)
    fat = compute_fat(inst, target, alpha)

    if not J.hyperedges:
        transversal = _final_transversal(inst, H)
        return TwoValueResult("trivial", alpha, r, c, transversal, notes=["thin part empty"])

    per_U: dict = {}
    all_certified = True
    players = inst.players

    for size in range(1, len(players) + 1):
        for U in itertools.combinations(players, size):
            info = _certify_subset(
                inst,
                J,
                U,
                fat,
                target,
                eps,
                c,
                r,
                search_budget,
                dual_snapshots,
                eta_caps,
            )
            per_U[U] = info
            if not info["certified"]:
                all_certified = False

    if not all_certified:
        return TwoValueResult("inconclusive", alpha, r, c, None, per_U)
    transversal = _final_transversal(inst, H)
    result = TwoValueResult("certified", alpha, r, c, transversal, per_U)
    if transversal is None:
        # Certification says a transversal exists; failing to find one
        # would mean an implementation bug, not a hard instance.
        raise AssertionError("all subsets certified but no transversal found")
    return result


def _final_transversal(inst: Instance, H):
    from .allocation_graph import find_independent_transversal, transversal_to_allocation

    transversal = find_independent_transversal(H)
    if transversal is None:
        return None
    return transversal_to_allocation(inst, transversal)


def _thin_pool(inst: Instance, player: str, fat_ids: frozenset[str]) -> frozenset[str]:
    return frozenset(inst.covets[player] - fat_ids)


def _certify_subset(
    inst, J, U, fat, target, eps, c, r, search_budget, dual_snapshots, eta_caps
):
    g = restrict(J, U).graph
    f_u = fat.fat_for(inst, U)
    need = len(U) - len(f_u)
    ledger = PhaseXLedger()
    steps: list[DeStep] = []
    W: frozenset[str] = frozenset()
    info = {
        "U": U,
        "need": need,
        "ledger": ledger,
        "certified": False,
        "how": None,
        "dual_ok": None,
    }

    g, dsteps = all_deletions(g, **eta_caps)
    steps.extend(dsteps)
    ell_total = 0
    for X in range(c, r - 1, -1):
        while True:
            if g.has_isolated_vertex():
                info.update(certified=True, how="ko")
                return info
            candidate = None
            for p in U:
                pool = _thin_pool(inst, p, fat.fat_set)
                if inst.value(pool) >= target and len(pool - W) >= X:
                    candidate = (p, pool - W)
                    break
            if candidate is None:
                break
            p, based = candidate
            found = search_de_sequence(
                g,
                "based",
                budget=search_budget,
                based_in=based,
                owner=p,
                avg_cap=a_coeff(r, X),
                **eta_caps,
            )
            if not found.found:
                info.update(how=f"search failed in phase {X}")
                return info
            record = basic_cover(found.sequence)
            cover = shrink_cover(found.sequence.start, record.end, record.cover)
            ledger.add(X, found.sequence.ell, cover)
            ell_total += found.sequence.ell
            W |= cover
            steps.extend(found.sequence.steps)
            g = record.end
            g, dsteps = all_deletions(g, **eta_caps)
            steps.extend(dsteps)
        if dual_snapshots and W:
            c_dual = eps * (c - X + 1)
            if hypothesis_holds_basic(inst, target, U, W, c_dual, fat.fat_set):
                sol = build_dual_basic(inst, U, W, c_dual, fat.fat_set)
                check = verify_dual(inst, target, sol)
                ok = check.feasible and inst.value(W) >= c_dual * need
                info["dual_ok"] = bool(ok) if info["dual_ok"] in (None, True) else False

    if g.has_isolated_vertex():
        info.update(certified=True, how="ko")
    elif ell_total >= need:
        info.update(certified=True, how="length")
    else:
        info.update(how=f"ell={ell_total} < need={need}")
    return info
