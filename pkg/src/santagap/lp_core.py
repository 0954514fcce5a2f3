"""Configuration-LP core: exact feasibility, T*, and dual certificates.

The configuration LP for target T has one column per (player, minimal
configuration) pair, a covering constraint per player and a packing
constraint per resource.  Feasibility is decided by an exact-rational
phase-1 simplex with Bland's smallest-index rule, so identical inputs
always pivot identically.  Restricting columns to inclusion-minimal
configurations is valid: shrinking a configuration only relaxes packing
constraints, and every configuration contains a minimal one.

When the LP is infeasible the phase-1 dual prices form a feasible dual
solution with strictly positive objective, which is returned as the
infeasibility certificate.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .instance import Instance
from .subsets import SubsetCapError, min_cost_subset_reaching, minimal_subsets_at_least

DEFAULT_POOL_CAP = 20
DEFAULT_COLUMN_CAP = 100_000


class LpCapError(RuntimeError):
    """Raised when column enumeration would exceed the configured caps."""


@dataclass(frozen=True)
class Configuration:
    """An inclusion-minimal resource set of value >= the current target."""

    owner: str
    resources: frozenset[str]
    total_value: Fraction

    def sorted_resources(self) -> tuple[str, ...]:
        return tuple(sorted(self.resources))


@dataclass
class ClpModel:
    target: Fraction
    columns: list[Configuration]
    players: tuple[str, ...]
    resource_ids: tuple[str, ...]


@dataclass
class DualSolution:
    """DCLP variables: y per player, z per resource, objective sum(y)-sum(z)."""

    y: dict[str, Fraction]
    z: dict[str, Fraction]

    @property
    def objective(self) -> Fraction:
        return sum(self.y.values(), Fraction(0)) - sum(self.z.values(), Fraction(0))


@dataclass
class LpFeasibilityResult:
    feasible: bool
    primal: dict[Configuration, Fraction] | None
    infeasibility_certificate: DualSolution | None
    model: ClpModel | None = field(repr=False, default=None)


@dataclass
class TStarResult:
    t_star: Fraction
    candidates_examined: int
    feasibility_witness: LpFeasibilityResult
    probes: int = 0


@dataclass
class DualCheck:
    feasible: bool
    objective: Fraction
    violated: Configuration | None


# ---------------------------------------------------------------------------
# Column enumeration
# ---------------------------------------------------------------------------

def enumerate_configurations(
    inst: Instance,
    player: str,
    target: Fraction,
    *,
    max_pool: int = DEFAULT_POOL_CAP,
    max_columns: int = DEFAULT_COLUMN_CAP,
) -> list[Configuration]:
    """All inclusion-minimal configurations of a player at the given target."""
    pool = {rid: inst.resources[rid] for rid in inst.covets[player]}
    try:
        subsets = minimal_subsets_at_least(
            pool, Fraction(target), max_items=max_pool, max_results=max_columns
        )
    except SubsetCapError as exc:
        raise LpCapError(str(exc)) from exc
    configs = [Configuration(player, s, inst.value(s)) for s in subsets]
    configs.sort(key=lambda c: (len(c.resources), c.sorted_resources()))
    return configs


def enumerate_thin_configurations(
    inst: Instance,
    player: str,
    target: Fraction,
    fat_set: frozenset[str],
    **caps,
) -> list[Configuration]:
    """Minimal configurations drawn from the player's thin resources only."""
    pool = {
        rid: inst.resources[rid]
        for rid in inst.covets[player]
        if rid not in fat_set
    }
    try:
        subsets = minimal_subsets_at_least(pool, Fraction(target), **caps)
    except SubsetCapError as exc:
        raise LpCapError(str(exc)) from exc
    configs = [Configuration(player, s, inst.value(s)) for s in subsets]
    configs.sort(key=lambda c: (len(c.resources), c.sorted_resources()))
    return configs


def build_clp_model(inst: Instance, target: Fraction, **caps) -> ClpModel:
    columns: list[Configuration] = []
    for player in inst.players:
        columns.extend(enumerate_configurations(inst, player, target, **caps))
    if len(columns) > DEFAULT_COLUMN_CAP:
        raise LpCapError(f"{len(columns)} columns exceeds cap {DEFAULT_COLUMN_CAP}")
    return ClpModel(Fraction(target), columns, inst.players, inst.resource_ids)


# ---------------------------------------------------------------------------
# Exact phase-1 simplex
# ---------------------------------------------------------------------------

def _phase1_simplex(
    nrows: int,
    columns: list[list[tuple[int, Fraction]]],
) -> tuple[Fraction, list[Fraction], list[Fraction]]:
    """Minimize the artificial sum of {Ax = 1, x >= 0} given sparse columns.

    Returns (optimum, x values for the given columns, dual prices pi).
    Artificial variables are appended internally, start basic, and are
    barred from re-entering once they leave.
    """
    one = Fraction(1)
    ncols = len(columns)
    art0 = ncols
    total = ncols + nrows
    # Dense tableau: rows x (total + rhs); artificial j occupies art0 + j.
    rows = [[Fraction(0)] * (total + 1) for _ in range(nrows)]
    for j, col in enumerate(columns):
        for i, coef in col:
            rows[i][j] = coef
    for i in range(nrows):
        rows[i][art0 + i] = one
        rows[i][total] = one
    # Reduced-cost row for cost = 1 on artificials: subtract each row.
    obj = [Fraction(0)] * (total + 1)
    for j in range(art0, total):
        obj[j] = one
    for i in range(nrows):
        for j in range(total + 1):
            obj[j] -= rows[i][j]
    basis = list(range(art0, total))
    banned = [False] * total

    while True:
        enter = -1
        for j in range(total):
            if not banned[j] and obj[j] < 0:
                enter = j
                break
        if enter < 0:
            break
        leave = -1
        best_ratio = None
        for i in range(nrows):
            a = rows[i][enter]
            if a > 0:
                ratio = rows[i][total] / a
                if (
                    best_ratio is None
                    or ratio < best_ratio
                    or (ratio == best_ratio and basis[i] < basis[leave])
                ):
                    best_ratio = ratio
                    leave = i
        if leave < 0:
            raise AssertionError("phase-1 objective unbounded below (impossible)")
        if basis[leave] >= art0:
            banned[basis[leave]] = True
        piv = rows[leave][enter]
        prow = rows[leave]
        if piv != 1:
            inv = one / piv
            for j in range(total + 1):
                if prow[j]:
                    prow[j] *= inv
        for row in rows:
            if row is prow:
                continue
            factor = row[enter]
            if factor:
                for j in range(total + 1):
                    if prow[j]:
                        row[j] -= factor * prow[j]
        factor = obj[enter]
        if factor:
            for j in range(total + 1):
                if prow[j]:
                    obj[j] -= factor * prow[j]
        basis[leave] = enter

    optimum = -obj[total]
    x = [Fraction(0)] * ncols
    for i, bj in enumerate(basis):
        if bj < ncols:
            x[bj] = rows[i][total]
    # pi_i = cost(artificial_i) - reduced_cost(artificial_i)
    pi = [one - obj[art0 + i] for i in range(nrows)]
    return optimum, x, pi


def clp_feasible(inst: Instance, target: Fraction, **caps) -> LpFeasibilityResult:
    """Exact feasibility of CLP(target); certificate on either outcome.

    Feasible: a primal solution satisfying every covering and packing
    constraint exactly.  Infeasible: a feasible dual solution with
    strictly positive objective (the phase-1 Farkas certificate).
    """
    model = build_clp_model(inst, target, **caps)
    players = model.players
    resource_ids = model.resource_ids
    prow = {p: i for i, p in enumerate(players)}
    rrow = {r: len(players) + i for i, r in enumerate(resource_ids)}
    nrows = len(players) + len(resource_ids)

    columns: list[list[tuple[int, Fraction]]] = []
    one = Fraction(1)
    for cfg in model.columns:
        col = [(prow[cfg.owner], one)]
        col.extend((rrow[r], one) for r in cfg.sorted_resources())
        columns.append(col)
    for p in players:  # surplus for covering rows
        columns.append([(prow[p], -one)])
    for r in resource_ids:  # slack for packing rows
        columns.append([(rrow[r], one)])

    optimum, x, pi = _phase1_simplex(nrows, columns)
    if optimum == 0:
        primal = {
            cfg: x[j] for j, cfg in enumerate(model.columns) if x[j] != 0
        }
        _check_primal(inst, model, primal)
        return LpFeasibilityResult(True, primal, None, model)
    y = {p: pi[prow[p]] for p in players}
    z = {r: -pi[rrow[r]] for r in resource_ids}
    certificate = DualSolution(y, z)
    if certificate.objective <= 0:
        raise AssertionError("infeasibility certificate has non-positive objective")
    return LpFeasibilityResult(False, None, certificate, model)


def _check_primal(
    inst: Instance, model: ClpModel, primal: dict[Configuration, Fraction]
) -> None:
    for cfg, weight in primal.items():
        if weight < 0:
            raise AssertionError("negative primal weight")
    for p in model.players:
        covered = sum(
            (w for cfg, w in primal.items() if cfg.owner == p), Fraction(0)
        )
        if covered < 1:
            raise AssertionError(f"covering constraint violated for {p}")
    for r in model.resource_ids:
        packed = sum(
            (w for cfg, w in primal.items() if r in cfg.resources), Fraction(0)
        )
        if packed > 1:
            raise AssertionError(f"packing constraint violated for {r}")


# ---------------------------------------------------------------------------
# T*
# ---------------------------------------------------------------------------

def subset_sum_candidates(
    inst: Instance,
    *,
    max_pool: int = DEFAULT_POOL_CAP,
    max_candidates: int = 200_000,
) -> list[Fraction]:
    """Distinct positive subset-sum values of the covet lists.

    CLP(T) feasibility changes only where some configuration family
    changes, i.e. at these thresholds, so T* is always one of them
    (or 0 when none is feasible).
    """
    sums: set[Fraction] = set()
    for p in inst.players:
        pool = inst.covet_list(p)
        if len(pool) > max_pool:
            raise LpCapError(f"covet list of {p!r} exceeds cap {max_pool}")
        acc: set[Fraction] = {Fraction(0)}
        for rid in pool:
            v = inst.resources[rid]
            acc |= {s + v for s in acc}
            if len(acc) > max_candidates:
                raise LpCapError(f"more than {max_candidates} subset sums")
        sums |= acc
    sums.discard(Fraction(0))
    return sorted(sums)


def compute_t_star(inst: Instance, **caps) -> TStarResult:
    """Exact T* = max{T : CLP(T) feasible} by binary search on candidates."""
    candidates = subset_sum_candidates(inst, **caps)
    probes = 0
    if not candidates or not inst.players:
        witness = clp_feasible(inst, Fraction(0))
        return TStarResult(Fraction(0), len(candidates), witness, 1)
    lo, hi = 0, len(candidates) - 1
    best: int | None = None
    results: dict[int, LpFeasibilityResult] = {}
    while lo <= hi:
        mid = (lo + hi) // 2
        res = clp_feasible(inst, candidates[mid])
        probes += 1
        results[mid] = res
        if res.feasible:
            best = mid
            lo = mid + 1
        else:
            hi = mid - 1
    if best is None:
        witness = clp_feasible(inst, Fraction(0))
        probes += 1
        return TStarResult(Fraction(0), len(candidates), witness, probes)
    return TStarResult(candidates[best], len(candidates), results[best], probes)


# ---------------------------------------------------------------------------
# Dual constructions and verification
# ---------------------------------------------------------------------------

def build_dual_basic(
    inst: Instance,
    U: frozenset[str] | set[str],
    Y: frozenset[str] | set[str],
    c: Fraction,
    fat_set: frozenset[str] | set[str],
) -> DualSolution:
    """Dual solution with y = c on U, z = c on F_U, z = v_r on Y.

    Feasible whenever every thin configuration of a player in U meets Y
    with value at least c; then weak duality gives v(Y) >= c(|U|-|F_U|).
    """
    c = Fraction(c)
    if c < 0:
        raise ValueError("c must be non-negative")
    if set(Y) & set(fat_set):
        raise ValueError("Y intersects the fat set")
    f_u = fat_for_players(inst, U, fat_set)
    y = {p: (c if p in U else Fraction(0)) for p in inst.players}
    z = {}
    for rid in inst.resource_ids:
        if rid in f_u:
            z[rid] = c
        elif rid in Y:
            z[rid] = inst.resources[rid]
        else:
            z[rid] = Fraction(0)
    return DualSolution(y, z)


def build_dual_refined(
    inst: Instance,
    U: frozenset[str] | set[str],
    Y: frozenset[str] | set[str],
    c: Fraction,
    d: Fraction,
    fat_set: frozenset[str] | set[str],
) -> DualSolution:
    """Refined dual: z is capped at d on the high-value part of Y.

    y = c on U; z = c on F_U, d on Y_{>d} = {r in Y : v_r > d}, v_r on
    the rest of Y.  Requires 0 <= c <= 2d.
    """
    c, d = Fraction(c), Fraction(d)
    if c < 0 or c > 2 * d:
        raise ValueError(f"need 0 <= c <= 2d, got c={c}, d={d}")
    if set(Y) & set(fat_set):
        raise ValueError("Y intersects the fat set")
    f_u = fat_for_players(inst, U, fat_set)
    y = {p: (c if p in U else Fraction(0)) for p in inst.players}
    z = {}
    for rid in inst.resource_ids:
        if rid in f_u:
            z[rid] = c
        elif rid in Y:
            z[rid] = d if inst.resources[rid] > d else inst.resources[rid]
        else:
            z[rid] = Fraction(0)
    return DualSolution(y, z)


def fat_for_players(
    inst: Instance, U, fat_set
) -> frozenset[str]:
    """F_U: fat resources coveted by at least one player of U."""
    coveted = set()
    for p in U:
        coveted |= inst.covets[p]
    return frozenset(set(fat_set) & coveted)


def verify_dual(inst: Instance, target: Fraction, sol: DualSolution, **caps) -> DualCheck:
    """Exact feasibility check of a DCLP(target) solution.

    Non-negativity plus, for every player with y_p > 0, the constraint
    y_p <= sum of z over each minimal configuration; z >= 0 makes minimal
    configurations the binding ones.  A min-cost covering search over the
    covet list independently certifies the scan.
    """
    if set(sol.y) != set(inst.players) or set(sol.z) != set(inst.resource_ids):
        raise ValueError("dual solution dimensions do not match the instance")
    for p, yv in sol.y.items():
        if yv < 0:
            return DualCheck(False, sol.objective, None)
    for r, zv in sol.z.items():
        if zv < 0:
            return DualCheck(False, sol.objective, None)
    target = Fraction(target)
    for p in inst.players:
        yp = sol.y[p]
        if yp == 0:
            continue
        configs = enumerate_configurations(inst, p, target, **caps)
        for cfg in configs:
            weight = sum((sol.z[r] for r in cfg.resources), Fraction(0))
            if weight < yp:
                return DualCheck(False, sol.objective, cfg)
        # Independent certification of the same constraint family.
        pool = {rid: inst.resources[rid] for rid in inst.covets[p]}
        found = min_cost_subset_reaching(pool, {r: sol.z[r] for r in pool}, target)
        if found is not None:
            best_cost, best_set = found
            if best_cost < yp:
                return DualCheck(
                    False,
                    sol.objective,
                    Configuration(p, best_set, inst.value(best_set)),
                )
    return DualCheck(True, sol.objective, None)


def hypothesis_holds_basic(
    inst: Instance, target: Fraction, U, Y, c: Fraction, fat_set
) -> bool:
    """Scan: v(Y n S) >= c for every thin configuration S of players in U."""
    Y = set(Y)
    for p in U:
        for cfg in enumerate_thin_configurations(inst, p, target, frozenset(fat_set)):
            if inst.value(cfg.resources & Y) < c:
                return False
    return True


def hypothesis_holds_refined(
    inst: Instance, target: Fraction, U, Y, c: Fraction, d: Fraction, fat_set
) -> bool:
    """Scan of the refined hypothesis on thin configurations.

    Checking minimal configurations suffices: enlarging S grows both
    Y_{>d} n S and v(Y_{<=d} n S), so the requirement only gets easier.
    """
    Y = set(Y)
    y_hi = {r for r in Y if inst.resources[r] > d}
    y_lo = Y - y_hi
    for p in U:
        for cfg in enumerate_thin_configurations(inst, p, target, frozenset(fat_set)):
            hi = len(cfg.resources & y_hi)
            if hi > 1:
                continue
            need = c if hi == 0 else c - d
            if inst.value(cfg.resources & y_lo) < need:
                return False
    return True
