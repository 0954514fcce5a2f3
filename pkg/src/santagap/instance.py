"""Problem instances: players, valued resources, covet lists.

An instance is immutable after construction and safe to share across
threads.  Player and resource ids are strings; every ordered view is
lexicographic so that all downstream computations are deterministic.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .rational import format_rational, parse_rational

DEFAULT_ORACLE_RESOURCE_CAP = 14
DEFAULT_ORACLE_PLAYER_CAP = 6


class InstanceError(ValueError):
    """Raised when instance data violates the model invariants."""


class ParseError(InstanceError):
    """Raised on malformed instance documents; carries a line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class OracleCapError(RuntimeError):
    """Raised when an instance is too large for an exhaustive oracle."""


@dataclass(frozen=True)
class Instance:
    """A restricted max-min allocation instance (players, resources, covets)."""

    players: tuple[str, ...]
    resources: dict[str, Fraction]
    covets: dict[str, frozenset[str]]

    def __post_init__(self):
        if len(set(self.players)) != len(self.players):
            raise InstanceError("duplicate player id")
        for rid, value in self.resources.items():
            if value <= 0:
                raise InstanceError(f"resource {rid!r} has non-positive value {value}")
        for pid, wants in self.covets.items():
            if pid not in self.players:
                raise InstanceError(f"covet list for undeclared player {pid!r}")
            missing = wants - self.resources.keys()
            if missing:
                raise InstanceError(
                    f"covet list of {pid!r} references undeclared resource "
                    f"{sorted(missing)[0]!r}"
                )
        for pid in self.players:
            self.covets.setdefault(pid, frozenset())

    @staticmethod
    def build(players, resources, covets) -> "Instance":
        """Construct a canonical (sorted) instance from loose mappings."""
        players = tuple(sorted(players))
        res = {rid: Fraction(v) for rid, v in sorted(dict(resources).items())}
        cov = {pid: frozenset(covets.get(pid, ())) for pid in players}
        return Instance(players, res, cov)

    @property
    def resource_ids(self) -> tuple[str, ...]:
        return tuple(self.resources)

    def covet_list(self, player: str) -> tuple[str, ...]:
        return tuple(sorted(self.covets[player]))

    def value(self, ids) -> Fraction:
        """Exact total value of a set of resource ids."""
        total = Fraction(0)
        for rid in ids:
            if rid not in self.resources:
                raise InstanceError(f"unknown resource id {rid!r}")
            total += self.resources[rid]
        return total

    def serialize(self) -> str:
        """Render the canonical text document for this instance."""
        lines = ["players " + " ".join(self.players)]
        for rid, value in self.resources.items():
            lines.append(f"resource {rid} {format_rational(value)}")
        for pid in self.players:
            wants = self.covet_list(pid)
            if wants:
                lines.append(f"covets {pid} " + " ".join(wants))
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        return {
            "players": list(self.players),
            "resources": {r: format_rational(v) for r, v in self.resources.items()},
            "covets": {p: list(self.covet_list(p)) for p in self.players},
        }


@dataclass(frozen=True)
class Allocation:
    """A disjoint assignment of coveted resources to players."""

    assignment: dict[str, frozenset[str]]

    def min_value(self, inst: Instance) -> Fraction:
        return min(inst.value(self.assignment.get(p, frozenset())) for p in inst.players)

    def validate(self, inst: Instance) -> None:
        seen: set[str] = set()
        for pid, got in self.assignment.items():
            if pid not in inst.players:
                raise InstanceError(f"allocation names unknown player {pid!r}")
            if not got <= inst.covets[pid]:
                extra = sorted(got - inst.covets[pid])[0]
                raise InstanceError(f"{pid!r} allocated uncoveted resource {extra!r}")
            overlap = seen & got
            if overlap:
                raise InstanceError(f"resource {sorted(overlap)[0]!r} allocated twice")
            seen |= got


@dataclass(frozen=True)
class OptResult:
    """Exact optimum of an instance with a witnessing allocation."""

    opt_value: Fraction
    witness: Allocation
    nodes_explored: int = field(default=0, compare=False)


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------

def parse_instance(text: str) -> Instance:
    """Parse the line-oriented instance document format.

    Format::

        players p1 p2 ...
        resource <id> <value as integer or a/b>
        covets <player-id> <resource-id> ...

    Lines starting with ``#`` are comments.
    """
    players: list[str] | None = None
    resources: dict[str, Fraction] = {}
    covets: dict[str, set[str]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        kind = tokens[0]
        if kind == "players":
            if players is not None:
                raise ParseError("duplicate players line", lineno)
            players = tokens[1:]
            if not players:
                raise ParseError("players line lists no players", lineno)
            if len(set(players)) != len(players):
                raise ParseError("duplicate player id", lineno)
        elif kind == "resource":
            if len(tokens) != 3:
                raise ParseError("expected: resource <id> <value>", lineno)
            rid, value_text = tokens[1], tokens[2]
            if rid in resources:
                raise ParseError(f"duplicate resource id {rid!r}", lineno)
            try:
                value = parse_rational(value_text)
            except ValueError:
                raise ParseError(f"bad value {value_text!r}", lineno) from None
            if value <= 0:
                raise ParseError(f"non-positive value for resource {rid!r}", lineno)
            resources[rid] = value
        elif kind == "covets":
            if len(tokens) < 2:
                raise ParseError("expected: covets <player-id> <resource-id>...", lineno)
            pid = tokens[1]
            if players is None or pid not in players:
                raise ParseError(f"covets line for undeclared player {pid!r}", lineno)
            if pid in covets:
                raise ParseError(f"duplicate covets line for player {pid!r}", lineno)
            wants = tokens[2:]
            for rid in wants:
                if rid not in resources:
                    raise ParseError(
                        f"covet list of {pid!r} references undeclared resource {rid!r}",
                        lineno,
                    )
            covets[pid] = set(wants)
        else:
            raise ParseError(f"unknown directive {kind!r}", lineno)
    if players is None:
        raise ParseError("missing players line")
    return Instance.build(players, resources, covets)


def parse_instance_json(text: str) -> Instance:
    """Parse the JSON mirror of the instance document."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    for key in ("players", "resources", "covets"):
        if key not in doc:
            raise ParseError(f"missing key {key!r}")
    players = list(doc["players"])
    resources = {}
    for rid, value_text in doc["resources"].items():
        value = parse_rational(str(value_text))
        if value <= 0:
            raise ParseError(f"non-positive value for resource {rid!r}")
        resources[rid] = value
    covets = {}
    declared = set(players)
    for pid, wants in doc["covets"].items():
        if pid not in declared:
            raise ParseError(f"covets entry for undeclared player {pid!r}")
        for rid in wants:
            if rid not in resources:
                raise ParseError(
                    f"covet list of {pid!r} references undeclared resource {rid!r}"
                )
        covets[pid] = set(wants)
    if len(declared) != len(players):
        raise ParseError("duplicate player id")
    return Instance.build(players, resources, covets)


def load_instance(path: str) -> Instance:
    """Load an instance from a file; .json selects the JSON mirror format."""
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    if path.endswith(".json"):
        return parse_instance_json(text)
    return parse_instance(text)


# ---------------------------------------------------------------------------
# Exhaustive optimum
# ---------------------------------------------------------------------------

def brute_force_opt(
    inst: Instance,
    *,
    max_resources: int = DEFAULT_ORACLE_RESOURCE_CAP,
    max_players: int = DEFAULT_ORACLE_PLAYER_CAP,
) -> OptResult:
    """Exact OPT by exhaustive assignment with branch-and-bound pruning.

    Every resource is assigned to one of its coveters or to nobody.  The
    search is pruned with the optimistic bound min_p(value_p + remaining
    potential of p), so equal-value instances finish in well under the
    worst-case product.
    """
    if len(inst.resources) > max_resources or len(inst.players) > max_players:
        raise OracleCapError(
            f"instance too large for oracle "
            f"({len(inst.players)} players, {len(inst.resources)} resources; "
            f"caps {max_players}/{max_resources})"
        )
    players = inst.players
    pidx = {p: i for i, p in enumerate(players)}
    # Only resources somebody covets can matter; order by descending value.
    relevant = [
        (rid, inst.resources[rid], [pidx[p] for p in players if rid in inst.covets[p]])
        for rid in inst.resource_ids
        if any(rid in inst.covets[p] for p in players)
    ]
    relevant.sort(key=lambda t: (-t[1], t[0]))
    n = len(relevant)
    # potential[p][i] = total value of resources i.. coveted by p
    potential = [[Fraction(0)] * (n + 1) for _ in players]
    for i in range(n - 1, -1, -1):
        _, val, coveters = relevant[i]
        for p in range(len(players)):
            potential[p][i] = potential[p][i + 1] + (val if p in coveters else 0)

    best_value = Fraction(-1)
    best_choice: list[int | None] = [None] * n
    choice: list[int | None] = [None] * n
    values = [Fraction(0)] * len(players)
    nodes = 0

    def bound(i: int) -> Fraction:
        return min(values[p] + potential[p][i] for p in range(len(players)))

    def dfs(i: int) -> None:
        nonlocal best_value, nodes
        nodes += 1
        if bound(i) <= best_value:
            return
        if i == n:
            current = min(values)
            if current > best_value:
                best_value = current
                best_choice[:] = choice
            return
        _, val, coveters = relevant[i]
        for p in coveters:
            values[p] += val
            choice[i] = p
            dfs(i + 1)
            values[p] -= val
        choice[i] = None
        dfs(i + 1)

    if players:
        dfs(0)
    else:
        best_value = Fraction(0)

    assignment: dict[str, set[str]] = {p: set() for p in players}
    for i, owner in enumerate(best_choice):
        if owner is not None:
            assignment[players[owner]].add(relevant[i][0])
    witness = Allocation({p: frozenset(s) for p, s in assignment.items()})
    witness.validate(inst)
    opt = best_value if best_value >= 0 else Fraction(0)
    if players and witness.min_value(inst) != opt:
        raise AssertionError("oracle witness does not achieve its optimum")
    return OptResult(opt, witness, nodes)


# ---------------------------------------------------------------------------
# Generators (deterministic under seed)
# ---------------------------------------------------------------------------

def _sample_covets(
    rng: random.Random,
    players: list[str],
    resource_ids: list[str],
    density: float,
) -> dict[str, set[str]]:
    """Sample covet rows; resample so that no player row and no resource
    column comes out empty (when the shape makes that possible)."""
    covets: dict[str, set[str]] = {}
    for pid in players:
        row = {rid for rid in resource_ids if rng.random() < density}
        while resource_ids and not row:
            row = {rid for rid in resource_ids if rng.random() < density}
            if density <= 0:
                row = {rng.choice(resource_ids)}
        covets[pid] = row
    for rid in resource_ids:
        if players and not any(rid in covets[p] for p in players):
            covets[rng.choice(players)].add(rid)
    return covets


def gen_two_value(
    num_players: int,
    eps: Fraction,
    covet_pattern: dict | None = None,
    seed: int = 0,
) -> Instance:
    """Generate a (1, eps)-restricted instance: every value is 1 or eps.

    ``covet_pattern`` keys (all optional): ``num_fat`` (unit-value
    resources, default 1 per player), ``num_thin`` (eps-value resources,
    default 2 per player), ``density`` (covet probability, default 0.75).
    """
    eps = Fraction(eps)
    if not 0 < eps < 1:
        raise InstanceError(f"eps must lie in (0, 1), got {eps}")
    pattern = dict(covet_pattern or {})
    num_fat = pattern.get("num_fat", num_players)
    num_thin = pattern.get("num_thin", 2 * num_players)
    density = pattern.get("density", 0.75)
    rng = random.Random(seed)
    players = [f"p{i+1}" for i in range(num_players)]
    resources: dict[str, Fraction] = {}
    for i in range(num_fat):
        resources[f"f{i+1}"] = Fraction(1)
    for i in range(num_thin):
        resources[f"t{i+1}"] = eps
    covets = _sample_covets(rng, players, sorted(resources), density)
    return Instance.build(players, resources, covets)


def gen_random(
    num_players: int,
    num_resources: int,
    value_range: tuple[Fraction, Fraction],
    covet_density: float,
    seed: int = 0,
    *,
    grid: int = 12,
) -> Instance:
    """Generate a random instance with values on a rational grid.

    Values are lo + (hi-lo)*k/grid for k in 0..grid, kept strictly
    positive; small grids keep subset sums (and so the T* candidate set)
    desk-sized.
    """
    lo, hi = Fraction(value_range[0]), Fraction(value_range[1])
    if lo <= 0 or hi < lo:
        raise InstanceError(f"bad value range [{lo}, {hi}]")
    if not 0 <= covet_density <= 1:
        raise InstanceError(f"density must lie in [0, 1], got {covet_density}")
    if num_resources == 0 and covet_density > 0 and num_players > 0:
        raise InstanceError("cannot covet among zero resources")
    rng = random.Random(seed)
    players = [f"p{i+1}" for i in range(num_players)]
    resources = {
        f"r{i+1}": lo + (hi - lo) * Fraction(rng.randint(0, grid), grid)
        for i in range(num_resources)
    }
    covets = _sample_covets(rng, players, sorted(resources), covet_density)
    return Instance.build(players, resources, covets)
