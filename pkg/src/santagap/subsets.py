"""Branch-and-bound searches over valued resource subsets.

Shared by configuration enumeration, hyperedge enumeration, the block
bound m, and dual verification.  All arithmetic is exact.
"""

from __future__ import annotations

from fractions import Fraction


class SubsetCapError(RuntimeError):
    """Raised when a subset search would exceed its configured caps."""


def minimal_subsets_at_least(
    items: dict[str, Fraction],
    threshold: Fraction,
    *,
    max_items: int = 20,
    max_results: int = 100_000,
) -> list[frozenset[str]]:
    """All inclusion-minimal subsets of ``items`` with total value >= threshold.

    Items are scanned in descending value order; a branch is recorded and
    closed the first time its running sum crosses the threshold, which for
    positive values yields exactly the inclusion-minimal subsets, each once,
    in a deterministic order.
    """
    if len(items) > max_items:
        raise SubsetCapError(f"{len(items)} items exceeds cap {max_items}")
    if threshold <= 0:
        return [frozenset()]
    order = sorted(items, key=lambda rid: (-items[rid], rid))
    values = [items[rid] for rid in order]
    suffix = [Fraction(0)] * (len(order) + 1)
    for i in range(len(order) - 1, -1, -1):
        suffix[i] = suffix[i + 1] + values[i]
    out: list[frozenset[str]] = []
    chosen: list[str] = []

    def dfs(i: int, total: Fraction) -> None:
        if total + suffix[i] < threshold:
            return
        if i == len(order):
            return
        chosen.append(order[i])
        new_total = total + values[i]
        if new_total >= threshold:
            if len(out) >= max_results:
                raise SubsetCapError(f"more than {max_results} minimal subsets")
            out.append(frozenset(chosen))
        else:
            dfs(i + 1, new_total)
        chosen.pop()
        dfs(i + 1, total)

    dfs(0, Fraction(0))
    return out


def max_value_below(items: dict[str, Fraction], threshold: Fraction) -> Fraction:
    """Largest subset value strictly below ``threshold`` (0 for the empty set)."""
    if threshold <= 0:
        raise ValueError("threshold must be positive")
    order = sorted(items, key=lambda rid: (-items[rid], rid))
    values = [items[rid] for rid in order]
    suffix = [Fraction(0)] * (len(order) + 1)
    for i in range(len(order) - 1, -1, -1):
        suffix[i] = suffix[i + 1] + values[i]
    best = Fraction(0)

    def dfs(i: int, total: Fraction) -> None:
        nonlocal best
        take_all = total + suffix[i]
        if take_all < threshold:
            if take_all > best:
                best = take_all
            return
        if take_all <= best:
            return
        if i == len(order):
            return
        if total + values[i] < threshold:
            dfs(i + 1, total + values[i])
        dfs(i + 1, total)

    dfs(0, Fraction(0))
    return best


def min_cost_subset_reaching(
    items: dict[str, Fraction],
    costs: dict[str, Fraction],
    threshold: Fraction,
) -> tuple[Fraction, frozenset[str]] | None:
    """Minimize total cost over subsets with value >= threshold.

    Returns (cost, subset) or None when even the full set falls short.
    Used to certify dual feasibility independently of the minimal-
    configuration scan.
    """
    order = sorted(items, key=lambda rid: (costs[rid], -items[rid], rid))
    values = [items[rid] for rid in order]
    cost_of = [costs[rid] for rid in order]
    suffix = [Fraction(0)] * (len(order) + 1)
    for i in range(len(order) - 1, -1, -1):
        suffix[i] = suffix[i + 1] + values[i]
    if suffix[0] < threshold:
        return None
    best_cost: Fraction | None = None
    best_set: frozenset[str] = frozenset()
    chosen: list[str] = []

    def dfs(i: int, total: Fraction, cost: Fraction) -> None:
        nonlocal best_cost, best_set
        if best_cost is not None and cost >= best_cost and total < threshold:
            return
        if total >= threshold:
            if best_cost is None or cost < best_cost:
                best_cost = cost
                best_set = frozenset(chosen)
            return
        if i == len(order) or total + suffix[i] < threshold:
            return
        chosen.append(order[i])
        dfs(i + 1, total + values[i], cost + cost_of[i])
        chosen.pop()
        dfs(i + 1, total, cost)

    dfs(0, Fraction(0), Fraction(0))
    assert best_cost is not None
    return best_cost, best_set
