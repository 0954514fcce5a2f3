"""Integrality-gap experiments and the convex-combination certificate.

Every report carries exact rationals rendered as "a/b"; decimals are
annotations only.  An instance whose gap exceeded the claimed bound is
a loud event: the report embeds the full instance document so the case
can be audited independently (a true exceedance would falsify the
implementation, not the theory).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .instance import (
    Instance,
    OracleCapError,
    brute_force_opt,
    gen_random,
    gen_two_value,
)
from .lp_core import LpCapError, compute_t_star
from .rational import format_rational

SCHEMA = "santa-gap/1"

CONVEX_WEIGHTS = (
    Fraction(1, 35),
    Fraction(26, 245),
    Fraction(46, 2205),
    Fraction(38, 45),
)

GAP_BOUND = Fraction(53, 15)


class CoefficientError(ValueError):
    pass


@dataclass(frozen=True)
class CoefficientCertificate:
    """The four weighted phase inequalities combined, per explosion counter."""

    T: Fraction
    m: Fraction
    weights: tuple[Fraction, Fraction, Fraction, Fraction]
    per_variable: dict[str, Fraction]
    weights_sum: Fraction
    all_at_most_one: bool

    def to_json(self) -> dict:
        return {
            "schema": SCHEMA,
            "T": format_rational(self.T),
            "m": format_rational(self.m),
            "weights": [format_rational(w) for w in self.weights],
            "per_variable": {
                k: format_rational(v) for k, v in self.per_variable.items()
            },
            "weights_sum": format_rational(self.weights_sum),
            "all_at_most_one": self.all_at_most_one,
        }


def phase_inequality_coefficients(T: Fraction, m: Fraction) -> list[tuple[Fraction, ...]]:
    """Right-hand-side coefficient vectors (n1..n4) of the four phase
    inequalities derived from the dual snapshots."""
    T, m = Fraction(T), Fraction(m)
    if T <= 3 * m:
        raise CoefficientError(f"need T > 3m, got T={T}, m={m}")
    zero = Fraction(0)
    return [
        (2 * m / (T - 3 * m), Fraction(7, 3), zero, zero),
        (m / (T - 3 * m), Fraction(7, 6), Fraction(5, 4), zero),
        (
            2 * m / (T - 2 * m),
            7 * m / (3 * (T - 2 * m)),
            5 * m / (2 * (T - 2 * m)),
            zero,
        ),
        (
            2 * m / (T - m),
            7 * m / (3 * (T - m)),
            5 * m / (2 * (T - m)),
            3 * m / (T - m),
        ),
    ]


def verify_convex_combination(T: Fraction, m: Fraction) -> CoefficientCertificate:
    """Combine the four phase inequalities with the fixed convex weights.

    At T = (53/15) m every combined coefficient is exactly 1; above it
    they are all below 1, which is what turns the cover ledger into the
    lower bound ell >= |U| - |F_U|.
    """
    T, m = Fraction(T), Fraction(m)
    rows = phase_inequality_coefficients(T, m)
    combined = [
        sum((w * row[i] for w, row in zip(CONVEX_WEIGHTS, rows)), Fraction(0))
        for i in range(4)
    ]
    per_variable = dict(zip(("n1", "n2", "n3", "n4"), combined))
    return CoefficientCertificate(
        T,
        m,
        CONVEX_WEIGHTS,
        per_variable,
        sum(CONVEX_WEIGHTS, Fraction(0)),
        all(cv <= 1 for cv in combined),
    )


# ---------------------------------------------------------------------------
# Experiments
# ---------------------------------------------------------------------------

@dataclass
class GapReport:
    instance_id: str
    t_star: Fraction | None = None
    opt: Fraction | None = None
    gap: Fraction | None = None
    gap_infinite: bool = False
    bound_claimed: Fraction = GAP_BOUND
    bound_respected: bool | None = None
    skipped: str | None = None
    instance_doc: str | None = None

    def to_json(self) -> dict:
        doc = {
            "schema": SCHEMA,
            "instance": self.instance_id,
            "bound_claimed": format_rational(self.bound_claimed),
        }
        if self.skipped is not None:
            doc["skipped"] = self.skipped
            return doc
        doc["t_star"] = format_rational(self.t_star)
        doc["opt"] = format_rational(self.opt)
        doc["gap"] = "inf" if self.gap_infinite else format_rational(self.gap)
        doc["gap_decimal"] = (
            None if self.gap_infinite else round(float(self.gap), 6)
        )
        doc["bound_respected"] = self.bound_respected
        if self.instance_doc is not None:
            doc["instance_doc"] = self.instance_doc
        return doc

    def to_tsv_row(self) -> str:
        if self.skipped is not None:
            return f"{self.instance_id}\tskipped\t{self.skipped}"
        gap = "inf" if self.gap_infinite else format_rational(self.gap)
        return (
            f"{self.instance_id}\t{format_rational(self.t_star)}"
            f"\t{format_rational(self.opt)}\t{gap}\t{self.bound_respected}"
        )


TSV_HEADER = "instance\tt_star\topt\tgap\tbound_respected"


def evaluate_instance(
    inst: Instance, instance_id: str, bound: Fraction = GAP_BOUND
) -> GapReport:
    """Exact T* and OPT for one instance; loud artifact on exceedance."""
    report = GapReport(instance_id, bound_claimed=Fraction(bound))
    try:
        t_star = compute_t_star(inst).t_star
        opt = brute_force_opt(inst).opt_value
    except (OracleCapError, LpCapError) as exc:
        report.skipped = str(exc)
        return report
    report.t_star = t_star
    report.opt = opt
    if opt == 0:
        # Degenerate but representable (some player covets nothing).
        report.gap_infinite = True
        report.gap = None
        report.bound_respected = False
    else:
        report.gap = t_star / opt
        report.bound_respected = report.gap <= Fraction(bound)
    if not report.bound_respected:
        report.instance_doc = inst.serialize()
    return report


@dataclass(frozen=True)
class BatchConfig:
    """Deterministic experiment batch description."""

    kind: str = "random"  # "random" | "two_value"
    count: int = 10
    num_players: int = 3
    num_resources: int = 7
    value_lo: Fraction = Fraction(1, 6)
    value_hi: Fraction = Fraction(1)
    density: float = 0.6
    eps: Fraction = Fraction(1, 4)
    num_fat: int = 3
    num_thin: int = 6
    grid: int = 6


def generate_batch(config: BatchConfig, seed: int) -> list[tuple[str, Instance]]:
    out = []
    for i in range(config.count):
        sub_seed = seed * 100_003 + i
        if config.kind == "random":
            inst = gen_random(
                config.num_players,
                config.num_resources,
                (config.value_lo, config.value_hi),
                config.density,
                sub_seed,
                grid=config.grid,
            )
        elif config.kind == "two_value":
            inst = gen_two_value(
                config.num_players,
                config.eps,
                {
                    "num_fat": config.num_fat,
                    "num_thin": config.num_thin,
                    "density": config.density,
                },
                sub_seed,
            )
        else:
            raise ValueError(f"unknown batch kind {config.kind!r}")
        out.append((f"{config.kind}-{seed}-{i}", inst))
    return out


def run_gap_experiment(
    config: BatchConfig, bound: Fraction = GAP_BOUND, seed: int = 0
) -> list[GapReport]:
    """Evaluate a deterministic batch; order-stable by instance id."""
    reports = [
        evaluate_instance(inst, instance_id, bound)
        for instance_id, inst in generate_batch(config, seed)
    ]
    reports.sort(key=lambda r: r.instance_id)
    return reports
