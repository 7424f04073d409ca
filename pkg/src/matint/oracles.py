"""Fixed-parameter interdiction oracles: exact brute force, partition DP, and a weak certified one."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Callable, Iterator, Sequence

from .affine import as_fraction
from .errors import InfeasibleRestrictionError, InputError
from .instance import Instance, Strategy
from .matroids import GreedyState, PartitionMatroid, rank

ORACLE_BRUTE = "brute"
ORACLE_PARTITION_DP = "partition-dp"
ORACLE_SYNTHETIC = "synthetic"


@dataclass(frozen=True)
class OracleAnswer:
    """A strategy together with the guarantee factor certified by the producing oracle."""

    strategy: Strategy
    beta: Fraction


@dataclass(frozen=True)
class OracleSpec:
    """Which oracle to run; ``beta`` only applies to the synthetic kind."""

    kind: str
    beta: Fraction = Fraction(1)

    def __post_init__(self):
        if self.kind not in (ORACLE_BRUTE, ORACLE_PARTITION_DP, ORACLE_SYNTHETIC):
            raise InputError(f"unknown oracle kind {self.kind!r}")
        if not 0 < self.beta <= 1:
            raise InputError(f"oracle guarantee must lie in (0, 1], got {self.beta}")
        if self.kind != ORACLE_SYNTHETIC and self.beta != 1:
            raise InputError(f"{self.kind} oracle is exact; beta cannot be {self.beta}")

    @classmethod
    def parse(cls, text: str) -> "OracleSpec":
        if text.startswith(ORACLE_SYNTHETIC + ":"):
            return cls(ORACLE_SYNTHETIC, as_fraction(text.split(":", 1)[1]))
        return cls(text)

    def __str__(self) -> str:
        if self.kind == ORACLE_SYNTHETIC:
            return f"{ORACLE_SYNTHETIC}:{self.beta}"
        return self.kind


def strategy_values(instance: Instance, lam: Sequence[Fraction]) -> Iterator[tuple[tuple[int, ...], Fraction]]:
    """Yield (removed-elements, interdicted minimum basis weight) for every strategy.

    One shared weight sort serves all strategies, which keeps full enumeration
    affordable for the instance sizes the exact oracles are meant for.
    """
    weights = instance.weights_at(lam)
    order = sorted(range(instance.m), key=lambda e: (weights[e], e))
    k = rank(instance.matroid)
    for removed in combinations(range(instance.m), instance.ell):
        gone = set(removed)
        state = GreedyState(instance.matroid)
        total = Fraction(0)
        count = 0
        for e in order:
            if e in gone:
                continue
            if state.add(e):
                total += weights[e]
                count += 1
                if count == k:
                    break
        if count != k:
            raise InfeasibleRestrictionError(
                f"removing {list(removed)} leaves no basis of rank {k}"
            )
        yield removed, total


def brute_force_oracle(instance: Instance, lam: Sequence[Fraction]) -> OracleAnswer:
    """Exact oracle: maximize the interdicted basis weight over all strategies.

    Ties go to the lexicographically smallest removed set, so the answer is a
    pure function of the weight ordering at ``lam``.
    """
    best: tuple[int, ...] | None = None
    best_value: Fraction | None = None
    for removed, value in strategy_values(instance, lam):
        if best_value is None or value > best_value:
            best, best_value = removed, value
    assert best is not None
    return OracleAnswer(Strategy(best), Fraction(1))


def partition_dp_oracle(instance: Instance, lam: Sequence[Fraction]) -> OracleAnswer:
    """Exact oracle for partition matroids via a per-part removal DP.

    Within a part it is optimal to remove a prefix of the cheapest elements;
    the DP distributes the budget over parts. Among optimal distributions the
    lexicographically greatest one wins, i.e. removal prefers earlier parts.
    """
    matroid = instance.matroid
    if not isinstance(matroid, PartitionMatroid):
        raise InputError("the partition DP oracle requires a partition matroid")
    weights = instance.weights_at(lam)
    ell = instance.ell

    part_orders = [
        sorted(part, key=lambda e: (weights[e], e)) for part in matroid.parts
    ]
    # cost[i][r]: weight of the u_i cheapest survivors of part i after removing its r cheapest
    costs: list[list[Fraction]] = []
    for order, cap in zip(part_orders, matroid.capacities):
        slack = len(order) - cap
        costs.append(
            [sum(weights[e] for e in order[r : r + cap]) for r in range(slack + 1)]
        )

    n_parts = len(part_orders)
    unreachable = None
    # best[i][t]: max total cost using parts i.. with exactly t removals
    best: list[list[Fraction | None]] = [
        [unreachable] * (ell + 1) for _ in range(n_parts + 1)
    ]
    best[n_parts][0] = Fraction(0)
    for i in range(n_parts - 1, -1, -1):
        for t in range(ell + 1):
            for r in range(min(t, len(costs[i]) - 1) + 1):
                tail = best[i + 1][t - r]
                if tail is None:
                    continue
                value = costs[i][r] + tail
                if best[i][t] is None or value > best[i][t]:
                    best[i][t] = value
    if best[0][ell] is None:
        raise InfeasibleRestrictionError(
            f"no distribution of {ell} removals keeps every part at capacity"
        )

    removed: list[int] = []
    t = ell
    for i in range(n_parts):
        target = best[i][t]
        for r in range(min(t, len(costs[i]) - 1), -1, -1):
            tail = best[i + 1][t - r]
            if tail is not None and costs[i][r] + tail == target:
                removed.extend(part_orders[i][:r])
                t -= r
                break
    return OracleAnswer(Strategy(tuple(removed)), Fraction(1))


def synthetic_oracle(
    instance: Instance, lam: Sequence[Fraction], beta: Fraction
) -> OracleAnswer:
    """Adversarially weak certified oracle: the worst strategy still meeting the guarantee.

    Exercises guarantee factors below one without an external approximation
    algorithm.
    """
    if not 0 < beta <= 1:
        raise InputError(f"oracle guarantee must lie in (0, 1], got {beta}")
    entries = list(strategy_values(instance, lam))
    optimum = max(value for _, value in entries)
    threshold = beta * optimum
    best: tuple[int, ...] | None = None
    best_value: Fraction | None = None
    for removed, value in entries:
        if value >= threshold and (best_value is None or value < best_value):
            best, best_value = removed, value
    assert best is not None
    return OracleAnswer(Strategy(best), beta)


OracleFn = Callable[[Instance, Sequence[Fraction]], OracleAnswer]


def resolve_oracle(spec: OracleSpec, instance: Instance) -> OracleFn:
    """Bind an oracle spec to a callable, checking it applies to the matroid kind."""
    if spec.kind == ORACLE_BRUTE:
        return brute_force_oracle
    if spec.kind == ORACLE_PARTITION_DP:
        if not isinstance(instance.matroid, PartitionMatroid):
            raise InputError("the partition DP oracle requires a partition matroid")
        return partition_dp_oracle
    beta = spec.beta
    return lambda inst, lam: synthetic_oracle(inst, lam, beta)
