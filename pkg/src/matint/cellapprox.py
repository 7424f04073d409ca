"""Per-cell certified approximation via outer approximation of the value graph.

On one arrangement cell every interdicted-basis value is an affine function of
the parameter vector, so the strategies collected for the cell induce a
lower-bound polyhedron in (lam, z)-space. The loop enumerates its vertices,
asks the fixed-parameter oracle at each one, and refines until no vertex is
more than a (1-eps) factor below what the oracle can still find.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from typing import Sequence

from .affine import AffineForm, Point, as_fraction
from .errors import InfeasibleRestrictionError, InputError, OracleContractError
from .geometry import Cell, Polytope
from .instance import Instance, Strategy, basis_value_form, min_weight_basis
from .oracles import OracleSpec, resolve_oracle


@dataclass(frozen=True)
class StrategyEntry:
    """A strategy with its basis-value form anchored at the cell's interior point."""

    strategy: Strategy
    value_form: AffineForm


@dataclass(frozen=True)
class CellSolution:
    """Strategies certified for one cell, plus loop counters."""

    cell: Cell
    anchor: Point
    strategies: tuple[StrategyEntry, ...]
    epsilon: Fraction
    beta: Fraction
    oracle_calls: int
    iterations: int

    def best_entry(self, lam: Sequence[Fraction]) -> tuple[StrategyEntry, Fraction]:
        """The stored entry with the maximal value form at ``lam`` (first wins ties)."""
        best = self.strategies[0]
        best_value = best.value_form(lam)
        for entry in self.strategies[1:]:
            value = entry.value_form(lam)
            if value > best_value:
                best, best_value = entry, value
        return best, best_value

    def gamma_points(self) -> tuple[tuple[Fraction, ...], ...]:
        """Coefficient projections (slopes..., constant) of the stored value forms."""
        return tuple(
            tuple(e.value_form.gradient) + (e.value_form.constant,) for e in self.strategies
        )


def lift_cell(cell: Cell) -> Polytope:
    """Embed the cell into (lam, z)-space; z is the designated unbounded-above axis."""
    p = cell.polytope.dim
    lifted = tuple(
        AffineForm(c.constant, tuple(c.gradient) + (Fraction(0),))
        for c in cell.polytope.constraints
    )
    return Polytope.from_constraints(p + 1, lifted, free_top=True, trusted_bounded=True)


def value_halfspace(form: AffineForm) -> AffineForm:
    """The half-space z >= form(lam), written as an affine constraint in (lam, z)."""
    return AffineForm(-form.constant, tuple(-g for g in form.gradient) + (Fraction(1),))


def anchored_entry(instance: Instance, anchor: Point, strategy: Strategy) -> StrategyEntry:
    """Value form of the minimum basis that survives ``strategy``, computed at the anchor."""
    try:
        basis, _ = min_weight_basis(instance, strategy, anchor)
    except InfeasibleRestrictionError as exc:
        raise OracleContractError(
            f"strategy {tuple(strategy)} leaves no full-rank basis: {exc}"
        ) from exc
    return StrategyEntry(strategy, basis_value_form(instance, basis))


def add_strategy(
    instance: Instance, anchor: Point, lifted: Polytope, strategy: Strategy
) -> tuple[StrategyEntry, Polytope]:
    """Record a strategy and intersect the lifted polyhedron with its value half-space."""
    entry = anchored_entry(instance, anchor, strategy)
    return entry, lifted.with_constraint(value_halfspace(entry.value_form))


def gamma(instance: Instance, strategy: Strategy, anchor: Point) -> tuple[Fraction, ...]:
    """Projection (summed slopes..., summed constant) of the anchored basis weight."""
    entry = anchored_entry(instance, anchor, strategy)
    return tuple(entry.value_form.gradient) + (entry.value_form.constant,)


def approximate_cell(
    instance: Instance, cell: Cell, epsilon, oracle: OracleSpec
) -> CellSolution:
    """Collect strategies until every vertex of the lifted polyhedron is covered.

    A vertex (lam_v, z_v) is covered when the oracle's strategy at lam_v does
    not beat z_v by more than the (1-eps) slack; covered vertices are cached by
    their exact coordinates, which stays sound because an intersection that
    keeps a vertex keeps its coordinates. Each refinement adds a strategy the
    current polyhedron strictly excludes, so the loop terminates.
    """
    eps = as_fraction(epsilon)
    if not 0 < eps < 1:
        raise InputError(f"epsilon must satisfy 0 < eps < 1, got {eps}")
    oracle_fn = resolve_oracle(oracle, instance)
    slack = Fraction(1) - eps
    p = instance.p

    anchor = cell.interior_point
    first = oracle_fn(instance, anchor)
    oracle_calls = 1
    _check_answer(instance, oracle, first)
    entries = [anchored_entry(instance, anchor, first.strategy)]
    base = lift_cell(cell)
    # first vertex access will verify that +z is the only recession direction
    lifted = Polytope.from_constraints(
        base.dim, base.constraints + (value_halfspace(entries[0].value_form),), free_top=True
    )

    cleared: set[Point] = set()
    known = {entries[0].strategy: entries[0]}
    iterations = 0
    while True:
        iterations += 1
        refined = False
        for vertex in lifted.vertices:
            if vertex in cleared:
                continue
            lam, z = vertex[:p], vertex[p]
            answer = oracle_fn(instance, lam)
            oracle_calls += 1
            _check_answer(instance, oracle, answer)
            entry = known.get(answer.strategy)
            if entry is None:
                entry = anchored_entry(instance, anchor, answer.strategy)
            if slack * entry.value_form(lam) > z:
                if answer.strategy in known:
                    raise OracleContractError(
                        "a strategy already in the collection re-triggered refinement"
                    )
                known[answer.strategy] = entry
                entries.append(entry)
                lifted = lifted.with_constraint(value_halfspace(entry.value_form))
                refined = True
                break
            cleared.add(vertex)
        if not refined:
            break

    return CellSolution(
        cell=cell,
        anchor=anchor,
        strategies=tuple(entries),
        epsilon=eps,
        beta=oracle.beta,
        oracle_calls=oracle_calls,
        iterations=iterations,
    )


def _check_answer(instance: Instance, oracle: OracleSpec, answer) -> None:
    if len(answer.strategy) != instance.ell:
        raise OracleContractError(
            f"oracle returned {len(answer.strategy)} removals, budget is {instance.ell}"
        )
    if answer.strategy.removed and answer.strategy.removed[-1] >= instance.m:
        raise OracleContractError("oracle returned an element outside the ground set")
    if answer.beta != oracle.beta:
        raise OracleContractError(
            f"oracle certified beta={answer.beta}, expected {oracle.beta}"
        )


def final_polyhedron(solution: CellSolution) -> Polytope:
    """Rebuild the lifted polyhedron at termination from a stored cell solution."""
    lifted = lift_cell(solution.cell)
    for entry in solution.strategies:
        lifted = lifted.with_constraint(value_halfspace(entry.value_form))
    return lifted


def pairwise_box_conflicts(solution: CellSolution) -> list[tuple[Strategy, Strategy]]:
    """Ordered strategy pairs whose coefficient projections share a (1-eps)-box.

    The refinement rule makes this impossible; a nonempty list flags a broken
    run. Pair (F, F2) conflicts when (1-eps)*gamma(F2) <= gamma(F) <= gamma(F2)
    componentwise.
    """
    slack = Fraction(1) - solution.epsilon
    conflicts = []
    points = solution.gamma_points()
    for a, b in permutations(range(len(points)), 2):
        ga, gb = points[a], points[b]
        if all(slack * y <= x <= y for x, y in zip(ga, gb)):
            conflicts.append(
                (solution.strategies[a].strategy, solution.strategies[b].strategy)
            )
    return conflicts
