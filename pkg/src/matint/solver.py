"""Whole-polytope solving: cell decomposition, per-cell approximation, querying, export.

Also provides the scikit-learn style estimator facade so the solver drops into
pipelines that expect fit/predict objects with get_params.
"""
from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from .affine import AffineForm, Point, as_fraction, as_point, upper_envelope_breakpoints
from .cellapprox import CellSolution, StrategyEntry, approximate_cell
from .errors import DomainError, InputError, ValidationError
from .geometry import Cell, build_cells, separating_hyperplanes
from .instance import Instance, Strategy, min_weight_basis, validate_instance
from .oracles import OracleSpec
from . import serialization


@dataclass(frozen=True)
class ApproximationResult:
    """Per-cell strategy sets covering the whole parameter polytope."""

    fingerprint: str
    epsilon: Fraction
    beta: Fraction
    oracle: str
    cells: tuple[CellSolution, ...]
    hyperplane_count: int
    oracle_calls: int
    wall_time: float = field(default=0.0, compare=False)

    @property
    def cell_count(self) -> int:
        return len(self.cells)

    @property
    def distinct_strategies(self) -> tuple[Strategy, ...]:
        seen: dict[Strategy, None] = {}
        for cell in self.cells:
            for entry in cell.strategies:
                seen.setdefault(entry.strategy)
        return tuple(seen)


@dataclass(frozen=True)
class QueryAnswer:
    lam: Point
    strategy: Strategy
    value: Fraction
    cell_index: int


def _cell_task(args) -> CellSolution:
    instance, cell, epsilon, oracle = args
    return approximate_cell(instance, cell, epsilon, oracle)


def solve(
    instance: Instance,
    epsilon,
    oracle: OracleSpec | str = "brute",
    n_jobs: int = 1,
    validate: bool = True,
) -> ApproximationResult:
    """Decompose the parameter polytope into cells and certify strategies on each.

    Deterministic for a given instance, epsilon, and oracle; the optional
    process fan-out merges per-cell results back in construction order.
    """
    eps = as_fraction(epsilon)
    if not 0 < eps < 1:
        raise InputError(f"epsilon must satisfy 0 < eps < 1, got {eps}")
    spec = oracle if isinstance(oracle, OracleSpec) else OracleSpec.parse(oracle)
    if validate:
        report = validate_instance(instance)
        if not report.passed:
            raise ValidationError(report)

    started = time.perf_counter()
    planes = separating_hyperplanes(instance)
    cells = build_cells(instance)
    tasks = [(instance, cell, eps, spec) for cell in cells]
    if n_jobs > 1:
        with ProcessPoolExecutor(max_workers=n_jobs) as pool:
            solutions = tuple(pool.map(_cell_task, tasks))
    else:
        solutions = tuple(_cell_task(task) for task in tasks)
    elapsed = time.perf_counter() - started

    return ApproximationResult(
        fingerprint=serialization.instance_fingerprint(instance),
        epsilon=eps,
        beta=spec.beta,
        oracle=str(spec),
        cells=solutions,
        hyperplane_count=len(planes),
        oracle_calls=sum(s.oracle_calls for s in solutions),
        wall_time=elapsed,
    )


def query(
    result: ApproximationResult,
    instance: Instance,
    lam: Sequence,
    exact_requery: bool = False,
) -> QueryAnswer:
    """Answer one parameter vector from the stored decomposition.

    The first stored cell containing the point answers; on shared boundaries
    any covering cell is valid because the value forms are continuous. The
    returned value is the certified lower bound, or the exact value of the
    chosen strategy when ``exact_requery`` is set.
    """
    point = as_point(lam, instance.p)
    for index, solution in enumerate(result.cells):
        if solution.cell.polytope.contains(point):
            entry, value = solution.best_entry(point)
            if exact_requery:
                _, value = min_weight_basis(instance, entry.strategy, point)
            return QueryAnswer(point, entry.strategy, value, index)
    raise DomainError(f"{tuple(map(str, point))} lies outside the parameter polytope")


@dataclass(frozen=True)
class CellEnvelope:
    """Exported description of one cell: geometry, forms, and 1-parameter breakpoints."""

    index: int
    constraints: tuple[AffineForm, ...]
    vertices: tuple[Point, ...]
    interior: Point
    strategies: tuple[StrategyEntry, ...]
    breakpoints: tuple[Fraction, ...]


def envelope_export(result: ApproximationResult) -> tuple[CellEnvelope, ...]:
    """Materialize the per-cell geometry and value forms for plotting or inspection."""
    records = []
    for index, solution in enumerate(result.cells):
        poly = solution.cell.polytope
        breakpoints: tuple[Fraction, ...] = ()
        if poly.dim == 1:
            coords = [v[0] for v in poly.vertices]
            low, high = min(coords), max(coords)
            forms = [entry.value_form for entry in solution.strategies]
            breakpoints = tuple(upper_envelope_breakpoints(forms, low, high))
        records.append(
            CellEnvelope(
                index=index,
                constraints=poly.constraints,
                vertices=poly.vertices,
                interior=solution.anchor,
                strategies=solution.strategies,
                breakpoints=breakpoints,
            )
        )
    return tuple(records)


class InterdictionApproximator(BaseEstimator):
    """Estimator facade over :func:`solve` and :func:`query`.

    Parameters are stored verbatim (scikit-learn convention); ``fit`` takes an
    :class:`Instance` and precomputes the certified decomposition, after which
    ``predict`` evaluates parameter vectors to certified values.

    >>> approx = InterdictionApproximator(epsilon="1/10").fit(instance)
    >>> approx.predict([(Fraction(1, 4),)])
    [Fraction(13, 4)]
    """

    def __init__(self, epsilon="1/10", oracle="brute", exact_requery=False, n_jobs=1):
        self.epsilon = epsilon
        self.oracle = oracle
        self.exact_requery = exact_requery
        self.n_jobs = n_jobs

    def fit(self, instance: Instance, y=None) -> "InterdictionApproximator":
        if not isinstance(instance, Instance):
            raise InputError("fit expects an Instance")
        self.instance_ = instance
        self.result_ = solve(
            instance, self.epsilon, self.oracle, n_jobs=self.n_jobs
        )
        return self

    def _fitted_result(self) -> ApproximationResult:
        result = getattr(self, "result_", None)
        if result is None:
            raise NotFittedError("call fit before querying")
        return result

    def query(self, lam: Sequence) -> QueryAnswer:
        return query(
            self._fitted_result(), self.instance_, lam, exact_requery=self.exact_requery
        )

    def predict(self, lams: Iterable[Sequence]) -> list[Fraction]:
        """Certified objective values, one per parameter vector."""
        return [self.query(lam).value for lam in lams]

    def predict_strategy(self, lams: Iterable[Sequence]) -> list[Strategy]:
        return [self.query(lam).strategy for lam in lams]
