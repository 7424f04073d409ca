"""Problem instances: a matroid, affine parametric weights, a budget, and the parameter polytope."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from .affine import AffineForm, Point, as_point, sum_forms
from .errors import InputError
from .matroids import Matroid, greedy_basis, rank, restricted_rank


@dataclass(frozen=True)
class Strategy:
    """An interdiction strategy: the removed element indexes, sorted."""

    removed: tuple[int, ...]

    def __post_init__(self):
        ordered = tuple(sorted(self.removed))
        if len(set(ordered)) != len(ordered):
            raise InputError(f"strategy has repeated elements: {self.removed}")
        object.__setattr__(self, "removed", ordered)

    def __iter__(self):
        return iter(self.removed)

    def __len__(self):
        return len(self.removed)


@dataclass(frozen=True)
class Instance:
    """One interdiction problem over a parameter polytope.

    ``polytope`` is the H-representation of the parameter region: each form g
    constrains g(lam) >= 0. Structural problems raise InputError immediately;
    the model assumptions are checked separately by :func:`validate_instance`.
    """

    matroid: Matroid
    weights: tuple[AffineForm, ...]
    ell: int
    p: int
    polytope: tuple[AffineForm, ...]

    def __post_init__(self):
        m = self.matroid.m
        if len(self.weights) != m:
            raise InputError(f"expected {m} weight forms, got {len(self.weights)}")
        for form in self.weights:
            if form.dim != self.p:
                raise InputError(f"weight gradient length {form.dim} != p={self.p}")
        if not 1 <= self.ell < m:
            raise InputError(f"budget must satisfy 1 <= ell < m, got ell={self.ell}, m={m}")
        if self.p < 1:
            raise InputError("at least one parameter is required")
        if not self.polytope:
            raise InputError("the parameter polytope needs at least one constraint")
        for form in self.polytope:
            if form.dim != self.p:
                raise InputError(f"polytope constraint dimension {form.dim} != p={self.p}")

    @property
    def m(self) -> int:
        return self.matroid.m

    @property
    def k(self) -> int:
        return rank(self.matroid)

    def weights_at(self, lam: Sequence[Fraction]) -> list[Fraction]:
        point = as_point(lam, self.p)
        return [form(point) for form in self.weights]

    def strategies(self) -> Iterable[Strategy]:
        """All interdiction strategies in lexicographic order."""
        for removed in combinations(range(self.m), self.ell):
            yield Strategy(removed)


def min_weight_basis(
    instance: Instance, removed: Iterable[int], lam: Sequence[Fraction]
) -> tuple[tuple[int, ...], Fraction]:
    """Greedy minimum-weight basis of the restricted matroid at a fixed parameter vector."""
    return greedy_basis(instance.matroid, instance.weights_at(lam), removed)


def basis_value_form(instance: Instance, basis: Iterable[int]) -> AffineForm:
    """Sum of the weight forms over a basis; evaluates to the basis weight at every lam."""
    elements = list(basis)
    m = instance.m
    for e in elements:
        if not 0 <= e < m:
            raise InputError(f"element index {e} outside 0..{m - 1}")
    return sum_forms((instance.weights[e] for e in elements), instance.p)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str
    informational: bool = False


@dataclass(frozen=True)
class ValidationReport:
    checks: tuple[CheckResult, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks if not c.informational)

    def lines(self) -> list[str]:
        out = []
        for c in self.checks:
            status = "info" if c.informational else ("pass" if c.passed else "FAIL")
            out.append(f"{c.name}: {status} ({c.detail})")
        return out


def _check_full_rank_after_removal(instance: Instance) -> CheckResult:
    k = instance.k
    for removed in combinations(range(instance.m), instance.ell):
        if restricted_rank(instance.matroid, removed) != k:
            return CheckResult(
                "assumption 1 (rank survives every removal)",
                False,
                f"removing {list(removed)} drops the rank below {k}",
            )
    return CheckResult(
        "assumption 1 (rank survives every removal)",
        True,
        f"all {instance.m} choose {instance.ell} removals keep rank {k}",
    )


def _check_coefficient_signs(instance: Instance) -> CheckResult:
    name = "assumption 3 (nonnegative coefficients, limited zeros)"
    k = instance.k
    for e, form in enumerate(instance.weights):
        if form.constant < 0 or any(g < 0 for g in form.gradient):
            return CheckResult(name, False, f"weight {e} has a negative coefficient")
    zero_a = sum(1 for form in instance.weights if form.constant == 0)
    if zero_a > k - 1:
        return CheckResult(name, False, f"{zero_a} constant coefficients are zero, allowed {k - 1}")
    for i in range(instance.p):
        zero_b = sum(1 for form in instance.weights if form.gradient[i] == 0)
        if zero_b > k - 1:
            return CheckResult(
                name, False, f"{zero_b} slope coefficients are zero for parameter {i}, allowed {k - 1}"
            )
    return CheckResult(name, True, f"zero counts within {k - 1}")


def _check_parameter_polytope(instance: Instance) -> CheckResult:
    from .geometry import Polytope  # deferred: geometry builds on this module

    name = "assumption 4 (polytope nonempty, bounded, nonnegative, full-dimensional)"
    try:
        region = Polytope.from_constraints(instance.p, instance.polytope)
        vertices = region.vertices
    except Exception as exc:  # unbounded or otherwise defective
        return CheckResult(name, False, f"vertex enumeration failed: {exc}")
    if not vertices:
        return CheckResult(name, False, "the parameter polytope is empty")
    for v in vertices:
        if any(x < 0 for x in v):
            return CheckResult(name, False, f"vertex {tuple(map(str, v))} leaves the nonnegative orthant")
    try:
        region.interior
    except Exception as exc:
        return CheckResult(name, False, f"no interior point: {exc}")
    return CheckResult(name, True, f"{len(vertices)} vertices, interior point found")


def validate_instance(instance: Instance) -> ValidationReport:
    """Check the model assumptions; structural problems already failed at construction."""
    checks = (
        _check_full_rank_after_removal(instance),
        CheckResult(
            "assumption 2 (non-vertical separating hyperplanes)",
            True,
            "not required: cells are built by exact recursive splitting",
            informational=True,
        ),
        _check_coefficient_signs(instance),
        _check_parameter_polytope(instance),
    )
    return ValidationReport(checks)
