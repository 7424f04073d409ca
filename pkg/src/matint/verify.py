"""Independent certification of solver output against exhaustive exact values.

This module is the oracle-of-oracles: it re-derives the optimal interdicted
value with its own greedy and its own independence tests (depth-first cycle
search instead of union-find, explicit per-part counting), so a defect in the
main pipeline cannot hide itself here.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .affine import AffineForm, Point, pairwise_crossing
from .errors import DomainError, FingerprintMismatchError, InputError, MatintError
from .geometry import Polytope
from .instance import Instance, Strategy
from .matroids import GraphicMatroid, PartitionMatroid, UniformMatroid, rank
from .oracles import OracleSpec, resolve_oracle
from .cellapprox import anchored_entry, final_polyhedron
from .serialization import instance_fingerprint

_SAMPLE_DENOMINATOR = 2**16


def _connected(adjacency: dict[int, list[int]], start: int, goal: int) -> bool:
    stack = [start]
    seen = {start}
    while stack:
        node = stack.pop()
        if node == goal:
            return True
        for nxt in adjacency.get(node, ()):
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    return False


def _greedy_value_independent(
    instance: Instance, removed: tuple[int, ...], weights: Sequence[Fraction]
) -> Fraction | None:
    """Second-opinion minimum basis weight; None when the removal kills the rank."""
    matroid = instance.matroid
    order = sorted(
        (e for e in range(instance.m) if e not in removed),
        key=lambda e: (weights[e], e),
    )
    target = rank(matroid)
    total = Fraction(0)
    if isinstance(matroid, UniformMatroid):
        chosen = order[: matroid.k]
        if len(chosen) < target:
            return None
        return sum((weights[e] for e in chosen), Fraction(0))
    if isinstance(matroid, PartitionMatroid):
        owner = matroid.part_index()
        taken = [0] * len(matroid.parts)
        count = 0
        for e in order:
            part = owner[e]
            if taken[part] < matroid.capacities[part]:
                taken[part] += 1
                total += weights[e]
                count += 1
        return total if count == target else None
    adjacency: dict[int, list[int]] = {}
    count = 0
    for e in order:
        u, v = matroid.edges[e]
        if u != v and not _connected(adjacency, u, v):
            adjacency.setdefault(u, []).append(v)
            adjacency.setdefault(v, []).append(u)
            total += weights[e]
            count += 1
    return total if count == target else None


def exact_value(instance: Instance, lam: Sequence[Fraction]) -> tuple[Fraction, Strategy]:
    """Exhaustive optimal interdicted value at ``lam`` (ties to the smallest strategy)."""
    weights = instance.weights_at(lam)
    best: Fraction | None = None
    best_removed: tuple[int, ...] | None = None
    for removed in combinations(range(instance.m), instance.ell):
        value = _greedy_value_independent(instance, removed, weights)
        if value is None:
            raise MatintError(
                f"removal {list(removed)} destroys the rank; the instance violates its assumptions"
            )
        if best is None or value > best:
            best, best_removed = value, removed
    assert best is not None and best_removed is not None
    return best, Strategy(best_removed)


@dataclass(frozen=True)
class VerificationReport:
    """Pure data: sampling results plus structural invariant outcomes."""

    samples: int
    seed: int
    threshold: Fraction
    min_ratio: Fraction | None
    violations: tuple[tuple[Point, Fraction, Fraction], ...]
    coverage_failures: tuple[Point, ...]
    invariants: tuple[tuple[str, bool], ...]

    @property
    def passed(self) -> bool:
        if self.violations or self.coverage_failures:
            return False
        return self.min_ratio is None or self.min_ratio >= self.threshold

    def lines(self) -> list[str]:
        out = [
            f"checked points: {self.samples} sampled (seed {self.seed}) plus worst-case candidates",
            f"threshold (1-eps)*beta: {self.threshold}",
            f"min ratio certified/exact: {self.min_ratio if self.min_ratio is not None else 'n/a'}",
            f"violations: {len(self.violations)}",
            f"coverage failures: {len(self.coverage_failures)}",
        ]
        for lam, certified, exact in self.violations[:10]:
            out.append(
                f"  violated at {tuple(map(str, lam))}: certified {certified} < required of exact {exact}"
            )
        for name, ok in self.invariants:
            out.append(f"invariant {name}: {'pass' if ok else 'FAIL'}")
        return out


def _sample_points(region: Polytope, count: int, seed: int) -> list[Point]:
    if count <= 0:
        return []
    vertices = region.vertices
    lows = [min(v[i] for v in vertices) for i in range(region.dim)]
    highs = [max(v[i] for v in vertices) for i in range(region.dim)]
    rng = random.Random(seed)
    points: list[Point] = []
    attempts = 0
    limit = 1000 + 500 * count
    while len(points) < count:
        attempts += 1
        if attempts > limit:
            raise MatintError("rejection sampling failed; polytope volume too small")
        candidate = tuple(
            low + (high - low) * Fraction(rng.randint(0, _SAMPLE_DENOMINATOR), _SAMPLE_DENOMINATOR)
            for low, high in zip(lows, highs)
        )
        if region.contains(candidate):
            points.append(candidate)
    return points


def _cell_edges(poly: Polytope) -> list[tuple[Point, Point]]:
    """Vertex pairs spanning the one-dimensional faces (exact, small polytopes)."""
    edges = []
    vertices = poly.vertices
    for a, b in combinations(vertices, 2):
        shared = sum(1 for c in poly.constraints if c(a) == 0 and c(b) == 0)
        if shared >= poly.dim - 1:
            edges.append((a, b))
    return edges


def _crossings_on_segment(
    forms: Sequence[AffineForm], a: Point, b: Point
) -> list[Point]:
    points = []
    for f, g in combinations(forms, 2):
        diff = f - g
        va, vb = diff(a), diff(b)
        if va == vb:
            continue
        t = va / (va - vb)
        if 0 <= t <= 1:
            points.append(tuple(x + t * (y - x) for x, y in zip(a, b)))
    return points


def _candidate_points(result, instance: Instance, exhaustive: bool) -> list[Point]:
    candidates: list[Point] = []
    for solution in result.cells:
        poly = solution.cell.polytope
        candidates.extend(poly.vertices)
        forms = [entry.value_form for entry in solution.strategies]
        if exhaustive:
            forms = [
                anchored_entry(instance, solution.anchor, strategy).value_form
                for strategy in instance.strategies()
            ]
        if instance.p == 1:
            coords = [v[0] for v in poly.vertices]
            low, high = min(coords), max(coords)
            for f, g in combinations(forms, 2):
                cross = pairwise_crossing(f, g)
                if cross is not None and low <= cross <= high:
                    candidates.append((cross,))
        else:
            for a, b in _cell_edges(poly):
                candidates.extend(_crossings_on_segment(forms, a, b))
    return candidates


def check_vertex_dominance(result) -> bool:
    """Every final-polyhedron vertex height equals the max stored value form there."""
    for solution in result.cells:
        lifted = final_polyhedron(solution)
        p = solution.cell.polytope.dim
        for vertex in lifted.vertices:
            lam, z = vertex[:p], vertex[p]
            top = max(entry.value_form(lam) for entry in solution.strategies)
            if top != z:
                return False
    return True


def check_gamma_boxes(result) -> bool:
    """No two stored strategies of a cell share a (1-eps) coefficient box."""
    from .cellapprox import pairwise_box_conflicts

    return all(not pairwise_box_conflicts(solution) for solution in result.cells)


def check_refinement_closed(result, instance: Instance) -> bool:
    """Re-run the oracle at every final vertex: the refinement test must stay quiet."""
    spec = OracleSpec.parse(result.oracle)
    oracle_fn = resolve_oracle(spec, instance)
    slack = Fraction(1) - result.epsilon
    for solution in result.cells:
        lifted = final_polyhedron(solution)
        p = instance.p
        for vertex in lifted.vertices:
            lam, z = vertex[:p], vertex[p]
            answer = oracle_fn(instance, lam)
            entry = anchored_entry(instance, solution.anchor, answer.strategy)
            if slack * entry.value_form(lam) > z:
                return False
    return True


def certify(
    result,
    instance: Instance,
    samples: int = 200,
    seed: int = 0,
    exhaustive: bool = False,
) -> VerificationReport:
    """Compare certified query values against exhaustive exact values.

    Checks every cell vertex and every value-form crossing (on cells for one
    parameter, on cell edges otherwise) plus ``samples`` seeded random points.
    ``exhaustive`` widens the crossing set to all strategies' forms, which for
    one parameter makes the check complete.
    """
    if result.fingerprint != instance_fingerprint(instance):
        raise FingerprintMismatchError("result file does not match this instance")
    if exhaustive and instance.p != 1:
        raise InputError("exhaustive certification is available for one parameter only")
    from .solver import query

    threshold = (Fraction(1) - result.epsilon) * result.beta
    region = Polytope.from_constraints(instance.p, instance.polytope)
    sampled = _sample_points(region, samples, seed)
    candidates = _candidate_points(result, instance, exhaustive)

    min_ratio: Fraction | None = None
    violations: list[tuple[Point, Fraction, Fraction]] = []
    coverage_failures: list[Point] = []
    for point in candidates + sampled:
        try:
            certified = query(result, instance, point).value
        except DomainError:
            coverage_failures.append(point)
            continue
        exact, _ = exact_value(instance, point)
        if exact == 0:
            continue  # positive weights make this unreachable; guard division anyway
        ratio = certified / exact
        if min_ratio is None or ratio < min_ratio:
            min_ratio = ratio
        if certified < threshold * exact:
            violations.append((point, certified, exact))

    invariants = (
        ("vertex_dominance", check_vertex_dominance(result)),
        ("gamma_box_uniqueness", check_gamma_boxes(result)),
    )
    return VerificationReport(
        samples=len(sampled),
        seed=seed,
        threshold=threshold,
        min_ratio=min_ratio,
        violations=tuple(violations),
        coverage_failures=tuple(coverage_failures),
        invariants=invariants,
    )
