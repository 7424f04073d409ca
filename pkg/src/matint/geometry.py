"""Exact rational polyhedra: vertex enumeration, splitting, and arrangement cells.

Everything is carried in H-representation with Fraction coefficients. Vertex
enumeration solves every d-subset of constraints exactly, which is deliberate:
at the ground-set sizes this package targets, correctness and degeneracy
handling beat asymptotics.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Iterable, Sequence

from .affine import (
    AffineForm,
    Point,
    affine_rank,
    as_point,
    canonical_form,
    primitive_coefficients,
    solve_linear,
)
from .errors import DegeneratePolytopeError, InputError, UnboundedPolytopeError
from .instance import Instance


@dataclass(frozen=True)
class Hyperplane:
    """The zero set of an affine form, stored with canonical primitive coefficients."""

    form: AffineForm

    @classmethod
    def from_form(cls, form: AffineForm) -> "Hyperplane":
        if form.is_constant():
            raise InputError("a hyperplane needs a nonzero gradient")
        coeffs = primitive_coefficients(tuple(form.gradient) + (form.constant,), orient=True)
        canonical = AffineForm(Fraction(coeffs[-1]), tuple(Fraction(c) for c in coeffs[:-1]))
        return cls(canonical)

    def key(self) -> tuple[int, ...]:
        return tuple(int(g) for g in self.form.gradient) + (int(self.form.constant),)


def separating_hyperplanes(instance: Instance) -> tuple[Hyperplane, ...]:
    """Deduplicated hyperplanes where two element weights coincide, in canonical order.

    Pairs whose weight forms differ by a constant never swap order and
    contribute nothing.
    """
    seen: dict[tuple[int, ...], Hyperplane] = {}
    for e in range(instance.m):
        for f in range(e + 1, instance.m):
            diff = instance.weights[e] - instance.weights[f]
            if diff.is_constant():
                continue
            plane = Hyperplane.from_form(diff)
            seen.setdefault(plane.key(), plane)
    return tuple(seen[key] for key in sorted(seen))


def _dedupe_constraints(forms: Iterable[AffineForm]) -> tuple[AffineForm, ...]:
    out: list[AffineForm] = []
    seen: set[tuple[Fraction, ...]] = set()
    for form in forms:
        canon = canonical_form(form)
        if canon.is_constant():
            if canon.constant >= 0:
                continue  # trivially true
            return (canon,)  # trivially false: the polytope is empty
        key = tuple(canon.gradient) + (canon.constant,)
        if key not in seen:
            seen.add(key)
            out.append(canon)
    return tuple(out)


@dataclass(frozen=True)
class Polytope:
    """An H-representation polytope with cached exact vertices.

    ``free_top`` designates the last coordinate as allowed to be unbounded
    above (the value axis of the lifted polyhedron); any other recession
    direction is an error. ``trusted_bounded`` skips that check when the
    caller constructed the polytope from a region already known to be bounded.
    """

    dim: int
    constraints: tuple[AffineForm, ...]
    free_top: bool = False
    trusted_bounded: bool = field(default=False, compare=False, repr=False)

    @classmethod
    def from_constraints(
        cls,
        dim: int,
        forms: Iterable[AffineForm],
        free_top: bool = False,
        trusted_bounded: bool = False,
    ) -> "Polytope":
        forms = tuple(forms)
        for form in forms:
            if form.dim != dim:
                raise InputError(f"constraint dimension {form.dim} != polytope dimension {dim}")
        return cls(dim, _dedupe_constraints(forms), free_top, trusted_bounded)

    def with_constraint(self, form: AffineForm) -> "Polytope":
        return Polytope.from_constraints(
            self.dim, self.constraints + (form,), self.free_top, trusted_bounded=True
        )

    def is_empty(self) -> bool:
        return not self.vertices

    def contains(self, point: Sequence[Fraction]) -> bool:
        pt = as_point(point, self.dim)
        return all(c(pt) >= 0 for c in self.constraints)

    def _check_recession(self) -> None:
        cone: list[AffineForm] = [
            AffineForm(Fraction(0), c.gradient) for c in self.constraints
        ]
        box: list[AffineForm] = []
        for i in range(self.dim):
            unit = tuple(Fraction(1 if j == i else 0) for j in range(self.dim))
            neg_unit = tuple(-u for u in unit)
            box.append(AffineForm(Fraction(1), unit))
            box.append(AffineForm(Fraction(1), neg_unit))
        probe = Polytope(self.dim, _dedupe_constraints(cone + box), trusted_bounded=True)
        zero = (Fraction(0),) * self.dim
        for direction in probe.vertices:
            if direction == zero:
                continue
            if self.free_top and direction[-1] > 0 and all(
                x == 0 for x in direction[:-1]
            ):
                continue
            raise UnboundedPolytopeError(
                f"recession direction {tuple(map(str, direction))} is not the designated one"
            )

    @cached_property
    def vertices(self) -> tuple[Point, ...]:
        """All vertices, sorted lexicographically; exact and deduplicated."""
        if any(c.is_constant() and c.constant < 0 for c in self.constraints):
            return ()
        if not self.trusted_bounded:
            self._check_recession()
        found: set[Point] = set()
        for subset in combinations(self.constraints, self.dim):
            rows = [c.gradient for c in subset]
            rhs = [-c.constant for c in subset]
            candidate = solve_linear(rows, rhs)
            if candidate is None:
                continue
            if all(c(candidate) >= 0 for c in self.constraints):
                found.add(candidate)
        return tuple(sorted(found))

    @cached_property
    def interior(self) -> Point:
        """Vertex centroid; strictly feasible exactly when the polytope is full-dimensional."""
        verts = self.vertices
        if not verts:
            raise DegeneratePolytopeError("empty polytope has no interior point")
        n = Fraction(len(verts))
        centroid = tuple(sum(v[i] for v in verts) / n for i in range(self.dim))
        for c in self.constraints:
            if c(centroid) <= 0:
                raise DegeneratePolytopeError(
                    "polytope is not full-dimensional: centroid touches a constraint"
                )
        return centroid

    def reduced(self) -> "Polytope":
        """Drop constraints that do not support a facet; vertices are preserved.

        Valid for bounded polytopes of full dimension, where a constraint is
        irredundant exactly when its active vertex set spans dimension dim-1.
        """
        verts = self.vertices
        keep = []
        for c in self.constraints:
            active = [v for v in verts if c(v) == 0]
            if affine_rank(active) == self.dim - 1:
                keep.append(c)
        pruned = Polytope(self.dim, tuple(keep), self.free_top, trusted_bounded=True)
        pruned.__dict__["vertices"] = verts
        return pruned


def enumerate_vertices(poly: Polytope) -> tuple[Point, ...]:
    return poly.vertices


def interior_point(poly: Polytope) -> Point:
    return poly.interior


def contains(poly: Polytope, point: Sequence[Fraction]) -> bool:
    return poly.contains(point)


def split(poly: Polytope, plane: Hyperplane) -> tuple[Polytope | None, Polytope | None]:
    """Cut a full-dimensional polytope along a hyperplane.

    Returns the closed below/above sides; a side that is empty or not
    full-dimensional is None. When the hyperplane misses the interior, the
    surviving side is the input polytope itself.
    """
    values = [plane.form(v) for v in poly.vertices]
    has_below = any(v < 0 for v in values)
    has_above = any(v > 0 for v in values)
    if not has_below and not has_above:
        raise DegeneratePolytopeError("polytope lies inside the splitting hyperplane")
    if not has_above:
        return poly, None
    if not has_below:
        return None, poly
    negated = AffineForm(-plane.form.constant, tuple(-g for g in plane.form.gradient))
    below = poly.with_constraint(negated).reduced()
    above = poly.with_constraint(plane.form).reduced()
    return below, above


@dataclass(frozen=True)
class Cell:
    """A full-dimensional arrangement cell restricted to the parameter polytope."""

    polytope: Polytope
    interior_point: Point
    sign_vector: tuple[int, ...] | None = field(default=None, compare=False)


def build_cells(instance: Instance) -> tuple[Cell, ...]:
    """Decompose the parameter polytope along all separating hyperplanes.

    Recursive splitting keeps only full-dimensional pieces, so the result is
    the set of closed cells whose interiors partition the polytope interior.
    """
    region = Polytope.from_constraints(instance.p, instance.polytope)
    if region.is_empty():
        raise DegeneratePolytopeError("the parameter polytope is empty")
    region.interior  # force the full-dimensionality check up front
    region = region.reduced()
    planes = separating_hyperplanes(instance)
    pieces = [region]
    for plane in planes:
        next_pieces: list[Polytope] = []
        for piece in pieces:
            below, above = split(piece, plane)
            next_pieces.extend(side for side in (below, above) if side is not None)
        pieces = next_pieces
    cells = []
    for piece in pieces:
        anchor = piece.interior
        signs = tuple(1 if plane.form(anchor) > 0 else -1 for plane in planes)
        cells.append(Cell(piece, anchor, signs))
    return tuple(cells)
