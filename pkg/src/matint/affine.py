"""Exact affine forms over the parameter vector, plus small rational linear algebra.

Every scalar in the pipeline is a ``fractions.Fraction``; floats are rejected at
the boundary so that cell membership and certificates stay exact.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from .errors import InputError

Point = tuple[Fraction, ...]


def as_fraction(value) -> Fraction:
    """Coerce an int, Fraction, or rational string to an exact Fraction.

    Floats are rejected: they would silently poison the exact pipeline.
    """
    if isinstance(value, bool):
        raise InputError(f"not a rational scalar: {value!r}")
    if isinstance(value, (Fraction, int)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"malformed rational {value!r}: {exc}") from exc
    raise InputError(f"not a rational scalar: {value!r} (floats are not accepted)")


def as_point(values: Iterable, dim: int | None = None) -> Point:
    """Coerce an iterable of scalars to an exact point, optionally checking its dimension."""
    point = tuple(as_fraction(v) for v in values)
    if dim is not None and len(point) != dim:
        raise InputError(f"expected a point of dimension {dim}, got {len(point)}")
    return point


@dataclass(frozen=True)
class AffineForm:
    """An affine function ``constant + gradient . lam`` of the parameter vector."""

    constant: Fraction
    gradient: Point

    @classmethod
    def build(cls, constant, gradient: Iterable) -> "AffineForm":
        return cls(as_fraction(constant), as_point(gradient))

    @classmethod
    def zero(cls, dim: int) -> "AffineForm":
        return cls(Fraction(0), (Fraction(0),) * dim)

    @property
    def dim(self) -> int:
        return len(self.gradient)

    def __call__(self, point: Sequence[Fraction]) -> Fraction:
        if len(point) != len(self.gradient):
            raise InputError(
                f"point dimension {len(point)} does not match form dimension {len(self.gradient)}"
            )
        return self.constant + sum(g * x for g, x in zip(self.gradient, point))

    def __add__(self, other: "AffineForm") -> "AffineForm":
        return AffineForm(
            self.constant + other.constant,
            tuple(a + b for a, b in zip(self.gradient, other.gradient)),
        )

    def __sub__(self, other: "AffineForm") -> "AffineForm":
        return AffineForm(
            self.constant - other.constant,
            tuple(a - b for a, b in zip(self.gradient, other.gradient)),
        )

    def scaled(self, factor: Fraction) -> "AffineForm":
        return AffineForm(self.constant * factor, tuple(g * factor for g in self.gradient))

    def is_constant(self) -> bool:
        return all(g == 0 for g in self.gradient)


def sum_forms(forms: Iterable[AffineForm], dim: int) -> AffineForm:
    total = AffineForm.zero(dim)
    for form in forms:
        total = total + form
    return total


def primitive_coefficients(values: Sequence[Fraction], orient: bool = False) -> tuple[int, ...]:
    """Scale a rational vector to coprime integers.

    Scaling is positive so half-space senses are preserved; with ``orient=True``
    the sign is additionally flipped so the first nonzero entry is positive
    (canonical form for hyperplanes, whose zero set is sign-invariant).
    """
    denom_lcm = math.lcm(*(v.denominator for v in values)) if values else 1
    ints = [int(v * denom_lcm) for v in values]
    g = math.gcd(*ints) if any(ints) else 1
    if g:
        ints = [v // g for v in ints]
    if orient:
        lead = next((v for v in ints if v != 0), 0)
        if lead < 0:
            ints = [-v for v in ints]
    return tuple(ints)


def canonical_form(form: AffineForm) -> AffineForm:
    """Positive-primitive rescaling of a form; same half-space, canonical coefficients."""
    coeffs = primitive_coefficients(tuple(form.gradient) + (form.constant,))
    return AffineForm(Fraction(coeffs[-1]), tuple(Fraction(c) for c in coeffs[:-1]))


def solve_linear(rows: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]) -> Point | None:
    """Solve a square exact linear system; None when singular."""
    n = len(rhs)
    aug = [list(row) + [b] for row, b in zip(rows, rhs)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if pivot is None:
            return None
        aug[col], aug[pivot] = aug[pivot], aug[col]
        pivot_row = aug[col]
        inv = Fraction(1) / pivot_row[col]
        aug[col] = [v * inv for v in pivot_row]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                factor = aug[r][col]
                aug[r] = [v - factor * p for v, p in zip(aug[r], aug[col])]
    return tuple(aug[r][n] for r in range(n))


def matrix_rank(rows: Sequence[Sequence[Fraction]]) -> int:
    work = [list(row) for row in rows]
    rank = 0
    cols = len(work[0]) if work else 0
    for col in range(cols):
        pivot = next((r for r in range(rank, len(work)) if work[r][col] != 0), None)
        if pivot is None:
            continue
        work[rank], work[pivot] = work[pivot], work[rank]
        lead = work[rank][col]
        work[rank] = [v / lead for v in work[rank]]
        for r in range(len(work)):
            if r != rank and work[r][col] != 0:
                factor = work[r][col]
                work[r] = [v - factor * p for v, p in zip(work[r], work[rank])]
        rank += 1
        if rank == len(work):
            break
    return rank


def affine_rank(points: Sequence[Point]) -> int:
    """Dimension of the affine hull of the given points (-1 for the empty set)."""
    if not points:
        return -1
    base = points[0]
    diffs = [[x - b for x, b in zip(pt, base)] for pt in points[1:]]
    if not diffs:
        return 0
    return matrix_rank(diffs)


def pairwise_crossing(f: AffineForm, g: AffineForm) -> Fraction | None:
    """For one-parameter forms, the point where f and g agree; None if parallel."""
    if f.dim != 1 or g.dim != 1:
        raise InputError("pairwise_crossing is only defined for one-parameter forms")
    slope = f.gradient[0] - g.gradient[0]
    if slope == 0:
        return None
    return (g.constant - f.constant) / slope


def upper_envelope_breakpoints(
    forms: Sequence[AffineForm], low: Fraction, high: Fraction
) -> list[Fraction]:
    """Breakpoints of max(forms) on [low, high] for one-parameter forms."""
    if low >= high or len(forms) < 2:
        return []
    candidates = set()
    for f, g in combinations(forms, 2):
        cross = pairwise_crossing(f, g)
        if cross is not None and low < cross < high:
            candidates.add(cross)
    if not candidates:
        return []

    def argmax_at(x: Fraction) -> int:
        values = [form((x,)) for form in forms]
        best = max(values)
        return values.index(best)

    grid = [low] + sorted(candidates) + [high]
    breaks = []
    for i in range(1, len(grid) - 1):
        left_mid = (grid[i - 1] + grid[i]) / 2
        right_mid = (grid[i] + grid[i + 1]) / 2
        if argmax_at(left_mid) != argmax_at(right_mid):
            breaks.append(grid[i])
    return breaks
