"""Uniform, partition, and graphic matroids with an exact greedy minimum-weight basis."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .errors import InfeasibleRestrictionError, InputError


@dataclass(frozen=True)
class UniformMatroid:
    """Independent sets are all subsets of at most k elements."""

    m: int
    k: int

    def __post_init__(self):
        if self.m < 1 or not 0 <= self.k <= self.m:
            raise InputError(f"uniform matroid needs 0 <= k <= m, got k={self.k}, m={self.m}")


@dataclass(frozen=True)
class PartitionMatroid:
    """Independent sets take at most ``capacities[i]`` elements from part i."""

    parts: tuple[tuple[int, ...], ...]
    capacities: tuple[int, ...]

    def __post_init__(self):
        if len(self.parts) != len(self.capacities):
            raise InputError("one capacity per part is required")
        seen: set[int] = set()
        for part, cap in zip(self.parts, self.capacities):
            if not part:
                raise InputError("empty part in partition matroid")
            if seen.intersection(part):
                raise InputError("partition parts must be disjoint")
            seen.update(part)
            if not 1 <= cap <= len(part):
                raise InputError(f"capacity {cap} outside 1..{len(part)}")
        if seen != set(range(len(seen))):
            raise InputError("parts must cover 0..m-1 without gaps")

    @property
    def m(self) -> int:
        return sum(len(part) for part in self.parts)

    def part_index(self) -> tuple[int, ...]:
        owner = [0] * self.m
        for i, part in enumerate(self.parts):
            for e in part:
                owner[e] = i
        return tuple(owner)


@dataclass(frozen=True)
class GraphicMatroid:
    """Ground set elements are edges of an undirected graph; independent sets are forests."""

    nodes: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.nodes < 1:
            raise InputError("graphic matroid needs at least one node")
        for u, v in self.edges:
            if not (0 <= u < self.nodes and 0 <= v < self.nodes):
                raise InputError(f"edge ({u},{v}) references a missing node")

    @property
    def m(self) -> int:
        return len(self.edges)


Matroid = Union[UniformMatroid, PartitionMatroid, GraphicMatroid]


class _UnionFind:
    __slots__ = ("parent",)

    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[ra] = rb
        return True


class GreedyState:
    """Incremental independence test: ``add`` commits an element if it stays independent."""

    def __init__(self, matroid: Matroid):
        self.matroid = matroid
        if isinstance(matroid, UniformMatroid):
            self.count = 0
        elif isinstance(matroid, PartitionMatroid):
            self.owner = matroid.part_index()
            self.used = [0] * len(matroid.parts)
        else:
            self.uf = _UnionFind(matroid.nodes)

    def add(self, e: int) -> bool:
        matroid = self.matroid
        if isinstance(matroid, UniformMatroid):
            if self.count < matroid.k:
                self.count += 1
                return True
            return False
        if isinstance(matroid, PartitionMatroid):
            part = self.owner[e]
            if self.used[part] < matroid.capacities[part]:
                self.used[part] += 1
                return True
            return False
        u, v = matroid.edges[e]
        return self.uf.union(u, v)


def ground_size(matroid: Matroid) -> int:
    return matroid.m


def is_independent(matroid: Matroid, subset: Iterable[int]) -> bool:
    """Exact independence test for a subset of element indexes."""
    elements = sorted(set(subset))
    m = matroid.m
    for e in elements:
        if not 0 <= e < m:
            raise InputError(f"element index {e} outside 0..{m - 1}")
    state = GreedyState(matroid)
    return all(state.add(e) for e in elements)


def rank(matroid: Matroid) -> int:
    """Common cardinality of all bases."""
    if isinstance(matroid, UniformMatroid):
        return matroid.k
    if isinstance(matroid, PartitionMatroid):
        return sum(matroid.capacities)
    uf = _UnionFind(matroid.nodes)
    return sum(1 for u, v in matroid.edges if uf.union(u, v))


def restricted_rank(matroid: Matroid, removed: Iterable[int]) -> int:
    """Rank of the matroid restricted to the ground set minus ``removed``."""
    gone = set(removed)
    state = GreedyState(matroid)
    return sum(1 for e in range(matroid.m) if e not in gone and state.add(e))


def greedy_basis(
    matroid: Matroid,
    weights_at_lambda: Sequence[Fraction],
    removed: Iterable[int] = (),
) -> tuple[tuple[int, ...], Fraction]:
    """Minimum-weight basis of the restricted matroid for fixed element weights.

    Elements are scanned in (weight, index) order, so ties resolve to the
    smallest index and the chosen basis is a deterministic function of the
    weight ordering alone.
    """
    gone = set(removed)
    order = sorted((e for e in range(matroid.m) if e not in gone),
                   key=lambda e: (weights_at_lambda[e], e))
    state = GreedyState(matroid)
    basis: list[int] = []
    total = Fraction(0)
    target = rank(matroid)
    for e in order:
        if state.add(e):
            basis.append(e)
            total += weights_at_lambda[e]
            if len(basis) == target:
                break
    if len(basis) != target:
        raise InfeasibleRestrictionError(
            f"removing {sorted(gone)} drops the rank from {target} to {len(basis)}"
        )
    return tuple(sorted(basis)), total
