import random
from fractions import Fraction
from itertools import combinations

import pytest

import gen
from matint import (
    AffineForm,
    GraphicMatroid,
    InfeasibleRestrictionError,
    Instance,
    PartitionMatroid,
    Strategy,
    UniformMatroid,
    basis_value_form,
    is_independent,
    min_weight_basis,
    rank,
)


def test_partition_independence():
    matroid = PartitionMatroid(((0, 1), (2, 3)), (1, 1))
    assert is_independent(matroid, {0, 2})
    assert not is_independent(matroid, {0, 1})


def test_graphic_independence_cycle():
    triangle = GraphicMatroid(3, ((0, 1), (1, 2), (2, 0)))
    assert not is_independent(triangle, {0, 1, 2})
    assert is_independent(triangle, {0, 1})


def test_rank_examples():
    assert rank(PartitionMatroid(((0, 1), (2, 3)), (1, 1))) == 2
    assert rank(GraphicMatroid(3, ((0, 1), (1, 2), (2, 0)))) == 2
    assert rank(UniformMatroid(5, 3)) == 3


def test_min_weight_basis_tri1(tri1):
    basis, value = min_weight_basis(tri1, (), (Fraction(1, 4),))
    assert basis == (0, 2)
    assert value == 2

    basis, value = min_weight_basis(tri1, Strategy((2,)), (Fraction(1, 4),))
    assert basis == (0, 1)
    assert value == Fraction(13, 4)


def test_min_weight_basis_tie_breaks_by_index():
    instance = Instance(
        matroid=UniformMatroid(2, 1),
        weights=(AffineForm.build(1, [1]), AffineForm.build(1, [1])),
        ell=1,
        p=1,
        polytope=(AffineForm.build(0, [1]), AffineForm.build(1, [-1])),
    )
    basis, value = min_weight_basis(instance, (), (Fraction(1, 3),))
    assert basis == (0,)
    assert value == Fraction(4, 3)


def test_min_weight_basis_infeasible_restriction(tri1):
    with pytest.raises(InfeasibleRestrictionError):
        min_weight_basis(tri1, (0, 1), (Fraction(1, 4),))


def test_basis_value_form(tri1):
    form = basis_value_form(tri1, (1, 2))
    assert form == AffineForm.build(2, [3])
    form = basis_value_form(tri1, (0, 1))
    assert form == AffineForm.build(3, [1])
    assert basis_value_form(tri1, ()) == AffineForm.build(0, [0])


def _all_bases(matroid):
    m = matroid.m
    k = rank(matroid)
    return [b for b in combinations(range(m), k) if is_independent(matroid, b)]


def test_greedy_matches_exhaustive_minimum():
    rng = random.Random(101)
    for _ in range(120):
        instance = gen.random_instance(rng, p=rng.choice((1, 2)))
        if instance.m > 8:
            continue
        lam = tuple(Fraction(rng.randint(0, 4), 2) for _ in range(instance.p))
        weights = instance.weights_at(lam)
        _, greedy_value = min_weight_basis(instance, (), lam)
        exhaustive = min(sum(weights[e] for e in basis) for basis in _all_bases(instance.matroid))
        assert greedy_value == exhaustive


def test_greedy_constant_within_cell(tri1):
    from matint import build_cells

    for cell in build_cells(tri1):
        coords = [v[0] for v in cell.polytope.vertices]
        low, high = min(coords), max(coords)
        probes = [low + (high - low) * Fraction(i, 7) for i in range(1, 7)]
        for removed in ((0,), (1,), (2,)):
            reference, _ = min_weight_basis(tri1, removed, cell.interior_point)
            for lam in probes:
                basis, _ = min_weight_basis(tri1, removed, (lam,))
                assert basis == reference


def test_form_evaluation_matches_greedy_value():
    rng = random.Random(33)
    for _ in range(60):
        instance = gen.random_instance(rng)
        lam = tuple(Fraction(rng.randint(0, 4), 2) for _ in range(instance.p))
        basis, value = min_weight_basis(instance, (), lam)
        assert basis_value_form(instance, basis)(lam) == value


def _random_subset(rng, m):
    return frozenset(e for e in range(m) if rng.random() < 0.5)


def test_matroid_axioms_on_random_subsets():
    rng = random.Random(5)
    matroids = [
        UniformMatroid(6, 3),
        PartitionMatroid(((0, 1, 2), (3, 4), (5,)), (2, 1, 1)),
        GraphicMatroid(4, ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))),
    ]
    for matroid in matroids:
        assert is_independent(matroid, ())
        for _ in range(200):
            subset = _random_subset(rng, matroid.m)
            if is_independent(matroid, subset):
                for e in subset:  # downward closure
                    assert is_independent(matroid, subset - {e})
            other = _random_subset(rng, matroid.m)
            if (
                is_independent(matroid, subset)
                and is_independent(matroid, other)
                and len(other) < len(subset)
            ):
                assert any(
                    is_independent(matroid, other | {e}) for e in subset - other
                ), "exchange property violated"


def test_structural_validation_errors():
    from matint import InputError

    with pytest.raises(InputError):
        PartitionMatroid(((0, 1), (1, 2)), (1, 1))  # overlapping parts
    with pytest.raises(InputError):
        PartitionMatroid(((0, 1),), (3,))  # capacity above part size
    with pytest.raises(InputError):
        GraphicMatroid(2, ((0, 5),))  # missing node
    with pytest.raises(InputError):
        is_independent(UniformMatroid(3, 2), {7})
