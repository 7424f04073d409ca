import random
from fractions import Fraction

import pytest

import gen
from matint import (
    AffineForm,
    OracleContractError,
    Strategy,
    approximate_cell,
    build_cells,
    exact_value,
    gamma,
    lift_cell,
)
from matint.cellapprox import (
    add_strategy,
    final_polyhedron,
    pairwise_box_conflicts,
    value_halfspace,
)
from matint.oracles import OracleAnswer, OracleSpec


def _cell_between(cells, low, high):
    for cell in cells:
        coords = [v[0] for v in cell.polytope.vertices]
        if min(coords) == low and max(coords) == high:
            return cell
    raise AssertionError(f"no cell [{low}, {high}]")


def test_lift_cell_keeps_constraints(tri1):
    cells = build_cells(tri1)
    cell = _cell_between(cells, Fraction(1, 2), Fraction(2, 3))
    lifted = lift_cell(cell)
    assert lifted.dim == 2
    assert len(lifted.constraints) == len(cell.polytope.constraints)
    assert all(c.gradient[-1] == 0 for c in lifted.constraints)


def test_add_strategy_value_forms(tri1):
    cells = build_cells(tri1)
    cases = (
        (Fraction(1, 2), Fraction(2, 3), (0,), AffineForm.build(2, [3])),
        (Fraction(1), Fraction(2), (1,), AffineForm.build(1, [4])),
        (Fraction(0), Fraction(1, 2), (2,), AffineForm.build(3, [1])),
    )
    for low, high, removed, expected in cases:
        cell = _cell_between(cells, low, high)
        lifted = lift_cell(cell)
        entry, refined = add_strategy(tri1, cell.interior_point, lifted, Strategy(removed))
        assert entry.value_form == expected
        assert len(refined.constraints) == len(lifted.constraints) + 1


def test_value_halfspace_orientation():
    form = AffineForm.build(2, [3])
    half = value_halfspace(form)
    assert half((Fraction(0), Fraction(5))) > 0  # z=5 above 2
    assert half((Fraction(1), Fraction(5))) == 0  # z = 2+3
    assert half((Fraction(1), Fraction(4))) < 0


def test_approximate_cell_tri1_middle_cell(tri1):
    cells = build_cells(tri1)
    cell = _cell_between(cells, Fraction(1, 2), Fraction(2, 3))
    solution = approximate_cell(tri1, cell, Fraction(1, 10), OracleSpec("brute"))
    assert [e.strategy.removed for e in solution.strategies] == [(0,)]
    assert solution.strategies[0].value_form == AffineForm.build(2, [3])
    assert solution.anchor == (Fraction(7, 12),)


def test_approximate_cell_tri1_first_cell_is_exact(tri1):
    cells = build_cells(tri1)
    cell = _cell_between(cells, Fraction(0), Fraction(1, 2))
    solution = approximate_cell(tri1, cell, Fraction(1, 10), OracleSpec("brute"))
    assert [e.strategy.removed for e in solution.strategies] == [(2,)]
    assert solution.strategies[0].value_form == AffineForm.build(3, [1])
    for i in range(11):
        lam = (Fraction(i, 22),)
        expected, _ = exact_value(tri1, lam)
        assert solution.best_entry(lam)[1] == expected


def test_large_epsilon_keeps_single_strategy(tri1):
    cells = build_cells(tri1)
    for cell in cells:
        solution = approximate_cell(
            tri1, cell, Fraction(99, 100), OracleSpec.parse("synthetic:1")
        )
        assert len(solution.strategies) == 1


def test_gamma_examples(tri1, part1):
    cells = build_cells(tri1)
    cell = _cell_between(cells, Fraction(1, 2), Fraction(2, 3))
    assert gamma(tri1, Strategy((0,)), cell.interior_point) == (Fraction(3), Fraction(2))
    cell = _cell_between(cells, Fraction(1), Fraction(2))
    assert gamma(tri1, Strategy((1,)), cell.interior_point) == (Fraction(4), Fraction(1))
    assert gamma(part1, Strategy((0,)), (Fraction(1, 2),)) == (Fraction(2), Fraction(2))


def test_gamma_nonnegative_on_random_instances():
    rng = random.Random(61)
    for _ in range(25):
        instance = gen.random_instance(rng, p=rng.choice((1, 2)))
        cells = build_cells(instance)
        anchor = cells[0].interior_point
        for strategy in list(instance.strategies())[:10]:
            assert all(x >= 0 for x in gamma(instance, strategy, anchor))


def test_guarantee_on_random_cells():
    rng = random.Random(303)
    for _ in range(12):
        instance = gen.random_instance(rng, p=1)
        eps = rng.choice(gen.EPSILONS)
        for cell in build_cells(instance):
            solution = approximate_cell(instance, cell, eps, OracleSpec("brute"))
            coords = [v[0] for v in cell.polytope.vertices]
            low, high = min(coords), max(coords)
            for i in range(20):
                lam = (low + (high - low) * Fraction(rng.randint(0, 64), 64),)
                expected, _ = exact_value(instance, lam)
                assert solution.best_entry(lam)[1] >= (1 - eps) * expected


def test_termination_state_properties(tri1):
    for cell in build_cells(tri1):
        solution = approximate_cell(tri1, cell, Fraction(1, 10), OracleSpec("brute"))
        lifted = final_polyhedron(solution)
        for vertex in lifted.vertices:
            lam, z = vertex[:1], vertex[1]
            assert max(e.value_form(lam) for e in solution.strategies) == z
        assert pairwise_box_conflicts(solution) == []


def test_lower_bound_soundness():
    rng = random.Random(44)
    for _ in range(8):
        instance = gen.random_instance(rng, p=1)
        for cell in build_cells(instance):
            solution = approximate_cell(instance, cell, Fraction(1, 2), OracleSpec("brute"))
            coords = [v[0] for v in cell.polytope.vertices]
            low, high = min(coords), max(coords)
            for i in range(8):
                lam = (low + (high - low) * Fraction(i, 7),)
                expected, _ = exact_value(instance, lam)
                for entry in solution.strategies:
                    assert entry.value_form(lam) <= expected


def test_monotone_refinement_shrinks_polyhedron():
    rng = random.Random(7)
    instance = gen.random_instance(rng, p=1)
    cell = build_cells(instance)[0]
    solution = approximate_cell(instance, cell, Fraction(1, 10), OracleSpec("brute"))
    # rebuild step by step: each added strategy must cut off part of the previous polyhedron
    lifted = lift_cell(cell).with_constraint(value_halfspace(solution.strategies[0].value_form))
    for entry in solution.strategies[1:]:
        previous = set(lifted.vertices)
        lifted = lifted.with_constraint(value_halfspace(entry.value_form))
        assert set(lifted.vertices) != previous


def test_bad_oracle_answers_are_rejected(tri1):
    cell = build_cells(tri1)[0]

    def wrong_size(instance, lam):
        return OracleAnswer(Strategy((0, 1)), Fraction(1))

    from matint.cellapprox import approximate_cell as run
    import matint.cellapprox as ca

    spec = OracleSpec("brute")
    original = ca.resolve_oracle
    try:
        ca.resolve_oracle = lambda s, inst: wrong_size
        with pytest.raises(OracleContractError):
            run(tri1, cell, Fraction(1, 10), spec)
    finally:
        ca.resolve_oracle = original
