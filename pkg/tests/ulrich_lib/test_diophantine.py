import itertools
import math

import pytest

from ulrich_lib.diophantine import (
    ContoSolution,
    descending_vectors,
    feasible_params,
    integer_vectors,
    solve_632num,
    solve_conto,
)


def test_solve_conto_finds_the_four_solutions() -> None:
    assert solve_conto(9) == [
        ContoSolution(6, (2, 0, 0, 0)),
        ContoSolution(6, (1, 1, 1, 1)),
        ContoSolution(7, (3, 1, 1, 0)),
        ContoSolution(9, (3, 3, 3, 2)),
    ]


def test_solve_conto_extended_scan_finds_nothing_new() -> None:
    assert solve_conto(256) == solve_conto(9)


def test_solve_conto_needs_the_proof_bound() -> None:
    with pytest.raises(ValueError):
        solve_conto(8)


def test_solve_632num() -> None:
    solutions = solve_632num()
    assert [(s.a, s.b) for s in solutions] == [
        (4, (1, 1, 1, 1, 1, 1)),
        (5, (2, 2, 2, 1, 1, 1)),
        (6, (3, 2, 2, 2, 2, 1)),
        (7, (3, 3, 3, 2, 2, 2)),
        (8, (3, 3, 3, 3, 3, 3)),
    ]
    for s in solutions:
        assert s.a * s.a - sum(b * b for b in s.b) == 10
        assert 3 * s.a - sum(s.b) == 6


def test_integer_vectors_covers_every_sign_and_order() -> None:
    vectors = list(integer_vectors(2, 0, 2))
    assert vectors == [(1, -1), (-1, 1)]
    assert list(integer_vectors(0, 0, 0)) == [()]
    assert list(integer_vectors(3, 4, 4)) == []


def test_descending_vectors_are_non_increasing() -> None:
    vectors = list(descending_vectors(4, 3, 3))
    assert vectors == [(1, 1, 1, 0)]


def test_feasible_params() -> None:
    assert feasible_params(8) == [(4, 8, 5)]
    for n, d, g in feasible_params(30):
        assert (n - 1) * d == (n + 2) * (g - 1)
        assert 2 <= g <= d - 3
    with pytest.raises(ValueError):
        feasible_params(0)


def test_solve_conto_matches_unpruned_scan() -> None:
    a_max = 24
    expected: set[tuple[int, tuple[int, ...]]] = set()
    for a in range(a_max + 1):
        for ascending in itertools.combinations_with_replacement(range(a + 1), 4):
            c = ascending[::-1]
            if a >= c[0] + c[1] + 3 and a * a - 6 * a + 4 == sum(x * x for x in c):
                expected.add((a, c))
    found = solve_conto(a_max)
    assert len(found) == len(expected)
    assert {(s.a, s.c) for s in found} == expected


def test_solve_632num_matches_unpruned_scan() -> None:
    expected: set[tuple[int, tuple[int, ...]]] = set()
    for a in range(-9, 10):
        bound = math.isqrt(max(a * a - 10, 0))
        for ascending in itertools.combinations_with_replacement(range(-bound, bound + 1), 6):
            if 3 * a - sum(ascending) == 6 and a * a - sum(x * x for x in ascending) == 10:
                expected.add((a, ascending[::-1]))
    found = solve_632num()
    assert len(found) == len(expected)
    assert {(s.a, s.b) for s in found} == expected


def test_feasible_params_matches_unpruned_scan() -> None:
    d_max = 60
    expected = [
        (n, d, g)
        for d in range(1, d_max + 1)
        for n in range(3, 2 * d + 1)
        for g in range(2, d - 2)
        if (n - 1) * d == (n + 2) * (g - 1)
    ]
    assert feasible_params(d_max) == expected
