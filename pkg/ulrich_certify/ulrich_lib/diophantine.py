from collections.abc import Iterator
from dataclasses import dataclass
import logging
import math

from ulrich_lib.qexact import isqrt_exact

logger = logging.getLogger(__name__)

# The a <= 9 bound on the four-square equation is only shown by case analysis; scans must reach past it.
CONTO_PROOF_BOUND = 9


@dataclass(frozen=True)
class ContoSolution:
    a: int
    c: tuple[int, int, int, int]


@dataclass(frozen=True)
class SexticSolution:
    a: int
    b: tuple[int, int, int, int, int, int]


def _feasible(length: int, total: int, square_total: int) -> bool:
    # Cauchy-Schwarz and x² ≡ x (mod 2).
    return square_total >= 0 and total * total <= length * square_total and (total - square_total) % 2 == 0


def _vectors(length: int, total: int, square_total: int, upper: int | None) -> Iterator[tuple[int, ...]]:
    if length == 0:
        if total == 0 and square_total == 0:
            yield ()
        return
    if not _feasible(length, total, square_total):
        return
    bound = math.isqrt(square_total)
    high = bound if upper is None else min(bound, upper)
    # With non-increasing entries the first one is at least the average.
    low = -bound if upper is None else max(-bound, -(-total // length))
    for x in range(high, low - 1, -1):
        for rest in _vectors(length - 1, total - x, square_total - x * x, None if upper is None else x):
            yield (x, *rest)


def integer_vectors(length: int, total: int, square_total: int) -> Iterator[tuple[int, ...]]:
    """Every integer vector with the given sum and sum of squares, in decreasing lexicographic order."""
    if length < 0:
        raise ValueError(f"vector length must be nonnegative, got {length}")
    yield from _vectors(length, total, square_total, None)


def descending_vectors(length: int, total: int, square_total: int) -> Iterator[tuple[int, ...]]:
    """As integer_vectors, restricted to non-increasing vectors."""
    if length < 0:
        raise ValueError(f"vector length must be nonnegative, got {length}")
    if length == 0:
        yield from _vectors(0, total, square_total, None)
        return
    yield from _vectors(length, total, square_total, math.isqrt(max(square_total, 0)))


def solve_conto(a_max: int) -> list[ContoSolution]:
    """(a; c1..c4) with c1 >= ... >= c4 >= 0, a >= c1 + c2 + 3 and a² - 6a + 4 = c1² + c2² + c3² + c4²."""
    if a_max < CONTO_PROOF_BOUND:
        raise ValueError(f"a_max must be at least {CONTO_PROOF_BOUND}, got {a_max}")
    solutions: list[ContoSolution] = []
    for a in range(3, a_max + 1):
        target = a * a - 6 * a + 4
        if target < 0:
            continue
        for c1 in range(min(a - 3, math.isqrt(target)), -1, -1):
            if 4 * c1 * c1 < target:
                break
            rest1 = target - c1 * c1
            for c2 in range(min(c1, a - 3 - c1, math.isqrt(rest1)), -1, -1):
                if 3 * c2 * c2 < rest1:
                    break
                rest2 = rest1 - c2 * c2
                for c3 in range(min(c2, math.isqrt(rest2)), -1, -1):
                    if 2 * c3 * c3 < rest2:
                        break
                    c4 = isqrt_exact(rest2 - c3 * c3)
                    if c4 is not None and c4 <= c3:
                        solutions.append(ContoSolution(a=a, c=(c1, c2, c3, c4)))
    logger.debug("Four-square scan up to a=%d found %d solutions", a_max, len(solutions))
    return solutions


def solve_632num() -> list[SexticSolution]:
    """(a; b1..b6) with b1 >= ... >= b6, a² - Σb² = 10 and 3a - Σb = 6."""
    # (Σb)² <= 6Σb² gives a² - 12a + 32 <= 0.
    half_width = math.isqrt(36 - 32)
    solutions: list[SexticSolution] = []
    for a in range(6 - half_width, 6 + half_width + 1):
        for b in descending_vectors(6, 3 * a - 6, a * a - 10):
            solutions.append(SexticSolution(a=a, b=(b[0], b[1], b[2], b[3], b[4], b[5])))
    logger.debug("Sextic scan found %d solutions", len(solutions))
    return solutions


def feasible_params(d_max: int) -> list[tuple[int, int, int]]:
    """(n, d, g) with n >= 3, d <= d_max, (n-1)d = (n+2)(g-1) and 2 <= g <= d - 3."""
    if d_max < 1:
        raise ValueError(f"d_max must be positive, got {d_max}")
    found: list[tuple[int, int, int]] = []
    for d in range(1, d_max + 1):
        # g <= d - 3 together with the degree formula gives 4n + 8 <= 3d.
        for n in range(3, (3 * d - 8) // 4 + 1):
            if (n - 1) * d % (n + 2):
                continue
            g = (n - 1) * d // (n + 2) + 1
            if 2 <= g <= d - 3:
                found.append((n, d, g))
    logger.debug("Feasible (n, d, g) up to d=%d: %s", d_max, found)
    return found
