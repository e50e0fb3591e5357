"""Divisor classes on the plane blown up at r general points.

A class (a; b1, ..., br) stands for aL - Σ bi·Ei, so K = (-3; -1, ..., -1) and Ei = (0; 0, ..., -1, ..., 0).
"""

from dataclasses import dataclass
from fractions import Fraction
import functools
import logging
import math
from typing import Self

from ulrich_lib.diophantine import integer_vectors, solve_632num, solve_conto
from ulrich_lib.models import Certificate, CheckLog

logger = logging.getLogger(__name__)

MIN_POINTS = 2
MAX_POINTS = 8
# Below degree 3 the Mori cone needs more than (-1)-curves to decide effectivity.
MAX_EFFECTIVITY_POINTS = 6


class PicardParseError(ValueError):
    def __init__(self, message: str, position: int) -> None:
        super().__init__(f"{message} at position {position}")
        self.position = position


@dataclass(frozen=True, order=True)
class PicardClass:
    a: int
    b: tuple[int, ...]

    def __post_init__(self) -> None:
        if not MIN_POINTS <= len(self.b) <= MAX_POINTS:
            raise ValueError(f"classes live on blowups at {MIN_POINTS}..{MAX_POINTS} points, got r={len(self.b)}")

    @property
    def r(self) -> int:
        return len(self.b)

    def require_same_r(self, other: "PicardClass") -> None:
        if self.r != other.r:
            raise ValueError(f"classes on different blowups: r={self.r} and r={other.r}")

    def __add__(self, other: "PicardClass") -> "PicardClass":
        self.require_same_r(other)
        return PicardClass(self.a + other.a, tuple(x + y for x, y in zip(self.b, other.b, strict=True)))

    def __sub__(self, other: "PicardClass") -> "PicardClass":
        return self + other * -1

    def __mul__(self, factor: int) -> "PicardClass":
        return PicardClass(self.a * factor, tuple(x * factor for x in self.b))

    def __rmul__(self, factor: int) -> "PicardClass":
        return self * factor

    def __neg__(self) -> "PicardClass":
        return self * -1

    def is_zero(self) -> bool:
        return self.a == 0 and not any(self.b)

    def render(self) -> str:
        return f"({self.a};{','.join(str(x) for x in self.b)})"

    @classmethod
    def canonical(cls, r: int) -> Self:
        return cls(-3, (-1,) * r)

    @classmethod
    def line(cls, r: int) -> Self:
        return cls(1, (0,) * r)

    @classmethod
    def exceptional(cls, r: int, i: int) -> Self:
        """E_i with 1-based i."""
        if not 1 <= i <= r:
            raise ValueError(f"exceptional index {i} out of range 1..{r}")
        return cls(0, tuple(-1 if j == i else 0 for j in range(1, r + 1)))


def intersect(d1: PicardClass, d2: PicardClass) -> int:
    d1.require_same_r(d2)
    return d1.a * d2.a - sum(x * y for x, y in zip(d1.b, d2.b, strict=True))


def self_int(d: PicardClass) -> int:
    return intersect(d, d)


def anticanonical_degree(d: PicardClass) -> int:
    return -intersect(d, PicardClass.canonical(d.r))


def pa(d: PicardClass) -> Fraction:
    return Fraction(intersect(d, d + PicardClass.canonical(d.r)), 2) + 1


@functools.cache
def minus_one_curves(r: int) -> tuple[PicardClass, ...]:
    """Classes with E² = -1 and E·K = -1, in increasing lexicographic order."""
    if not MIN_POINTS <= r <= MAX_POINTS:
        raise ValueError(f"minus_one_curves needs {MIN_POINTS} <= r <= {MAX_POINTS}, got {r}")
    # (3a - 1)² <= r(a² + 1) by Cauchy-Schwarz, i.e. (9-r)a² - 6a + 1 - r <= 0.
    width = math.isqrt(r * (10 - r))
    low, high = -((width - 3) // (9 - r)), (3 + width) // (9 - r)
    curves = [
        PicardClass(a, b) for a in range(low, high + 1) for b in integer_vectors(r, 3 * a - 1, a * a + 1)
    ]
    logger.debug("Found %d (-1)-curves for r=%d with a in [%d, %d]", len(curves), r, low, high)
    return tuple(sorted(curves))


@dataclass(frozen=True)
class EffectivityVerdict:
    effective: bool
    h0: int
    trace: tuple[PicardClass, ...]


def _require_effectivity_range(r: int) -> None:
    if not MIN_POINTS <= r <= MAX_EFFECTIVITY_POINTS:
        raise ValueError(f"effectivity is decided for {MIN_POINTS} <= r <= {MAX_EFFECTIVITY_POINTS}, got r={r}")


def decide_effective(d: PicardClass) -> EffectivityVerdict:
    _require_effectivity_range(d.r)
    start_degree = anticanonical_degree(d)
    trace: list[PicardClass] = []
    current = d
    while True:
        assert len(trace) <= max(start_degree, 0) + 1
        if current.is_zero():
            return EffectivityVerdict(effective=True, h0=1, trace=tuple(trace))
        if anticanonical_degree(current) <= 0:
            return EffectivityVerdict(effective=False, h0=0, trace=tuple(trace))
        # Sections of D vanish on any E with D·E < 0, so h0(D) = h0(D - E).
        negative = next((e for e in minus_one_curves(current.r) if intersect(current, e) < 0), None)
        if negative is None:
            h0 = Fraction(intersect(current, current - PicardClass.canonical(current.r)), 2) + 1
            assert h0.denominator == 1 and h0 >= 1
            return EffectivityVerdict(effective=True, h0=int(h0), trace=tuple(trace))
        trace.append(negative)
        current = current - negative


def is_nef(d: PicardClass) -> bool:
    _require_effectivity_range(d.r)
    return all(intersect(d, e) >= 0 for e in minus_one_curves(d.r))


def is_ample(d: PicardClass) -> bool:
    _require_effectivity_range(d.r)
    return all(intersect(d, e) > 0 for e in minus_one_curves(d.r))


def parse_picard_class(text: str) -> PicardClass:
    """Parse "(a; b1,b2,...,br)" with optional whitespace."""
    pos = 0

    def skip_spaces() -> None:
        nonlocal pos
        while pos < len(text) and text[pos].isspace():
            pos += 1

    def expect(char: str) -> None:
        nonlocal pos
        skip_spaces()
        if pos >= len(text) or text[pos] != char:
            raise PicardParseError(f"expected {char!r}", pos)
        pos += 1

    def integer() -> int:
        nonlocal pos
        skip_spaces()
        start = pos
        if pos < len(text) and text[pos] in "+-":
            pos += 1
        digits_start = pos
        while pos < len(text) and text[pos].isdigit():
            pos += 1
        if pos == digits_start:
            raise PicardParseError("expected an integer", start)
        return int(text[start:pos])

    expect("(")
    a = integer()
    expect(";")
    b = [integer()]
    skip_spaces()
    while pos < len(text) and text[pos] == ",":
        pos += 1
        b.append(integer())
        skip_spaces()
    expect(")")
    skip_spaces()
    if pos != len(text):
        raise PicardParseError("unexpected trailing text", pos)
    if not MIN_POINTS <= len(b) <= MAX_POINTS:
        raise PicardParseError(f"expected {MIN_POINTS}..{MAX_POINTS} multiplicities, got {len(b)}", pos)
    return PicardClass(a, tuple(b))


def certify_632() -> Certificate:
    """Genus 3 degree 6 curves on a smooth cubic surface whose T_X(2) is Ulrich."""
    log = CheckLog()
    solutions = solve_632num()
    log.expect("class count", 5, len(solutions))
    canonical = PicardClass.canonical(6)
    for solution in solutions:
        x = PicardClass(solution.a, solution.b)
        name = x.render()
        log.expect(f"{name} degree", 6, anticanonical_degree(x))
        log.expect(f"{name} self-intersection", 10, self_int(x))
        log.expect(f"{name} arithmetic genus", 3, pa(x))
        residual = 3 * canonical + 2 * x
        verdict = decide_effective(residual)
        log.expect(f"{name} 3K+2X effective", False, verdict.effective)
        log.witness(f"{name} 3K+2X", residual.render())
        log.witness(f"{name} reduction", tuple(e.render() for e in verdict.trace))
    return log.certificate("632", refutation=False)


K1_CANDIDATES = (
    PicardClass(6, (3, 1, 1, 1)),
    PicardClass(6, (2, 2, 2, 2)),
    PicardClass(7, (4, 2, 2, 1)),
    PicardClass(9, (4, 4, 4, 3)),
)


def h0_omega_p2(t: int) -> int:
    """h^0 of the cotangent bundle of the plane twisted by t, from the Euler sequence."""
    if t < 2:
        return 0
    return 3 * math.comb(t + 1, 2) - math.comb(t + 2, 2)


def certify_k1_candidates(a_max: int) -> Certificate:
    """Polarizations H of a degree 5 Del Pezzo surface with H² + 2HK = 0, from the four-square scan."""
    log = CheckLog()
    canonical = PicardClass.canonical(4)
    candidates = tuple(sorted(PicardClass(s.a, tuple(c + 1 for c in s.c)) for s in solve_conto(a_max)))
    log.expect("candidates", tuple(h.render() for h in sorted(K1_CANDIDATES)), tuple(h.render() for h in candidates))
    for h in candidates:
        name = h.render()
        log.expect(f"{name} H^2+2HK", 0, self_int(h) + 2 * intersect(h, canonical))
        log.holds(f"{name} normalized", list(h.b) == sorted(h.b, reverse=True) and h.b[-1] >= 1)
        log.holds(f"{name} a >= b1+b2+1", h.a >= h.b[0] + h.b[1] + 1)
        log.holds(f"{name} ample", is_ample(h))
    log.expect("(6;2,2,2,2) = -2K", (-2 * canonical).render(), PicardClass(6, (2, 2, 2, 2)).render())
    # For (6;3,1,1,1), H + K = 3L - 2E1 and Ω(3) keeps a section through a length 2 scheme.
    log.expect("(6;3,1,1,1) H+K", "(3;2,0,0,0)", (K1_CANDIDATES[0] + canonical).render())
    log.expect("h0(Omega(3)) - 6", 2, h0_omega_p2(3) - 6)
    return log.certificate("k1-surface", refutation=False)
