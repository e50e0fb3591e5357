from dataclasses import dataclass
from enum import StrEnum
from fractions import Fraction
import logging

from ulrich_lib.models import Certificate, CheckLog
from ulrich_lib.qexact import is_integral, isqrt_exact
from ulrich_lib.ulrich_core import Degenerate, degree_from_genus

logger = logging.getLogger(__name__)

# Largest k allowed on a curve with general moduli.
GENERAL_MODULI_K_CAP = 4
CUBIC_EXCEPTION = (9, 10)


class FactorKind(StrEnum):
    RATIONAL_LINE = "rational-line"
    ELLIPTIC = "elliptic"


@dataclass(frozen=True)
class FactorBundle:
    """A line bundle on P¹ or on an elliptic curve, up to what its cohomology depends on."""

    kind: FactorKind
    degree: int
    nontrivial: bool = False

    def __post_init__(self) -> None:
        if self.nontrivial and (self.kind != FactorKind.ELLIPTIC or self.degree != 0):
            raise ValueError("only degree 0 bundles on an elliptic curve carry a nontriviality flag")

    def cohomology(self) -> tuple[int, int]:
        if self.kind == FactorKind.RATIONAL_LINE:
            return max(self.degree + 1, 0), max(-self.degree - 1, 0)
        if self.degree > 0:
            return self.degree, 0
        if self.degree < 0:
            return 0, -self.degree
        return (0, 0) if self.nontrivial else (1, 1)


def rational_line(degree: int) -> FactorBundle:
    return FactorBundle(FactorKind.RATIONAL_LINE, degree)


def kunneth_h(f1: FactorBundle, f2: FactorBundle) -> tuple[int, int, int]:
    (a0, a1), (b0, b1) = f1.cohomology(), f2.cohomology()
    return a0 * b0, a0 * b1 + a1 * b0, a1 * b1


@dataclass(frozen=True)
class QuadricCurve:
    """A curve of type (a, b) on the smooth quadric P¹ × P¹."""

    a: int
    b: int

    def __post_init__(self) -> None:
        if self.a < 1 or self.b < 1:
            raise ValueError(f"curve type must be positive, got ({self.a}, {self.b})")

    @property
    def degree(self) -> int:
        return self.a + self.b

    @property
    def genus(self) -> int:
        return (self.a - 1) * (self.b - 1)


def quadric_intersection(x: tuple[int, int], y: tuple[int, int]) -> int:
    return x[0] * y[1] + x[1] * y[0]


def quadric_type_from_k(k: int, b: int) -> Fraction:
    """The a making a type (a, b) curve satisfy (a+b)(k-1) = 3((a-1)(b-1)-1)."""
    if 3 * b == k + 2:
        raise ValueError(f"no curve type for k={k}, b={b}: 3b = k + 2")
    return Fraction(b * (k + 2), 3 * b - k - 2)


def brill_noether_rho(g: int, r: int, d: int) -> int:
    return g - (r + 1) * (g - d + r)


@dataclass(frozen=True)
class Thresholds:
    castelnuovo_p3: Fraction
    quadric_forcing: Fraction
    bd_curve: Fraction
    cubic_exception: bool


def thresholds(d: int) -> Thresholds:
    """Genus thresholds for a degree d space curve.

    castelnuovo_p3 is the largest genus in P³, quadric_forcing the genus above which the curve lies on a
    quadric (except (d, g) = (9, 10)), and bd_curve the lower genus bound forced by T_X(k) Ulrich.
    """
    if d < 1:
        raise ValueError(f"thresholds need d >= 1, got {d}")
    offset = Fraction(1) if d % 3 == 0 else Fraction(1, 3)
    return Thresholds(
        castelnuovo_p3=Fraction(d * (d - 4), 4) + 1,
        quadric_forcing=Fraction(d * (d - 3), 6) + offset,
        bd_curve=Fraction(2 * d * d, 9) - d + 1,
        cubic_exception=d == CUBIC_EXCEPTION[0],
    )


def cone_case_check(b: int) -> bool:
    """Whether a curve of degree 2b+1 and genus b²-b on a quadric cone admits an integral twist k."""
    if b < 1:
        raise ValueError(f"cone_case_check needs b >= 1, got {b}")
    d, g = 2 * b + 1, b * b - b
    return is_integral(Fraction(3 * (g - 1), d))


def existence_k2(g: int) -> bool:
    if g < 0:
        raise ValueError(f"genus must be nonnegative, got {g}")
    return g >= 3


def existence_k3(g: int) -> bool:
    if g < 0:
        raise ValueError(f"genus must be nonnegative, got {g}")
    return g >= 9 and is_integral(Fraction(3 * (g - 1), 2))


def general_moduli_max_k(g: int) -> int:
    """Largest k with 3(g-1)/(k-1) >= (3g+12)/4, i.e. ρ(g, 3, d) >= 0 for the Ulrich degree."""
    if g < 2:
        raise ValueError(f"general_moduli_max_k needs g >= 2, got {g}")
    return 1 + 12 * (g - 1) // (3 * g + 12)


def certify_quadric_ulrich(c: int) -> Certificate:
    """T_X(2c) is Ulrich on a curve of type (c+1, 2c+2) on a smooth quadric."""
    if c < 1:
        raise ValueError(f"certify_quadric_ulrich needs c >= 1, got {c}")
    log = CheckLog()
    curve = QuadricCurve(c + 1, 2 * c + 2)
    k, g, d = 2 * c, curve.genus, curve.degree
    prefix = f"c={c}"
    log.expect(f"{prefix} genus", c * (2 * c + 1), g)
    log.expect(f"{prefix} degree", 3 * (c + 1), d)
    degree = degree_from_genus(1, g, k)
    log.expect(f"{prefix} degree formula", d, None if isinstance(degree, Degenerate) else degree)
    root = isqrt_exact(8 * g + 1)
    log.expect(f"{prefix} sqrt(8g+1)", 4 * c + 1, root)
    log.holds(f"{prefix} genus bound attained", root is not None and (root - 1) == 2 * k)
    log.expect(f"{prefix} genus bound from degree", g, thresholds(d).bd_curve)
    log.expect(f"{prefix} type from k", curve.a, quadric_type_from_k(k, curve.b))

    # T_X(k-1) = O_Q(k+1-a, k+1-b)|X, resolved by O_Q(k+1-2a, k+1-2b).
    restricted = (k + 1 - curve.a, k + 1 - curve.b)
    kernel = (k + 1 - 2 * curve.a, k + 1 - 2 * curve.b)
    log.expect(f"{prefix} restricted class", (c, -1), restricted)
    log.expect(f"{prefix} kernel class", (-1, -2 * c - 3), kernel)
    log.expect(f"{prefix} deg T_X(k-1)", g - 1, quadric_intersection(restricted, (curve.a, curve.b)))
    for name, (x, y) in (("restricted", restricted), ("kernel", kernel)):
        log.expect(f"{prefix} h^i {name}", (0, 0, 0), kunneth_h(rational_line(x), rational_line(y)))
    log.witness(f"{prefix} (d,g,k)", (d, g, k))
    return log.certificate("quadric-curves", refutation=False)


@dataclass(frozen=True)
class EllipticProductClass:
    """x·C0 + π*(divisor of degree `degree` plus m·M) on E × P¹, M of order greater than 2."""

    c0: int
    degree: int
    m: int

    def __sub__(self, other: "EllipticProductClass") -> "EllipticProductClass":
        return EllipticProductClass(self.c0 - other.c0, self.degree - other.degree, self.m - other.m)

    def __mul__(self, factor: int) -> "EllipticProductClass":
        return EllipticProductClass(self.c0 * factor, self.degree * factor, self.m * factor)

    def factors(self) -> tuple[FactorBundle, FactorBundle]:
        if self.degree == 0 and abs(self.m) > 2:
            raise ValueError(f"triviality of {self.m}·M is not determined by its order exceeding 2")
        elliptic = FactorBundle(FactorKind.ELLIPTIC, self.degree, nontrivial=self.degree == 0 and self.m != 0)
        return elliptic, rational_line(self.c0)


def certify_elliptic_product(k: int) -> Certificate:
    """T_X(k) is Ulrich on a curve X in |(k+2)C0 + π*B| on E × P¹, for odd k >= 3."""
    if k < 3 or k % 2 == 0:
        raise ValueError(f"certify_elliptic_product needs an odd k >= 3, got {k}")
    log = CheckLog()
    prefix = f"k={k}"
    # H = C0 + π*D with deg D = 3, B = (k-1)/2·D + M, and -K_S = 2C0.
    polarization = EllipticProductClass(1, 3, 0)
    anticanonical = EllipticProductClass(2, 0, 0)
    curve_class = EllipticProductClass(k + 2, 3 * (k - 1) // 2, 1)
    twisted = EllipticProductClass(
        anticanonical.c0 + (k - 1) * polarization.c0, anticanonical.degree + (k - 1) * polarization.degree, 0
    )
    once, twice = twisted - curve_class, twisted - curve_class * 2
    log.expect(f"{prefix} L-H1", (-1, 3 * (k - 1) // 2, -1), (once.c0, once.degree, once.m))
    log.expect(f"{prefix} L-2H1", (-(k + 3), 0, -2), (twice.c0, twice.degree, twice.m))
    for name, bundle in (("L-H1", once), ("L-2H1", twice)):
        log.expect(f"{prefix} h^i {name}", (0, 0, 0), kunneth_h(*bundle.factors()))
    return log.certificate("elliptic-product", refutation=False)
