"""Interpolation of P_A(t) = χ(K_X + tA) on Fano varieties with K_X = -rA and H = sA.

The unknowns are u = A^n/n! and the products u·a, u·b, ... with the coefficients of the monic cofactor, so
every constraint is linear.
"""

from dataclasses import dataclass
from enum import StrEnum
from fractions import Fraction
import logging
import math

from ulrich_lib.models import VarietyParams
from ulrich_lib.qexact import AffineForm, QMatrix, QPoly, elem_symmetric, is_integral, poly_eval, solve_affine
from ulrich_lib.ulrich_core import ContradictionKind, c2_identity_check, proportional_case

logger = logging.getLogger(__name__)

U = "u"
# A^{n-2}·c2(X), the only invariant of X entering the t^{n-2} coefficient besides A^n.
C2_PARAMETER = "A^(n-2)c_2"
COFACTOR_NAMES = ("a", "b", "c")


class HilbertCaseId(StrEnum):
    CASE_3D = "3d"
    CASE_4D = "4d"
    CASE_4E = "4e"


# (m, k) of each case, with n = 2m.
_CASE_DATA: dict[HilbertCaseId, tuple[int, int]] = {
    HilbertCaseId.CASE_3D: (4, 4),
    HilbertCaseId.CASE_4D: (5, 4),
    HilbertCaseId.CASE_4E: (5, 5),
}


def rr_top_coefficients(n: int, r: int) -> dict[int, AffineForm]:
    """Coefficients of t^n and t^{n-1} in P_A(t) when K_X = -rA, as multiples of u."""
    if n < 2:
        raise ValueError(f"rr_top_coefficients needs n >= 2, got {n}")
    return {n: AffineForm.var(U), n - 1: AffineForm.var(U, Fraction(-r * n, 2))}


def rr_second_coefficient(n: int, r: int) -> AffineForm:
    """Coefficient of t^{n-2}: A^{n-2}(K_X² + c2(X)) / 12(n-2)!, with A^{n-2}K_X² = r²·n!·u."""
    if n < 2:
        raise ValueError(f"rr_second_coefficient needs n >= 2, got {n}")
    denominator = 12 * math.factorial(n - 2)
    return AffineForm.var(U, Fraction(r * r * math.factorial(n), denominator)) + AffineForm.var(
        C2_PARAMETER, Fraction(1, denominator)
    )


def altroprop_m_lower_bound(n: int, k: int) -> Fraction:
    """Lower bound on m(H, A) when T_X(k) is Ulrich and H = mA + (effective)."""
    return Fraction((n - 2) * k - 2, n + 2)


@dataclass(frozen=True)
class ValueConstraint:
    t0: int
    value: Fraction


@dataclass(frozen=True)
class CoefficientConstraint:
    power: int
    rhs: AffineForm


type RRConstraint = ValueConstraint | CoefficientConstraint


@dataclass(frozen=True)
class ConstrainedPoly:
    """P_A(t) = u·prod(t - root)·(t^m + a t^{m-1} + ...) with u and the cofactor unknown."""

    case_id: HilbertCaseId
    n: int
    k: int
    r: int
    s: int
    known_roots: tuple[int, ...]
    constraints: tuple[RRConstraint, ...]

    def __post_init__(self) -> None:
        if len(set(self.known_roots)) != len(self.known_roots):
            raise ValueError(f"known roots {self.known_roots} are not distinct")
        if not 0 < len(self.known_roots) < self.n:
            raise ValueError(f"{len(self.known_roots)} known roots leave no cofactor in degree {self.n}")

    @property
    def unknown_degree(self) -> int:
        return self.n - len(self.known_roots)

    @property
    def cofactor_names(self) -> tuple[str, ...]:
        return COFACTOR_NAMES[: self.unknown_degree]

    @property
    def root_polynomial(self) -> QPoly:
        return QPoly.from_roots(self.known_roots)

    def polynomial(self, u: Fraction, cofactor: dict[str, Fraction]) -> QPoly:
        monic = QPoly.of([*(cofactor[name] for name in reversed(self.cofactor_names)), 1])
        return (self.root_polynomial * monic).scale(u)


def _case_roots(n: int, k: int, r: int, s: int) -> tuple[int, ...]:
    # h^0(K_X + tA) = 0 for t < r, and for t = js with j <= n-k-1 by the vanishing of H^0(K_X + (n-k-1)H).
    return tuple(sorted(set(range(1, r)) | {j * s for j in range(1, n - k)}))


def build_case(case_id: HilbertCaseId) -> ConstrainedPoly:
    m, k = _CASE_DATA[case_id]
    n = 2 * m
    proportional = proportional_case(m, k)
    r, s = proportional.r, proportional.s
    roots = _case_roots(n, k, r, s)
    unknowns = n - len(roots) + 1

    constraints: list[RRConstraint] = [ValueConstraint(0, Fraction(1)), ValueConstraint(r, Fraction(1))]
    top = rr_top_coefficients(n, r)
    coefficient_forms = [(n - 1, top[n - 1]), (n - 2, rr_second_coefficient(n, r))]
    for power, form in coefficient_forms[: unknowns - len(constraints)]:
        constraints.append(CoefficientConstraint(power, form))
    if len(constraints) != unknowns:
        raise ValueError(f"case {case_id} has {unknowns} unknowns but {len(constraints)} constraints")
    return ConstrainedPoly(case_id=case_id, n=n, k=k, r=r, s=s, known_roots=roots, constraints=tuple(constraints))


@dataclass(frozen=True)
class HilbertRefutation:
    case_id: HilbertCaseId
    u: Fraction
    cofactor: dict[str, Fraction]
    # u·b, u·c, ...: the products the constraints pin down directly.
    scaled_cofactor: dict[str, Fraction]
    a_to_n: Fraction
    contradiction: ContradictionKind
    c2_per_volume: Fraction | None = None
    rev1_identically_zero: bool | None = None


def linear_system(poly: ConstrainedPoly) -> tuple[QMatrix, list[Fraction], list[Fraction]]:
    """Matrix, constant right-hand side and C2_PARAMETER right-hand side over the columns (u, u·a, u·b, ...)."""
    roots = poly.root_polynomial
    m = poly.unknown_degree
    rows: list[list[Fraction]] = []
    constants: list[Fraction] = []
    c2_column: list[Fraction] = []
    for constraint in poly.constraints:
        if isinstance(constraint, ValueConstraint):
            at_t0 = poly_eval(roots, constraint.t0)
            rows.append([at_t0 * Fraction(constraint.t0) ** (m - i) for i in range(m + 1)])
            constants.append(constraint.value)
            c2_column.append(Fraction(0))
        else:
            row = [roots.coefficient(constraint.power - (m - i)) for i in range(m + 1)]
            row[0] -= constraint.rhs.coefficient(U)
            rows.append(row)
            constants.append(constraint.rhs.constant)
            c2_column.append(constraint.rhs.coefficient(C2_PARAMETER))
    return QMatrix.of(rows), constants, c2_column


def _c2_per_volume(n: int, k: int) -> Fraction:
    """A^{n-2}c2(X) / A^n forced by the c2 identity with H = 2A and K_X = -(n/2)A."""
    # The identity is homogeneous in (d, K2, c2); evaluate at A^n = 1 with c2 off and on.
    d = 2**n
    k2 = (n // 2) ** 2 * 2 ** (n - 2)
    kh = -(n // 2) * 2 ** (n - 1)
    g = (kh + (n - 1) * d) // 2 + 1
    without_c2 = c2_identity_check(VarietyParams(n=n, d=d, g=g, k=k, KH=kh, K2=k2, c2=0))
    with_unit_c2 = c2_identity_check(VarietyParams(n=n, d=d, g=g, k=k, KH=kh, K2=k2, c2=2 ** (n - 2)))
    return without_c2 / (without_c2 - with_unit_c2)


def solve_case(case_id: HilbertCaseId) -> HilbertRefutation:
    poly = build_case(case_id)
    matrix, constants, c2_column = linear_system(poly)
    parameters = {C2_PARAMETER: c2_column} if any(c2_column) else {}
    solution = solve_affine(matrix, constants, parameters)
    volume = solution[0] * math.factorial(poly.n)

    c2_per_volume: Fraction | None = None
    rev1_identically_zero: bool | None = None
    if parameters:
        # 67·A^10 + 5·A^8c2 + 1302 = 0 must hold on the whole family before c2 is pinned down.
        rev1 = volume * 67 + AffineForm.var(C2_PARAMETER, 5) + 1302
        rev1_identically_zero = rev1.is_constant() and rev1.constant == 0
        c2_per_volume = _c2_per_volume(poly.n, poly.k)
        volume_equation = volume.substitute(C2_PARAMETER, AffineForm.var("V", c2_per_volume)) - AffineForm.var("V")
        pinned = AffineForm.const(volume_equation.solve_for("V").constant)
        solution = tuple(
            form.substitute(C2_PARAMETER, pinned * c2_per_volume) for form in solution
        )
        volume = solution[0] * math.factorial(poly.n)

    u = solution[0].constant
    scaled = {name: form.constant for name, form in zip(poly.cofactor_names, solution[1:], strict=True)}
    cofactor = {name: value / u for name, value in scaled.items()}
    a_to_n = volume.constant
    if a_to_n <= 0:
        contradiction = ContradictionKind.SIGN
    else:
        assert not is_integral(a_to_n)
        contradiction = ContradictionKind.INTEGRALITY
    logger.debug("Hilbert case %s: u = %s, A^n = %s (%s)", case_id, u, a_to_n, contradiction)
    return HilbertRefutation(
        case_id=case_id,
        u=u,
        cofactor=cofactor,
        scaled_cofactor=scaled,
        a_to_n=a_to_n,
        contradiction=contradiction,
        c2_per_volume=c2_per_volume,
        rev1_identically_zero=rev1_identically_zero,
    )


def root_sum(case_id: HilbertCaseId) -> int:
    return elem_symmetric(build_case(case_id).known_roots, 1)
