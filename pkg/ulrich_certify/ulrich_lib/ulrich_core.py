"""Numerical necessary conditions for T_X(k) to be Ulrich, and the closed-form fibration contradictions."""

from dataclasses import dataclass
from enum import StrEnum
from fractions import Fraction
import logging
import math

from ulrich_lib.models import VarietyParams
from ulrich_lib.qexact import AffineForm, QMatrix, Scalar, is_integral, solve_affine

logger = logging.getLogger(__name__)

# Largest dimension for which eliminating c2 between the Bogomolov and c2 identities keeps the sign.
BOU_VALID_MAX_N = 12


@dataclass(frozen=True)
class Degenerate:
    reason: str


def degree_from_genus(n: int, g: int, k: int) -> Fraction | Degenerate:
    if n * k == 1:
        return Degenerate(reason="nk = 1 forces n = k = g = 1, where T_X(1) = O_X(1) is not Ulrich")
    return Fraction((n + 2) * (g - 1), n * k - 1)


def k_from_intersections(n: int, d: int, kh: Scalar) -> Fraction:
    if n < 1 or d < 1:
        raise ValueError(f"k_from_intersections needs n >= 1 and d >= 1, got n={n}, d={d}")
    return Fraction(n + 1, 2) + Fraction(n + 2, 2 * n * d) * kh


def canonical_degree(n: int, k: int, d: Scalar) -> Fraction:
    """K_X·H^{n-1} forced by the twist k."""
    return Fraction(n * (2 * k - n - 1), n + 2) * d


def genus_from_canonical(n: int, d: int, kh: int) -> int:
    twice = kh + (n - 1) * d
    if twice % 2:
        raise ValueError(f"KH={kh} with n={n}, d={d} gives a non-integral sectional genus")
    return twice // 2 + 1


def ulrich_chern(params: VarietyParams, r: int) -> tuple[Fraction, Fraction | None]:
    """c1(E)·H^{n-1} and c2(E)·H^{n-2} for a rank r Ulrich bundle E.

    The second class needs c1(E) itself; it is taken proportional to c1(T_X(k)) = -K_X + nkH, so that r = n
    is the twisted tangent bundle. It is absent for curves or when KH, K2, c2 are not all known.
    """
    n, d, k = params.n, params.d, params.k
    c1h = Fraction(r * (d + params.g - 1))
    if n < 2 or None in (params.KH, params.K2, params.c2):
        return c1h, None
    kh, k2, c2 = params.require("KH", "K2", "c2")
    scale = Fraction(r, n)
    c1_squared = scale**2 * (k2 - 2 * n * k * kh + n * n * k * k * d)
    c1_dot_k = scale * (-k2 + n * k * kh)
    c2h = (c1_squared - c1_dot_k) / 2 + Fraction(r, 12) * (k2 + c2 - Fraction(3 * n * n + 5 * n + 2, 2) * d)
    return c1h, c2h


def c2_twisted_tangent(params: VarietyParams) -> int:
    """c2(T_X(k))·H^{n-2} expanded directly from the Chern classes of T_X."""
    (kh, c2) = params.require("KH", "c2")
    n, k = params.n, params.k
    return c2 - k * (n - 1) * kh + math.comb(n, 2) * k * k * params.d


def ulrich_euler(n: int, d: int, r: int, m: int) -> Fraction:
    return Fraction(r * d, math.factorial(n)) * math.prod(m + i for i in range(1, n + 1))


def c2_identity_check(params: VarietyParams) -> Fraction:
    if params.n < 2:
        raise ValueError("the c2 identity needs n >= 2")
    k2, c2 = params.require("K2", "c2")
    n, k = params.n, params.k
    leading = 12 * k * n - 12 * k * k + 12 * k - 3 * n * n - 5 * n - 2
    return Fraction(leading * n * params.d + 2 * (n + 12) * k2 + 2 * (n - 12) * c2)


def _bou_quadratic(n: int, k: int) -> int:
    return 4 * n * k * k - 4 * n * (n + 1) * k - 3 * n * n - 7 * n - 4


def bou_max_k(n: int) -> tuple[int, bool]:
    if n < 2:
        raise ValueError(f"bou_max_k needs n >= 2, got {n}")
    # Larger root of the quadratic is (n(n+1) + sqrt(disc)) / 2n.
    disc = n * n * (n + 1) ** 2 + n * (3 * n * n + 7 * n + 4)
    kmax = (n * (n + 1) + math.isqrt(disc)) // (2 * n)
    assert _bou_quadratic(n, kmax) <= 0 < _bou_quadratic(n, kmax + 1)
    return kmax, n <= BOU_VALID_MAX_N


def bou_quadratic_positive(n: int, k: int) -> bool:
    return _bou_quadratic(n, k) > 0


def bigbound_k(n: int, d: int) -> Fraction:
    if n < 1 or d < 1:
        raise ValueError(f"bigbound_k needs n >= 1 and d >= 1, got n={n}, d={d}")
    return Fraction((n + 2) * (d - 4) + 4, 4 * n)


def surface_conditions(d: int, g: int, k: int, chi: int, k2: int, hk: int) -> list[tuple[str, Fraction]]:
    return [
        ("degree", d - Fraction(4 * (g - 1), 2 * k - 1)),
        ("canonical-degree", hk - Fraction((2 * k - 3) * d, 2)),
        ("canonical-square", k2 - 5 * chi - Fraction((k - 1) * (k - 2) * d, 2)),
    ]


def surface_chi_window(d: int, k: int) -> tuple[Fraction, Fraction]:
    if d < 1:
        raise ValueError(f"surface_chi_window needs d >= 1, got {d}")
    return Fraction((k * k - 3 * k + 2) * d, 8), Fraction((2 * k * k - 6 * k + 5) * d, 20)


def ball_quotient_invariants(d: int) -> tuple[Fraction, Fraction]:
    """(K_X², χ(O_X)) forced on an Ulrich surface with k = 3."""
    return Fraction(9 * d, 4), Fraction(d, 4)


@dataclass(frozen=True)
class HypersurfaceWitness:
    """The vanishing condition rewritten as `form <= 0` over `variable >= lower_bound`."""

    n: int
    variable: str
    form: AffineForm
    lower_bound: int
    minimum: Fraction

    @property
    def contradiction(self) -> bool:
        return self.minimum > 0


def hypersurface_exclude(n: int) -> HypersurfaceWitness:
    if n < 1:
        raise ValueError(f"hypersurface_exclude needs n >= 1, got {n}")
    if n == 1:
        d = AffineForm.var("d")
        k = (d - 3) * Fraction(3, 2) + 1
        form = -d + 2 + k + 1
        variable, lower_bound = "d", 2
    else:
        k = AffineForm.var("k")
        d = (k * n - 1) * Fraction(2, n + 2) + 3
        # Cleared of the denominator n + 2 this reads k(n-2) + n <= 0.
        form = (d - k - 3 + 1) * (n + 2)
        variable, lower_bound = "k", 0
    assert form.coefficient(variable) >= 0
    return HypersurfaceWitness(
        n=n, variable=variable, form=form, lower_bound=lower_bound, minimum=form.at({variable: lower_bound})
    )


@dataclass(frozen=True)
class ProportionalCase:
    """Fundamental solution of (m+1)r = m(2m-2k+1)s with s > 0; every other solution is a multiple."""

    m: int
    k: int
    r: int
    s: int
    primitive: bool

    @property
    def admissible(self) -> bool:
        """Whether the Fano index r can lie in [1, 2m-1]."""
        return 1 <= self.r <= 2 * self.m - 1


def proportional_case(m: int, k: int) -> ProportionalCase:
    if m < 1:
        raise ValueError(f"proportional_case needs m >= 1, got {m}")
    left, right = m + 1, m * (2 * m - 2 * k + 1)
    common = math.gcd(left, right)
    r, s = right // common, left // common
    return ProportionalCase(m=m, k=k, r=r, s=s, primitive=math.gcd(r, s) == 1)


# (case label, m, k) for the even dimensions n = 2m with k below (n+1)/2.
PROPORTIONAL_CASES: tuple[tuple[str, int, int], ...] = (
    ("1a", 2, 1),
    ("1b", 2, 2),
    ("2a", 3, 1),
    ("2b", 3, 2),
    ("2c", 3, 3),
    ("3a", 4, 1),
    ("3b", 4, 2),
    ("3c", 4, 3),
    ("3d", 4, 4),
    ("4a", 5, 1),
    ("4b", 5, 2),
    ("4c", 5, 3),
    ("4d", 5, 4),
    ("4e", 5, 5),
)


def coh_k_upper_bound(n: int, a_xh: int) -> Fraction:
    """Upper bound on k given a(X,H) = min{l : lH - K_X effective}, which the caller supplies."""
    return Fraction(a_xh * (n + 2), 2 * n) + Fraction(n + 1, 2)


def coh_vanishing_twist(n: int, k: int) -> int:
    """The l with H^0(lH - K_X) = 0 forced by the twist k."""
    return math.ceil(Fraction(n * (2 * k - n - 1), n + 2)) - 1


def bogomolov_residual(params: VarietyParams) -> Fraction:
    if params.n < 2:
        raise ValueError("the Bogomolov inequality needs n >= 2")
    k2, c2 = params.require("K2", "c2")
    return Fraction(2 * params.n, params.n - 1) * c2 - k2


def hodge_index_residual(params: VarietyParams) -> int:
    (kh, k2) = params.require("KH", "K2")
    return kh * kh - params.d * k2


def curve_k_bound_holds(g: int, k: int) -> bool:
    """k <= (sqrt(8g+1) - 1) / 2 in exact integer form."""
    if k < 0:
        return True
    return 8 * g + 1 >= 0 and (2 * k + 1) ** 2 <= 8 * g + 1


@dataclass(frozen=True)
class NamedCheck:
    name: str
    passed: bool
    detail: str


def _check_k_nonnegative(params: VarietyParams) -> NamedCheck:
    exceptional_line = (params.n, params.d, params.g, params.k) == (1, 1, 0, -2)
    return NamedCheck("k-nonnegative", params.k >= 0 or exceptional_line, f"k={params.k}")


def necessary_conditions(params: VarietyParams) -> list[NamedCheck]:
    """Every numerical necessary condition that applies to the given invariants."""
    n, d, g, k = params.n, params.d, params.g, params.k
    checks: list[NamedCheck] = []

    degree = degree_from_genus(n, g, k)
    if isinstance(degree, Degenerate):
        checks.append(NamedCheck("degree-formula", False, degree.reason))
    else:
        checks.append(NamedCheck("degree-formula", degree == d, f"(n+2)(g-1)/(nk-1) = {degree}"))

    checks.append(_check_k_nonnegative(params))
    checks.append(NamedCheck("degree-bound", k <= bigbound_k(n, d), f"k <= {bigbound_k(n, d)}"))
    if 2 <= n <= BOU_VALID_MAX_N:
        kmax, _ = bou_max_k(n)
        checks.append(NamedCheck("dimension-bound", k <= kmax, f"k <= {kmax}"))
    if n == 1:
        checks.append(NamedCheck("curve-genus-bound", curve_k_bound_holds(g, k), f"(2k+1)^2 <= {8 * g + 1}"))

    if params.KH is not None:
        k_value = k_from_intersections(n, d, params.KH)
        checks.append(NamedCheck("k-formula", k_value == k, f"k from KH = {k_value}"))
    if n >= 2 and params.K2 is not None and params.c2 is not None:
        residual = c2_identity_check(params)
        checks.append(NamedCheck("c2-identity", residual == 0, f"residual {residual}"))
        bogomolov = bogomolov_residual(params)
        checks.append(NamedCheck("bogomolov", bogomolov >= 0, f"2n/(n-1) c2 - K2 = {bogomolov}"))
    if params.KH is not None and params.K2 is not None:
        hodge = hodge_index_residual(params)
        checks.append(NamedCheck("hodge-index", hodge >= 0, f"KH^2 - d K2 = {hodge}"))

    if n == 2:
        checks.append(NamedCheck("surface-k-range", 0 <= k <= 3, f"k={k}"))
        if params.KH is not None and params.K2 is not None and params.chi is not None:
            for name, residual in surface_conditions(d, g, k, params.chi, params.K2, params.KH):
                checks.append(NamedCheck(f"surface-{name}", residual == 0, f"residual {residual}"))
            lower, upper = surface_chi_window(d, k)
            checks.append(NamedCheck("surface-chi-window", lower <= params.chi <= upper, f"[{lower}, {upper}]"))
    logger.debug("Evaluated %d necessary conditions for %s", len(checks), params)
    return checks


class ContradictionKind(StrEnum):
    SIGN = "sign"
    INTEGRALITY = "integrality"
    DIVISIBILITY = "divisibility"
    INTERVAL_EMPTY = "interval-empty"


@dataclass(frozen=True)
class FibrationCertificate:
    certificate_id: str
    identities: tuple[tuple[str, AffineForm], ...]
    contradiction: ContradictionKind
    witnesses: tuple[tuple[str, Fraction | int | bool], ...]

    def identity(self, name: str) -> AffineForm:
        return dict(self.identities)[name]

    def witness(self, name: str) -> Fraction | int | bool:
        return dict(self.witnesses)[name]


# Rows give the coefficients of K^i H^{4-i}, i = 0..4, in K^j (K+2H)^{4-j}, j = 0..4.
_QUADRIC_FIBRATION_ROWS = tuple(
    tuple(math.comb(4 - j, 4 - i) * 2 ** (4 - i) if i >= j else 0 for i in range(5)) for j in range(5)
)


def _quadric_fibration_rhs(j: int) -> AffineForm:
    """K^j (K+2H)^{4-j} on a quadric fibration over the line, affine in e and b."""
    e, b = AffineForm.var("e"), AffineForm.var("b")
    if j == 0:
        return 2 * e - b
    return (-3) ** j * 2 * e + Fraction(-3) ** (j - 1) * (-4 * j + 2 * j * e + (3 - 2 * j) * b)


def noqf4_certify() -> FibrationCertificate:
    """A fourfold with T_X(2) Ulrich is not a quadric fibration over a curve via K_X + 2H."""
    rhs = [_quadric_fibration_rhs(j) for j in range(5)]
    solution = solve_affine(
        QMatrix.of(_QUADRIC_FIBRATION_ROWS),
        [form.constant for form in rhs],
        {name: [form.coefficient(name) for form in rhs] for name in ("b", "e")},
    )
    d, kh3 = solution[0], solution[1]
    # The twist k = 2 forces K_X H^3 = -2d/3.
    b_in_e = (kh3 - d * canonical_degree(4, 2, 1)).solve_for("b")
    d_in_e = d.substitute("b", b_in_e)

    # a_i <= 1 gives e <= 5; d >= 1 bounds e from below.
    e_max = 5
    assert d_in_e.coefficient("e") > 0
    e_min = math.ceil((1 - d_in_e.constant) / d_in_e.coefficient("e"))
    integral_e = [e for e in range(e_min, e_max + 1) if is_integral(d_in_e.at({"e": e}))]
    logger.debug("Quadric fibration: d = %s over e in [%d, %d]", d_in_e.render(), e_min, e_max)
    return FibrationCertificate(
        certificate_id="noqf4",
        identities=(
            ("d", d),
            ("K_XH^3", kh3),
            ("b(e)", b_in_e),
            ("d(e)", d_in_e),
            ("13d - 48(e+2)", d_in_e * 13 - (AffineForm.var("e") + 2) * 48),
        ),
        contradiction=ContradictionKind.INTERVAL_EMPTY,
        witnesses=(
            ("e_min", e_min),
            ("e_max", e_max),
            ("integral_e_count", len(integral_e)),
        ),
    )


# Unknowns (K_B², K_B·c1(F), c1(F)², c2(F), χ(O_S)) of a P²-bundle X = P(F) over a surface B.
PLANE_BUNDLE_UNKNOWNS = ("K_B^2", "K_Bc_1", "c_1^2", "c_2", "chi(O_S)")

_PLANE_BUNDLE_ROWS: tuple[tuple[Fraction, ...], ...] = tuple(
    tuple(Fraction(x) for x in row)
    for row in (
        (-6, 4, -6, 16, 0),
        (0, 1, -1, 2, 2),
        (1, 0, 1, -3, 0),
        (3, 0, 1, -2, 0),
        (Fraction(9, 4), -1, Fraction(7, 4), -5, -1),
    )
)
_PLANE_BUNDLE_CONSTANTS = (0, 8, 1, 30, -4)
_PLANE_BUNDLE_IN_D = (-1, 0, 0, 0, Fraction(-1, 6))


def nosc4_certify() -> FibrationCertificate:
    """A fourfold with T_X(2) Ulrich is not a linear P²-bundle over a surface via K_X + 2H."""
    solution = solve_affine(QMatrix(_PLANE_BUNDLE_ROWS), _PLANE_BUNDLE_CONSTANTS, {"d": _PLANE_BUNDLE_IN_D})
    kb2, kbc1 = solution[0], solution[1]

    mu_tangent = AffineForm.var("d", -canonical_degree(4, 2, 1) / 4)
    mu_base = kb2 * 3 - kbc1
    # Semistability of T_X: mu_tangent <= mu_base.
    d_upper = (mu_base - mu_tangent).solve_for("d").constant

    # K_B² is an integer, so the denominator of its d-coefficient divides d.
    modulus = kb2.coefficient("d").denominator
    d_lower = modulus
    logger.debug("Plane bundle: K_B^2 = %s, d <= %s, %d | d", kb2.render(), d_upper, modulus)
    return FibrationCertificate(
        certificate_id="nosc4",
        identities=(
            *zip(PLANE_BUNDLE_UNKNOWNS, solution, strict=True),
            ("mu(T_X)", mu_tangent),
            ("mu(pi^*T_B)", mu_base),
        ),
        contradiction=ContradictionKind.INTEGRALITY,
        witnesses=(
            ("d_divisor", modulus),
            ("d_lower", d_lower),
            ("d_upper", d_upper),
            ("disjoint", d_lower > d_upper),
        ),
    )
