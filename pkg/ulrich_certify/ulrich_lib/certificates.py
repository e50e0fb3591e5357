"""Registry of replayable certificates and the runner that builds them."""

from collections.abc import Callable, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
import logging
import math
import time

from opentelemetry.trace import Tracer

from ulrich_lib.curves import (
    CUBIC_EXCEPTION,
    GENERAL_MODULI_K_CAP,
    brill_noether_rho,
    certify_elliptic_product,
    certify_quadric_ulrich,
    cone_case_check,
    existence_k2,
    existence_k3,
    general_moduli_max_k,
    thresholds,
)
from ulrich_lib.diophantine import CONTO_PROOF_BOUND, ContoSolution, feasible_params, solve_632num, solve_conto
from ulrich_lib.hilbert import (
    U,
    ConstrainedPoly,
    HilbertCaseId,
    HilbertRefutation,
    altroprop_m_lower_bound,
    build_case,
    linear_system,
    root_sum,
    rr_top_coefficients,
    solve_case,
)
from ulrich_lib.models import Certificate, CertificationLimits, CheckLog, VarietyParams
from ulrich_lib.picard import (
    PicardClass,
    certify_632,
    certify_k1_candidates,
    decide_effective,
    intersect,
    is_nef,
    parse_picard_class,
    self_int,
)
from ulrich_lib.qexact import (
    AffineForm,
    ParametricSolution,
    QMatrix,
    UniqueSolution,
    elem_symmetric,
    is_integral,
    poly_eval,
    solve_linear,
)
from ulrich_lib.spans import send_certificate_span
from ulrich_lib.ulrich_core import (
    BOU_VALID_MAX_N,
    PROPORTIONAL_CASES,
    ContradictionKind,
    Degenerate,
    ball_quotient_invariants,
    bigbound_k,
    bou_max_k,
    bou_quadratic_positive,
    c2_identity_check,
    c2_twisted_tangent,
    coh_k_upper_bound,
    coh_vanishing_twist,
    curve_k_bound_holds,
    degree_from_genus,
    genus_from_canonical,
    hypersurface_exclude,
    k_from_intersections,
    necessary_conditions,
    noqf4_certify,
    nosc4_certify,
    proportional_case,
    surface_chi_window,
    surface_conditions,
    ulrich_chern,
    ulrich_euler,
)

logger = logging.getLogger(__name__)

ALL = "all"

type CertificateBuilder = Callable[[CertificationLimits], Certificate]


@dataclass(frozen=True)
class CertificateSpec:
    id: str
    anchor: str
    builder: CertificateBuilder


CONTO_EXPECTED = ("(6;2,0,0,0)", "(6;1,1,1,1)", "(7;3,1,1,0)", "(9;3,3,3,2)")
SEXTIC_EXPECTED = (
    "(4;1,1,1,1,1,1)",
    "(5;2,2,2,1,1,1)",
    "(6;3,2,2,2,2,1)",
    "(7;3,3,3,2,2,2)",
    "(8;3,3,3,3,3,3)",
)
GRADO_EXPECTED = ((4, 8, 5),)
# Last degree covered by the exhaustive feasibility table.
GRADO_TABLE_DEGREE = 8


def _known_degree(n: int, g: int, k: int) -> Fraction | None:
    degree = degree_from_genus(n, g, k)
    return None if isinstance(degree, Degenerate) else degree


def _render_conto(solution: ContoSolution) -> str:
    return PicardClass(solution.a, solution.c).render()


def _build_conto(limits: CertificationLimits) -> Certificate:
    log = CheckLog()
    solutions = solve_conto(limits.amax)
    rendered = tuple(_render_conto(s) for s in solutions)
    log.expect(f"solutions up to a={limits.amax}", CONTO_EXPECTED, rendered)
    for solution in solutions:
        name = _render_conto(solution)
        a, c = solution.a, solution.c
        log.expect(f"{name} a^2-6a+4", a * a - 6 * a + 4, sum(x * x for x in c))
        log.holds(f"{name} a >= c1+c2+3", a >= c[0] + c[1] + 3)
    extended_amax = max(limits.extended_amax, limits.amax)
    extended = solve_conto(extended_amax)
    log.expect(f"solutions up to a={extended_amax}", rendered, tuple(_render_conto(s) for s in extended))
    log.holds(f"nothing beyond a={CONTO_PROOF_BOUND}", all(s.a <= CONTO_PROOF_BOUND for s in extended))
    log.witness("solutions", rendered)
    return log.certificate("conto", refutation=False)


def _build_632num(_: CertificationLimits) -> Certificate:
    log = CheckLog()
    solutions = solve_632num()
    classes = [PicardClass(s.a, s.b) for s in solutions]
    expected = tuple(parse_picard_class(text).render() for text in SEXTIC_EXPECTED)
    log.expect("classes", expected, tuple(x.render() for x in classes))
    for x in classes:
        log.expect(f"{x.render()} a^2-sum(b^2)", 10, x.a * x.a - sum(b * b for b in x.b))
        log.expect(f"{x.render()} 3a-sum(b)", 6, 3 * x.a - sum(x.b))
    log.witness("class count", len(classes))
    return log.certificate("632num", refutation=False)


def _build_632(_: CertificationLimits) -> Certificate:
    return certify_632()


def _del_pezzo_quintic(log: CheckLog) -> None:
    """The numerical data of (S5, -2K) against every necessary condition for k = 1."""
    canonical = PicardClass.canonical(4)
    h = -2 * canonical
    d, kh, k2 = self_int(h), intersect(h, canonical), self_int(canonical)
    g = genus_from_canonical(2, d, kh)
    # Euler number of the plane blown up at 4 points.
    c2, chi = 7, 1
    log.expect("S5 (d, KH, K2)", (20, -10, 5), (d, kh, k2))
    log.expect("S5 sectional genus", 6, g)
    log.expect("S5 Noether", 12 * chi, k2 + c2)
    log.expect("S5 degree from genus", d, _known_degree(2, g, 1))
    log.expect("S5 k from KH", 1, k_from_intersections(2, d, kh))

    params = VarietyParams(n=2, d=d, g=g, k=1, KH=kh, K2=k2, c2=c2, chi=chi)
    for check in necessary_conditions(params):
        log.holds(f"S5 {check.name}", check.passed)
    c1h, c2h = ulrich_chern(params, 2)
    log.expect("S5 c1(T_X(1))H", 50, c1h)
    log.expect("S5 c2(T_X(1))", c2_twisted_tangent(params), c2h)
    log.expect("S5 chi(T_X(1)) = rd", 2 * d, ulrich_euler(2, d, 2, 0))
    for name, residual in surface_conditions(d, g, 1, chi, k2, kh):
        log.expect(f"S5 {name} residual", 0, residual)

    # a(X, H): least l with lH - K effective.
    a_xh = next(t for t in range(-3, 4) if decide_effective(t * h - canonical).effective)
    log.expect("S5 a(X,H)", 0, a_xh)
    log.holds("S5 k <= cohomological bound", 1 <= coh_k_upper_bound(2, a_xh))
    twist = coh_vanishing_twist(2, 1)
    log.expect(f"S5 h0({twist}H-K) = 0", False, decide_effective(twist * h - canonical).effective)


def _build_k1_surface(limits: CertificationLimits) -> Certificate:
    numeric = CheckLog()
    _del_pezzo_quintic(numeric)
    return Certificate.merge(
        "k1-surface",
        [certify_k1_candidates(limits.amax), numeric.certificate("k1-surface", refutation=False)],
        refutation=False,
    )


def _hilbert_common(log: CheckLog, case_id: HilbertCaseId) -> tuple[ConstrainedPoly, HilbertRefutation]:
    poly = build_case(case_id)
    result = solve_case(case_id)
    p = poly.polynomial(result.u, result.cofactor)
    log.expect("P(0)", 1, poly_eval(p, 0))
    log.expect(f"P({poly.r})", 1, poly_eval(p, poly.r))
    log.holds("P vanishes on the known roots", all(poly_eval(p, t) == 0 for t in poly.known_roots))
    top = rr_top_coefficients(poly.n, poly.r)
    log.expect(f"t^{poly.n - 1} coefficient", top[poly.n - 1].at({U: result.u}), p.coefficient(poly.n - 1))
    log.witness("roots", poly.known_roots)
    log.witness("u", result.u)
    log.witness(f"A^{poly.n}", result.a_to_n)
    log.witness("contradiction", result.contradiction)
    log.witness("m lower bound", altroprop_m_lower_bound(poly.n, poly.k))
    return poly, result


def _build_hilbert_3d(_: CertificationLimits) -> Certificate:
    log = CheckLog()
    poly, result = _hilbert_common(log, HilbertCaseId.CASE_3D)
    log.expect("(r, s)", (4, 5), (poly.r, poly.s))
    log.expect("root sum", 36, root_sum(HilbertCaseId.CASE_3D))
    log.expect("a", 20, result.cofactor["a"])
    log.expect("u*b", Fraction(1, 4500), result.scaled_cofactor["b"])
    log.expect("R(4)", -396, poly_eval(poly.root_polynomial, 4))
    log.expect("-38016*u", 1 + Fraction(396, 4500), -38016 * result.u)
    matrix, constants, _ = linear_system(poly)
    outcome = solve_linear(matrix, constants)
    log.holds("unique solution", isinstance(outcome, UniqueSolution) and outcome.values[0] == result.u)
    log.holds("u < 0", result.u < 0)
    log.expect("contradiction", ContradictionKind.SIGN, result.contradiction)
    return log.certificate("hilbert-3d", refutation=True)


def _build_hilbert_4d(_: CertificationLimits) -> Certificate:
    log = CheckLog()
    poly, result = _hilbert_common(log, HilbertCaseId.CASE_4D)
    log.expect("(r, s)", (5, 2), (poly.r, poly.s))
    log.expect("root sum", 34, root_sum(HilbertCaseId.CASE_4D))
    log.expect("e2(roots)", 463, elem_symmetric(poly.known_roots, 2))
    log.expect("R(5)", -360, poly_eval(poly.root_polynomial, 5))
    log.expect("a", 9, result.cofactor["a"])
    log.expect("u*c", Fraction(-1, 11520), result.scaled_cofactor["c"])
    log.expect("67A^10 + 5A^8c2 + 1302 vanishes on the family", True, result.rev1_identically_zero)
    log.expect("A^8c2 / A^10", 115, result.c2_per_volume)
    log.expect("A^10", Fraction(-217, 107), result.a_to_n)

    # Keep A^8c2 as an unknown: one free column whose value pins the family.
    matrix, constants, c2_column = linear_system(poly)
    augmented = QMatrix.of([[*row, -c] for row, c in zip(matrix.rows, c2_column, strict=True)])
    outcome = solve_linear(augmented, constants)
    log.holds(
        "one-parameter family in A^8c2",
        isinstance(outcome, ParametricSolution) and outcome.free_columns == (matrix.col_count,),
    )
    if isinstance(outcome, ParametricSolution) and result.c2_per_volume is not None:
        log.expect("u on the family", result.u, outcome.at([result.a_to_n * result.c2_per_volume])[0])
    log.expect("contradiction", ContradictionKind.SIGN, result.contradiction)
    return log.certificate("hilbert-4d", refutation=True)


def _build_hilbert_4e(_: CertificationLimits) -> Certificate:
    log = CheckLog()
    poly, result = _hilbert_common(log, HilbertCaseId.CASE_4E)
    log.expect("(r, s)", (5, 6), (poly.r, poly.s))
    log.expect("root sum", 70, root_sum(HilbertCaseId.CASE_4E))
    log.expect("a", 45, result.cofactor["a"])
    log.expect("u*b", Fraction(1, 746496), result.scaled_cofactor["b"])
    log.expect("R(5)", 41496, poly_eval(poly.root_polynomial, 5))
    log.expect("A^10", Fraction(5875, 17784), result.a_to_n)
    log.holds("0 < A^10 < 1", 0 < result.a_to_n < 1)
    log.holds("A^10 not integral", not is_integral(result.a_to_n))
    log.expect("contradiction", ContradictionKind.INTEGRALITY, result.contradiction)
    return log.certificate("hilbert-4e", refutation=True)


def _build_noqf4(_: CertificationLimits) -> Certificate:
    log = CheckLog()
    certificate = noqf4_certify()
    e, b = AffineForm.var("e"), AffineForm.var("b")
    log.expect("d", b * 16 + 64, certificate.identity("d"))
    log.expect("K_XH^3", e * 4 - b * 28 - 104, certificate.identity("K_XH^3"))
    log.expect("b(e)", (e * 3 - 46) / 13, certificate.identity("b(e)"))
    log.expect("d(e)", (e * 48 + 96) / 13, certificate.identity("d(e)"))
    log.expect("13d - 48(e+2)", 0, certificate.identity("13d - 48(e+2)"))
    e_min, e_max = certificate.witness("e_min"), certificate.witness("e_max")
    log.expect("e range", (-1, 5), (e_min, e_max))
    log.holds("13 divides no e+2 in range", all((x + 2) % 13 for x in range(int(e_min), int(e_max) + 1)))
    log.expect("integral d count", 0, certificate.witness("integral_e_count"))
    log.expect("contradiction", ContradictionKind.INTERVAL_EMPTY, certificate.contradiction)
    for name, form in certificate.identities:
        log.witness(name, form)
    return log.certificate("noqf4", refutation=True)


def _build_nosc4(_: CertificationLimits) -> Certificate:
    log = CheckLog()
    certificate = nosc4_certify()
    d = AffineForm.var("d")
    log.expect("K_B^2", 7 - d * Fraction(7, 48), certificate.identity("K_B^2"))
    log.expect("K_Bc_1", 9 - d * Fraction(5, 48), certificate.identity("K_Bc_1"))
    log.expect("mu(T_X)", d / 6, certificate.identity("mu(T_X)"))
    log.expect("mu(pi^*T_B)", 12 - d / 3, certificate.identity("mu(pi^*T_B)"))
    log.expect("d divisor", 48, certificate.witness("d_divisor"))
    log.expect("d lower bound", 48, certificate.witness("d_lower"))
    log.expect("d upper bound", 24, certificate.witness("d_upper"))
    log.expect("bounds disjoint", True, certificate.witness("disjoint"))
    log.expect("contradiction", ContradictionKind.INTEGRALITY, certificate.contradiction)
    for name, form in certificate.identities:
        log.witness(name, form)
    return log.certificate("nosc4", refutation=True)


def _build_bound(_: CertificationLimits) -> Certificate:
    log = CheckLog()
    for n in range(2, BOU_VALID_MAX_N + 1):
        kmax, valid = bou_max_k(n)
        log.holds(f"n={n} kmax={kmax} <= n+1", valid and kmax <= n + 1)
        log.holds(f"n={n} quadratic positive past kmax", bou_quadratic_positive(n, kmax + 1))
        log.holds(f"n={n} quadratic not positive at kmax", not bou_quadratic_positive(n, kmax))
        log.holds(f"n={n} hypersurface excluded", hypersurface_exclude(n).contradiction)
    log.expect("surface kmax", 3, bou_max_k(2)[0])
    log.expect(f"n={BOU_VALID_MAX_N + 1} outside the valid range", False, bou_max_k(BOU_VALID_MAX_N + 1)[1])
    log.holds("n=1 hypersurface excluded", hypersurface_exclude(1).contradiction)
    log.witness("n=2 degree bound at d=20", bigbound_k(2, 20))
    return log.certificate("bound", refutation=False)


def _build_quadric_curves(limits: CertificationLimits) -> Certificate:
    parts = [certify_quadric_ulrich(c) for c in range(1, limits.max_c + 1)]
    return Certificate.merge("quadric-curves", parts, refutation=False)


def _build_elliptic_product(limits: CertificationLimits) -> Certificate:
    parts = [certify_elliptic_product(k) for k in range(3, limits.max_odd_k + 1, 2)]
    return Certificate.merge("elliptic-product", parts, refutation=False)


def _build_grado(limits: CertificationLimits) -> Certificate:
    log = CheckLog()
    found = feasible_params(limits.grado_d_max)
    for n, d, g in found:
        log.expect(f"(n,d,g)=({n},{d},{g}) degree formula", d, _known_degree(n, g, 1))
    within_table = tuple(x for x in found if x[1] <= GRADO_TABLE_DEGREE)
    expected = GRADO_EXPECTED if limits.grado_d_max >= GRADO_TABLE_DEGREE else ()
    log.expect(f"(n,d,g) with d <= {min(limits.grado_d_max, GRADO_TABLE_DEGREE)}", expected, within_table)
    log.witness("feasible", found)
    return log.certificate("grado", refutation=False)


def _build_surfaces(_: CertificationLimits) -> Certificate:
    log = CheckLog()
    log.holds(
        "chi window empty for k >= 4",
        all(
            surface_chi_window(d, k)[0] > surface_chi_window(d, k)[1] for k in range(4, 13) for d in range(1, 101)
        ),
    )
    log.holds(
        "chi window width",
        all(
            surface_chi_window(d, k)[0] - surface_chi_window(d, k)[1] == Fraction(d * k * (k - 3), 40)
            for k in range(13)
            for d in range(1, 41)
        ),
    )
    k2, chi = ball_quotient_invariants(4)
    log.expect("k=3 window at d=4", (1, 1), surface_chi_window(4, 3))
    log.expect("k=3 ball quotient (K2, chi) at d=4", (9, 1), (k2, chi))

    # (d, g, k, chi, K2, KH) of the plane with O(2), the ball quotient at d = 4, and (S5, -2K).
    examples = {
        "P2": (4, 0, 0, 1, 9, -6),
        "ball quotient": (4, 6, 3, 1, 9, 6),
        "S5": (20, 6, 1, 1, 5, -10),
    }
    for label, (d, g, k, chi_value, k2_value, kh) in examples.items():
        for name, residual in surface_conditions(d, g, k, chi_value, k2_value, kh):
            log.expect(f"{label} {name} residual", 0, residual)
    plane = VarietyParams(n=2, d=4, g=0, k=0, KH=-6, K2=9, c2=3, chi=1)
    log.expect("P2 c2 identity", 0, c2_identity_check(plane))
    for check in necessary_conditions(plane):
        log.holds(f"P2 {check.name}", check.passed)
    log.holds("S5 -K nef", is_nef(-PicardClass.canonical(4)))
    return log.certificate("surfaces", refutation=False)


def _fundamental_index(n: int, k: int) -> int:
    """Fundamental r of r(n+2) = n(n+1-2k)s."""
    right = n * (n + 1 - 2 * k)
    return right // math.gcd(n + 2, right)


# (r, s) per proportional case, and which ones survive the index bound r <= 2m-1.
PROPORTIONAL_EXPECTED: dict[str, tuple[int, int]] = {
    "1a": (2, 1),
    "1b": (2, 3),
    "2a": (15, 4),
    "2b": (9, 4),
    "2c": (3, 4),
    "3a": (28, 5),
    "3b": (4, 1),
    "3c": (12, 5),
    "3d": (4, 5),
    "4a": (15, 2),
    "4b": (35, 6),
    "4c": (25, 6),
    "4d": (5, 2),
    "4e": (5, 6),
}
ADMISSIBLE_CASES = ("1a", "1b", "2c", "3b", "3d", "4d", "4e")


def _build_prop_divisibility(_: CertificationLimits) -> Certificate:
    log = CheckLog()
    admissible: list[str] = []
    for label, m, k in PROPORTIONAL_CASES:
        case = proportional_case(m, k)
        log.expect(f"({label}) (r, s)", PROPORTIONAL_EXPECTED[label], (case.r, case.s))
        log.holds(f"({label}) primitive", case.primitive)
        if case.admissible:
            admissible.append(label)
    log.expect("admissible cases", ADMISSIBLE_CASES, tuple(admissible))
    for n in range(3, 12, 2):
        for k in range(1, (n + 1) // 2):
            r = _fundamental_index(n, k)
            log.holds(f"n={n} k={k} n divides r={r}", r % n == 0)
    return log.certificate("prop-divisibility", refutation=False)


def _build_small_k_curves(_: CertificationLimits) -> Certificate:
    log = CheckLog()
    log.holds("k=2 exists iff genus bound", all(existence_k2(g) == curve_k_bound_holds(g, 2) for g in range(31)))
    log.expect("k=3 genera up to 15", (9, 11, 13, 15), tuple(g for g in range(16) if existence_k3(g)))
    log.expect("k=3 degree at g=9", 12, _known_degree(1, 9, 3))
    log.holds("general moduli k <= 4", all(general_moduli_max_k(g) <= GENERAL_MODULI_K_CAP for g in range(2, 301)))
    log.expect("general moduli k at g=100", GENERAL_MODULI_K_CAP, general_moduli_max_k(100))
    log.holds(
        "rho(g,3,d) = 4d - 3g - 12",
        all(brill_noether_rho(g, 3, d) == 4 * d - 3 * g - 12 for g in range(21) for d in range(1, 21)),
    )
    log.expect("cone case b values", (1,), tuple(b for b in range(1, 51) if cone_case_check(b)))
    log.holds("cubic exception", thresholds(CUBIC_EXCEPTION[0]).cubic_exception)
    log.expect("degree bound on a sextic", Fraction(5, 2), bigbound_k(1, 6))
    return log.certificate("small-k-curves", refutation=False)


CERTIFICATES: dict[str, CertificateSpec] = {
    spec.id: spec
    for spec in (
        CertificateSpec("conto", "four-square equation behind the k = 1 polarizations", _build_conto),
        CertificateSpec("632num", "degree 6 genus 3 classes on the cubic surface", _build_632num),
        CertificateSpec("632", "3K + 2X not effective for each sextic class", _build_632),
        CertificateSpec("k1-surface", "k = 1 surfaces: the degree 5 Del Pezzo with -2K", _build_k1_surface),
        CertificateSpec("hilbert-3d", "proportional case (3d): negative volume", _build_hilbert_3d),
        CertificateSpec("hilbert-4d", "proportional case (4d): negative volume", _build_hilbert_4d),
        CertificateSpec("hilbert-4e", "proportional case (4e): non-integral volume", _build_hilbert_4e),
        CertificateSpec("noqf4", "no quadric fibration over a curve for n = 4, k = 2", _build_noqf4),
        CertificateSpec("nosc4", "no linear plane bundle over a surface for n = 4, k = 2", _build_nosc4),
        CertificateSpec("bound", "k <= n + 1 for 2 <= n <= 12", _build_bound),
        CertificateSpec("quadric-curves", "T_X(2c) Ulrich on curves of type (c+1, 2c+2)", _build_quadric_curves),
        CertificateSpec("elliptic-product", "T_X(k) Ulrich for odd k on E x P1", _build_elliptic_product),
        CertificateSpec("grado", "feasible (n, d, g) for k = 1 in low degree", _build_grado),
        CertificateSpec("surfaces", "surface conditions and the chi window", _build_surfaces),
        CertificateSpec("prop-divisibility", "proportional cases excluded by divisibility", _build_prop_divisibility),
        CertificateSpec("small-k-curves", "curves with k = 2, 3 and general moduli", _build_small_k_curves),
    )
}
CERTIFICATE_IDS = tuple(CERTIFICATES)


def expand_ids(certificate_ids: Sequence[str]) -> list[str]:
    """Resolve `all` and drop repeats, keeping first occurrences."""
    expanded: list[str] = []
    for certificate_id in certificate_ids:
        if certificate_id != ALL and certificate_id not in CERTIFICATES:
            raise ValueError(f"unknown certificate id {certificate_id!r}")
        for resolved in CERTIFICATE_IDS if certificate_id == ALL else (certificate_id,):
            if resolved not in expanded:
                expanded.append(resolved)
    return expanded


class CertificateRunner:
    def __init__(self, tracer: Tracer, limits: CertificationLimits) -> None:
        self.tracer = tracer
        self.limits = limits

    def run(self, certificate_id: str) -> Certificate:
        spec = CERTIFICATES.get(certificate_id)
        if spec is None:
            raise ValueError(f"unknown certificate id {certificate_id!r}")
        start_time_ns = time.time_ns()
        try:
            certificate = spec.builder(self.limits)
        except Exception as exc:
            logger.exception("Certificate %s failed to build", certificate_id)
            certificate = Certificate.from_error(certificate_id, exc)
        send_certificate_span(self.tracer, certificate, start_time_ns, time.time_ns())
        logger.info("Certificate %s: %s", certificate_id, certificate.status)
        return certificate

    def run_all(self, certificate_ids: Sequence[str], jobs: int = 1) -> list[Certificate]:
        """Certificates in the order of `certificate_ids`, whatever the number of worker threads."""
        if jobs <= 1:
            return [self.run(certificate_id) for certificate_id in certificate_ids]
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(self.run, certificate_ids))
