from fractions import Fraction

import pytest

from ulrich_lib.models import VarietyParams
from ulrich_lib.qexact import AffineForm
from ulrich_lib.ulrich_core import (
    PROPORTIONAL_CASES,
    ContradictionKind,
    Degenerate,
    ball_quotient_invariants,
    bigbound_k,
    bogomolov_residual,
    bou_max_k,
    bou_quadratic_positive,
    c2_identity_check,
    c2_twisted_tangent,
    canonical_degree,
    coh_k_upper_bound,
    coh_vanishing_twist,
    curve_k_bound_holds,
    degree_from_genus,
    genus_from_canonical,
    hodge_index_residual,
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

DEL_PEZZO_QUINTIC = VarietyParams(n=2, d=20, g=6, k=1, KH=-10, K2=5, c2=7, chi=1)
PLANE_CONICS = VarietyParams(n=2, d=4, g=0, k=0, KH=-6, K2=9, c2=3, chi=1)


def test_degree_from_genus() -> None:
    assert degree_from_genus(2, 6, 1) == 20
    assert degree_from_genus(1, 10, 2) == 27
    assert isinstance(degree_from_genus(1, 1, 1), Degenerate)


def test_k_formula_and_canonical_degree_agree() -> None:
    assert k_from_intersections(2, 20, -10) == 1
    assert canonical_degree(2, 1, 20) == -10
    assert canonical_degree(4, 2, 48) == -32
    assert genus_from_canonical(2, 20, -10) == 6
    with pytest.raises(ValueError):
        genus_from_canonical(2, 3, 0)


def test_ulrich_chern_matches_twisted_tangent() -> None:
    c1h, c2h = ulrich_chern(DEL_PEZZO_QUINTIC, 2)
    assert c1h == 50
    assert c2h == c2_twisted_tangent(DEL_PEZZO_QUINTIC) == 37


def test_ulrich_chern_without_invariants() -> None:
    _, c2h = ulrich_chern(VarietyParams(n=2, d=20, g=6, k=1), 2)
    assert c2h is None


def test_ulrich_euler_equals_rank_times_degree() -> None:
    assert ulrich_euler(2, 20, 2, 0) == 40
    assert ulrich_euler(3, 5, 3, -1) == 0


@pytest.mark.parametrize("params", [DEL_PEZZO_QUINTIC, PLANE_CONICS])
def test_c2_identity_holds_on_examples(params: VarietyParams) -> None:
    assert c2_identity_check(params) == 0


def test_bou_max_k_stays_below_n_plus_one() -> None:
    for n in range(2, 13):
        kmax, valid = bou_max_k(n)
        assert valid
        assert kmax <= n + 1
        assert bou_quadratic_positive(n, kmax + 1)
        assert not bou_quadratic_positive(n, kmax)
    assert bou_max_k(2) == (3, True)
    assert not bou_max_k(13)[1]
    with pytest.raises(ValueError):
        bou_max_k(1)


def test_bigbound_k() -> None:
    assert bigbound_k(1, 6) == Fraction(5, 2)
    assert bigbound_k(2, 4) == Fraction(1, 2)


@pytest.mark.parametrize(
    ("d", "g", "k", "chi", "k2", "hk"),
    [(4, 0, 0, 1, 9, -6), (20, 6, 1, 1, 5, -10), (4, 6, 3, 1, 9, 6)],
)
def test_surface_conditions_vanish_on_examples(d: int, g: int, k: int, chi: int, k2: int, hk: int) -> None:
    assert [residual for _, residual in surface_conditions(d, g, k, chi, k2, hk)] == [0, 0, 0]


def test_surface_chi_window() -> None:
    assert surface_chi_window(4, 3) == (1, 1)
    lower, upper = surface_chi_window(40, 4)
    assert lower - upper == 4
    assert ball_quotient_invariants(8) == (18, 2)


@pytest.mark.parametrize("n", range(1, 13))
def test_hypersurface_exclude(n: int) -> None:
    witness = hypersurface_exclude(n)
    assert witness.contradiction
    assert witness.form.coefficient(witness.variable) >= 0


def test_proportional_case_table() -> None:
    assert len(PROPORTIONAL_CASES) == 14
    case = proportional_case(5, 4)
    assert (case.r, case.s, case.primitive, case.admissible) == (5, 2, True, True)
    assert not proportional_case(3, 1).admissible


def test_cohomological_bounds() -> None:
    assert coh_k_upper_bound(2, 0) == Fraction(3, 2)
    assert coh_vanishing_twist(2, 1) == -1


def test_residuals() -> None:
    assert bogomolov_residual(DEL_PEZZO_QUINTIC) == 23
    assert hodge_index_residual(DEL_PEZZO_QUINTIC) == 0
    with pytest.raises(ValueError):
        bogomolov_residual(VarietyParams(n=2, d=20, g=6, k=1))


def test_curve_k_bound_holds() -> None:
    assert curve_k_bound_holds(3, 2)
    assert not curve_k_bound_holds(2, 2)
    assert curve_k_bound_holds(0, -2)


@pytest.mark.parametrize("params", [DEL_PEZZO_QUINTIC, PLANE_CONICS])
def test_necessary_conditions_pass_on_ulrich_examples(params: VarietyParams) -> None:
    checks = necessary_conditions(params)
    assert [c.name for c in checks if not c.passed] == []
    assert {"c2-identity", "surface-chi-window", "dimension-bound"} <= {c.name for c in checks}


def test_necessary_conditions_catch_wrong_k() -> None:
    params = VarietyParams(n=2, d=20, g=6, k=2, KH=-10, K2=5, c2=7, chi=1)
    failed = {c.name for c in necessary_conditions(params) if not c.passed}
    assert {"degree-formula", "k-formula"} <= failed


def test_necessary_conditions_line_exception() -> None:
    checks = necessary_conditions(VarietyParams(n=1, d=1, g=0, k=-2))
    assert all(c.passed for c in checks if c.name == "k-nonnegative")


def test_necessary_conditions_reject_elliptic_curve_with_k_one() -> None:
    checks = necessary_conditions(VarietyParams(n=1, d=4, g=1, k=1))
    degree_check = next(c for c in checks if c.name == "degree-formula")
    assert not degree_check.passed


def test_noqf4_certify() -> None:
    certificate = noqf4_certify()
    e, b = AffineForm.var("e"), AffineForm.var("b")
    assert certificate.identity("d") == b * 16 + 64
    assert certificate.identity("d(e)") == (e * 48 + 96) / 13
    assert certificate.identity("13d - 48(e+2)") == AffineForm.const(0)
    assert (certificate.witness("e_min"), certificate.witness("e_max")) == (-1, 5)
    assert certificate.witness("integral_e_count") == 0
    assert certificate.contradiction == ContradictionKind.INTERVAL_EMPTY
    assert noqf4_certify() == certificate


def test_nosc4_certify() -> None:
    certificate = nosc4_certify()
    d = AffineForm.var("d")
    assert certificate.identity("K_B^2") == 7 - d * Fraction(7, 48)
    assert certificate.identity("K_Bc_1") == 9 - d * Fraction(5, 48)
    assert certificate.witness("d_lower") == 48
    assert certificate.witness("d_upper") == 24
    assert certificate.witness("disjoint") is True
    assert certificate.contradiction == ContradictionKind.INTEGRALITY


def test_c2_identity_is_affine_in_the_invariants() -> None:
    for n in range(2, 7):
        for k in range(5):

            def residual(d: int, k2: int, c2: int, n: int = n, k: int = k) -> Fraction:
                return c2_identity_check(VarietyParams(n=n, d=d, g=0, k=k, K2=k2, c2=c2))

            leading = 12 * k * n - 12 * k * k + 12 * k - 3 * n * n - 5 * n - 2
            for d in range(1, 5):
                for k2 in range(-2, 3):
                    for c2 in range(-2, 3):
                        base = residual(d, k2, c2)
                        assert residual(d, k2 + 1, c2) - base == 2 * (n + 12)
                        assert residual(d, k2, c2 + 1) - base == 2 * (n - 12)
                        assert residual(d + 1, k2, c2) - base == leading * n


def test_degree_and_k_formulas_invert_each_other() -> None:
    for n in range(1, 9):
        for k in range(-2, 11):
            if n * k == 1:
                continue
            for g in range(61):
                degree = degree_from_genus(n, g, k)
                assert not isinstance(degree, Degenerate)
                if degree < 1 or degree.denominator != 1:
                    continue
                d = int(degree)
                kh = 2 * (g - 1) - (n - 1) * d
                assert k_from_intersections(n, d, kh) == k
                assert canonical_degree(n, k, d) == kh


def test_chi_window_is_empty_from_k_four() -> None:
    for k in range(4, 101):
        for d in range(1, 201):
            lower, upper = surface_chi_window(d, k)
            assert lower > upper
            assert lower - upper == Fraction(d * k * (k - 3), 40)
