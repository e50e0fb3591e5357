from fractions import Fraction

import pytest

from ulrich_lib.curves import (
    EllipticProductClass,
    FactorBundle,
    FactorKind,
    QuadricCurve,
    brill_noether_rho,
    certify_elliptic_product,
    certify_quadric_ulrich,
    cone_case_check,
    existence_k2,
    existence_k3,
    general_moduli_max_k,
    kunneth_h,
    quadric_intersection,
    quadric_type_from_k,
    rational_line,
    thresholds,
)
from ulrich_lib.models import CertificateStatus


def test_factor_cohomology() -> None:
    assert rational_line(-1).cohomology() == (0, 0)
    assert rational_line(-3).cohomology() == (0, 2)
    assert FactorBundle(FactorKind.ELLIPTIC, 0).cohomology() == (1, 1)
    assert FactorBundle(FactorKind.ELLIPTIC, 0, nontrivial=True).cohomology() == (0, 0)
    assert FactorBundle(FactorKind.ELLIPTIC, -2).cohomology() == (0, 2)
    with pytest.raises(ValueError):
        FactorBundle(FactorKind.RATIONAL_LINE, 0, nontrivial=True)


def test_kunneth_h() -> None:
    assert kunneth_h(rational_line(2), rational_line(-1)) == (0, 0, 0)
    assert kunneth_h(rational_line(1), rational_line(-3)) == (0, 4, 0)


def test_quadric_curve() -> None:
    curve = QuadricCurve(3, 6)
    assert (curve.degree, curve.genus) == (9, 10)
    assert quadric_intersection((2, -1), (3, 6)) == 9
    assert quadric_type_from_k(4, 6) == 3
    with pytest.raises(ValueError):
        quadric_type_from_k(4, 2)
    with pytest.raises(ValueError):
        QuadricCurve(0, 2)


def test_thresholds() -> None:
    t = thresholds(9)
    assert t.cubic_exception
    assert t.castelnuovo_p3 == Fraction(49, 4)
    assert t.quadric_forcing == 10
    assert t.bd_curve == 10


def test_brill_noether_rho() -> None:
    assert brill_noether_rho(3, 3, 6) == 3
    assert brill_noether_rho(10, 3, 9) == -6


def test_cone_case_check_only_for_b_one() -> None:
    assert [b for b in range(1, 40) if cone_case_check(b)] == [1]


def test_small_k_existence() -> None:
    assert [g for g in range(6) if existence_k2(g)] == [3, 4, 5]
    assert [g for g in range(14) if existence_k3(g)] == [9, 11, 13]
    with pytest.raises(ValueError):
        existence_k2(-1)


def test_general_moduli_max_k() -> None:
    assert general_moduli_max_k(2) == 1
    assert general_moduli_max_k(100) == 4
    assert max(general_moduli_max_k(g) for g in range(2, 500)) == 4
    with pytest.raises(ValueError):
        general_moduli_max_k(1)


@pytest.mark.parametrize("c", [1, 2, 7, 20])
def test_certify_quadric_ulrich(c: int) -> None:
    certificate = certify_quadric_ulrich(c)
    assert certificate.status == CertificateStatus.VERIFIED
    assert certificate.witnesses[f"c={c} (d,g,k)"] == f"({3 * (c + 1)}, {c * (2 * c + 1)}, {2 * c})"


@pytest.mark.parametrize("k", [3, 5, 21])
def test_certify_elliptic_product(k: int) -> None:
    assert certify_elliptic_product(k).status == CertificateStatus.VERIFIED


@pytest.mark.parametrize("k", [1, 4])
def test_certify_elliptic_product_needs_odd_k(k: int) -> None:
    with pytest.raises(ValueError):
        certify_elliptic_product(k)


def test_elliptic_class_arithmetic() -> None:
    difference = EllipticProductClass(5, 6, 0) - EllipticProductClass(1, 3, 1) * 2
    assert difference == EllipticProductClass(3, 0, -2)
    elliptic, line = difference.factors()
    assert elliptic.nontrivial
    assert line == rational_line(3)
    with pytest.raises(ValueError):
        EllipticProductClass(0, 0, 3).factors()


GRID = range(-10, 11)


def test_kunneth_serre_duality_on_the_quadric() -> None:
    for x in GRID:
        for y in GRID:
            h = kunneth_h(rational_line(x), rational_line(y))
            dual = kunneth_h(rational_line(-2 - x), rational_line(-2 - y))
            assert h == dual[::-1]


def test_kunneth_euler_characteristic_on_the_quadric() -> None:
    for x in GRID:
        for y in GRID:
            h0, h1, h2 = kunneth_h(rational_line(x), rational_line(y))
            assert h0 - h1 + h2 == (x + 1) * (y + 1)


@pytest.mark.parametrize("nontrivial", [False, True])
def test_kunneth_on_elliptic_times_line(nontrivial: bool) -> None:
    for x in GRID:
        if nontrivial and x != 0:
            continue
        elliptic = FactorBundle(FactorKind.ELLIPTIC, x, nontrivial)
        dual_elliptic = FactorBundle(FactorKind.ELLIPTIC, -x, nontrivial)
        for y in GRID:
            h = kunneth_h(elliptic, rational_line(y))
            assert h == kunneth_h(dual_elliptic, rational_line(-2 - y))[::-1]
            assert h[0] - h[1] + h[2] == x * (y + 1)


def test_quadric_type_from_even_k() -> None:
    for k in range(2, 41, 2):
        a, b = quadric_type_from_k(k, k + 2), k + 2
        assert a == k // 2 + 1
        assert (a + b) * (k - 1) == 3 * ((a - 1) * (b - 1) - 1)
        curve = QuadricCurve(int(a), b)
        assert Fraction(3 * (curve.genus - 1), k - 1) == curve.degree
