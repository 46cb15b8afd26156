"""Zeta series from counts, rational reconstruction, weight
factorization, and the per-weight conjecture checkers."""

import warnings
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zetalab.arith import PrimePower
from zetalab.counting import count_series, parse_variety
from zetalab.series import RationalFunction, poly_mul
from zetalab.zeta import (
    HypothesisWarning,
    ReconstructionError,
    WeightDecomposition,
    WeightFactor,
    hasse_weil_functional_check,
    l_adic_check,
    lefschetz_counts,
    ord_at,
    weight_factorize,
    weil_check,
    zeta_from_counts,
    zeta_rational,
)


@pytest.fixture(scope="module")
def e5_decomposition():
    spec = parse_variety("elliptic a=[0,0,0,1,0]")
    Z = zeta_rational(count_series(spec, PrimePower(5), 4), betti=(1, 2, 1))
    return weight_factorize(Z, PrimePower(5), 1, (1, 2, 1))


@pytest.fixture(scope="module")
def p2_decomposition():
    spec = parse_variety("projective 2; vars x,y,z")
    Z = zeta_rational(count_series(spec, PrimePower(3), 3), betti=(1, 0, 1, 0, 1))
    return weight_factorize(Z, PrimePower(3), 2, (1, 0, 1, 0, 1))


class TestZetaSeries:
    def test_projective_line_series(self):
        assert zeta_from_counts([4, 10, 28]).coeffs == (F(1), F(4), F(13), F(40))

    def test_inert_point_series(self):
        assert zeta_from_counts([0, 2, 0, 2]).coeffs == (F(1), F(0), F(1), F(0), F(1))

    def test_empty_variety(self):
        assert zeta_from_counts([0, 0, 0]).coeffs == (F(1), F(0), F(0), F(0))

    def test_non_integer_coefficients_warn(self):
        with warnings.catch_warnings(record=True) as rec:
            warnings.simplefilter("always")
            zeta_from_counts([1, 0])
        assert any(issubclass(w.category, HypothesisWarning) for w in rec)

    @given(st.integers(min_value=0, max_value=6), st.integers(min_value=2, max_value=5))
    @settings(max_examples=30)
    def test_point_sets_give_geometric_coefficients(self, npts, m):
        # N_n = npts constant: Z = 1/(1-t)^npts has integer coefficients
        series = zeta_from_counts([npts] * m)
        rf = RationalFunction((1,), [F(c) for c in _binomial_poly(npts)])
        assert series.coeffs == rf.expand(m).coeffs


def _binomial_poly(npts):
    out = (1,)
    for _ in range(npts):
        out = poly_mul(out, (1, -1))
    return out


class TestZetaRational:
    def test_elliptic_over_f5(self):
        spec = parse_variety("elliptic a=[0,0,0,1,0]")
        Z = zeta_rational(count_series(spec, PrimePower(5), 6), betti=(1, 2, 1))
        assert Z.num == (F(1), F(-2), F(5))
        assert Z.den == (F(1), F(-6), F(5))

    def test_projective_plane(self):
        spec = parse_variety("projective 2; vars x,y,z")
        Z = zeta_rational(count_series(spec, PrimePower(3), 6), betti=(1, 0, 1, 0, 1))
        den = poly_mul(poly_mul((1, -1), (1, -3)), (1, -9))
        assert Z.num == (F(1),)
        assert Z.den == tuple(F(c) for c in den)

    def test_degree_scan_without_betti(self):
        spec = parse_variety("zerodim x^2+1")
        Z = zeta_rational(count_series(spec, PrimePower(3), 6))
        assert Z.num == (F(1),) and Z.den == (F(1), F(0), F(-1))

    def test_insufficient_counts(self):
        with pytest.raises(ReconstructionError, match="[Ii]nsufficient"):
            zeta_rational([4, 32], betti=(1, 2, 1))

    def test_mismatched_counts(self):
        with pytest.raises(ReconstructionError), warnings.catch_warnings():
            warnings.simplefilter("ignore", HypothesisWarning)
            zeta_rational([4, 32, 148, 640, 2, 2], betti=(1, 2, 1))


class TestWeightFactorization:
    def test_elliptic_factors(self, e5_decomposition):
        dec = e5_decomposition
        assert dec.factor(0).poly == (1, -1)
        assert dec.factor(1).poly == (1, -2, 5)
        assert dec.factor(2).poly == (1, -5)
        assert dec.euler_characteristic == 0
        assert dec.betti == (1, 2, 1)

    def test_projective_plane_ladder(self, p2_decomposition):
        dec = p2_decomposition
        assert dec.factor(0).poly == (1, -1)
        assert dec.factor(2).poly == (1, -3)
        assert dec.factor(4).poly == (1, -9)

    def test_zero_dimensional_whole_even_side(self):
        spec = parse_variety("zerodim x^2+1")
        Z = zeta_rational(count_series(spec, PrimePower(3), 4))
        dec = weight_factorize(Z, PrimePower(3), 0, (2,))
        assert dec.factor(0).poly == (1, 0, -1)

    def test_lefschetz_roundtrip(self, e5_decomposition, p2_decomposition):
        assert lefschetz_counts(e5_decomposition, 4) == [4, 32, 148, 640]
        assert lefschetz_counts(p2_decomposition, 3) == [13, 91, 757]

    @given(st.integers(min_value=-4, max_value=4), st.sampled_from([2, 3, 5, 7]))
    @settings(max_examples=30, deadline=None)
    def test_synthetic_curve_roundtrip(self, a, p):
        # 1 - at + pt^2 is a valid weight-1 factor iff |a| <= 2 sqrt(p)
        if a * a > 4 * p:
            return
        num = (1, -a, p)
        den = poly_mul((1, -1), (1, -p))
        Z = RationalFunction(num, den, reduce=False)
        dec = weight_factorize(Z, PrimePower(p), 1, (1, 2, 1))
        counts = lefschetz_counts(dec, 4)
        assert zeta_rational(counts, betti=(1, 2, 1)) == Z


class TestWeilCheck:
    def test_elliptic_passes_tightly(self, e5_decomposition):
        checks = weil_check(e5_decomposition, 1e-9)
        assert all(c.verdict == "PASS" for c in checks)
        w1 = next(c for c in checks if c.name == "weil.weight1")
        assert w1.data["max_rel_deviation"] < 1e-30

    def test_synthetic_violator_fails(self):
        bad = WeightDecomposition(
            d=1,
            q=PrimePower(5),
            factors=(
                WeightFactor(0, (1, -1)),
                WeightFactor(1, (1, -6)),
                WeightFactor(2, (1, -5)),
            ),
        )
        checks = weil_check(bad)
        w1 = next(c for c in checks if c.name == "weil.weight1")
        assert w1.verdict == "FAIL"
        assert "max_rel_deviation" in w1.data


class TestLAdicCheck:
    def test_elliptic_passes(self, e5_decomposition):
        checks = l_adic_check(e5_decomposition)
        assert all(c.verdict == "PASS" for c in checks)
        w1 = next(c for c in checks if c.name == "ladic.weight1")
        assert w1.data["constant_term"] == 5

    def test_constant_with_foreign_prime_fails(self):
        bad = WeightDecomposition(
            d=1,
            q=PrimePower(5),
            factors=(
                WeightFactor(0, (1, -1)),
                WeightFactor(1, (1, -1, 6)),
                WeightFactor(2, (1, -5)),
            ),
        )
        checks = l_adic_check(bad)
        w1 = next(c for c in checks if c.name == "ladic.weight1")
        assert w1.verdict == "FAIL"
        assert not w1.data["prime_support_only_p"]


class TestFunctionalEquation:
    def test_signs(self, e5_decomposition, p2_decomposition):
        fc_p2 = hasse_weil_functional_check(p2_decomposition)
        assert fc_p2.verdict == "PASS" and fc_p2.data["sign"] == -1
        fc_e = hasse_weil_functional_check(e5_decomposition)
        assert fc_e.verdict == "PASS" and fc_e.data["sign"] == 1

    def test_projective_line_sign(self):
        spec = parse_variety("projective 1; vars x,y")
        Z = zeta_rational(count_series(spec, PrimePower(3), 4), betti=(1, 0, 1))
        dec = weight_factorize(Z, PrimePower(3), 1, (1, 0, 1))
        fc = hasse_weil_functional_check(dec)
        assert fc.verdict == "PASS" and fc.data["sign"] == 1


@pytest.fixture(scope="module")
def p1_zeta():
    spec = parse_variety("projective 1; vars x,y")
    return zeta_rational(count_series(spec, PrimePower(3), 4), betti=(1, 0, 1))


class TestOrdAt:
    def test_simple_poles(self, p1_zeta):
        assert ord_at(p1_zeta, PrimePower(3), 1).order == -1
        assert ord_at(p1_zeta, PrimePower(3), 0).order == -1
        assert ord_at(p1_zeta, PrimePower(3), 1).exact

    def test_half_integer_numeric_fallback(self, p1_zeta):
        res = ord_at(p1_zeta, PrimePower(3), F(1, 2))
        assert res.order == 0 and not res.exact

    def test_half_integer_exact_over_square_base(self):
        spec = parse_variety("projective 1; vars x,y")
        q = PrimePower(3, 2)
        Z = zeta_rational(count_series(spec, q, 4), betti=(1, 0, 1))
        res = ord_at(Z, q, F(1, 2))
        assert res.exact and res.order == 0
        assert ord_at(Z, q, 1).order == -1

    def test_indeterminate_band(self):
        Z = RationalFunction((1, -3), (1, -2))
        res = ord_at(Z, PrimePower(3), 1.005, match_tol=1e-3)
        assert res.indeterminate and res.order is None
