"""Variety description parsing and brute-force point counting."""

import json
import os

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zetalab.arith import PrimePower
from zetalab.counting import (
    BudgetError,
    ParseError,
    VarietySpec,
    count_points,
    count_series,
    parse_variety,
)


class TestParser:
    def test_plane_curve(self):
        v = parse_variety("projective 2; vars x,y,z; eq x^3+y^3+z^3")
        assert v.kind == "plane_projective_curve"

    def test_elliptic(self):
        v = parse_variety("elliptic a=[0,0,0,1,0]")
        assert v.kind == "elliptic_curve"
        assert v.a_invariants == (0, 0, 0, 1, 0)

    def test_projective_space(self):
        v = parse_variety("projective 1; vars x,y")
        assert v.kind == "projective_space" and v.ambient_dim == 1

    def test_hypersurface(self):
        v = parse_variety("projective 3; vars x,y,z,w; eq x*w-y*z")
        assert v.kind == "projective_hypersurface"

    def test_zero_dimensional(self):
        v = parse_variety("zerodim x^2+1")
        assert v.kind == "zero_dimensional" and v.zero_poly == (1, 0, 1)

    def test_product(self):
        v = parse_variety("product { projective 1; vars x,y } { projective 1; vars u,v }")
        assert v.kind == "product" and v.left.kind == "projective_space"

    def test_fingerprint_stable(self):
        a = parse_variety("elliptic a=[0,0,0,1,0]")
        b = parse_variety("elliptic a=[0, 0, 0, 1, 0]")
        assert a.fingerprint() == b.fingerprint()


class TestParserErrors:
    def test_non_homogeneous(self):
        with pytest.raises(ParseError, match="non-homogeneous") as err:
            parse_variety("projective 1; vars x,y; eq x^2+y")
        assert err.value.line == 1

    def test_unknown_variable(self):
        with pytest.raises(ParseError, match="unknown variable"):
            parse_variety("projective 1; vars x,y; eq x^2+t^2")

    def test_variable_count(self):
        with pytest.raises(ParseError, match="needs 3 variables"):
            parse_variety("projective 2; vars x,y; eq x^2+y^2")

    def test_zerodim_must_be_monic(self):
        with pytest.raises(ParseError, match="monic"):
            parse_variety("zerodim 2*x^2+1")

    def test_implicit_multiplication_rejected(self):
        with pytest.raises(ParseError):
            parse_variety("projective 1; vars x,y; eq 3x*y")

    def test_error_carries_line_number(self):
        with pytest.raises(ParseError) as err:
            parse_variety("projective 1\nvars x,y\neq x+y^2")
        assert err.value.line == 3


class TestCounts:
    def test_projective_line(self):
        v = parse_variety("projective 1; vars x,y")
        assert [count_points(v, PrimePower(3), n) for n in (1, 2, 3)] == [4, 10, 28]

    def test_projective_plane(self):
        v = parse_variety("projective 2; vars x,y,z")
        assert count_series(v, PrimePower(3), 3).counts == (13, 91, 757)

    def test_elliptic_over_f5(self):
        v = parse_variety("elliptic a=[0,0,0,1,0]")
        assert count_series(v, PrimePower(5), 4).counts == (4, 32, 148, 640)

    def test_elliptic_char_two(self):
        # y^2 + y = x^3 + x over F_2: four affine points plus infinity
        v = parse_variety("elliptic a=[0,0,1,1,0]")
        assert count_points(v, PrimePower(2), 1) == 5

    def test_zero_dimensional_split_inert(self):
        v = parse_variety("zerodim x^2+1")
        for p in (3, 5, 13):
            pattern = [count_points(v, PrimePower(p), n) for n in (1, 2, 3, 4)]
            expected = [2, 2, 2, 2] if p % 4 == 1 else [0, 2, 0, 2]
            assert pattern == expected

    def test_product_multiplies(self):
        v = parse_variety("product { projective 1; vars x,y } { projective 1; vars u,v }")
        assert count_series(v, PrimePower(2), 2).counts == (9, 25)

    def test_raw_projective_matches_closed_form(self):
        raw = VarietySpec(kind="raw_system", ambient="projective", ambient_dim=2)
        for pp in (PrimePower(2), PrimePower(3), PrimePower(2, 2), PrimePower(5)):
            assert count_points(raw, pp, 1) == (pp.q**3 - 1) // (pp.q - 1)

    def test_fermat_cubic_against_independent_brute(self):
        def brute(q):
            hits = sum(
                1
                for x in range(q)
                for y in range(q)
                for z in range(q)
                if (x, y, z) != (0, 0, 0) and (x**3 + y**3 + z**3) % q == 0
            )
            return hits // (q - 1)

        v = parse_variety("projective 2; vars x,y,z; eq x^3+y^3+z^3")
        assert count_points(v, PrimePower(7), 1) == brute(7)

    def test_stripes_do_not_change_counts(self):
        v = parse_variety("projective 2; vars x,y,z; eq x^3+y^3+z^3")
        assert count_points(v, PrimePower(7), 1, stripes=1) == count_points(
            v, PrimePower(7), 1, stripes=4
        )

    @given(st.sampled_from([3, 5, 7, 11]), st.integers(min_value=1, max_value=3))
    @settings(max_examples=20, deadline=None)
    def test_product_with_zerodim_is_multiplicative(self, p, n):
        v = parse_variety(
            "product { zerodim x^2+1 } { projective 1; vars x,y }"
        )
        left = parse_variety("zerodim x^2+1")
        right = parse_variety("projective 1; vars x,y")
        q = PrimePower(p)
        assert count_points(v, q, n) == count_points(left, q, n) * count_points(
            right, q, n
        )


class TestBudget:
    def test_budget_error(self):
        big = parse_variety("affine 3; vars x,y,z; eq x+y+z")
        with pytest.raises(BudgetError, match="budget"):
            count_points(big, PrimePower(1009), 2, budget=10**6)

    def test_series_reports_failing_degree(self):
        big = parse_variety("affine 3; vars x,y,z; eq x+y+z")
        with pytest.raises(BudgetError, match="degree"):
            count_series(big, PrimePower(101), 3, budget=10**6)


class TestCache:
    def test_roundtrip_and_extension(self, tmp_path):
        v = parse_variety("projective 2; vars x,y,z; eq x^3+y^3+z^3")
        one = count_series(v, PrimePower(7), 2, cache_dir=tmp_path)
        files = os.listdir(tmp_path)
        assert len(files) == 1 and files[0].endswith("-p7r1.json")
        data = json.loads((tmp_path / files[0]).read_text())
        assert set(data) == {"spec_hash", "q", "counts"}
        assert data["q"] == {"p": 7, "r": 1}
        two = count_series(v, PrimePower(7), 2, cache_dir=tmp_path)
        assert one == two
        three = count_series(v, PrimePower(7), 3, cache_dir=tmp_path)
        assert three.counts[:2] == one.counts

    def test_cache_ignored_on_fingerprint_mismatch(self, tmp_path):
        v = parse_variety("projective 2; vars x,y,z; eq x^3+y^3+z^3")
        count_series(v, PrimePower(7), 2, cache_dir=tmp_path)
        path = tmp_path / os.listdir(tmp_path)[0]
        data = json.loads(path.read_text())
        data["spec_hash"] = "0" * 16
        path.write_text(json.dumps(data))
        fresh = count_series(v, PrimePower(7), 2, cache_dir=tmp_path)
        assert fresh.counts == (count_points(v, PrimePower(7), 1), count_points(v, PrimePower(7), 2))
