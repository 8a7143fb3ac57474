"""Barcode core: canonical forms, global sections, duality."""

from fractions import Fraction as Fr

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import SHAPE_REPRESENTATIVES, bar, gb
from thicket.barcode import (CLOSED, OPEN, Bar, CharacteristicMismatchError,
                             GradedBarcode, Interval, InvalidIntervalError,
                             canonicalize, closed, dims_add, dualize,
                             dualize_bar, full_line, global_sections,
                             global_sections_c, half_open, half_open_r,
                             intersect, iso_equal, open_iv, ray_left,
                             ray_right, singleton, stalk_dims)
from thicket.model import LineModel, line_bar_rep, rep_sections


class TestCanonicalize:
    def test_identity_case(self):
        F = canonicalize([bar(closed(0, 1))])
        assert F.bars == (bar(closed(0, 1)),)

    def test_multiset_multiplicity_retained(self):
        F = canonicalize([bar(closed(0, 1)), bar(closed(0, 1))])
        assert len(F) == 2

    def test_empty_open_singleton_rejected(self):
        with pytest.raises(InvalidIntervalError):
            Interval(Fr(1), OPEN, Fr(1), OPEN)

    def test_half_closed_singleton_rejected(self):
        with pytest.raises(InvalidIntervalError):
            Interval(Fr(1), CLOSED, Fr(1), OPEN)

    def test_reversed_endpoints_rejected(self):
        with pytest.raises(InvalidIntervalError):
            Interval(Fr(2), CLOSED, Fr(1), CLOSED)

    def test_closed_infinite_endpoint_rejected(self):
        with pytest.raises(InvalidIntervalError):
            Interval(float("-inf"), CLOSED, Fr(0), CLOSED)

    def test_idempotent(self):
        bars = [bar(open_iv(0, 3), 1), bar(singleton(2)), bar(ray_right(1))]
        once = canonicalize(bars)
        assert canonicalize(once.bars) == once

    def test_nonprime_characteristic_rejected(self):
        with pytest.raises(ValueError):
            GradedBarcode([], char=4)


class TestIsoEqual:
    def test_reflexive(self):
        F = gb(bar(closed(0, 1)), bar(open_iv(0, 2), 1))
        assert iso_equal(F, F)

    def test_distinct_canonical_forms(self):
        assert not iso_equal(gb(bar(closed(0, 1))), gb(bar(open_iv(0, 1))))

    def test_direct_sum_commutes(self):
        F = gb(bar(closed(0, 1)))
        G = gb(bar(open_iv(2, 3), 1))
        assert iso_equal(F.direct_sum(G), G.direct_sum(F))

    def test_characteristic_mismatch(self):
        with pytest.raises(CharacteristicMismatchError):
            iso_equal(gb(char=2), gb(char=3))


# Frozen from the section-complex oracle below: degree-offset of RGamma and
# RGamma_c per shape class.
RGAMMA_TABLE = {
    "closed": {0: 1}, "open": {1: 1}, "ho": {}, "oh": {},
    "point": {0: 1}, "rayr_c": {0: 1}, "rayr_o": {}, "rayl_c": {0: 1},
    "rayl_o": {}, "line": {0: 1},
}
RGAMMA_C_TABLE = {
    "closed": {0: 1}, "open": {1: 1}, "ho": {}, "oh": {},
    "point": {0: 1}, "rayr_c": {}, "rayr_o": {1: 1}, "rayl_c": {},
    "rayl_o": {1: 1}, "line": {1: 1},
}
SHAPES = {
    "closed": closed(0, 2), "open": open_iv(0, 2), "ho": half_open(0, 2),
    "oh": half_open_r(0, 2), "point": singleton(1),
    "rayr_c": ray_right(0, CLOSED), "rayr_o": ray_right(0, OPEN),
    "rayl_c": ray_left(0, CLOSED), "rayl_o": ray_left(0, OPEN),
    "line": full_line(),
}


class TestGlobalSections:
    @pytest.mark.parametrize("name", sorted(SHAPES))
    def test_table_certified_by_section_complex(self, name):
        iv = SHAPES[name]
        model = LineModel([x for x in (iv.left, iv.right)
                           if isinstance(x, Fr)] or [0])
        rep = line_bar_rep(model, iv)
        h0, h1 = rep_sections(rep, compact=False)
        expected = {d: n for d, n in ((0, h0), (1, h1)) if n}
        assert global_sections(gb(bar(iv))) == expected == RGAMMA_TABLE[name]
        h0c, h1c = rep_sections(rep, compact=True)
        expected_c = {d: n for d, n in ((0, h0c), (1, h1c)) if n}
        assert global_sections_c(gb(bar(iv))) == expected_c == RGAMMA_C_TABLE[name]

    def test_closed_interval(self):
        assert global_sections(gb(bar(closed(0, 1)))) == {0: 1}

    def test_open_interval(self):
        assert global_sections(gb(bar(open_iv(0, 1)))) == {1: 1}

    def test_empty_barcode(self):
        assert global_sections(gb()) == {}
        assert global_sections_c(gb()) == {}

    def test_compact_examples(self):
        assert global_sections_c(gb(bar(closed(0, 1)))) == {0: 1}
        assert global_sections_c(gb(bar(ray_right(0)))) == {}
        assert global_sections_c(gb(bar(full_line()))) == {1: 1}

    def test_additive(self, rng):
        from thicket.corpus import rand_barcode
        for _ in range(40):
            F = rand_barcode(rng)
            G = rand_barcode(rng)
            s = F.direct_sum(G)
            assert global_sections(s) == dims_add(global_sections(F),
                                                  global_sections(G))
            assert global_sections_c(s) == dims_add(global_sections_c(F),
                                                    global_sections_c(G))

    def test_bounded_bars_agree(self):
        for iv in (closed(0, 2), open_iv(0, 2), half_open(0, 2),
                   half_open_r(0, 2), singleton(1)):
            F = gb(bar(iv, 3))
            assert global_sections(F) == global_sections_c(F)


class TestDualize:
    def test_closed_to_open(self):
        assert dualize(gb(bar(closed(0, 1)))) == gb(bar(open_iv(0, 1)))

    def test_half_open_flip(self):
        assert dualize(gb(bar(half_open(0, 1)))) == gb(bar(half_open_r(0, 1)))

    def test_point_degree_shift(self):
        # the dual of a point sheaf is the point sheaf shifted by one
        assert dualize_bar(bar(singleton(2), 0)) == bar(singleton(2), 1)
        assert dualize_bar(bar(singleton(2), 1)) == bar(singleton(2), 0)

    def test_involution_examples(self):
        F = gb(bar(closed(0, 1), 2), bar(half_open(0, 1), -1),
               bar(singleton(3), 1), bar(ray_right(0, OPEN), 0),
               bar(full_line(), 1))
        assert dualize(dualize(F)) == F

    @settings(max_examples=60, deadline=None)
    @given(st.integers(-2, 3), st.integers(0, len(SHAPE_REPRESENTATIVES) - 1))
    def test_involution_property(self, degree, shape_idx):
        F = gb(bar(SHAPE_REPRESENTATIVES[shape_idx], degree))
        assert dualize(dualize(F)) == F

    def test_ray_flip(self):
        assert dualize_bar(bar(ray_right(0, CLOSED), 0)) == bar(ray_right(0, OPEN), 0)


class TestIntervalOps:
    def test_intersect_kinds(self):
        got = intersect(closed(0, 2), open_iv(1, 3))
        assert got == Interval(Fr(1), OPEN, Fr(2), CLOSED)

    def test_intersect_empty(self):
        assert intersect(closed(0, 1), closed(2, 3)) is None
        assert intersect(open_iv(0, 1), singleton(1)) is None

    def test_stalk_dims(self):
        F = gb(bar(closed(0, 2)), bar(open_iv(0, 2), 1))
        assert stalk_dims(F, Fr(0)) == {0: 1}
        assert stalk_dims(F, Fr(1)) == {0: 1, 1: 1}


class TestEquivalenceRelation:
    def test_iso_equal_equivalence(self, rng):
        from thicket.corpus import rand_barcode
        pool = [rand_barcode(rng, max_bars=3) for _ in range(12)]
        pool += [GradedBarcode(F.bars, F.char) for F in pool[:4]]
        for F in pool:
            assert iso_equal(F, F)
            for G in pool:
                assert iso_equal(F, G) == iso_equal(G, F)
                for H in pool:
                    if iso_equal(F, G) and iso_equal(G, H):
                        assert iso_equal(F, H)
