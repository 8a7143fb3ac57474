"""Circle sheaves: thickening, quarter-turn transform, oracle, distance."""

from fractions import Fraction as Fr

import pytest

from thicket.barcode import (Bar, closed, half_open, open_iv, singleton)
from thicket.circle import (Band, CircleSheaf, UnsupportedBandContentError,
                            circle_distance, circle_global_sections,
                            circle_stalk_oracle, circle_thicken,
                            cyclic_model_of, decompose_cyclic, fourier_sato,
                            iso_equal_circle, seed_bound)
from thicket.corpus import rand_circle_sheaf
from thicket.scalars import POS_INF


C = Fr(4)


def sheaf(*spirals, bands=(), C=C):
    return CircleSheaf(C, list(spirals), bands)


class TestCanonicalForm:
    def test_lift_normalization(self):
        assert sheaf(Bar(closed(5, 6), 0)) == sheaf(Bar(closed(1, 2), 0))

    def test_band_conjugacy_canonicalization(self):
        from thicket.fieldmath import inverse, mat_mul
        T = [[0, 1], [1, 0]]
        S = [[1, 1], [0, 1]]
        T2 = mat_mul(mat_mul(S, T, 2), inverse(S, 2), 2)
        assert sheaf(bands=[(2, T, 0)]) == sheaf(bands=[(2, T2, 0)])

    def test_unbounded_spiral_rejected(self):
        from thicket.barcode import ray_right
        with pytest.raises(ValueError):
            sheaf(Bar(ray_right(0), 0))


class TestThicken:
    def test_closed_arc_grows(self):
        got = circle_thicken(sheaf(Bar(closed(0, 1), 0)), Fr(1, 2))
        assert got == sheaf(Bar(closed(Fr(7, 2), Fr(11, 2)), 0))

    def test_bands_fixed(self):
        F = sheaf(bands=[(2, [[0, 1], [1, 0]], 1)])
        for a in (Fr(1, 2), Fr(3), Fr(-5, 4)):
            assert circle_thicken(F, a) == F

    def test_halfopen_rigid_rotation(self):
        F = sheaf(Bar(half_open(1, 2), 0))
        got = circle_thicken(F, Fr(1, 2))
        assert got == sheaf(Bar(half_open(Fr(1, 2), Fr(3, 2)), 0))
        back = circle_thicken(got, Fr(-1, 2))
        assert back == F

    def test_semigroup_with_wrap(self):
        F = sheaf(Bar(closed(0, 3), 0), Bar(open_iv(1, 2), 1))
        for a in (Fr(1), Fr(5, 2)):
            for b in (Fr(-1, 2), Fr(2)):
                assert circle_thicken(circle_thicken(F, a), b) == \
                    circle_thicken(F, a + b)

    def test_rgamma_invariance(self):
        F = sheaf(Bar(closed(0, 1), 0), Bar(open_iv(2, 3), 1),
                  bands=[(1, [[1]], 0)])
        for a in (Fr(1, 2), Fr(2), Fr(13, 4)):
            assert circle_global_sections(circle_thicken(F, a)) == \
                circle_global_sections(F)

    def test_thicken_matches_stalk_oracle(self):
        F = sheaf(Bar(closed(0, 1), 0), Bar(open_iv(2, 3), 1))
        a = Fr(1, 4)
        T = circle_thicken(F, a)
        for x in (Fr(0), Fr(1, 2), Fr(9, 8), Fr(5, 2), Fr(15, 4)):
            got = {}
            for b in T.spirals:
                lo = ((b.iv.left - x) / C).__floor__() - 1
                hi = ((b.iv.right - x) / C).__ceil__() + 1
                for n in range(lo, hi + 1):
                    if b.iv.contains(x + n * C):
                        got[b.degree] = got.get(b.degree, 0) + 1
            got = {d: n for d, n in sorted(got.items()) if n}
            assert got == circle_stalk_oracle(F, a, x), x


class TestFourierSato:
    def test_quasi_inverse(self):
        F = sheaf(Bar(closed(0, 1), 0), Bar(half_open(2, Fr(5, 2)), 1),
                  bands=[(1, [[1]], 0)])
        assert fourier_sato(fourier_sato(F), "inverse") == F
        assert fourier_sato(fourier_sato(F, "inverse")) == F

    def test_constant_sheaf_fixed(self):
        kS = sheaf(bands=[(1, [[1]], 0)])
        assert fourier_sato(kS) == kS

    def test_arc_grows_to_three_quarters(self):
        F = sheaf(Bar(closed(0, 1), 0))
        got = fourier_sato(F)
        assert got == sheaf(Bar(closed(-1, 2), 0))
        mid = (Fr(0) + Fr(1)) / 2
        out_bar = got.spirals[0]
        assert (out_bar.iv.left + out_bar.iv.right) / 2 % C == mid % C

    def test_roundtrip_seeded(self, rng):
        for _ in range(25):
            F = rand_circle_sheaf(rng, with_bands=True)
            assert fourier_sato(fourier_sato(F), "inverse") == F


class TestStalkOracle:
    def test_examples(self):
        arc = sheaf(Bar(closed(0, 1), 0))
        assert circle_stalk_oracle(arc, Fr(1, 4), Fr(1, 2)) == {0: 1}
        band = sheaf(bands=[(2, [[0, 1], [1, 0]], 1)])
        assert circle_stalk_oracle(band, Fr(1, 2), Fr(3)) == {1: 2}
        assert circle_stalk_oracle(sheaf(), Fr(1, 2), Fr(0)) == {}

    def test_embedding_bound(self):
        with pytest.raises(ValueError):
            circle_stalk_oracle(sheaf(), Fr(2), Fr(0))


class TestDecomposeCyclic:
    def test_single_arc_roundtrip(self):
        F = sheaf(Bar(closed(1, 2), 0))
        assert decompose_cyclic(cyclic_model_of(F)) == F

    def test_winding_pushforward(self):
        F = sheaf(Bar(closed(0, C + 1), 0))
        model = cyclic_model_of(F)
        rep = model.reps[0]
        assert max(rep.dims) == 2
        assert decompose_cyclic(model) == F

    def test_trivial_band_roundtrip(self):
        F = sheaf(bands=[(1, [[1]], 0)])
        assert decompose_cyclic(cyclic_model_of(F)) == F

    def test_mixed_content(self, rng):
        for _ in range(10):
            F = rand_circle_sheaf(rng, with_bands=True)
            assert decompose_cyclic(cyclic_model_of(F)) == F


class TestCircleDistance:
    def test_reflexive(self):
        F = sheaf(Bar(closed(0, 1), 0), bands=[(1, [[1]], 0)])
        assert circle_distance(F, F).fields() == (0, 0, True)

    def test_arc_vs_midpoint_skyscraper(self):
        arc = sheaf(Bar(closed(0, 1), 0))
        sky = sheaf(Bar(singleton(Fr(1, 2)), 0))
        assert circle_distance(arc, sky).fields() == (Fr(1, 2), Fr(1, 2), True)

    def test_constant_vs_zero_infinite(self):
        kS = sheaf(bands=[(1, [[1]], 0)])
        assert circle_distance(kS, sheaf()).fields() == (POS_INF, POS_INF, True)

    def test_band_mismatch_infinite(self):
        F = sheaf(Bar(closed(0, 1), 0), bands=[(1, [[1]], 0)])
        G = sheaf(Bar(closed(0, 1), 0))
        assert circle_distance(F, G).upper == POS_INF

    def test_common_band_unsupported(self):
        F = sheaf(Bar(closed(0, 1), 0), bands=[(1, [[1]], 0)])
        G = sheaf(Bar(closed(0, 2), 0), bands=[(1, [[1]], 0)])
        with pytest.raises(UnsupportedBandContentError):
            circle_distance(F, G)

    def test_symmetry(self, rng):
        for _ in range(10):
            F = rand_circle_sheaf(rng, max_spirals=2)
            G = rand_circle_sheaf(rng, max_spirals=2)
            assert circle_distance(F, G).fields() == circle_distance(G, F).fields()


class TestIsometry:
    def test_forward_transform_is_isometric(self, rng):
        for _ in range(12):
            F = rand_circle_sheaf(rng, max_spirals=2)
            G = rand_circle_sheaf(rng, max_spirals=2)
            d1 = circle_distance(F, G)
            d2 = circle_distance(fourier_sato(F), fourier_sato(G))
            assert d1.fields() == d2.fields()


class TestSlices:
    def test_open_after_closed_slices(self):
        # negative-after-positive thickening composes subtractively
        F = sheaf(Bar(closed(0, 1), 0), Bar(open_iv(1, 3), 1))
        for a in (Fr(1, 4), Fr(1, 2), Fr(1)):
            for b in (Fr(1, 2), Fr(1)):
                if 0 < a <= b <= C / 4:
                    lhs = circle_thicken(circle_thicken(F, b), -a)
                    assert lhs == circle_thicken(F, b - a)


class TestModelValidation:
    def test_inconsistent_model_rejected(self):
        from thicket.circle import CyclicModel
        from thicket.model import CircleModel, Rep
        cm = CircleModel(4, [0, 1])
        bad = Rep(cm, [1, 1, 1, 1], [[[1]], [[1]], [[1, 1]], [[1]]], 2)
        with pytest.raises(ValueError):
            from thicket.circle import decompose_cyclic
            decompose_cyclic(CyclicModel(Fr(4), cm, {0: bad}, 2))


class TestUnsupportedRegimeDegradation:
    def test_antipodal_skyscrapers_degrade_gracefully(self):
        # deciding the half-circumference shift needs two-dimensional Hom
        # spaces; the scanner reports sound inconclusive bounds instead of
        # failing
        F = sheaf(Bar(singleton(0), 0))
        G = sheaf(Bar(singleton(2), 0))
        d = circle_distance(F, G)
        assert d.lower == 1 and d.upper == POS_INF
        assert not d.exact and not d.conclusive

    def test_long_arcs_stay_sound(self):
        # arcs up to half the circumference exercise composite Hom targets
        # beyond dimension one; bounds must stay sound rather than crash
        F = sheaf(Bar(closed(0, 2), 0), Bar(singleton(3), 1))
        G = sheaf(Bar(closed(Fr(1, 2), Fr(5, 2)), 0), Bar(singleton(Fr(7, 2)), 1))
        d = circle_distance(F, G)
        assert d.lower <= d.upper
        d2 = circle_distance(fourier_sato(F), fourier_sato(G))
        assert d.fields() == d2.fields()
