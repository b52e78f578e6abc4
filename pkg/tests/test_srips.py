import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from selective_rips.metric import build_space
from selective_rips.srips import (ScaleError, ScaleSequence, SimplicialComplex, admits_partition,
                                  build_complex, build_filtration, build_rips, cluster_width,
                                  is_simplex)

from conftest import planar_spaces, scale_sequences
from oracles import brute_cluster_width, brute_is_simplex, flag_complex


def line(*xs):
    x = np.asarray(xs, dtype=float)
    return build_space(np.abs(x[:, None] - x[None, :]), coords=x[:, None])


@pytest.fixture(scope="module")
def thin():
    """Two far points and a third close to both: distances (1, 0.52, 0.52)."""
    return build_space([[0, 1, 0.52], [1, 0, 0.52], [0.52, 0.52, 0]])


@pytest.fixture(scope="module")
def fat():
    return build_space([[0, 1, 0.99], [1, 0, 1.01], [0.99, 1.01, 0]])


class TestScaleSequence:
    def test_accessors(self):
        s = ScaleSequence.parse("1, 0.5,0.25")
        assert s.r(1) == 1 and s.r(3) == 0.25 and s.r(50) == 0.25
        assert s.r_inf == s.tail == 0.25 and s.r1 == 1
        assert s.distinct_values() == (1.0, 0.5, 0.25)

    def test_conventions(self):
        s = ScaleSequence((0.6, 0.4))
        assert s.above(0.7) and not s.above(0.6)
        assert s.below(0.3) and not s.below(0.4)

    @pytest.mark.parametrize("text", ["", "1,2", "0.5,0", "1,-1", "a,b", "inf"])
    def test_invalid(self, text):
        with pytest.raises(ScaleError):
            ScaleSequence.parse(text)

    def test_r_is_one_based(self):
        with pytest.raises(IndexError):
            ScaleSequence((1.0,)).r(0)

    def test_extended_is_same_sequence(self):
        s = ScaleSequence((1.0, 0.5))
        e = s.extended(5)
        assert e.prefix == (1.0, 0.5, 0.5, 0.5, 0.5)
        assert all(s.r(i) == e.r(i) for i in range(1, 9))


class TestPartition:
    def test_small_sets_always_split(self, fat):
        assert admits_partition(fat, [0, 1, 2], 3, 1e-6)

    def test_thin_triple(self, thin):
        assert admits_partition(thin, [0, 1, 2], 2, 0.55)

    def test_fat_triple(self, fat):
        assert not admits_partition(fat, [0, 1, 2], 2, 0.55)

    def test_strictness(self, thin):
        assert not admits_partition(thin, [0, 1, 2], 2, 0.52)
        assert admits_partition(thin, [0, 1, 2], 2, 0.52, strict=False)

    def test_bad_arguments(self, thin):
        with pytest.raises(ValueError):
            admits_partition(thin, [], 1, 1.0)
        with pytest.raises(ValueError):
            admits_partition(thin, [0], 0, 1.0)


class TestMembership:
    def test_thin_and_fat(self, thin, fat):
        s = ScaleSequence((1.1, 0.55))
        assert is_simplex(thin, [0, 1, 2], s)
        assert not is_simplex(fat, [0, 1, 2], s)

    def test_singleton(self, fat):
        assert is_simplex(fat, [2], ScaleSequence((1e-3,)))

    @given(planar_spaces(1, 7), st.floats(0.05, 1.5))
    def test_constant_scales_is_diameter(self, s, r):
        sigma = list(range(s.n))
        assert is_simplex(s, sigma, ScaleSequence.constant(r)) == (s.diameter() < r or s.n == 1)

    @given(planar_spaces(1, 7), scale_sequences())
    def test_matches_bell_enumeration(self, s, scales):
        sigma = list(range(s.n))
        assert is_simplex(s, sigma, ScaleSequence(scales)) == brute_is_simplex(s.dist, sigma, scales)

    @given(planar_spaces(2, 7), scale_sequences())
    def test_face_closed(self, s, scales):
        scales = ScaleSequence(scales)
        if is_simplex(s, range(s.n), scales):
            for k in range(1, s.n):
                for tau in itertools.combinations(range(s.n), k):
                    assert is_simplex(s, tau, scales)


class TestBuildComplex:
    def test_counterexample_counts(self):
        s = line(0, 0.08, 0.16, 0.24)
        k = build_complex(s, ScaleSequence((1, 0.3, 0.07, 0.01)), 3)
        assert k.counts() == [4, 6, 4]
        assert all(len(t) < 4 for t in k)

    def test_vertices_only(self):
        s = line(0, 1, 2)
        assert build_complex(s, ScaleSequence((0.5,)), 3).counts() == [3]

    def test_circle_counts(self, circle60):
        k = build_complex(circle60, ScaleSequence((0.6, 0.4)), 4)
        assert k.counts() == [60, 300, 600, 600, 300]

    def test_lexicographic_and_face_closed(self, circle60):
        k = build_complex(circle60, ScaleSequence((0.6, 0.4)), 3)
        for layer in k.simplices:
            assert list(layer) == sorted(layer)
        assert k.is_face_closed()

    def test_negative_cap(self, circle60):
        with pytest.raises(ValueError):
            build_complex(circle60, ScaleSequence((0.6,)), -1)

    def test_vertex_restriction_is_full_subcomplex(self, circle60):
        scales = ScaleSequence((0.6, 0.4))
        full = build_complex(circle60, scales, 3)
        part = build_complex(circle60, scales, 3, vertices=range(10))
        assert part.as_set() == {s for s in full if max(s) < 10}

    @given(planar_spaces(1, 9), st.floats(0.05, 1.5))
    def test_rips_equals_flag_complex(self, s, r):
        assert build_rips(s, r, 3).as_set() == flag_complex(s.dist, r, 3)

    @given(planar_spaces(1, 8), scale_sequences(), st.floats(1.0, 1.5))
    def test_scale_monotone(self, s, scales, factor):
        lo = ScaleSequence(scales)
        assert build_complex(s, lo, 3).as_set() <= build_complex(s, lo.scaled(factor), 3).as_set()

    @given(planar_spaces(1, 8), scale_sequences())
    def test_inside_rips(self, s, scales):
        scales = ScaleSequence(scales)
        assert build_complex(s, scales, 3).as_set() <= build_rips(s, scales.r1, 3).as_set()

    @given(planar_spaces(1, 8), scale_sequences(length=3))
    def test_tail_extension_changes_nothing(self, s, scales):
        base = ScaleSequence(scales)
        assert build_complex(s, base, 4) == build_complex(s, base.extended(8), 4)

    @given(planar_spaces(1, 8), scale_sequences())
    def test_matches_brute_force_enumeration(self, s, scales):
        expected = {sigma for k in range(1, 5) for sigma in itertools.combinations(range(s.n), k)
                    if brute_is_simplex(s.dist, sigma, scales)}
        assert build_complex(s, ScaleSequence(scales), 3).as_set() == expected


class TestClusterWidth:
    def test_examples(self, thin):
        assert cluster_width(thin, [0, 1, 2], 1) == 1
        assert cluster_width(thin, [0, 1, 2], 2) == 0.52

    @given(planar_spaces(2, 7))
    def test_last_index_is_min_distance(self, s):
        d = s.dist[np.triu_indices(s.n, 1)]
        assert cluster_width(s, range(s.n), s.n - 1) == d.min()

    @given(planar_spaces(2, 7), st.data())
    def test_matches_brute_force(self, s, data):
        i = data.draw(st.integers(1, s.n - 1))
        assert cluster_width(s, range(s.n), i) == brute_cluster_width(s.dist, range(s.n), i)


class TestFiltration:
    def test_thin_triangle_birth(self, thin):
        f = build_filtration(thin, ScaleSequence((1, 0.5)), 2)
        assert f.birth((0, 1, 2)) == pytest.approx(1.04)

    def test_edges_ignore_profile(self, thin):
        f = build_filtration(thin, ScaleSequence((1, 0.1)), 2)
        assert f.birth((0, 1)) == 1 and f.birth((0, 2)) == 0.52

    def test_constant_profile_is_diameter(self, circle60):
        f = build_filtration(circle60.subspace(range(0, 60, 4)), ScaleSequence((1.0,)), 3)
        for s, b in f.ordered():
            assert b == f.space.diameter(s)

    def test_profile_must_start_at_one(self, thin):
        with pytest.raises(ScaleError):
            build_filtration(thin, ScaleSequence((0.9, 0.5)), 2)

    @given(planar_spaces(1, 8), scale_sequences(lo=0.1, hi=1.0))
    def test_sublevels_match_closed_complex(self, s, profile):
        profile = ScaleSequence((1.0,) + tuple(p for p in profile if p <= 1.0))
        f = build_filtration(s, profile, 3)
        f.check_monotone()
        for t in sorted({b for _, b in f.ordered()})[:6] + [0.37]:
            closed = build_complex(s, profile.scaled(t), 3, strict=False) if t > 0 else None
            got = f.sublevel(t).as_set()
            if closed is not None:
                assert got == closed.as_set()

    @given(planar_spaces(2, 7), scale_sequences(lo=0.1, hi=1.0))
    def test_birth_is_attained(self, s, profile):
        profile = ScaleSequence((1.0,) + tuple(p for p in profile if p <= 1.0))
        f = build_filtration(s, profile, 3)
        for sigma, b in f.ordered():
            if b == 0:
                continue
            assert is_simplex(s, sigma, profile.scaled(b), strict=False)
            assert not is_simplex(s, sigma, profile.scaled(b * (1 - 1e-9)), strict=False)


def test_complex_from_simplices_closes_faces():
    k = SimplicialComplex.from_simplices(4, [(0, 1, 2)], close=True)
    assert k.counts() == [3, 3, 1] and k.is_face_closed()
    assert k.euler_characteristic() == 1
    assert not math.isnan(k.dim)
