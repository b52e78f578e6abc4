import math

import numpy as np
import pytest

from selective_rips.crushing import delta1_prime
from selective_rips.gluing import gh_upper_bound, glue, identity_correspondence
from selective_rips.pipeline import (choose_delta, counterexample, default_counterexample_scales,
                                     delta2_prime, delta_chain, jittered_copy, reconstruct,
                                     reference_betti)
from selective_rips.srips import ScaleSequence

CENTERS = list(range(0, 60, 4))
IN_WINDOW = ScaleSequence((0.12, 0.11))


@pytest.fixture(scope="module")
def chain(circle60):
    return delta_chain(circle60, CENTERS, 0.5)


def run(model, target, scales=IN_WINDOW, **kw):
    return reconstruct(model, target, identity_correspondence(model.n), CENTERS, 0.5, scales, **kw)


class TestReferenceBetti:
    @pytest.mark.parametrize("meta, expected", [
        ({"shape": "circle"}, (1, 1, 0)),
        ({"shape": "disk"}, (1, 0, 0)),
        ({"shape": "flat_torus", "sides": (1, 1)}, (1, 2, 1)),
        ({"shape": "interval"}, (1, 0, 0)),
    ])
    def test_known_shapes(self, meta, expected):
        assert reference_betti(meta, 2) == expected

    def test_unknown(self):
        assert reference_betti({}, 2) is None


class TestDeltaChain:
    def test_circle_values(self, chain):
        # the first critical radius above 0.5 is pi/5, from two centers three steps apart
        assert chain.mu == pytest.approx((math.pi / 5 - 0.5) / 2, rel=1e-12)
        assert chain.delta1p == pytest.approx(delta1_prime(0.5 / 4 / 2, 0.5))
        assert chain.delta2 == chain.delta1p / 2
        assert chain.delta == min(chain.delta2p, 0.5 / 8, chain.mu / 2)
        assert chain.delta == pytest.approx(3.818429849693434e-06, rel=1e-12)

    def test_choose_delta(self):
        assert choose_delta(1.0, 0.8, 0.4) == 0.1
        assert choose_delta(0.01, 0.8, 0.4) == 0.01

    def test_delta2_prime_gaps(self, grid11):
        # center distances from {0, 5}: below 3 the largest is 2, at or above 3 the smallest is 3
        assert delta2_prime(grid11, [0, 5], 3.0, 10.0) == 0.0
        assert delta2_prime(grid11, [0, 5], 2.5, 10.0) == pytest.approx(0.5)
        assert delta2_prime(grid11, [0, 5], 2.5, 0.4) == pytest.approx(0.2)


class TestReconstruct:
    def test_identical_copy(self, circle60):
        rep = run(circle60, circle60)
        assert rep.ok and rep.in_regime
        assert rep.betti_target == (1, 1, 0, 0)

    def test_small_jitter(self, circle60, chain):
        y = jittered_copy(circle60, chain.delta / 4, seed=0)
        rep = run(circle60, y)
        assert rep.gh_bound < chain.delta
        assert rep.in_regime and rep.ok
        assert [link.ok for link in rep.links] == [True] * 4

    def test_large_jitter_breaks_the_chain(self, circle60, chain):
        y = jittered_copy(circle60, 0.1, seed=0)
        rep = run(circle60, y)
        assert not rep.in_regime and not rep.ok
        assert chain.mu / 2 < 0.1
        ii = rep.link("(ii) Nerve(C) = Nerve(C_bar)")
        assert not ii.ok and ii.detail["witness"] is not None

    def test_report_serializes(self, circle60):
        d = run(circle60, circle60).to_dict()
        assert d["ok"] and len(d["links"]) == 4 and "chain" in d

    def test_jittered_copy_is_close(self, circle60):
        y = jittered_copy(circle60, 0.01, seed=2)
        u = glue(circle60, y, identity_correspondence(60))
        assert gh_upper_bound(u) <= 0.01 + 1e-12
        assert np.array_equal(y.dist, jittered_copy(circle60, 0.01, seed=2).dist)


class TestCounterexample:
    def test_three(self):
        rep = counterexample(3, ScaleSequence((1, 0.3, 0.07, 0.01)))
        assert [c[3] for c in rep.constraints] == [True, True]
        assert rep.constraints[0][1:3] == (1.0, pytest.approx(0.9))
        assert rep.constraints[1][1:3] == (0.3, pytest.approx(0.28))
        assert rep.counts == (4, 6, 4, 0) and rep.top_simplices == 0
        assert rep.betti == (1, 0, 1, 0)
        assert not rep.crushable

    def test_two(self):
        rep = counterexample(2)
        assert rep.betti == (1, 1, 0) and rep.top_simplices == 0

    @pytest.mark.parametrize("n", [2, 3, 4, 5])
    def test_hollow_simplex_in_every_dimension(self, n):
        rep = counterexample(n)
        assert rep.betti[n - 1] == 1 and rep.top_simplices == 0
        assert rep.counts[n - 1] == n + 1

    def test_invalid_scales(self):
        with pytest.raises(ValueError):
            counterexample(3, ScaleSequence((1, 0.4, 0.07, 0.01)))

    def test_default_scales_satisfy_constraints(self):
        s = default_counterexample_scales(6)
        assert all(s.r(i - 1) > (i + 1) * s.r(i) for i in range(2, 8))

    def test_points_are_spread(self):
        rep = counterexample(3, ScaleSequence((1, 0.3, 0.07, 0.01)))
        gaps = np.diff(rep.points)
        assert (gaps > 0.07).all() and rep.points[-1] < 0.3
