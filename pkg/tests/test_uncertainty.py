import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from srediag.diagnostics import sre_membership
from srediag.game import pure_gap
from srediag.nash import nash_support_enumeration
from srediag.uncertainty import (
    PolyhedralRegion,
    box_region,
    gap_affine_form,
    shrinking_diagnostic,
    u_validity,
)

from test_game import random_game, random_state


def test_boundary_box_is_valid(boundary):
    rep = u_validity(boundary, [1, 0], box_region(boundary, [1, 0], 0.1))
    assert rep.valid and rep.candidate_in_region
    assert rep.entries[1].value == pytest.approx(0.0, abs=1e-12)


def test_hawk_dove_box_is_invalid(hd):
    rep = u_validity(hd, [0.5, 0.5], box_region(hd, [0.5, 0.5], 0.05))
    assert not rep.valid
    w = rep.worst()
    assert (w.population, w.strategy) == (0, 1)
    assert w.value == pytest.approx(0.05)
    np.testing.assert_allclose(w.state, [0.55, 0.45])


def test_point_region_at_nash_is_valid(platform):
    x = platform.states["xo"]
    n = platform.ambient_dim
    region = PolyhedralRegion(np.vstack([np.eye(n), -np.eye(n)]), np.concatenate([x, -x]))
    assert u_validity(platform, x, region).valid


def test_empty_region_is_vacuous(hd):
    region = PolyhedralRegion([[1.0, 0.0]], [-0.5])  # y_H <= -0.5 misses X
    rep = u_validity(hd, [0.5, 0.5], region)
    assert rep.valid and rep.empty_region


def test_candidate_outside_region_is_flagged(boundary):
    region = PolyhedralRegion([[1.0, 0.0]], [0.5])
    rep = u_validity(boundary, [1, 0], region)
    assert not rep.candidate_in_region
    assert rep.valid


def test_region_dimension_mismatch(hd):
    with pytest.raises(ValueError):
        u_validity(hd, [0.5, 0.5], PolyhedralRegion([[1.0, 0.0, 0.0]], [1.0]))


def test_box_region_examples(rps, boundary):
    big = box_region(rps, np.full(3, 1 / 3), 2.0)
    for v in np.eye(3):
        assert big.contains(v)
    small = box_region(rps, np.full(3, 1 / 3), 0.01)
    assert small.contains(np.full(3, 1 / 3))
    assert not small.contains([0.35, 0.32, 0.33])
    edge = box_region(boundary, [1, 0], 0.1)
    assert edge.contains([0.9, 0.1]) and not edge.contains([0.85, 0.15])
    with pytest.raises(ValueError):
        box_region(rps, np.full(3, 1 / 3), 0.0)


def test_shrinking_examples(boundary, hd, platform):
    rep = shrinking_diagnostic(boundary, [1, 0], 0.5, 8)
    assert all(lv.valid for lv in rep.levels) and rep.verdict and rep.stable
    rep = shrinking_diagnostic(hd, [0.5, 0.5], 0.5, 8)
    assert not any(lv.valid for lv in rep.levels) and not rep.verdict
    rep = shrinking_diagnostic(platform, platform.states["xA"], 0.25, 8)
    assert rep.verdict and all(lv.valid for lv in rep.levels[-5:])
    assert [lv.radius for lv in rep.levels[:3]] == [0.25, 0.125, 0.0625]


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_worst_value_matches_gap_at_worst_state(seed):
    rng = np.random.default_rng(seed)
    g = random_game(rng, sizes=(2, 3))
    x = random_state(g, rng)
    rep = u_validity(g, x, box_region(g, x, float(rng.uniform(0.01, 0.5))))
    for e in rep.entries:
        assert pure_gap(g, x, e.state, e.population, e.strategy) == pytest.approx(e.value, abs=1e-9)
        a, c = gap_affine_form(g, x, e.population, e.strategy)
        assert a @ e.state + c == pytest.approx(e.value, abs=1e-9)


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_lp_maximum_dominates_samples(seed):
    rng = np.random.default_rng(seed)
    g = random_game(rng, sizes=(3, 2))
    x = random_state(g, rng)
    r = float(rng.uniform(0.02, 0.3))
    region = box_region(g, x, r)
    rep = u_validity(g, x, region)
    best = {(e.population, e.strategy): e.value for e in rep.entries}
    for _ in range(200):
        y = random_state(g, rng)
        y = g.state(x + min(1.0, r / np.max(np.abs(y - x))) * (y - x))
        for pair, v in best.items():
            assert pure_gap(g, x, y, *pair) <= v + 1e-9


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_shrinking_agrees_with_membership_on_random_games(seed):
    rng = np.random.default_rng(seed)
    g = random_game(rng, sizes=(2, 2))
    for cand in nash_support_enumeration(g):
        rep = shrinking_diagnostic(g, cand.state, 0.5, 12)
        assert rep.verdict == sre_membership(g, cand.state).is_sre
