import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from srediag import gallery as G
from srediag.game import (
    InvalidGameError,
    InvalidStateError,
    PopulationGame,
    PopulationSpec,
    best_response_set,
    evaluate_payoffs,
    gap_constant,
    gap_gradient,
    gap_table,
    is_nash,
    is_strict_pure_nash,
    pure_gap,
    strict_margin,
)
from srediag.oracle import csnb_property


def random_game(rng, sizes=(2, 3), masses=None):
    masses = masses or [1.0] * len(sizes)
    n = sum(sizes)
    pops = [PopulationSpec(f"p{k}", m, [f"s{j}" for j in range(s)]) for k, (s, m) in enumerate(zip(sizes, masses))]
    A = [rng.normal(size=(s, n)) for s in sizes]
    b = [rng.normal(size=s) for s in sizes]
    return PopulationGame(pops, A, b)


def random_state(game, rng):
    parts = [pop.mass * rng.dirichlet(np.ones(pop.size)) for pop in game.populations]
    return game.state(np.concatenate(parts))


# -- payoffs ------------------------------------------------------------------

def test_hawk_dove_payoffs_at_half(hd):
    F = evaluate_payoffs(hd, [0.5, 0.5])[0]
    np.testing.assert_allclose(F, [0.5, 0.5], atol=1e-12)


def test_hawk_dove_payoffs_match_closed_form_on_grid(hd):
    V, C = 2.0, 4.0
    for xh in np.linspace(0, 1, 5):
        F = evaluate_payoffs(hd, [xh, 1 - xh])[0]
        assert F[0] == pytest.approx(V - (V + C) / 2 * xh)
        assert F[1] == pytest.approx(V / 2 * (1 - xh))


def test_rps_payoffs_zero_at_barycenter(rps):
    np.testing.assert_allclose(evaluate_payoffs(rps, np.full(3, 1 / 3))[0], 0.0, atol=1e-15)


def test_standards_payoffs_at_e1():
    g = G.standards((3, 2, 0), 0.5)
    np.testing.assert_allclose(evaluate_payoffs(g, [1, 0, 0])[0], [3.5, 2.0, 0.0])


def test_evaluate_rejects_infeasible_state(hd):
    with pytest.raises(InvalidStateError):
        evaluate_payoffs(hd, [0.7, 0.7])
    with pytest.raises(InvalidStateError):
        evaluate_payoffs(hd, [1.2, -0.2])
    with pytest.raises(InvalidStateError):
        evaluate_payoffs(hd, [1.0])


# -- gaps -----------------------------------------------------------------

def test_hawk_dove_dove_gap_off_candidate(hd):
    assert pure_gap(hd, [0.5, 0.5], [0.75, 0.25], 0, 1) == pytest.approx(0.25)


def test_gap_of_played_pure_strategy_is_zero(platform):
    x = platform.states["xA"]
    assert pure_gap(platform, x, x, 0, 0) == 0.0
    assert pure_gap(platform, x, x, 1, 0) == 0.0


def test_boundary_gap_is_minus_y2(boundary):
    assert pure_gap(boundary, [1, 0], [0.9, 0.1], 0, 1) == pytest.approx(-0.1)


def test_gap_table_examples(rps, platform):
    assert all(abs(v) < 1e-15 for v in gap_table(rps, np.full(3, 1 / 3)).values())
    t = gap_table(G.coordination(3), [1, 0, 0])
    assert t == {(0, 0): 0.0, (0, 1): -1.0, (0, 2): -1.0}
    assert all(abs(v) < 1e-15 for v in gap_table(platform, platform.states["xo"]).values())


def test_best_response_sets(hd, identity):
    assert best_response_set(hd, [0.5, 0.5], 0) == {0, 1}
    assert best_response_set(hd, [0.75, 0.25], 0) == {1}
    assert best_response_set(identity, [0.6, 0.38, 0.02], 0) == {0, 1}


def test_is_nash_examples(platform):
    assert is_nash(platform, platform.states["xA"])[0]
    ok, viol = is_nash(G.coordination(2), [0.7, 0.3])
    assert not ok and [(p, i) for p, i, _ in viol] == [(0, 0)]
    assert viol[0][2] == pytest.approx(0.12)
    ok, viol = is_nash(G.standards((3, 2, 0), 0.5), [0, 1, 0])
    assert not ok
    assert [(p, i) for p, i, _ in viol] == [(0, 0)]
    assert viol[0][2] == pytest.approx(0.5)


def test_gap_gradient_examples(rps, boundary):
    np.testing.assert_allclose(gap_gradient(rps, np.full(3, 1 / 3), 0, 0), [0, -1, 1], atol=1e-15)
    np.testing.assert_allclose(gap_gradient(boundary, [1, 0], 0, 1), [0, -1])


def test_gradient_of_whole_candidate_is_zero_for_single_strategy():
    pops = [PopulationSpec("solo", 2.0, ["only"]), PopulationSpec("duo", 1.0, ["a", "b"])]
    g = PopulationGame(pops, [np.array([[1.0, 2.0, 3.0]]), np.eye(3)[1:]], [np.zeros(1), np.zeros(2)])
    x = g.state([2.0, 0.5, 0.5])
    np.testing.assert_allclose(gap_gradient(g, x, 0, 0), 0.0)


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_gap_is_affine_in_evaluation_state(seed):
    rng = np.random.default_rng(seed)
    g = random_game(rng, sizes=(2, 3), masses=[1.0, 2.5])
    x, y, z = (random_state(g, rng) for _ in range(3))
    t = rng.uniform()
    w = g.state((1 - t) * y + t * z)
    for p, i in g.pairs():
        lhs = pure_gap(g, x, w, p, i)
        rhs = (1 - t) * pure_gap(g, x, y, p, i) + t * pure_gap(g, x, z, p, i)
        assert lhs == pytest.approx(rhs, abs=1e-10)


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_gradient_and_constant_reproduce_gap_exactly(seed):
    rng = np.random.default_rng(seed)
    g = random_game(rng, sizes=(3, 2), masses=[0.5, 1.5])
    x, y = random_state(g, rng), random_state(g, rng)
    for p, i in g.pairs():
        exact = pure_gap(g, x, y, p, i)
        assert gap_gradient(g, x, p, i) @ y + gap_constant(g, x, p, i) == pytest.approx(exact, abs=1e-10)
        # directional derivative equals the finite difference (the map is affine)
        d = y - x
        fd = pure_gap(g, x, x + 0.5 * d, p, i) - pure_gap(g, x, x, p, i)
        assert gap_gradient(g, x, p, i) @ (0.5 * d) == pytest.approx(fd, abs=1e-10)


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_payoff_scaling_invariance_of_nash(seed):
    rng = np.random.default_rng(seed)
    g = random_game(rng, sizes=(2, 2))
    x = random_state(g, rng)
    scaled = g.with_payoffs(A=[3.0 * a for a in g.A], b=[3.0 * b for b in g.b])
    assert is_nash(g, x)[0] == is_nash(scaled, x)[0]


# -- candidate-state blocking -----------------------------------------------

def test_csnb_examples(platform):
    assert csnb_property(G.coordination(2), [0.7, 0.3])
    assert csnb_property(platform, platform.states["xo"])
    assert csnb_property(G.hawk_dove(), [0.5, 0.5])


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_csnb_equals_nash_on_random_games(seed):
    rng = np.random.default_rng(seed)
    g = random_game(rng, sizes=(2, 3, 2))
    assert csnb_property(g, random_state(g, rng), trials=100, seed=seed)


# -- validation ---------------------------------------------------------------

def test_population_validation():
    with pytest.raises(InvalidGameError):
        PopulationSpec("p", 0.0, ["a"])
    with pytest.raises(InvalidGameError):
        PopulationSpec("p", 1.0, [])
    with pytest.raises(InvalidGameError):
        PopulationSpec("p", 1.0, ["a", "a"])


def test_game_shape_validation():
    pop = PopulationSpec("p", 1.0, ["a", "b"])
    with pytest.raises(InvalidGameError):
        PopulationGame([pop], [np.zeros((2, 3))], [np.zeros(2)])
    with pytest.raises(InvalidGameError):
        PopulationGame([pop], [np.zeros((2, 2))], [np.zeros(3)])
    with pytest.raises(InvalidGameError):
        PopulationGame([pop], [np.full((2, 2), np.nan)], [np.zeros(2)])


def test_state_is_clamped_and_readonly(hd):
    x = hd.state([1.0 + 5e-10, -5e-10])
    assert x.min() >= 0 and x.sum() == pytest.approx(1.0)
    with pytest.raises(ValueError):
        x[0] = 0.3


def test_mass_scaling():
    pops = [PopulationSpec("big", 3.0, ["a", "b"])]
    g = PopulationGame(pops, [np.array([[1.0, 0.0], [0.0, 1.0]])], [np.zeros(2)])
    x = g.state([2.0, 1.0])
    F = evaluate_payoffs(g, x)[0]
    np.testing.assert_allclose(F, [2.0, 1.0])
    assert gap_table(g, x)[(0, 0)] == pytest.approx(3 * 2.0 - (2 * 2 + 1 * 1))


# -- gallery ----------------------------------------------------------------

def test_hawk_dove_constructor():
    g = G.hawk_dove(2, 4)
    assert g.num_populations == 1
    np.testing.assert_array_equal(g.A[0], [[-3, 0], [-1, 0]])
    np.testing.assert_array_equal(g.b[0], [2, 1])
    with pytest.raises(InvalidGameError):
        G.hawk_dove(4, 2)


def test_rps_constructor(rps):
    np.testing.assert_array_equal(rps.A[0], [[0, -1, 1], [1, 0, -1], [-1, 1, 0]])
    np.testing.assert_array_equal(rps.b[0], 0)


def test_platform_constructor(platform):
    assert platform.num_populations == 2
    assert list(platform.masses) == [1.0, 1.0]
    assert [p.size for p in platform.populations] == [2, 2]


def test_every_named_state_of_catalog_is_feasible_and_nash():
    for g in G.default_catalog():
        for name, x in g.states.items():
            assert is_nash(g, g.state(x))[0], (g.name, name)


def test_strict_pure_helpers(platform):
    assert is_strict_pure_nash(platform, platform.states["xA"])
    assert strict_margin(platform, platform.states["xA"]) == pytest.approx(1.0)
    assert not is_strict_pure_nash(platform, platform.states["xo"])
    assert not is_strict_pure_nash(G.boundary_example(), [1, 0])


def test_gallery_lookup_errors():
    with pytest.raises(KeyError):
        G.gallery("nope")
    with pytest.raises(InvalidGameError):
        G.gallery("rps", bogus=1)
