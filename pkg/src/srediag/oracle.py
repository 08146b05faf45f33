"""Sampling and property oracles that never touch the cone or LP code.

``sample_exposure`` looks for strict improvements at random interior states
near the candidate, evaluating payoffs directly. Random draws come from a
counter-based scheme: the batch for radius level ``k`` uses the stream
``SeedSequence([seed, k])``, so batches can be evaluated in any order (or in
parallel) and still reproduce bit for bit.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import config
from .diagnostics import NonGenericError, binary_classify, sre_membership
from .game import PopulationGame, gap_table, is_strict_pure_nash, strict_margin


@dataclass(frozen=True)
class SamplingConfig:
    radii: tuple[float, ...] = (1e-2, 1e-3, 1e-4)
    samples_per_radius: int = 2000
    seed: int = 0

    def __post_init__(self):
        radii = tuple(float(r) for r in self.radii)
        if not radii or any(r <= 0 for r in radii):
            raise ValueError("radii must be positive")
        if any(b >= a for a, b in zip(radii, radii[1:])):
            raise ValueError("radii must be strictly decreasing")
        if self.samples_per_radius < 1:
            raise ValueError("samples_per_radius must be at least 1")
        object.__setattr__(self, "radii", radii)


@dataclass(frozen=True)
class Evidence:
    """Outcome of sampling for one pure deviation.

    ``exposed`` requires a strict improvement at every radius level;
    ``witness`` is one improving state from the smallest radius.
    """

    population: int
    strategy: int
    exposed: bool
    hits: tuple[int, ...]
    witness: np.ndarray | None
    witness_gap: float | None


def _interior_draws(game: PopulationGame, rng: np.random.Generator, count: int) -> np.ndarray:
    # symmetric Dirichlet per block via normalized exponential variates
    E = rng.standard_exponential((count, game.ambient_dim))
    out = np.empty_like(E)
    for p, sl in enumerate(game.blocks()):
        block = E[:, sl]
        out[:, sl] = game.populations[p].mass * block / block.sum(axis=1, keepdims=True)
    return out


def _payoffs(game: PopulationGame, Y: np.ndarray) -> list[np.ndarray]:
    return [Y @ Ap.T + bp for Ap, bp in zip(game.A, game.b)]


def sample_exposure(game: PopulationGame, x, cfg: SamplingConfig = SamplingConfig(), *,
                    margin: float = config.SAMPLING_MARGIN) -> dict[tuple[int, int], Evidence]:
    """Sample ``y = (1 - t) x + t w`` with ``w`` interior and ``|y - x|_inf = r``.

    A sample counts as a hit for ``(p, i)`` when ``m_p F_{p,i}(y) - x_p . F_p(y)``
    exceeds ``margin``.
    """
    x = game.state(x)
    hits = {pair: [] for pair in game.pairs()}
    witness = {}
    for level, r in enumerate(cfg.radii):
        rng = np.random.default_rng(np.random.SeedSequence([cfg.seed, level]))
        W = _interior_draws(game, rng, cfg.samples_per_radius)
        dist = np.max(np.abs(W - x), axis=1)
        t = np.minimum(1.0, r / np.maximum(dist, np.finfo(float).tiny))
        Y = x + t[:, None] * (W - x)
        F = _payoffs(game, Y)
        for p, pop in enumerate(game.populations):
            base = F[p] @ x[game.block(p)]
            for i in range(pop.size):
                gaps = pop.mass * F[p][:, i] - base
                good = gaps > margin
                hits[(p, i)].append(int(good.sum()))
                if good.any():
                    k = int(np.argmax(good))
                    witness[(p, i)] = (Y[k].copy(), float(gaps[k]))
    out = {}
    for pair, counts in hits.items():
        exposed = all(c > 0 for c in counts)
        w = witness.get(pair) if exposed else None
        out[pair] = Evidence(pair[0], pair[1], exposed, tuple(counts),
                             None if w is None else w[0], None if w is None else w[1])
    return out


def payoff_perturbation_check(game: PopulationGame, x, fraction: float = 0.9, trials: int = 50,
                              seed: int = 0) -> bool:
    """Perturb every ``b_p`` by uniform noise of sup-norm below ``fraction * Delta / 4``.

    ``Delta`` is the smallest strict payoff margin at the strict pure state ``x``.
    Returns whether ``x`` stays state-robust in every perturbed game.
    """
    x = game.state(x)
    if not is_strict_pure_nash(game, x):
        raise ValueError("payoff_perturbation_check needs a strict pure Nash state")
    if not 0 <= fraction < 1:
        raise ValueError("fraction must lie in [0, 1)")
    if fraction == 0:
        return True
    delta = strict_margin(game, x)
    if not np.isfinite(delta):
        delta = 1.0  # every population has one strategy; nothing can deviate
    eta = fraction * delta / 4.0
    rng = np.random.default_rng(np.random.SeedSequence([seed, 0]))
    for _ in range(trials):
        b = [bp + rng.uniform(-eta, eta, size=bp.shape) for bp in game.b]
        if not sre_membership(game.with_payoffs(b=b, states={}), x).is_sre:
            return False
    return True


def csnb_property(game: PopulationGame, x, trials: int = 200, seed: int = 0,
                  tol: float = config.ZERO_TOL, max_pure: int = 20_000) -> bool:
    """Check that candidate-state blocking happens iff a singleton pure improvement exists.

    Blocking is searched exhaustively over coalitions and pure proposals (up
    to ``max_pure`` proposals) and over ``trials`` random coalitions with
    random mixed proposals, all with payoffs evaluated at ``x``.
    """
    x = game.state(x)
    P = game.num_populations
    F = [Ap @ x + bp for Ap, bp in zip(game.A, game.b)]
    own = [F[p] @ x[game.block(p)] for p in range(P)]

    def improves(p, z):
        return z @ F[p] > own[p] + tol

    blocked = False
    checked = 0
    for k in range(1, P + 1):
        for coalition in itertools.combinations(range(P), k):
            for profile in itertools.product(*(range(game.populations[p].size) for p in coalition)):
                checked += 1
                if checked > max_pure:
                    break
                if all(improves(p, game.populations[p].mass * np.eye(game.populations[p].size)[i])
                       for p, i in zip(coalition, profile)):
                    blocked = True
    rng = np.random.default_rng(np.random.SeedSequence([seed, 1]))
    for _ in range(trials):
        size = int(rng.integers(1, P + 1))
        coalition = rng.choice(P, size=size, replace=False)
        props = []
        for p in coalition:
            e = rng.standard_exponential(game.populations[p].size)
            props.append((p, game.populations[p].mass * e / e.sum()))
        if all(improves(p, z) for p, z in props):
            blocked = True

    singleton = any(g > tol for g in gap_table(game, x).values())
    return blocked == singleton


@dataclass(frozen=True)
class EssReport:
    pure_ess: list[tuple[float, float]]
    mixed_ess: tuple[float, float] | None
    sre: list[tuple[float, float]]
    divergence: bool


def ess_binary(m11: float, m12: float, m21: float, m22: float, grid: int = 999) -> EssReport:
    """ESS and SRE sets of a generic binary symmetric game.

    With ``q`` the mass on strategy 2 and
    ``Delta(q) = (m11 - m21)(1 - q) + (m12 - m22) q``, an interior crossing
    ``q*`` is checked against mutants on a grid of ``q`` values by the
    inequality ``(q - q*) Delta(q) > 0``. That is a finite check, not a proof.
    """
    if m11 == m21 or m22 == m12:
        raise NonGenericError("non-generic binary game (m11 == m21 or m22 == m12)")

    def delta(q):
        return (m11 - m21) * (1 - q) + (m12 - m22) * q

    pure = []
    if m11 > m21:
        pure.append((1.0, 0.0))
    if m22 > m12:
        pure.append((0.0, 1.0))
    mixed = None
    d0, d1 = m11 - m21, m12 - m22
    if d0 != d1:
        q_star = d0 / (d0 - d1)
        if 0 < q_star < 1:
            qs = np.linspace(0.0, 1.0, grid + 2)
            qs = qs[np.abs(qs - q_star) > 1e-12]
            if np.all((qs - q_star) * delta(qs) > 0):
                mixed = (1.0 - q_star, q_star)
    _, sre = binary_classify(m11, m12, m21, m22)
    ess_states = pure + ([mixed] if mixed is not None else [])
    divergence = any(s not in sre for s in ess_states)
    return EssReport(pure, mixed, sre, divergence)
