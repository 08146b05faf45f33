"""Population games with affine payoffs.

A game is a list of populations, each with a positive mass and an ordered
strategy set, plus an affine payoff model ``F_p(y) = A_p y + b_p`` written
against the full ambient state vector. States are 1-d float arrays whose
blocks (one per population, in declaration order) lie on the simplex of the
population's mass.

Payoffs are reported in aggregate form: ``z_p . F_p(y)`` for a distribution
``z_p`` of mass ``m_p``. Dividing by ``m_p`` gives per-capita payoffs; the
scaling never changes a comparison.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from . import config


class InvalidGameError(ValueError):
    pass


class InvalidStateError(ValueError):
    pass


def _readonly(arr) -> np.ndarray:
    out = np.array(arr, dtype=float)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class PopulationSpec:
    name: str
    mass: float
    strategies: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "mass", float(self.mass))
        object.__setattr__(self, "strategies", tuple(str(s) for s in self.strategies))
        if not np.isfinite(self.mass) or self.mass <= 0:
            raise InvalidGameError(f"population {self.name!r}: mass must be positive, got {self.mass}")
        if len(self.strategies) < 1:
            raise InvalidGameError(f"population {self.name!r}: needs at least one strategy")
        if len(set(self.strategies)) != len(self.strategies):
            raise InvalidGameError(f"population {self.name!r}: duplicate strategy labels")

    @property
    def size(self) -> int:
        return len(self.strategies)


@dataclass(frozen=True)
class PopulationGame:
    """An affine finite-strategy population game.

    ``A[p]`` has shape ``(n_p, n)`` and ``b[p]`` shape ``(n_p,)`` where ``n`` is
    the ambient dimension. ``states`` holds optional named states (already
    validated), e.g. the documented candidates of a gallery game.
    """

    populations: tuple[PopulationSpec, ...]
    A: tuple[np.ndarray, ...]
    b: tuple[np.ndarray, ...]
    states: Mapping[str, np.ndarray] = field(default_factory=dict)
    name: str = ""
    offsets: tuple[int, ...] = field(init=False, repr=False)
    ambient_dim: int = field(init=False, repr=False)

    def __post_init__(self):
        pops = tuple(self.populations)
        if not pops:
            raise InvalidGameError("a game needs at least one population")
        if len({p.name for p in pops}) != len(pops):
            raise InvalidGameError("duplicate population names")
        offsets, n = [], 0
        for pop in pops:
            offsets.append(n)
            n += pop.size
        object.__setattr__(self, "populations", pops)
        object.__setattr__(self, "offsets", tuple(offsets))
        object.__setattr__(self, "ambient_dim", n)

        if len(self.A) != len(pops) or len(self.b) != len(pops):
            raise InvalidGameError("need one (A_p, b_p) pair per population")
        A, b = [], []
        for pop, Ap, bp in zip(pops, self.A, self.b):
            Ap = np.atleast_2d(np.asarray(Ap, dtype=float))
            bp = np.asarray(bp, dtype=float).reshape(-1)
            if Ap.shape != (pop.size, n):
                raise InvalidGameError(
                    f"population {pop.name!r}: A has shape {Ap.shape}, expected {(pop.size, n)}")
            if bp.shape != (pop.size,):
                raise InvalidGameError(
                    f"population {pop.name!r}: b has length {bp.size}, expected {pop.size}")
            if not (np.all(np.isfinite(Ap)) and np.all(np.isfinite(bp))):
                raise InvalidGameError(f"population {pop.name!r}: non-finite payoff coefficients")
            A.append(_readonly(Ap))
            b.append(_readonly(bp))
        object.__setattr__(self, "A", tuple(A))
        object.__setattr__(self, "b", tuple(b))

        # named states keep their raw coordinates (exact document round trips);
        # analysis entry points normalize through state()
        named = {}
        for key, coords in dict(self.states).items():
            try:
                self.state(coords)
            except InvalidStateError as exc:
                raise InvalidGameError(f"named state {key!r}: {exc}") from exc
            named[str(key)] = _readonly(np.asarray(coords, dtype=float).reshape(-1))
        object.__setattr__(self, "states", named)

    # -- layout ---------------------------------------------------------
    @property
    def num_populations(self) -> int:
        return len(self.populations)

    @property
    def masses(self) -> np.ndarray:
        return np.array([p.mass for p in self.populations])

    def block(self, p: int) -> slice:
        start = self.offsets[p]
        return slice(start, start + self.populations[p].size)

    def blocks(self) -> list[slice]:
        return [self.block(p) for p in range(self.num_populations)]

    def pairs(self) -> list[tuple[int, int]]:
        """All (population, strategy) index pairs in declaration order."""
        return [(p, i) for p, pop in enumerate(self.populations) for i in range(pop.size)]

    def label(self, p: int, i: int) -> str:
        return f"{self.populations[p].name}:{self.populations[p].strategies[i]}"

    def strategy_index(self, p: int | str, i: int | str) -> tuple[int, int]:
        if isinstance(p, str):
            names = [pop.name for pop in self.populations]
            if p not in names:
                raise KeyError(f"unknown population {p!r}")
            p = names.index(p)
        if isinstance(i, str):
            labels = self.populations[p].strategies
            if i not in labels:
                raise KeyError(f"unknown strategy {i!r} in population {self.populations[p].name!r}")
            i = labels.index(i)
        self._check_pair(p, i)
        return p, i

    def _check_pair(self, p: int, i: int) -> None:
        if not 0 <= p < self.num_populations:
            raise IndexError(f"population index {p} out of range")
        if not 0 <= i < self.populations[p].size:
            raise IndexError(f"strategy index {i} out of range for population {p}")

    # -- states ---------------------------------------------------------
    def state(self, coords, tol: float = config.FEAS_TOL) -> np.ndarray:
        """Validate ``coords`` as a point of X and return an exactly feasible copy.

        Coordinates down to ``-tol`` and block sums within ``tol`` of the mass are
        accepted, then clamped at zero and rescaled so each block sums to its mass.
        """
        x = np.asarray(coords, dtype=float).reshape(-1)
        if x.shape != (self.ambient_dim,):
            raise InvalidStateError(f"state has length {x.size}, expected {self.ambient_dim}")
        if not np.all(np.isfinite(x)):
            raise InvalidStateError("state has non-finite coordinates")
        if np.any(x < -tol):
            raise InvalidStateError(f"negative coordinate {x.min():.3g}")
        x = np.clip(x, 0.0, None)
        for p, sl in enumerate(self.blocks()):
            m = self.populations[p].mass
            total = x[sl].sum()
            if abs(total - m) > tol:
                raise InvalidStateError(
                    f"population {self.populations[p].name!r}: block sums to {total!r}, expected {m!r}")
            x[sl] *= m / total
        x.setflags(write=False)
        return x

    def support(self, x, p: int, tol: float = config.SUPPORT_TOL) -> list[int]:
        x = np.asarray(x, dtype=float)
        return [int(j) for j in np.flatnonzero(x[self.block(p)] > tol)]

    def pure_state(self, profile: Sequence[int]) -> np.ndarray:
        """The pure state putting each population's mass on ``profile[p]``."""
        x = np.zeros(self.ambient_dim)
        for p, i in enumerate(profile):
            self._check_pair(p, i)
            x[self.offsets[p] + i] = self.populations[p].mass
        return self.state(x)

    def barycenter(self) -> np.ndarray:
        x = np.concatenate([np.full(pop.size, pop.mass / pop.size) for pop in self.populations])
        return self.state(x)

    def with_payoffs(self, A=None, b=None, states=None) -> "PopulationGame":
        return PopulationGame(
            self.populations,
            self.A if A is None else A,
            self.b if b is None else b,
            self.states if states is None else states,
            self.name,
        )


# -- payoffs and gaps ---------------------------------------------------

def evaluate_payoffs(game: PopulationGame, y) -> list[np.ndarray]:
    """Per-population payoff vectors ``F_p(y) = A_p y + b_p``."""
    y = game.state(y)
    return [Ap @ y + bp for Ap, bp in zip(game.A, game.b)]


def pure_gap(game: PopulationGame, x, y, p: int, i: int) -> float:
    """``h_{p,i}(y; x) = m_p F_{p,i}(y) - x_p . F_p(y)``."""
    game._check_pair(p, i)
    x = game.state(x)
    Fp = evaluate_payoffs(game, y)[p]
    return float(game.populations[p].mass * Fp[i] - x[game.block(p)] @ Fp)


def gap_table(game: PopulationGame, x) -> dict[tuple[int, int], float]:
    """All pure gaps ``h_{p,i}(x; x)`` keyed by ``(p, i)``."""
    x = game.state(x)
    F = evaluate_payoffs(game, x)
    table = {}
    for p, pop in enumerate(game.populations):
        base = x[game.block(p)] @ F[p]
        for i in range(pop.size):
            table[(p, i)] = float(pop.mass * F[p][i] - base)
    return table


def best_response_set(game: PopulationGame, y, p: int, tol: float = config.FEAS_TOL) -> frozenset[int]:
    """Pure best responses of population ``p`` at ``y``; mixed ones are their hull."""
    Fp = evaluate_payoffs(game, y)[p]
    return frozenset(int(i) for i in np.flatnonzero(Fp >= Fp.max() - tol))


def is_nash(game: PopulationGame, x, tol: float = config.ZERO_TOL):
    """Return ``(ok, violations)`` where violations lists ``(p, i, gap)`` with gap > tol."""
    violations = [(p, i, g) for (p, i), g in gap_table(game, x).items() if g > tol]
    return not violations, violations


def gap_gradient(game: PopulationGame, x, p: int, i: int) -> np.ndarray:
    """Ambient representative ``a_{p,i}(x) = m_p A_{p,i.} - x_p^T A_p`` of the gap derivative.

    Only the functional it induces on zero-sum directions is meaningful; adding
    a per-population constant vector does not change any verdict.
    """
    game._check_pair(p, i)
    x = game.state(x)
    Ap = game.A[p]
    return game.populations[p].mass * Ap[i] - x[game.block(p)] @ Ap


def gap_constant(game: PopulationGame, x, p: int, i: int) -> float:
    """Constant term of the affine map ``y -> h_{p,i}(y; x)``."""
    x = game.state(x)
    bp = game.b[p]
    return float(game.populations[p].mass * bp[i] - x[game.block(p)] @ bp)


def is_strict_pure_nash(game: PopulationGame, x, tol: float = config.ZERO_TOL) -> bool:
    x = game.state(x)
    F = evaluate_payoffs(game, x)
    for p, pop in enumerate(game.populations):
        block = x[game.block(p)]
        chosen = np.flatnonzero(np.isclose(block, pop.mass, rtol=0, atol=config.SUPPORT_TOL))
        if chosen.size != 1:
            return False
        others = np.delete(F[p], chosen[0])
        if others.size and np.max(others) > F[p][chosen[0]] - tol:
            return False
    return True


def strict_margin(game: PopulationGame, x) -> float:
    """Smallest payoff advantage of the chosen strategy at a pure state.

    Populations with a single strategy are skipped; ``inf`` if none remain.
    """
    x = game.state(x)
    F = evaluate_payoffs(game, x)
    margin = np.inf
    for p, pop in enumerate(game.populations):
        if pop.size < 2:
            continue
        k = int(np.argmax(x[game.block(p)]))
        margin = min(margin, float(F[p][k] - np.max(np.delete(F[p], k))))
    return margin
