"""Reported-state validity over polyhedral uncertainty regions.

A candidate ``x`` is valid on a region ``U`` when every pure gap
``h_{p,i}(y; x)`` is nonpositive for all ``y`` in ``U`` intersected with X.
Each gap is affine in ``y``, so the check is one LP per pure strategy.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import config
from .game import PopulationGame, gap_constant, gap_gradient
from .lp import LinearProgram, LpError, LpStatus, solve


@dataclass(frozen=True)
class PolyhedralRegion:
    """Halfspaces ``coeffs[k] . y <= rhs[k]``; the state space X is always added."""

    coeffs: np.ndarray
    rhs: np.ndarray

    def __post_init__(self):
        C = np.asarray(self.coeffs, dtype=float)
        if C.ndim == 1:
            C = C.reshape(1, -1) if C.size else C.reshape(0, 0)
        r = np.asarray(self.rhs, dtype=float).reshape(-1)
        if C.shape[0] != r.size:
            raise ValueError("one right-hand side per halfspace required")
        if not (np.all(np.isfinite(C)) and np.all(np.isfinite(r))):
            raise ValueError("region has non-finite coefficients")
        C.setflags(write=False)
        r.setflags(write=False)
        object.__setattr__(self, "coeffs", C)
        object.__setattr__(self, "rhs", r)

    @classmethod
    def from_halfspaces(cls, halfspaces, dim: int) -> "PolyhedralRegion":
        halfspaces = list(halfspaces)
        if not halfspaces:
            return cls(np.zeros((0, dim)), np.zeros(0))
        return cls([h[0] for h in halfspaces], [h[1] for h in halfspaces])

    def halfspaces(self):
        return [(row, float(r)) for row, r in zip(self.coeffs, self.rhs)]

    def contains(self, y, tol: float = config.LP_FEAS_TOL) -> bool:
        if not self.rhs.size:
            return True
        return bool(np.all(self.coeffs @ np.asarray(y, dtype=float) <= self.rhs + tol))


@dataclass(frozen=True)
class WorstCase:
    population: int
    strategy: int
    value: float
    state: np.ndarray | None


@dataclass(frozen=True)
class UValidityReport:
    valid: bool
    entries: list[WorstCase] = field(default_factory=list)
    empty_region: bool = False
    candidate_in_region: bool = True

    def worst(self) -> WorstCase | None:
        if not self.entries:
            return None
        return max(self.entries, key=lambda e: e.value)


def _region_lp(game: PopulationGame, region: PolyhedralRegion, objective) -> LinearProgram:
    n = game.ambient_dim
    if region.coeffs.size and region.coeffs.shape[1] != n:
        raise ValueError(f"region has {region.coeffs.shape[1]} columns, expected {n}")
    E = np.zeros((game.num_populations, n))
    for q, sl in enumerate(game.blocks()):
        E[q, sl] = 1.0
    upper = np.concatenate([np.full(pop.size, pop.mass) for pop in game.populations])
    return LinearProgram(
        objective,
        A_eq=E, b_eq=game.masses,
        A_ub=region.coeffs if region.rhs.size else None,
        b_ub=region.rhs if region.rhs.size else None,
        lower=np.zeros(n), upper=upper,
    )


def u_validity(game: PopulationGame, x, region: PolyhedralRegion, *,
               zero_tol: float = config.ZERO_TOL) -> UValidityReport:
    """Maximize every pure gap against ``x`` over the region.

    An empty region (after intersecting with X) is reported as vacuously valid
    with ``empty_region`` set. ``candidate_in_region`` flags reports whose
    candidate lies outside its own region, which the check permits.
    """
    x = game.state(x)
    inside = region.contains(x)
    entries = []
    for p, i in game.pairs():
        lp = _region_lp(game, region, gap_gradient(game, x, p, i))
        sol = solve(lp)
        if sol.status is LpStatus.INFEASIBLE:
            return UValidityReport(True, [], empty_region=True, candidate_in_region=inside)
        if not sol.optimal:
            raise LpError(f"region LP for {game.label(p, i)} returned {sol.status.value}")
        y = game.state(sol.point, tol=config.LP_CHECK_TOL)
        entries.append(WorstCase(p, i, sol.value + gap_constant(game, x, p, i), y))
    valid = all(e.value <= zero_tol for e in entries)
    return UValidityReport(valid, entries, False, inside)


def box_region(game: PopulationGame, x, r: float) -> PolyhedralRegion:
    """The sup-norm ball ``|y_k - x_k| <= r`` around ``x``."""
    if not r > 0:
        raise ValueError("box radius must be positive")
    x = game.state(x)
    n = game.ambient_dim
    eye = np.eye(n)
    return PolyhedralRegion(np.vstack([eye, -eye]), np.concatenate([x + r, -(x - r)]))


@dataclass(frozen=True)
class ShrinkingLevel:
    level: int
    radius: float
    valid: bool
    worst: WorstCase | None


@dataclass(frozen=True)
class ShrinkingReport:
    levels: list[ShrinkingLevel]
    verdict: bool
    stable: bool


def shrinking_diagnostic(game: PopulationGame, x, r0: float = 0.5, m_max: int = 12, *,
                         zero_tol: float = config.ZERO_TOL) -> ShrinkingReport:
    """Validity on boxes of radius ``r0 * 2**-m`` for ``m = 0..m_max``.

    The verdict is the last level's; ``stable`` says the last three levels
    agree. Eventual stabilization is guaranteed but no threshold is
    computable, so the full trace is returned.
    """
    if not r0 > 0 or m_max < 1:
        raise ValueError("need r0 > 0 and m_max >= 1")
    levels = []
    for m in range(m_max + 1):
        radius = r0 * 2.0 ** -m
        rep = u_validity(game, x, box_region(game, x, radius), zero_tol=zero_tol)
        levels.append(ShrinkingLevel(m, radius, rep.valid, rep.worst()))
    tail = [lv.valid for lv in levels[-3:]]
    return ShrinkingReport(levels, levels[-1].valid, len(set(tail)) == 1)


def gap_affine_form(game: PopulationGame, x, p: int, i: int):
    """``(a, c)`` with ``h_{p,i}(y; x) = a . y + c`` for every ``y``."""
    return gap_gradient(game, x, p, i), gap_constant(game, x, p, i)
