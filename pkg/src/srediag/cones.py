"""Tangent and normal cones of the product simplex at a state."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import config
from .game import PopulationGame
from .lp import LinearProgram


@dataclass(frozen=True)
class TangentConeRep:
    """H-representation of ``T_x X``.

    One zero-sum equality per population block, and ``d_j >= 0`` for every
    inactive coordinate (``x_j <= support_tol``).
    """

    blocks: tuple[slice, ...]
    inactive: np.ndarray  # bool mask over ambient coordinates

    @property
    def dim(self) -> int:
        return self.inactive.size

    def equality_matrix(self) -> np.ndarray:
        E = np.zeros((len(self.blocks), self.dim))
        for q, sl in enumerate(self.blocks):
            E[q, sl] = 1.0
        return E

    def contains(self, d, tol: float = config.EQUALITY_TOL) -> bool:
        d = np.asarray(d, dtype=float)
        if np.any(np.abs(self.equality_matrix() @ d) > tol):
            return False
        return bool(np.all(d[self.inactive] >= -tol))

    def normalized_lp(self, objective) -> LinearProgram:
        """``max objective . d`` over the cone intersected with ``|d|_inf <= 1``."""
        lower = np.where(self.inactive, 0.0, -1.0)
        return LinearProgram(
            objective,
            A_eq=self.equality_matrix(),
            b_eq=np.zeros(len(self.blocks)),
            lower=lower,
            upper=np.ones(self.dim),
        )


def tangent_cone(game: PopulationGame, x, support_tol: float = config.SUPPORT_TOL) -> TangentConeRep:
    x = game.state(x)
    inactive = x <= support_tol
    inactive.setflags(write=False)
    return TangentConeRep(tuple(game.blocks()), inactive)


def in_relative_interior(cone: TangentConeRep, d, tol: float = config.STRICT_TOL,
                         eq_tol: float = config.EQUALITY_TOL) -> bool:
    """Strict positivity at every inactive coordinate of a zero-sum direction.

    A one-strategy population has the block ``{0}``, whose relative interior
    is ``{0}``; its zero block therefore counts as strictly feasible.
    """
    d = np.asarray(d, dtype=float)
    sums = cone.equality_matrix() @ d
    if np.any(np.abs(sums) > eq_tol):
        raise ValueError(f"direction violates a zero-sum equality (residual {np.max(np.abs(sums)):.3g})")
    return bool(np.all(d[cone.inactive] > tol))


def normal_cone_contains(game: PopulationGame, x, a, tol: float = config.CONE_TOL,
                         support_tol: float = config.SUPPORT_TOL):
    """Test ``a`` in ``N_X(x)`` block by block.

    Per population the vector must be constant on the support and no larger
    off the support. Returns ``(inside, levels)`` where ``levels[q]`` is the
    common support value of block ``q``.
    """
    x = game.state(x)
    a = np.asarray(a, dtype=float).reshape(-1)
    if a.shape != (game.ambient_dim,):
        raise ValueError(f"vector has length {a.size}, expected {game.ambient_dim}")
    inside = True
    levels = []
    for sl in game.blocks():
        on = x[sl] > support_tol
        vals = a[sl]
        level = float(np.max(vals[on]))
        levels.append(level)
        if np.any(vals[on] < level - tol) or np.any(vals[~on] > level + tol):
            inside = False
    return inside, levels
