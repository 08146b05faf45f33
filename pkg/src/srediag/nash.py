"""Nash candidate generation by support enumeration.

For each support profile ``(K_p)_p`` the candidate solves the linear system

    x_{q,j} = 0                        for j outside K_q
    sum_j x_{q,j} = m_q                for every population q
    F_{q,j}(x) - F_{q,j0}(x) = 0       for j in K_q, j0 = min K_q

and is kept when it is nonnegative and Nash. Rank-deficient systems describe
a continuum of solutions; the minimum-norm point stands in for it and is
flagged. This is a candidate generator, not a complete description of the
Nash set's geometry.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass

import numpy as np

from . import config
from .game import InvalidStateError, PopulationGame, is_nash


class ComponentKind(enum.Enum):
    ISOLATED = "isolated"
    CONTINUUM_REPRESENTATIVE = "continuum_representative"


class SupportCapError(RuntimeError):
    pass


@dataclass(frozen=True)
class NashCandidate:
    state: np.ndarray
    kind: ComponentKind
    support: tuple[tuple[int, ...], ...]


def support_profile_count(game: PopulationGame) -> int:
    return math.prod(2 ** pop.size - 1 for pop in game.populations)


def _subsets(n):
    for k in range(1, n + 1):
        yield from itertools.combinations(range(n), k)


def _system(game: PopulationGame, profile):
    n = game.ambient_dim
    rows, rhs = [], []
    for q, (pop, supp) in enumerate(zip(game.populations, profile)):
        off = game.offsets[q]
        for j in range(pop.size):
            if j not in supp:
                e = np.zeros(n)
                e[off + j] = 1.0
                rows.append(e)
                rhs.append(0.0)
        s = np.zeros(n)
        s[game.block(q)] = 1.0
        rows.append(s)
        rhs.append(pop.mass)
        j0 = supp[0]
        for j in supp[1:]:
            rows.append(game.A[q][j] - game.A[q][j0])
            rhs.append(game.b[q][j0] - game.b[q][j])
    return np.array(rows), np.array(rhs)


def nash_support_enumeration(game: PopulationGame, *, cap: int = config.SUPPORT_PROFILE_CAP,
                             zero_tol: float = config.ZERO_TOL,
                             dup_tol: float = config.DUPLICATE_TOL,
                             residual_tol: float = 1e-9) -> list[NashCandidate]:
    """Enumerate support profiles (smallest supports first) and collect Nash candidates.

    Raises :class:`SupportCapError` when the number of support profiles
    exceeds ``cap``. Singular or inconsistent systems are skipped per profile.
    """
    count = support_profile_count(game)
    if count > cap:
        raise SupportCapError(f"{count} support profiles exceed the cap of {cap}")
    n = game.ambient_dim
    per_pop = [sorted(_subsets(pop.size), key=lambda s: (len(s), s)) for pop in game.populations]
    profiles = sorted(itertools.product(*per_pop), key=lambda prof: (sum(map(len, prof)), prof))

    found: list[NashCandidate] = []
    for profile in profiles:
        M, rhs = _system(game, profile)
        try:
            sol, _, rank, _ = np.linalg.lstsq(M, rhs, rcond=None)
        except np.linalg.LinAlgError:
            continue
        scale = max(1.0, float(np.max(np.abs(rhs))))
        if np.max(np.abs(M @ sol - rhs)) > residual_tol * scale:
            continue
        # off-support coordinates are pinned to zero by the system; drop lstsq noise
        sol[np.abs(sol) < config.FEAS_TOL * scale] = 0.0
        try:
            x = game.state(sol)
        except InvalidStateError:
            continue
        if not is_nash(game, x, zero_tol)[0]:
            continue
        if any(np.max(np.abs(c.state - x)) < dup_tol for c in found):
            continue
        kind = ComponentKind.ISOLATED if rank == n else ComponentKind.CONTINUUM_REPRESENTATIVE
        found.append(NashCandidate(x, kind, tuple(profile)))
    return found
