"""State-robustness tests for affine population games.

For a candidate state ``x`` every pure deviation ``(p, i)`` falls in one of
four classes, decided by the sign of the pure gap ``h_{p,i}(x; x)`` and, for
zero gaps, by the tangent-cone program

    Psi_{p,i}(x) = max { a_{p,i}(x) . d : d in T_x X, |d|_inf <= 1 }.

A zero gap with ``Psi = 0`` is protected; with ``Psi > 0`` some inward state
perturbation makes the deviation strictly profitable. ``x`` is state-robust
exactly when no deviation has a positive gap or an exposed zero gap, so the
whole check costs at most one LP per pure strategy.
"""

from __future__ import annotations

import enum
import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import config
from .cones import in_relative_interior, tangent_cone
from .game import PopulationGame, gap_gradient, pure_gap
from .lp import solve_or_raise


class CertificateError(RuntimeError):
    """A positive Psi could not be turned into a verified interior witness."""


class NonGenericError(ValueError):
    pass


class DeviationKind(enum.Enum):
    STRICTLY_WORSE = "strictly_worse"
    PROTECTED_ZERO_GAP = "protected_zero_gap"
    EXPOSED_ZERO_GAP = "exposed_zero_gap"
    POSITIVE_GAP = "positive_gap"

    @property
    def exposing(self) -> bool:
        return self in (DeviationKind.EXPOSED_ZERO_GAP, DeviationKind.POSITIVE_GAP)


@dataclass(frozen=True)
class DeviationVerdict:
    population: int
    strategy: int
    gap: float
    kind: DeviationKind
    psi: float | None = None
    direction: np.ndarray | None = None


@dataclass(frozen=True)
class ExposureCertificate:
    """An interior state ``witness = x + step * direction`` where the deviation pays.

    ``direction`` lies in the relative interior of the tangent cone, so the
    whole segment ``x + t * direction`` for ``0 < t <= step`` is interior.
    """

    population: int
    strategy: int
    direction: np.ndarray
    step: float
    witness: np.ndarray
    witnessed_gap: float


@dataclass(frozen=True)
class SreVerdict:
    is_nash: bool
    is_sre: bool
    deviations: list[DeviationVerdict]
    witnesses: list[ExposureCertificate] = field(default_factory=list)

    def exposing(self) -> list[DeviationVerdict]:
        return [v for v in self.deviations if v.kind.exposing]


# -- tangent program ----------------------------------------------------

def psi(game: PopulationGame, x, p: int, i: int):
    """Value and maximizer of the normalized tangent-cone program for ``(p, i)``.

    The value is clipped at zero (``d = 0`` is always feasible). When several
    maximizers exist the returned one is whichever vertex the simplex lands on.
    """
    x = game.state(x)
    a = gap_gradient(game, x, p, i)
    sol = solve_or_raise(tangent_cone(game, x).normalized_lp(a))
    value = max(0.0, sol.value)
    return value, sol.point


def classify_deviation(game: PopulationGame, x, p: int, i: int, *,
                       zero_tol: float = config.ZERO_TOL,
                       psi_tol: float = config.PSI_TOL) -> DeviationVerdict:
    x = game.state(x)
    gap = pure_gap(game, x, x, p, i)
    if gap > zero_tol:
        return DeviationVerdict(p, i, gap, DeviationKind.POSITIVE_GAP)
    if gap < -zero_tol:
        return DeviationVerdict(p, i, gap, DeviationKind.STRICTLY_WORSE)
    value, d = psi(game, x, p, i)
    if value > psi_tol:
        return DeviationVerdict(p, i, gap, DeviationKind.EXPOSED_ZERO_GAP, value, d)
    return DeviationVerdict(p, i, gap, DeviationKind.PROTECTED_ZERO_GAP, value, None)


def interior_direction(game: PopulationGame, x) -> np.ndarray:
    """``barycenter - x``, a fixed member of the relative interior of ``T_x X``."""
    return game.barycenter() - game.state(x)


def _interior_step(x, d):
    neg = d < 0
    if not np.any(neg):
        return None
    return 0.5 * float(np.min(x[neg] / -d[neg]))


def exposure_certificate(game: PopulationGame, x, p: int, i: int, d_raw=None, *,
                         zero_tol: float = config.ZERO_TOL,
                         psi_tol: float = config.PSI_TOL,
                         support_tol: float = config.SUPPORT_TOL) -> ExposureCertificate:
    """Build and verify an interior witness for an exposing deviation.

    For an exposed zero gap the LP maximizer ``d_raw`` is blended toward the
    fixed interior direction ``r = barycenter - x``,
    ``d = (1 - lam) d_raw + lam r`` with ``lam = 1/2, 1/4, ...``, stopping at
    the first ``lam`` that keeps the directional derivative at least half of
    ``Psi``. The step is half the distance to the nearest face along ``d``.
    A positive gap is witnessed along ``r`` itself with a halving step.

    Raises :class:`CertificateError` when no verified witness is found.
    """
    x = game.state(x)
    cone = tangent_cone(game, x, support_tol)
    a = gap_gradient(game, x, p, i)
    gap0 = pure_gap(game, x, x, p, i)
    r = interior_direction(game, x)

    if gap0 > zero_tol:
        # (1 - t) x + t * barycenter is interior for every t in (0, 1]
        step = 1.0
        for _ in range(200):
            y = x + step * r
            g = pure_gap(game, x, y, p, i)
            if g > 0 and np.all(y > support_tol):
                return _verified(game, x, p, i, r, step, y, g, support_tol)
            step *= 0.5
        raise CertificateError(f"no interior witness found for positive gap at {game.label(p, i)}")

    if abs(gap0) > zero_tol:
        raise CertificateError(f"{game.label(p, i)} has a strictly negative gap and is not exposing")
    if d_raw is None:
        value, d_raw = psi(game, x, p, i)
    d_raw = np.asarray(d_raw, dtype=float)
    value = float(a @ d_raw)
    if value <= psi_tol:
        raise CertificateError(f"{game.label(p, i)}: Psi = {value:.3g} is not above psi_tol")

    if in_relative_interior(cone, d_raw, support_tol):
        d = d_raw
    else:
        d = None
        lam = 0.5
        while lam > 1e-12:
            cand = (1.0 - lam) * d_raw + lam * r
            if a @ cand >= value / 2.0 and in_relative_interior(cone, cand, support_tol):
                d = cand
                break
            lam *= 0.5
        if d is None:
            raise CertificateError(
                f"{game.label(p, i)}: no blend with the interior direction keeps a positive derivative")

    step = _interior_step(x, d)
    if step is None:
        raise CertificateError(f"{game.label(p, i)}: exposing direction has no negative coordinate")
    y = x + step * d
    g = pure_gap(game, x, y, p, i)
    return _verified(game, x, p, i, d, step, y, g, support_tol)


def _verified(game, x, p, i, d, step, y, g, support_tol):
    if not g > 0:
        raise CertificateError(f"{game.label(p, i)}: witnessed gap {g:.3g} is not positive")
    if not np.all(y > support_tol):
        raise CertificateError(f"{game.label(p, i)}: witness state is not interior")
    game.state(y)
    return ExposureCertificate(p, i, np.asarray(d, dtype=float), float(step), np.asarray(y), float(g))


def sre_membership(game: PopulationGame, x, *, zero_tol: float = config.ZERO_TOL,
                   psi_tol: float = config.PSI_TOL, threads: int = 1) -> SreVerdict:
    """Run the full pure-deviation battery at ``x``.

    Deviations are classified (optionally on ``threads`` worker threads) and
    assembled in ``(p, i)`` order. Each exposing deviation gets a verified
    certificate; a positive Psi without a verifiable witness raises.
    """
    x = game.state(x)
    pairs = game.pairs()

    def run(pair):
        return classify_deviation(game, x, *pair, zero_tol=zero_tol, psi_tol=psi_tol)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            verdicts = list(pool.map(run, pairs))
    else:
        verdicts = [run(pair) for pair in pairs]

    witnesses = [
        exposure_certificate(game, x, v.population, v.strategy, v.direction,
                             zero_tol=zero_tol, psi_tol=psi_tol)
        for v in verdicts if v.kind.exposing
    ]
    nash = not any(v.kind is DeviationKind.POSITIVE_GAP for v in verdicts)
    sre = not any(v.kind.exposing for v in verdicts)
    return SreVerdict(nash, sre, verdicts, witnesses)


# -- decomposition of the Nash set ----------------------------------------

@dataclass(frozen=True)
class Decomposition:
    """Exposed-indifference sets over a finite list of candidates.

    ``sets[(p, i)]`` lists indices of Nash candidates whose zero gap for
    ``(p, i)`` is exposed; ``non_nash`` lists the skipped candidates.
    """

    sets: dict[tuple[int, int], list[int]]
    non_nash: list[int]
    verdicts: list[SreVerdict]

    def union(self) -> set[int]:
        return {k for members in self.sets.values() for k in members}


def exposed_indifference_sets(game: PopulationGame, candidates, *,
                              zero_tol: float = config.ZERO_TOL,
                              psi_tol: float = config.PSI_TOL) -> Decomposition:
    sets = {pair: [] for pair in game.pairs()}
    non_nash, verdicts = [], []
    for k, x in enumerate(candidates):
        verdict = sre_membership(game, x, zero_tol=zero_tol, psi_tol=psi_tol)
        verdicts.append(verdict)
        if not verdict.is_nash:
            non_nash.append(k)
            continue
        for v in verdict.deviations:
            if v.kind is DeviationKind.EXPOSED_ZERO_GAP:
                sets[(v.population, v.strategy)].append(k)
    return Decomposition(sets, non_nash, verdicts)


# -- payoff identities ----------------------------------------------------

def payoff_identity(game: PopulationGame, p: int, i: int, j: int, tol: float = config.IDENTITY_TOL):
    """Whether ``F_{p,i} = F_{p,j}`` on all of X.

    With ``r = A_{p,i.} - A_{p,j.}`` the affine map ``r . y + (b_i - b_j)``
    vanishes on X iff ``r`` is constant on every block (value ``lam_q``) and
    ``sum_q lam_q m_q + b_i - b_j = 0``. Returns ``(holds, lams, residual)``.
    """
    game._check_pair(p, i)
    game._check_pair(p, j)
    r = game.A[p][i] - game.A[p][j]
    lams, constant = [], True
    for sl in game.blocks():
        block = r[sl]
        lam = float(block.mean())
        lams.append(lam)
        if np.max(np.abs(block - lam)) > tol:
            constant = False
    residual = float(np.dot(lams, game.masses) + game.b[p][i] - game.b[p][j])
    return constant and abs(residual) <= tol, lams, residual


def support_equality_audit(game: PopulationGame, x, support_tol: float = config.SUPPORT_TOL):
    """Support pairs ``(p, i, j)`` whose payoffs are not identical on X.

    A nonempty result rules out state-robustness of ``x``.
    """
    x = game.state(x)
    failures = []
    for p in range(game.num_populations):
        supp = game.support(x, p, support_tol)
        for i, j in itertools.combinations(supp, 2):
            if not payoff_identity(game, p, i, j)[0]:
                failures.append((p, i, j))
    return failures


def full_support_sre_possible(game: PopulationGame) -> bool:
    """Within-population payoff identity on X, the condition for any full-support SRE."""
    return all(
        payoff_identity(game, p, i, j)[0]
        for p, pop in enumerate(game.populations)
        for i, j in itertools.combinations(range(pop.size), 2)
    )


def row_additive_check(A, b, tol: float = config.IDENTITY_TOL):
    """Row-additivity ``A_ij = u_i + r_j`` with ``u_i + b_i`` constant.

    Returns ``(holds, u, r, c)`` normalized so ``u[0] = 0``; then every payoff
    equals ``c + r . y`` on the unit simplex.
    """
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float).reshape(-1)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or b.size != A.shape[0]:
        raise ValueError("row_additive_check needs a square matrix and a matching vector")
    u = A[:, 0] - A[0, 0]
    r = A[0, :].copy()
    residual = A - u[:, None] - r[None, :]
    offsets = u + b
    c = float(offsets[0])
    holds = bool(np.max(np.abs(residual)) <= tol and np.max(np.abs(offsets - c)) <= tol)
    return holds, u, r, c


# -- binary symmetric games -----------------------------------------------

class BinaryCase(enum.Enum):
    DOMINANCE_1 = "dominance_1"
    DOMINANCE_2 = "dominance_2"
    COORDINATION = "coordination"
    ANTI_COORDINATION = "anti_coordination"


def binary_classify(m11: float, m12: float, m21: float, m22: float):
    """Sign classification of a generic binary symmetric game and its SRE set.

    States are returned as ``(x_1, x_2)`` tuples. Ties ``m11 == m21`` or
    ``m22 == m12`` are non-generic and must go through the LP battery instead.
    """
    if m11 == m21 or m22 == m12:
        raise NonGenericError(
            "non-generic binary game (m11 == m21 or m22 == m12); use sre_membership on each candidate")
    first_vs_1 = m11 > m21   # strategy 1 is the better reply to resident 1
    second_vs_2 = m22 > m12  # strategy 2 is the better reply to resident 2
    if first_vs_1 and not second_vs_2:
        return BinaryCase.DOMINANCE_1, [(1.0, 0.0)]
    if not first_vs_1 and second_vs_2:
        return BinaryCase.DOMINANCE_2, [(0.0, 1.0)]
    if first_vs_1 and second_vs_2:
        return BinaryCase.COORDINATION, [(1.0, 0.0), (0.0, 1.0)]
    return BinaryCase.ANTI_COORDINATION, []
