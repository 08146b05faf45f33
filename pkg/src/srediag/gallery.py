"""Canonical example games in ambient affine form.

Each constructor documents the ambient coordinates it uses and attaches its
Nash candidates as named states. Closed forms that mention ``1 - x_H`` and the
like are rewritten with an explicit coordinate, so every representative is one
choice among many equivalent ones on the simplex.
"""

from __future__ import annotations

import itertools

import numpy as np

from .game import InvalidGameError, PopulationGame, PopulationSpec


def _one_population(name, labels, A, b, states):
    pop = PopulationSpec("pop", 1.0, tuple(labels))
    return PopulationGame((pop,), (np.asarray(A, float),), (np.asarray(b, float),), states, name)


def hawk_dove(V: float = 2.0, C: float = 4.0) -> PopulationGame:
    """Hawk-Dove with coordinates ``(x_H, x_D)``.

    ``F_H = V - (V+C)/2 x_H`` and ``F_D = V/2 (1 - x_H)``, both written against
    ``x_H`` only. The unique Nash state is ``x_H = V/C`` (state ``"mixed"``).
    """
    if not (C > V > 0):
        raise InvalidGameError("hawk_dove requires C > V > 0")
    A = [[-(V + C) / 2.0, 0.0], [-V / 2.0, 0.0]]
    b = [V, V / 2.0]
    return _one_population("hawk_dove", ("H", "D"), A, b, {"mixed": [V / C, 1.0 - V / C]})


def rps() -> PopulationGame:
    """Rock-paper-scissors, ``F(x) = Ax``; the barycenter is the unique Nash state."""
    A = [[0.0, -1.0, 1.0], [1.0, 0.0, -1.0], [-1.0, 1.0, 0.0]]
    return _one_population("rps", ("R", "P", "S"), A, np.zeros(3),
                           {"barycenter": np.full(3, 1.0 / 3.0)})


def _subset_name(subset):
    if len(subset) == 1:
        return f"e{subset[0] + 1}"
    return "u" + "_".join(str(k + 1) for k in subset)


def coordination(n: int = 3) -> PopulationGame:
    """Pure coordination ``F_i(x) = x_i``; Nash states are uniforms on subsets."""
    n = int(n)
    if n < 2:
        raise InvalidGameError("coordination requires n >= 2")
    states = {}
    for k in range(1, n + 1):
        for subset in itertools.combinations(range(n), k):
            x = np.zeros(n)
            x[list(subset)] = 1.0 / k
            states[_subset_name(subset)] = x
    labels = tuple(str(k + 1) for k in range(n))
    return _one_population(f"coordination{n}", labels, np.eye(n), np.zeros(n), states)


def binary_symmetric(m11: float, m12: float, m21: float, m22: float) -> PopulationGame:
    """Binary symmetric game with payoff matrix ``(m_ij)`` and coordinates ``(x_1, x_2)``.

    ``F_1 = m11 x_1 + m12 x_2`` and ``F_2 = m21 x_1 + m22 x_2``. Named states are
    the pure Nash states ``e1``/``e2`` and the interior crossing ``mixed`` of
    ``Delta(q) = (m11-m21)(1-q) + (m12-m22) q`` in the mass ``q`` on strategy 2.
    """
    A = [[m11, m12], [m21, m22]]
    states = {}
    if m11 >= m21:
        states["e1"] = [1.0, 0.0]
    if m22 >= m12:
        states["e2"] = [0.0, 1.0]
    d0, d1 = m11 - m21, m12 - m22
    if d0 != d1:
        q = d0 / (d0 - d1)
        if 0.0 < q < 1.0:
            states["mixed"] = [1.0 - q, q]
    return _one_population("binary", ("1", "2"), A, np.zeros(2), states)


def platform(alpha: float = 1.0, beta: float = 1.0, gamma: float = 1.0,
             delta: float = 1.0, phi: float = 0.0) -> PopulationGame:
    """Two-sided platform adoption; buyers are population 0, sellers population 1.

    Coordinates ``(x_1A, x_1B, x_2A, x_2B)``. Buyers earn ``alpha x_2A`` on A and
    ``beta x_2B`` on B; sellers earn ``gamma x_1A - phi`` on A and ``delta x_1B``
    on B. Named states: tipping states ``xA``, ``xB`` and the interior ``xo``.
    """
    if min(alpha, beta, gamma, delta) <= 0:
        raise InvalidGameError("platform requires alpha, beta, gamma, delta > 0")
    if not (0 <= phi < gamma):
        raise InvalidGameError("platform requires 0 <= phi < gamma")
    buyers = PopulationSpec("buyers", 1.0, ("A", "B"))
    sellers = PopulationSpec("sellers", 1.0, ("A", "B"))
    A1 = [[0, 0, alpha, 0], [0, 0, 0, beta]]
    A2 = [[gamma, 0, 0, 0], [0, delta, 0, 0]]
    b1, b2 = [0.0, 0.0], [-phi, 0.0]
    tau1 = (delta + phi) / (gamma + delta)
    tau2 = beta / (alpha + beta)
    states = {
        "xA": [1, 0, 1, 0],
        "xB": [0, 1, 0, 1],
        "xo": [tau1, 1 - tau1, tau2, 1 - tau2],
    }
    return PopulationGame((buyers, sellers), (np.array(A1, float), np.array(A2, float)),
                          (np.array(b1), np.array(b2)), states, "platform")


def standards(q=(3.0, 2.0, 0.0), lam: float = 0.5) -> PopulationGame:
    """Standards adoption ``F_i(x) = q_i + lam x_i``.

    Named states are all Nash states: for a support ``K`` the common payoff is
    ``c = (lam + sum_K q_i)/|K|`` and ``x_i = (c - q_i)/lam`` on ``K``; the state
    is kept when it is positive on ``K`` and ``c >= q_j`` off ``K``.
    """
    q = np.asarray(q, dtype=float).reshape(-1)
    n = q.size
    if n < 2:
        raise InvalidGameError("standards requires at least two standards")
    if not lam > 0:
        raise InvalidGameError("standards requires lam > 0")
    states = {}
    for k in range(1, n + 1):
        for subset in itertools.combinations(range(n), k):
            idx = list(subset)
            c = (lam + q[idx].sum()) / k
            x = np.zeros(n)
            x[idx] = (c - q[idx]) / lam
            rest = [j for j in range(n) if j not in subset]
            if np.all(x[idx] > 0) and all(c >= q[j] - 1e-12 for j in rest):
                states[_subset_name(subset)] = x
    labels = tuple(str(k + 1) for k in range(n))
    return _one_population("standards", labels, lam * np.eye(n), q, states)


def boundary_example() -> PopulationGame:
    """``F_1 = 0``, ``F_2 = -y_2``: ``e1`` is a weak Nash state protected by the boundary."""
    return _one_population("boundary", ("1", "2"), [[0, 0], [0, -1]], [0, 0], {"e1": [1, 0]})


def identity_example() -> PopulationGame:
    """``F_1 = F_2 = 0``, ``F_3 = -1 - y_3``; every state with ``x_3 = 0`` is Nash."""
    A = [[0, 0, 0], [0, 0, 0], [0, 0, -1]]
    states = {"e1": [1, 0, 0], "e2": [0, 1, 0], "mix": [0.5, 0.5, 0]}
    return _one_population("identity", ("1", "2", "3"), A, [0, 0, -1], states)


GALLERY = {
    "hawk_dove": hawk_dove,
    "rps": rps,
    "coordination": coordination,
    "binary_symmetric": binary_symmetric,
    "platform": platform,
    "standards": standards,
    "boundary_example": boundary_example,
    "identity_example": identity_example,
}


def gallery(name: str, **params) -> PopulationGame:
    try:
        ctor = GALLERY[name]
    except KeyError:
        raise KeyError(f"unknown gallery game {name!r}; choose from {sorted(GALLERY)}") from None
    try:
        return ctor(**params)
    except TypeError as exc:
        raise InvalidGameError(f"{name}: {exc}") from None


def default_catalog() -> list[PopulationGame]:
    """Gallery instances used by the cross-validation suites.

    Covers every constructor plus the parameter sweeps the worked examples
    discuss (coordination sizes, the four binary sign cases, standards lock-in
    strengths including the ``q_2 + lam = q*`` tie).
    """
    games = [
        hawk_dove(2, 4),
        rps(),
        coordination(2),
        coordination(3),
        coordination(4),
        binary_symmetric(2, 2, 0, 0),
        binary_symmetric(0, 0, 2, 2),
        binary_symmetric(1, 0, 0, 1),
        binary_symmetric(-1, 2, 0, 1),
        platform(),
        platform(2.0, 1.0, 1.5, 0.5, 0.25),
        boundary_example(),
        identity_example(),
    ]
    games += [standards((3, 2, 0), lam) for lam in (0.5, 1.0, 1.5, 2.0, 4.0)]
    return games
