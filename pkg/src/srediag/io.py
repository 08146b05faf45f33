"""Game documents: JSON text describing a game, named states and regions.

Layout (field names are fixed)::

    {
      "name": "platform",
      "populations": [
        {"name": "buyers", "mass": 1.0, "strategies": ["A", "B"],
         "A": [[0, 0, 1, 0], [0, 0, 0, 1]], "b": [0, 0]},
        ...
      ],
      "states":  {"xA": [1, 0, 1, 0]},
      "regions": {"box": [{"coeffs": [1, 0, 0, 0], "rhs": 0.6}, ...]}
    }

Coordinate blocks follow the order of ``populations``. A state may also be
given as a list of per-population blocks. Numbers are read as doubles.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .game import InvalidGameError, PopulationGame, PopulationSpec
from .uncertainty import PolyhedralRegion


class DocumentError(ValueError):
    pass


@dataclass(frozen=True)
class GameDocument:
    game: PopulationGame
    regions: dict[str, PolyhedralRegion] = field(default_factory=dict)


def _number_list(value, where):
    if not isinstance(value, list):
        raise DocumentError(f"{where}: expected a list of numbers")
    out = []
    for k, v in enumerate(value):
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise DocumentError(f"{where}[{k}]: expected a number, got {v!r}")
        out.append(float(v))
    return out


def _flatten_state(value, where):
    if isinstance(value, list) and value and all(isinstance(v, list) for v in value):
        return [c for k, block in enumerate(value) for c in _number_list(block, f"{where}[{k}]")]
    return _number_list(value, where)


def game_from_dict(doc: dict) -> GameDocument:
    if not isinstance(doc, dict):
        raise DocumentError("document root must be an object")
    pops_raw = doc.get("populations")
    if not isinstance(pops_raw, list) or not pops_raw:
        raise DocumentError("populations: expected a nonempty list")
    pops, A, b = [], [], []
    for k, entry in enumerate(pops_raw):
        where = f"populations[{k}]"
        if not isinstance(entry, dict):
            raise DocumentError(f"{where}: expected an object")
        for key in ("name", "mass", "strategies", "A", "b"):
            if key not in entry:
                raise DocumentError(f"{where}.{key}: missing")
        mass = entry["mass"]
        if isinstance(mass, bool) or not isinstance(mass, (int, float)):
            raise DocumentError(f"{where}.mass: expected a number")
        strategies = entry["strategies"]
        if not isinstance(strategies, list) or not all(isinstance(s, str) for s in strategies):
            raise DocumentError(f"{where}.strategies: expected a list of strings")
        try:
            pops.append(PopulationSpec(str(entry["name"]), float(mass), tuple(strategies)))
        except InvalidGameError as exc:
            raise DocumentError(f"{where}: {exc}") from None
        rows = entry["A"]
        if not isinstance(rows, list):
            raise DocumentError(f"{where}.A: expected a list of rows")
        A.append([_number_list(row, f"{where}.A[{r}]") for r, row in enumerate(rows)])
        b.append(_number_list(entry["b"], f"{where}.b"))

    states_raw = doc.get("states", {})
    if not isinstance(states_raw, dict):
        raise DocumentError("states: expected an object")
    states = {name: _flatten_state(v, f"states.{name}") for name, v in states_raw.items()}
    try:
        n = sum(p.size for p in pops)
        A_arr = []
        for k, rows in enumerate(A):
            arr = np.array(rows, dtype=float) if rows else np.zeros((0, n))
            if arr.ndim != 2:
                raise DocumentError(f"populations[{k}].A: rows have unequal lengths")
            A_arr.append(arr)
        game = PopulationGame(tuple(pops), tuple(A_arr), tuple(np.array(v) for v in b),
                              states, str(doc.get("name", "")))
    except InvalidGameError as exc:
        raise DocumentError(str(exc)) from None

    regions = {}
    regions_raw = doc.get("regions", {})
    if not isinstance(regions_raw, dict):
        raise DocumentError("regions: expected an object")
    for name, halfspaces in regions_raw.items():
        where = f"regions.{name}"
        if not isinstance(halfspaces, list):
            raise DocumentError(f"{where}: expected a list of halfspaces")
        rows = []
        for k, h in enumerate(halfspaces):
            if not isinstance(h, dict) or "coeffs" not in h or "rhs" not in h:
                raise DocumentError(f"{where}[{k}]: expected {{\"coeffs\": [...], \"rhs\": number}}")
            coeffs = _number_list(h["coeffs"], f"{where}[{k}].coeffs")
            if len(coeffs) != game.ambient_dim:
                raise DocumentError(f"{where}[{k}].coeffs: expected {game.ambient_dim} entries")
            rhs = _number_list([h["rhs"]], f"{where}[{k}].rhs")[0]
            rows.append((coeffs, rhs))
        regions[name] = PolyhedralRegion.from_halfspaces(rows, game.ambient_dim)
    return GameDocument(game, regions)


def game_to_dict(game: PopulationGame, regions: dict[str, PolyhedralRegion] | None = None) -> dict:
    doc = {
        "name": game.name,
        "populations": [
            {
                "name": pop.name,
                "mass": pop.mass,
                "strategies": list(pop.strategies),
                "A": game.A[p].tolist(),
                "b": game.b[p].tolist(),
            }
            for p, pop in enumerate(game.populations)
        ],
        "states": {name: x.tolist() for name, x in game.states.items()},
    }
    if regions:
        doc["regions"] = {
            name: [{"coeffs": row.tolist(), "rhs": rhs} for row, rhs in region.halfspaces()]
            for name, region in regions.items()
        }
    return doc


def loads(text: str) -> GameDocument:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return game_from_dict(doc)


def load(path) -> GameDocument:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise DocumentError(f"{path}: {exc.strerror}") from None
    try:
        return loads(text)
    except DocumentError as exc:
        raise DocumentError(f"{path}: {exc}") from None


def dumps(game: PopulationGame, regions=None) -> str:
    return json.dumps(game_to_dict(game, regions), indent=2, sort_keys=True) + "\n"
