"""Machine payloads and human tables for CLI reports.

Payloads contain only JSON types; floats go through ``repr`` so equal inputs
give equal bytes. Certificates carry full witness states so a third party can
re-evaluate the gap without this package.
"""

from __future__ import annotations

import json

import numpy as np

from . import __version__
from .diagnostics import SreVerdict
from .game import PopulationGame, gap_table
from .nash import NashCandidate
from .oracle import Evidence
from .uncertainty import ShrinkingReport, UValidityReport, WorstCase


def _vec(v):
    return None if v is None else [float(c) for c in np.asarray(v).reshape(-1)]


def _num(v):
    return None if v is None else float(v)


def deviation_key(game: PopulationGame, p: int, i: int) -> dict:
    pop = game.populations[p]
    return {"population": pop.name, "strategy": pop.strategies[i], "p": p, "i": i}


def sre_payload(game: PopulationGame, x, verdict: SreVerdict) -> dict:
    x = game.state(x)
    return {
        "state": _vec(x),
        "is_nash": verdict.is_nash,
        "is_sre": verdict.is_sre,
        "deviations": [
            {
                **deviation_key(game, v.population, v.strategy),
                "gap": float(v.gap),
                "kind": v.kind.value,
                "psi": _num(v.psi),
                "direction": _vec(v.direction),
            }
            for v in verdict.deviations
        ],
        "certificates": [
            {
                **deviation_key(game, c.population, c.strategy),
                "direction": _vec(c.direction),
                "step": float(c.step),
                "witness": _vec(c.witness),
                "witnessed_gap": float(c.witnessed_gap),
            }
            for c in verdict.witnesses
        ],
    }


def _worst_payload(game, w: WorstCase | None):
    if w is None:
        return None
    return {**deviation_key(game, w.population, w.strategy), "value": float(w.value), "state": _vec(w.state)}


def uvalidity_payload(game: PopulationGame, rep: UValidityReport) -> dict:
    return {
        "valid": rep.valid,
        "empty_region": rep.empty_region,
        "candidate_in_region": rep.candidate_in_region,
        "entries": [_worst_payload(game, e) for e in rep.entries],
        "worst": _worst_payload(game, rep.worst()),
    }


def shrinking_payload(game: PopulationGame, rep: ShrinkingReport) -> dict:
    return {
        "verdict": rep.verdict,
        "stable": rep.stable,
        "levels": [
            {"level": lv.level, "radius": float(lv.radius), "valid": lv.valid,
             "worst": _worst_payload(game, lv.worst)}
            for lv in rep.levels
        ],
    }


def candidate_payload(game: PopulationGame, cand: NashCandidate, verdict: SreVerdict | None) -> dict:
    out = {
        "state": _vec(game.state(cand.state)),
        "kind": cand.kind.value,
        "support": [[game.populations[q].strategies[j] for j in supp] for q, supp in enumerate(cand.support)],
    }
    if verdict is not None:
        out["is_sre"] = verdict.is_sre
        out["exposed_by"] = [
            deviation_key(game, v.population, v.strategy) for v in verdict.exposing()
        ]
    return out


def evidence_payload(game: PopulationGame, ev: Evidence, lp_kind: str, agrees: bool) -> dict:
    return {
        **deviation_key(game, ev.population, ev.strategy),
        "evidence": "exposed" if ev.exposed else "no_positive_found",
        "hits": list(ev.hits),
        "witness": _vec(ev.witness),
        "witness_gap": _num(ev.witness_gap),
        "lp_kind": lp_kind,
        "agrees": agrees,
    }


def envelope(command: dict, cfg: dict, result: dict) -> dict:
    return {"command": command, "config": cfg, "result": result, "version": f"srediag {__version__}"}


def to_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True, allow_nan=False) + "\n"


# -- human-readable rendering ------------------------------------------------

def _fmt(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, float):
        return f"{v:.6g}"
    return str(v)


def _state_str(v) -> str:
    return "(" + ", ".join(f"{c:.6g}" for c in v) + ")"


def table(headers, rows) -> str:
    cells = [[_fmt(c) for c in row] for row in rows]
    widths = [max([len(h)] + [len(r[k]) for r in cells]) for k, h in enumerate(headers)]
    lines = ["  ".join(h.ljust(w) for h, w in zip(headers, widths)).rstrip()]
    lines.append("  ".join("-" * w for w in widths))
    lines += ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in cells]
    return "\n".join(lines)


def render_check(res: dict) -> str:
    if res["is_sre"]:
        head = "verdict: state-robust equilibrium"
    elif res["is_nash"]:
        head = "verdict: Nash but exposed"
    else:
        head = "verdict: not Nash"
    rows = [(f"{d['population']}:{d['strategy']}", d["gap"], d["kind"], d["psi"])
            for d in res["deviations"]]
    out = [f"state: {_state_str(res['state'])}", head, "",
           table(["deviation", "gap", "kind", "psi"], rows)]
    for c in res["certificates"]:
        out.append(f"certificate {c['population']}:{c['strategy']}: direction {_state_str(c['direction'])}"
                   f" step {c['step']:.6g} witness {_state_str(c['witness'])}"
                   f" gap {c['witnessed_gap']:.6g}")
    return "\n".join(out)


def render_nash(res: dict) -> str:
    rows = []
    for c in res["candidates"]:
        rows.append((_state_str(c["state"]), c["kind"],
                     "-" if "is_sre" not in c else ("yes" if c["is_sre"] else "no"),
                     ", ".join(f"{e['population']}:{e['strategy']}" for e in c.get("exposed_by", [])) or "-"))
    out = [f"{len(res['candidates'])} Nash candidates", "",
           table(["state", "kind", "sre", "exposed by"], rows)]
    if "sre" in res:
        out.append("")
        out.append(f"SRE: {len(res['sre'])} state(s)")
    return "\n".join(out)


def render_uvalid(res: dict) -> str:
    if "levels" in res:
        rows = [(lv["level"], lv["radius"], "valid" if lv["valid"] else "invalid",
                 None if lv["worst"] is None else f"{lv['worst']['population']}:{lv['worst']['strategy']}",
                 None if lv["worst"] is None else lv["worst"]["value"]) for lv in res["levels"]]
        verdict = "valid" if res["verdict"] else "invalid"
        return "\n".join([f"stabilized verdict: {verdict} (stable: {res['stable']})", "",
                          table(["level", "radius", "verdict", "worst deviation", "worst gap"], rows)])
    rows = [(f"{e['population']}:{e['strategy']}", e["value"], _state_str(e["state"]))
            for e in res["entries"]]
    head = "valid" if res["valid"] else "invalid"
    if res["empty_region"]:
        head += " (empty region)"
    out = [f"verdict: {head}"]
    if not res["candidate_in_region"]:
        out.append("note: candidate lies outside the region")
    out += ["", table(["deviation", "max gap", "worst state"], rows)]
    return "\n".join(out)


def render_oracle(res: dict) -> str:
    rows = [(f"{e['population']}:{e['strategy']}", e["evidence"], "/".join(map(str, e["hits"])),
             e["lp_kind"], "yes" if e["agrees"] else "NO") for e in res["evidence"]]
    head = "agreement" if res["agreement"] else "MISMATCH"
    return "\n".join([f"oracle vs LP: {head}", "",
                      table(["deviation", "evidence", "hits", "lp kind", "agrees"], rows)])


def summarize_gaps(game: PopulationGame, x) -> dict:
    return {game.label(p, i): g for (p, i), g in gap_table(game, x).items()}
