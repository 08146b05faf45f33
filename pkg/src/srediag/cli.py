"""Command-line interface.

Exit codes: 0 pass, 10 diagnostic negative (exposed / invalid),
11 not Nash, 12 oracle mismatch, 2 input error, 3 resource cap.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import config, io, report
from .diagnostics import CertificateError, classify_deviation, sre_membership
from .game import InvalidGameError, InvalidStateError, PopulationGame
from .gallery import GALLERY, gallery
from .lp import LpError
from .nash import SupportCapError, nash_support_enumeration
from .oracle import SamplingConfig, sample_exposure
from .uncertainty import box_region, shrinking_diagnostic, u_validity

EXIT_OK = 0
EXIT_NEGATIVE = 10
EXIT_NOT_NASH = 11
EXIT_MISMATCH = 12
EXIT_INPUT = 2
EXIT_CAP = 3

class InputError(Exception):
    pass

def _parse_param(text: str):
    if "=" not in text:
        raise InputError(f"parameter {text!r} is not KEY=VALUE")
    key, value = text.split("=", 1)
    try:
        if "," in value:
            return key, tuple(float(v) for v in value.split(",") if v)
        number = float(value)
    except ValueError:
        raise InputError(f"parameter {key}: {value!r} is not numeric") from None
    return key, int(number) if key == "n" else number

def _load_game(args):
    if args.gallery:
        if args.game:
            raise InputError("give either a game file or --gallery, not both")
        params = dict(_parse_param(p) for p in args.param)
        try:
            return io.GameDocument(gallery(args.gallery, **params))
        except (KeyError, InvalidGameError) as exc:
            raise InputError(str(exc).strip("'\"")) from None
    if not args.game:
        raise InputError("no game given; pass a game file or --gallery NAME")
    try:
        return io.load(args.game)
    except io.DocumentError as exc:
        raise InputError(str(exc)) from None

def _resolve_state(game: PopulationGame, ref: str | None):
    if ref is None:
        raise InputError("--state is required")
    if ref in game.states:
        coords = game.states[ref]
    else:
        try:
            coords = [float(v) for v in ref.split(",")]
        except ValueError:
            known = ", ".join(sorted(game.states)) or "none"
            raise InputError(f"unknown state {ref!r} (named states: {known})") from None
    try:
        return game.state(coords)
    except InvalidStateError as exc:
        raise InputError(f"state {ref!r}: {exc}") from None

def _config(args) -> dict:
    return {
        "tol_zero": args.tol_zero,
        "tol_psi": args.tol_psi,
        "seed": args.seed,
        "support_tol": config.SUPPORT_TOL,
        "feas_tol": config.FEAS_TOL,
    }

def _command_echo(args, game: PopulationGame) -> dict:
    echo = {"name": args.command, "game": game.name or (args.game or "")}
    if args.gallery:
        echo["gallery"] = args.gallery
        echo["params"] = sorted(args.param)
    for key in ("state", "classify", "box", "shrink", "region", "region_file", "samples", "radii"):
        val = getattr(args, key, None)
        if val is not None and val is not False:
            echo[key] = list(val) if isinstance(val, (list, tuple)) else val
    return echo

# -- commands -----------------------------------------------------------

def cmd_check(args, doc):
    game = doc.game
    x = _resolve_state(game, args.state)
    verdict = sre_membership(game, x, zero_tol=args.tol_zero, psi_tol=args.tol_psi, threads=args.threads)
    result = report.sre_payload(game, x, verdict)
    if verdict.is_sre:
        code = EXIT_OK
    elif verdict.is_nash:
        code = EXIT_NEGATIVE
    else:
        code = EXIT_NOT_NASH
    return result, report.render_check(result), code

def cmd_nash(args, doc):
    game = doc.game
    cands = nash_support_enumeration(game, zero_tol=args.tol_zero)
    entries, sre = [], []
    for cand in cands:
        verdict = None
        if args.classify:
            verdict = sre_membership(game, cand.state, zero_tol=args.tol_zero,
                                     psi_tol=args.tol_psi, threads=args.threads)
            if verdict.is_sre:
                sre.append([float(c) for c in cand.state])
        entries.append(report.candidate_payload(game, cand, verdict))
    result = {"candidates": entries}
    if args.classify:
        result["sre"] = sre
    return result, report.render_nash(result), EXIT_OK

def cmd_uvalid(args, doc):
    game = doc.game
    x = _resolve_state(game, args.state)
    modes = sum(v is not None for v in (args.box, args.shrink)) + bool(args.region or args.region_file)
    if modes != 1:
        raise InputError("choose exactly one of --region/--region-file, --box R, --shrink R0 M")
    if args.shrink is not None:
        r0, m = args.shrink
        if r0 <= 0 or m < 1 or m != int(m):
            raise InputError("--shrink needs R0 > 0 and an integer M >= 1")
        rep = shrinking_diagnostic(game, x, r0, int(m), zero_tol=args.tol_zero)
        result = report.shrinking_payload(game, rep)
        return result, report.render_uvalid(result), EXIT_OK if rep.verdict else EXIT_NEGATIVE
    if args.box is not None:
        if args.box <= 0:
            raise InputError("--box radius must be positive")
        region = box_region(game, x, args.box)
    else:
        regions = doc.regions
        if args.region_file:
            try:
                regions = _load_regions(args.region_file, game)
            except io.DocumentError as exc:
                raise InputError(str(exc)) from None
        if args.region:
            if args.region not in regions:
                raise InputError(f"unknown region {args.region!r} (known: {', '.join(sorted(regions)) or 'none'})")
            region = regions[args.region]
        elif len(regions) == 1:
            region = next(iter(regions.values()))
        else:
            raise InputError("region file holds several regions; pick one with --region")
    try:
        rep = u_validity(game, x, region, zero_tol=args.tol_zero)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    result = report.uvalidity_payload(game, rep)
    return result, report.render_uvalid(result), EXIT_OK if rep.valid else EXIT_NEGATIVE

def _load_regions(path, game):
    import json
    try:
        raw = json.loads(Path(path).read_text())
    except OSError as exc:
        raise io.DocumentError(f"{path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise io.DocumentError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(raw, dict) or "regions" not in raw:
        raise io.DocumentError(f"{path}: expected an object with a 'regions' field")
    # region documents share the game layout; reuse its parser with the current game
    doc = io.game_to_dict(game)
    doc["regions"] = raw["regions"]
    try:
        return io.game_from_dict(doc).regions
    except io.DocumentError as exc:
        raise io.DocumentError(f"{path}: {exc}") from None

def cmd_oracle(args, doc):
    game = doc.game
    x = _resolve_state(game, args.state)
    radii = tuple(args.radii) if args.radii else (1e-2, 1e-3, 1e-4)
    try:
        cfg = SamplingConfig(radii, args.samples, args.seed)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    evidence = sample_exposure(game, x, cfg)
    rows, agreement = [], True
    for pair in game.pairs():
        v = classify_deviation(game, x, *pair, zero_tol=args.tol_zero, psi_tol=args.tol_psi)
        ev = evidence[pair]
        agrees = ev.exposed == v.kind.exposing
        agreement &= agrees
        rows.append(report.evidence_payload(game, ev, v.kind.value, agrees))
    result = {"state": [float(c) for c in x], "agreement": agreement, "evidence": rows}
    return result, report.render_oracle(result), EXIT_OK if agreement else EXIT_MISMATCH

COMMANDS = {"check": cmd_check, "nash": cmd_nash, "uvalid": cmd_uvalid, "oracle": cmd_oracle}

# -- argument parsing ---------------------------------------------------------

def _default_threads() -> int:
    try:
        return max(1, int(os.environ.get("SREDIAG_THREADS", "1")))
    except ValueError:
        return 1

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("game", nargs="?", help="game document (JSON)")
    common.add_argument("--gallery", choices=sorted(GALLERY), help="use a built-in example game")
    common.add_argument("-p", "--param", action="append", default=[], metavar="KEY=VALUE",
                        help="gallery parameter; lists as comma-separated values (q=3,2,0)")
    common.add_argument("--tol-zero", type=float, default=config.ZERO_TOL)
    common.add_argument("--tol-psi", type=float, default=config.PSI_TOL)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--json", action="store_true", help="emit the machine-readable report")
    common.add_argument("--threads", type=int, default=_default_threads())
    common.add_argument("-o", "--output", help="also write the JSON report to this file")

    parser = argparse.ArgumentParser(prog="srediag", description="State-robust equilibrium diagnostics.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="test one state for state-robustness")
    p.add_argument("--state", help="named state or comma-separated coordinates")

    p = sub.add_parser("nash", parents=[common], help="enumerate Nash candidates")
    p.add_argument("--classify", action="store_true", help="run the SRE battery on each candidate")

    p = sub.add_parser("uvalid", parents=[common], help="validity over an uncertainty region")
    p.add_argument("--state")
    p.add_argument("--region", help="region name (from the game or --region-file)")
    p.add_argument("--region-file", help="JSON document with a 'regions' object")
    p.add_argument("--box", type=float, metavar="R", help="sup-norm box of radius R around the state")
    p.add_argument("--shrink", type=float, nargs=2, metavar=("R0", "M"),
                   help="boxes of radius R0*2^-m for m = 0..M")

    p = sub.add_parser("oracle", parents=[common], help="sampling cross-check of the LP verdicts")
    p.add_argument("--state")
    p.add_argument("--samples", type=int, default=2000)
    p.add_argument("--radii", type=float, nargs="+")

    p = sub.add_parser("gallery", help="print a built-in game as a document")
    p.add_argument("name", nargs="?", choices=sorted(GALLERY))
    p.add_argument("-p", "--param", action="append", default=[], metavar="KEY=VALUE")
    return parser

def _gallery_command(args, out) -> int:
    if not args.name:
        out.write("\n".join(sorted(GALLERY)) + "\n")
        return EXIT_OK
    try:
        params = dict(_parse_param(p) for p in args.param)
        game = gallery(args.name, **params)
    except (InputError, InvalidGameError, KeyError) as exc:
        sys.stderr.write(f"srediag: error: {exc}\n")
        return EXIT_INPUT
    out.write(io.dumps(game))
    return EXIT_OK

def run(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    if args.command == "gallery":
        return _gallery_command(args, out)
    try:
        if args.threads < 1:
            raise InputError("--threads must be at least 1")
        doc = _load_game(args)
        result, text, code = COMMANDS[args.command](args, doc)
    except InputError as exc:
        sys.stderr.write(f"srediag: error: {exc}\n")
        return EXIT_INPUT
    except SupportCapError as exc:
        sys.stderr.write(f"srediag: {exc}; check named candidates with 'srediag check' instead\n")
        return EXIT_CAP
    except (LpError, CertificateError) as exc:
        sys.stderr.write(f"srediag: numerical failure: {exc}\n")
        return EXIT_INPUT
    payload = report.envelope(_command_echo(args, doc.game), _config(args), result)
    text_json = report.to_json(payload)
    if args.output:
        Path(args.output).write_text(text_json)
    out.write(text_json if args.json else text + "\n")
    return code

def main() -> None:
    sys.exit(run())

if __name__ == "__main__":
    main()
