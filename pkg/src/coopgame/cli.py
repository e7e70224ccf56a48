"""Command-line front end: load a game or inventory situation and report on it.

    coopgame analyze FILE [--commands soc,pmas,...] [--tol X]
                          [--format json|text] [--orientation cost|benefit] [--p P]

Exit status is 0 on success, 2 when the input fails validation and 3 when a
numeric routine breaks down.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .game_core import GameError, Orientation, TuGame, format_coalition, game_from_table, labels
from .inventory import (
    Firm,
    InventoryError,
    InventorySituation,
    build_id_game,
    coalition_policy,
    coalition_saving,
    discount_constant,
    epq_optimal,
    lambda_of,
    orders_rate,
    saving_single,
    special_order,
)
from .padditive import PAdditiveGame, game_profile, orientations, validate_membership
from .solutions import SOC, builtin_counterexamples, modified_soc, pmas_soc, run_axioms, sample_battery
from .verify import (
    core_bounds,
    core_contains,
    core_nonempty,
    is_concave,
    is_convex,
    is_monotone,
    is_permutationally_concave,
    is_subadditive,
    is_superadditive,
    is_totally_balanced,
)

MODES = ("inventory", "game", "padditive")
COMMANDS = ("analyze", "soc", "pmas", "core", "bounds", "axioms", "classify")
NEEDS_P = {"soc", "pmas", "axioms", "classify"}
NEEDS_ORIENTATION = {"core", "bounds"}
DEFAULT_TOL = 1e-9
AXIOM_SEED = 20080101
EXIT_OK, EXIT_VALIDATION, EXIT_NUMERIC = 0, 2, 3

FIXTURES = Path(__file__).parent / "fixtures"


class ValidationError(ValueError):
    pass


def _number(x, what: str) -> float:
    """Parse a JSON number or an exact fraction string such as ``"1/6"``."""
    if isinstance(x, bool):
        raise ValidationError(f"{what}: expected a number, got {x!r}")
    if isinstance(x, (int, float)):
        v = float(x)
    elif isinstance(x, str):
        try:
            v = float(Fraction(x.strip()))
        except (ValueError, ZeroDivisionError) as exc:
            raise ValidationError(f"{what}: cannot parse {x!r}") from exc
    else:
        raise ValidationError(f"{what}: expected a number, got {x!r}")
    if not math.isfinite(v):
        raise ValidationError(f"{what}: must be finite")
    return v


def _read(path) -> dict:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path} is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ValidationError("top level must be a JSON object")
    return doc


def situation_from_dict(doc: dict) -> InventorySituation:
    try:
        firms = [
            Firm(*(_number(f[key], f"firms[{i}].{key}") for key in ("d", "h", "s", "r")))
            for i, f in enumerate(doc["firms"])
        ]
        return InventorySituation(
            tuple(firms),
            a=_number(doc["a"], "a"),
            k=_number(doc.get("k", 0), "k"),
            P=_number(doc.get("P", 1), "P"),
            alpha=_number(doc.get("alpha", 1), "alpha"),
            lambdaN=_number(doc.get("lambdaN", 1), "lambdaN"),
        )
    except KeyError as exc:
        raise ValidationError(f"missing field {exc}") from exc
    except (TypeError, InventoryError) as exc:
        raise ValidationError(str(exc)) from exc


def situation_to_dict(sit: InventorySituation) -> dict:
    return {
        "mode": "inventory",
        "a": sit.a,
        "k": sit.k,
        "P": sit.P,
        "alpha": sit.alpha,
        "lambdaN": sit.lambdaN,
        "firms": [{"d": f.d, "h": f.h, "s": f.s, "r": f.r} for f in sit.firms],
    }


def load_situation(path) -> InventorySituation:
    doc = _read(path)
    if doc.get("mode", "inventory") != "inventory":
        raise ValidationError(f"expected mode 'inventory', got {doc.get('mode')!r}")
    return situation_from_dict(doc)


def game_from_dict(doc: dict) -> TuGame:
    try:
        n = int(doc["n"])
        entries = doc["values"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"game needs integer 'n' and a 'values' list ({exc})") from exc
    table = {}
    for k, entry in enumerate(entries):
        try:
            key = tuple(int(i) for i in entry["coalition"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ValidationError(f"values[{k}] needs a 'coalition' list of player labels") from exc
        if any(not 1 <= i <= n for i in key):
            raise ValidationError(f"values[{k}]: labels must lie in 1..{n}")
        if len(set(key)) != len(key):
            raise ValidationError(f"values[{k}]: repeated player label")
        fkey = frozenset(key)
        if fkey in table:
            raise ValidationError(f"values[{k}]: coalition {sorted(key)} given twice")
        table[fkey] = _number(entry.get("value"), f"values[{k}].value")
    if frozenset() in table and table.pop(frozenset()) != 0:
        raise ValidationError("value of the empty coalition must be 0")
    try:
        return game_from_table(n, table)
    except GameError as exc:
        raise ValidationError(str(exc)) from exc


@dataclass
class AnalysisRequest:
    input: str
    commands: list[str] = field(default_factory=list)
    tol: float = DEFAULT_TOL
    orientation: Orientation | None = None
    p: float | None = None
    format: str = "json"


@dataclass
class Report:
    provenance: dict
    results: dict
    version: str = __version__

    def as_dict(self) -> dict:
        return {"tool": "coopgame", "version": self.version, "input": self.provenance, "results": self.results}

    def to_json(self) -> str:
        return _dump_json(self.as_dict()) + "\n"

    def to_text(self) -> str:
        lines = [f"coopgame {self.version}: {self.provenance['path']} (mode {self.provenance['mode']})"]
        for cmd, res in self.results.items():
            lines.append("")
            lines.append(f"[{cmd}]")
            lines.extend(_text_lines(res, "  "))
        return "\n".join(lines) + "\n"


def _fmt_float(x: float) -> str:
    s = format(x, ".17g")
    if s in ("inf", "-inf", "nan"):
        raise ArithmeticError(f"non-finite value {s} in report")
    return s


def _dump_json(obj, indent: int = 0) -> str:
    """JSON with every real written to 17 significant digits."""
    pad, inner = "  " * indent, "  " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{json.dumps(str(k))}: {_dump_json(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if all(not isinstance(v, (dict, list, tuple)) for v in obj):
            return "[" + ", ".join(_dump_json(v) for v in obj) + "]"
        return "[\n" + ",\n".join(inner + _dump_json(v, indent + 1) for v in obj) + "\n" + pad + "]"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(float(obj))
    if obj is None:
        return "null"
    return json.dumps(str(obj))


def pretty_number(x: float) -> str:
    """A fraction with terms up to 1000 when ``x`` is within 1e-12 of one."""
    f = Fraction(x).limit_denominator(1000)
    if abs(f.numerator) <= 1000 and abs(float(f) - x) <= 1e-12:
        return str(f)
    return format(x, ".12g")


def _text_value(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "yes" if v else "no"
    if isinstance(v, (float, np.floating)):
        return pretty_number(float(v))
    if isinstance(v, (list, tuple)) and all(isinstance(u, (int, float, np.number)) for u in v):
        return "(" + ", ".join(_text_value(u) for u in v) + ")"
    return str(v)


def _text_lines(res, pad: str) -> list[str]:
    out = []
    if isinstance(res, dict):
        for k, v in res.items():
            if isinstance(v, (dict, list)) and not (
                isinstance(v, list) and all(isinstance(u, (int, float, np.number)) for u in v)
            ):
                out.append(f"{pad}{k}:")
                out.extend(_text_lines(v, pad + "  "))
            else:
                out.append(f"{pad}{k}: {_text_value(v)}")
    elif isinstance(res, list):
        for item in res:
            if isinstance(item, dict) and "coalition" in item:
                rest = {k: v for k, v in item.items() if k != "coalition"}
                body = ", ".join(f"{k}={_text_value(v)}" for k, v in rest.items())
                out.append(f"{pad}{format_coalition_labels(item['coalition'])}: {body}")
            elif isinstance(item, dict) and all(not isinstance(v, dict) for v in item.values()):
                out.append(pad + ", ".join(f"{k}={_text_value(v)}" for k, v in item.items()))
            else:
                out.extend(_text_lines(item, pad) if isinstance(item, (dict, list)) else [pad + _text_value(item)])
    else:
        out.append(pad + _text_value(res))
    return out


def format_coalition_labels(lab) -> str:
    return "{" + ",".join(str(i) for i in lab) + "}"


def _coalition_rows(n: int, func) -> list[dict]:
    return [{"coalition": list(labels(S)), **func(S)} for S in range(1, 1 << n)]


def _analyze_game(g: TuGame, orientation: Orientation | None, membership: dict | None) -> dict:
    out = {}
    if membership is not None:
        out["p-additive"] = membership
    checks = [
        lambda: is_monotone(g, "increasing"),
        lambda: is_monotone(g, "decreasing"),
        lambda: is_monotone(g, "decreasing", strict=True),
        lambda: is_subadditive(g),
        lambda: is_superadditive(g),
        lambda: is_convex(g),
        lambda: is_concave(g),
    ]
    if orientation is not None:
        checks.append(lambda: is_permutationally_concave(g, orientation))
        checks.append(lambda: is_totally_balanced(g, orientation))
    for check in checks:
        try:
            rep = check()
        except GameError as exc:
            out.setdefault("skipped", []).append(str(exc))
            continue
        entry = {"verdict": rep.verdict}
        if not rep.verdict and rep.witness:
            entry["witness"] = {
                k: (format_coalition(v) if k in ("S", "T", "R", "subgame") else v) for k, v in rep.witness.items()
            }
        out[rep.name] = entry
    return out


def _analyze_inventory(sit: InventorySituation) -> dict:
    firms = []
    for i, f in enumerate(sit.firms):
        Q, M = epq_optimal(f, sit.a)
        row = {"firm": i + 1, "Q*": Q, "M*": M, "m": orders_rate(f, sit.a)}
        if f.d > 0:
            Qb, Mb = special_order(f, sit.a, sit.k)
            row.update({"Qbar": Qb, "Mbar": Mb})
        row["saving"] = saving_single(f, sit.a, sit.k)
        firms.append(row)
    out = {"firms": firms}
    if sit.n <= 10:
        out["coalitions"] = _coalition_rows(
            sit.n,
            lambda S: {
                "h_S": coalition_policy(sit, S).hS,
                "m_S": coalition_policy(sit, S).mS,
                "saving": coalition_saving(sit, S),
                "lambda": lambda_of(sit, S),
            },
        )
    out["K_lambda"] = discount_constant(sit)
    return out


def _resolve(req: AnalysisRequest):
    doc = _read(req.input)
    mode = doc.get("mode")
    if mode not in MODES:
        raise ValidationError(f"unknown mode {mode!r}; expected one of {', '.join(MODES)}")
    commands = req.commands or {
        "game": ["analyze", "core", "bounds"],
        "padditive": ["classify", "soc", "pmas", "core"],
        "inventory": ["analyze", "soc", "pmas", "core"],
    }[mode]
    unknown = [c for c in commands if c not in COMMANDS]
    if unknown:
        raise ValidationError(f"unknown command(s) {', '.join(unknown)}")

    p = req.p if req.p is not None else (_number(doc["p"], "p") if "p" in doc else None)
    sit = game = pg = None
    membership = None
    if mode == "inventory":
        sit = situation_from_dict(doc)
        try:
            pg = build_id_game(sit)
        except InventoryError as exc:
            raise ValidationError(str(exc)) from exc
        p = pg.p
    elif mode == "padditive":
        if p is None:
            raise ValidationError("mode 'padditive' needs an exponent (--p or a 'p' field)")
        if "indiv" not in doc or not isinstance(doc["indiv"], list):
            raise ValidationError("mode 'padditive' needs an 'indiv' list")
        indiv = [_number(v, f"indiv[{i}]") for i, v in enumerate(doc["indiv"])]
        try:
            pg = PAdditiveGame(p, indiv)
        except GameError as exc:
            raise ValidationError(str(exc)) from exc
    else:
        game = game_from_dict(doc)
        if p is not None:
            if p == 0:
                raise ValidationError("p must be nonzero")
            mem = validate_membership(game, p, req.tol)
            membership = {"p": p, "member": mem.ok}
            if not mem.ok:
                membership["violator"] = format_coalition(mem.violator)
            elif np.any(game.singletons() > 0) or p == 2:
                pg = PAdditiveGame(p, np.maximum(game.singletons(), 0.0))
    if game is None:
        game = pg.expand()
    if pg is not None and membership is None:
        membership = {"p": pg.p, "member": True}

    needs_p = [c for c in commands if c in NEEDS_P]
    if needs_p and pg is None:
        if p is None:
            raise ValidationError(f"command(s) {', '.join(needs_p)} need an exponent (--p or a 'p' field)")
        raise ValidationError(f"game is not {p:g}-additive (violated at {membership['violator']})")

    orientation = req.orientation
    if orientation is None and pg is not None:
        orientation = orientations(pg.p)[0]
    if orientation is None and any(c in NEEDS_ORIENTATION for c in commands):
        raise ValidationError("core commands need --orientation when no exponent is given")
    return doc, mode, commands, sit, game, pg, orientation, membership


def run(req: AnalysisRequest) -> Report:
    doc, mode, commands, sit, game, pg, orientation, membership = _resolve(req)
    results = {}
    for cmd in commands:
        if cmd == "analyze":
            res = _analyze_game(game, orientation, membership)
            if sit is not None:
                res = {"inventory": _analyze_inventory(sit), "game": res}
        elif cmd == "classify":
            res = game_profile(pg)
        elif cmd == "soc":
            x = modified_soc(pg)
            res = {"allocation": x.tolist(), "w(N)": game[game.grand]}
            if game.n <= 20:
                res["in core"] = {o.value: core_contains(game, x, o, req.tol).ok for o in orientations(pg.p)}
        elif cmd == "pmas":
            y = pmas_soc(pg)
            res = _coalition_rows(game.n, lambda S: {"allocation": y.allocation(S).tolist()})
        elif cmd == "core":
            chk = core_nonempty(game, orientation)
            res = {"orientation": orientation.value, "nonempty": chk.nonempty}
            if chk.nonempty:
                res["certificate"] = chk.certificate.tolist()
        elif cmd == "bounds":
            b = core_bounds(game, orientation)
            res = {
                "orientation": orientation.value,
                "players": [{"player": i + 1, "lo": b.lo[i], "hi": b.hi[i]} for i in range(game.n)],
            }
        elif cmd == "axioms":
            battery = sample_battery(np.random.default_rng(AXIOM_SEED), pg.p, pairs=10, n_range=(pg.n, pg.n))
            battery.games.insert(0, pg)
            battery.pairs = [(pg, b) for _, b in battery.pairs]
            res = {}
            for sol in [SOC, *builtin_counterexamples()]:
                checks = run_axioms(sol, battery)
                res[sol.name] = {ax: chk.ok for ax, chk in checks.items()}
        results[cmd] = res
    provenance = {
        "path": str(req.input),
        "mode": mode,
        "commands": commands,
        "tol": req.tol,
        "orientation": orientation.value if orientation else None,
        "document": doc,
    }
    return Report(provenance, results)


def default_tol() -> float:
    raw = os.environ.get("COOPGAME_TOL")
    if raw is None:
        return DEFAULT_TOL
    try:
        tol = float(raw)
    except ValueError as exc:
        raise ValidationError(f"COOPGAME_TOL is not a decimal number: {raw!r}") from exc
    if not tol > 0:
        raise ValidationError("COOPGAME_TOL must be positive")
    return tol


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="coopgame", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"coopgame {__version__}")
    sub = parser.add_subparsers(dest="cmd", required=True)
    a = sub.add_parser("analyze", help="run analyses on a game or inventory file")
    a.add_argument("file")
    a.add_argument("--commands", help=f"comma-separated subset of {','.join(COMMANDS)}")
    a.add_argument("--tol", type=float)
    a.add_argument("--format", choices=("json", "text"), default="json")
    a.add_argument("--orientation", choices=("cost", "benefit"))
    a.add_argument("--p", type=float)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        tol = args.tol if args.tol is not None else default_tol()
        req = AnalysisRequest(
            input=args.file,
            commands=[c.strip() for c in args.commands.split(",") if c.strip()] if args.commands else [],
            tol=tol,
            orientation=Orientation(args.orientation) if args.orientation else None,
            p=args.p,
            format=args.format,
        )
        report = run(req)
        sys.stdout.write(report.to_json() if req.format == "json" else report.to_text())
    except (ValidationError, GameError, InventoryError) as exc:
        print(f"coopgame: invalid input: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except ArithmeticError as exc:
        print(f"coopgame: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
