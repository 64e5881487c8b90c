"""Command-line front end: ``netnl <command> [options]``.

Every command accepts single values or inclusive ranges (``3..8``) or
comma lists for ``--n`` and ``--m`` and walks the grid m-major, n-minor.
Exit codes: 0 on success, 1 when a size guard is hit, 2 on bad arguments.
Errors are also written to stderr as JSON.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from . import bounds as bnd
from .behaviors import optimal_provider
from .errors import GuardError
from .functionals import FAMILIES, FunctionalSpec, evaluate
from .oracle import brute_hybrid_max, brute_local_max, lnl_term_decomposition
from .report import SCHEMA, validation_report
from .soscert import sos_residuals

COMMANDS = ("bounds", "quantum", "lnl", "oracle", "sos", "fnn", "sweep", "validate")
DEFAULT_TOL = 1e-9


class ArgumentError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ArgumentError(message)


def parse_range(text: str) -> list[int]:
    """'5' -> [5], '3..8' -> [3..8], '2,4' -> [2, 4]."""
    out = []
    for part in text.split(","):
        part = part.strip()
        if ".." in part:
            lo, hi = part.split("..", 1)
            lo, hi = int(lo), int(hi)
            if hi < lo:
                raise ArgumentError(f"empty range {part!r}")
            out.extend(range(lo, hi + 1))
        elif part:
            out.append(int(part))
    if not out:
        raise ArgumentError(f"empty range {text!r}")
    return out


@dataclass(frozen=True)
class RunConfig:
    command: str
    family: str | None
    ns: tuple
    ms: tuple
    p: int
    fmt: str
    out: str | None
    threads: int
    tol: float
    local: tuple | None = None
    unreduced: bool = False

    def __post_init__(self):
        if not self.ns or not self.ms:
            raise ArgumentError("n and m ranges must be non-empty")
        if not self.tol > 0:
            raise ArgumentError(f"tolerance must be positive, got {self.tol}")
        if self.threads < 1:
            raise ArgumentError(f"threads must be >= 1, got {self.threads}")

    def grid(self):
        return [(n, m) for m in self.ms for n in self.ns]


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="netnl", description="Network nonlocality functionals, bounds and certificates.")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--family", choices=FAMILIES)
    parser.add_argument("--n", default="2", help="number of sources: N, A..B or a comma list")
    parser.add_argument("--m", default="3", help="inputs per edge party: N, A..B or a comma list")
    parser.add_argument("--p", type=int, default=1, help="number of local sources (star_delta pLNL)")
    parser.add_argument("--local", help="explicit local sources for lnl, e.g. '2' or '1,3'")
    parser.add_argument("--unreduced", action="store_true", help="oracle: enumerate full strategies")
    parser.add_argument("--format", dest="fmt", choices=("json", "csv"))
    parser.add_argument("--out", help="write the report to this path instead of stdout")
    parser.add_argument("--threads", type=int, help="worker threads (default: $NETNL_THREADS or 1)")
    parser.add_argument("--tol", type=float, default=DEFAULT_TOL, help="pass/fail tolerance")
    return parser


def parse_config(argv) -> RunConfig:
    args = build_parser().parse_args(argv)
    needs_family = args.command not in ("validate",)
    if needs_family and args.family is None:
        raise ArgumentError(f"{args.command} requires --family")
    threads = args.threads
    if threads is None:
        env = os.environ.get("NETNL_THREADS", "1")
        try:
            threads = int(env)
        except ValueError:
            raise ArgumentError(f"NETNL_THREADS must be an integer, got {env!r}") from None
    fmt = args.fmt or ("csv" if args.command == "sweep" else "json")
    local = tuple(parse_range(args.local)) if args.local else None
    try:
        ns, ms = tuple(parse_range(args.n)), tuple(parse_range(args.m))
    except ValueError as exc:
        raise ArgumentError(str(exc)) from None
    return RunConfig(args.command, args.family, ns, ms, args.p, fmt, args.out, threads, args.tol, local,
                     args.unreduced)


# -- commands --------------------------------------------------------------------


def _bounds(cfg: RunConfig, n: int, m: int) -> dict:
    return bnd.bounds(cfg.family, n, m, cfg.p).to_json()


def _quantum(cfg: RunConfig, n: int, m: int) -> dict:
    spec = FunctionalSpec(cfg.family, n, m)
    value = evaluate(spec, optimal_provider(cfg.family, n, m))
    closed = bnd.bounds(cfg.family, n, m).quantum_opt
    gap = abs(value.total - closed)
    return {"family": cfg.family, "n": n, "m": m, "value": value.total, "closed_form": closed, "gap": gap,
            "ok": gap <= cfg.tol, "terms": value.to_json()["terms"]}


def _lnl(cfg: RunConfig, n: int, m: int) -> dict:
    spec = FunctionalSpec(cfg.family, n, m)
    local = cfg.local or tuple(range(1, cfg.p + 1))
    result = brute_hybrid_max(spec, local_edges=local)
    closed = None
    if local == tuple(range(1, len(local) + 1)):
        if cfg.family == "star_delta":
            closed = bnd.plnl_delta(n, m, len(local))
        elif len(local) == 1:
            closed = bnd.bounds(cfg.family, n, m).lnl_value
    terms = lnl_term_decomposition(spec, result.argmax)
    out = {"family": cfg.family, "n": n, "m": m, "local_sources": list(local), "value": result.best_value,
           "deterministic_value": result.deterministic_value, "certificate_gap": result.certificate_gap,
           "closed_form": closed, "gap": None if closed is None else abs(result.best_value - closed),
           "evaluations": result.evaluations, "terms": terms.to_json()["terms"],
           "assignment": result.argmax.to_json()}
    out["ok"] = None if closed is None else out["gap"] <= cfg.tol
    return out


def _oracle(cfg: RunConfig, n: int, m: int) -> dict:
    result = brute_local_max(FunctionalSpec(cfg.family, n, m), unreduced=cfg.unreduced)
    closed = bnd.bounds(cfg.family, n, m).local_bound
    return {"family": cfg.family, "n": n, "m": m, "value": result.best_value, "closed_form": closed,
            "ok": abs(result.best_value - closed) <= cfg.tol, "evaluations": result.evaluations,
            "assignment": result.argmax.to_json()}


def _sos(cfg: RunConfig, n: int, m: int) -> dict:
    report = sos_residuals(cfg.family, n, m).to_json()
    report["ok"] = report["max_residual"] <= cfg.tol and report["optimum_gap"] <= cfg.tol
    return report


def _fnn(cfg: RunConfig, n: int, m: int) -> dict:
    b = bnd.bounds(cfg.family, n, m)
    out = {"family": cfg.family, "n": n, "m": m, "fnn": b.fnn, "quantum": b.quantum_opt, "lnl": b.lnl_value,
           "threshold_n": b.to_json()["threshold"]}
    if cfg.family == "star_delta":
        p = bnd.plnl_threshold(n, m)
        out["min_local_sources_for_fnn"] = "none" if p is None else p
    return out


_HANDLERS = {
    "bounds": _bounds,
    "sweep": _bounds,
    "quantum": _quantum,
    "lnl": _lnl,
    "oracle": _oracle,
    "sos": _sos,
    "fnn": _fnn,
}


def run(cfg: RunConfig) -> dict:
    if cfg.command == "validate":
        return validation_report()
    handler = _HANDLERS[cfg.command]
    grid = cfg.grid()
    if cfg.threads > 1 and len(grid) > 1:
        with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            results = list(pool.map(lambda nm: handler(cfg, *nm), grid))
    else:
        results = [handler(cfg, n, m) for n, m in grid]
    return {"schema": SCHEMA, "command": cfg.command, "results": results}


def render(cfg: RunConfig, payload: dict) -> str:
    if cfg.fmt == "json":
        return json.dumps(payload, indent=2) + "\n"
    rows = payload.get("results", payload.get("findings", []))
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    if cfg.command in ("bounds", "sweep"):
        writer.writerow(bnd.CSV_COLUMNS)
        for row in rows:
            writer.writerow([_cell(row[c]) for c in bnd.CSV_COLUMNS])
        return buf.getvalue()
    columns = [k for k, v in rows[0].items() if not isinstance(v, (dict, list))] if rows else []
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_cell(row.get(c)) for c in columns])
    return buf.getvalue()


def _cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return bnd.fmt(value)
    if value is None:
        return ""
    return str(value)


def _fail(code: int, kind: str, message: str, module: str | None = None) -> int:
    err = {"schema": SCHEMA, "error": kind, "message": message}
    if module:
        err["module"] = module
    sys.stderr.write(json.dumps(err) + "\n")
    return code


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        cfg = parse_config(argv)
        text = render(cfg, run(cfg))
    except GuardError as exc:
        return _fail(1, "guard", str(exc), exc.module)
    except ValueError as exc:
        return _fail(2, "argument", str(exc))
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
