"""Command-line interface.

    bellscope report ghz --n 5 --beta 0.115
    bellscope report dur --n 6 --alpha 0.3 --expect-violation
    bellscope scan ghz --n 3:8 --beta-grid 0:0.785398163397:50 --format csv --output ghz.csv
    bellscope entanglement dur --n 6
    bellscope oracle --n 3 --m 256 --decoupled
    bellscope mk dur --n 8

Exit codes: 0 success, 1 usage or parameter error, 2 ``--expect-violation``
given but the state is not violated.

``--config FILE`` reads ``key = value`` lines using the long flag names
(``n = 5``, ``beta-grid = 0:0.7:20``); command-line flags take precedence.
The ``BELLSCOPE_THREADS`` environment variable caps BLAS/OpenMP threads.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from contextlib import nullcontext

import numpy as np

from .functional import (
    QuadratureSpec,
    ghz_threshold_functional,
    ghz_threshold_two_setting,
    violation_report,
)
from .mermin import mk_maximize
from .observables import HarmonicForm, correlation_tensor, detect_harmonic
from .oracle import maximize_decoupled, maximize_exhaustive, maximize_greedy
from .states import cuts_of_size, dur_alpha, is_ppt, make_dur_state, make_generalized_ghz

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NOT_VIOLATED = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _num(x: float) -> float:
    """Round to 12 significant digits so JSON and CSV carry identical numbers."""
    return float(f"{x:.12g}")


def _fmt(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return f"{x:.12g}"
    return str(x)


def _round_tree(obj):
    if isinstance(obj, bool):
        return obj
    if isinstance(obj, float):
        return _num(obj)
    if isinstance(obj, dict):
        return {k: _round_tree(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_tree(v) for v in obj]
    return obj


def _dump_json(obj) -> str:
    return json.dumps(_round_tree(obj), indent=2) + "\n"


def _dump_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    if rows:
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(list(rows[0]))
        for row in rows:
            writer.writerow([_fmt(v) for v in row.values()])
    return buf.getvalue()


def _emit(args, obj, rows: list[dict] | None = None):
    if args.format == "csv":
        text = _dump_csv(rows if rows is not None else [obj])
    else:
        text = _dump_json(obj)
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _parse_range(text: str) -> list[int]:
    try:
        if ":" in text:
            lo, hi = (int(p) for p in text.split(":"))
        else:
            lo = hi = int(text)
    except ValueError as exc:
        raise UsageError(f"bad integer range {text!r}; use N or LO:HI") from exc
    if hi < lo:
        raise UsageError(f"empty range {text!r}")
    return list(range(lo, hi + 1))


def _parse_grid(text: str) -> list[float]:
    """``start:stop:count`` (inclusive linspace) or a comma-separated list."""
    try:
        if ":" in text:
            start, stop, count = text.split(":")
            values = np.linspace(float(start), float(stop), int(count)).tolist()
        else:
            values = [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise UsageError(f"bad grid {text!r}; use START:STOP:COUNT or v1,v2,...") from exc
    if not values:
        raise UsageError("empty parameter grid")
    if any(b <= a for a, b in zip(values, values[1:])):
        raise UsageError("parameter grid must be strictly increasing")
    return values


def _build_state(family: str, n: int, beta, alpha):
    if family == "ghz":
        if beta is None:
            raise UsageError("--beta is required for the ghz family")
        return make_generalized_ghz(n, beta), {"beta": beta}
    if alpha is None:
        alpha = dur_alpha(n)
    return make_dur_state(n, alpha), {"alpha": alpha}


def _quad(args):
    return None if args.quad_points is None else QuadratureSpec(args.quad_points)


def _report_row(report, family, n, params) -> dict:
    row = {"family": family, "n": n}
    row.update(params)
    if family == "ghz":
        row["sin2beta"] = math.sin(2 * params["beta"])
    row.update(
        amplitude=report.harmonic.amplitude,
        norm_sq=report.norm_sq,
        lhv_bound=report.lhv_bound,
        margin=report.margin,
        violated=report.violated,
        method=report.method,
    )
    return row


def cmd_report(args) -> int:
    state, params = _build_state(args.family, args.n, args.beta, args.alpha)
    report = violation_report(state, _quad(args), family=args.family, params=params)
    payload = report.to_dict()
    payload["functional_threshold"] = ghz_threshold_functional(args.n)
    _emit(args, payload, [_report_row(report, args.family, args.n, params)])
    if args.expect_violation and not report.violated:
        return EXIT_NOT_VIOLATED
    return EXIT_OK


def cmd_scan(args) -> int:
    ns = _parse_range(args.n)
    rows = []
    for n in ns:
        if args.family == "ghz":
            grid = _parse_grid(args.beta_grid) if args.beta_grid else \
                np.linspace(0.0, np.pi / 4, 50).tolist()
            params_list = [(b, None) for b in grid]
        else:
            grid = _parse_grid(args.alpha_grid) if args.alpha_grid else [dur_alpha(n)]
            params_list = [(None, a) for a in grid]
        for beta, alpha in params_list:
            state, params = _build_state(args.family, n, beta, alpha)
            report = violation_report(state, _quad(args), family=args.family, params=params)
            row = _report_row(report, args.family, n, params)
            row["functional_threshold"] = ghz_threshold_functional(n)
            row["two_setting_threshold"] = ghz_threshold_two_setting(n)
            rows.append(row)
    _emit(args, {"family": args.family, "rows": rows}, rows)
    if args.expect_violation and not all(r["violated"] for r in rows):
        return EXIT_NOT_VIOLATED
    return EXIT_OK


def cmd_entanglement(args) -> int:
    state, params = _build_state(args.family, args.n, args.beta, args.alpha)
    rows, notes = [], []
    n = args.n
    one_cuts = cuts_of_size(n, 1)
    two_cuts = cuts_of_size(n, 2) if n >= 4 else []
    if n < 4:
        notes.append(f"N={n}: no 2:(N-2) cuts distinct from the 1:(N-1) cuts")
    for kind, cuts in (("1:(N-1)", one_cuts), ("2:(N-2)", two_cuts)):
        for cut in cuts:
            ppt, lowest = is_ppt(state, cut, args.tol)
            rows.append({"cut": cut.label(), "kind": kind, "min_eigenvalue": lowest, "ppt": ppt})
    payload = {"family": args.family, "n": n, "params": params, "tol": args.tol,
               "cuts": rows, "notes": notes}
    _emit(args, payload, rows)
    return EXIT_OK


def cmd_oracle(args) -> int:
    if args.family is None:
        harmonic = HarmonicForm(args.amplitude, args.phase, True)
        params = {"amplitude": args.amplitude, "phase": args.phase}
    else:
        if args.n < 2 or (args.family == "dur" and args.n < 3):
            raise UsageError("family states need --n >= 2 (ghz) or >= 3 (dur)")
        state, params = _build_state(args.family, args.n, args.beta, args.alpha)
        harmonic = detect_harmonic(correlation_tensor(state))
    if args.method == "exhaustive":
        result = maximize_exhaustive(harmonic, args.n, args.m)
    elif args.method == "greedy":
        result = maximize_greedy(harmonic, args.n, args.m, args.restarts)
    else:
        result = maximize_decoupled(harmonic, args.n, args.m)
    payload = result.to_dict()
    payload["params"] = params
    row = {k: v for k, v in payload.items() if k not in ("strategy_bits", "params")}
    _emit(args, payload, [row])
    return EXIT_OK


def cmd_mk(args) -> int:
    state, params = _build_state(args.family, args.n, args.beta, args.alpha)
    result = mk_maximize(state, restarts=args.restarts)
    payload = {"family": args.family, "n": args.n, "params": params, **result.to_dict()}
    row = {"family": args.family, "n": args.n, **params, "value": result.value,
           "lhv_bound": result.lhv_bound, "violated": result.violated}
    _emit(args, payload, [row])
    if args.expect_violation and not result.violated:
        return EXIT_NOT_VIOLATED
    return EXIT_OK


def _common(p, family=True, n_type=int):
    if family:
        p.add_argument("family", choices=["ghz", "dur"])
    p.add_argument("--n", type=n_type, required=True, help="number of qubits")
    p.add_argument("--beta", type=float, help="GHZ angle in [0, pi/4]")
    p.add_argument("--alpha", type=float, help="Dür phase (default pi/(4(N-1)))")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--output", help="write to this file instead of stdout")
    p.add_argument("--config", help="key = value file mirroring the flags")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="bellscope", description="Functional Bell inequality toolkit")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("report", help="functional Bell test for one state")
    _common(p)
    p.add_argument("--quad-points", type=int, help="cross-check the norm by quadrature")
    p.add_argument("--expect-violation", action="store_true")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("scan", help="functional Bell test over N and a parameter grid")
    _common(p, n_type=str)
    p.add_argument("--beta-grid", help="START:STOP:COUNT or comma list (ghz)")
    p.add_argument("--alpha-grid", help="START:STOP:COUNT or comma list (dur)")
    p.add_argument("--quad-points", type=int)
    p.add_argument("--expect-violation", action="store_true")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("entanglement", help="PPT table over 1:(N-1) and 2:(N-2) cuts")
    _common(p)
    p.add_argument("--tol", type=float, default=1e-10)
    p.set_defaults(func=cmd_entanglement)

    p = sub.add_parser("oracle", help="maximise the discretised LHV scalar product")
    _common(p, family=False)
    p.add_argument("--family", choices=["ghz", "dur"])
    p.add_argument("--m", type=int, default=256, help="grid points per site")
    p.add_argument("--amplitude", type=float, default=1.0)
    p.add_argument("--phase", type=float, default=0.0)
    p.add_argument("--restarts", type=int, default=8)
    group = p.add_mutually_exclusive_group()
    group.add_argument("--decoupled", dest="method", action="store_const", const="decoupled")
    group.add_argument("--exhaustive", dest="method", action="store_const", const="exhaustive")
    group.add_argument("--greedy", dest="method", action="store_const", const="greedy")
    p.set_defaults(func=cmd_oracle, method="decoupled")

    p = sub.add_parser("mk", help="optimised two-setting Mermin-Klyshko value")
    _common(p)
    p.add_argument("--restarts", type=int, default=32)
    p.add_argument("--expect-violation", action="store_true")
    p.set_defaults(func=cmd_mk)
    return parser


def read_config(path: str) -> dict:
    values = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected key = value")
            key, value = (s.strip() for s in line.split("=", 1))
            values[key.lstrip("-").replace("-", "_")] = value
    return values


def _config_path(argv) -> str | None:
    for i, tok in enumerate(argv):
        if tok == "--config" and i + 1 < len(argv):
            return argv[i + 1]
        if tok.startswith("--config="):
            return tok.split("=", 1)[1]
    return None


def _apply_config(parser, argv):
    path = _config_path(argv)
    command = next((tok for tok in argv if not tok.startswith("-")), None)
    choices = parser._subparsers._group_actions[0].choices
    if path is None or command not in choices:
        return parser.parse_args(argv)
    sub = choices[command]
    actions = {a.dest: a for a in sub._actions}
    defaults = {}
    for key, raw in read_config(path).items():
        if key not in actions or key in ("help", "config"):
            raise UsageError(f"unknown config key {key!r}")
        action = actions[key]
        if action.nargs == 0:
            defaults[key] = raw.lower() in ("1", "true", "yes", "on")
        else:
            defaults[key] = action.type(raw) if action.type else raw
        action.required = False
    sub.set_defaults(**defaults)
    return parser.parse_args(argv)


def _thread_limit():
    raw = os.environ.get("BELLSCOPE_THREADS")
    if not raw:
        return nullcontext()
    from threadpoolctl import threadpool_limits

    return threadpool_limits(limits=max(1, int(raw)))


def main(argv=None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = _apply_config(parser, argv)
        with _thread_limit():
            return args.func(args)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    except (UsageError, ValueError, OSError) as exc:
        print(f"bellscope: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
