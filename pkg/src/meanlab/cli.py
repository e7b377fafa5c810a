"""Command-line interface.

Subcommands
-----------
eval          evaluate a system on one weighting / value vector
axioms        run the randomized law checks and report counterexamples
recover       identify the exponent of a black-box system from probes
characterize  recover an exponent, then stress-test the identification
sandwich      bracket a system value between nearby rational weightings

Systems are given either as ``--builtin P`` (a power mean; P is a float,
``inf``, ``-inf``, or ``0``, optionally prefixed ``p=``) or as ``--dsl EXPR``
(an expression in the small mean-expression language; see the package README
for the grammar).

Exit codes: 0 success / property holds; 1 a property failed, a counterexample
or degenerate identification was found, or the system errored while being
evaluated; 2 bad usage or malformed input.

Reports are emitted as JSON (default) or CSV in long ``record,field,value``
form, with sorted keys and fixed separators so equal results are equal bytes.
``--seed`` defaults to the ``MEANLAB_SEED`` environment variable when set.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys

import numpy as np

from .characterize import (
    CharacterizationConfig,
    characterization_to_dict,
    rational_sandwich,
    recover_exponent,
    recovery_to_dict,
    sandwich_to_dict,
    verify_characterization,
)
from .core import Exponent, ValueVector, Weighting
from .dsl import ExprSyntaxError
from .harness import (
    CheckConfig,
    deterministic_json,
    run_full_suite,
    suite_passed,
    suite_to_dict,
)
from .systems import MeanSystem, builtin_power_mean_system, dsl_mean_system

__all__ = ["main", "build_parser"]


class _UsageError(Exception):
    pass


# ── Argument plumbing ─────────────────────────────────────────────────────────


def _add_system_args(sub: argparse.ArgumentParser) -> None:
    group = sub.add_mutually_exclusive_group(required=True)
    group.add_argument("--builtin", metavar="P",
                       help="power mean exponent (float, 'inf', '-inf', or '0')")
    group.add_argument("--dsl", metavar="EXPR",
                       help="mean expression, e.g. 'sum(w*x^2)^0.5'")


def _add_vector_args(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--w", metavar="LIST",
                     help="comma-separated weights, e.g. '0.5,0.5'")
    sub.add_argument("--x", metavar="LIST",
                     help="comma-separated values, e.g. '1,7'")
    sub.add_argument("--input", metavar="FILE",
                     help="JSON file with fields 'w' and 'x' (overrides --w/--x)")


def _add_output_args(sub: argparse.ArgumentParser, default_format: str) -> None:
    sub.add_argument("--format", choices=("json", "csv"), default=default_format)
    sub.add_argument("--output", metavar="FILE", help="write the report here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="meanlab", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    subs = parser.add_subparsers(dest="command", required=True)

    p_eval = subs.add_parser("eval", help="evaluate a system on one input")
    _add_system_args(p_eval)
    _add_vector_args(p_eval)
    p_eval.add_argument("--format", choices=("json", "csv"), default=None,
                        help="default: print the bare value")
    p_eval.add_argument("--output", metavar="FILE")

    p_ax = subs.add_parser("axioms", help="run the randomized law checks")
    _add_system_args(p_ax)
    p_ax.add_argument("--seed", type=int, default=None)
    p_ax.add_argument("--trials", type=int, default=1000)
    p_ax.add_argument("--max-n", type=int, default=8)
    p_ax.add_argument("--rel-tol", type=float, default=1e-9)
    p_ax.add_argument("--slack", type=float, default=1e-12)
    p_ax.add_argument("--positive-weights", action="store_true",
                      help="only quantify over strictly positive weightings")
    _add_output_args(p_ax, "json")

    p_rec = subs.add_parser("recover", help="identify a black-box exponent")
    _add_system_args(p_rec)
    p_rec.add_argument("--samples", type=int, default=30)
    _add_output_args(p_rec, "json")

    p_ch = subs.add_parser("characterize", help="recover and stress-test an exponent")
    _add_system_args(p_ch)
    p_ch.add_argument("--seed", type=int, default=None)
    p_ch.add_argument("--trials", type=int, default=120)
    p_ch.add_argument("--max-n", type=int, default=8)
    p_ch.add_argument("--rel-tol", type=float, default=1e-9)
    p_ch.add_argument("--slack", type=float, default=1e-12)
    p_ch.add_argument("--samples", type=int, default=30)
    p_ch.add_argument("--delta", metavar="LIST", default="1e-2,1e-3",
                      help="comma-separated sandwich spacings")
    p_ch.add_argument("--max-denominator", type=int, default=100,
                      help="largest denominator for random rational weightings")
    _add_output_args(p_ch, "json")

    p_sw = subs.add_parser("sandwich", help="bracket a value between rational weightings")
    _add_system_args(p_sw)
    _add_vector_args(p_sw)
    p_sw.add_argument("--delta", type=float, required=True)
    p_sw.add_argument("--max-denominator", type=int, default=10 ** 6)
    _add_output_args(p_sw, "json")

    return parser


def _build_system(args: argparse.Namespace, positive: bool = False) -> MeanSystem:
    if args.builtin is not None:
        text = args.builtin
        if text.startswith("p="):
            text = text[2:]
        try:
            p = Exponent.parse(text)
        except ValueError as exc:
            raise _UsageError(f"bad --builtin value: {exc}") from exc
        return builtin_power_mean_system(p, positivity_only=positive)
    try:
        return dsl_mean_system(args.dsl, positivity_only=positive)
    except ExprSyntaxError as exc:
        raise _UsageError(f"bad --dsl expression: {exc}") from exc


def _parse_float_list(text: str, flag: str) -> np.ndarray:
    try:
        return np.array([float(part) for part in text.split(",") if part.strip() != ""])
    except ValueError as exc:
        raise _UsageError(f"bad {flag} list {text!r}: {exc}") from exc


def _load_vectors(args: argparse.Namespace) -> tuple[Weighting, ValueVector]:
    if args.input is not None:
        try:
            with open(args.input, "r", encoding="utf-8") as fh:
                data = json.load(fh)
            w_raw = np.array(data["w"], dtype=np.float64)
            x_raw = np.array(data["x"], dtype=np.float64)
        except (OSError, ValueError, KeyError, TypeError) as exc:
            raise _UsageError(f"cannot read --input {args.input!r}: {exc}") from exc
    else:
        if args.w is None or args.x is None:
            raise _UsageError("provide --w and --x, or --input FILE")
        w_raw = _parse_float_list(args.w, "--w")
        x_raw = _parse_float_list(args.x, "--x")
    try:
        return Weighting(w_raw), ValueVector(x_raw)
    except ValueError as exc:
        raise _UsageError(str(exc)) from exc


def _seed_from(args: argparse.Namespace) -> int:
    if args.seed is not None:
        return args.seed
    raw = os.environ.get("MEANLAB_SEED")
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError as exc:
        raise _UsageError(f"MEANLAB_SEED must be an integer, got {raw!r}") from exc


# ── Output ────────────────────────────────────────────────────────────────────


def _csv_cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if value is None:
        return ""
    if isinstance(value, (dict, list, tuple)):
        return deterministic_json(value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _csv_rows(payload: dict) -> list[tuple[str, str, str]]:
    """Flatten one level: list-of-dict fields become their own records."""
    rows: list[tuple[str, str, str]] = []
    nested: list[tuple[str, dict]] = []
    for key in sorted(payload):
        value = payload[key]
        if isinstance(value, list) and value and all(isinstance(v, dict) for v in value):
            for item in value:
                label = item.get("property_name") or item.get("name")
                record = f"{key}:{label}" if label else key
                nested.append((record, item))
        else:
            rows.append(("report", key, _csv_cell(value)))
    for record, item in nested:
        for key in sorted(item):
            rows.append((record, key, _csv_cell(item[key])))
    return rows


def _emit(args: argparse.Namespace, payload: dict) -> None:
    if args.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(("record", "field", "value"))
        writer.writerows(_csv_rows(payload))
        text = buf.getvalue()
    else:
        text = deterministic_json(payload) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _fail(message: str) -> None:
    sys.stderr.write(f"meanlab: {message}\n")


# ── Subcommand handlers ───────────────────────────────────────────────────────


def _cmd_eval(args: argparse.Namespace) -> int:
    system = _build_system(args)
    w, x = _load_vectors(args)
    try:
        value = system(w, x)
    except ArithmeticError as exc:
        _fail(f"evaluation failed: {exc}")
        return 1
    except ValueError as exc:
        raise _UsageError(str(exc)) from exc
    if args.format is None:
        text = repr(value) + "\n"
        if args.output:
            with open(args.output, "w", encoding="utf-8") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
        return 0
    _emit(args, {"system": system.label, "value": value,
                 "w": w.entries.tolist(), "x": x.entries.tolist()})
    return 0


def _cmd_axioms(args: argparse.Namespace) -> int:
    system = _build_system(args, positive=args.positive_weights)
    try:
        cfg = CheckConfig(seed=_seed_from(args), trials=args.trials, max_n=args.max_n,
                          rel_tol=args.rel_tol, slack=args.slack,
                          positive_weights_only=args.positive_weights)
    except ValueError as exc:
        raise _UsageError(str(exc)) from exc
    reports = run_full_suite(system, cfg)
    _emit(args, suite_to_dict(system, cfg, reports))
    return 0 if suite_passed(reports) else 1


def _cmd_recover(args: argparse.Namespace) -> int:
    system = _build_system(args)
    try:
        result = recover_exponent(system, args.samples)
    except (ValueError, ArithmeticError) as exc:
        _fail(f"recovery failed: {exc}")
        return 1
    payload = {"system": system.label, **recovery_to_dict(result)}
    _emit(args, payload)
    return 0 if result.exponent is not None else 1


def _cmd_characterize(args: argparse.Namespace) -> int:
    system = _build_system(args)
    deltas = tuple(float(v) for v in _parse_float_list(args.delta, "--delta"))
    try:
        cfg = CharacterizationConfig(seed=_seed_from(args), trials=args.trials,
                                     max_n=args.max_n, rel_tol=args.rel_tol,
                                     slack=args.slack, deltas=deltas,
                                     weight_denominator_max=args.max_denominator,
                                     sample_count=args.samples)
    except ValueError as exc:
        raise _UsageError(str(exc)) from exc
    report = verify_characterization(system, cfg)
    payload = {"system": system.label, **characterization_to_dict(report)}
    _emit(args, payload)
    return 0 if report.passed else 1


def _cmd_sandwich(args: argparse.Namespace) -> int:
    system = _build_system(args)
    w, x = _load_vectors(args)
    try:
        result = rational_sandwich(system, w, x, args.delta,
                                   max_denominator=args.max_denominator)
    except ValueError as exc:
        raise _UsageError(str(exc)) from exc
    except ArithmeticError as exc:
        _fail(f"evaluation failed: {exc}")
        return 1
    payload = {"system": system.label, **sandwich_to_dict(result)}
    _emit(args, payload)
    return 0 if result.ordered else 1


_HANDLERS = {
    "eval": _cmd_eval,
    "axioms": _cmd_axioms,
    "recover": _cmd_recover,
    "characterize": _cmd_characterize,
    "sandwich": _cmd_sandwich,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse has already printed its message
        return int(exc.code or 0)
    try:
        return _HANDLERS[args.command](args)
    except _UsageError as exc:
        _fail(str(exc))
        return 2


def _entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    _entry()
