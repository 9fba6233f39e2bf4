"""Command-line entry point: ``ric mine | params | verify | jaccard``.

Every flag can also be set through an environment variable ``RIC_<FLAG>``
(upper case, dashes as underscores, e.g. ``RIC_CHAINS=5000``); an explicit
flag wins. Exit status is 0 on success, 2 on usage errors and 1 on data
errors.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import os
import platform
import secrets
import sys
from pathlib import Path
from typing import Sequence

import numpy as np

from . import __version__
from .dataset import DatasetError, EncodedDataset, ingest_csv
from .datasets import TTT_LABEL, tictactoe_csv_path
from .estimator import UndefinedConfidence
from .miner import MinerConfig, PlannerInputs, ScoredRule, mine, plan_parameters
from .oracle import evaluate, jaccard
from .pattern import pattern_from_json, pattern_to_json

log = logging.getLogger("ric")

# bundled inputs addressable as "@name"
BUNDLED = {"tic-tac-toe": (tictactoe_csv_path, TTT_LABEL)}


class DataError(Exception):
    """Input could not be read or does not fit the command."""


def _env(flag: str, default=None):
    return os.environ.get("RIC_" + flag.upper().replace("-", "_"), default)


def _add(p: argparse.ArgumentParser, flag: str, default=None, **kw):
    """Add ``--flag`` with its default taken from ``RIC_<FLAG>`` when set."""
    if kw.get("action") == "append":
        env = _env(flag)
        conv = kw.get("type", str)
        default = [conv(x) for x in env.split(",")] if env else None
    else:
        default = _env(flag, default)
    p.add_argument("--" + flag, default=default, **kw)


def _bin_spec(text: str) -> tuple[str, int]:
    name, sep, n = text.rpartition(":")
    if not sep or not name:
        raise argparse.ArgumentTypeError(f"expected COLUMN:BINS, got {text!r}")
    try:
        k = int(n)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bin count must be an integer in {text!r}") from None
    if k < 2:
        raise argparse.ArgumentTypeError(f"bin count must be >= 2 in {text!r}")
    return name, k


def _unit(text: str) -> float:
    v = float(text)
    if not 0 < v < 1:
        raise argparse.ArgumentTypeError(f"{text} is not in (0, 1)")
    return v


def _data_flags(p: argparse.ArgumentParser) -> None:
    _add(p, "input", help="CSV path, or @tic-tac-toe for the bundled dataset")
    _add(p, "label-col", help="label column name (defaults to the bundled one for @ inputs)")
    _add(p, "uncommon-threshold", 0, type=int,
         help="merge categories seen fewer than this many times into 'others'")
    _add(p, "bin-numeric", action="append", type=_bin_spec, metavar="COL:BINS",
         help="equal-frequency binning of a numeric column (repeatable)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ric", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    ap.add_argument("-v", "--verbose", action="count", default=0)
    sub = ap.add_subparsers(dest="command", required=True)

    m = sub.add_parser("mine", help="mine confident rules for every class")
    _data_flags(m)
    _add(m, "mode", "queue", choices=("naive", "queue"))
    _add(m, "chains", 1000, type=int, help="chains per class (M)")
    _add(m, "max-len", 100_000, type=int, help="maximum chain length (D)")
    _add(m, "max-order", 4, type=int,
         help="stop a chain once its tail holds at most this many items")
    _add(m, "dfreq", type=int, help="frequent-pattern queue size (queue mode, default 400)")
    _add(m, "dconf", type=int, help="rules kept per class (queue mode, default 10)")
    _add(m, "xi", type=float, help="confidence threshold (naive mode, default 0.5)")
    _add(m, "seed", type=int, help="master seed; drawn and recorded when absent")
    _add(m, "threads", 1, type=int, help="worker threads for per-class chain generation")
    _add(m, "output", help="rules file (JSON lines); stdout when absent")
    _add(m, "manifest", help="run manifest path (default: OUTPUT.manifest.json)")
    m.set_defaults(func=cmd_mine)

    p = sub.add_parser("params", help="plan chain count and length for a frequency gap")
    _add(p, "p1", type=_unit, required=_env("p1") is None, help="smallest frequency to keep")
    _add(p, "p2", type=_unit, required=_env("p2") is None, help="largest frequency to reject")
    _add(p, "eta1", type=_unit, required=_env("eta1") is None, help="miss risk")
    _add(p, "eta2", type=_unit, required=_env("eta2") is None, help="false-inclusion risk")
    p.add_argument("--json", action="store_true", help="print a JSON object")
    p.set_defaults(func=cmd_params)

    v = sub.add_parser("verify", help="compare a rules file with exact scans of a dataset")
    _data_flags(v)
    _add(v, "rules", required=_env("rules") is None, help="rules file from `ric mine`")
    _add(v, "reference", help="second rules file; adds the Jaccard index to the report")
    _add(v, "output", help="report path; stdout when absent")
    v.set_defaults(func=cmd_verify)

    j = sub.add_parser("jaccard", help="Jaccard index of two rules files")
    _add(j, "rules-a", required=_env("rules_a") is None)
    _add(j, "rules-b", required=_env("rules_b") is None)
    j.set_defaults(func=cmd_jaccard)
    return ap


def _resolve_input(args, parser) -> tuple[Path, str]:
    if not args.input:
        parser.error("--input is required")
    if args.input.startswith("@"):
        name = args.input[1:]
        if name not in BUNDLED:
            parser.error(f"unknown bundled dataset {args.input!r}; choose from "
                         + ", ".join("@" + k for k in BUNDLED))
        path_fn, label = BUNDLED[name]
        return path_fn(), args.label_col or label
    if not args.label_col:
        parser.error("--label-col is required for CSV inputs")
    return Path(args.input), args.label_col


def _load(args, parser) -> tuple[EncodedDataset, Path, str]:
    path, label = _resolve_input(args, parser)
    if not path.is_file():
        raise DataError(f"input file not found: {path}")
    bins = dict(args.bin_numeric or [])
    try:
        ds = ingest_csv(path, label, args.uncommon_threshold, bins)
    except (DatasetError, UnicodeDecodeError) as exc:
        raise DataError(str(exc)) from None
    return ds, path, label


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def rule_to_json(r: ScoredRule, ds: EncodedDataset) -> dict:
    return {
        "class": r.target_class,
        "items": pattern_to_json(r.pattern, ds.feature_names, ds.category_names),
        "freq": {c: r.freq_per_class[c] for c in ds.classes},
        "confidence": r.confidence,
        "support_estimate": r.support_estimate,
    }


def read_rules_file(path: str | Path) -> list[dict]:
    out = []
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read rules file: {exc}") from None
    for n, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
            obj["class"], obj["items"]
        except (json.JSONDecodeError, KeyError, TypeError) as exc:
            raise DataError(f"{path}: line {n} is not a rule record ({exc})") from None
        out.append(obj)
    return out


def _rule_key(obj: dict) -> tuple:
    items = tuple(sorted((str(i["feature"]), str(i["value"])) for i in obj["items"]))
    return obj["class"], items


def cmd_mine(args, parser) -> int:
    if args.mode == "queue" and args.xi is not None:
        parser.error("--xi only applies to --mode naive")
    if args.mode == "naive" and (args.dfreq is not None or args.dconf is not None):
        parser.error("--dfreq/--dconf only apply to --mode queue")
    seed = args.seed if args.seed is not None else secrets.randbits(63)
    try:
        cfg = MinerConfig(
            M=args.chains, D_max=args.max_len, K_stop=args.max_order,
            d_freq=400 if args.dfreq is None else args.dfreq,
            d_conf=10 if args.dconf is None else args.dconf,
            xi=0.5 if args.xi is None else args.xi,
            mode=args.mode, master_seed=seed, threads=args.threads,
        )
    except ValueError as exc:
        parser.error(str(exc))
    ds, path, label = _load(args, parser)
    try:
        result = mine(ds, cfg)
    except ValueError as exc:
        raise DataError(str(exc)) from None

    lines = [json.dumps(rule_to_json(r, ds)) for c in ds.classes for r in result.rules[c]]
    body = "".join(line + "\n" for line in lines)
    if args.output:
        Path(args.output).write_text(body, encoding="utf-8")
    else:
        sys.stdout.write(body)

    manifest_path = args.manifest or (args.output + ".manifest.json" if args.output else None)
    if manifest_path:
        manifest = {
            "command": "mine",
            "input": {"path": args.input, "sha256": _sha256(path), "label_col": label,
                      "uncommon_threshold": args.uncommon_threshold,
                      "bin_numeric": dict(args.bin_numeric or [])},
            "params": {"mode": cfg.mode, "chains": cfg.M, "max_len": cfg.D_max,
                       "max_order": cfg.K_stop, "dfreq": cfg.d_freq, "dconf": cfg.d_conf,
                       "xi": cfg.xi, "threads": cfg.threads},
            "seed": seed,
            "n_rules": len(lines),
            "frequency_evaluations": result.evaluations,
            "versions": {"ric": __version__, "numpy": np.__version__,
                         "python": platform.python_version()},
        }
        Path(manifest_path).write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")
    return 0


def cmd_params(args, parser) -> int:
    try:
        inputs = PlannerInputs(args.p1, args.p2, args.eta1, args.eta2)
    except ValueError as exc:
        parser.error(str(exc))
    D, M = plan_parameters(inputs)
    if args.json:
        print(json.dumps({"D_star": D, "M_star": M, "a": inputs.a, "b": inputs.b}))
    else:
        print(f"D* = {D}")
        print(f"M* = {M}")
    return 0


def _rules_from_file(objs: Sequence[dict], ds: EncodedDataset) -> list[ScoredRule]:
    rules = []
    for n, obj in enumerate(objs, 1):
        try:
            pat = pattern_from_json(obj["items"], ds.feature_names, ds.category_names)
        except (ValueError, KeyError, TypeError) as exc:
            raise DataError(f"rule {n}: {exc}") from None
        if obj["class"] not in ds.classes:
            raise DataError(f"rule {n}: class {obj['class']!r} not in dataset")
        freq = {c: float(obj.get("freq", {}).get(c, float("nan"))) for c in ds.classes}
        rules.append(ScoredRule(pat, obj["class"], freq, float(obj.get("confidence", float("nan"))),
                                float(obj.get("support_estimate", float("nan")))))
    return rules


def cmd_verify(args, parser) -> int:
    objs = read_rules_file(args.rules)
    ds, _, _ = _load(args, parser)
    rules = _rules_from_file(objs, ds)
    reference = None
    if args.reference:
        reference = _rules_from_file(read_rules_file(args.reference), ds)
    try:
        report = evaluate(rules, ds, reference)
    except UndefinedConfidence as exc:
        raise DataError(str(exc)) from None
    for row, r in zip(report["rules"], rules):
        row["pattern"] = pattern_to_json(r.pattern, ds.feature_names, ds.category_names)
    text = json.dumps(report, indent=2) + "\n"
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def cmd_jaccard(args, parser) -> int:
    a = {_rule_key(o) for o in read_rules_file(args.rules_a)}
    b = {_rule_key(o) for o in read_rules_file(args.rules_b)}
    print(jaccard(a, b))
    return 0


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    level = logging.WARNING - 10 * min(args.verbose, 2)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args, parser)
    except DataError as exc:
        print(f"ric: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
