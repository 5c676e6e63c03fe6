"""Command-line front end.

Every command prints a deterministic line-oriented key/value report (or a
single JSON document with ``--json``).  Exit codes are part of the API:
0 when the checked property holds or the search was inconclusive, 1 when a
witness (or counterexample) was found, 2 on usage or domain errors.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction
from typing import Any

from . import characterization as char
from . import checker, paths, prefs, rules

_RULE_SYNTAX = (
    "borda | scoring:1,2,31/10 | plurality | kapproval:2 | copeland | topcycle "
    "| pareto | maximin | dictator:1 | uniontops | constant:a,b | topsunan:x"
)


def _render(data: dict[str, Any], indent: int = 0) -> list[str]:
    pad = " " * indent
    lines: list[str] = []
    for key, value in data.items():
        if isinstance(value, dict):
            lines.append(f"{pad}{key}:")
            lines.extend(_render(value, indent + 2))
        elif isinstance(value, list):
            if all(not isinstance(item, (dict, list)) for item in value):
                lines.append(f"{pad}{key}: {' '.join(str(item) for item in value)}")
            else:
                for position, item in enumerate(value):
                    lines.append(f"{pad}{key}[{position}]:")
                    lines.extend(_render(item, indent + 2))
        elif isinstance(value, str) and "\n" in value:
            lines.append(f"{pad}{key}:")
            lines.extend(f"{pad}  {line}" for line in value.rstrip("\n").splitlines())
        else:
            lines.append(f"{pad}{key}: {value}")
    return lines


def _emit(data: dict[str, Any], as_json: bool) -> None:
    if as_json:
        print(json.dumps(data, indent=2))
    else:
        print("\n".join(_render(data)))


def _pair_data(profile: prefs.Profile, pair: prefs.TranspositionPair) -> dict[str, Any]:
    return {
        "x": profile.label_of(pair.x),
        "y": profile.label_of(pair.y),
        "i": pair.i,
        "j": pair.j,
    }


def _witness_data(witness) -> dict[str, Any]:
    if isinstance(witness, checker.PairWitness):
        return {
            "profile": prefs.format_profile(witness.profile),
            "pair": _pair_data(witness.profile, witness.pair),
            "before": list(witness.profile.label_set(witness.before)),
            "after": list(witness.profile.label_set(witness.after)),
        }
    return {
        "profile": prefs.format_profile(witness.profile),
        "other": prefs.format_profile(witness.other),
        "before": list(witness.profile.label_set(witness.before)),
        "after": list(witness.other.label_set(witness.after)),
    }


def _path_data(path: paths.ProfilePath) -> dict[str, Any]:
    steps = []
    for step in path.steps:
        move = step.move
        if isinstance(move, paths.PairMove):
            entry: dict[str, Any] = {
                "move": "pair",
                **_pair_data(step.profile, move.pair),
            }
        else:
            kind = "tops-reorder" if isinstance(move, paths.TopPreservingReorder) else "top2-reorder"
            entry = {
                "move": kind,
                "individual": move.individual,
                "ordering": [step.profile.label_of(alt) for alt in move.ordering],
            }
        entry["profile"] = prefs.format_profile(step.profile)
        steps.append(entry)
    return {
        "regime": path.regime.value,
        "start": prefs.format_profile(path.start),
        "length": len(path),
        "steps": steps,
    }


def _read_profile(path: str) -> prefs.Profile:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        raise ValueError(f"cannot read {path}: {exc}") from None
    return prefs.parse_profile(text)


class _Timer:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed_ms = int(round((time.perf_counter() - self.start) * 1000))
        return False


def _cmd_eval(args: argparse.Namespace) -> int:
    rule = rules.parse_rule(args.rule)
    profile = _read_profile(args.profile)
    rules.validate_rule_for(rule, profile.m, profile.n, profile.labels)
    with _Timer() as timer:
        choice = rules.evaluate(rule, profile)
    labels = profile.label_set(choice)
    if args.json:
        _emit(
            {
                "command": "eval",
                "rule": rule.spec(),
                "profile": prefs.format_profile(profile),
                "choice": list(labels),
                "elapsed_ms": timer.elapsed_ms,
            },
            True,
        )
    else:
        print(" ".join(labels))
    return 0


def _sample_args(args: argparse.Namespace) -> dict[str, int | None]:
    if args.sample:
        if args.seed is None or args.trials is None:
            raise ValueError("sampled mode needs both --seed and --trials")
        return {"seed": args.seed, "trials": args.trials}
    if args.seed is not None or args.trials is not None:
        raise ValueError("--seed/--trials only apply with --sample")
    return {}


def _cmd_check(args: argparse.Namespace) -> int:
    rule = rules.parse_rule(args.rule)
    data: dict[str, Any] = {
        "command": f"check {args.kind}",
        "rule": rule.spec(),
        "m": args.m,
        "n": args.n,
    }
    if args.kind == "effective":
        with _Timer() as timer:
            report = checker.check_effectiveness(rule, args.m, args.n, cap=args.cap)
        ineffective = report.ineffective()
        data["status"] = "all-effective" if not ineffective else "ineffective-found"
        data["individuals"] = [
            {
                "individual": entry.individual,
                "effective": entry.effective,
                "examined": entry.examined,
                "statement": entry.statement(),
            }
            for entry in report.individuals
        ]
        data["elapsed_ms"] = timer.elapsed_ms
        _emit(data, args.json)
        return 1 if ineffective else 0
    sample = _sample_args(args)
    mode = "sampled" if sample else "exhaustive"
    data["mode"] = mode
    if sample:
        data["seed"] = sample["seed"]
        data["trials"] = sample["trials"]
    with _Timer() as timer:
        if args.kind == "balance":
            data["workers"] = args.workers
            verdict = checker.check_balanced(
                rule, args.m, args.n, cap=args.cap, workers=args.workers, **sample
            )
        elif args.kind == "topsonly":
            verdict = checker.check_tops_only(rule, args.m, args.n, cap=args.cap, **sample)
        else:
            if args.k is None:
                raise ValueError("check topk needs --k")
            data["k"] = args.k
            verdict = checker.check_top_k_only(
                rule, args.m, args.n, args.k, cap=args.cap, **sample
            )
    data["status"] = verdict.status.value
    data["searched"] = verdict.searched
    if verdict.witness is not None:
        data["witness"] = _witness_data(verdict.witness)
    data["elapsed_ms"] = timer.elapsed_ms
    _emit(data, args.json)
    return 1 if verdict.failed else 0


def _cmd_path(args: argparse.Namespace) -> int:
    profile = _read_profile(args.from_file)
    with _Timer() as timer:
        if args.regime == "tops":
            a = profile.id_of(args.a) if args.a else 0
            b = profile.id_of(args.b) if args.b else 1
            path = paths.build_tops_path(profile, a, b)
        else:
            path = paths.build_top2_path(profile)
        check = paths.validate_path(path)
    if not check:
        raise RuntimeError(f"built path failed validation at step {check.step}: {check.reason}")
    data = {
        "command": f"path {args.regime}",
        "validated": True,
        **_path_data(path),
        "elapsed_ms": timer.elapsed_ms,
    }
    _emit(data, args.json)
    return 0


def _cmd_witness(args: argparse.Namespace) -> int:
    with _Timer() as timer:
        if args.kind == "tiedweights":
            weights = rules.Weights.parse(args.weights)
            witness = char.tied_weights_witness(weights, args.m, args.n)
            header: dict[str, Any] = {
                "command": "witness tiedweights",
                "weights": str(weights),
            }
        elif args.kind == "insertion":
            if args.top_weight is None:
                raise ValueError("witness insertion needs --top-weight")
            found = char.insertion_witness(args.m, args.n, Fraction(args.top_weight))
            witness = found.witness
            header = {
                "command": "witness insertion",
                "weights": str(found.weights),
            }
        else:
            rule = rules.parse_rule(args.rule)
            if args.individual is None:
                raise ValueError("witness ineffective needs --individual")
            witness = checker.ineffectiveness_witness(rule, args.m, args.n, args.individual)
            header = {
                "command": "witness ineffective",
                "rule": rule.spec(),
                "individual": args.individual,
            }
    data = {
        **header,
        "m": args.m,
        "n": args.n,
        "witness": _witness_data(witness),
        "elapsed_ms": timer.elapsed_ms,
    }
    _emit(data, args.json)
    return 1


def _cmd_characterize(args: argparse.Namespace) -> int:
    with _Timer() as timer:
        result = char.characterize(args.m, args.n)
    data: dict[str, Any] = {
        "command": "characterize",
        "m": args.m,
        "n": args.n,
        "verdict": "borda-forced" if result.forced else "not-forced",
        "weights": str(result.weights),
    }
    if result.constraints:
        data["constraints"] = [str(constraint) for constraint in result.constraints]
    if result.verification is not None:
        data["verification"] = {
            "status": result.verification.status.value,
            "searched": result.verification.searched,
        }
    data["elapsed_ms"] = timer.elapsed_ms
    _emit(data, args.json)
    return 0 if result.forced else 1


def _cmd_rules(args: argparse.Namespace) -> int:
    del args
    print("rule spec syntax:")
    for token in _RULE_SYNTAX.split(" | "):
        print(f"  {token}")
    print("weights accept integers, fractions like 31/10, and exact decimals like 3.1")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="balcheck",
        description="Balance checking for social choice correspondences.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    cmd = commands.add_parser("eval", help="evaluate a rule on a profile file")
    cmd.add_argument("--rule", required=True, help=_RULE_SYNTAX)
    cmd.add_argument("--profile", required=True, help="profile file (text format)")
    cmd.add_argument("--json", action="store_true")
    cmd.set_defaults(handler=_cmd_eval)

    cmd = commands.add_parser("check", help="search a property over the profile space")
    cmd.add_argument("kind", choices=("balance", "topsonly", "topk", "effective"))
    cmd.add_argument("--rule", required=True, help=_RULE_SYNTAX)
    cmd.add_argument("-m", type=int, required=True, help="alternative count")
    cmd.add_argument("-n", type=int, required=True, help="individual count")
    cmd.add_argument("--k", type=int, help="rank depth for topk")
    mode = cmd.add_mutually_exclusive_group()
    mode.add_argument("--exhaustive", action="store_true", default=False)
    mode.add_argument("--sample", action="store_true", default=False)
    cmd.add_argument("--seed", type=int)
    cmd.add_argument("--trials", type=int)
    cmd.add_argument("--workers", type=int, default=1)
    cmd.add_argument("--cap", type=int, default=prefs.DEFAULT_PROFILE_CAP)
    cmd.add_argument("--json", action="store_true")
    cmd.set_defaults(handler=_cmd_check)

    cmd = commands.add_parser("path", help="build a validated move sequence to the canonical target")
    cmd.add_argument("regime", choices=("tops", "top2"))
    cmd.add_argument("--from", dest="from_file", required=True, help="start profile file")
    cmd.add_argument("--a", help="label of the first anchor (tops regime)")
    cmd.add_argument("--b", help="label of the second anchor (tops regime)")
    cmd.add_argument("--json", action="store_true")
    cmd.set_defaults(handler=_cmd_path)

    cmd = commands.add_parser("witness", help="construct a verified balance violation")
    cmd.add_argument("kind", choices=("tiedweights", "insertion", "ineffective"))
    cmd.add_argument("--weights", help="weight list for tiedweights")
    cmd.add_argument("--top-weight", help="deviating last weight for insertion")
    cmd.add_argument("--rule", help="rule spec for ineffective")
    cmd.add_argument("--individual", type=int, help="ineffective individual for ineffective")
    cmd.add_argument("-m", type=int, required=True)
    cmd.add_argument("-n", type=int, required=True)
    cmd.add_argument("--json", action="store_true")
    cmd.set_defaults(handler=_cmd_witness)

    cmd = commands.add_parser("characterize", help="do the balance constraints force Borda weights?")
    cmd.add_argument("-m", type=int, required=True)
    cmd.add_argument("-n", type=int, required=True)
    cmd.add_argument("--json", action="store_true")
    cmd.set_defaults(handler=_cmd_characterize)

    cmd = commands.add_parser("rules", help="list rule spec syntax")
    cmd.add_argument("action", nargs="?", choices=("list",), default="list")
    cmd.set_defaults(handler=_cmd_rules)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "kind", None) == "tiedweights" and not args.weights:
        parser.error("witness tiedweights needs --weights")
    if getattr(args, "kind", None) == "ineffective" and not args.rule:
        parser.error("witness ineffective needs --rule")
    if args.command == "check" and args.kind != "effective" and not (args.exhaustive or args.sample):
        parser.error("choose --exhaustive or --sample")
    try:
        return args.handler(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
