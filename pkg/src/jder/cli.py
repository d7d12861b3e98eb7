"""Batch front end: INI instance files in, deterministic JSON reports out.

An instance file declares a coefficient ring, optionally a preorder (in
which case commands operate on the incidence ring FI(P, R)), and task
defaults.  Reports embed the canonical subgroup bases so that downstream
tools can re-verify membership claims without re-solving; all output is
byte-identical for identical (input, seed) pairs.  Timing goes to stderr
so it never perturbs the report.
"""

import argparse
import itertools
import json
import sys
import time
from configparser import ConfigParser
from dataclasses import dataclass

import numpy as np

from .analysis import (
    SizeBudgetError,
    construct_dprime,
    cross_check,
    identity_suite,
    theorem_verdict,
)
from .incidence import IncidenceRing, fi_ring, verify_family_conditions
from .preorders import ClosureError, Preorder
from .rings import (
    Bimodule,
    RingConstructionError,
    StructureRing,
    build_ring,
    matrix_ring,
    triangular_ring,
    zmod,
)
from .solver import (
    DERIVATION,
    JORDAN,
    compare_spaces,
    solve_derivations,
    solve_jordan_derivations,
)

__all__ = ["InstanceError", "Instance", "load_instance", "run", "main"]

FORMAT_VERSION = 1
COMMANDS = (
    "solve-der",
    "solve-jder",
    "compare",
    "fi-build",
    "verdict",
    "cross-check",
    "identities",
    "dprime-check",
    "search",
)

_TASK_KEYS = {"command", "seed", "trials", "budget", "moduli", "mode"}
_PREORDER_KEYS = {"labels", "pairs", "auto_close"}
_RING_KEYS = {
    "zmod": {"kind", "modulus"},
    "matrix": {"kind", "size"},
    "triangular": {"kind"},
    "constants": {"kind", "modulus", "rank", "constants", "unit", "labels"},
}
_MODULE_KEYS = {"rank", "left_action", "right_action"}


class InstanceError(ValueError):
    """Any instance-file or task validation problem, with field provenance."""


@dataclass(frozen=True)
class Instance:
    preorder: Preorder | None
    ring: StructureRing
    task: dict


def _fail(section: str, message: str) -> None:
    raise InstanceError(f"[{section}]: {message}")


def _parse_int(section: str, key: str, raw: str) -> int:
    try:
        return int(raw.strip())
    except ValueError:
        _fail(section, f"key {key!r} must be an integer, got {raw!r}")


def _parse_vector(section: str, key: str, raw: str, length: int) -> tuple:
    parts = raw.split()
    if len(parts) != length:
        _fail(section, f"key {key!r} needs {length} entries, got {len(parts)}")
    return tuple(_parse_int(section, key, p) for p in parts)


def _parse_table_lines(section: str, key: str, raw: str, shape: tuple) -> np.ndarray:
    """Lines of the form "i j : v0 v1 ..." filling a (shape[0], shape[1], width) array."""
    out = np.zeros(shape, dtype=np.int64)
    seen = set()
    for line in raw.splitlines():
        line = line.strip()
        if not line:
            continue
        head, _, tail = line.partition(":")
        if not _:
            _fail(section, f"{key!r} line {line!r} is missing ':'")
        idx = head.split()
        if len(idx) != 2:
            _fail(section, f"{key!r} line {line!r} needs two indices before ':'")
        i = _parse_int(section, key, idx[0])
        j = _parse_int(section, key, idx[1])
        if not (0 <= i < shape[0] and 0 <= j < shape[1]):
            _fail(section, f"{key!r} indices ({i}, {j}) out of range")
        if (i, j) in seen:
            _fail(section, f"{key!r} repeats the pair ({i}, {j})")
        seen.add((i, j))
        out[i, j] = _parse_vector(section, key, tail, shape[2])
    return out


def _check_keys(parser: ConfigParser, section: str, allowed: set) -> None:
    for key in parser[section]:
        if key not in allowed:
            _fail(section, f"unknown key {key!r}")


def _parse_preorder(parser: ConfigParser) -> Preorder:
    section = "preorder"
    _check_keys(parser, section, _PREORDER_KEYS)
    if "labels" not in parser[section]:
        _fail(section, "key 'labels' is required")
    labels = parser[section]["labels"].split()
    pairs = []
    for token in parser[section].get("pairs", "").split():
        left, sep, right = token.partition("<=")
        if not sep or not left or not right:
            _fail(section, f"pair token {token!r} must look like 'a<=b'")
        pairs.append((left, right))
    try:
        auto_close = parser[section].getboolean("auto_close", fallback=True)
    except ValueError:
        _fail(section, "key 'auto_close' must be a boolean")
    try:
        return Preorder.from_pairs(labels, pairs, auto_close=auto_close)
    except (ClosureError, ValueError) as exc:
        _fail(section, str(exc))


def _parse_ring(parser: ConfigParser, section: str, visited: set) -> StructureRing:
    if section not in parser:
        _fail(section, "section is required but missing")
    visited.add(section)
    kind = parser[section].get("kind")
    if kind not in _RING_KEYS:
        _fail(section, f"key 'kind' must be one of {sorted(_RING_KEYS)}, got {kind!r}")
    _check_keys(parser, section, _RING_KEYS[kind])
    try:
        if kind == "zmod":
            if "modulus" not in parser[section]:
                _fail(section, "key 'modulus' is required")
            return zmod(_parse_int(section, "modulus", parser[section]["modulus"]))
        if kind == "matrix":
            if "size" not in parser[section]:
                _fail(section, "key 'size' is required")
            size = _parse_int(section, "size", parser[section]["size"])
            base = _parse_ring(parser, f"{section}.base", visited)
            return matrix_ring(base, size)
        if kind == "triangular":
            left = _parse_ring(parser, f"{section}.left", visited)
            right = _parse_ring(parser, f"{section}.right", visited)
            return triangular_ring(left, _parse_module(parser, f"{section}.module", left, right, visited), right)
        return _parse_constants_ring(parser, section)
    except RingConstructionError as exc:
        _fail(section, str(exc))


def _parse_module(parser: ConfigParser, section: str, left: StructureRing,
                  right: StructureRing, visited: set) -> Bimodule:
    if section not in parser:
        _fail(section, "section is required but missing")
    visited.add(section)
    _check_keys(parser, section, _MODULE_KEYS)
    for key in ("rank", "left_action", "right_action"):
        if key not in parser[section]:
            _fail(section, f"key {key!r} is required")
    rank = _parse_int(section, "rank", parser[section]["rank"])
    if rank < 0:
        _fail(section, "key 'rank' must be nonnegative")
    left_action = _parse_table_lines(
        section, "left_action", parser[section]["left_action"], (left.rank, rank, rank)
    )
    right_action = _parse_table_lines(
        section, "right_action", parser[section]["right_action"], (rank, right.rank, rank)
    )
    try:
        return Bimodule(left, right, rank, left_action, right_action)
    except (RingConstructionError, ValueError) as exc:
        _fail(section, str(exc))


def _parse_constants_ring(parser: ConfigParser, section: str) -> StructureRing:
    for key in ("modulus", "rank"):
        if key not in parser[section]:
            _fail(section, f"key {key!r} is required")
    modulus = _parse_int(section, "modulus", parser[section]["modulus"])
    rank = _parse_int(section, "rank", parser[section]["rank"])
    if rank < 0:
        _fail(section, "key 'rank' must be nonnegative")
    constants = _parse_table_lines(
        section, "constants", parser[section].get("constants", ""), (rank, rank, rank)
    )
    unit = None
    if "unit" in parser[section]:
        unit = _parse_vector(section, "unit", parser[section]["unit"], rank)
    labels = None
    if "labels" in parser[section]:
        labels = parser[section]["labels"].split()
    return build_ring(modulus, constants, unit=unit, labels=labels)


def load_instance(path: str) -> Instance:
    parser = ConfigParser(interpolation=None)
    try:
        with open(path, "r", encoding="utf-8") as handle:
            parser.read_file(handle)
    except OSError as exc:
        raise InstanceError(f"cannot read instance file: {exc}") from exc
    except Exception as exc:
        raise InstanceError(f"instance file does not parse: {exc}") from exc

    if "instance" not in parser:
        _fail("instance", "section is required")
    _check_keys(parser, "instance", {"format_version"})
    version = parser["instance"].get("format_version")
    if version is None or version.strip() != str(FORMAT_VERSION):
        _fail("instance", f"format_version must be {FORMAT_VERSION}, got {version!r}")

    visited = {"instance"}
    preorder = None
    if "preorder" in parser:
        visited.add("preorder")
        preorder = _parse_preorder(parser)

    if "ring" not in parser:
        _fail("ring", "section is required")
    ring = _parse_ring(parser, "ring", visited)

    task = {}
    if "task" in parser:
        visited.add("task")
        _check_keys(parser, "task", _TASK_KEYS)
        raw = parser["task"]
        if "command" in raw:
            command = raw["command"].strip()
            if command not in COMMANDS:
                _fail("task", f"unknown command {command!r}")
            task["command"] = command
        for key in ("seed", "trials", "budget"):
            if key in raw:
                task[key] = _parse_int("task", key, raw[key])
        if "moduli" in raw:
            task["moduli"] = tuple(
                _parse_int("task", "moduli", tok) for tok in raw["moduli"].split()
            )
        if "mode" in raw:
            mode = raw["mode"].strip()
            if mode not in ("basis", "randomized"):
                _fail("task", f"mode must be 'basis' or 'randomized', got {mode!r}")
            task["mode"] = mode

    unknown = [s for s in parser.sections() if s not in visited]
    if unknown:
        _fail(unknown[0], "unknown section")
    return Instance(preorder, ring, task)


# -- report serialization ------------------------------------------------------

def _basis_json(basis) -> dict:
    return {
        "modulus": basis.modulus,
        "dim": basis.dim,
        "generators": [list(g.entries) for g in basis.generators],
    }


def _map_json(d) -> list:
    return [list(row) for row in d.entries]


def _space_json(space) -> dict:
    return {
        "kind": space.kind,
        "cardinality": space.cardinality(),
        "basis": _basis_json(space.basis),
    }


def _comparison_json(cmp) -> dict:
    return {
        "verdict": cmp.verdict,
        "equal": cmp.equal,
        "derivations": _space_json(cmp.derivations),
        "jordan": _space_json(cmp.jordan),
        "witness": None if cmp.witness is None else _map_json(cmp.witness),
    }


def _verdict_json(verdict) -> dict:
    return {
        "outcome": verdict.outcome,
        "isolated_elements": list(verdict.isolated_elements),
        "facts": [
            {
                "class_index": fact.class_index,
                "members": list(fact.members),
                "kind": fact.kind,
                "partner": fact.partner,
                "faithful": None if fact.faithful is None else list(fact.faithful),
            }
            for fact in verdict.facts
        ],
    }


def _digest(instance: Instance, fi: IncidenceRing | None) -> dict:
    ring = instance.ring
    out = {
        "ring": {
            "modulus": ring.modulus,
            "rank": ring.rank,
            "unital": ring.is_unital,
            "labels": list(ring.labels),
        },
        "preorder": None,
        "fi_rank": None,
    }
    if instance.preorder is not None:
        quotient = instance.preorder.quotient()
        out["preorder"] = {
            "labels": list(instance.preorder.labels),
            "classes": [list(quotient.members(ci)) for ci in range(quotient.size)],
            "isolated_elements": list(instance.preorder.isolated_elements()),
        }
    if fi is not None:
        out["fi_rank"] = fi.rank
    return out


# -- command execution ---------------------------------------------------------

def _require_preorder(instance: Instance, command: str) -> Preorder:
    if instance.preorder is None:
        raise InstanceError(f"command {command!r} needs a [preorder] section")
    return instance.preorder


def _target(instance: Instance):
    """The ring a solver command acts on, plus the FI presentation if any."""
    if instance.preorder is None:
        return instance.ring, None
    fi = fi_ring(instance.preorder, instance.ring)
    return fi.ring, fi


def _jordan_family(target: StructureRing, fi: IncidenceRing | None) -> list:
    if fi is not None:
        return fi.class_idempotents()
    if not target.is_unital:
        raise InstanceError("a plain coefficient ring must be unital for this command")
    return [target.one()]


def _enumerate_search_rings(moduli):
    """All structure-constant rings of rank <= 2 over the given moduli.

    Tables are deduplicated and emitted in lexicographic order; the rank-2
    associativity filter is vectorized over the whole table family.
    """
    seen = set()
    for m in sorted(set(moduli)):
        for v in range(m):
            key = (m, 1, (v,))
            if key not in seen:
                seen.add(key)
                yield build_ring(m, np.array([[[v]]], dtype=np.int64))
        tables = np.array(
            list(itertools.product(range(m), repeat=8)), dtype=np.int64
        ).reshape(-1, 2, 2, 2)
        lhs = np.einsum("nijs,nslt->nijlt", tables, tables) % m
        rhs = np.einsum("njls,nist->nijlt", tables, tables) % m
        mask = np.all(lhs == rhs, axis=(1, 2, 3, 4))
        for table in tables[mask]:
            key = (m, 2, tuple(table.flatten().tolist()))
            if key not in seen:
                seen.add(key)
                yield build_ring(m, table)


def run(command: str, instance: Instance, seed: int = 0, trials: int = 1000,
        budget: int = 32, moduli=(2, 3, 4), mode: str = "basis") -> dict:
    """Execute one subcommand and produce the JSON-ready report body."""
    if command not in COMMANDS:
        raise InstanceError(f"unknown command {command!r}")
    declared = instance.task.get("command")
    if declared is not None and declared != command:
        raise InstanceError(
            f"instance file declares command {declared!r}, not {command!r}"
        )

    fi = None
    result: dict
    if command in ("solve-der", "solve-jder", "compare", "identities", "dprime-check"):
        target, fi = _target(instance)
        if command == "solve-der":
            result = _space_json(solve_derivations(target))
        elif command == "solve-jder":
            result = _space_json(solve_jordan_derivations(target))
        elif command == "compare":
            result = _comparison_json(compare_spaces(target))
        elif command == "dprime-check":
            family = _jordan_family(target, fi)
            entries = []
            for n, d in enumerate(solve_jordan_derivations(target).generators()):
                entries.append(
                    {"generator": n, "reconstructed_equals_original":
                        construct_dprime(target, family, d) == d}
                )
            result = {
                "generators": entries,
                "ok": all(e["reconstructed_equals_original"] for e in entries),
            }
        else:
            family = _jordan_family(target, fi)
            entries = []
            for n, d in enumerate(solve_jordan_derivations(target).generators()):
                report = identity_suite(
                    target, family, d, mode=mode, seed=seed, trials=trials, fi=fi
                )
                entries.append({
                    "generator": n,
                    "ok": report.ok,
                    "identities": [
                        {
                            "name": o.name,
                            "applicable": o.applicable,
                            "passed": o.passed,
                            "checks": o.checks,
                        }
                        for o in report.outcomes
                    ],
                })
            result = {"generators": entries, "ok": all(e["ok"] for e in entries)}
    elif command == "fi-build":
        _require_preorder(instance, command)
        _, fi = _target(instance)
        family_report = verify_family_conditions(fi.ring, fi.class_idempotents())
        quotient = fi.quotient
        result = {
            "rank": fi.rank,
            "pairs": [
                [fi.preorder.labels[p], fi.preorder.labels[q]] for (p, q) in fi.pairs
            ],
            "classes": [list(quotient.members(ci)) for ci in range(quotient.size)],
            "isolated_classes": list(quotient.isolated_classes()),
            "family_conditions_ok": family_report.ok,
        }
    elif command == "verdict":
        preorder = _require_preorder(instance, command)
        result = _verdict_json(theorem_verdict(preorder, instance.ring))
    elif command == "cross-check":
        preorder = _require_preorder(instance, command)
        report = cross_check(preorder, instance.ring, budget=budget)
        fi = fi_ring(preorder, instance.ring)
        result = {
            "verdict": _verdict_json(report.verdict),
            "fi_comparison": _comparison_json(report.fi_comparison),
            "ring_comparison": _comparison_json(report.ring_comparison),
            "fi_rank": report.fi_rank,
            "consistent": report.consistent,
        }
    else:  # search
        counterexamples = []
        checked = 0
        for ring in _enumerate_search_rings(moduli):
            checked += 1
            comparison = compare_spaces(ring)
            if not comparison.equal:
                counterexamples.append({
                    "modulus": ring.modulus,
                    "rank": ring.rank,
                    "constants": ring.constants.flatten().tolist(),
                    "witness": _map_json(comparison.witness),
                })
        result = {
            "family": {"moduli": sorted(set(moduli)), "max_rank": 2},
            "rings_checked": checked,
            "counterexamples": counterexamples,
            "found": bool(counterexamples),
            "note": None if counterexamples else "none found in family",
        }

    return {
        "format_version": FORMAT_VERSION,
        "command": command,
        "seed": seed,
        "instance": _digest(instance, fi),
        "result": result,
    }


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="jder",
        description="Exact derivation/Jordan-derivation analysis of finite rings "
                    "and incidence rings.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--input", required=True, help="instance file (INI format)")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--trials", type=int, default=None)
        p.add_argument("--budget", type=int, default=None)
        p.add_argument("--out", default=None, help="write the JSON report here")
    args = parser.parse_args(argv)

    started = time.perf_counter()
    try:
        instance = load_instance(args.input)
        task = instance.task
        report = run(
            args.command,
            instance,
            seed=args.seed if args.seed is not None else task.get("seed", 0),
            trials=args.trials if args.trials is not None else task.get("trials", 1000),
            budget=args.budget if args.budget is not None else task.get("budget", 32),
            moduli=task.get("moduli", (2, 3, 4)),
            mode=task.get("mode", "basis"),
        )
    except (InstanceError, SizeBudgetError, RingConstructionError, ClosureError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    text = json.dumps(report, sort_keys=True, indent=2) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)
    print(f"elapsed_seconds={time.perf_counter() - started:.3f}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
