"""Command-line front end.

Subcommands: ``omega`` (level diagram -> forest), ``hom`` (maps between
free forest operads), ``shuffles`` (tensor shuffle enumeration),
``tensor-hom`` (maps into a tensor of trees), ``free-algebra`` (term
listings), and ``check`` (the seeded verification suites).  Exit codes:
0 on success, 1 when a check suite reports failures, 2 on usage or parse
errors.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path
from typing import Any

from .levelforest import FinSimplex, omega_obj
from .lurie import free_algebra, FreeForestOperad
from .omegacat import OperadMap, hom
from .render import gallery_dot, to_dot
from .shuffle import shuffles, tensor_hom
from .suites import SUITE_NAMES, SuiteConfig, report_json, run_check
from .treecore import TreeError, parse_forest, parse_tree, serialize_forest, serialize_tree

__all__ = ["main"]


def _read_json_source(arg: str) -> Any:
    """Accept inline JSON, ``-`` for stdin, or a file path."""
    if arg == "-":
        return json.load(sys.stdin)
    stripped = arg.lstrip()
    if stripped.startswith("{") or stripped.startswith("["):
        return json.loads(arg)
    return json.loads(Path(arg).read_text(encoding="utf-8"))


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _json_line(obj: Any) -> str:
    return json.dumps(obj, ensure_ascii=False, indent=2, sort_keys=True) + "\n"


def _map_json(m: OperadMap) -> dict[str, Any]:
    return {
        "edge_map": dict(m.edge_map),
        "vertex_map": {
            v: {"output": op.output, "inputs": list(op.inputs)}
            for v, op in m.vertex_map
        },
    }


def cmd_omega(args: argparse.Namespace) -> int:
    a = FinSimplex.from_json(_read_json_source(args.input))
    f = omega_obj(a)
    if args.format == "dot":
        _emit(to_dot(f, "omega"), args.out)
    elif args.format == "json":
        _emit(
            _json_line(
                {
                    "forest": serialize_forest(f),
                    "components": len(f.components),
                    "edges": len(f.edges),
                }
            ),
            args.out,
        )
    else:
        _emit(serialize_forest(f) + "\n", args.out)
    return 0


def cmd_hom(args: argparse.Namespace) -> int:
    src = parse_forest(args.source)
    tgt = parse_forest(args.target)
    maps = hom(src, tgt)
    if args.format == "text":
        lines = [f"count: {len(maps)}"]
        lines += [json.dumps(_map_json(m), ensure_ascii=False, sort_keys=True) for m in maps]
        _emit("\n".join(lines) + "\n", args.out)
    else:
        _emit(_json_line({"count": len(maps), "maps": [_map_json(m) for m in maps]}), args.out)
    return 0


def cmd_shuffles(args: argparse.Namespace) -> int:
    factors = [parse_tree(t) for t in args.factors]
    sh = shuffles(factors)
    if args.format == "dot":
        _emit(gallery_dot(sh, "shuffles"), args.out)
    elif args.format == "json":
        _emit(
            _json_line(
                {"count": len(sh), "shuffles": [serialize_tree(t) for t in sh]}
            ),
            args.out,
        )
    else:
        lines = [f"count: {len(sh)}"] + [serialize_tree(t) for t in sh]
        _emit("\n".join(lines) + "\n", args.out)
    return 0


def cmd_tensor_hom(args: argparse.Namespace) -> int:
    probe = parse_tree(args.probe)
    factors = [parse_tree(t) for t in args.factors]
    maps = tensor_hom(probe, factors)
    payload = {
        "count": len(maps),
        "maps": [
            {
                "edge_map": dict(m.edge_map),
                "vertex_map": {
                    v: {"output": op.output, "inputs": list(op.inputs)}
                    for v, op in m.vertex_map
                },
                "witness_shuffle": serialize_tree(m.witness),
            }
            for m in maps
        ],
    }
    if args.format == "text":
        lines = [f"count: {len(maps)}"]
        lines += [json.dumps(entry, ensure_ascii=False, sort_keys=True) for entry in payload["maps"]]
        _emit("\n".join(lines) + "\n", args.out)
    else:
        _emit(_json_line(payload), args.out)
    return 0


def cmd_free_algebra(args: argparse.Namespace) -> int:
    p = FreeForestOperad(parse_forest(args.operad))
    generators = {str(k): str(v) for k, v in _read_json_source(args.generators).items()}
    inputs = {
        str(k): [str(x) for x in v] for k, v in _read_json_source(args.inputs).items()
    }
    terms = free_algebra(p, generators, inputs, args.output_color)
    payload = {
        "count": len(terms),
        "terms": [
            {
                "indices": list(t.indices),
                "operation": str(t.label),
                "args": list(t.args),
            }
            for t in terms
        ],
    }
    if args.format == "text":
        lines = [f"count: {len(terms)}"]
        lines += [
            f"{'·'.join(t.indices)} | {t.label} | ({','.join(t.args)})" for t in terms
        ]
        _emit("\n".join(lines) + "\n", args.out)
    else:
        _emit(_json_line(payload), args.out)
    return 0


def cmd_check(args: argparse.Namespace) -> int:
    cfg = SuiteConfig(
        seed=args.seed,
        instances=args.instances,
        max_edges=args.max_edges,
        max_levels=args.max_levels,
        max_width=args.max_width,
        truncation=args.truncation,
        stump_probability=args.stump_probability,
    )
    t0 = time.monotonic()
    report = run_check(args.suite, cfg)
    elapsed = time.monotonic() - t0
    _emit(report_json(report), args.out)
    for s in report["suites"]:
        print(
            f"{s['suite']}: {len(s['records'])} records, {s['failures']} failures",
            file=sys.stderr,
        )
    print(
        f"total: {report['failures']} failures in {elapsed:.1f}s (seed {cfg.seed})",
        file=sys.stderr,
    )
    return 0 if report["failures"] == 0 else 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dendrotensor",
        description="Exact tree, forest, shuffle, and finite-operad combinatorics.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_omega = sub.add_parser("omega", help="turn a level diagram of pointed maps into its forest")
    p_omega.add_argument("input", help="level diagram JSON: inline, a path, or - for stdin")
    p_omega.add_argument("--format", choices=("text", "json", "dot"), default="text")
    p_omega.add_argument("--out", default=None)
    p_omega.set_defaults(func=cmd_omega)

    p_hom = sub.add_parser("hom", help="maps between the free operads of two forests")
    p_hom.add_argument("source", help="source forest, e.g. '{a[b,c]}' or a bare tree")
    p_hom.add_argument("target", help="target forest")
    p_hom.add_argument("--format", choices=("json", "text"), default="json")
    p_hom.add_argument("--out", default=None)
    p_hom.set_defaults(func=cmd_hom)

    p_sh = sub.add_parser("shuffles", help="enumerate the shuffles of a tensor of trees")
    p_sh.add_argument("factors", nargs="+", help="factor trees with disjoint edge names")
    p_sh.add_argument("--format", choices=("text", "json", "dot"), default="text")
    p_sh.add_argument("--out", default=None)
    p_sh.set_defaults(func=cmd_shuffles)

    p_th = sub.add_parser("tensor-hom", help="maps from a tree's free operad into a tensor of trees")
    p_th.add_argument("probe", help="probe tree")
    p_th.add_argument("factors", nargs="+", help="tensor factor trees")
    p_th.add_argument("--format", choices=("json", "text"), default="json")
    p_th.add_argument("--out", default=None)
    p_th.set_defaults(func=cmd_tensor_hom)

    p_fa = sub.add_parser("free-algebra", help="free-algebra terms over a forest's free operad")
    p_fa.add_argument("operad", help="forest presenting the operad")
    p_fa.add_argument("--generators", required=True, help="JSON object: index -> color")
    p_fa.add_argument("--inputs", required=True, help="JSON object: index -> list of elements")
    p_fa.add_argument("--output-color", required=True, help="output color of the terms")
    p_fa.add_argument("--format", choices=("json", "text"), default="json")
    p_fa.add_argument("--out", default=None)
    p_fa.set_defaults(func=cmd_free_algebra)

    p_ck = sub.add_parser("check", help="run a seeded verification suite")
    p_ck.add_argument("suite", choices=("all",) + SUITE_NAMES)
    p_ck.add_argument("--seed", type=int, default=42)
    p_ck.add_argument("--instances", type=int, default=None)
    p_ck.add_argument("--max-edges", type=int, default=None)
    p_ck.add_argument("--max-levels", type=int, default=None)
    p_ck.add_argument("--max-width", type=int, default=None)
    p_ck.add_argument("--truncation", type=int, default=4)
    p_ck.add_argument("--stump-probability", type=float, default=0.2)
    p_ck.add_argument("--out", default=None)
    p_ck.set_defaults(func=cmd_check)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse already reported; keep codes stable
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (TreeError, ValueError, KeyError, OSError) as exc:
        print(f"dendrotensor: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
