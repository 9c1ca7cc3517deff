"""Command-line front end.

Subcommands: validate, ktheory, lattice, check, certify.  Input is always
a graph document (see documents.py for the JSON shape; a JSON Schema ships
in schema/).  Text output goes to stdout; ``--format json`` switches to a
stable-keyed machine-readable report.

Exit codes: certify maps its verdict to 0 (stably finite), 1 (not stably
finite), 2 (conditional) or 3 (inconclusive); other commands exit 0 on
success.  Usage errors exit 64, unreadable or invalid input exits 65.
Output is plain text, never coloured, so NO_COLOR is honoured trivially.
"""

from __future__ import annotations

import argparse
import json
import sys

from .certify import (CertifyResult, NotAChain, NotMaximal, certify,
                      replay_certificate)
from .conditions import (check_coordinate_cycles, check_cofinal,
                         check_matrix_condition, check_trace,
                         check_vertex_cone, ConditionStatus)
from .documents import (DocumentError, description_to_dict, graph_hash,
                        load_description, serialize_description)
from .graphs import (TwoGraph, TwoGraphError, hereditary_closure, is_hereditary,
                     restrict, sat_her_lattice, validate)
from .ktheory import k_theory_2graph

EX_USAGE = 64
EX_DATA = 65

_CHECKS = {
    "m": ("M", check_matrix_condition),
    "trace": ("Trace", check_trace),
    "cofinal": ("Cofinal", check_cofinal),
    "blue-acyclic": ("BlueAcyclic", lambda g: check_coordinate_cycles(g, 0)),
    "red-acyclic": ("RedAcyclic", lambda g: check_coordinate_cycles(g, 1)),
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.exit(EX_USAGE, f"{self.prog}: error: {message}\n")


def _build_parser() -> _Parser:
    parser = _Parser(prog="twograph",
                     description="Exact invariants and stable-finiteness certificates "
                                 "for finite rank-2 graphs.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("path", help="graph document (JSON)")
        p.add_argument("--format", choices=("text", "json"), default="text")
        return p

    add("validate", "validate a graph document and print its shape")
    add("ktheory", "K-group presentations and vertex classes")
    p = add("lattice", "saturated hereditary vertex sets")
    p.add_argument("--exhaustive-lattice", action="store_true",
                   help="force the exhaustive subset scan")
    p = add("check", "run a single condition check")
    p.add_argument("condition", choices=sorted(_CHECKS) + ["n"])
    p.add_argument("--assume-n", action="append", default=[], metavar="SET_OR_HASH",
                   help="grant the vertex-cone condition for a hereditary vertex set "
                        "(comma separated) or a canonical graph hash; repeatable")
    p.add_argument("--oracle-box", type=int, default=None, metavar="R",
                   help="also run the bounded box oracle with this radius as a cross-check")
    p = add("certify", "certify stable finiteness; exit code is the verdict")
    p.add_argument("--assume-n", action="append", default=[], metavar="SET_OR_HASH",
                   help="grant the vertex-cone condition for a hereditary vertex set "
                        "(comma separated) or a canonical graph hash; repeatable")
    p.add_argument("--chain", default=None, metavar="V1,V2|V1,V2,V3",
                   help="chain hint: cumulative vertex sets separated by '|'")
    p.add_argument("--exhaustive-lattice", action="store_true")
    p.add_argument("--oracle-box", type=int, default=None, metavar="R",
                   help="radius for bounded cross-checks in the report")
    p.add_argument("--replay", action="store_true",
                   help="re-run every certificate leaf before printing")
    return parser


def _load(path: str) -> TwoGraph:
    description = load_description(path)
    return validate(description)


def _resolve_assumptions(graph: TwoGraph, raw: list[str]) -> list[str]:
    """Turn --assume-n values into canonical graph hashes.

    A value that looks like a hash (64 hex characters) passes through; a
    comma-separated vertex set is hereditarily closed and hashed as the
    restriction subgraph it names.
    """
    tokens = []
    for value in raw:
        candidate = value.strip()
        if len(candidate) == 64 and all(c in "0123456789abcdef" for c in candidate):
            tokens.append(candidate)
            continue
        subset = frozenset(part.strip() for part in candidate.split(",") if part.strip())
        if not subset:
            raise DocumentError("--assume-n needs a nonempty vertex set or a hash")
        closed = hereditary_closure(graph, subset)
        if closed != subset and not is_hereditary(graph, subset):
            raise DocumentError(
                f"--assume-n set {sorted(subset)} is not hereditary "
                f"(hereditary closure is {sorted(closed)})")
        tokens.append(graph_hash(restrict(graph, subset).description))
    return tokens


def _parse_chain(value: str) -> list[frozenset[str]]:
    parts = [p for p in value.split("|") if p.strip()]
    return [frozenset(v.strip() for v in part.split(",") if v.strip()) for part in parts]


def _emit(args, payload: dict, text_lines: list[str]) -> None:
    if args.format == "json":
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        for line in text_lines:
            print(line)


def _status_line(label: str, status: ConditionStatus) -> str:
    word = status.outcome.value.capitalize()
    detail = ""
    if status.fails and "vector" in status.evidence:
        detail = f"  witness vector {status.evidence['vector']}"
    elif status.fails and "witness_subset" in status.evidence:
        detail = f"  witness subset {status.evidence['witness_subset']}"
    elif status.fails and "cycle_edges" in status.evidence:
        detail = f"  cycle {status.evidence['cycle_edges']}"
    return f"{label}: {word}{detail}"


def _render_certificate(node: dict, indent: int = 0) -> list[str]:
    pad = "  " * indent
    lines = []
    if node["kind"] == "rule":
        extra = ""
        if "chain" in node:
            extra = " chain " + " < ".join("{" + ",".join(s) + "}" for s in node["chain"])
        if "outcome" in node:
            extra += f" -> {node['outcome']}"
        lines.append(f"{pad}[{node['rule']}]{extra}")
        for child in node["children"]:
            lines.extend(_render_certificate(child, indent + 1))
    else:
        detail = ""
        if node["status"] == "assumed":
            detail = f" (token {node['evidence']['token'][:12]})"
        elif node["status"] == "fails" and "vector" in node["evidence"]:
            detail = f" (witness {node['evidence']['vector']})"
        lines.append(f"{pad}{node['check']}: {node['status']}{detail} "
                     f"[graph {node['graph'][:12]}]")
    return lines


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EX_USAGE

    try:
        graph = _load(args.path)
    except OSError as exc:
        print(f"twograph: cannot read {args.path}: {exc}", file=sys.stderr)
        return EX_DATA
    except (DocumentError, TwoGraphError) as exc:
        print(f"twograph: invalid graph document: {exc}", file=sys.stderr)
        return EX_DATA

    try:
        return _dispatch(args, graph)
    except (DocumentError, TwoGraphError, NotAChain, NotMaximal, ValueError) as exc:
        print(f"twograph: {exc}", file=sys.stderr)
        return EX_DATA


def _dispatch(args, graph: TwoGraph) -> int:
    token = graph_hash(graph.description)
    if args.command == "validate":
        payload = {
            "command": "validate",
            "ok": True,
            "graph_hash": token,
            "vertices": list(graph.vertices),
            "blue_edges": len(graph.blue_edges),
            "red_edges": len(graph.red_edges),
            "squares": len(graph.squares),
            "adjacency": {
                "blue": [list(r) for r in graph.adjacency[0].entries],
                "red": [list(r) for r in graph.adjacency[1].entries],
            },
            "canonical": description_to_dict(graph.description),
        }
        _emit(args, payload, [
            f"valid rank-2 graph  [hash {token}]",
            f"vertices: {list(graph.vertices)}",
            f"blue adjacency: {[list(r) for r in graph.adjacency[0].entries]}",
            f"red adjacency:  {[list(r) for r in graph.adjacency[1].entries]}",
            f"squares: {len(graph.squares)}",
        ])
        return 0

    if args.command == "ktheory":
        k = k_theory_2graph(graph)
        free, torsion = k.coker_summand.invariants
        k1_free, k1_torsion = k.k1.invariants
        payload = {
            "command": "ktheory",
            "graph_hash": token,
            "k0": {
                "coker_summand": {"free_rank": free, "torsion": list(torsion)},
                "kernel_summand_rank": k.ker_summand_rank,
                "direct_sum": {"free_rank": k.k0_invariants[0],
                               "torsion": list(k.k0_invariants[1])},
            },
            "k1": {"free_rank": k1_free, "torsion": list(k1_torsion)},
            "vertex_classes": {v: list(k.vertex_class(v)) for v in graph.vertices},
        }
        _emit(args, payload, [
            f"K0 = {_group_name(k.k0_invariants)}   "
            f"(vertex-class summand {k.coker_summand}, kernel summand rank {k.ker_summand_rank})",
            f"K1 = {k.k1}",
            "vertex classes: " + ", ".join(
                f"{v} -> {list(k.vertex_class(v))}" for v in graph.vertices),
        ])
        return 0

    if args.command == "lattice":
        lattice = sat_her_lattice(graph, force_exhaustive=args.exhaustive_lattice)
        sets = [sorted(s) for s in lattice]
        payload = {
            "command": "lattice",
            "graph_hash": token,
            "mode": "exhaustive" if lattice.exhaustive else "generated",
            "cofinal": len(lattice) == 2,
            "sets": sets,
            "restriction_hashes": {
                ",".join(sorted(s)): graph_hash(restrict(graph, s).description)
                for s in lattice if s
            },
        }
        lines = [f"{len(sets)} saturated hereditary sets "
                 f"({payload['mode']}; cofinal: {payload['cofinal']})"]
        lines += [f"  {s}" for s in sets]
        _emit(args, payload, lines)
        return 0

    if args.command == "check":
        if args.condition == "n":
            assumptions = _resolve_assumptions(graph, args.assume_n)
            status = check_vertex_cone(graph, assumptions)
            label = "N"
        else:
            label, runner = _CHECKS[args.condition]
            status = runner(graph)
        payload = {"command": "check", "graph_hash": token, "label": label}
        payload.update(status.as_dict())
        if args.condition == "m" and args.oracle_box:
            from .feasibility import bounded_orthant_oracle
            from .ktheory import row_block
            oracle_hit = bounded_orthant_oracle(row_block(graph), args.oracle_box)
            payload["bounded_oracle"] = (
                None if oracle_hit is None else {"vector": list(oracle_hit.vector)})
        _emit(args, payload, [_status_line(label, status)])
        return 0

    if args.command == "certify":
        assumptions = _resolve_assumptions(graph, args.assume_n)
        chain = _parse_chain(args.chain) if args.chain else None
        result = certify(graph, assumptions=assumptions, chain=chain,
                         force_exhaustive_lattice=args.exhaustive_lattice)
        if args.replay:
            replay_certificate(json.loads(result.to_json()))
        payload = {
            "command": "certify",
            "graph_hash": token,
            "verdict": result.verdict.value,
            "exit_code": result.exit_code,
            "pending": result.pending,
            "certificate": result.certificate,
        }
        lines = [f"verdict: {result.verdict.value}"]
        for p in result.pending:
            lines.append(f"pending: vertex-cone condition assumed for graph "
                         f"{p['graph'][:12]} (token {p['token'][:12]})")
        lines.extend(_render_certificate(result.certificate["root"]))
        _emit(args, payload, lines)
        return result.exit_code

    raise AssertionError(f"unhandled command {args.command}")


def _group_name(invariants: tuple[int, tuple[int, ...]]) -> str:
    free, torsion = invariants
    parts = []
    if free == 1:
        parts.append("Z")
    elif free > 1:
        parts.append(f"Z^{free}")
    parts.extend(f"Z/{d}" for d in torsion)
    return " x ".join(parts) if parts else "0"


def console_main() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console_main()
