"""Stable-finiteness certification.

The pipeline applies rules in a fixed priority order and emits a
certificate: a tree of rule applications whose leaves are condition
statuses, each re-checkable by exact arithmetic, plus a table of every
graph presentation the tree mentions, so a certificate is replayable from
its own bytes.

Rules, in order:

1. matrix-necessity.  The matrix condition is necessary for stable
   finiteness, so a failure witness settles the question negatively.  This
   is the only route to a negative verdict.
2. cofinal-sufficiency.  For cofinal graphs the matrix condition is also
   sufficient; the faithful graph trace that then exists is attached as
   corroborating evidence.
3. maximal chains.  For each maximal chain of saturated hereditary sets,
   stable finiteness follows if every quotient along the chain satisfies
   the matrix condition and every interior restriction satisfies the
   vertex-cone condition.  Vertex-cone statuses may be Assumed (yielding a
   Conditional verdict listing exactly those assumptions) but are never
   invented.
4. otherwise Inconclusive, with the full condition report and every chain
   attempt preserved for audit.

A trace on a graph that is not cofinal is deliberately not promoted to a
verdict: the sufficiency argument used here runs through cofinality, and
the chain machinery is the supported route for everything else.  Failed
chains never produce a negative verdict; the chain rule is one-directional.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Collection, Iterable, Sequence

from .conditions import (COFINAL, MATRIX, TRACE, VERTEX_CONE, BLUE_ACYCLIC,
                         RED_ACYCLIC, ConditionStatus, Outcome,
                         check_coordinate_cycles, check_cofinal,
                         check_matrix_condition, check_trace, check_vertex_cone)
from .documents import description_from_dict, description_to_dict, graph_hash
from .graphs import (SatHerLattice, TwoGraph, is_hereditary, is_saturated,
                     quotient, restrict, sat_her_lattice, validate)

CERTIFICATE_FORMAT = "twograph-certificate/1"


class BadSubset(ValueError):
    pass


class NotAChain(ValueError):
    pass


class NotMaximal(ValueError):
    pass


class CertificateReplayError(RuntimeError):
    pass


class Verdict(Enum):
    STABLY_FINITE = "stably-finite"
    NOT_STABLY_FINITE = "not-stably-finite"
    CONDITIONAL = "conditional"
    INCONCLUSIVE = "inconclusive"

    @property
    def exit_code(self) -> int:
        return _EXIT_CODES[self]


_EXIT_CODES = {
    Verdict.STABLY_FINITE: 0,
    Verdict.NOT_STABLY_FINITE: 1,
    Verdict.CONDITIONAL: 2,
    Verdict.INCONCLUSIVE: 3,
}

_RANK = {Verdict.STABLY_FINITE: 0, Verdict.CONDITIONAL: 1, Verdict.INCONCLUSIVE: 2}

_STATEMENTS = {
    "matrix-necessity": (
        "A nonzero nonnegative vertex vector lies in the combined image of the "
        "corrected transposed adjacency matrices; the matrix condition is "
        "necessary for stable finiteness, so the algebra is not stably finite."),
    "cofinal-sufficiency": (
        "The graph has no saturated hereditary vertex sets besides the trivial "
        "two, and satisfies the matrix condition; for cofinal graphs the matrix "
        "condition is equivalent to stable finiteness, and the faithful graph "
        "trace found is attached as corroboration."),
    "maximal-chain": (
        "Along a maximal chain of saturated hereditary sets, every quotient "
        "satisfies the matrix condition and every interior restriction "
        "satisfies the vertex-cone condition; the resulting tower of "
        "extensions is then stably finite at the top."),
    "extension": (
        "For a saturated hereditary set, stable finiteness of the restriction "
        "and of the quotient, the ambient matrix condition, and the "
        "vertex-cone condition for the restriction together force stable "
        "finiteness of the whole graph algebra."),
    "inconclusive": (
        "No rule applied; the condition report and every attempted chain are "
        "recorded for audit."),
}


@dataclass(frozen=True)
class CertifyResult:
    verdict: Verdict
    certificate: dict

    @property
    def exit_code(self) -> int:
        return self.verdict.exit_code

    @property
    def pending(self) -> list[dict]:
        return self.certificate["pending"]

    def to_json(self) -> str:
        return json.dumps(self.certificate, sort_keys=True, separators=(",", ":"))


class _Run:
    def __init__(self, assumptions: Collection[str], oracle, force_exhaustive: bool):
        self.assumptions = frozenset(assumptions)
        self.oracle = oracle
        self.force_exhaustive = force_exhaustive
        self.graphs: dict[str, dict] = {}
        self.memo: dict[str, CertifyResult | None] = {}

    def register(self, graph: TwoGraph) -> str:
        token = graph_hash(graph.description)
        if token not in self.graphs:
            self.graphs[token] = description_to_dict(graph.description)
        return token

    def leaf(self, graph: TwoGraph, status: ConditionStatus) -> dict:
        return {
            "kind": "leaf",
            "check": status.condition,
            "graph": self.register(graph),
            "status": status.outcome.value,
            "evidence": status.evidence,
        }

    def rule(self, name: str, graph: TwoGraph, children: list[dict], **extra) -> dict:
        node = {
            "kind": "rule",
            "rule": name,
            "graph": self.register(graph),
            "statement": _STATEMENTS[name],
            "children": children,
        }
        node.update(extra)
        return node


def _pending_from(nodes: Iterable[dict]) -> list[dict]:
    out = []
    stack = list(nodes)
    while stack:
        node = stack.pop()
        if node["kind"] == "leaf":
            if node["status"] == Outcome.ASSUMED.value:
                out.append({"graph": node["graph"], "condition": node["check"],
                            "token": node["evidence"]["token"]})
        else:
            stack.extend(node["children"])
    out.sort(key=lambda p: (p["graph"], p["token"]))
    deduped = []
    for p in out:
        if p not in deduped:
            deduped.append(p)
    return deduped


def _assemble(run: _Run, verdict: Verdict, root: dict) -> CertifyResult:
    certificate = {
        "format": CERTIFICATE_FORMAT,
        "verdict": verdict.value,
        "pending": _pending_from([root]) if verdict is Verdict.CONDITIONAL else [],
        "assumptions": sorted(run.assumptions),
        "root": root,
        "graphs": run.graphs,
    }
    return CertifyResult(verdict, certificate)


def normalize_chain(graph: TwoGraph, sets: Iterable[Iterable[str]]) -> list[frozenset[str]]:
    """Interpret user-supplied cumulative sets as a full chain from the
    empty set to the whole vertex set."""
    chain = [graph.vertex_set(s) for s in sets]
    full = frozenset(graph.vertices)
    if not chain or chain[0]:
        chain.insert(0, frozenset())
    if chain[-1] != full:
        chain.append(full)
    return chain


def _validate_chain(graph: TwoGraph, chain: Sequence[frozenset[str]],
                    lattice: SatHerLattice) -> None:
    full = frozenset(graph.vertices)
    if len(chain) < 2 or chain[0] != frozenset() or chain[-1] != full:
        raise NotAChain("a chain runs from the empty set to the full vertex set")
    for a, b in zip(chain, chain[1:]):
        if not a < b:
            raise NotAChain("chain sets must be strictly increasing")
    for s in chain[1:-1]:
        if not (is_hereditary(graph, s) and is_saturated(graph, s)):
            raise NotAChain(f"chain element {sorted(s)} is not saturated hereditary")
    members = set(lattice.sets)
    for s in chain:
        if frozenset(s) not in members:
            raise NotAChain(f"chain element {sorted(s)} is not in the lattice")
    for a, b in zip(chain, chain[1:]):
        for middle in lattice:
            if a < middle < b:
                raise NotMaximal(
                    f"{sorted(middle)} lies strictly between {sorted(a)} and {sorted(b)}")


def enumerate_maximal_chains(lattice: SatHerLattice) -> list[list[frozenset[str]]]:
    """All maximal chains of the lattice, in a canonical order."""
    sets = list(lattice.sets)
    full = max(sets, key=len)
    covers: dict[frozenset, list[frozenset]] = {s: [] for s in sets}
    for a in sets:
        for b in sets:
            if a < b and not any(a < c < b for c in sets):
                covers[a].append(b)
    for a in covers:
        covers[a].sort(key=lambda s: tuple(sorted(s)))
    chains: list[list[frozenset[str]]] = []

    def grow(prefix: list[frozenset]) -> None:
        tip = prefix[-1]
        if tip == full:
            chains.append(list(prefix))
            return
        for nxt in covers[tip]:
            prefix.append(nxt)
            grow(prefix)
            prefix.pop()

    grow([frozenset()])
    return chains


def _chain_node(run: _Run, graph: TwoGraph, chain: Sequence[frozenset[str]],
                lattice: SatHerLattice) -> tuple[Verdict, dict]:
    children: list[dict] = []
    for h in chain[:-1]:
        part = quotient(graph, h)
        children.append(run.leaf(part, check_matrix_condition(part)))
    for h in chain[1:-1]:
        part = restrict(graph, h)
        children.append(run.leaf(part, check_vertex_cone(part, run.assumptions, run.oracle)))
    statuses = [child["status"] for child in children]
    if Outcome.FAILS.value in statuses or Outcome.UNKNOWN.value in statuses:
        verdict = Verdict.INCONCLUSIVE
    elif Outcome.ASSUMED.value in statuses:
        verdict = Verdict.CONDITIONAL
    else:
        verdict = Verdict.STABLY_FINITE
    node = run.rule("maximal-chain", graph, children,
                    chain=[sorted(s) for s in chain],
                    lattice_mode="exhaustive" if lattice.exhaustive else "generated",
                    outcome=verdict.value)
    return verdict, node


def certify_with_chain(graph: TwoGraph, chain: Iterable[Iterable[str]], *,
                       assumptions: Collection[str] = (),
                       oracle: Callable[[TwoGraph], bool] | None = None,
                       force_exhaustive_lattice: bool = False) -> CertifyResult:
    """Run only the chain rule on one explicit chain.

    The chain is validated against the lattice: its elements must be
    saturated hereditary and strictly increasing (NotAChain otherwise) and
    consecutive elements must be covers (NotMaximal otherwise).
    """
    run = _Run(assumptions, oracle, force_exhaustive_lattice)
    lattice = sat_her_lattice(graph, force_exhaustive=force_exhaustive_lattice)
    normalized = normalize_chain(graph, chain)
    _validate_chain(graph, normalized, lattice)
    verdict, node = _chain_node(run, graph, normalized, lattice)
    return _assemble(run, verdict, node)


def certify(graph: TwoGraph, *,
            assumptions: Collection[str] = (),
            oracle: Callable[[TwoGraph], bool] | None = None,
            chain: Iterable[Iterable[str]] | None = None,
            force_exhaustive_lattice: bool = False) -> CertifyResult:
    """Decide what can be decided and certify it.

    ``assumptions`` is a set of canonical graph hashes for which the
    vertex-cone condition is taken as asserted; any verdict that leans on
    one is Conditional and lists it.  ``chain`` restricts the chain rule to
    one user-supplied chain instead of enumerating all maximal ones.
    """
    run = _Run(assumptions, oracle, force_exhaustive_lattice)
    return _certify_into(run, graph, chain)


def _certify_into(run: _Run, graph: TwoGraph,
                  chain: Iterable[Iterable[str]] | None = None) -> CertifyResult:
    matrix_status = check_matrix_condition(graph)
    matrix_leaf = run.leaf(graph, matrix_status)
    if matrix_status.fails:
        root = run.rule("matrix-necessity", graph, [matrix_leaf])
        return _assemble(run, Verdict.NOT_STABLY_FINITE, root)

    lattice = sat_her_lattice(graph, force_exhaustive=run.force_exhaustive)
    cofinal_status = check_cofinal(graph, force_exhaustive=run.force_exhaustive)
    cofinal_leaf = run.leaf(graph, cofinal_status)
    if cofinal_status.holds:
        trace_leaf = run.leaf(graph, check_trace(graph))
        root = run.rule("cofinal-sufficiency", graph,
                        [cofinal_leaf, matrix_leaf, trace_leaf])
        return _assemble(run, Verdict.STABLY_FINITE, root)

    if chain is not None:
        normalized = normalize_chain(graph, chain)
        _validate_chain(graph, normalized, lattice)
        chains = [normalized]
    else:
        chains = enumerate_maximal_chains(lattice)

    best: tuple[Verdict, dict] | None = None
    attempts: list[dict] = []
    for candidate in chains:
        verdict, node = _chain_node(run, graph, candidate, lattice)
        attempts.append(node)
        if best is None or _RANK[verdict] < _RANK[best[0]]:
            best = (verdict, node)
        if best[0] is Verdict.STABLY_FINITE:
            break
    if best is not None and best[0] in (Verdict.STABLY_FINITE, Verdict.CONDITIONAL):
        return _assemble(run, best[0], best[1])

    report = [matrix_leaf, cofinal_leaf,
              run.leaf(graph, check_trace(graph)),
              run.leaf(graph, check_vertex_cone(graph, run.assumptions, run.oracle)),
              run.leaf(graph, check_coordinate_cycles(graph, 0)),
              run.leaf(graph, check_coordinate_cycles(graph, 1))]
    root = run.rule("inconclusive", graph, report + attempts)
    return _assemble(run, Verdict.INCONCLUSIVE, root)


def certify_extension(graph: TwoGraph, subset: Iterable[str], *,
                      assumptions: Collection[str] = (),
                      oracle: Callable[[TwoGraph], bool] | None = None,
                      force_exhaustive_lattice: bool = False) -> CertifyResult:
    """Certify through one ideal-quotient extension.

    Needs the ambient matrix condition, the vertex-cone status of the
    restriction, and recursive certificates for both the restriction and
    the quotient.  Any required failure makes this rule Inconclusive (the
    underlying implication only runs one way); assumptions anywhere make it
    Conditional.  Recursion is memoised on the canonical graph hash.
    """
    run = _Run(assumptions, oracle, force_exhaustive_lattice)
    return _certify_extension_into(run, graph, subset)


def _certify_extension_into(run: _Run, graph: TwoGraph, subset: Iterable[str]) -> CertifyResult:
    keep = graph.vertex_set(subset)
    if not keep or keep == frozenset(graph.vertices):
        raise BadSubset("extension needs a proper nonempty saturated hereditary set")
    if not (is_hereditary(graph, keep) and is_saturated(graph, keep)):
        raise BadSubset("extension needs a saturated hereditary set")

    matrix_leaf = run.leaf(graph, check_matrix_condition(graph))
    sub = restrict(graph, keep)
    cone_leaf = run.leaf(sub, check_vertex_cone(sub, run.assumptions, run.oracle))
    sub_result = _memoized_certify(run, sub)
    quo = quotient(graph, keep)
    quo_result = _memoized_certify(run, quo)

    children = [matrix_leaf, cone_leaf, sub_result.certificate["root"],
                quo_result.certificate["root"]]
    child_verdicts = {sub_result.verdict, quo_result.verdict}
    if (matrix_leaf["status"] == Outcome.FAILS.value
            or cone_leaf["status"] in (Outcome.FAILS.value, Outcome.UNKNOWN.value)
            or Verdict.NOT_STABLY_FINITE in child_verdicts
            or Verdict.INCONCLUSIVE in child_verdicts):
        verdict = Verdict.INCONCLUSIVE
    elif cone_leaf["status"] == Outcome.ASSUMED.value or Verdict.CONDITIONAL in child_verdicts:
        verdict = Verdict.CONDITIONAL
    else:
        verdict = Verdict.STABLY_FINITE
    node = run.rule("extension", graph, children,
                    subset=sorted(keep), outcome=verdict.value)
    return _assemble(run, verdict, node)


def _memoized_certify(run: _Run, graph: TwoGraph) -> CertifyResult:
    token = graph_hash(graph.description)
    cached = run.memo.get(token)
    if cached is None:
        cached = _certify_into(run, graph)
        run.memo[token] = cached
    return cached


def replay_certificate(data: dict, oracle: Callable[[TwoGraph], bool] | None = None) -> int:
    """Re-run every leaf of a certificate and compare outcomes.

    Returns the number of leaves replayed; raises CertificateReplayError on
    the first mismatch.  Leaves certified by a plug-in oracle need the same
    oracle passed in again; the "mode" evidence key of lattice-backed
    checks is informational and exempt from comparison.
    """
    if data.get("format") != CERTIFICATE_FORMAT:
        raise CertificateReplayError(f"unknown certificate format {data.get('format')!r}")
    graphs = {token: validate(description_from_dict(desc))
              for token, desc in data["graphs"].items()}
    assumptions = data.get("assumptions", [])
    count = 0
    stack = [data["root"]]
    while stack:
        node = stack.pop()
        if node["kind"] == "rule":
            stack.extend(node["children"])
            continue
        token = node["graph"]
        if token not in graphs:
            raise CertificateReplayError(f"leaf references unregistered graph {token}")
        graph = graphs[token]
        if graph_hash(graph.description) != token:
            raise CertificateReplayError("graph table entry does not match its hash")
        check = node["check"]
        if check == MATRIX:
            fresh = check_matrix_condition(graph)
        elif check == COFINAL:
            fresh = check_cofinal(graph)
        elif check == TRACE:
            fresh = check_trace(graph)
        elif check == VERTEX_CONE:
            fresh = check_vertex_cone(graph, assumptions, oracle)
        elif check == BLUE_ACYCLIC:
            fresh = check_coordinate_cycles(graph, 0)
        elif check == RED_ACYCLIC:
            fresh = check_coordinate_cycles(graph, 1)
        else:
            raise CertificateReplayError(f"leaf has unknown check {check!r}")
        if fresh.outcome.value != node["status"]:
            raise CertificateReplayError(
                f"{check} on {token[:12]} replayed as {fresh.outcome.value}, "
                f"certificate says {node['status']}")
        recorded = {k: v for k, v in node["evidence"].items() if k != "mode"}
        recomputed = {k: v for k, v in fresh.evidence.items() if k != "mode"}
        if json.loads(json.dumps(recomputed)) != recorded:
            raise CertificateReplayError(f"{check} on {token[:12]} evidence mismatch")
        count += 1
    return count
