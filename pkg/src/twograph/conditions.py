"""Named condition checkers with machine-checkable outcomes.

Every check returns a :class:`ConditionStatus`.  A failing status always
carries a witness that can be re-verified with integer arithmetic; a
holding status records which procedure established it.  The vertex-cone
condition has no known decision procedure, so its status is Assumed (with
the token that granted it), Holds (only via a user-supplied oracle), or
Unknown; it is never silently taken for granted.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Collection, Iterable

from .documents import graph_hash
from .feasibility import (BoxTooLarge, _BOX_LIMIT, faithful_graph_trace,
                          lattice_meets_orthant)
from .graphs import NotHereditary, TwoGraph, is_hereditary, restrict, sat_her_lattice
from .intlin import IntMatrix, Lattice, preimage_lattice
from .ktheory import NegativeEntry, NotSquare, row_block, unit_minus_transpose


class Outcome(Enum):
    HOLDS = "holds"
    FAILS = "fails"
    ASSUMED = "assumed"
    UNKNOWN = "unknown"


MATRIX = "matrix-condition"
MATRIX_1GRAPH = "matrix-condition-1graph"
VERTEX_CONE = "vertex-cone-condition"
TRACE = "faithful-trace"
COFINAL = "cofinal"
BLUE_ACYCLIC = "blue-acyclic"
RED_ACYCLIC = "red-acyclic"
RESTRICTION_KERNEL = "restriction-kernel-positivity"


@dataclass(frozen=True)
class ConditionStatus:
    condition: str
    outcome: Outcome
    evidence: dict = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return self.outcome is Outcome.HOLDS

    @property
    def fails(self) -> bool:
        return self.outcome is Outcome.FAILS

    def as_dict(self) -> dict:
        return {"condition": self.condition, "outcome": self.outcome.value,
                "evidence": self.evidence}


def check_matrix_condition(graph: TwoGraph) -> ConditionStatus:
    """Does the combined image of the two corrected transposes avoid the
    positive orthant?

    Fails with an explicit decomposition ``x == (1 - A1^t) f + (1 - A2^t) g``
    of a nonzero nonnegative vector; holds with the exact-LP tag.
    """
    block = row_block(graph)
    witness = lattice_meets_orthant(block)
    if witness is None:
        return ConditionStatus(MATRIX, Outcome.HOLDS, {"method": "exact-rational-lp"})
    d = len(graph.vertices)
    return ConditionStatus(MATRIX, Outcome.FAILS, {
        "vector": list(witness.vector),
        "blue_coefficients": list(witness.coefficients[:d]),
        "red_coefficients": list(witness.coefficients[d:]),
    })


def check_matrix_condition_1graph(a: IntMatrix) -> ConditionStatus:
    if a.rows != a.cols:
        raise NotSquare("adjacency matrix must be square")
    if any(x < 0 for row in a.entries for x in row):
        raise NegativeEntry("adjacency entries must be nonnegative")
    witness = lattice_meets_orthant(unit_minus_transpose(a))
    if witness is None:
        return ConditionStatus(MATRIX_1GRAPH, Outcome.HOLDS, {"method": "exact-rational-lp"})
    return ConditionStatus(MATRIX_1GRAPH, Outcome.FAILS, {
        "vector": list(witness.vector),
        "coefficients": list(witness.coefficients),
    })


def check_cofinal(graph: TwoGraph, *, force_exhaustive: bool = False) -> ConditionStatus:
    lattice = sat_her_lattice(graph, force_exhaustive=force_exhaustive)
    mode = "exhaustive" if lattice.exhaustive else "generated"
    if len(lattice) == 2:
        return ConditionStatus(COFINAL, Outcome.HOLDS,
                               {"method": "lattice-enumeration", "mode": mode})
    witness = next(s for s in lattice if s and len(s) < len(graph.vertices))
    return ConditionStatus(COFINAL, Outcome.FAILS,
                           {"witness_subset": sorted(witness), "mode": mode})


def check_coordinate_cycles(graph: TwoGraph, color: int) -> ConditionStatus:
    """Acyclicity of one colour's edge set.

    For finite source-free graphs a single-colour cycle always exists
    (every vertex receives an edge of each colour, so walking backwards
    along in-edges must repeat a vertex), so in this package's scope the
    check always fails; it is kept because certificates report it and the
    failure witness, an explicit cycle, is useful output.
    """
    condition = BLUE_ACYCLIC if color == 0 else RED_ACYCLIC
    edges = graph.edges(color)
    out: dict[str, list] = {v: [] for v in graph.vertices}
    for e in edges:
        out[e.source].append(e)
    colors = {v: 0 for v in graph.vertices}
    stack_edges: list = []

    def dfs(v: str):
        colors[v] = 1
        for e in out[v]:
            w = e.range
            if colors[w] == 0:
                stack_edges.append(e)
                cycle = dfs(w)
                if cycle is not None:
                    return cycle
                stack_edges.pop()
            elif colors[w] == 1:
                stack_edges.append(e)
                ids = []
                for idx in range(len(stack_edges) - 1, -1, -1):
                    ids.append(stack_edges[idx].id)
                    if stack_edges[idx].source == w:
                        break
                return list(reversed(ids))
        colors[v] = 2
        return None

    for v in graph.vertices:
        if colors[v] == 0:
            cycle = dfs(v)
            if cycle is not None:
                return ConditionStatus(condition, Outcome.FAILS, {"cycle_edges": cycle})
    return ConditionStatus(condition, Outcome.HOLDS, {"method": "depth-first-search"})


def check_trace(graph: TwoGraph) -> ConditionStatus:
    """Existence of a faithful graph trace.

    Non-existence is certified by a matrix-condition witness: pairing a
    strictly positive trace with a nonzero nonnegative vector of the
    combined image would produce a positive number that provably equals
    zero.  For finite graphs one of the two certificates always exists.
    """
    trace = faithful_graph_trace(graph)
    if trace is not None:
        return ConditionStatus(TRACE, Outcome.HOLDS, {
            "trace": {v: str(x) for v, x in zip(trace.vertices, trace.values)},
        })
    matrix = check_matrix_condition(graph)
    if not matrix.fails:
        raise AssertionError("no trace and no matrix-condition witness; impossible for finite graphs")
    return ConditionStatus(TRACE, Outcome.FAILS, {
        "reason": "matrix-condition-witness",
        "vector": matrix.evidence["vector"],
        "blue_coefficients": matrix.evidence["blue_coefficients"],
        "red_coefficients": matrix.evidence["red_coefficients"],
    })


def check_vertex_cone(graph: TwoGraph, assumptions: Collection[str] = (),
                      oracle: Callable[[TwoGraph], bool] | None = None) -> ConditionStatus:
    """Status of the vertex-cone condition: the subgroup generated by the
    vertex classes should meet the positive cone exactly in the
    nonnegative combinations of vertex classes.

    No general decision procedure is known.  An assumption token (the
    canonical hash of this exact graph presentation) yields Assumed; a
    user-supplied oracle that vouches for the graph yields Holds; anything
    else is Unknown.
    """
    token = graph_hash(graph.description)
    if token in set(assumptions):
        return ConditionStatus(VERTEX_CONE, Outcome.ASSUMED, {"token": token})
    if oracle is not None and oracle(graph):
        return ConditionStatus(VERTEX_CONE, Outcome.HOLDS, {"method": "oracle", "graph": token})
    return ConditionStatus(VERTEX_CONE, Outcome.UNKNOWN, {"graph": token})


def check_restriction_kernel_bounded(graph: TwoGraph, subset: Iterable[str],
                                     radius: int) -> ConditionStatus:
    """Bounded search for a nonnegative class killed by the inclusion map.

    Enumerates nonzero ``m`` in ``N^H`` up to the radius and flags any that
    is not a relation of the subgraph presentation yet maps into the
    ambient relations: such an ``m`` is a nonzero nonnegative class in the
    kernel of the cokernel inclusion.  Finding none is only a bounded
    confirmation; finding one is a sound refutation.
    """
    keep = graph.vertex_set(subset)
    if not is_hereditary(graph, keep):
        raise NotHereditary("the bounded kernel check needs a hereditary set")
    if radius < 1:
        raise ValueError("radius must be positive")
    sub_vertices = [v for v in graph.vertices if v in keep]
    h = len(sub_vertices)
    if (radius + 1) ** h - 1 > _BOX_LIMIT:
        raise BoxTooLarge(f"box (radius {radius})^{h} exceeds enumeration limit")
    d = len(graph.vertices)
    sub = restrict(graph, keep)
    sub_relations = Lattice.from_columns(h, row_block(sub))
    ambient_relations = Lattice.from_columns(d, row_block(graph))
    positions = [graph.vertex_index(v) for v in sub_vertices]
    for m in itertools.product(range(radius + 1), repeat=h):
        if not any(m):
            continue
        if sub_relations.contains(m):
            continue
        ambient = [0] * d
        for pos, value in zip(positions, m):
            ambient[pos] = value
        if ambient_relations.contains(ambient):
            return ConditionStatus(RESTRICTION_KERNEL, Outcome.FAILS, {
                "witness": {v: value for v, value in zip(sub_vertices, m) if value},
                "radius": radius,
            })
    return ConditionStatus(RESTRICTION_KERNEL, Outcome.HOLDS,
                           {"method": "bounded-enumeration", "radius": radius})
