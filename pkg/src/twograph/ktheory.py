"""K-theory presentations for graph algebras, entirely in integer matrices.

For a 1-graph with adjacency matrix A the two K-groups are the cokernel
and kernel of ``1 - A^t``.  For a rank-2 graph the relevant maps are the
row block ``(1 - A_1^t, 1 - A_2^t)`` on ``Z^d + Z^d`` and the stacked
block on ``Z^d``:

* the cokernel of the row block is the subgroup generated by the vertex
  classes,
* the kernel of the stacked block is ``ker(1 - A_1^t) \\cap ker(1 - A_2^t)``
  and K_0 is the direct sum of the two (the splitting is an abstract
  group-theoretic fact, not natural in the graph, which is why inclusion
  data is only ever exposed as the pair of maps below),
* K_1 is the kernel of the row block modulo the image of the signed
  relation map ``g -> ((1 - A_2^t) g, -(1 - A_1^t) g)``.  With this sign
  the image lands inside the kernel because the two blocks commute; any
  other sign convention describes the same subgroups.

For a hereditary vertex set the coordinate inclusion induces a map between
the cokernel summands and restricts to a map between the kernel summands;
both are computed exactly here, together with the kernel of the former.
"""

from __future__ import annotations

from dataclasses import dataclass

from .graphs import TwoGraph, is_hereditary, restrict, NotHereditary, EmptySet
from .intlin import (FgAbGroup, InducedHom, IntMatrix, Lattice, NotWellDefined,
                     coker_presentation, hstack, induced_map, kernel_basis,
                     preimage_lattice, vstack)


class NotSquare(ValueError):
    pass


class NegativeEntry(ValueError):
    pass


def unit_minus_transpose(a: IntMatrix) -> IntMatrix:
    return IntMatrix.identity(a.rows) - a.transpose()


def row_block(graph: TwoGraph) -> IntMatrix:
    a1, a2 = graph.adjacency
    return hstack(unit_minus_transpose(a1), unit_minus_transpose(a2))


def stacked_block(graph: TwoGraph) -> IntMatrix:
    a1, a2 = graph.adjacency
    return vstack(unit_minus_transpose(a1), unit_minus_transpose(a2))


def signed_relation_block(graph: TwoGraph) -> IntMatrix:
    a1, a2 = graph.adjacency
    return vstack(unit_minus_transpose(a2), -unit_minus_transpose(a1))


@dataclass(frozen=True)
class KTheory1Graph:
    k0: FgAbGroup
    k1_basis: IntMatrix

    def vertex_class(self, index: int) -> tuple[int, ...]:
        delta = tuple(1 if i == index else 0 for i in range(self.k0.ambient_dim))
        return self.k0.to_coords(delta)

    @property
    def k1_invariants(self) -> tuple[int, tuple[int, ...]]:
        return (self.k1_basis.cols, ())


def k_theory_1graph(a: IntMatrix) -> KTheory1Graph:
    """K-groups of a 1-graph from its adjacency matrix."""
    if a.rows != a.cols:
        raise NotSquare("adjacency matrix must be square")
    if any(x < 0 for row in a.entries for x in row):
        raise NegativeEntry("adjacency entries must be nonnegative")
    m = unit_minus_transpose(a)
    return KTheory1Graph(k0=coker_presentation(m), k1_basis=kernel_basis(m))


@dataclass(frozen=True)
class KTheory2Graph:
    graph: TwoGraph
    coker_summand: FgAbGroup
    ker_summand_basis: IntMatrix
    k1: FgAbGroup

    def vertex_class(self, vertex: str) -> tuple[int, ...]:
        i = self.graph.vertex_index(vertex)
        delta = tuple(1 if j == i else 0 for j in range(len(self.graph.vertices)))
        return self.coker_summand.to_coords(delta)

    @property
    def ker_summand_rank(self) -> int:
        return self.ker_summand_basis.cols

    @property
    def k0_invariants(self) -> tuple[int, tuple[int, ...]]:
        """Invariants of the direct sum of the two summands."""
        free, torsion = self.coker_summand.invariants
        return (free + self.ker_summand_rank, torsion)

    @property
    def k1_invariants(self) -> tuple[int, tuple[int, ...]]:
        return self.k1.invariants


def k_theory_2graph(graph: TwoGraph) -> KTheory2Graph:
    block = row_block(graph)
    relations = signed_relation_block(graph)
    if not (block @ relations).is_zero:
        raise AssertionError("relation image escaped the kernel; adjacency matrices do not commute")
    numerator = kernel_basis(block)
    numerator_lattice = Lattice(block.cols, numerator)
    columns = []
    for j in range(relations.cols):
        coeffs = numerator_lattice.membership(relations.column(j))
        if coeffs is None:
            raise AssertionError("relation column is not an integer combination of the kernel basis")
        columns.append(coeffs)
    k1 = coker_presentation(IntMatrix.from_columns(numerator.cols, columns))
    return KTheory2Graph(
        graph=graph,
        coker_summand=coker_presentation(block),
        ker_summand_basis=kernel_basis(stacked_block(graph)),
        k1=k1,
    )


def vertex_class(k: KTheory2Graph, vertex: str) -> tuple[int, ...]:
    return k.vertex_class(vertex)


def _embedding_matrix(graph: TwoGraph, sub: TwoGraph) -> IntMatrix:
    cols = []
    d = len(graph.vertices)
    for v in sub.vertices:
        i = graph.vertex_index(v)
        cols.append(tuple(1 if j == i else 0 for j in range(d)))
    return IntMatrix.from_columns(d, cols)


@dataclass(frozen=True)
class InducedMaps:
    """Inclusion-induced data for a hereditary vertex set.

    ``cokernel_map`` acts between the vertex-class summands, written on the
    generators of the subgraph presentation.  ``kernel_map`` writes each
    kernel-summand basis vector of the subgraph in the ambient
    kernel-summand basis.  ``cokernel_map_kernel`` presents the kernel of
    the former map as an abstract group.
    """

    subgraph: TwoGraph
    ambient: KTheory2Graph
    sub_ktheory: KTheory2Graph
    cokernel_map: InducedHom
    kernel_map: IntMatrix
    cokernel_map_kernel: FgAbGroup


def inclusion_induced_maps(graph: TwoGraph, subset) -> InducedMaps:
    """Compute the two inclusion-induced maps and the kernel of the first.

    For hereditary sets the coordinate inclusion carries subgraph relations
    into ambient relations and subgraph kernels into ambient kernels; a
    failure of either is impossible for validated inputs and raises.
    """
    keep = graph.vertex_set(subset)
    if not keep:
        raise EmptySet("need a nonempty hereditary set")
    if not is_hereditary(graph, keep):
        raise NotHereditary("inclusion-induced maps need a hereditary set")
    sub = restrict(graph, keep)
    ambient_k = k_theory_2graph(graph)
    sub_k = k_theory_2graph(sub)
    embed = _embedding_matrix(graph, sub)

    cokernel_map = induced_map(embed, sub_k.coker_summand, ambient_k.coker_summand)

    ambient_kernel = Lattice(len(graph.vertices), ambient_k.ker_summand_basis)
    columns = []
    for j in range(sub_k.ker_summand_basis.cols):
        vec = sub_k.ker_summand_basis.column(j)
        coeffs = ambient_kernel.membership(embed.apply(vec))
        if coeffs is None:
            raise NotWellDefined("subgraph kernel vector escaped the ambient kernel")
        columns.append(coeffs)
    kernel_map = IntMatrix.from_columns(ambient_kernel.rank, columns)

    ambient_relations = ambient_k.coker_summand.relations
    preimage = preimage_lattice(embed, ambient_relations)
    sub_relations = sub_k.coker_summand.relations
    rel_columns = []
    for j in range(sub_relations.basis.cols):
        coeffs = preimage.membership(sub_relations.basis.column(j))
        if coeffs is None:
            raise NotWellDefined("subgraph relations escaped the relation preimage")
        rel_columns.append(coeffs)
    kernel_presentation = coker_presentation(
        IntMatrix.from_columns(preimage.rank, rel_columns))

    return InducedMaps(
        subgraph=sub,
        ambient=ambient_k,
        sub_ktheory=sub_k,
        cokernel_map=cokernel_map,
        kernel_map=kernel_map,
        cokernel_map_kernel=kernel_presentation,
    )
