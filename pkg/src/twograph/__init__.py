"""Exact invariants and stable-finiteness certificates for finite rank-2 graphs.

The package is organised in layers:

* :mod:`twograph.intlin` - exact integer matrices, Hermite and Smith normal
  forms, lattices, abelian-group presentations;
* :mod:`twograph.feasibility` - exact rational LP, orthant meets, traces;
* :mod:`twograph.graphs` - the rank-2 graph model and vertex-set calculus;
* :mod:`twograph.ktheory` - K-group presentations and inclusion maps;
* :mod:`twograph.limits` - decidable direct-limit membership;
* :mod:`twograph.conditions` - named condition checkers with witnesses;
* :mod:`twograph.certify` - the verdict pipeline and replayable certificates;
* :mod:`twograph.documents` / :mod:`twograph.cli` - JSON documents, CLI.
"""

from .certify import (BadSubset, CertifyResult, NotAChain, NotMaximal, Verdict,
                      certify, certify_extension, certify_with_chain,
                      enumerate_maximal_chains, replay_certificate)
from .conditions import (ConditionStatus, Outcome, check_cofinal,
                         check_coordinate_cycles, check_matrix_condition,
                         check_matrix_condition_1graph,
                         check_restriction_kernel_bounded, check_trace,
                         check_vertex_cone)
from .documents import (DocumentError, description_from_dict,
                        description_to_dict, graph_hash, load_description,
                        load_graph, parse_description, serialize_description)
from .feasibility import (BoxTooLarge, GraphTrace, OrthantWitness, RatLP,
                          bounded_orthant_oracle, exact_lp_feasible,
                          faithful_graph_trace, lattice_meets_orthant)
from .graphs import (Edge, Square, TwoGraph, TwoGraphDescription, TwoGraphError,
                     count_paths, hereditary_closure, is_cofinal, is_hereditary,
                     is_saturated, quotient, restrict, sat_her_lattice, saturate,
                     validate)
from .intlin import (FgAbGroup, InducedHom, IntMatrix, Lattice,
                     SmithNormalForm, coker_presentation, det, hnf,
                     induced_map, kernel_basis, preimage_lattice, snf)
from .ktheory import (InducedMaps, KTheory1Graph, KTheory2Graph,
                      inclusion_induced_maps, k_theory_1graph, k_theory_2graph)
from .limits import (DirectLimitSystem, LimitElement, LimitKernelWitness,
                     eventual_kernel, graph_limit_image_membership,
                     graph_limit_kernel_membership, in_limit_image,
                     in_limit_kernel, limit_equal)

__version__ = "0.1.0"
