"""Decidable calculus for direct limits of ``Z^d`` along an integer matrix.

An element of the limit is a pair (level, vector); two elements are equal
when, pushed to a common level, their difference is eventually killed by
the bonding map.  Because kernels of integer matrices are pure subgroups
of bounded rank, the ascending kernel chain stops by exponent d, which
makes every membership question here finitely decidable:

* equality of limit elements,
* membership in the kernel of ``1 - phi`` induced on the limit, with an
  honest representative fixed by ``phi`` itself,
* membership in the image of ``1 - phi`` on the limit, via a stabilising
  chain of preimage lattices.

The mixed variants at the bottom run the same machinery on a rank-2 graph,
with the blue matrix as the bonding map and the red matrix as the
endomorphism; they cross-check two independent characterisations and raise
if the two ever disagree.
"""

from __future__ import annotations

from dataclasses import dataclass

from .graphs import TwoGraph
from .intlin import DimensionMismatch, IntMatrix, Lattice, kernel_basis, preimage_lattice


class InternalDisagreement(RuntimeError):
    """Two provably equivalent characterisations returned different answers."""


class ChainNotStabilized(RuntimeError):
    """A preimage chain exceeded its iteration cap; indicates a bug."""


@dataclass(frozen=True)
class DirectLimitSystem:
    """The constant tower ``Z^d -> Z^d -> ...`` with one bonding matrix."""

    bonding: IntMatrix

    def __post_init__(self):
        if self.bonding.rows != self.bonding.cols:
            raise DimensionMismatch("bonding matrix must be square")

    @property
    def dimension(self) -> int:
        return self.bonding.rows


@dataclass(frozen=True)
class LimitElement:
    """The image of ``vector`` at the given 1-based level."""

    level: int
    vector: tuple[int, ...]

    def __post_init__(self):
        if self.level < 1:
            raise ValueError("levels are 1-based")


@dataclass(frozen=True)
class LimitKernelWitness:
    """A representative fixed by the bonding data.

    ``power`` applications of the bonding map carry the original vector to
    ``vector``, which satisfies ``(1 - phi) vector == 0`` on the nose and
    represents the same limit element at level ``level``.
    """

    level: int
    vector: tuple[int, ...]
    power: int


def one_minus(phi: IntMatrix) -> IntMatrix:
    return IntMatrix.identity(phi.rows) - phi


def eventual_kernel(system: DirectLimitSystem) -> Lattice:
    """``union_k ker(phi^k)``, which equals ``ker(phi^d)``.

    Kernels of integer matrices are pure subgroups, their ranks ascend and
    are bounded by d, and pure subgroups of equal rank coincide, so the
    chain is stationary from exponent d on.
    """
    phi = system.bonding
    return Lattice(system.dimension, kernel_basis(phi ** system.dimension))


def _check_dimension(system: DirectLimitSystem, element: LimitElement) -> None:
    if len(element.vector) != system.dimension:
        raise DimensionMismatch("element vector length does not match system dimension")


def limit_equal(system: DirectLimitSystem, a: LimitElement, b: LimitElement) -> bool:
    """Equality in the limit: push both to a common level, compare modulo
    the eventual kernel."""
    _check_dimension(system, a)
    _check_dimension(system, b)
    top = max(a.level, b.level)
    phi = system.bonding
    va = (phi ** (top - a.level)).apply(a.vector)
    vb = (phi ** (top - b.level)).apply(b.vector)
    diff = tuple(x - y for x, y in zip(va, vb))
    return eventual_kernel(system).contains(diff)


def in_limit_kernel(system: DirectLimitSystem, element: LimitElement) -> LimitKernelWitness | None:
    """Membership of the element in ``ker(1 - phi)`` taken on the limit.

    The element lies in that kernel exactly when ``(1 - phi) v`` dies under
    some power of ``phi``; pushing ``v`` forward by the first such power
    produces a genuinely fixed representative of the same element.
    """
    _check_dimension(system, element)
    phi = system.bonding
    correction = one_minus(phi)
    if not eventual_kernel(system).contains(correction.apply(element.vector)):
        return None
    vec = element.vector
    for power in range(system.dimension + 1):
        if all(x == 0 for x in correction.apply(vec)):
            witness = LimitKernelWitness(level=element.level + power, vector=vec, power=power)
            return witness
        vec = phi.apply(vec)
    raise AssertionError("fixed representative not found within the stabilisation bound")


def stabilized_preimage(phi: IntMatrix, target: Lattice, *, cap_factor: int = 4) -> Lattice:
    """The union of ``{x : phi^k x in target}`` over all k.

    Requires ``phi(target) <= target`` so that the chain ascends; the chain
    then stabilises because ``Z^d`` is Noetherian.  Stabilisation is
    detected by equality of canonical bases; the iteration cap is a pure
    bug guard and has never been reachable for valid inputs.
    """
    for j in range(target.basis.cols):
        if not target.contains(phi.apply(target.basis.column(j))):
            raise ValueError("target lattice is not invariant under the map")
    current = target
    for _ in range(cap_factor * max(phi.rows, 1) + 1):
        nxt = preimage_lattice(phi, current)
        if nxt == current:
            return current
        current = nxt
    raise ChainNotStabilized("preimage chain did not stabilise within the cap")


def in_limit_image(system: DirectLimitSystem, element: LimitElement) -> bool:
    """Membership of the element in ``im(1 - phi)`` taken on the limit.

    Concretely: does some ``phi^k v`` land in ``im(1 - phi)``.  The chain
    actually stabilises immediately here, because ``phi x in im(1 - phi)``
    already forces ``x = (1 - phi) x + phi x`` into the image; the generic
    chain is still run, both as a cross-check and because the mixed-graph
    variant below genuinely needs it.
    """
    _check_dimension(system, element)
    phi = system.bonding
    image = Lattice.from_columns(system.dimension, one_minus(phi))
    stable = stabilized_preimage(phi, image)
    return stable.contains(element.vector)


def graph_limit_kernel_membership(graph: TwoGraph, element: LimitElement) -> bool:
    """Membership in the kernel of the red map on the blue-bonded limit.

    Decided two independent ways and compared: (i) the red correction of
    the vector dies in the eventual kernel of the blue bonding map;
    (ii) some blue power of the vector is an honest fixed point of the red
    correction.  The two agree by commutation; a mismatch raises.
    """
    a1, a2 = graph.adjacency
    bonding = a1.transpose()
    system = DirectLimitSystem(bonding)
    _check_dimension(system, element)
    correction = one_minus(a2.transpose())
    first = eventual_kernel(system).contains(correction.apply(element.vector))
    second = False
    vec = element.vector
    for _ in range(system.dimension + 1):
        if all(x == 0 for x in correction.apply(vec)):
            second = True
            break
        vec = bonding.apply(vec)
    if first != second:
        raise InternalDisagreement(
            f"kernel characterisations disagree: eventual-kernel={first}, power-scan={second}")
    return first


def graph_limit_image_membership(graph: TwoGraph, element: LimitElement) -> bool:
    """Membership in the image of the red map on the blue-bonded limit.

    The class of the vector dies in the limit of red cokernels exactly when
    some blue power of it lands in the red image; decided with the
    stabilising preimage chain.
    """
    a1, a2 = graph.adjacency
    bonding = a1.transpose()
    system = DirectLimitSystem(bonding)
    _check_dimension(system, element)
    image = Lattice.from_columns(system.dimension, one_minus(a2.transpose()))
    stable = stabilized_preimage(bonding, image)
    return stable.contains(element.vector)
