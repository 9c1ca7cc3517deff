"""Exact rational feasibility.

A small phase-one simplex over ``fractions.Fraction`` decides whether a
system of linear equalities and inequalities has a rational solution, and
returns one when it does.  Bland's rule makes the pivoting deterministic
and cycle-free, so identical inputs always produce identical witnesses.

On top of the solver sit the two feasibility questions this package
actually cares about: does an integer lattice meet the nonnegative orthant
away from zero, and does a graph carry a strictly positive vector fixed by
both adjacency matrices (a faithful graph trace).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .graphs import TwoGraph
from .intlin import IntMatrix, Lattice

GE = ">="
EQ = "=="

_BOX_LIMIT = 2_000_000


class BoxTooLarge(ValueError):
    """The requested enumeration box has too many points."""


@dataclass(frozen=True)
class LinearConstraint:
    coefficients: tuple[Fraction, ...]
    relation: str
    rhs: Fraction

    def holds_for(self, x: Sequence[Fraction]) -> bool:
        value = sum(c * v for c, v in zip(self.coefficients, x))
        return value == self.rhs if self.relation == EQ else value >= self.rhs


@dataclass(frozen=True)
class RatLP:
    """Feasibility problem over free rational variables."""

    n_vars: int
    constraints: tuple[LinearConstraint, ...]

    @classmethod
    def build(cls, n_vars: int, rows: Iterable[tuple[Sequence[int | Fraction], str, int | Fraction]]) -> "RatLP":
        constraints = []
        for coeffs, relation, rhs in rows:
            if relation not in (GE, EQ):
                raise ValueError(f"unknown relation {relation!r}")
            if len(coeffs) != n_vars:
                raise ValueError("constraint width does not match variable count")
            constraints.append(LinearConstraint(
                tuple(Fraction(c) for c in coeffs), relation, Fraction(rhs)))
        return cls(n_vars, tuple(constraints))


def exact_lp_feasible(lp: RatLP) -> tuple[Fraction, ...] | None:
    """A rational point satisfying every constraint, or None.

    Phase-one simplex: free variables are split into differences of
    nonnegative ones, surplus variables close the inequalities, and the sum
    of artificial variables is minimised.  Feasible exactly when that
    minimum is zero.  Entering variable: lowest index with positive reduced
    profit; leaving variable: lowest basis index among minimal ratios.
    """
    m = len(lp.constraints)
    n = lp.n_vars
    n_ge = sum(1 for c in lp.constraints if c.relation == GE)
    ncols = 2 * n + n_ge + m

    tableau: list[list[Fraction]] = []
    basis: list[int] = []
    zero = Fraction(0)
    surplus_at = 2 * n
    art_at = 2 * n + n_ge
    ge_seen = 0
    for i, con in enumerate(lp.constraints):
        row = [zero] * (ncols + 1)
        for j, c in enumerate(con.coefficients):
            row[j] = c
            row[n + j] = -c
        if con.relation == GE:
            row[surplus_at + ge_seen] = Fraction(-1)
            ge_seen += 1
        row[ncols] = con.rhs
        if row[ncols] < 0:
            row = [-v for v in row]
        row[art_at + i] = Fraction(1)
        tableau.append(row)
        basis.append(art_at + i)

    obj = [zero] * (ncols + 1)
    for row in tableau:
        for j in range(ncols + 1):
            obj[j] += row[j]
    for i in range(m):
        obj[art_at + i] -= 1

    while True:
        entering = next((j for j in range(ncols) if obj[j] > 0), None)
        if entering is None:
            break
        best_ratio = None
        leaving = None
        for i in range(m):
            coeff = tableau[i][entering]
            if coeff > 0:
                ratio = tableau[i][ncols] / coeff
                if (best_ratio is None or ratio < best_ratio
                        or (ratio == best_ratio and basis[i] < basis[leaving])):
                    best_ratio = ratio
                    leaving = i
        if leaving is None:
            raise RuntimeError("phase-one objective unbounded; this cannot happen")
        pivot = tableau[leaving][entering]
        tableau[leaving] = [v / pivot for v in tableau[leaving]]
        for i in range(m):
            if i != leaving and tableau[i][entering]:
                f = tableau[i][entering]
                tableau[i] = [v - f * p for v, p in zip(tableau[i], tableau[leaving])]
        if obj[entering]:
            f = obj[entering]
            obj = [v - f * p for v, p in zip(obj, tableau[leaving])]
        basis[leaving] = entering

    if obj[ncols] != 0:
        return None

    values = [zero] * ncols
    for i in range(m):
        values[basis[i]] = tableau[i][ncols]
    x = tuple(values[j] - values[n + j] for j in range(n))
    for con in lp.constraints:
        if not con.holds_for(x):
            raise AssertionError("simplex returned an infeasible point")
    return x


@dataclass(frozen=True)
class OrthantWitness:
    """A nonzero nonnegative vector in a column lattice, with coefficients.

    ``vector == B @ coefficients`` exactly, ``vector >= 0`` and not all
    zero.
    """

    vector: tuple[int, ...]
    coefficients: tuple[int, ...]


def _scale_to_integers(x: Sequence[Fraction]) -> tuple[int, ...]:
    denom = 1
    for v in x:
        denom = denom * v.denominator // math.gcd(denom, v.denominator)
    return tuple(int(v * denom) for v in x)


def lattice_meets_orthant(b: IntMatrix) -> OrthantWitness | None:
    """Decide whether the column lattice of ``b`` meets ``N^d`` nontrivially.

    One rational feasibility problem per coordinate: ask for ``b @ z >= 0``
    with the chosen coordinate at least 1.  A rational solution scales by a
    common denominator to an integer one because the system is homogeneous
    up to that single threshold, and conversely any integer witness is a
    rational witness, so the d small programs decide the lattice question
    exactly.  The first coordinate (in order) that admits a witness is the
    one reported.
    """
    d, r = b.rows, b.cols
    if r == 0 or d == 0:
        return None
    for i in range(d):
        rows: list[tuple[Sequence[int], str, int]] = []
        for j in range(d):
            rows.append((b.row(j), GE, 1 if j == i else 0))
        solution = exact_lp_feasible(RatLP.build(r, rows))
        if solution is not None:
            z = _scale_to_integers(solution)
            x = b.apply(z)
            if any(v < 0 for v in x) or all(v == 0 for v in x) or x[i] < 1:
                raise AssertionError("scaled witness failed verification")
            return OrthantWitness(vector=x, coefficients=z)
    return None


def bounded_orthant_oracle(b: IntMatrix, radius: int) -> OrthantWitness | None:
    """Brute-force version of :func:`lattice_meets_orthant`.

    Enumerates every ``x`` in ``N^d`` with ``0 < max(x) <= radius`` and
    tests lattice membership.  Sound always; complete only within the box,
    which is what makes it useful as an independent test oracle.
    """
    if radius < 1:
        raise ValueError("radius must be positive")
    d = b.rows
    if (radius + 1) ** d - 1 > _BOX_LIMIT:
        raise BoxTooLarge(f"box (radius {radius})^{d} exceeds enumeration limit")
    lattice = Lattice.from_columns(d, b)
    for x in itertools.product(range(radius + 1), repeat=d):
        if not any(x):
            continue
        coeffs = lattice.membership(x)
        if coeffs is not None:
            z = _expand_coefficients(b, lattice, coeffs)
            return OrthantWitness(vector=tuple(x), coefficients=z)
    return None


def _expand_coefficients(b: IntMatrix, lattice: Lattice, coeffs: Sequence[int]) -> tuple[int, ...]:
    """Rewrite Hermite-basis coefficients in terms of the original columns."""
    target = lattice.basis.apply(coeffs)
    # Solve b @ z == target by reusing the Hermite transform of b itself.
    from .intlin import hnf

    h, u = hnf(b)
    inner = Lattice(b.rows, h).membership(target)
    if inner is None:
        raise AssertionError("membership witness vanished on re-solve")
    z = [0] * b.cols
    for k, c in enumerate(inner):
        if c:
            col = u.column(k)
            for idx in range(b.cols):
                z[idx] += c * col[idx]
    if b.apply(z) != tuple(target):
        raise AssertionError("coefficient expansion failed verification")
    return tuple(z)


@dataclass(frozen=True)
class GraphTrace:
    """Strictly positive rational vertex weights fixed by both colours."""

    values: tuple[Fraction, ...]
    vertices: tuple[str, ...]

    def __getitem__(self, vertex: str) -> Fraction:
        return self.values[self.vertices.index(vertex)]

    def as_dict(self) -> dict[str, Fraction]:
        return dict(zip(self.vertices, self.values))


def faithful_graph_trace(graph: TwoGraph) -> GraphTrace | None:
    """A faithful graph trace, normalised so every weight is at least 1.

    The defining equations say the weight of a vertex equals the weighted
    count of its incoming edges of either single colour.  The system is
    homogeneous, so strict positivity can be encoded as ``weight >= 1``
    without losing any solutions.
    """
    d = len(graph.vertices)
    rows: list[tuple[Sequence[int], str, int]] = []
    for adj in graph.adjacency:
        for i in range(d):
            coeffs = [(1 if i == j else 0) - adj[i, j] for j in range(d)]
            rows.append((coeffs, EQ, 0))
    for i in range(d):
        rows.append(([1 if i == j else 0 for j in range(d)], GE, 1))
    solution = exact_lp_feasible(RatLP.build(d, rows))
    if solution is None:
        return None
    for adj in graph.adjacency:
        for i in range(d):
            if solution[i] != sum(Fraction(adj[i, j]) * solution[j] for j in range(d)):
                raise AssertionError("trace verification failed")
    if any(v < 1 for v in solution):
        raise AssertionError("trace positivity failed")
    return GraphTrace(values=tuple(solution), vertices=graph.vertices)
