"""Exact integer linear algebra.

Normal forms (Hermite, Smith) with full transform bookkeeping, integer
lattices with canonical bases and membership witnesses, and presentations
of finitely generated abelian groups as cokernels.  Everything runs over
Python's arbitrary-precision integers; nothing here ever rounds.

Conventions are pinned so that outputs are reproducible byte for byte:

* ``hnf`` is column style: the basis is lower triangular in echelon form
  with positive pivots, entries to the left of each pivot reduced into
  ``[0, pivot)``, and zero columns trimmed.
* ``snf`` picks the smallest nonzero entry in absolute value as pivot,
  breaking ties by row index then column index.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence


class DimensionMismatch(ValueError):
    """Operands have incompatible shapes."""


class NotWellDefined(ValueError):
    """A map does not descend to the requested quotient presentation."""


@dataclass(frozen=True)
class IntMatrix:
    """Immutable dense integer matrix.

    ``entries`` is a tuple of row tuples.  Zero-row and zero-column
    matrices are legal; they show up naturally as empty kernels and empty
    generating sets.
    """

    rows: int
    cols: int
    entries: tuple[tuple[int, ...], ...]

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[int]], cols: int | None = None) -> "IntMatrix":
        data = tuple(tuple(int(x) for x in row) for row in rows)
        if data:
            width = len(data[0])
            if any(len(row) != width for row in data):
                raise DimensionMismatch("ragged rows")
        else:
            width = 0 if cols is None else cols
        if cols is not None and data and width != cols:
            raise DimensionMismatch(f"expected {cols} columns, found {width}")
        return cls(len(data), width, data)

    @classmethod
    def from_columns(cls, rows: int, columns: Sequence[Sequence[int]]) -> "IntMatrix":
        for col in columns:
            if len(col) != rows:
                raise DimensionMismatch("column length does not match row count")
        data = tuple(tuple(int(col[i]) for col in columns) for i in range(rows))
        return cls(rows, len(columns), data)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, tuple(tuple(0 for _ in range(cols)) for _ in range(rows)))

    def __getitem__(self, key: tuple[int, int]) -> int:
        i, j = key
        return self.entries[i][j]

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i]

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(row[j] for row in self.entries)

    def columns(self) -> list[tuple[int, ...]]:
        return [self.column(j) for j in range(self.cols)]

    @property
    def is_zero(self) -> bool:
        return all(x == 0 for row in self.entries for x in row)

    def transpose(self) -> "IntMatrix":
        return IntMatrix(self.cols, self.rows, tuple(zip(*self.entries)) if self.entries and self.cols else tuple(() for _ in range(self.cols)))

    def __neg__(self) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols, tuple(tuple(-x for x in row) for row in self.entries))

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionMismatch("addition shape mismatch")
        return IntMatrix(self.rows, self.cols, tuple(
            tuple(a + b for a, b in zip(ra, rb)) for ra, rb in zip(self.entries, other.entries)))

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        return self + (-other)

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise DimensionMismatch(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        ot = list(zip(*other.entries)) if other.entries and other.cols else [() for _ in range(other.cols)]
        data = tuple(
            tuple(sum(a * b for a, b in zip(row, col)) for col in ot)
            for row in self.entries)
        return IntMatrix(self.rows, other.cols, data)

    def apply(self, vec: Sequence[int]) -> tuple[int, ...]:
        if len(vec) != self.cols:
            raise DimensionMismatch("vector length does not match column count")
        return tuple(sum(a * b for a, b in zip(row, vec)) for row in self.entries)

    def __pow__(self, k: int) -> "IntMatrix":
        if self.rows != self.cols:
            raise DimensionMismatch("powers need a square matrix")
        if k < 0:
            raise ValueError("negative power")
        out = IntMatrix.identity(self.rows)
        base = self
        while k:
            if k & 1:
                out = out @ base
            base = base @ base
            k >>= 1
        return out


def hstack(*mats: IntMatrix) -> IntMatrix:
    if not mats:
        raise ValueError("nothing to stack")
    rows = mats[0].rows
    if any(m.rows != rows for m in mats):
        raise DimensionMismatch("hstack row mismatch")
    data = tuple(tuple(itertools.chain.from_iterable(m.entries[i] for m in mats)) for i in range(rows))
    return IntMatrix(rows, sum(m.cols for m in mats), data)


def vstack(*mats: IntMatrix) -> IntMatrix:
    if not mats:
        raise ValueError("nothing to stack")
    cols = mats[0].cols
    if any(m.cols != cols for m in mats):
        raise DimensionMismatch("vstack column mismatch")
    data = tuple(itertools.chain.from_iterable(m.entries for m in mats))
    return IntMatrix(sum(m.rows for m in mats), cols, data)


def det(m: IntMatrix) -> int:
    """Exact signed determinant (fraction-free Bareiss elimination)."""
    if m.rows != m.cols:
        raise DimensionMismatch("determinant of a non-square matrix")
    n = m.rows
    if n == 0:
        return 1
    a = [list(row) for row in m.entries]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def _min_abs_position(a: list[list[int]], t: int, rows: int, cols: int) -> tuple[int, int] | None:
    best = None
    pos = None
    for i in range(t, rows):
        for j in range(t, cols):
            v = a[i][j]
            if v:
                v = abs(v)
                if best is None or v < best:
                    best, pos = v, (i, j)
    return pos


@dataclass(frozen=True)
class SmithNormalForm:
    """Decomposition ``U @ matrix @ V == diagonal`` with unimodular U, V.

    ``U_inv`` and ``V_inv`` are exact integer inverses, maintained during
    elimination so that quotient presentations can pull generators back to
    the ambient lattice without solving anything.
    """

    U: IntMatrix
    D: IntMatrix
    V: IntMatrix
    U_inv: IntMatrix
    V_inv: IntMatrix

    @property
    def diagonal(self) -> tuple[int, ...]:
        return tuple(self.D[i, i] for i in range(min(self.D.rows, self.D.cols)))

    @property
    def invariant_factors(self) -> tuple[int, ...]:
        return tuple(x for x in self.diagonal if x != 0)


def snf(m: IntMatrix) -> SmithNormalForm:
    """Smith normal form with deterministic pivoting.

    The pivot is always the smallest nonzero entry in absolute value of the
    remaining block (ties broken by row, then column), which keeps entry
    growth modest and makes the output reproducible.
    """
    d, r = m.rows, m.cols
    a = [list(row) for row in m.entries]
    u = [[1 if i == j else 0 for j in range(d)] for i in range(d)]
    u_inv = [[1 if i == j else 0 for j in range(d)] for i in range(d)]
    v = [[1 if i == j else 0 for j in range(r)] for i in range(r)]
    v_inv = [[1 if i == j else 0 for j in range(r)] for i in range(r)]

    def row_swap(i, k):
        a[i], a[k] = a[k], a[i]
        u[i], u[k] = u[k], u[i]
        for row in u_inv:
            row[i], row[k] = row[k], row[i]

    def row_negate(i):
        a[i] = [-x for x in a[i]]
        u[i] = [-x for x in u[i]]
        for row in u_inv:
            row[i] = -row[i]

    def row_addmul(i, k, c):
        # row i += c * row k
        a[i] = [x + c * y for x, y in zip(a[i], a[k])]
        u[i] = [x + c * y for x, y in zip(u[i], u[k])]
        for row in u_inv:
            row[k] -= c * row[i]

    def col_swap(j, l):
        for row in a:
            row[j], row[l] = row[l], row[j]
        for row in v:
            row[j], row[l] = row[l], row[j]
        v_inv[j], v_inv[l] = v_inv[l], v_inv[j]

    def col_addmul(j, l, c):
        # col j += c * col l
        for row in a:
            row[j] += c * row[l]
        for row in v:
            row[j] += c * row[l]
        v_inv[l] = [x - c * y for x, y in zip(v_inv[l], v_inv[j])]

    t = 0
    while True:
        pos = _min_abs_position(a, t, d, r)
        if pos is None:
            break
        pi, pj = pos
        if pi != t:
            row_swap(t, pi)
        if pj != t:
            col_swap(t, pj)
        if a[t][t] < 0:
            row_negate(t)
        pivot = a[t][t]
        dirty = False
        for i in range(t + 1, d):
            if a[i][t]:
                q = a[i][t] // pivot
                if q:
                    row_addmul(i, t, -q)
                if a[i][t]:
                    dirty = True
        if dirty:
            continue
        for j in range(t + 1, r):
            if a[t][j]:
                q = a[t][j] // pivot
                if q:
                    col_addmul(j, t, -q)
                if a[t][j]:
                    dirty = True
        if dirty:
            continue
        bad_row = None
        for i in range(t + 1, d):
            if any(a[i][j] % pivot for j in range(t + 1, r)):
                bad_row = i
                break
        if bad_row is not None:
            row_addmul(t, bad_row, 1)
            continue
        t += 1

    U = IntMatrix.from_rows(u, cols=d)
    D = IntMatrix.from_rows(a, cols=r)
    V = IntMatrix.from_rows(v, cols=r)
    return SmithNormalForm(U, D, V, IntMatrix.from_rows(u_inv, cols=d), IntMatrix.from_rows(v_inv, cols=r))


def hnf(m: IntMatrix) -> tuple[IntMatrix, IntMatrix]:
    """Column Hermite normal form.

    Returns ``(H, U)`` with ``U`` unimodular and ``m @ U`` equal to ``H``
    padded with zero columns on the right; ``H`` itself carries only the
    nonzero columns, so it is the canonical basis of the column lattice.
    """
    d, r = m.rows, m.cols
    a = [list(row) for row in m.entries]
    u = [[1 if i == j else 0 for j in range(r)] for i in range(r)]

    def col_swap(j, l):
        for row in a:
            row[j], row[l] = row[l], row[j]
        for row in u:
            row[j], row[l] = row[l], row[j]

    def col_negate(j):
        for row in a:
            row[j] = -row[j]
        for row in u:
            row[j] = -row[j]

    def col_addmul(j, l, c):
        for row in a:
            row[j] += c * row[l]
        for row in u:
            row[j] += c * row[l]

    c = 0
    for i in range(d):
        if c >= r:
            break
        while True:
            nz = [j for j in range(c, r) if a[i][j]]
            if len(nz) <= 1:
                break
            j0 = min(nz, key=lambda j: (abs(a[i][j]), j))
            for j in nz:
                if j != j0:
                    q = a[i][j] // a[i][j0]
                    if q:
                        col_addmul(j, j0, -q)
        nz = [j for j in range(c, r) if a[i][j]]
        if not nz:
            continue
        j0 = nz[0]
        if j0 != c:
            col_swap(c, j0)
        if a[i][c] < 0:
            col_negate(c)
        for j in range(c):
            q = a[i][j] // a[i][c]
            if q:
                col_addmul(j, c, -q)
        c += 1

    H = IntMatrix.from_rows([row[:c] for row in a], cols=c)
    U = IntMatrix.from_rows(u, cols=r)
    return H, U


def kernel_basis(m: IntMatrix) -> IntMatrix:
    """Canonical basis of the integer kernel ``{x : m @ x == 0}``.

    The kernel of an integer matrix is a pure subgroup, so the columns of
    the column transform beyond the lattice rank form a basis; they are
    then re-normalised to Hermite form for reproducibility.
    """
    if m.cols == 0:
        return IntMatrix.zeros(0, 0)
    h, u = hnf(m)
    rank = h.cols
    cols = [u.column(j) for j in range(rank, m.cols)]
    raw = IntMatrix.from_columns(m.cols, cols)
    if cols and not (m @ raw).is_zero:
        raise AssertionError("kernel extraction produced a non-kernel vector")
    basis, _ = hnf(raw)
    return basis


class Lattice:
    """Subgroup of ``Z^d`` with a canonical (Hermite) basis.

    Two lattices are equal exactly when their ambient dimensions and
    canonical bases coincide, so equality of subgroups is literal equality
    here.
    """

    __slots__ = ("ambient_dim", "basis", "_pivots")

    def __init__(self, ambient_dim: int, basis: IntMatrix):
        if basis.rows != ambient_dim:
            raise DimensionMismatch("basis rows must equal ambient dimension")
        self.ambient_dim = ambient_dim
        self.basis = basis
        pivots = []
        for j in range(basis.cols):
            col = basis.column(j)
            row = next((i for i, x in enumerate(col) if x), None)
            if row is None:
                raise ValueError("zero column in lattice basis")
            pivots.append(row)
        self._pivots = tuple(pivots)

    @classmethod
    def from_columns(cls, ambient_dim: int, generators: IntMatrix) -> "Lattice":
        if generators.rows != ambient_dim:
            raise DimensionMismatch("generator rows must equal ambient dimension")
        basis, _ = hnf(generators)
        return cls(ambient_dim, basis)

    @classmethod
    def zero(cls, ambient_dim: int) -> "Lattice":
        return cls(ambient_dim, IntMatrix.zeros(ambient_dim, 0))

    @property
    def rank(self) -> int:
        return self.basis.cols

    def membership(self, x: Sequence[int]) -> tuple[int, ...] | None:
        """Coefficients ``z`` with ``basis @ z == x``, or None."""
        if len(x) != self.ambient_dim:
            raise DimensionMismatch("vector length does not match ambient dimension")
        work = list(x)
        coeffs = []
        for j in range(self.basis.cols):
            p = self._pivots[j]
            pivot = self.basis[p, j]
            if work[p] % pivot:
                return None
            z = work[p] // pivot
            coeffs.append(z)
            if z:
                col = self.basis.column(j)
                for i in range(p, self.ambient_dim):
                    work[i] -= z * col[i]
        if any(work):
            return None
        return tuple(coeffs)

    def contains(self, x: Sequence[int]) -> bool:
        return self.membership(x) is not None

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, Lattice)
                and self.ambient_dim == other.ambient_dim
                and self.basis == other.basis)

    def __hash__(self) -> int:
        return hash((self.ambient_dim, self.basis))

    def __repr__(self) -> str:
        return f"Lattice(dim={self.ambient_dim}, rank={self.rank})"


def preimage_lattice(phi: IntMatrix, lat: Lattice) -> Lattice:
    """The lattice ``{x : phi @ x in lat}``.

    Solved by intersecting the graph of ``phi`` with ``lat``: the kernel of
    ``[phi | -basis]`` projects onto exactly the preimage.
    """
    if phi.rows != lat.ambient_dim:
        raise DimensionMismatch("map codomain does not match lattice ambient dimension")
    a = phi.cols
    if lat.rank == 0:
        return Lattice.from_columns(a, kernel_basis(phi))
    stacked = hstack(phi, -lat.basis)
    ker = kernel_basis(stacked)
    top = IntMatrix.from_rows([ker.entries[i] for i in range(a)], cols=ker.cols)
    return Lattice.from_columns(a, top)


@dataclass(frozen=True)
class FgAbGroup:
    """Finitely generated abelian group presented as ``Z^d / relations``.

    Coordinates list the free generators first, then the torsion generators
    in invariant-factor order.  ``to_coords`` kills exactly the relation
    lattice, which is the property everything downstream relies on.
    """

    ambient_dim: int
    free_rank: int
    torsion: tuple[int, ...]
    relations: Lattice
    _transform: IntMatrix = field(repr=False)
    _transform_inv: IntMatrix = field(repr=False)
    _free_rows: tuple[int, ...] = field(repr=False)
    _torsion_rows: tuple[int, ...] = field(repr=False)

    @property
    def n_generators(self) -> int:
        return self.free_rank + len(self.torsion)

    @property
    def generator_orders(self) -> tuple[int, ...]:
        return (0,) * self.free_rank + self.torsion

    @property
    def invariants(self) -> tuple[int, tuple[int, ...]]:
        return (self.free_rank, self.torsion)

    @property
    def is_trivial(self) -> bool:
        return self.n_generators == 0

    def to_coords(self, x: Sequence[int]) -> tuple[int, ...]:
        if len(x) != self.ambient_dim:
            raise DimensionMismatch("vector length does not match ambient dimension")
        y = self._transform.apply(x)
        free = [y[i] for i in self._free_rows]
        tors = [y[i] % d for i, d in zip(self._torsion_rows, self.torsion)]
        return tuple(free + tors)

    def generators(self) -> list[tuple[int, ...]]:
        """Ambient representatives of the generators, matching coords order."""
        reps = []
        for i in self._free_rows + self._torsion_rows:
            reps.append(self._transform_inv.column(i))
        return reps

    def reduce(self, coords: Sequence[int]) -> tuple[int, ...]:
        if len(coords) != self.n_generators:
            raise DimensionMismatch("coordinate length does not match generator count")
        out = list(coords)
        for k, order in enumerate(self.generator_orders):
            if order:
                out[k] %= order
        return tuple(out)

    def __str__(self) -> str:
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts.extend(f"Z/{d}" for d in self.torsion)
        return " x ".join(parts) if parts else "0"


def coker_presentation(m: IntMatrix) -> FgAbGroup:
    """Present ``Z^rows / columnspace(m)`` via the Smith normal form."""
    form = snf(m)
    d = m.rows
    diag = form.diagonal
    torsion_rows = tuple(i for i, v in enumerate(diag) if abs(v) >= 2)
    free_rows = tuple(i for i, v in enumerate(diag) if v == 0) + tuple(range(len(diag), d))
    torsion = tuple(abs(diag[i]) for i in torsion_rows)
    return FgAbGroup(
        ambient_dim=d,
        free_rank=len(free_rows),
        torsion=torsion,
        relations=Lattice.from_columns(d, m),
        _transform=form.U,
        _transform_inv=form.U_inv,
        _free_rows=free_rows,
        _torsion_rows=torsion_rows,
    )


@dataclass(frozen=True)
class InducedHom:
    """Homomorphism between two presented groups, stored on generators.

    ``columns[j]`` is the image of the j-th generator of ``src`` written in
    the coordinates of ``dst``.
    """

    src: FgAbGroup
    dst: FgAbGroup
    columns: tuple[tuple[int, ...], ...]

    def apply(self, coords: Sequence[int]) -> tuple[int, ...]:
        if len(coords) != self.src.n_generators:
            raise DimensionMismatch("coordinate length does not match source generators")
        out = [0] * self.dst.n_generators
        for c, col in zip(coords, self.columns):
            for k, v in enumerate(col):
                out[k] += c * v
        return self.dst.reduce(out)

    def compose(self, inner: "InducedHom") -> "InducedHom":
        """``self`` after ``inner``."""
        if inner.dst is not self.src and inner.dst.invariants != self.src.invariants:
            raise DimensionMismatch("composition endpoint mismatch")
        cols = tuple(self.apply(col) for col in inner.columns)
        return InducedHom(inner.src, self.dst, cols)

    @property
    def is_zero(self) -> bool:
        return all(all(v == 0 for v in col) for col in self.columns)


def induced_map(f: IntMatrix, src: FgAbGroup, dst: FgAbGroup) -> InducedHom:
    """The map on presentations induced by an ambient matrix.

    Raises NotWellDefined unless ``f`` carries the relation lattice of the
    source into the relation lattice of the destination; checking a basis
    of the source relations suffices because ``f`` is additive.
    """
    if f.cols != src.ambient_dim or f.rows != dst.ambient_dim:
        raise DimensionMismatch("matrix shape does not match ambient dimensions")
    for j in range(src.relations.basis.cols):
        image = f.apply(src.relations.basis.column(j))
        if not dst.relations.contains(image):
            raise NotWellDefined("relations are not carried into destination relations")
    cols = tuple(dst.to_coords(f.apply(rep)) for rep in src.generators())
    return InducedHom(src, dst, cols)


def identity_hom(group: FgAbGroup) -> InducedHom:
    cols = []
    n = group.n_generators
    for j in range(n):
        cols.append(tuple(1 if k == j else 0 for k in range(n)))
    return InducedHom(group, group, tuple(cols))
