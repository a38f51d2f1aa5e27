"""Exact rational linear algebra.

Everything here works over :class:`fractions.Fraction`; there are no
tolerances anywhere.  Matrices are dense but multiplication and row
reduction skip zero entries, which keeps the permutation-heavy matrices
used by the rest of the package cheap.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

Rational = Fraction
Vector = tuple  # tuple[Fraction, ...]


class LinAlgError(ValueError):
    pass


def to_rational(x) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def format_rational(q: Fraction) -> str:
    q = to_rational(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def vector(values: Iterable) -> Vector:
    return tuple(to_rational(v) for v in values)


def zero_vector(n: int) -> Vector:
    return (Fraction(0),) * n


def unit_vector(n: int, i: int) -> Vector:
    v = [Fraction(0)] * n
    v[i] = Fraction(1)
    return tuple(v)


def add_vectors(u: Sequence, v: Sequence) -> Vector:
    return tuple(a + b for a, b in zip(u, v))


def scale_vector(c, v: Sequence) -> Vector:
    c = to_rational(c)
    return tuple(c * a for a in v)


def is_zero_vector(v: Sequence) -> bool:
    return all(a == 0 for a in v)


class Matrix:
    """Immutable dense matrix with Fraction entries."""

    __slots__ = ("rows", "cols", "_data", "_hash", "_scols", "_srows")

    def __init__(self, rows: int, cols: int, data: Sequence[Sequence]):
        if len(data) != rows or any(len(r) != cols for r in data):
            raise LinAlgError(f"entries do not form a {rows}x{cols} grid")
        self.rows = rows
        self.cols = cols
        self._data = tuple(tuple(to_rational(x) for x in r) for r in data)
        self._hash = None
        self._scols = None
        self._srows = None

    # -- constructors -------------------------------------------------
    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None) -> "Matrix":
        rows = list(rows)
        if cols is None:
            if not rows:
                raise LinAlgError("column count needed for an empty row list")
            cols = len(rows[0])
        return cls(len(rows), cols, rows)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], rows: int) -> "Matrix":
        columns = list(columns)
        data = [[columns[j][i] for j in range(len(columns))] for i in range(rows)]
        return cls(rows, len(columns), data)

    @classmethod
    def _trusted(cls, rows: int, cols: int, data) -> "Matrix":
        m = object.__new__(cls)
        m.rows = rows
        m.cols = cols
        m._data = data
        m._hash = None
        m._scols = None
        m._srows = None
        return m

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Matrix":
        z = Fraction(0)
        return cls._trusted(rows, cols, tuple((z,) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls._trusted(n, n, tuple(unit_vector(n, i) for i in range(n)))

    @classmethod
    def scalar(cls, n: int, c) -> "Matrix":
        c = to_rational(c)
        return cls._trusted(
            n, n, tuple(tuple(c if i == j else Fraction(0) for j in range(n)) for i in range(n))
        )

    @classmethod
    def from_sparse(cls, rows: int, cols: int, entries) -> "Matrix":
        """Build from an iterable of ``(i, j, value)`` triples (values summed)."""
        acc: dict = {}
        for i, j, val in entries:
            if not isinstance(val, (int, Fraction)) or isinstance(val, bool):
                val = to_rational(val)
            acc[(i, j)] = acc.get((i, j), 0) + val
        zero = Fraction(0)
        data = [[zero] * cols for _ in range(rows)]
        for (i, j), val in acc.items():
            data[i][j] = to_rational(val)
        return cls._trusted(rows, cols, tuple(tuple(r) for r in data))

    @classmethod
    def permutation(cls, perm: Sequence[int]) -> "Matrix":
        """Matrix sending basis vector ``e_j`` to ``e_{perm[j]}``."""
        n = len(perm)
        return cls.from_sparse(n, n, ((perm[j], j, 1) for j in range(n)))

    # -- access -------------------------------------------------------
    def __getitem__(self, key):
        i, j = key
        return self._data[i][j]

    def row(self, i: int) -> Vector:
        return self._data[i]

    def column(self, j: int) -> Vector:
        return tuple(r[j] for r in self._data)

    def columns(self) -> list:
        return [self.column(j) for j in range(self.cols)]

    def tolist(self) -> list:
        return [list(r) for r in self._data]

    @property
    def shape(self) -> tuple:
        return (self.rows, self.cols)

    @property
    def T(self) -> "Matrix":
        return Matrix._trusted(
            self.cols, self.rows, tuple(tuple(r[j] for r in self._data) for j in range(self.cols))
        )

    # -- comparisons --------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self._data == other._data

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.rows, self.cols, self._data))
        return self._hash

    def __repr__(self):
        body = "; ".join(" ".join(format_rational(x) for x in r) for r in self._data)
        return f"Matrix({self.rows}x{self.cols}: [{body}])"

    def is_zero(self) -> bool:
        return all(x == 0 for r in self._data for x in r)

    def is_identity(self) -> bool:
        return self.rows == self.cols and self == Matrix.identity(self.rows)

    # -- arithmetic ---------------------------------------------------
    def _check_same_shape(self, other):
        if self.shape != other.shape:
            raise LinAlgError(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_same_shape(other)
        return Matrix._trusted(
            self.rows,
            self.cols,
            tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self._data, other._data)),
        )

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check_same_shape(other)
        return Matrix._trusted(
            self.rows,
            self.cols,
            tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self._data, other._data)),
        )

    def __neg__(self) -> "Matrix":
        return self.scale(-1)

    def scale(self, c) -> "Matrix":
        c = to_rational(c)
        return Matrix._trusted(self.rows, self.cols, tuple(tuple(c * a for a in r) for r in self._data))

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            return self._matmul(other)
        return self.apply(other)

    def _matmul(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise LinAlgError(f"cannot compose {self.shape} with {other.shape}")
        n = other.cols
        other_rows = other.sparse_rows()
        out = []
        zero = Fraction(0)
        for r in self.sparse_rows():
            acc = [zero] * n
            for k, a in r:
                for j, b in other_rows[k]:
                    acc[j] += a * b
            out.append(tuple(acc))
        return Matrix._trusted(self.rows, n, tuple(out))

    def sparse_rows(self) -> list:
        """Rows as lists of ``(column, nonzero entry)`` (cached)."""
        if self._srows is None:
            self._srows = [[(j, x) for j, x in enumerate(r) if x] for r in self._data]
        return self._srows

    def apply(self, v: Sequence) -> Vector:
        if len(v) != self.cols:
            raise LinAlgError(f"vector of length {len(v)} for {self.shape} matrix")
        if self._scols is None:
            self._scols = [[(i, r[j]) for i, r in enumerate(self._data) if r[j]] for j in range(self.cols)]
        acc = [0] * self.rows
        for k, x in enumerate(v):
            if x:
                x = to_rational(x)
                for i, a in self._scols[k]:
                    acc[i] += a * x
        return tuple(a if isinstance(a, Fraction) else Fraction(a) for a in acc)

    # -- structure ----------------------------------------------------
    def rank(self) -> int:
        return rref(self)[0]

    def kernel(self) -> "Subspace":
        return kernel_basis(self)

    def image(self) -> "Subspace":
        return Subspace.span(self.rows, self.columns())

    def inverse(self) -> "Matrix":
        if self.rows != self.cols:
            raise LinAlgError("only square matrices can be inverted")
        n = self.rows
        aug = Matrix._trusted(
            n, 2 * n, tuple(r + unit_vector(n, i) for i, r in enumerate(self._data))
        )
        rank, red, pivots = rref(aug)
        if rank < n or pivots[n - 1] >= n:
            raise LinAlgError("matrix is singular")
        return Matrix._trusted(n, n, tuple(red.row(i)[n:] for i in range(n)))

    def is_invertible(self) -> bool:
        return self.rows == self.cols and self.rank() == self.rows

    def to_json(self) -> list:
        return [[format_rational(x) for x in r] for r in self._data]

    @classmethod
    def from_json(cls, rows: Sequence[Sequence], cols: int | None = None) -> "Matrix":
        return cls.from_rows(rows, cols)


def hstack(blocks: Sequence[Matrix]) -> Matrix:
    rows = blocks[0].rows
    return Matrix._trusted(
        rows,
        sum(b.cols for b in blocks),
        tuple(tuple(x for b in blocks for x in b.row(i)) for i in range(rows)),
    )


def vstack(blocks: Sequence[Matrix]) -> Matrix:
    cols = blocks[0].cols
    data = tuple(r for b in blocks for r in b._data)
    return Matrix._trusted(len(data), cols, data)


def block_diag(blocks: Sequence[Matrix]) -> Matrix:
    total_c = sum(b.cols for b in blocks)
    data = []
    offset = 0
    for b in blocks:
        pre = (Fraction(0),) * offset
        post = (Fraction(0),) * (total_c - offset - b.cols)
        data.extend(pre + r + post for r in b._data)
        offset += b.cols
    return Matrix._trusted(len(data), total_c, tuple(data))


def kronecker(f: Matrix, g: Matrix) -> Matrix:
    """Tensor product of linear maps, left factor index major."""
    gc = g.cols
    width = f.cols * gc
    zero = Fraction(0)
    gsparse = [[(j, b) for j, b in enumerate(gr) if b] for gr in g._data]
    data = []
    for fr in f._data:
        fnz = [(i, a) for i, a in enumerate(fr) if a]
        for gnz in gsparse:
            row = [zero] * width
            for i, a in fnz:
                base = i * gc
                for j, b in gnz:
                    row[base + j] = a * b
            data.append(tuple(row))
    return Matrix._trusted(f.rows * g.rows, width, tuple(data))


def kron_vectors(u: Sequence, v: Sequence) -> Vector:
    return tuple(a * b for a in u for b in v)


# ---------------------------------------------------------------------------
# Row reduction on sparse rows
# ---------------------------------------------------------------------------


class Eliminator:
    """Incremental reduced row echelon form over sparse rows.

    Rows are dicts ``column -> nonzero Fraction``.  Pivot rows are kept
    fully reduced against each other, so :meth:`reduce` needs one pass.
    """

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.pivots: dict = {}

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, row: dict) -> dict:
        row = dict(row)
        for c in [c for c in row if c in self.pivots]:
            coeff = row.get(c)
            if not coeff:
                continue
            for k, x in self.pivots[c].items():
                val = row.get(k, 0) - coeff * x
                if val:
                    row[k] = val
                else:
                    row.pop(k, None)
        return row

    def add(self, row) -> bool:
        """Insert a row; return True when it increased the rank."""
        if isinstance(row, dict):
            row = {j: x if isinstance(x, Fraction) else to_rational(x) for j, x in row.items() if x}
        else:
            row = {j: to_rational(x) for j, x in enumerate(row) if x}
        row = self.reduce(row)
        if not row:
            return False
        col = min(row)
        inv = 1 / row[col]
        row = {k: x * inv for k, x in row.items()}
        for prow in self.pivots.values():
            coeff = prow.get(col)
            if coeff:
                for k, x in row.items():
                    val = prow.get(k, 0) - coeff * x
                    if val:
                        prow[k] = val
                    else:
                        prow.pop(k, None)
        self.pivots[col] = row
        return True

    def contains(self, row) -> bool:
        if not isinstance(row, dict):
            row = {j: to_rational(x) for j, x in enumerate(row) if x}
        return not self.reduce(row)

    def pivot_columns(self) -> list:
        return sorted(self.pivots)

    def reduced_rows(self) -> list:
        out = []
        for c in sorted(self.pivots):
            r = self.pivots[c]
            out.append(tuple(r.get(j, Fraction(0)) for j in range(self.ncols)))
        return out

    def nullspace(self) -> list:
        free = [j for j in range(self.ncols) if j not in self.pivots]
        basis = []
        for f in free:
            v = [Fraction(0)] * self.ncols
            v[f] = Fraction(1)
            for c, r in self.pivots.items():
                x = r.get(f)
                if x:
                    v[c] = -x
            basis.append(tuple(v))
        return basis


def rref(m: Matrix) -> tuple:
    """Return ``(rank, reduced, pivot_columns)`` for ``m``."""
    el = Eliminator(m.cols)
    for r in m._data:
        el.add(r)
    rows = el.reduced_rows()
    rows += [zero_vector(m.cols)] * (m.rows - len(rows))
    return el.rank, Matrix._trusted(m.rows, m.cols, tuple(rows)), el.pivot_columns()


def nullspace_of_rows(rows: Iterable[dict], ncols: int) -> list:
    """Basis of the common kernel of sparse linear forms."""
    el = Eliminator(ncols)
    for r in rows:
        el.add(r)
    return el.nullspace()


def kernel_basis(m: Matrix) -> "Subspace":
    el = Eliminator(m.cols)
    for r in m._data:
        el.add(r)
    return Subspace(m.cols, el.nullspace())


def solve(m: Matrix, b: Sequence):
    """One solution ``x`` of ``m x = b``, or None when inconsistent."""
    aug = hstack([m, Matrix.from_columns([vector(b)], m.rows)])
    el = Eliminator(m.cols + 1)
    for r in aug._data:
        el.add(r)
    if m.cols in el.pivots:
        return None
    x = [Fraction(0)] * m.cols
    for c, r in el.pivots.items():
        x[c] = r.get(m.cols, Fraction(0))
    return tuple(x)


# ---------------------------------------------------------------------------
# Subspaces and quotients
# ---------------------------------------------------------------------------


class Subspace:
    """A subspace of Q^n stored by its unique reduced echelon basis."""

    __slots__ = ("ambient_dim", "basis", "_el")

    def __init__(self, ambient_dim: int, vectors: Iterable[Sequence] = ()):
        el = Eliminator(ambient_dim)
        for v in vectors:
            if len(v) != ambient_dim:
                raise LinAlgError("vector length does not match ambient dimension")
            el.add(v)
        self.ambient_dim = ambient_dim
        self._el = el
        self.basis = tuple(el.reduced_rows())

    @classmethod
    def span(cls, ambient_dim: int, vectors: Iterable[Sequence]) -> "Subspace":
        return cls(ambient_dim, vectors)

    @classmethod
    def full(cls, n: int) -> "Subspace":
        return cls(n, [unit_vector(n, i) for i in range(n)])

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def pivots(self) -> list:
        return self._el.pivot_columns()

    def contains(self, v: Sequence) -> bool:
        return self._el.contains(v)

    def contains_subspace(self, other: "Subspace") -> bool:
        return all(self.contains(v) for v in other.basis)

    def coordinates(self, v: Sequence) -> Vector:
        """Coordinates of ``v`` in :attr:`basis` (``v`` must lie in the span)."""
        if not self.contains(v):
            raise LinAlgError("vector is not in the subspace")
        return tuple(to_rational(v[p]) for p in self.pivots)

    def basis_matrix(self) -> Matrix:
        """Columns are the basis vectors (ambient x dim)."""
        return Matrix.from_columns(list(self.basis), self.ambient_dim)

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and self.basis == other.basis

    def __hash__(self):
        return hash((self.ambient_dim, self.basis))

    def __add__(self, other: "Subspace") -> "Subspace":
        return Subspace(self.ambient_dim, list(self.basis) + list(other.basis))

    def intersection(self, other: "Subspace") -> "Subspace":
        if self.dim == 0 or other.dim == 0:
            return Subspace(self.ambient_dim)
        # solve sum a_i u_i - sum b_j w_j = 0
        cols = list(self.basis) + [scale_vector(-1, w) for w in other.basis]
        m = Matrix.from_columns(cols, self.ambient_dim)
        vecs = []
        for sol in m.kernel().basis:
            a = sol[: self.dim]
            vecs.append(self.basis_matrix().apply(a))
        return Subspace(self.ambient_dim, vecs)

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim})"


def quotient(ambient_dim: int, sub: Subspace) -> tuple:
    """Quotient ``Q^n / sub`` as ``(dim, projection, section)``.

    The complement is spanned by the standard basis vectors at non-pivot
    columns of ``sub``; ``projection @ section`` is the identity.
    """
    if sub.ambient_dim != ambient_dim:
        raise LinAlgError("subspace lives in a different ambient space")
    pivots = set(sub.pivots)
    free = [j for j in range(ambient_dim) if j not in pivots]
    pos = {j: k for k, j in enumerate(free)}
    qdim = len(free)
    entries = []
    for col in range(ambient_dim):
        red = sub._el.reduce({col: Fraction(1)})
        for j, x in red.items():
            entries.append((pos[j], col, x))
    projection = Matrix.from_sparse(qdim, ambient_dim, entries)
    section = Matrix.from_sparse(ambient_dim, qdim, ((j, k, 1) for k, j in enumerate(free)))
    return qdim, projection, section


def intertwiner_rows(pairs: Iterable[tuple], out_dim: int, in_dim: int, offset_x: int = 0) -> list:
    """Sparse linear forms cutting out ``{X : X P = Q X}`` for each ``(P, Q)``.

    ``X`` is ``out_dim x in_dim`` and flattened row-major starting at
    ``offset_x``; ``P`` acts on the source, ``Q`` on the target.
    """
    rows = []
    for p, q in pairs:
        p_cols = [[(s, p[s, c]) for s in range(in_dim) if p[s, c]] for c in range(in_dim)]
        q_rows = [[(s, q[r, s]) for s in range(out_dim) if q[r, s]] for r in range(out_dim)]
        for r in range(out_dim):
            for c in range(in_dim):
                row: dict = {}
                for s, x in p_cols[c]:
                    k = offset_x + r * in_dim + s
                    row[k] = row.get(k, 0) + x
                for s, x in q_rows[r]:
                    k = offset_x + s * in_dim + c
                    row[k] = row.get(k, 0) - x
                row = {k: x for k, x in row.items() if x}
                if row:
                    rows.append(row)
    return rows


def unflatten(v: Sequence, rows: int, cols: int, offset: int = 0) -> Matrix:
    return Matrix._trusted(
        rows,
        cols,
        tuple(tuple(to_rational(v[offset + r * cols + c]) for c in range(cols)) for r in range(rows)),
    )


def intertwiners(pairs: Iterable[tuple], out_dim: int, in_dim: int) -> list:
    """Basis of ``{X : X P = Q X for all (P, Q)}`` as matrices."""
    sols = nullspace_of_rows(intertwiner_rows(pairs, out_dim, in_dim), out_dim * in_dim)
    return [unflatten(v, out_dim, in_dim) for v in sols]
