"""Finite-dimensional algebras over the rationals and their modules.

Algebras are stored by sparse structure constants ``e_i e_j = sum_k m_ij^k e_k``.
Right modules store one matrix per basis element, ``v . e_j = R_j v``.
Presented algebras (generators, rewrite rules, degree bound) carry the
colimits that have no finite-dimensional closed form.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .exactlin import (
    Eliminator,
    LinAlgError,
    Matrix,
    Subspace,
    format_rational,
    intertwiners,
    kronecker,
    quotient,
    to_rational,
    unit_vector,
)
from .fincat import Report


class AlgebraError(ValueError):
    def __init__(self, message: str, report: Report | None = None):
        super().__init__(message)
        self.report = report


class RationalAlgebra:
    """Unital associative algebra given by structure constants."""

    def __init__(self, dim: int, table: Mapping, unit: Sequence, name: str = ""):
        self.dim = dim
        self.name = name
        # table[(i, j)] = {k: coefficient}
        self._table = {key: dict(v) for key, v in table.items() if v}
        self.unit = tuple(to_rational(x) for x in unit)
        if len(self.unit) != dim:
            raise AlgebraError("unit vector has the wrong length")
        self._left = None
        self._right = None
        self._gens = None
        # set by constructions that are associative and unital by design
        self.known_valid = False

    @classmethod
    def from_entries(cls, dim: int, entries: Iterable, unit: Sequence, name: str = "") -> "RationalAlgebra":
        table: dict = {}
        for i, j, k, val in entries:
            if not (0 <= i < dim and 0 <= j < dim and 0 <= k < dim):
                raise AlgebraError(f"structure constant index ({i}, {j}, {k}) out of range")
            val = to_rational(val)
            if val:
                row = table.setdefault((i, j), {})
                row[k] = row.get(k, 0) + val
        return cls(dim, table, unit, name)

    def entries(self) -> list:
        return sorted((i, j, k, v) for (i, j), row in self._table.items() for k, v in row.items() if v)

    def basis_product(self, i: int, j: int) -> dict:
        return self._table.get((i, j), {})

    def multiply(self, u: Sequence, v: Sequence) -> tuple:
        out = [Fraction(0)] * self.dim
        nz_v = [(j, y) for j, y in enumerate(v) if y]
        for i, x in enumerate(u):
            if not x:
                continue
            for j, y in nz_v:
                for k, c in self._table.get((i, j), {}).items():
                    out[k] += x * y * c
        return tuple(out)

    def basis_vector(self, i: int) -> tuple:
        return unit_vector(self.dim, i)

    def commutator(self, u: Sequence, v: Sequence) -> tuple:
        a, b = self.multiply(u, v), self.multiply(v, u)
        return tuple(x - y for x, y in zip(a, b))

    def left_matrix(self, a: Sequence) -> Matrix:
        """Matrix of ``x -> a x``."""
        cols = [self.multiply(a, self.basis_vector(j)) for j in range(self.dim)]
        return Matrix.from_columns(cols, self.dim)

    def right_matrix(self, a: Sequence) -> Matrix:
        """Matrix of ``x -> x a``."""
        cols = [self.multiply(self.basis_vector(j), a) for j in range(self.dim)]
        return Matrix.from_columns(cols, self.dim)

    def left_basis_matrices(self) -> list:
        if self._left is None:
            self._left = [self._basis_mult_matrix(i, left=True) for i in range(self.dim)]
        return self._left

    def right_basis_matrices(self) -> list:
        if self._right is None:
            self._right = [self._basis_mult_matrix(j, left=False) for j in range(self.dim)]
        return self._right

    def _basis_mult_matrix(self, i: int, left: bool) -> Matrix:
        trip = []
        for j in range(self.dim):
            key = (i, j) if left else (j, i)
            for k, c in self._table.get(key, {}).items():
                trip.append((k, j, c))
        return Matrix.from_sparse(self.dim, self.dim, trip)

    def is_commutative(self) -> bool:
        return all(
            self._table.get((i, j), {}) == self._table.get((j, i), {})
            for i in range(self.dim)
            for j in range(i + 1, self.dim)
        )

    def generators(self) -> list:
        """A small generating set of basis indices (greedy, deterministic)."""
        if self._gens is None:
            gens: list = []
            span = Subspace(self.dim, [self.unit])
            for i in range(self.dim):
                if span.contains(self.basis_vector(i)):
                    continue
                gens.append(i)
                span = self._closure(gens)
            self._gens = gens
        return self._gens

    def _closure(self, gens: list) -> Subspace:
        el = Eliminator(self.dim)
        todo = [self.unit]
        el.add(self.unit)
        while todo:
            v = todo.pop()
            for g in gens:
                w = self.multiply(v, self.basis_vector(g))
                if el.add(w):
                    todo.append(w)
        return Subspace(self.dim, el.reduced_rows())

    def validate(self) -> Report:
        rep = Report("algebra", params={"dim": self.dim})
        e = self.basis_vector
        for i in range(self.dim):
            if self.multiply(self.unit, e(i)) != e(i):
                rep.add("left_unit", (i,))
            if self.multiply(e(i), self.unit) != e(i):
                rep.add("right_unit", (i,))
        for i in range(self.dim):
            for j in range(self.dim):
                ij = self.multiply(e(i), e(j))
                for k in range(self.dim):
                    lhs = self.multiply(ij, e(k))
                    rhs = self.multiply(e(i), self.multiply(e(j), e(k)))
                    if lhs != rhs:
                        rep.add("associativity", (i, j, k))
        return rep

    def checked(self) -> Report:
        """Like :meth:`validate` but trusts (and records) known-valid algebras."""
        if self.known_valid:
            return Report("algebra", params={"dim": self.dim, "trusted": True})
        rep = self.validate()
        self.known_valid = rep.ok
        return rep

    def to_json(self) -> dict:
        return {
            "kind": "algebra",
            "dim": self.dim,
            "unit": [format_rational(x) for x in self.unit],
            "mult": [[i, j, k, format_rational(v)] for i, j, k, v in self.entries()],
        }

    def same_structure(self, other: "RationalAlgebra") -> bool:
        return self.dim == other.dim and self.unit == other.unit and self.entries() == other.entries()

    def __repr__(self):
        return f"RationalAlgebra({self.name or '?'}, dim={self.dim})"


def make_algebra(dim: int, mult: Iterable, unit: Sequence, name: str = "") -> RationalAlgebra:
    """Build and validate an algebra from ``(i, j, k, value)`` entries."""
    a = RationalAlgebra.from_entries(dim, mult, unit, name)
    rep = a.validate()
    if not rep.ok:
        first = rep.violations[0]
        raise AlgebraError(f"not a unital associative algebra: {first.axiom} at basis {first.witness}", rep)
    a.known_valid = True
    return a


def field_algebra() -> RationalAlgebra:
    k = RationalAlgebra(1, {(0, 0): {0: Fraction(1)}}, (1,), name="K")
    k.known_valid = True
    return k


def tensor_algebra(a: RationalAlgebra, b: RationalAlgebra) -> RationalAlgebra:
    """``A ⊗ B`` with basis ``e_i ⊗ f_j`` at index ``i * dim B + j``."""
    db = b.dim
    table: dict = {}
    for (i, k), row_a in a._table.items():
        for (j, l), row_b in b._table.items():
            out = {}
            for p, x in row_a.items():
                for q, y in row_b.items():
                    out[p * db + q] = x * y
            table[(i * db + j, k * db + l)] = out
    unit = tuple(x * y for x in a.unit for y in b.unit)
    out = RationalAlgebra(a.dim * db, table, unit, name=f"{a.name}⊗{b.name}")
    out.known_valid = a.known_valid and b.known_valid
    return out


def tensor_algebras(algebras: Sequence[RationalAlgebra]) -> RationalAlgebra:
    """Iterated tensor product; the empty product is the ground field."""
    out = field_algebra()
    for i, a in enumerate(algebras):
        out = a if i == 0 else tensor_algebra(out, a)
    return out


def clifford_algebra(n: int, q: Sequence) -> RationalAlgebra:
    """Clifford algebra of a diagonal form, basis = increasing monomials as bitmasks."""
    q = [to_rational(x) for x in q]
    if len(q) != n:
        raise AlgebraError("need one diagonal entry per generator")
    dim = 1 << n
    table = {}
    for s in range(dim):
        for t in range(dim):
            sign = 1
            for i in range(n):
                if t >> i & 1:
                    # move x_i left past the generators of s above it
                    above = bin(s >> (i + 1)).count("1")
                    if above % 2:
                        sign = -sign
            coeff = Fraction(sign)
            for i in range(n):
                if (s & t) >> i & 1:
                    coeff *= q[i]
            if coeff:
                table[(s, t)] = {s ^ t: coeff}
    out = RationalAlgebra(dim, table, unit_vector(dim, 0), name=f"Cl{n}")
    out.known_valid = True
    return out


def exterior_algebra(n: int) -> RationalAlgebra:
    a = clifford_algebra(n, [0] * n)
    a.name = f"Λ{n}"
    return a


# ---------------------------------------------------------------------------
# Morphisms and subalgebras
# ---------------------------------------------------------------------------


class AlgebraMorphism:
    def __init__(self, source: RationalAlgebra, target: RationalAlgebra, matrix: Matrix):
        if matrix.shape != (target.dim, source.dim):
            raise AlgebraError(f"matrix shape {matrix.shape} does not fit {source.dim} -> {target.dim}")
        self.source = source
        self.target = target
        self.matrix = matrix

    def __call__(self, v: Sequence) -> tuple:
        return self.matrix.apply(v)

    def validate(self) -> Report:
        rep = Report("algebra_morphism")
        s, t = self.source, self.target
        if self(s.unit) != t.unit:
            rep.add("unit", ())
        imgs = [self.matrix.column(i) for i in range(s.dim)]
        for i in range(s.dim):
            for j in range(s.dim):
                lhs = self(s.multiply(s.basis_vector(i), s.basis_vector(j)))
                if lhs != t.multiply(imgs[i], imgs[j]):
                    rep.add("multiplicativity", (i, j))
        return rep

    def compose(self, other: "AlgebraMorphism") -> "AlgebraMorphism":
        """``self ∘ other``."""
        return AlgebraMorphism(other.source, self.target, self.matrix @ other.matrix)

    @classmethod
    def identity(cls, a: RationalAlgebra) -> "AlgebraMorphism":
        return cls(a, a, Matrix.identity(a.dim))


def subalgebra(a: RationalAlgebra, sub: Subspace, name: str = "") -> tuple:
    """Algebra structure on a multiplicatively closed subspace.

    Returns ``(B, inclusion)``; B's basis is the echelon basis of ``sub``.
    """
    if not sub.contains(a.unit):
        raise AlgebraError("subspace does not contain the unit")
    basis = sub.basis
    table = {}
    for i, u in enumerate(basis):
        for j, v in enumerate(basis):
            w = a.multiply(u, v)
            try:
                coords = sub.coordinates(w)
            except LinAlgError:
                raise AlgebraError(f"subspace is not closed under multiplication at basis pair ({i}, {j})") from None
            table[(i, j)] = {k: c for k, c in enumerate(coords) if c}
    b = RationalAlgebra(len(basis), table, sub.coordinates(a.unit), name=name or f"sub({a.name})")
    b.known_valid = a.known_valid
    return b, AlgebraMorphism(b, a, sub.basis_matrix())


# ---------------------------------------------------------------------------
# Modules
# ---------------------------------------------------------------------------


class RightModule:
    """Right module: ``v . e_j = action[j] @ v``."""

    def __init__(self, algebra: RationalAlgebra, dim: int, action: Sequence[Matrix]):
        if len(action) != algebra.dim:
            raise AlgebraError("need one action matrix per algebra basis element")
        for m in action:
            if m.shape != (dim, dim):
                raise AlgebraError("action matrix has the wrong shape")
        self.algebra = algebra
        self.dim = dim
        self.action = list(action)

    def act_matrix(self, a: Sequence) -> Matrix:
        out = Matrix.zeros(self.dim, self.dim)
        for j, x in enumerate(a):
            if x:
                out = out + self.action[j].scale(x)
        return out

    def act(self, v: Sequence, a: Sequence) -> tuple:
        return self.act_matrix(a).apply(v)

    def validate(self) -> Report:
        rep = Report("right_module", params={"dim": self.dim})
        A = self.algebra
        if not self.act_matrix(A.unit).is_identity():
            rep.add("unit", ())
        for i in range(A.dim):
            for j in range(A.dim):
                lhs = self.act_matrix(A.multiply(A.basis_vector(i), A.basis_vector(j)))
                if lhs != self.action[j] @ self.action[i]:
                    rep.add("associativity", (i, j))
        return rep

    def generator_matrices(self) -> list:
        return [self.action[g] for g in self.algebra.generators()]

    def conjugate(self, p: Matrix) -> "RightModule":
        """Same module in the basis given by the columns of ``p``."""
        pinv = p.inverse()
        return RightModule(self.algebra, self.dim, [pinv @ m @ p for m in self.action])


def regular_right_module(a: RationalAlgebra) -> RightModule:
    return RightModule(a, a.dim, a.right_basis_matrices())


def free_right_module(a: RationalAlgebra, k: int) -> RightModule:
    from .exactlin import block_diag

    return RightModule(a, a.dim * k, [block_diag([m] * k) for m in a.right_basis_matrices()])


def zero_module(a: RationalAlgebra) -> RightModule:
    return RightModule(a, 0, [Matrix.zeros(0, 0)] * a.dim)


def restrict_module(m: RightModule, f: AlgebraMorphism) -> RightModule:
    """Restriction of scalars along ``f: B -> A``."""
    if f.target is not m.algebra and not f.target.same_structure(m.algebra):
        raise AlgebraError("morphism target is not the module's algebra")
    return RightModule(f.source, m.dim, [m.act_matrix(f.matrix.column(j)) for j in range(f.source.dim)])


def module_homs(m1: RightModule, m2: RightModule, extra_pairs: Iterable[tuple] = ()) -> list:
    """Basis of ``Hom_A(m1, m2)``, optionally also intertwining ``extra_pairs``."""
    gens = m1.algebra.generators()
    pairs = [(m1.action[g], m2.action[g]) for g in gens] + list(extra_pairs)
    return intertwiners(pairs, m2.dim, m1.dim)


def is_module_map(phi: Matrix, m1: RightModule, m2: RightModule) -> bool:
    return all(phi @ m1.action[j] == m2.action[j] @ phi for j in range(m1.algebra.dim))


class Bimodule:
    """``a . v = left_action[i] v`` for ``a = e_i`` and ``v . b = right_action[j] v``."""

    def __init__(self, left_algebra, right_algebra, dim, left_action, right_action):
        self.left_algebra = left_algebra
        self.right_algebra = right_algebra
        self.dim = dim
        self.left_action = list(left_action)
        self.right_action = list(right_action)

    def left_matrix(self, a: Sequence) -> Matrix:
        out = Matrix.zeros(self.dim, self.dim)
        for i, x in enumerate(a):
            if x:
                out = out + self.left_action[i].scale(x)
        return out

    def validate(self) -> Report:
        rep = Report("bimodule", params={"dim": self.dim})
        L, R = self.left_algebra, self.right_algebra
        if not self.left_matrix(L.unit).is_identity():
            rep.add("left_unit", ())
        right = RightModule(R, self.dim, self.right_action)
        rep.extend(right.validate())
        for i in range(L.dim):
            for j in range(L.dim):
                lhs = self.left_matrix(L.multiply(L.basis_vector(i), L.basis_vector(j)))
                if lhs != self.left_action[i] @ self.left_action[j]:
                    rep.add("left_associativity", (i, j))
        for i in range(L.dim):
            for j in range(R.dim):
                if self.left_action[i] @ self.right_action[j] != self.right_action[j] @ self.left_action[i]:
                    rep.add("commuting_actions", (i, j))
        return rep

    def right_module(self) -> RightModule:
        return RightModule(self.right_algebra, self.dim, self.right_action)


def regular_bimodule(a: RationalAlgebra) -> Bimodule:
    return Bimodule(a, a, a.dim, a.left_basis_matrices(), a.right_basis_matrices())


def bimodule_from_morphism(f: AlgebraMorphism) -> Bimodule:
    """The target algebra as a ``source``-``target`` bimodule via ``f``."""
    t = f.target
    left = [t.left_matrix(f.matrix.column(i)) for i in range(f.source.dim)]
    return Bimodule(f.source, t, t.dim, left, t.right_basis_matrices())


class RelativeTensor:
    """``M ⊗_B N`` as a quotient of ``M ⊗ N`` (index ``i * dim N + l``)."""

    def __init__(self, dim, projection, section, relations, module):
        self.dim = dim
        self.projection = projection
        self.section = section
        self.relations = relations
        self.module = module

    def element(self, v: Sequence, w: Sequence) -> tuple:
        from .exactlin import kron_vectors

        return self.projection.apply(kron_vectors(v, w))


def relative_tensor(m: RightModule, n: Bimodule) -> RelativeTensor:
    """Coequalizer of the two actions of the middle algebra on ``M ⊗ N``."""
    B = m.algebra
    if B is not n.left_algebra and not B.same_structure(n.left_algebra):
        raise AlgebraError("module algebra and bimodule left algebra differ")
    dm, dn = m.dim, n.dim
    total = dm * dn
    rels = Eliminator(total)
    gens = B.generators()
    for j in gens:
        rm, ln = m.action[j], n.left_action[j]
        for i in range(dm):
            for l in range(dn):
                row: dict = {}
                for p in range(dm):
                    x = rm[p, i]
                    if x:
                        row[p * dn + l] = row.get(p * dn + l, 0) + x
                for q in range(dn):
                    y = ln[q, l]
                    if y:
                        row[i * dn + q] = row.get(i * dn + q, 0) - y
                row = {k: x for k, x in row.items() if x}
                if row:
                    rels.add(row)
    sub = Subspace(total, rels.reduced_rows())
    qdim, proj, sect = quotient(total, sub)
    ident = Matrix.identity(dm)
    action = [proj @ kronecker(ident, r) @ sect for r in n.right_action]
    module = RightModule(n.right_algebra, qdim, action)
    return RelativeTensor(qdim, proj, sect, sub, module)


class EndomorphismAlgebra:
    """``End`` of a module with basis the echelon basis of the solution space."""

    def __init__(self, module: RightModule, basis: list, algebra: RationalAlgebra):
        self.module = module
        self.basis = basis
        self.algebra = algebra
        self._space = Subspace(module.dim * module.dim, [_flatten(b) for b in basis])

    def coordinates(self, phi: Matrix) -> tuple:
        return self._space.coordinates(_flatten(phi))

    def element(self, coords: Sequence) -> Matrix:
        out = Matrix.zeros(self.module.dim, self.module.dim)
        for c, b in zip(coords, self.basis):
            if c:
                out = out + b.scale(c)
        return out


def _flatten(m: Matrix) -> tuple:
    return tuple(x for r in m.tolist() for x in r)


def endomorphism_algebra(m: RightModule, extra_pairs: Iterable[tuple] = ()) -> EndomorphismAlgebra:
    """Endomorphisms commuting with the action (and with ``extra_pairs``)."""
    sols = module_homs(m, m, extra_pairs)
    d = m.dim
    space = Subspace(d * d, [_flatten(s) for s in sols])
    from .exactlin import unflatten

    basis = [unflatten(v, d, d) for v in space.basis]
    table = {}
    for i, a in enumerate(basis):
        for j, b in enumerate(basis):
            coords = space.coordinates(_flatten(a @ b))
            table[(i, j)] = {k: c for k, c in enumerate(coords) if c}
    unit = space.coordinates(_flatten(Matrix.identity(d)))
    alg = RationalAlgebra(len(basis), table, unit, name="End")
    alg.known_valid = True
    return EndomorphismAlgebra(m, basis, alg)


def unit_iso(a: RationalAlgebra) -> tuple:
    """Mutually inverse morphisms ``A -> End_A(A)`` (left multiplication) and back (evaluation at 1)."""
    end = endomorphism_algebra(regular_right_module(a))
    fwd_cols = [end.coordinates(a.left_matrix(a.basis_vector(i))) for i in range(a.dim)]
    fwd = AlgebraMorphism(a, end.algebra, Matrix.from_columns(fwd_cols, end.algebra.dim))
    bwd_cols = [phi.apply(a.unit) for phi in end.basis]
    bwd = AlgebraMorphism(end.algebra, a, Matrix.from_columns(bwd_cols, a.dim))
    return fwd, bwd, end


# ---------------------------------------------------------------------------
# Presented algebras
# ---------------------------------------------------------------------------


class DegreeBoundExceeded(ArithmeticError):
    """A product left the degree-bounded part of a presented algebra."""


def word_key(w: tuple) -> tuple:
    return (len(w), w)


def _add(poly: dict, word: tuple, c) -> None:
    v = poly.get(word, 0) + c
    if v:
        poly[word] = v
    else:
        poly.pop(word, None)


class PresentedAlgebra:
    """Generators, rewrite rules ``lead -> tail`` and a degree bound.

    Words are tuples of generator indices, ordered by degree then
    lexicographically.  The basis is the set of words of degree at most
    the bound that contain no rule lead as a factor.
    """

    def __init__(self, generators: Sequence, rules: Sequence[tuple], degree_bound: int, max_basis: int = 200000):
        self.generators = list(generators)
        self.degree_bound = degree_bound
        self.rules = []
        self._lead: dict = {}
        for lead, tail in rules:
            lead = tuple(lead)
            tail = {tuple(w): to_rational(c) for w, c in dict(tail).items() if to_rational(c)}
            for w in tail:
                if word_key(w) >= word_key(lead):
                    raise AlgebraError(f"rule tail word {w} is not smaller than its lead {lead}")
            for w in (lead, *tail):
                if any(not 0 <= g < len(self.generators) for g in w):
                    raise AlgebraError(f"word {w} uses an unknown generator")
            if lead in self._lead:
                raise AlgebraError(f"two rules share the lead {lead}")
            self._lead[lead] = tail
            self.rules.append((lead, tail))
        self._lead_lengths = sorted({len(l) for l in self._lead})
        self.overflow: set = set()
        self.basis = self._enumerate_basis(max_basis)
        self.index = {w: i for i, w in enumerate(self.basis)}

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def is_zero(self) -> bool:
        return () in self._lead

    def _find_lead(self, w: tuple):
        for start in range(len(w)):
            for ln in self._lead_lengths:
                if start + ln <= len(w) and w[start:start + ln] in self._lead:
                    return start, ln
        return None

    def is_irreducible(self, w: tuple) -> bool:
        if self.is_zero:
            return False
        return self._find_lead(tuple(w)) is None

    def _enumerate_basis(self, max_basis: int) -> list:
        if self.is_zero:
            return []
        layer = [()]
        basis = [()]
        for _ in range(self.degree_bound):
            nxt = []
            for w in layer:
                for g in range(len(self.generators)):
                    u = w + (g,)
                    # prefixes are irreducible already, so only suffix factors matter
                    if not any(u[len(u) - ln:] in self._lead for ln in self._lead_lengths if ln <= len(u)):
                        nxt.append(u)
            basis.extend(nxt)
            if len(basis) > max_basis:
                raise AlgebraError(f"basis exceeds {max_basis} words; lower the degree bound")
            layer = nxt
        return sorted(basis, key=word_key)

    def reduce(self, poly: Mapping) -> dict:
        """Normal form of a polynomial ``{word: coefficient}`` (any degree)."""
        if self.is_zero:
            return {}
        work = {}
        for w, c in poly.items():
            _add(work, tuple(w), to_rational(c))
        out = {}
        while work:
            w = max(work, key=word_key)
            c = work.pop(w)
            hit = self._find_lead(w)
            if hit is None:
                out[w] = c
                continue
            s, ln = hit
            for t, d in self._lead[w[s:s + ln]].items():
                _add(work, w[:s] + t + w[s + ln:], c * d)
        return out

    def to_vector(self, poly: Mapping) -> tuple:
        red = self.reduce(poly)
        v = [Fraction(0)] * self.dim
        for w, c in red.items():
            if len(w) > self.degree_bound:
                raise DegreeBoundExceeded(f"normal form contains {w} beyond degree {self.degree_bound}")
            v[self.index[w]] += c
        return tuple(v)

    def poly(self, v: Sequence) -> dict:
        return {self.basis[i]: to_rational(c) for i, c in enumerate(v) if c}

    def multiply(self, u: Sequence, v: Sequence) -> tuple:
        prod: dict = {}
        for i, x in enumerate(u):
            if not x:
                continue
            for j, y in enumerate(v):
                if y:
                    _add(prod, self.basis[i] + self.basis[j], x * y)
        return self.to_vector(prod)

    def basis_product(self, i: int, j: int):
        """Product of two basis words, or None (flagged) beyond the bound."""
        try:
            return self.to_vector({self.basis[i] + self.basis[j]: 1})
        except DegreeBoundExceeded:
            self.overflow.add((i, j))
            return None

    def unit(self) -> tuple:
        return self.to_vector({(): 1})

    def mult_table(self) -> dict:
        table = {}
        for i in range(self.dim):
            for j in range(self.dim):
                table[(i, j)] = self.basis_product(i, j)
        return table

    def as_rational_algebra(self) -> RationalAlgebra:
        """The finite-dimensional algebra, when no product leaves the bound."""
        table = {}
        for (i, j), v in self.mult_table().items():
            if v is None:
                raise DegreeBoundExceeded(f"product of basis words {self.basis[i]} and {self.basis[j]} exceeds the bound")
            table[(i, j)] = {k: c for k, c in enumerate(v) if c}
        return RationalAlgebra(self.dim, table, self.unit(), name="presented")

    def word_label(self, w: tuple) -> str:
        return "·".join(str(self.generators[g]) for g in w) or "1"


def presented_algebra(generators: Sequence, rules: Sequence[tuple], degree_bound: int = 6) -> PresentedAlgebra:
    return PresentedAlgebra(generators, rules, degree_bound)


def _substitute(poly: Mapping, linear: Mapping) -> dict:
    """Replace every eliminated generator by its (degree <= 1) tail."""
    out: dict = {}
    for w, c in poly.items():
        terms = {(): to_rational(c)}
        for g in w:
            repl = linear.get((g,), {(g,): Fraction(1)})
            nxt: dict = {}
            for u, x in terms.items():
                for t, y in repl.items():
                    _add(nxt, u + t, x * y)
            terms = nxt
        for u, x in terms.items():
            _add(out, u, x)
    return out


def rules_from_relations(relations: Sequence[Mapping]) -> list:
    """Turn linear relations ``sum c_w w = 0`` into interreduced rewrite rules.

    Degree <= 1 consequences are found by echelon reduction and
    substituted back until none remain; no completion is attempted.
    """
    linear: dict = {}
    rels = [{tuple(w): to_rational(c) for w, c in r.items() if to_rational(c)} for r in relations]
    while True:
        subbed = [_substitute(r, linear) for r in rels]
        words = sorted({w for r in subbed for w in r}, key=word_key, reverse=True)
        col = {w: i for i, w in enumerate(words)}
        el = Eliminator(len(words))
        for r in subbed:
            if r:
                el.add({col[w]: c for w, c in r.items()})
        rows = []
        for p in el.pivot_columns():
            row = el.pivots[p]
            lead = words[p]
            tail = {words[k]: -x for k, x in row.items() if k != p}
            rows.append((lead, tail))
        new_linear = [(l, t) for l, t in rows if len(l) <= 1]
        if not new_linear:
            out = sorted(linear.items(), key=lambda lt: word_key(lt[0]))
            return out + rows
        for lead, tail in new_linear:
            if lead == ():
                return [((), {})]
            linear[lead] = tail
        # keep earlier linear tails fully reduced
        linear = {l: _substitute(t, {k: v for k, v in linear.items() if k != l}) for l, t in linear.items()}


class PresentedModule:
    """Right module over a presented algebra: ``v . g = matrices[g] v``."""

    def __init__(self, algebra: PresentedAlgebra, dim: int, matrices: Sequence[Matrix]):
        if len(matrices) != len(algebra.generators):
            raise AlgebraError("need one matrix per generator")
        self.algebra = algebra
        self.dim = dim
        self.matrices = list(matrices)

    def word_action(self, w: Sequence[int]) -> Matrix:
        out = Matrix.identity(self.dim)
        for g in w:
            out = self.matrices[g] @ out
        return out

    def poly_action(self, poly: Mapping) -> Matrix:
        out = Matrix.zeros(self.dim, self.dim)
        for w, c in poly.items():
            out = out + self.word_action(w).scale(c)
        return out

    def validate(self) -> Report:
        rep = Report("presented_module", params={"dim": self.dim, "degree_bound": self.algebra.degree_bound})
        for lead, tail in self.algebra.rules:
            if self.word_action(lead) != self.poly_action(tail):
                rep.add("relation", (self.algebra.word_label(lead),))
        return rep

    def homs(self, other: "PresentedModule") -> list:
        pairs = list(zip(self.matrices, other.matrices))
        return intertwiners(pairs, other.dim, self.dim)
