"""AQFTs on finite orthogonal categories and algebra-valued prefactorization algebras.

An AQFT assigns an algebra to each object and an algebra morphism to each
morphism, with images of orthogonal morphisms commuting.  Factorization
products of a tuple ``(f_1, ..., f_n)`` are maps out of the tensor product
algebra; multi-indices are ordered lexicographically, first slot major.
"""

from __future__ import annotations

from itertools import permutations, product
from typing import Mapping, Sequence

from .algebra import AlgebraMorphism, RationalAlgebra, field_algebra, tensor_algebras
from .exactlin import Matrix, kron_vectors
from .fincat import OrthogonalCategory, Report, arc_order
from .operad import (
    EnvelopeMorphism,
    PFOperation,
    _compositions,
    _ops_table,
    compose as operad_compose,
    identity_operation,
    permute,
    unary,
)


class AQFTError(ValueError):
    pass


class AQFT:
    def __init__(self, site: OrthogonalCategory, algebras: Mapping, maps: Mapping[int, Matrix], name: str = ""):
        self.site = site
        self.algebras = dict(algebras)
        self.maps = dict(maps)
        self.name = name
        base = site.base
        for o in base.objects:
            if o not in self.algebras:
                raise AQFTError(f"no algebra assigned to object {o!r}")
        for f in base.morphism_ids():
            if f not in self.maps:
                raise AQFTError(f"no algebra map assigned to morphism {base.label(f)!r}")
            s, t = self.algebras[base.source(f)], self.algebras[base.target(f)]
            if self.maps[f].shape != (t.dim, s.dim):
                raise AQFTError(f"map of {base.label(f)!r} has shape {self.maps[f].shape}")
        self._tuple_cache: dict = {}

    def algebra(self, obj) -> RationalAlgebra:
        return self.algebras[obj]

    def morphism(self, f: int) -> AlgebraMorphism:
        base = self.site.base
        return AlgebraMorphism(self.algebras[base.source(f)], self.algebras[base.target(f)], self.maps[f])

    def tuple_algebra(self, objs: Sequence) -> RationalAlgebra:
        key = tuple(objs)
        if key not in self._tuple_cache:
            self._tuple_cache[key] = tensor_algebras([self.algebras[o] for o in key])
        return self._tuple_cache[key]

    def __eq__(self, other):
        if not isinstance(other, AQFT) or other.site is not self.site:
            return NotImplemented
        return all(self.algebras[o].same_structure(other.algebras[o]) for o in self.site.base.objects) and all(
            self.maps[f] == other.maps[f] for f in self.site.base.morphism_ids()
        )

    __hash__ = None


def check_functoriality(a: AQFT) -> Report:
    rep = Report("aqft_functoriality")
    base = a.site.base
    for o in base.objects:
        if not a.maps[base.identity(o)].is_identity():
            rep.add("identity", (o,))
    for f in base.morphism_ids():
        for v in a.morphism(f).validate().violations:
            rep.add(f"algebra_map:{v.axiom}", (base.label(f),) + v.witness)
        for g in base.out_of(base.target(f)):
            if a.maps[base.compose(g, f)] != a.maps[g] @ a.maps[f]:
                rep.add("composition", (base.label(g), base.label(f)))
    return rep


def check_perp_commutativity(a: AQFT) -> Report:
    rep = Report("perp_commutativity")
    base = a.site.base
    for f1, f2 in sorted(a.site.pairs):
        if f1 > f2:
            continue
        t = a.algebras[base.target(f1)]
        m1, m2 = a.maps[f1], a.maps[f2]
        for i in range(m1.cols):
            x = m1.column(i)
            for j in range(m2.cols):
                c = t.commutator(x, m2.column(j))
                if any(c):
                    rep.add("commutator", (base.label(f1), base.label(f2), i, j), f"[A(f1) e_{i}, A(f2) e_{j}] != 0")
                    break
            else:
                continue
            break
    return rep


def check_aqft(a: AQFT) -> Report:
    """Functoriality plus commutation of images of orthogonal morphisms."""
    rep = Report("aqft")
    for o in a.site.base.objects:
        for v in a.algebras[o].checked().violations:
            rep.add(f"algebra:{v.axiom}", (o,) + v.witness)
    for sub in (check_functoriality(a), check_perp_commutativity(a)):
        rep.extend(sub)
    return rep


# ---------------------------------------------------------------------------
# Tuple maps
# ---------------------------------------------------------------------------


def operation_matrix(a: AQFT, op: PFOperation) -> Matrix:
    """``A(f_1) ⊗ ... ⊗ A(f_n)`` followed by iterated multiplication."""
    t = a.algebras[op.target]
    cols = [t.unit]
    for f in op.morphisms:
        m = a.maps[f]
        imgs = [m.column(i) for i in range(m.cols)]
        cols = [t.multiply(prev, img) for prev in cols for img in imgs]
    return Matrix.from_columns(cols, t.dim)


def tuple_map(a: AQFT, m: EnvelopeMorphism) -> Matrix:
    """Algebra map ``⊗_i A(c_i) -> ⊗_j A(t_j)`` of an envelope morphism."""
    src_dims = [a.algebras[o].dim for o in m.source]
    blocks = [operation_matrix(a, b) for b in m.blocks]
    fibers = [m.fiber(j) for j in range(len(m.target))]
    cols = []
    for idx in product(*[range(d) for d in src_dims]):
        vec = (1,)
        for j, blk in enumerate(blocks):
            sub = [idx[i] for i in fibers[j]]
            col = 0
            for i, k in zip(fibers[j], sub):
                col = col * src_dims[i] + k
            vec = kron_vectors(vec, blk.column(col))
        cols.append(vec)
    rows = 1
    for o in m.target:
        rows *= a.algebras[o].dim
    return Matrix.from_columns(cols, rows)


def slot_permutation_matrix(dims: Sequence[int], sigma: Sequence[int]) -> Matrix:
    """``tau_sigma``: slot ``i`` of the source holds factor ``sigma(i)`` of the target."""
    n = len(dims)
    src_dims = [dims[s] for s in sigma]
    trip = []
    for col, idx in enumerate(product(*[range(d) for d in src_dims])):
        tgt = [0] * n
        for i in range(n):
            tgt[sigma[i]] = idx[i]
        row = 0
        for k, d in zip(tgt, dims):
            row = row * d + k
        trip.append((row, col, 1))
    total = 1
    for d in dims:
        total *= d
    return Matrix.from_sparse(total, total, trip)


# ---------------------------------------------------------------------------
# Prefactorization algebras
# ---------------------------------------------------------------------------


class PrefactorizationAlgebra:
    """Factorization products stored for all operations up to ``max_arity``."""

    def __init__(self, site: OrthogonalCategory, algebras: Mapping, products: Mapping, max_arity: int):
        self.site = site
        self.algebras = dict(algebras)
        self.products = dict(products)
        self.max_arity = max_arity
        self._tuple_cache: dict = {}

    def tuple_algebra(self, objs: Sequence) -> RationalAlgebra:
        key = tuple(objs)
        if key not in self._tuple_cache:
            self._tuple_cache[key] = tensor_algebras([self.algebras[o] for o in key])
        return self._tuple_cache[key]

    def product(self, op: PFOperation) -> Matrix:
        """Stored product, or the arity-one factorization for larger arities."""
        if op in self.products:
            return self.products[op]
        t = self.algebras[op.target]
        cols = [t.unit]
        for s, f in zip(op.sources, op.morphisms):
            m = self.products[PFOperation(op.target, (s,), (f,))]
            imgs = [m.column(i) for i in range(m.cols)]
            cols = [t.multiply(prev, img) for prev in cols for img in imgs]
        return Matrix.from_columns(cols, t.dim)

    def __eq__(self, other):
        if not isinstance(other, PrefactorizationAlgebra):
            return NotImplemented
        if set(self.products) != set(other.products):
            return False
        return all(self.products[k] == other.products[k] for k in self.products) and all(
            self.algebras[o].same_structure(other.algebras[o]) for o in self.algebras
        )

    __hash__ = None


def to_prefactorization(a: AQFT, max_arity: int = 3) -> PrefactorizationAlgebra:
    rep = check_perp_commutativity(a)
    if not rep.ok:
        raise AQFTError(f"theory is not ⊥-commutative: {rep.violations[0].witness}")
    table = _ops_table(a.site, max_arity)
    products = {op: operation_matrix(a, op) for ops in table.values() for op in ops}
    return PrefactorizationAlgebra(a.site, a.algebras, products, max_arity)


def from_prefactorization(f: PrefactorizationAlgebra, check: bool = True) -> AQFT:
    if check:
        rep = check_pfa_axioms(f, min(f.max_arity, 2))
        if not rep.ok:
            raise AQFTError(f"prefactorization axioms fail: {rep.violations[0].axiom} at {rep.violations[0].witness}")
    maps = {g: f.product(unary(f.site, g)) for g in f.site.base.morphism_ids()}
    out = AQFT(f.site, f.algebras, maps)
    if check:
        rep = check_perp_commutativity(out)
        if not rep.ok:
            raise AQFTError(f"underlying functor is not ⊥-commutative: {rep.violations[0].witness}")
    return out


def _slot_pure(dims: Sequence[int], slot: int, i: int, units: Sequence[int]) -> int:
    idx = list(units)
    idx[slot] = i
    col = 0
    for k, d in zip(idx, dims):
        col = col * d + k
    return col


def check_pfa_axioms(f: PrefactorizationAlgebra, max_arity: int = 3) -> Report:
    """Unit, composition and permutation axioms, plus multiplicativity."""
    rep = Report("pfa_axioms", params={"max_arity": max_arity})
    site, base = f.site, f.site.base
    lab = base.label
    table = _ops_table(site, max_arity)
    ops = [op for lst in table.values() for op in lst]
    for t in base.objects:
        if not f.product(identity_operation(site, t)).is_identity():
            rep.add("unit", (t,))
    for op in ops:
        w = tuple(lab(m) for m in op.morphisms)
        m = f.product(op)
        tgt = f.algebras[op.target]
        src = f.tuple_algebra(op.sources)
        if m.apply(src.unit) != tgt.unit:
            rep.add("multiplicativity", w, "unit not preserved")
            continue
        dims = [f.algebras[s].dim for s in op.sources]
        units = []
        for s in op.sources:
            u = f.algebras[s].unit
            units.append(u.index(1) if sum(1 for x in u if x) == 1 else None)
        if None in units:
            pure = range(src.dim)
        else:
            pure = sorted({_slot_pure(dims, k, i, units) for k in range(len(dims)) for i in range(dims[k])})
        cols = [m.column(j) for j in range(src.dim)]
        bad = False
        for p in pure:
            for j in range(src.dim):
                lhs = m.apply(src.multiply(src.basis_vector(p), src.basis_vector(j)))
                if lhs != tgt.multiply(cols[p], cols[j]):
                    rep.add("multiplicativity", w + (p, j))
                    bad = True
                    break
            if bad:
                break
        for sigma in permutations(range(op.arity)):
            lhs = f.product(permute(op, sigma))
            rhs = m @ slot_permutation_matrix(dims, sigma)
            if lhs != rhs:
                rep.add("permutation", (w, sigma))
    for op in ops:
        w = tuple(lab(m) for m in op.morphisms)
        for gs in _compositions(site, table, op.sources, max_arity):
            comp = operad_compose(site, op, gs)
            inner = Matrix.identity(1)
            for g in gs:
                inner = _kron(inner, f.product(g))
            if f.product(comp) != f.product(op) @ inner:
                rep.add("composition", (w, tuple(tuple(lab(x) for x in g.morphisms) for g in gs)))
    rep.stats["operations"] = len(ops)
    return rep


def _kron(a: Matrix, b: Matrix) -> Matrix:
    from .exactlin import kronecker

    return kronecker(a, b)


def pfa_roundtrip(a: AQFT, max_arity: int = 3) -> Report:
    """Both composites of the AQFT/PFA correspondence are identities."""
    rep = Report("pfa_roundtrip", params={"max_arity": max_arity})
    pfa = to_prefactorization(a, max_arity)
    back = from_prefactorization(pfa)
    for g in a.site.base.morphism_ids():
        if back.maps[g] != a.maps[g]:
            rep.add("from_to", (a.site.base.label(g),))
    again = to_prefactorization(back, max_arity)
    for op, m in pfa.products.items():
        if again.products[op] != m:
            rep.add("to_from", tuple(a.site.base.label(x) for x in op.morphisms))
    rep.stats["operations"] = len(pfa.products)
    return rep


# ---------------------------------------------------------------------------
# Theories on point-indexed sites
# ---------------------------------------------------------------------------


def pointwise_theory(site: OrthogonalCategory, points: Mapping, factor: RationalAlgebra, name: str = "") -> AQFT:
    """``A(c) = factor^{⊗ points(c)}`` with inclusions padding by units.

    ``points[c]`` is the ordered tuple of points of ``c``; the factor's
    unit must be the basis vector ``e_0``.
    """
    if factor.unit != tuple(1 if i == 0 else 0 for i in range(factor.dim)):
        raise AQFTError("factor algebra unit must be the first basis vector")
    base = site.base
    algebras = {}
    for o in base.objects:
        algebras[o] = tensor_algebras([factor] * len(points[o])) if points[o] else field_algebra()
    d = factor.dim
    maps = {}
    for f in base.morphism_ids():
        s, t = base.source(f), base.target(f)
        ps, pt = list(points[s]), list(points[t])
        pos = [pt.index(p) for p in ps]
        trip = []
        for col, idx in enumerate(product(range(d), repeat=len(ps))):
            tgt = [0] * len(pt)
            for k, i in zip(pos, idx):
                tgt[k] = i
            row = 0
            for i in tgt:
                row = row * d + i
            trip.append((row, col, 1))
        maps[f] = Matrix.from_sparse(d ** len(pt), d ** len(ps), trip)
    return AQFT(site, algebras, maps, name=name or f"{factor.name}-pointwise")


def circle_theory(model, factor: RationalAlgebra, which: str = "opens", name: str = "") -> AQFT:
    site = model.opens if which == "opens" else model.disks
    points = {o: arc_order(o, model.n) for o in site.base.objects}
    return pointwise_theory(site, points, factor, name)


def constant_theory(site: OrthogonalCategory, algebra: RationalAlgebra | None = None) -> AQFT:
    """Every object gets the same algebra and every morphism the identity."""
    algebra = algebra or field_algebra()
    ident = Matrix.identity(algebra.dim)
    return AQFT(
        site,
        {o: algebra for o in site.base.objects},
        {f: ident for f in site.base.morphism_ids()},
        name=f"constant-{algebra.name}",
    )


class AQFTMorphism:
    """Natural transformation with object-wise algebra maps."""

    def __init__(self, source: AQFT, target: AQFT, components: Mapping):
        self.source = source
        self.target = target
        self.components = dict(components)

    def validate(self) -> Report:
        rep = Report("aqft_morphism")
        base = self.source.site.base
        for o in base.objects:
            m = AlgebraMorphism(self.source.algebras[o], self.target.algebras[o], self.components[o])
            for v in m.validate().violations:
                rep.add(f"component:{v.axiom}", (o,) + v.witness)
        for f in base.morphism_ids():
            s, t = base.source(f), base.target(f)
            if self.components[t] @ self.source.maps[f] != self.target.maps[f] @ self.components[s]:
                rep.add("naturality", (base.label(f),))
        return rep

    def is_isomorphism(self) -> bool:
        return self.validate().ok and all(m.is_invertible() for m in self.components.values())
