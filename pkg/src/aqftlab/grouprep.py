"""Finite groups, representations, actions on algebras and the Hopf data O(G).

Groups are multiplication tables on ``range(order)``.  Representations
store one matrix per group element.  Coactions of O(G) are derived from
actions: ``delta(v) = sum_g rho(g) v ⊗ e_g``.
"""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import permutations, product
from typing import Mapping, Sequence

from .algebra import (
    AlgebraError,
    AlgebraMorphism,
    RationalAlgebra,
    RightModule,
    subalgebra,
    tensor_algebras,
)
from .exactlin import (
    LinAlgError,
    Matrix,
    Subspace,
    block_diag,
    intertwiners,
    kronecker,
    quotient,
    unit_vector,
)
from .fincat import Report


class GroupError(ValueError):
    pass


class FiniteGroup:
    def __init__(self, table: Sequence[Sequence[int]], name: str = "", labels: Sequence | None = None):
        n = len(table)
        if n == 0 or any(len(r) != n for r in table):
            raise GroupError("multiplication table must be a non-empty square")
        if any(not (isinstance(x, int) and 0 <= x < n) for r in table for x in r):
            raise GroupError("table entries must be element indices")
        self.table = tuple(tuple(r) for r in table)
        self.order = n
        self.name = name
        self.labels = list(labels) if labels is not None else [str(i) for i in range(n)]
        ids = [e for e in range(n) if all(self.table[e][a] == a and self.table[a][e] == a for a in range(n))]
        if not ids:
            raise GroupError("table has no two-sided identity")
        self.identity = ids[0]
        self._inv = []
        for a in range(n):
            inv = [b for b in range(n) if self.table[a][b] == self.identity and self.table[b][a] == self.identity]
            if not inv:
                raise GroupError(f"element {a} has no inverse")
            self._inv.append(inv[0])

    @property
    def elements(self) -> range:
        return range(self.order)

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self._inv[a]

    def conj(self, g: int, x: int) -> int:
        """``g x g^-1``."""
        return self.mul(self.mul(g, x), self.inv(g))

    def validate(self) -> Report:
        rep = Report("group", params={"order": self.order})
        for a, b, c in product(self.elements, repeat=3):
            if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)):
                rep.add("associativity", (a, b, c))
                break
        return rep

    def is_abelian(self) -> bool:
        return all(self.mul(a, b) == self.mul(b, a) for a in self.elements for b in self.elements)

    def element_order(self, g: int) -> int:
        k, x = 1, g
        while x != self.identity:
            x = self.mul(x, g)
            k += 1
        return k

    def exponent(self) -> int:
        from math import lcm

        out = 1
        for g in self.elements:
            out = lcm(out, self.element_order(g))
        return out

    def conjugacy_classes(self) -> list:
        seen, out = set(), []
        for x in self.elements:
            if x in seen:
                continue
            cls = sorted({self.conj(g, x) for g in self.elements})
            seen.update(cls)
            out.append(cls)
        return out

    def centralizer(self, x: int) -> list:
        return [g for g in self.elements if self.mul(g, x) == self.mul(x, g)]

    def generated(self, gens: Sequence[int]) -> list:
        out = {self.identity}
        todo = [self.identity]
        while todo:
            a = todo.pop()
            for s in gens:
                b = self.mul(a, s)
                if b not in out:
                    out.add(b)
                    todo.append(b)
        return sorted(out)

    def generating_set(self) -> list:
        gens: list = []
        span = {self.identity}
        for g in self.elements:
            if g not in span:
                gens.append(g)
                span = set(self.generated(gens))
        return gens

    def subgroups(self) -> list:
        subs = set()
        for a in self.elements:
            for b in self.elements:
                subs.add(tuple(self.generated([a, b])))
        return sorted(subs, key=lambda s: (len(s), s))

    def to_json(self) -> dict:
        return {"kind": "group", "order": self.order, "table": [list(r) for r in self.table]}

    def __repr__(self):
        return f"FiniteGroup({self.name or '?'}, order={self.order})"


def make_group(table, name: str = "") -> FiniteGroup:
    g = FiniteGroup(table, name)
    rep = g.validate()
    if not rep.ok:
        raise GroupError(f"table is not associative at {rep.violations[0].witness}")
    return g


def trivial_group() -> FiniteGroup:
    return FiniteGroup([[0]], name="trivial", labels=["e"])


def cyclic_group(n: int) -> FiniteGroup:
    return FiniteGroup([[(a + b) % n for b in range(n)] for a in range(n)], name=f"Z{n}")


def symmetric_group(n: int) -> FiniteGroup:
    perms = sorted(permutations(range(n)))
    idx = {p: i for i, p in enumerate(perms)}
    # (p q)(i) = p(q(i))
    table = [[idx[tuple(p[q[i]] for i in range(n))] for q in perms] for p in perms]
    return FiniteGroup(table, name=f"S{n}", labels=["".join(map(str, p)) for p in perms])


def direct_product(g: FiniteGroup, h: FiniteGroup) -> FiniteGroup:
    m = h.order
    table = [
        [g.mul(a // m, b // m) * m + h.mul(a % m, b % m) for b in range(g.order * m)]
        for a in range(g.order * m)
    ]
    return FiniteGroup(table, name=f"{g.name}x{h.name}")


class PowerGroup(FiniteGroup):
    """``G^n`` with elements encoded in mixed radix, first factor most significant."""

    def __init__(self, base: FiniteGroup, n: int):
        self.base = base
        self.n = n
        self._tuples = list(product(base.elements, repeat=n))
        self._index = {t: i for i, t in enumerate(self._tuples)}
        table = [
            [self._index[tuple(base.mul(x, y) for x, y in zip(s, t))] for t in self._tuples]
            for s in self._tuples
        ]
        super().__init__(table, name=f"{base.name}^{n}")

    def encode(self, t: Sequence[int]) -> int:
        return self._index[tuple(t)]

    def decode(self, i: int) -> tuple:
        return self._tuples[i]


_POWER_CACHE: dict = {}


def group_power(g: FiniteGroup, n: int) -> PowerGroup:
    key = (id(g), n)
    if key not in _POWER_CACHE:
        _POWER_CACHE[key] = (g, PowerGroup(g, n))
    return _POWER_CACHE[key][1]


BUILTIN_GROUPS = {
    "trivial": trivial_group,
    "Z2": lambda: cyclic_group(2),
    "Z3": lambda: cyclic_group(3),
    "Z4": lambda: cyclic_group(4),
    "Z5": lambda: cyclic_group(5),
    "Z6": lambda: cyclic_group(6),
    "V4": lambda: direct_product(cyclic_group(2), cyclic_group(2)),
    "S3": lambda: symmetric_group(3),
}


def builtin_group(name: str) -> FiniteGroup:
    try:
        return BUILTIN_GROUPS[name]()
    except KeyError:
        raise GroupError(f"unknown builtin group {name!r}") from None


# ---------------------------------------------------------------------------
# Homomorphisms
# ---------------------------------------------------------------------------


class GroupHom:
    def __init__(self, source: FiniteGroup, target: FiniteGroup, images: Sequence[int]):
        if len(images) != source.order:
            raise GroupError("need one image per source element")
        self.source = source
        self.target = target
        self.images = tuple(images)

    def __call__(self, g: int) -> int:
        return self.images[g]

    def validate(self) -> Report:
        rep = Report("group_hom")
        S, T = self.source, self.target
        for a in S.elements:
            for b in S.elements:
                if self(S.mul(a, b)) != T.mul(self(a), self(b)):
                    rep.add("multiplicativity", (a, b))
        return rep

    def kernel(self) -> list:
        return [g for g in self.source.elements if self(g) == self.target.identity]

    def is_injective(self) -> bool:
        return len(set(self.images)) == self.source.order


def enumerate_homomorphisms(g: FiniteGroup, h: FiniteGroup) -> list:
    gens = g.generating_set()
    out = []
    for imgs in product(h.elements, repeat=len(gens)):
        images = {g.identity: h.identity}
        todo = [g.identity]
        ok = True
        while todo and ok:
            a = todo.pop()
            for s, t in zip(gens, imgs):
                b, val = g.mul(a, s), h.mul(images[a], t)
                if b in images:
                    if images[b] != val:
                        ok = False
                        break
                else:
                    images[b] = val
                    todo.append(b)
        if not ok:
            continue
        hom = GroupHom(g, h, [images[x] for x in g.elements])
        if hom.validate().ok:
            out.append(hom)
    return out


def diagonal_map(g: FiniteGroup, alpha: Sequence[int], m: int) -> GroupHom:
    """``Delta_alpha: G^m -> G^n, (g_1..g_m) -> (g_alpha(1), ..., g_alpha(n))``."""
    src, tgt = group_power(g, m), group_power(g, len(alpha))
    images = [tgt.encode(tuple(src.decode(x)[a] for a in alpha)) for x in src.elements]
    return GroupHom(src, tgt, images)


# ---------------------------------------------------------------------------
# Representations
# ---------------------------------------------------------------------------


class Representation:
    def __init__(self, group: FiniteGroup, dim: int, matrices: Sequence[Matrix]):
        if len(matrices) != group.order:
            raise GroupError("need one matrix per group element")
        self.group = group
        self.dim = dim
        self.matrices = list(matrices)

    def __call__(self, g: int) -> Matrix:
        return self.matrices[g]

    def validate(self) -> Report:
        rep = Report("representation", params={"dim": self.dim})
        G = self.group
        if not self.matrices[G.identity].is_identity():
            rep.add("identity", ())
        for a in G.elements:
            for b in G.elements:
                if self.matrices[a] @ self.matrices[b] != self.matrices[G.mul(a, b)]:
                    rep.add("multiplicativity", (a, b))
        return rep

    @classmethod
    def from_generators(cls, group: FiniteGroup, dim: int, gens: Mapping[int, Matrix]) -> "Representation":
        mats = {group.identity: Matrix.identity(dim)}
        todo = [group.identity]
        while todo:
            a = todo.pop()
            for s, m in gens.items():
                b = group.mul(a, s)
                val = mats[a] @ m
                if b in mats:
                    if mats[b] != val:
                        raise GroupError(f"generator matrices are inconsistent at element {b}")
                else:
                    mats[b] = val
                    todo.append(b)
        if len(mats) != group.order:
            raise GroupError("generators do not generate the group")
        r = cls(group, dim, [mats[g] for g in group.elements])
        if not r.validate().ok:
            raise GroupError("generator matrices do not define a representation")
        return r

    def conjugate(self, p: Matrix) -> "Representation":
        pinv = p.inverse()
        return Representation(self.group, self.dim, [pinv @ m @ p for m in self.matrices])

    def fixed_space(self) -> Subspace:
        el_rows = []
        for m in self.matrices:
            d = m - Matrix.identity(self.dim)
            el_rows.extend(d.tolist())
        if not el_rows:
            return Subspace.full(self.dim)
        return Matrix.from_rows(el_rows, self.dim).kernel()

    def averaging_idempotent(self) -> Matrix:
        out = Matrix.zeros(self.dim, self.dim)
        for m in self.matrices:
            out = out + m
        return out.scale(Fraction(1, self.group.order))

    def restrict(self, hom: GroupHom) -> "Representation":
        return Representation(hom.source, self.dim, [self.matrices[hom(g)] for g in hom.source.elements])


def trivial_rep(g: FiniteGroup, dim: int = 1) -> Representation:
    return Representation(g, dim, [Matrix.identity(dim)] * g.order)


def regular_rep(g: FiniteGroup) -> Representation:
    return Representation(g, g.order, [Matrix.permutation([g.mul(a, x) for x in g.elements]) for a in g.elements])


def permutation_rep(g: FiniteGroup, perms: Sequence[Sequence[int]]) -> Representation:
    return Representation(g, len(perms[0]), [Matrix.permutation(p) for p in perms])


def coset_rep(g: FiniteGroup, subgroup: Sequence[int]) -> Representation:
    """Permutation representation on left cosets ``x H``."""
    sub = set(subgroup)
    cosets = []
    for x in g.elements:
        c = frozenset(g.mul(x, h) for h in sub)
        if c not in cosets:
            cosets.append(c)
    where = {x: i for i, c in enumerate(cosets) for x in c}
    perms = [[where[g.mul(a, min(c))] for c in cosets] for a in g.elements]
    return permutation_rep(g, perms)


def sign_characters(g: FiniteGroup) -> list:
    """Homomorphisms ``G -> {+1, -1}`` (excluding the trivial one)."""
    z2 = cyclic_group(2)
    out = []
    for hom in enumerate_homomorphisms(g, z2):
        if any(hom.images):
            out.append(Representation(g, 1, [Matrix.scalar(1, -1 if hom(x) else 1) for x in g.elements]))
    return out


def direct_sum(reps: Sequence[Representation]) -> Representation:
    g = reps[0].group
    return Representation(
        g, sum(r.dim for r in reps), [block_diag([r.matrices[x] for r in reps]) for x in g.elements]
    )


def tensor_rep(r1: Representation, r2: Representation) -> Representation:
    return Representation(
        r1.group, r1.dim * r2.dim, [kronecker(a, b) for a, b in zip(r1.matrices, r2.matrices)]
    )


def rep_intertwiners(r1: Representation, r2: Representation) -> list:
    gens = r1.group.generating_set()
    return intertwiners([(r1.matrices[s], r2.matrices[s]) for s in gens], r2.dim, r1.dim)


def random_invertible(rng: random.Random, n: int, lo: int = -2, hi: int = 2) -> Matrix:
    while True:
        m = Matrix.from_rows([[rng.randint(lo, hi) for _ in range(n)] for _ in range(n)], n)
        if m.is_invertible():
            return m


def small_reps(g: FiniteGroup, max_dim: int = 4) -> list:
    """Trivial, sign and coset permutation representations of dimension <= max_dim."""
    out = [trivial_rep(g)]
    out.extend(sign_characters(g))
    for sub in g.subgroups():
        idx = g.order // len(sub)
        if 1 < idx <= max_dim:
            out.append(coset_rep(g, sub))
    return out


def random_rep(g: FiniteGroup, rng: random.Random, max_dim: int = 4) -> Representation:
    pool = small_reps(g, max_dim)
    parts, dim = [], 0
    while True:
        cands = [r for r in pool if dim + r.dim <= max_dim]
        if not cands or (parts and rng.random() < 0.4):
            break
        r = rng.choice(cands)
        parts.append(r)
        dim += r.dim
    rep = direct_sum(parts)
    return rep.conjugate(random_invertible(rng, rep.dim))


# ---------------------------------------------------------------------------
# Algebras attached to groups
# ---------------------------------------------------------------------------


def group_algebra(g: FiniteGroup) -> RationalAlgebra:
    table = {(a, b): {g.mul(a, b): Fraction(1)} for a in g.elements for b in g.elements}
    out = RationalAlgebra(g.order, table, unit_vector(g.order, g.identity), name=f"K[{g.name}]")
    out.known_valid = True
    return out


def function_algebra(g: FiniteGroup) -> RationalAlgebra:
    n = g.order
    table = {(h, h): {h: Fraction(1)} for h in g.elements}
    out = RationalAlgebra(n, table, (Fraction(1),) * n, name=f"O({g.name})")
    out.known_valid = True
    return out


class HopfData:
    def __init__(self, algebra: RationalAlgebra, coproduct: Matrix, counit: Sequence, antipode: Matrix):
        self.algebra = algebra
        self.coproduct = coproduct
        self.counit = tuple(counit)
        self.antipode = antipode

    def validate(self) -> Report:
        A = self.algebra
        n = A.dim
        rep = Report("hopf", params={"dim": n})
        I = Matrix.identity(n)
        D = self.coproduct
        if kronecker(D, I) @ D != kronecker(I, D) @ D:
            rep.add("coassociativity", ())
        eps = Matrix.from_rows([self.counit], n)
        one = Matrix.identity(1)
        if kronecker(eps, I) @ D != I or kronecker(I, eps) @ D != I:
            rep.add("counit", ())
        mult = Matrix.from_columns(
            [A.multiply(A.basis_vector(i), A.basis_vector(j)) for i in range(n) for j in range(n)], n
        )
        unit = Matrix.from_columns([A.unit], n)
        S = self.antipode
        conv = unit @ eps
        if mult @ kronecker(S, I) @ D != conv or mult @ kronecker(I, S) @ D != conv:
            rep.add("antipode", ())
        # bialgebra compatibility: Delta(ab) = Delta(a) Delta(b)
        AA = tensor_algebras([A, A])
        for i in range(n):
            for j in range(n):
                lhs = D.apply(A.multiply(A.basis_vector(i), A.basis_vector(j)))
                rhs = AA.multiply(D.column(i), D.column(j))
                if lhs != rhs:
                    rep.add("bialgebra", (i, j))
        if D.apply(A.unit) != AA.unit or eps.apply(A.unit) != one.column(0):
            rep.add("unit_compatibility", ())
        for i in range(n):
            for j in range(n):
                if eps.apply(A.multiply(A.basis_vector(i), A.basis_vector(j)))[0] != self.counit[i] * self.counit[j]:
                    rep.add("counit_multiplicativity", (i, j))
        return rep


def function_hopf_algebra(g: FiniteGroup) -> HopfData:
    """O(G): delta basis, ``Delta(e_h) = sum_{xy=h} e_x ⊗ e_y``."""
    n = g.order
    trip = [(x * n + y, g.mul(x, y), 1) for x in g.elements for y in g.elements]
    cop = Matrix.from_sparse(n * n, n, trip)
    counit = [1 if h == g.identity else 0 for h in g.elements]
    antipode = Matrix.permutation([g.inv(h) for h in g.elements])
    return HopfData(function_algebra(g), cop, counit, antipode)


def group_hopf_algebra(g: FiniteGroup) -> HopfData:
    n = g.order
    cop = Matrix.from_sparse(n * n, n, [(h * n + h, h, 1) for h in g.elements])
    antipode = Matrix.permutation([g.inv(h) for h in g.elements])
    return HopfData(group_algebra(g), cop, [1] * n, antipode)


# ---------------------------------------------------------------------------
# Actions on algebras
# ---------------------------------------------------------------------------


class GroupAction:
    def __init__(self, group: FiniteGroup, algebra: RationalAlgebra, matrices: Sequence[Matrix]):
        if len(matrices) != group.order:
            raise GroupError("need one matrix per group element")
        self.group = group
        self.algebra = algebra
        self.matrices = list(matrices)

    def __call__(self, g: int) -> Matrix:
        return self.matrices[g]

    def representation(self) -> Representation:
        return Representation(self.group, self.algebra.dim, self.matrices)

    def validate(self) -> Report:
        rep = self.representation().validate()
        rep.name = "group_action"
        for g in self.group.elements:
            r = AlgebraMorphism(self.algebra, self.algebra, self.matrices[g]).validate()
            for v in r.violations:
                rep.add(f"automorphism:{v.axiom}", (g,) + v.witness)
        return rep

    @classmethod
    def from_generators(cls, group: FiniteGroup, algebra: RationalAlgebra, gens: Mapping[int, Matrix]) -> "GroupAction":
        r = Representation.from_generators(group, algebra.dim, gens)
        return cls(group, algebra, r.matrices)

    def to_json(self) -> dict:
        return {
            "kind": "action",
            "group": self.group.to_json(),
            "algebra": self.algebra.to_json(),
            "generators": {str(s): self.matrices[s].to_json() for s in self.group.generating_set()},
        }


def trivial_action(g: FiniteGroup, a: RationalAlgebra) -> GroupAction:
    return GroupAction(g, a, [Matrix.identity(a.dim)] * g.order)


def adjoint_action(g: FiniteGroup) -> GroupAction:
    """Conjugation on O(G): ``e_h -> e_{g h g^-1}``."""
    return GroupAction(g, function_algebra(g), [Matrix.permutation([g.conj(x, h) for h in g.elements]) for x in g.elements])


def adjoint_action_group_algebra(g: FiniteGroup) -> GroupAction:
    return GroupAction(g, group_algebra(g), [Matrix.permutation([g.conj(x, h) for h in g.elements]) for x in g.elements])


def translation_action(g: FiniteGroup) -> GroupAction:
    """``(g.f)(x) = f(x g)``, i.e. ``e_h -> e_{h g^-1}``."""
    return GroupAction(
        g, function_algebra(g), [Matrix.permutation([g.mul(h, g.inv(x)) for h in g.elements]) for x in g.elements]
    )


def parity_action(a: RationalAlgebra, n_generators: int) -> GroupAction:
    """Z2 acting on a Clifford/exterior algebra by ``x_i -> -x_i``."""
    z2 = cyclic_group(2)
    signs = [(-1) ** bin(s).count("1") for s in range(1 << n_generators)]
    if len(signs) != a.dim:
        raise GroupError("parity action needs a 2^n dimensional monomial basis")
    flip = Matrix.from_sparse(a.dim, a.dim, [(s, s, signs[s]) for s in range(a.dim)])
    return GroupAction(z2, a, [Matrix.identity(a.dim), flip])


def tensor_action(actions: Sequence[GroupAction], group: FiniteGroup | None = None) -> GroupAction:
    """``G^n`` acting slotwise on the tensor product of the algebras."""
    g = actions[0].group if actions else (group or trivial_group())
    pg = group_power(g, len(actions))
    alg = tensor_algebras([a.algebra for a in actions])
    mats = []
    for x in pg.elements:
        m = Matrix.identity(1)
        for a, gi in zip(actions, pg.decode(x)):
            m = kronecker(m, a.matrices[gi])
        mats.append(m)
    return GroupAction(pg, alg, mats)


def invariants(action: GroupAction) -> tuple:
    """``B = A^G`` with its inclusion morphism."""
    fixed = action.representation().fixed_space()
    try:
        return subalgebra(action.algebra, fixed, name=f"{action.algebra.name}^G")
    except AlgebraError as exc:
        raise GroupError(f"invariants are not a subalgebra: {exc}") from None


# ---------------------------------------------------------------------------
# Coactions of O(G)
# ---------------------------------------------------------------------------


def coaction_from_action(rep: Representation) -> Matrix:
    """``delta(v) = sum_g rho(g) v ⊗ e_g`` with ``v_i ⊗ e_g`` at index ``i * |G| + g``."""
    n, d = rep.group.order, rep.dim
    trip = []
    for g in rep.group.elements:
        m = rep.matrices[g]
        for i in range(d):
            for j in range(d):
                if m[i, j]:
                    trip.append((i * n + g, j, m[i, j]))
    return Matrix.from_sparse(d * n, d, trip)


def action_from_coaction(g: FiniteGroup, delta: Matrix) -> Representation:
    n = g.order
    if delta.rows % n or delta.rows // n != delta.cols:
        raise GroupError("coaction matrix has the wrong shape")
    d = delta.cols
    mats = [
        Matrix.from_rows([[delta[i * n + x, j] for j in range(d)] for i in range(d)], d) for x in g.elements
    ]
    return Representation(g, d, mats)


def validate_coaction(g: FiniteGroup, delta: Matrix) -> Report:
    """Right comodule axioms over O(G)."""
    n, d = g.order, delta.cols
    rep = Report("coaction", params={"dim": d})
    hopf = function_hopf_algebra(g)
    I_d, I_n = Matrix.identity(d), Matrix.identity(n)
    if kronecker(delta, I_n) @ delta != kronecker(I_d, hopf.coproduct) @ delta:
        rep.add("coassociativity", ())
    eps = Matrix.from_rows([hopf.counit], n)
    if kronecker(I_d, eps) @ delta != I_d:
        rep.add("counit", ())
    return rep


# ---------------------------------------------------------------------------
# Equivariant modules
# ---------------------------------------------------------------------------


class EquivariantModule:
    """Right module over ``A`` with a compatible representation of ``G``."""

    def __init__(self, module: RightModule, action: GroupAction, rep: Sequence[Matrix]):
        if action.algebra is not module.algebra and not action.algebra.same_structure(module.algebra):
            raise GroupError("module and action live over different algebras")
        self.module = module
        self.action = action
        self.rep = list(rep)

    @property
    def dim(self) -> int:
        return self.module.dim

    @property
    def group(self) -> FiniteGroup:
        return self.action.group

    def validate(self) -> Report:
        rep = self.module.validate()
        rep.name = "equivariant_module"
        r = Representation(self.group, self.dim, self.rep).validate()
        rep.extend(r)
        A = self.module.algebra
        for g in self.group.generating_set():
            for j in range(A.dim):
                lhs = self.rep[g] @ self.module.action[j]
                rhs = self.module.act_matrix(self.action.matrices[g].column(j)) @ self.rep[g]
                if lhs != rhs:
                    rep.add("compatibility", (g, j))
        return rep

    def homs(self, other: "EquivariantModule") -> list:
        gens = self.group.generating_set()
        from .algebra import module_homs

        return module_homs(self.module, other.module, [(self.rep[s], other.rep[s]) for s in gens])

    def conjugate(self, p: Matrix) -> "EquivariantModule":
        pinv = p.inverse()
        return EquivariantModule(self.module.conjugate(p), self.action, [pinv @ m @ p for m in self.rep])


def free_equivariant_module(u: Representation, action: GroupAction) -> EquivariantModule:
    """``U ⊗ A`` with diagonal G-action and right multiplication on A."""
    A = action.algebra
    I_u = Matrix.identity(u.dim)
    mod = RightModule(A, u.dim * A.dim, [kronecker(I_u, r) for r in A.right_basis_matrices()])
    rep = [kronecker(u.matrices[g], action.matrices[g]) for g in action.group.elements]
    return EquivariantModule(mod, action, rep)


# ---------------------------------------------------------------------------
# Induction and coinduction
# ---------------------------------------------------------------------------


class InducedRep:
    """``K[G''] ⊗_{K[G']} V`` as a quotient of ``K[G''] ⊗ V`` (index ``x * dim V + i``)."""

    def __init__(self, phi: GroupHom, rep: Representation):
        self.phi, self.source_rep = phi, rep
        T, d = phi.target, rep.dim
        total = T.order * d
        rows = []
        for x in T.elements:
            for h in phi.source.generating_set():
                xh = T.mul(x, phi(h))
                m = rep.matrices[h]
                for i in range(d):
                    row = {xh * d + i: Fraction(1)}
                    for k in range(d):
                        if m[k, i]:
                            row[x * d + k] = row.get(x * d + k, 0) - m[k, i]
                    rows.append({c: v for c, v in row.items() if v})
        from .exactlin import Eliminator

        el = Eliminator(total)
        for r in rows:
            if r:
                el.add(r)
        self.relations = Subspace(total, el.reduced_rows())
        self.dim, self.projection, self.section = quotient(total, self.relations)
        I_d = Matrix.identity(d)
        mats = [
            self.projection @ kronecker(Matrix.permutation([T.mul(k, x) for x in T.elements]), I_d) @ self.section
            for k in T.elements
        ]
        self.rep = Representation(T, self.dim, mats)

    def element(self, x: int, v: Sequence) -> tuple:
        d = self.source_rep.dim
        amb = [Fraction(0)] * (self.phi.target.order * d)
        for i, c in enumerate(v):
            amb[x * d + i] = c
        return self.projection.apply(amb)

    def map(self, other: "InducedRep", f: Matrix) -> Matrix:
        """``Ind(f)`` for a G'-map ``f: V -> V'``."""
        I = Matrix.identity(self.phi.target.order)
        return other.projection @ kronecker(I, f) @ self.section


class CoinducedRep:
    """``{F: G'' -> V | F(phi(h) y) = rho(h) F(y)}`` with ``(g.F)(y) = F(y g)``."""

    def __init__(self, phi: GroupHom, rep: Representation):
        self.phi, self.source_rep = phi, rep
        T, d = phi.target, rep.dim
        total = T.order * d
        rows = []
        for y in T.elements:
            for h in phi.source.generating_set():
                hy = T.mul(phi(h), y)
                m = rep.matrices[h]
                for i in range(d):
                    row = {hy * d + i: Fraction(1)}
                    for k in range(d):
                        if m[i, k]:
                            row[y * d + k] = row.get(y * d + k, 0) - m[i, k]
                    row = {c: v for c, v in row.items() if v}
                    if row:
                        rows.append(row)
        from .exactlin import nullspace_of_rows

        self.space = Subspace(total, nullspace_of_rows(rows, total))
        self.dim = self.space.dim
        self.basis = self.space.basis_matrix()
        piv = self.space.pivots
        self._pivots = piv
        I_d = Matrix.identity(d)
        mats = []
        for k in T.elements:
            # (k.F)(y) = F(y k): new block y reads old block y k
            perm = Matrix.from_sparse(T.order, T.order, [(y, T.mul(y, k), 1) for y in T.elements])
            mats.append(self.coordinates_matrix(kronecker(perm, I_d) @ self.basis))
        self.rep = Representation(T, self.dim, mats)

    def coordinates_matrix(self, m: Matrix) -> Matrix:
        """Coordinates of the columns of ``m`` (which must lie in the space)."""
        rows = [m.row(p) for p in self._pivots]
        out = Matrix.from_rows(rows, m.cols) if rows else Matrix.zeros(0, m.cols)
        if self.basis.cols and self.basis @ out != m:
            raise LinAlgError("columns do not lie in the coinduced space")
        if not self.basis.cols and not m.is_zero():
            raise LinAlgError("columns do not lie in the coinduced space")
        return out

    def map(self, other: "CoinducedRep", f: Matrix) -> Matrix:
        I = Matrix.identity(self.phi.target.order)
        return other.coordinates_matrix(kronecker(I, f) @ self.basis)


def induction_iso(ind: InducedRep, coind: CoinducedRep) -> Matrix:
    """``Theta(x ⊗ v)(y) = |ker phi|^-1 sum_{phi(g) = y x} rho(g) v``."""
    phi, rep = ind.phi, ind.source_rep
    T, d = phi.target, rep.dim
    k = len(phi.kernel())
    fibers: dict = {}
    for g in phi.source.elements:
        fibers.setdefault(phi(g), []).append(g)
    trip = []
    for x in T.elements:
        for y in T.elements:
            for g in fibers.get(T.mul(y, x), ()):
                m = rep.matrices[g]
                for i in range(d):
                    for j in range(d):
                        if m[i, j]:
                            trip.append((y * d + i, x * d + j, m[i, j] / k))
    ambient = Matrix.from_sparse(T.order * d, T.order * d, trip)
    return coind.coordinates_matrix(ambient @ ind.section)


def induced_coinduced_check(
    phi: GroupHom,
    rep: Representation,
    other: Representation | None = None,
    test_map: Matrix | None = None,
) -> Report:
    """Build both functors on ``rep`` and verify the explicit isomorphism."""
    rep_out = Report("induced_coinduced", params={"source_order": phi.source.order, "target_order": phi.target.order, "dim": rep.dim})
    hv = phi.validate()
    if not hv.ok:
        raise GroupError(f"not a group homomorphism: {hv.violations[0].witness}")
    ind, coind = InducedRep(phi, rep), CoinducedRep(phi, rep)
    rep_out.stats.update({"induced_dim": ind.dim, "coinduced_dim": coind.dim})
    if ind.dim != coind.dim:
        rep_out.add("dimension", (ind.dim, coind.dim))
        return rep_out
    theta = induction_iso(ind, coind)
    if not theta.is_invertible():
        rep_out.add("invertibility", ())
    for g in phi.target.elements:
        if theta @ ind.rep.matrices[g] != coind.rep.matrices[g] @ theta:
            rep_out.add("equivariance", (g,))
    if other is not None and test_map is not None:
        ind2, coind2 = InducedRep(phi, other), CoinducedRep(phi, other)
        theta2 = induction_iso(ind2, coind2)
        if theta2 @ ind.map(ind2, test_map) != coind.map(coind2, test_map) @ theta:
            rep_out.add("naturality", ())
    return rep_out
