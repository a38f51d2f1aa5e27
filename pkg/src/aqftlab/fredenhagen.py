"""Local-to-global extension: universal algebra, descent objects, loop category.

Everything is indexed by the bounded slice ``J⊗/(d)`` of the envelope
functor.  Transports along slice morphisms use the coinduced model
``{F: G^n -> W | F(Delta_alpha(h) y) = h . F(y)}`` with ``A_x`` acting by
``(F . a)(y) = F(y) . T_k(y . a)`` and ``G^n`` by right translation.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Mapping, Sequence

from .algebra import (
    RationalAlgebra,
    DegreeBoundExceeded,
    PresentedAlgebra,
    PresentedModule,
    RightModule,
    rules_from_relations,
    tensor_algebras,
)
from .aqft import AQFT, tuple_map
from .exactlin import (
    LinAlgError,
    Matrix,
    Subspace,
    block_diag,
    intertwiner_rows,
    nullspace_of_rows,
    unflatten,
)
from .fincat import FinFunctor, OrthogonalCategory, Report
from .grouprep import (
    CoinducedRep,
    EquivariantModule,
    FiniteGroup,
    GroupAction,
    GroupHom,
    Representation,
    diagonal_map,
    direct_sum,
    group_power,
    random_invertible,
    sign_characters,
    tensor_action,
    trivial_action,
    trivial_group,
    trivial_rep,
)
from .operad import DEFAULT_TUPLE_CAP, envelope_functor

DEFAULT_DEGREE_BOUND = 6
DEFAULT_PRIME_BOUND = 10_000


class ExtensionError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Slice context
# ---------------------------------------------------------------------------


class ExtensionSite:
    """Bounded slice ``J⊗/(d)`` with tuple algebras, actions and tuple maps.

    ``theory`` lives on the source of ``j``; ``actions`` (optional) make it
    G-equivariant, otherwise the trivial group acts.
    """

    def __init__(
        self,
        theory: AQFT,
        j: FinFunctor,
        target: OrthogonalCategory,
        d,
        actions: Mapping | None = None,
        group: FiniteGroup | None = None,
        tuple_cap: int = DEFAULT_TUPLE_CAP,
    ):
        self.theory = theory
        self.j = j
        self.target = target
        self.d = d
        self.tuple_cap = tuple_cap
        env = envelope_functor(j, theory.site, target, tuple_cap)
        self.slice = env.slice_over(d)
        self.category = self.slice.category
        if actions is None:
            g = group or trivial_group()
            actions = {o: trivial_action(g, theory.algebras[o]) for o in theory.site.base.objects}
        self.actions = dict(actions)
        self.group = next(iter(self.actions.values())).group if self.actions else (group or trivial_group())
        self._tuple_alg: dict = {}
        self._tuple_act: dict = {}
        self._tmap: dict = {}
        self._delta: dict = {}

    # -- indexing -----------------------------------------------------
    @property
    def objects(self) -> list:
        return self.category.objects

    def sources(self, x) -> tuple:
        return x[0]

    def envelope_morphism(self, k: int):
        return self.slice.projection_morphisms[k]

    def tuple_algebra(self, x):
        key = x[0]
        if key not in self._tuple_alg:
            self._tuple_alg[key] = tensor_algebras([self.theory.algebras[c] for c in key])
        return self._tuple_alg[key]

    def tuple_action(self, x) -> GroupAction:
        key = x[0]
        if key not in self._tuple_act:
            act = tensor_action([self.actions[c] for c in key], group=self.group)
            act.algebra = self.tuple_algebra(x)
            self._tuple_act[key] = act
        return self._tuple_act[key]

    def tuple_map(self, k: int) -> Matrix:
        if k not in self._tmap:
            self._tmap[k] = tuple_map(self.theory, self.envelope_morphism(k))
        return self._tmap[k]

    def delta(self, k: int) -> GroupHom:
        """``Delta_alpha: G^m -> G^n`` for a slice morphism ``x -> y``."""
        m = self.envelope_morphism(k)
        key = (m.alpha, len(m.target))
        if key not in self._delta:
            self._delta[key] = diagonal_map(self.group, m.alpha, len(m.target))
        return self._delta[key]

    def params(self) -> dict:
        return {"tuple_cap": self.tuple_cap, "over": str(self.d), "slice_objects": len(self.objects), "group_order": self.group.order}

    def terminal(self):
        c = self.category
        for t in c.objects:
            if all(len(c.hom(a, t)) == 1 for a in c.objects):
                return t
        return None


def object_label(x) -> str:
    cs, op = x
    return "(" + ",".join(str(c) for c in cs) + ")"


# ---------------------------------------------------------------------------
# Universal algebra
# ---------------------------------------------------------------------------


@dataclass
class UniversalAlgebraResult:
    algebra: PresentedAlgebra
    site: ExtensionSite
    cocone: dict
    degree_bound: int
    generators: dict = field(default_factory=dict)

    def chi(self, x) -> Matrix:
        return self.cocone[x]

    def check_cocone(self) -> Report:
        """``chi_y ∘ T_k = chi_x`` on every slice morphism, within the bound."""
        rep = Report("cocone", params={"degree_bound": self.degree_bound, **self.site.params()})
        cat = self.site.category
        checked = 0
        for k in cat.morphism_ids():
            x, y = cat.source(k), cat.target(k)
            if self.cocone.get(x) is None or self.cocone.get(y) is None:
                continue
            if self.cocone[y] @ self.site.tuple_map(k) != self.cocone[x]:
                rep.add("cocone", (object_label(x), object_label(y)))
            checked += 1
        rep.stats["checked_morphisms"] = checked
        rep.stats["beyond_bound"] = sum(1 for v in self.cocone.values() if v is None)
        return rep


def universal_algebra(
    a: AQFT,
    j: FinFunctor,
    target: OrthogonalCategory,
    d,
    degree_bound: int = DEFAULT_DEGREE_BOUND,
    tuple_cap: int = DEFAULT_TUPLE_CAP,
) -> UniversalAlgebraResult:
    """Colimit of the tuple algebras over the slice, presented by generators and relations.

    One generator per basis element of each singleton slice object;
    relations are the structure constants, the unit, identifications
    along singleton morphisms and commutation of distinct tuple slots.
    """
    if degree_bound < 2:
        raise ExtensionError("degree bound must be at least 2")
    site = ExtensionSite(a, j, target, d, tuple_cap=tuple_cap)
    cat = site.category
    singles = [x for x in cat.objects if len(x[0]) == 1]
    gens, index = [], {}
    for x in singles:
        alg = a.algebras[x[0][0]]
        for i in range(alg.dim):
            index[(x, i)] = len(gens)
            gens.append(f"{object_label(x)}:{i}")
    rels = []
    for x in singles:
        alg = a.algebras[x[0][0]]
        g = [index[(x, i)] for i in range(alg.dim)]
        for i in range(alg.dim):
            for jj in range(alg.dim):
                r = {(g[i], g[jj]): Fraction(1)}
                for k, c in alg.basis_product(i, jj).items():
                    r[(g[k],)] = r.get((g[k],), 0) - c
                rels.append(r)
        r = {(): Fraction(-1)}
        for i, c in enumerate(alg.unit):
            if c:
                r[(g[i],)] = r.get((g[i],), 0) + c
        rels.append(r)
    single_set = set(singles)
    for k in cat.morphism_ids():
        x, y = cat.source(k), cat.target(k)
        if x in single_set and y in single_set and x != y:
            m = site.tuple_map(k)
            for i in range(m.cols):
                r = {(index[(x, i)],): Fraction(1)}
                for kk in range(m.rows):
                    if m[kk, i]:
                        w = (index[(y, kk)],)
                        r[w] = r.get(w, 0) - m[kk, i]
                rels.append(r)
    slot_pairs = set()
    for x in cat.objects:
        slots = _slot_singletons(x)
        for p in range(len(slots)):
            for q in range(p + 1, len(slots)):
                slot_pairs.add((slots[p], slots[q]))
    for s1, s2 in sorted(slot_pairs, key=lambda pr: (cat.objects.index(pr[0]), cat.objects.index(pr[1]))):
        a1, a2 = a.algebras[s1[0][0]], a.algebras[s2[0][0]]
        for i in range(a1.dim):
            for jj in range(a2.dim):
                u, v = index[(s1, i)], index[(s2, jj)]
                rels.append({(u, v): Fraction(1), (v, u): Fraction(-1)})
    rules = rules_from_relations([{w: c for w, c in r.items() if c} for r in rels])
    alg = PresentedAlgebra(gens, rules, degree_bound)
    cocone = {}
    for x in cat.objects:
        cocone[x] = _chi(alg, a, x, index)
    return UniversalAlgebraResult(alg, site, cocone, degree_bound, index)


def _slot_singletons(x) -> list:
    from .operad import PFOperation

    cs, op = x
    return [((c,), PFOperation(op.target, (c,), (f,))) for c, f in zip(cs, op.morphisms)]


def _chi(alg: PresentedAlgebra, a: AQFT, x, index) -> Matrix | None:
    slots = _slot_singletons(x)
    dims = [a.algebras[c].dim for c in x[0]]
    cols = []
    try:
        for idx in product(*[range(dd) for dd in dims]):
            word = tuple(index[(s, i)] for s, i in zip(slots, idx))
            cols.append(alg.to_vector({word: 1}))
    except DegreeBoundExceeded:
        return None
    return Matrix.from_columns(cols, alg.dim)


def presented_module(res: UniversalAlgebraResult | PresentedAlgebra, dim: int, values: Mapping[int, Matrix]) -> PresentedModule:
    """Module from matrices on the surviving generators; eliminated ones follow their rules."""
    alg = res.algebra if isinstance(res, UniversalAlgebraResult) else res
    mats: list = [None] * len(alg.generators)
    for g, m in values.items():
        mats[g] = m
    linear = {lead[0]: tail for lead, tail in alg.rules if len(lead) == 1}
    for g in range(len(mats)):
        if mats[g] is None and g not in linear:
            mats[g] = Matrix.zeros(dim, dim)
    # eliminated generators: tails only involve surviving generators
    for g, tail in linear.items():
        out = Matrix.zeros(dim, dim)
        for w, c in tail.items():
            m = Matrix.identity(dim)
            for h in w:
                m = mats[h] @ m
            out = out + m.scale(c)
        mats[g] = out
    return PresentedModule(alg, dim, mats)


def surviving_generators(alg: PresentedAlgebra) -> list:
    eliminated = {lead[0] for lead, _ in alg.rules if len(lead) == 1}
    return [g for g in range(len(alg.generators)) if g not in eliminated]


# ---------------------------------------------------------------------------
# Transports along slice morphisms
# ---------------------------------------------------------------------------


class Transport:
    """``T_k(W)`` for ``k: x -> y`` and an equivariant module ``W`` over ``A_y``."""

    def __init__(self, site: ExtensionSite, k: int, w: EquivariantModule):
        self.site, self.k, self.w = site, k, w
        cat = site.category
        self.x, self.y = cat.source(k), cat.target(k)
        phi = site.delta(k)
        self.coind = CoinducedRep(phi, Representation(phi.source, w.dim, w.rep))
        Ax = site.tuple_algebra(self.x)
        act_x = site.tuple_action(self.x)
        tk = site.tuple_map(k)
        G = phi.target
        mats = []
        for a in range(Ax.dim):
            blocks = []
            for y in G.elements:
                blocks.append(w.module.act_matrix(tk.apply(act_x.matrices[y].column(a))))
            amb = block_diag(blocks)
            mats.append(self.coind.coordinates_matrix(amb @ self.coind.basis) if self.coind.dim else Matrix.zeros(0, 0))
        module = RightModule(Ax, self.coind.dim, mats)
        self.module = EquivariantModule(module, act_x, self.coind.rep.matrices)

    @property
    def dim(self) -> int:
        return self.coind.dim


def factorization_right_adjoint(site: ExtensionSite, k: int, w: EquivariantModule) -> EquivariantModule:
    return Transport(site, k, w).module


def transport_map(t1: Transport, t2: Transport, f: Matrix) -> Matrix:
    """``T_k(f): T_k(W) -> T_k(W')`` for a map ``f: W -> W'``."""
    if t1.dim == 0 or t2.dim == 0:
        return Matrix.zeros(t2.dim, t1.dim)
    return t1.coind.map(t2.coind, f)


def composite_iso(inner: Transport, outer: Transport, direct: Transport) -> Matrix:
    """``C_{k,l}: T_k T_l W -> T_{lk} W``, ``F -> (y -> F(y)(e))``.

    ``inner`` is ``T_l W``, ``outer`` is ``T_k`` applied to ``inner.module``
    and ``direct`` is ``T_{lk} W``.
    """
    d_w = inner.w.dim
    e_y = inner.coind.phi.target.identity
    ext = Matrix.from_sparse(d_w, inner.coind.space.ambient_dim, [(i, e_y * d_w + i, 1) for i in range(d_w)])
    pick = ext @ inner.coind.basis if inner.dim else Matrix.zeros(d_w, 0)
    n_x = outer.coind.phi.target.order
    amb = block_diag([pick] * n_x)
    if outer.dim == 0 or direct.dim == 0:
        return Matrix.zeros(direct.dim, outer.dim)
    return direct.coind.coordinates_matrix(amb @ outer.coind.basis)


def unitor(t: Transport) -> Matrix:
    """``T_id(W) -> W``, ``F -> F(e)``."""
    d_w = t.w.dim
    e = t.coind.phi.target.identity
    ext = Matrix.from_sparse(d_w, t.coind.space.ambient_dim, [(i, e * d_w + i, 1) for i in range(d_w)])
    return ext @ t.coind.basis if t.dim else Matrix.zeros(d_w, 0)


# ---------------------------------------------------------------------------
# Descent objects
# ---------------------------------------------------------------------------


@dataclass
class DescentObject:
    site: ExtensionSite
    modules: dict
    xi: dict
    _transports: dict = field(default_factory=dict, repr=False)

    def transport(self, k: int) -> Transport:
        if k not in self._transports:
            y = self.site.category.target(k)
            self._transports[k] = Transport(self.site, k, self.modules[y])
        return self._transports[k]


def _as_equivariant(site: ExtensionSite, x, module: RightModule) -> EquivariantModule:
    act = site.tuple_action(x)
    return EquivariantModule(module, act, [Matrix.identity(module.dim)] * act.group.order)


def descent_check(candidate: DescentObject, max_pairs: int | None = None) -> Report:
    """Invertibility, module and G-compatibility of every ``xi`` plus both cocycle conditions."""
    site = candidate.site
    cat = site.category
    rep = Report("descent", params=site.params())
    missing = [x for x in cat.objects if x not in candidate.modules]
    if missing or any(k not in candidate.xi for k in cat.morphism_ids()):
        raise ExtensionError("candidate is not indexed by the full slice")
    for x in cat.objects:
        for v in candidate.modules[x].validate().violations:
            rep.add(f"module:{v.axiom}", (object_label(x),) + v.witness)
    if not rep.ok:
        return rep
    for k in cat.morphism_ids():
        x, y = cat.source(k), cat.target(k)
        t = candidate.transport(k)
        xi = candidate.xi[k]
        vx = candidate.modules[x]
        lab = (object_label(x), object_label(y))
        if xi.shape != (vx.dim, t.dim) or (xi.rows and not xi.is_invertible()):
            rep.add("xi_not_invertible", lab)
            continue
        for a in site.tuple_algebra(x).generators():
            if xi @ t.module.module.action[a] != vx.module.action[a] @ xi:
                rep.add("xi_not_module_map", lab + (a,))
                break
        for g in vx.group.generating_set():
            if xi @ t.module.rep[g] != vx.rep[g] @ xi:
                rep.add("xi_not_equivariant", lab + (g,))
                break
        if cat.is_identity(k) and xi != unitor(t):
            rep.add("identity_cocycle", (object_label(x),))
    if not rep.ok:
        return rep
    pairs = 0
    for k in cat.morphism_ids():
        x, y = cat.source(k), cat.target(k)
        for l in cat.out_of(y):
            z = cat.target(l)
            lk = cat.compose(l, k)
            inner = candidate.transport(l)
            outer = Transport(site, k, inner.module)
            direct = candidate.transport(lk)
            c = composite_iso(inner, outer, direct)
            lhs = candidate.xi[k] @ transport_map(outer, candidate.transport(k), candidate.xi[l])
            rhs = candidate.xi[lk] @ c
            if lhs != rhs:
                rep.add("composition_cocycle", (object_label(x), object_label(y), object_label(z)))
                return rep
            pairs += 1
            if max_pairs is not None and pairs >= max_pairs:
                rep.stats["composable_pairs"] = pairs
                return rep
    rep.stats["composable_pairs"] = pairs
    return rep


def module_to_descent(res: UniversalAlgebraResult, v: PresentedModule) -> DescentObject:
    """Restrictions ``chi_x^* V`` with identity coherences."""
    site = res.site
    mods = {}
    for x in site.category.objects:
        chi = res.cocone[x]
        if chi is None:
            raise ExtensionError(f"cocone component at {object_label(x)} exceeds the degree bound")
        alg = site.tuple_algebra(x)
        action = [v.poly_action(res.algebra.poly(chi.column(i))) for i in range(alg.dim)]
        mods[x] = _as_equivariant(site, x, RightModule(alg, v.dim, action))
    obj = DescentObject(site, mods, {})
    for k in site.category.morphism_ids():
        t = obj.transport(k)
        obj.xi[k] = unitor(t)
    return obj


def descent_from_terminal(site: ExtensionSite, w: EquivariantModule) -> DescentObject:
    """``V_x = T_{u_x}(W)`` over a terminal slice object with ``xi_k = C_{k, u_y}``."""
    t = site.terminal()
    if t is None:
        raise ExtensionError("slice has no terminal object")
    cat = site.category
    u = {x: cat.hom(x, t)[0] for x in cat.objects}
    base = {x: Transport(site, u[x], w) for x in cat.objects}
    mods = {x: base[x].module for x in cat.objects}
    obj = DescentObject(site, mods, {})
    for k in cat.morphism_ids():
        x, y = cat.source(k), cat.target(k)
        inner = base[y]
        outer = obj.transport(k)
        obj.xi[k] = composite_iso(inner, outer, base[x])
    return obj


@dataclass
class DescentHomSpace:
    source: DescentObject
    target: DescentObject
    basis: list

    @property
    def dim(self) -> int:
        return len(self.basis)


def descent_hom(x: DescentObject, y: DescentObject) -> DescentHomSpace:
    """Families ``Gamma_c`` of equivariant module maps commuting with every ``xi``."""
    site = x.site
    cat = site.category
    objs = cat.objects
    offsets, total = {}, 0
    for o in objs:
        offsets[o] = total
        total += y.modules[o].dim * x.modules[o].dim
    rows: list = []
    for o in objs:
        vx, vy = x.modules[o], y.modules[o]
        pairs = [(vx.module.action[a], vy.module.action[a]) for a in site.tuple_algebra(o).generators()]
        pairs += [(vx.rep[g], vy.rep[g]) for g in vx.group.generating_set()]
        rows.extend(intertwiner_rows(pairs, vy.dim, vx.dim, offsets[o]))
    for k in cat.morphism_ids():
        s, t = cat.source(k), cat.target(k)
        tx, ty = x.transport(k), y.transport(k)
        xiX, xiY = x.xi[k], y.xi[k]
        dVs, dWs = x.modules[s].dim, y.modules[s].dim
        dVt, dWt = x.modules[t].dim, y.modules[t].dim
        S = tx.coind.basis
        piv = ty.coind._pivots
        # T_k(Gamma_t)[p, c] = sum_j Gamma_t[i_p, j] S[blk_p * dVt + j, c]
        tk_terms = []
        for p in piv:
            blk, i_p = divmod(p, dWt)
            tk_terms.append((blk, i_p))
        for r in range(dWs):
            for c in range(tx.dim):
                row: dict = {}
                for jj in range(dVs):
                    xv = xiX[jj, c]
                    if xv:
                        key = offsets[s] + r * dVs + jj
                        row[key] = row.get(key, 0) + xv
                for p, (blk, i_p) in enumerate(tk_terms):
                    yv = xiY[r, p]
                    if not yv:
                        continue
                    for jj in range(dVt):
                        sv = S[blk * dVt + jj, c]
                        if sv:
                            key = offsets[t] + i_p * dVt + jj
                            row[key] = row.get(key, 0) - yv * sv
                row = {kk: v for kk, v in row.items() if v}
                if row:
                    rows.append(row)
    sols = nullspace_of_rows(rows, total)
    basis = []
    for v in sols:
        basis.append({o: unflatten(v, y.modules[o].dim, x.modules[o].dim, offsets[o]) for o in objs})
    return DescentHomSpace(x, y, basis)


# ---------------------------------------------------------------------------
# Loop category
# ---------------------------------------------------------------------------


class _LazyMatrices:
    def __init__(self, model: "InducedModel"):
        self.model = model

    def __getitem__(self, k: int) -> Matrix:
        return self.model.matrix(k)


class InducedModel:
    """``K[K] ⊗_{K[H]} V`` along an injective ``phi`` with basis ``[r_c ⊗ v]``.

    Coset representatives are chosen with ``e`` for the identity coset.
    """

    def __init__(self, phi: GroupHom, rep: Representation, reps: Sequence[int] | None = None):
        if not phi.is_injective():
            raise ExtensionError("induced model needs an injective homomorphism")
        K, H = phi.target, phi.source
        self.phi, self.source_rep = phi, rep
        self._pre = {phi(h): h for h in H.elements}
        if reps is None:
            reps, seen = [], set()
            for k in [K.identity] + [x for x in K.elements if x != K.identity]:
                if k not in seen:
                    reps.append(k)
                    seen.update(K.mul(k, phi(h)) for h in H.elements)
        self.reps = list(reps)
        self._coset = {}
        for c, r in enumerate(self.reps):
            for h in H.elements:
                self._coset[K.mul(r, phi(h))] = (c, h)
        if len(self._coset) != K.order:
            raise ExtensionError("coset representatives do not cover the group")
        self.dim = len(self.reps) * rep.dim
        self._mats: dict = {}
        self._rep = None

    @property
    def matrices(self) -> "_LazyMatrices":
        return _LazyMatrices(self)

    def matrix(self, k: int) -> Matrix:
        """Action of ``k``: ``k r_c = r_c' phi(h)`` sends ``[r_c ⊗ v]`` to ``[r_c' ⊗ h v]``."""
        if k not in self._mats:
            K, d = self.phi.target, self.source_rep.dim
            trip = []
            for c, r in enumerate(self.reps):
                c2, h = self._coset[K.mul(k, r)]
                m = self.source_rep.matrices[h]
                for i in range(d):
                    for jj in range(d):
                        if m[i, jj]:
                            trip.append((c2 * d + i, c * d + jj, m[i, jj]))
            self._mats[k] = Matrix.from_sparse(self.dim, self.dim, trip)
        return self._mats[k]

    @property
    def rep(self) -> Representation:
        if self._rep is None:
            self._rep = Representation(self.phi.target, self.dim, [self.matrix(k) for k in self.phi.target.elements])
        return self._rep

    def decompose(self, k: int) -> tuple:
        """``k = r_c phi(h)``; returns ``(c, h)``."""
        return self._coset[k]

    def map(self, f: Matrix) -> Matrix:
        return block_diag([f] * len(self.reps))


def transitivity_iso(outer: InducedModel, inner: InducedModel, total: InducedModel) -> tuple:
    """``psi(K) ⊗ (phi(H) ⊗ V) -> (psi phi)(K) ⊗ V``, ``y ⊗ (x ⊗ v) -> y psi(x) ⊗ v``.

    Returns the isomorphism and its inverse; both are block monomial.
    """
    psi = outer.phi
    K, H = psi.target, inner.phi.source
    rep = inner.source_rep
    d = rep.dim
    fwd, bwd = [], []
    for c, y in enumerate(outer.reps):
        for c1, x in enumerate(inner.reps):
            c2, h = total.decompose(K.mul(y, psi(x)))
            m, minv = rep.matrices[h], rep.matrices[H.inv(h)]
            src = (c * len(inner.reps) + c1) * d
            for i in range(d):
                for jj in range(d):
                    if m[i, jj]:
                        fwd.append((c2 * d + i, src + jj, m[i, jj]))
                    if minv[i, jj]:
                        bwd.append((src + i, c2 * d + jj, minv[i, jj]))
    return Matrix.from_sparse(total.dim, outer.dim, fwd), Matrix.from_sparse(outer.dim, total.dim, bwd)


class LoopModels:
    """Induced models for ``Delta: G -> G^2``, ``phi^i: G^2 -> G^3`` and ``Delta_3``."""

    def __init__(self, g: FiniteGroup):
        self.group = g
        self.g2, self.g3 = group_power(g, 2), group_power(g, 3)
        e = g.identity
        self.delta = diagonal_map(g, (0, 0), 1)
        self.delta3 = diagonal_map(g, (0, 0, 0), 1)
        # phi^0 (g1, g1, g2), phi^1 (g1, g2, g2), phi^2 (g1, g2, g1)
        self.phis = [diagonal_map(g, alpha, 2) for alpha in ((0, 0, 1), (0, 1, 1), (0, 1, 0))]
        self.delta_reps = [self.g2.encode((e, x)) for x in g.elements]
        self.delta3_reps = [self.g3.encode((e, x, y)) for x in g.elements for y in g.elements]

    def delta_model(self, v: Representation) -> InducedModel:
        return InducedModel(self.delta, v, self.delta_reps)

    def delta3_model(self, v: Representation) -> InducedModel:
        return InducedModel(self.delta3, v, self.delta3_reps)

    def coface(self, i: int, v: Representation, theta: Matrix) -> Matrix:
        """``delta^i(theta)`` on ``Delta_3! V`` via the transitivity isomorphism."""
        inner = self.delta_model(v)
        outer = InducedModel(self.phis[i], inner)
        total = self.delta3_model(v)
        iso, inv = transitivity_iso(outer, inner, total)
        return iso @ outer.map(theta) @ inv

    def invariant_embedding(self, v: Representation) -> Matrix:
        """``V -> (Delta_! V)^{1 x G}``, ``v -> sum_x [(e, x) ⊗ v]``: the codegeneracy model."""
        d, n = v.dim, self.group.order
        return Matrix.from_sparse(n * d, d, [(x * d + i, i, 1) for x in range(n) for i in range(d)])

    def codegeneracy(self, v: Representation, theta: Matrix) -> Matrix:
        """``epsilon^0(theta)``: theta restricted to the invariants of ``1 x G``."""
        emb = self.invariant_embedding(v)
        img = theta @ emb
        sub = Subspace.span(emb.rows, emb.columns())
        piv = list(sub.pivots)
        coords = Matrix.from_rows([img.row(p) for p in piv], img.cols)
        base = Matrix.from_rows([emb.row(p) for p in piv], emb.cols)
        if emb @ (base.inverse() @ coords) != img:
            raise LinAlgError("theta does not preserve the invariants")
        return base.inverse() @ coords


@dataclass
class ThetaObject:
    v: Representation
    theta: Matrix


def loop_category_check(g: FiniteGroup, obj: ThetaObject, models: LoopModels | None = None) -> Report:
    m = models or LoopModels(g)
    rep = Report("loop_category", params={"group_order": g.order, "dim": obj.v.dim})
    d2 = m.delta_model(obj.v)
    th = obj.theta
    if th.shape != (d2.dim, d2.dim):
        rep.add("shape", (th.shape,))
        return rep
    if not th.is_invertible():
        rep.add("not_invertible", ())
    for s in m.g2.generating_set():
        if th @ d2.matrix(s) != d2.matrix(s) @ th:
            rep.add("not_equivariant", (m.g2.decode(s),))
    if not rep.ok:
        return rep
    if not m.codegeneracy(obj.v, th).is_identity():
        rep.add("codegeneracy", ())
    c0, c1, c2 = (m.coface(i, obj.v, th) for i in range(3))
    if c0 @ c2 != c1:
        rep.add("cocycle", ())
    return rep


def theta_to_coaction(g: FiniteGroup, obj: ThetaObject) -> Matrix:
    """``vartheta(v) = theta([(e, e) ⊗ v]) = sum_x x ⊗ v_x`` with index ``x * dim V + i``."""
    d = obj.v.dim
    sect = Matrix.from_sparse(g.order * d, d, [(g.identity * d + i, i, 1) for i in range(d)])
    return obj.theta @ sect


def coaction_to_theta(g: FiniteGroup, v: Representation, vartheta: Matrix) -> ThetaObject:
    """``theta([(e, x) ⊗ v]) = (e, x) . vartheta(v) = sum_z [(e, x z) ⊗ v_z]``."""
    d, n = v.dim, g.order
    trip = []
    for x in g.elements:
        for z in g.elements:
            xz = g.mul(x, z)
            for i in range(d):
                for jj in range(d):
                    c = vartheta[z * d + i, jj]
                    if c:
                        trip.append((xz * d + i, x * d + jj, c))
    return ThetaObject(v, Matrix.from_sparse(n * d, n * d, trip))


def coaction_components(g: FiniteGroup, vartheta: Matrix) -> list:
    """``P_x: v -> v_x``; the O(G)-module structure ``v . e_x = v_x``."""
    d = vartheta.cols
    return [Matrix.from_rows([vartheta.row(x * d + i) for i in range(d)], d) for x in g.elements]


def validate_kg_coaction(g: FiniteGroup, v: Representation, vartheta: Matrix) -> Report:
    """Left K[G]-coaction axioms plus adjoint equivariance."""
    rep = Report("kg_coaction", params={"dim": v.dim})
    comps = coaction_components(g, vartheta)
    d = v.dim
    total = Matrix.zeros(d, d)
    for x, p in enumerate(comps):
        total = total + p
        for y, q in enumerate(comps):
            expect = p if x == y else Matrix.zeros(d, d)
            if p @ q != expect:
                rep.add("coassociativity", (x, y))
    if not total.is_identity():
        rep.add("counit", ())
    for s in g.generating_set():
        for x in g.elements:
            if v.matrices[s] @ comps[x] != comps[g.conj(s, x)] @ v.matrices[s]:
                rep.add("adjoint_equivariance", (s, x))
    return rep


def random_theta_object(g: FiniteGroup, rng: random.Random, max_parts: int = 2) -> ThetaObject:
    """Valid object built from graded induced representations, in a random basis."""
    parts, grading = [], []
    for _ in range(rng.randint(1, max_parts)):
        cls = rng.choice(g.conjugacy_classes())
        x = cls[0]
        cent = g.centralizer(x)
        sub = FiniteGroup([[cent.index(g.mul(a, b)) for b in cent] for a in cent], name="C")
        small = [trivial_rep(sub)] + sign_characters(sub)
        u = rng.choice(small)
        # Ind_C^G U with g_i ⊗ u in degree g_i x g_i^-1
        emb = GroupHom(sub, g, cent)
        ind = InducedModel(emb, u)
        parts.append(ind.rep)
        grading.append([g.conj(r, x) for r in ind.reps for _ in range(u.dim)])
    v = direct_sum(parts)
    grades = [gr for gs in grading for gr in gs]
    d, n = v.dim, g.order
    trip = [(grades[i] * d + i, i, 1) for i in range(d)]
    vartheta = Matrix.from_sparse(n * d, d, trip)
    p = random_invertible(rng, d)
    pinv = p.inverse()
    v2 = v.conjugate(p)
    vartheta2 = block_diag([pinv] * n) @ vartheta @ p
    return coaction_to_theta(g, v2, vartheta2)


# ---------------------------------------------------------------------------
# Counting simple objects
# ---------------------------------------------------------------------------


def centralizer_count(g: FiniteGroup) -> int:
    """Sum over conjugacy classes of the number of classes of the centralizer."""
    total = 0
    for cls in g.conjugacy_classes():
        cent = g.centralizer(cls[0])
        seen = set()
        for a in cent:
            if a in seen:
                continue
            total += 1
            seen.update(g.conj(b, a) for b in cent)
    return total


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    q = 2
    while q * q <= p:
        if p % q == 0:
            return False
        q += 1
    return True


def splitting_prime(g: FiniteGroup, bound: int = DEFAULT_PRIME_BOUND) -> int:
    e = g.exponent()
    for p in range(2, bound + 1):
        if _is_prime(p) and p % e == 1 % e and g.order % p:
            return p
    raise ExtensionError(f"no prime p <= {bound} with p = 1 mod {e} and p not dividing {g.order}")


def _nullspace_mod_p(rows: list, ncols: int, p: int) -> list:
    piv: dict = {}
    for r in rows:
        r = [x % p for x in r]
        for c, pr in piv.items():
            if r[c]:
                f = r[c]
                r = [(a - f * b) % p for a, b in zip(r, pr)]
        lead = next((c for c in range(ncols) if r[c]), None)
        if lead is None:
            continue
        inv = pow(r[lead], p - 2, p)
        r = [(a * inv) % p for a in r]
        for c in list(piv):
            if piv[c][lead]:
                f = piv[c][lead]
                piv[c] = [(a - f * b) % p for a, b in zip(piv[c], r)]
        piv[lead] = r
    free = [c for c in range(ncols) if c not in piv]
    out = []
    for fc in free:
        v = [0] * ncols
        v[fc] = 1
        for c, r in piv.items():
            v[c] = (-r[fc]) % p
        out.append(v)
    return out


def _rank_mod_p(vectors: list, p: int) -> int:
    if not vectors:
        return 0
    n = len(vectors[0])
    return n - len(_nullspace_mod_p(vectors, n, p)) if vectors else 0


@dataclass
class LoopCount:
    count: int
    centralizer_count: int
    prime: int
    seed: int
    idempotents: list


class GroupoidAlgebraModP:
    """``F_p[G//G]``: basis ``(g, x)`` for ``x -> g x g^-1`` at index ``g * n + x``."""

    def __init__(self, g: FiniteGroup, p: int):
        self.g, self.p, self.n = g, p, g.order
        self.dim = self.n * self.n

    def mul(self, a: Sequence[int], b: Sequence[int]) -> list:
        g, n, p = self.g, self.n, self.p
        out = [0] * self.dim
        bnz = [(i, c) for i, c in enumerate(b) if c]
        for i, c in enumerate(a):
            if not c:
                continue
            h, y = divmod(i, n)
            for jdx, dv in bnz:
                gg, x = divmod(jdx, n)
                if g.conj(gg, x) == y:
                    k = g.mul(h, gg) * n + x
                    out[k] = (out[k] + c * dv) % p
        return out

    def one(self) -> list:
        v = [0] * self.dim
        for x in range(self.n):
            v[self.g.identity * self.n + x] = 1
        return v

    def center(self) -> list:
        """Basis of the center (commuting with every basis element)."""
        rows = []
        basis = [[1 if k == i else 0 for k in range(self.dim)] for i in range(self.dim)]
        # z b - b z = 0 is linear in z; build one equation per output coordinate
        for b in basis:
            cols = []
            for i in range(self.dim):
                ei = basis[i]
                l, r = self.mul(ei, b), self.mul(b, ei)
                cols.append([(u - w) % self.p for u, w in zip(l, r)])
            for k in range(self.dim):
                row = [cols[i][k] for i in range(self.dim)]
                if any(row):
                    rows.append(row)
        return _nullspace_mod_p(rows, self.dim, self.p)


def _lin(p: int, *terms) -> list:
    out = None
    for c, v in terms:
        w = [(c * x) % p for x in v]
        out = w if out is None else [(a + b) % p for a, b in zip(out, w)]
    return out


def primitive_central_idempotents(alg: GroupoidAlgebraModP, seed: int = 0, max_tries: int = 200) -> list:
    """Split the identity into primitive central idempotents by random central elements."""
    p = alg.p
    zbasis = alg.center()
    rng = random.Random(seed)
    done, todo = [], [alg.one()]
    tries = 0
    while todo:
        e = todo.pop()
        block = [alg.mul(e, z) for z in zbasis]
        bdim = _rank_mod_p(block, p)
        if bdim <= 1:
            done.append(e)
            continue
        tries += 1
        if tries > max_tries:
            raise ExtensionError("random splitting did not converge; the prime may not split the center")
        w = _lin(p, *[(rng.randrange(p), z) for z in block])
        # eigenvalues of multiplication by w on e Z, by brute force over F_p
        eig = []
        for lam in range(p):
            shifted = [alg.mul(_lin(p, (1, w), (-lam, e)), z) for z in block]
            if _rank_mod_p(shifted, p) < bdim:
                eig.append(lam)
        if len(eig) < 2:
            todo.append(e)
            continue
        for lam in eig:
            f = e
            for mu in eig:
                if mu == lam:
                    continue
                inv = pow((lam - mu) % p, p - 2, p)
                f = alg.mul(f, _lin(p, (inv, w), ((-mu * inv) % p, e)))
            todo.append(f)
    _verify_idempotents(alg, done)
    return done


def _verify_idempotents(alg: GroupoidAlgebraModP, idem: list) -> None:
    p = alg.p
    total = [0] * alg.dim
    for i, e in enumerate(idem):
        if alg.mul(e, e) != e:
            raise ExtensionError("splitting produced a non-idempotent")
        for f in idem[i + 1:]:
            if any(alg.mul(e, f)):
                raise ExtensionError("splitting produced non-orthogonal idempotents")
        total = [(a + b) % p for a, b in zip(total, e)]
    if total != alg.one():
        raise ExtensionError("idempotents do not sum to the identity")


def count_simple_loop_objects(g: FiniteGroup, prime_bound: int = DEFAULT_PRIME_BOUND, seed: int = 0) -> LoopCount:
    p = splitting_prime(g, prime_bound)
    alg = GroupoidAlgebraModP(g, p)
    idem = primitive_central_idempotents(alg, seed)
    oracle = centralizer_count(g)
    if len(idem) != oracle:
        raise ExtensionError(f"prime-field count {len(idem)} disagrees with the centralizer count {oracle}")
    return LoopCount(len(idem), oracle, p, seed, idem)


# ---------------------------------------------------------------------------
# Fixtures
# ---------------------------------------------------------------------------


def dual_numbers() -> RationalAlgebra:
    from .algebra import make_algebra

    return make_algebra(2, [(0, 0, 0, 1), (0, 1, 1, 1), (1, 0, 1, 1)], [1, 0], name="K[x]/x^2")


def free_product_fixture(algebra=None) -> tuple:
    """Two discrete objects mapping to a point with empty orthogonality.

    Returns ``(theory, j, target, "pt")``; the extension to ``pt`` is the
    free product of the two copies of ``algebra`` (dual numbers by default).
    """
    from .fincat import discrete_category, poset_category

    algebra = algebra or dual_numbers()
    src_cat = discrete_category(["a", "b"], name="C")
    order = {("a", "pt"), ("b", "pt")}
    tgt_cat = poset_category(["a", "b", "pt"], lambda x, y: x == y or (x, y) in order, name="D")
    src, tgt = OrthogonalCategory(src_cat, name="C"), OrthogonalCategory(tgt_cat, name="D")
    j = FinFunctor(
        src_cat,
        tgt_cat,
        {"a": "a", "b": "b"},
        {f: tgt_cat.identity(src_cat.source(f)) for f in src_cat.morphism_ids()},
    )
    ident = Matrix.identity(algebra.dim)
    theory = AQFT(src, {"a": algebra, "b": algebra}, {f: ident for f in src_cat.morphism_ids()}, name="free-product")
    return theory, j, tgt, "pt"


def chain_fixture(algebra) -> tuple:
    """Full inclusion of ``a -> b`` into ``a -> b -> pt``; the extension to ``pt`` is ``algebra``."""
    from .fincat import poset_category

    rank = {"a": 0, "b": 1, "pt": 2}
    src_cat = poset_category(["a", "b"], lambda x, y: rank[x] <= rank[y], name="C")
    tgt_cat = poset_category(["a", "b", "pt"], lambda x, y: rank[x] <= rank[y], name="D")
    src, tgt = OrthogonalCategory(src_cat, name="C"), OrthogonalCategory(tgt_cat, name="D")
    j = FinFunctor(
        src_cat,
        tgt_cat,
        {"a": "a", "b": "b"},
        {f: tgt_cat.id_of[src_cat.label(f)] for f in src_cat.morphism_ids()},
    )
    ident = Matrix.identity(algebra.dim)
    theory = AQFT(src, {"a": algebra, "b": algebra}, {f: ident for f in src_cat.morphism_ids()}, name="chain")
    return theory, j, tgt, "pt"
