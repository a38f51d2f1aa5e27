"""Equivariant AQFTs, gauging, orbifold truncation and the Hopf-Galois criterion.

The gauged theory is kept in algebra-presented form: each object carries
the pair ``(A(c), rho_c)`` and the category of G-equivariant right
``A(c)``-modules is reached through explicit modules.  The canonical map
``beta: A ⊗_B A -> A ⊗ O(G)`` sends ``a ⊗ a'`` to ``sum_g a rho(g)(a') ⊗ e_g``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .algebra import (
    AlgebraMorphism,
    RationalAlgebra,
    RightModule,
    bimodule_from_morphism,
    endomorphism_algebra,
    regular_right_module,
    relative_tensor,
    restrict_module,
)
from .aqft import AQFT, AQFTMorphism, check_aqft, operation_matrix
from .exactlin import Matrix, Subspace, kron_vectors, kronecker, quotient, unit_vector
from .fincat import Report, arc_order
from .grouprep import (
    EquivariantModule,
    FiniteGroup,
    GroupAction,
    Representation,
    free_equivariant_module,
    random_invertible,
    regular_rep,
    sign_characters,
    trivial_rep,
)
from .operad import PFOperation


class GaugingError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Equivariant theories
# ---------------------------------------------------------------------------


class EquivariantAQFT:
    """An AQFT with a G-action on every algebra, natural in the object."""

    def __init__(self, theory: AQFT, actions: Mapping, check: bool = True):
        self.theory = theory
        self.actions = dict(actions)
        objs = theory.site.base.objects
        missing = [o for o in objs if o not in self.actions]
        if missing:
            raise GaugingError(f"no action assigned to object {missing[0]!r}")
        if len({self.actions[o].group.table for o in objs}) > 1:
            raise GaugingError("all actions must share one group")
        if check:
            rep = self.validate()
            if not rep.ok:
                v = rep.violations[0]
                raise GaugingError(f"invalid equivariant AQFT: {v.axiom} at {v.witness}")

    @property
    def group(self) -> FiniteGroup:
        return self.actions[self.theory.site.base.objects[0]].group

    @property
    def site(self):
        return self.theory.site

    def validate(self) -> Report:
        rep = Report("equivariant_aqft", params={"group_order": self.group.order})
        rep.extend(check_aqft(self.theory))
        base = self.site.base
        gens = self.group.generating_set()
        for o in base.objects:
            act = self.actions[o]
            if act.algebra.dim != self.theory.algebras[o].dim:
                rep.add("action_dimension", (o,))
                continue
            for v in act.validate().violations:
                rep.add(f"action:{v.axiom}", (o,) + v.witness)
        for f in base.morphism_ids():
            s, t = base.source(f), base.target(f)
            m = self.theory.maps[f]
            for g in gens:
                if self.actions[t].matrices[g] @ m != m @ self.actions[s].matrices[g]:
                    rep.add("naturality", (base.label(f), g))
        return rep


def trivially_acted(theory: AQFT, group: FiniteGroup) -> EquivariantAQFT:
    from .grouprep import trivial_action

    return EquivariantAQFT(theory, {o: trivial_action(group, theory.algebras[o]) for o in theory.site.base.objects})


def power_action(act: GroupAction, k: int) -> GroupAction:
    """Diagonal action of G on ``A^{⊗k}`` (``k = 0`` gives the trivial action on K)."""
    from .algebra import tensor_algebras

    alg = tensor_algebras([act.algebra] * k)
    mats = []
    for g in act.group.elements:
        m = Matrix.identity(1)
        for _ in range(k):
            m = kronecker(m, act.matrices[g])
        mats.append(m)
    return GroupAction(act.group, alg, mats)


def circle_equivariant_theory(model, factor_action: GroupAction, which: str = "opens") -> EquivariantAQFT:
    """Pointwise theory of ``factor_action.algebra`` with the diagonal action."""
    from .aqft import circle_theory

    theory = circle_theory(model, factor_action.algebra, which)
    actions = {}
    for o in theory.site.base.objects:
        act = power_action(factor_action, len(arc_order(o, model.n)))
        act.algebra = theory.algebras[o]
        actions[o] = act
    return EquivariantAQFT(theory, actions)


def orbifold_invariants(e: EquivariantAQFT) -> tuple:
    """Object-wise invariant subalgebras; returns ``(AQFT, inclusions)``."""
    base = e.site.base
    algebras, incl, spaces = {}, {}, {}
    from .algebra import subalgebra

    for o in base.objects:
        fixed = e.actions[o].representation().fixed_space()
        b, inc = subalgebra(e.theory.algebras[o], fixed, name=f"{e.theory.algebras[o].name}^G")
        algebras[o], incl[o], spaces[o] = b, inc, fixed
    maps = {}
    for f in base.morphism_ids():
        s, t = base.source(f), base.target(f)
        img = e.theory.maps[f] @ incl[s].matrix
        cols = [spaces[t].coordinates(img.column(i)) for i in range(img.cols)]
        maps[f] = Matrix.from_columns(cols, algebras[t].dim)
    return AQFT(e.site, algebras, maps, name=f"{e.theory.name}^G"), incl


# ---------------------------------------------------------------------------
# Gauging
# ---------------------------------------------------------------------------


class GaugedTheory:
    """Algebra-presented categorified orbifold theory.

    Object ``c`` stands for the category of G-equivariant right
    ``A(c)``-modules; the pointing is ``A(t)`` over itself and
    factorization products act through the tuple algebra maps.
    """

    def __init__(self, base: EquivariantAQFT):
        self.base = base
        self._cache: dict = {}

    @property
    def group(self) -> FiniteGroup:
        return self.base.group

    @property
    def site(self):
        return self.base.site

    def algebra(self, c) -> RationalAlgebra:
        return self.base.theory.algebras[c]

    def action(self, c) -> GroupAction:
        return self.base.actions[c]

    def pointing(self, t) -> EquivariantModule:
        act = self.action(t)
        return EquivariantModule(regular_right_module(self.algebra(t)), act, act.matrices)

    def product(self, op: PFOperation) -> AlgebraMorphism:
        """Equivariant algebra map of the tuple algebra carrying the factorization product."""
        from .algebra import tensor_algebras

        src = tensor_algebras([self.algebra(s) for s in op.sources])
        return AlgebraMorphism(src, self.algebra(op.target), operation_matrix(self.base.theory, op))

    def induce(self, f: int, v: EquivariantModule) -> EquivariantModule:
        """``V ⊗_{A(c)} A(t)`` along ``A(f)``, with the diagonal G-action."""
        base = self.site.base
        t = base.target(f)
        return induced_module(v, self.base.theory.morphism(f), self.action(t))

    def validate(self) -> Report:
        rep = self.base.validate()
        rep.name = "gauged_theory"
        return rep


def gauge(e: EquivariantAQFT) -> GaugedTheory:
    rep = e.validate()
    if not rep.ok:
        raise GaugingError(f"refusing to gauge an invalid equivariant AQFT: {rep.violations[0].axiom}")
    return GaugedTheory(e)


def induced_module(v: EquivariantModule, f: AlgebraMorphism, target_action: GroupAction) -> EquivariantModule:
    """Extension of scalars ``V ⊗_A A'`` along an equivariant algebra map ``f: A -> A'``."""
    rt = relative_tensor(v.module, bimodule_from_morphism(f))
    reps = [rt.projection @ kronecker(v.rep[g], target_action.matrices[g]) @ rt.section for g in v.group.elements]
    return EquivariantModule(rt.module, target_action, reps)


@dataclass
class Truncation:
    theory: AQFT
    iso: AQFTMorphism
    orbifold: AQFT
    endomorphisms: dict = field(default_factory=dict)

    def check(self) -> Report:
        rep = self.iso.validate()
        rep.name = "truncation_iso"
        rep.extend(check_aqft(self.theory))
        for o, m in self.iso.components.items():
            if not m.is_invertible():
                rep.add("not_invertible", (o,))
        return rep


def truncate(g: GaugedTheory) -> Truncation:
    """Endomorphism algebras of the pointings and the isomorphism to the invariants.

    A morphism ``f: c -> t`` sends ``phi`` to ``phi ⊗ id`` on
    ``A(c) ⊗_{A(c)} A(t)``, transported to ``A(t)`` by multiplication.
    """
    base = g.site.base
    gens = g.group.generating_set()
    ends = {}
    for o in base.objects:
        p = g.pointing(o)
        ends[o] = endomorphism_algebra(p.module, [(p.rep[s], p.rep[s]) for s in gens])
    maps = {}
    for f in base.morphism_ids():
        s, t = base.source(f), base.target(f)
        As, At = g.algebra(s), g.algebra(t)
        fm = g.base.theory.maps[f]
        rt = relative_tensor(regular_right_module(As), bimodule_from_morphism(g.base.theory.morphism(f)))
        # multiplication x ⊗ y -> f(x) y on representatives
        mult_cols = []
        for i in range(As.dim):
            fx = fm.column(i)
            for j in range(At.dim):
                mult_cols.append(At.multiply(fx, At.basis_vector(j)))
        mult = Matrix.from_columns(mult_cols, At.dim) @ rt.section
        mult_inv = mult.inverse()
        cols = []
        for phi in ends[s].basis:
            lifted = rt.projection @ kronecker(phi, Matrix.identity(At.dim)) @ rt.section
            cols.append(ends[t].coordinates(mult @ lifted @ mult_inv))
        maps[f] = Matrix.from_columns(cols, ends[t].algebra.dim)
    theory = AQFT(g.site, {o: ends[o].algebra for o in base.objects}, maps, name=f"π({g.base.theory.name}^G)")
    orb, incl = orbifold_invariants(g.base)
    comps = {}
    for o in base.objects:
        fixed = g.action(o).representation().fixed_space()
        unit = g.algebra(o).unit
        comps[o] = Matrix.from_columns([fixed.coordinates(phi.apply(unit)) for phi in ends[o].basis], orb.algebras[o].dim)
    return Truncation(theory, AQFTMorphism(theory, orb, comps), orb, ends)


# ---------------------------------------------------------------------------
# Hopf-Galois canonical map
# ---------------------------------------------------------------------------


@dataclass
class CanonicalMap:
    beta: Matrix
    source_dim: int
    target_dim: int
    invariant_dim: int
    ambient: Matrix

    @property
    def rank(self) -> int:
        return self.beta.rank()


def canonical_map(a: RationalAlgebra, act: GroupAction) -> CanonicalMap:
    """``beta`` on ``A ⊗_B A`` with target index ``k * |G| + g``."""
    from .grouprep import invariants

    G = act.group
    n = G.order
    b, incl = invariants(act)
    rt = relative_tensor(restrict_module(regular_right_module(a), incl), bimodule_from_morphism(incl))
    imgs = [[act.matrices[g].column(j) for g in G.elements] for j in range(a.dim)]
    trip = []
    for i in range(a.dim):
        ei = a.basis_vector(i)
        for j in range(a.dim):
            col = i * a.dim + j
            for g in G.elements:
                for k, c in enumerate(a.multiply(ei, imgs[j][g])):
                    if c:
                        trip.append((k * n + g, col, c))
    amb = Matrix.from_sparse(a.dim * n, a.dim * a.dim, trip)
    for r in rt.relations.basis:
        if any(amb.apply(r)):
            raise GaugingError("canonical map is not well defined on the relative tensor product")
    return CanonicalMap(amb @ rt.section, rt.dim, a.dim * n, b.dim, amb)


@dataclass
class HopfGaloisVerdict:
    status: str
    witness: tuple | None
    canonical: CanonicalMap

    @property
    def bijective(self) -> bool:
        return self.status == "bijective"

    @property
    def beta_matrix(self) -> Matrix:
        return self.canonical.beta

    def validate(self) -> bool:
        """Re-check the witness against the matrix."""
        beta = self.canonical.beta
        if self.status == "bijective":
            return beta.rows == beta.cols and beta.is_invertible()
        if self.status == "not_injective":
            return any(self.witness) and not any(beta.apply(self.witness))
        return not beta.image().contains(self.witness)

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "source_dim": self.canonical.source_dim,
            "target_dim": self.canonical.target_dim,
            "rank": self.canonical.rank,
            "witness": None if self.witness is None else [str(x) for x in self.witness],
        }


def is_hopf_galois(a: RationalAlgebra, act: GroupAction) -> HopfGaloisVerdict:
    cm = canonical_map(a, act)
    beta = cm.beta
    image = beta.image()
    if image.dim < cm.target_dim:
        n = act.group.order
        # prefer 1 ⊗ e_g style witnesses, then any standard basis vector
        cands = [kron_vectors(a.unit, unit_vector(n, g)) for g in act.group.elements]
        cands += [unit_vector(cm.target_dim, k) for k in range(cm.target_dim)]
        wit = next(v for v in cands if not image.contains(v))
        return HopfGaloisVerdict("not_surjective", tuple(wit), cm)
    if image.dim < cm.source_dim:
        return HopfGaloisVerdict("not_injective", tuple(beta.kernel().basis[0]), cm)
    return HopfGaloisVerdict("bijective", None, cm)


@dataclass
class TruncatedVerdict:
    overall: bool
    per_object: dict

    def to_json(self) -> dict:
        return {"truncated": self.overall, "per_object": {str(o): v.to_json() for o, v in self.per_object.items()}}


def is_truncated(e: EquivariantAQFT) -> TruncatedVerdict:
    per = {o: is_hopf_galois(e.theory.algebras[o], e.actions[o]) for o in e.site.base.objects}
    return TruncatedVerdict(all(v.bijective for v in per.values()), per)


# ---------------------------------------------------------------------------
# The adjunction Phi -| Psi
# ---------------------------------------------------------------------------


def phi_functor(w: RightModule, act: GroupAction, incl: AlgebraMorphism) -> EquivariantModule:
    """``W ⊗_B A`` with G acting on the right factor."""
    rt = relative_tensor(w, bimodule_from_morphism(incl))
    I_w = Matrix.identity(w.dim)
    reps = [rt.projection @ kronecker(I_w, act.matrices[g]) @ rt.section for g in act.group.elements]
    return EquivariantModule(rt.module, act, reps)


def psi_functor(v: EquivariantModule, incl: AlgebraMorphism) -> tuple:
    """Invariants ``V^G`` as a right B-module; returns ``(module, subspace)``."""
    fixed = Representation(v.group, v.dim, v.rep).fixed_space()
    basis = fixed.basis_matrix() if fixed.dim else Matrix.zeros(v.dim, 0)
    action = []
    for i in range(incl.source.dim):
        m = v.module.act_matrix(incl.matrix.column(i))
        cols = [fixed.coordinates((m @ basis).column(k)) for k in range(fixed.dim)]
        action.append(Matrix.from_columns(cols, fixed.dim) if cols else Matrix.zeros(0, 0))
    return RightModule(incl.source, fixed.dim, action), fixed


def unit_component(w: RightModule, act: GroupAction, incl: AlgebraMorphism) -> Matrix:
    """``eta_W: W -> (W ⊗_B A)^G``, ``w -> w ⊗ 1``."""
    phi = phi_functor(w, act, incl)
    rt = relative_tensor(w, bimodule_from_morphism(incl))
    _, fixed = psi_functor(phi, incl)
    one = act.algebra.unit
    cols = []
    for k in range(w.dim):
        cols.append(fixed.coordinates(rt.element(unit_vector(w.dim, k), one)))
    return Matrix.from_columns(cols, fixed.dim) if cols else Matrix.zeros(fixed.dim, 0)


def counit_component(v: EquivariantModule, incl: AlgebraMorphism) -> Matrix:
    """``epsilon_V: V^G ⊗_B A -> V``, ``v ⊗ a -> v . a``."""
    psi, fixed = psi_functor(v, incl)
    rt = relative_tensor(psi, bimodule_from_morphism(incl))
    A = v.module.algebra
    basis = fixed.basis
    cols = []
    for k in range(psi.dim):
        for j in range(A.dim):
            cols.append(v.module.action[j].apply(basis[k]))
    amb = Matrix.from_columns(cols, v.dim) if cols else Matrix.zeros(v.dim, 0)
    return amb @ rt.section if rt.dim else Matrix.zeros(v.dim, 0)


def _is_iso(m: Matrix) -> bool:
    return m.rows == m.cols and (m.rows == 0 or m.is_invertible())


def random_b_module(b: RationalAlgebra, rng: random.Random, max_dim: int = 6) -> RightModule:
    """Quotient of a free module ``B^k`` by a random submodule, in a random basis."""
    from .algebra import free_right_module

    k = rng.randint(1, max(1, max_dim // b.dim))
    free = free_right_module(b, k)

    def generated(vs):
        return Subspace.span(free.dim, [free.action[j].apply(v) for v in vs for j in range(b.dim)])

    while True:
        gens = [tuple(rng.randint(-2, 2) for _ in range(free.dim)) for _ in range(rng.randint(0, k - 1))]
        sub = generated(gens)
        while free.dim - sub.dim > max_dim:
            sub = generated(list(sub.basis) + [tuple(rng.randint(-2, 2) for _ in range(free.dim))])
        if sub.dim < free.dim:
            break
    qdim, proj, sect = quotient(free.dim, sub)
    mod = RightModule(b, qdim, [proj @ m @ sect for m in free.action])
    if qdim:
        mod = mod.conjugate(random_invertible(rng, qdim))
    return mod


def witness_candidates(act: GroupAction) -> list:
    """Equivariant modules searched for counit failures, in order."""
    g = act.group
    reps = [trivial_rep(g)] + sign_characters(g) + [regular_rep(g)]
    return [free_equivariant_module(u, act) for u in reps]


@dataclass
class PhiPsiReport(Report):
    witness: EquivariantModule | None = None


def phi_psi_check(
    a: RationalAlgebra,
    act: GroupAction,
    b_modules: Sequence[RightModule] = (),
    test_modules: Sequence[EquivariantModule] = (),
    search_witness: bool = True,
) -> Report:
    """Unit and counit components of ``Phi -| Psi`` on the given modules.

    ``stats`` records counts; ``witness`` (if any) is the first
    equivariant module whose counit is not invertible.
    """
    from .grouprep import invariants

    b, incl = invariants(act)
    rep = PhiPsiReport("phi_psi", params={"algebra_dim": a.dim, "invariant_dim": b.dim, "group_order": act.group.order})
    unit_ok = 0
    for k, w in enumerate(b_modules):
        eta = unit_component(w, act, incl)
        if _is_iso(eta):
            unit_ok += 1
        else:
            rep.add("unit_not_iso", (k,))
    counit_ok, counit_fail = 0, []
    for k, v in enumerate(test_modules):
        if _is_iso(counit_component(v, incl)):
            counit_ok += 1
        else:
            counit_fail.append(k)
    rep.stats.update({"unit_iso": unit_ok, "counit_iso": counit_ok, "counit_failures": counit_fail})
    if search_witness:
        for cand in witness_candidates(act):
            if not _is_iso(counit_component(cand, incl)):
                rep.witness = cand
                break
    return rep


def validate_counit_witness(v: EquivariantModule, act: GroupAction) -> bool:
    """A witness is a valid equivariant module whose counit is not invertible."""
    from .grouprep import invariants

    _, incl = invariants(act)
    return v.validate().ok and not _is_iso(counit_component(v, incl))
