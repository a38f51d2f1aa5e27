"""The prefactorization operad of an orthogonal category.

Operations ``t <- (c_1, ..., c_n)`` are tuples of pairwise orthogonal
morphisms ``f_i: c_i -> t``.  Composition is componentwise composition in
the base category, and the symmetric group acts by reordering.  The
monoidal envelope is handled lazily: its objects are bounded-length
tuples and hom-sets are enumerated on demand.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations, product
from typing import Hashable, Sequence

from .fincat import CategoryError, FinCategory, FinFunctor, OrthogonalCategory, Report, SliceCategory

DEFAULT_TUPLE_CAP = 4


class OperadError(ValueError):
    pass


@dataclass(frozen=True)
class PFOperation:
    target: Hashable
    sources: tuple
    morphisms: tuple

    @property
    def arity(self) -> int:
        return len(self.morphisms)

    def __repr__(self):
        if not self.morphisms:
            return f"*_{self.target}"
        return f"PFOperation({self.target} <- {self.morphisms})"


def star(t) -> PFOperation:
    """The unique arity-zero operation into ``t``."""
    return PFOperation(t, (), ())


def unary(c: OrthogonalCategory, f: int) -> PFOperation:
    base = c.base
    return PFOperation(base.target(f), (base.source(f),), (f,))


def identity_operation(c: OrthogonalCategory, t) -> PFOperation:
    return PFOperation(t, (t,), (c.base.identity(t),))


def is_operation(c: OrthogonalCategory, op: PFOperation) -> bool:
    base = c.base
    if len(op.sources) != len(op.morphisms):
        return False
    for s, f in zip(op.sources, op.morphisms):
        if base.source(f) != s or base.target(f) != op.target:
            return False
    return all(
        c.orthogonal(op.morphisms[i], op.morphisms[j])
        for i in range(op.arity)
        for j in range(op.arity)
        if i != j
    )


def enumerate_operations(c: OrthogonalCategory, t, sources: Sequence) -> list:
    """All operations ``t <- sources`` in lexicographic order of morphism ids."""
    base = c.base
    sources = tuple(sources)
    homs = [sorted(base.hom(s, t)) for s in sources]
    out = []
    for fs in product(*homs):
        if all(c.orthogonal(fs[i], fs[j]) for i in range(len(fs)) for j in range(i + 1, len(fs))):
            out.append(PFOperation(t, sources, tuple(fs)))
    return out


def operations_into(c: OrthogonalCategory, t, arity: int, allowed_sources=None) -> list:
    """All operations into ``t`` of the given arity, whatever their sources."""
    base = c.base
    cands = sorted(base.into(t))
    if allowed_sources is not None:
        cands = [f for f in cands if base.source(f) in allowed_sources]
    out = []

    def extend(prefix):
        if len(prefix) == arity:
            out.append(PFOperation(t, tuple(base.source(f) for f in prefix), tuple(prefix)))
            return
        for f in cands:
            if all(c.orthogonal(f, g) for g in prefix):
                extend(prefix + [f])

    extend([])
    return out


def compose(c: OrthogonalCategory, outer: PFOperation, inners: Sequence[PFOperation]) -> PFOperation:
    """Operadic composite: ``(f_i ∘ g_ij)`` concatenated over ``i``."""
    inners = tuple(inners)
    if len(inners) != outer.arity:
        raise OperadError(f"outer arity {outer.arity} but {len(inners)} inner operations")
    base = c.base
    sources, morphisms = [], []
    for i, (f, g) in enumerate(zip(outer.morphisms, inners)):
        if g.target != outer.sources[i]:
            raise OperadError(f"inner operation {i} targets {g.target!r}, expected {outer.sources[i]!r}")
        for s, h in zip(g.sources, g.morphisms):
            sources.append(s)
            morphisms.append(base.compose(f, h))
    result = PFOperation(outer.target, tuple(sources), tuple(morphisms))
    for i in range(result.arity):
        for j in range(result.arity):
            if i != j and not c.orthogonal(result.morphisms[i], result.morphisms[j]):
                raise OperadError(
                    f"composite is not pairwise orthogonal at ({base.label(result.morphisms[i])!r}, "
                    f"{base.label(result.morphisms[j])!r})"
                )
    return result


def permute(op: PFOperation, sigma: Sequence[int]) -> PFOperation:
    """Right action: the result's ``i``-th entry is ``op``'s ``sigma[i]``-th."""
    sigma = tuple(sigma)
    if sorted(sigma) != list(range(op.arity)):
        raise OperadError(f"{sigma} is not a permutation of {op.arity} letters")
    return PFOperation(
        op.target,
        tuple(op.sources[s] for s in sigma),
        tuple(op.morphisms[s] for s in sigma),
    )


def compose_permutations(sigma: Sequence[int], tau: Sequence[int]) -> tuple:
    """``(sigma tau)(i) = sigma(tau(i))`` so that acting by it equals ``tau`` after ``sigma``."""
    return tuple(sigma[t] for t in tau)


def block_permutation(sigma: Sequence[int], sizes: Sequence[int]) -> tuple:
    """Permutation of the concatenated blocks induced by permuting the blocks."""
    offsets = [0]
    for k in sizes:
        offsets.append(offsets[-1] + k)
    out = []
    for s in sigma:
        out.extend(range(offsets[s], offsets[s] + sizes[s]))
    return tuple(out)


def block_sum(perms: Sequence[Sequence[int]]) -> tuple:
    out, offset = [], 0
    for p in perms:
        out.extend(offset + x for x in p)
        offset += len(p)
    return tuple(out)


# ---------------------------------------------------------------------------
# Axiom checks
# ---------------------------------------------------------------------------


def _ops_table(c: OrthogonalCategory, max_arity: int) -> dict:
    table = {}
    for t in c.base.objects:
        for k in range(max_arity + 1):
            table[(t, k)] = operations_into(c, t, k)
    return table


def _compositions(c, table, sources, budget):
    """All tuples of operations into ``sources`` with total arity <= budget."""
    def rec(i, remaining):
        if i == len(sources):
            yield ()
            return
        for k in range(remaining + 1):
            for g in table[(sources[i], k)]:
                for rest in rec(i + 1, remaining - k):
                    yield (g,) + rest
    yield from rec(0, budget)


def check_operad_axioms(c: OrthogonalCategory, max_arity: int = 3) -> Report:
    """Brute-force check of associativity, unitality and equivariance.

    Every composite that is checked has total arity at most ``max_arity``
    at each nesting level.
    """
    if max_arity < 1:
        raise ValueError("max_arity must be at least 1")
    rep = Report("operad_axioms", params={"max_arity": max_arity})
    crep = c.base.validate()
    for v in crep.violations:
        rep.add(f"category:{v.axiom}", v.witness, v.detail)
    if not crep.ok:
        return rep
    base = c.base
    lab = base.label
    table = _ops_table(c, max_arity)
    all_ops = [op for ops in table.values() for op in ops]
    ident = {t: identity_operation(c, t) for t in base.objects}
    counts = {"operations": len(all_ops), "associativity": 0, "unitality": 0, "equivariance": 0}

    def safe(fn, axiom, witness):
        try:
            return fn()
        except (OperadError, CategoryError) as exc:
            rep.add(axiom, witness, str(exc))
            return None

    for f in all_ops:
        w = tuple(lab(m) for m in f.morphisms)
        counts["unitality"] += 1
        r = safe(lambda: compose(c, f, tuple(ident[s] for s in f.sources)), "right_unit", w)
        if r is not None and r != f:
            rep.add("right_unit", w)
        r = safe(lambda: compose(c, ident[f.target], (f,)), "left_unit", w)
        if r is not None and r != f:
            rep.add("left_unit", w)
        # permutation action laws
        if permute(f, range(f.arity)) != f:
            rep.add("permutation_identity", w)
        perms = list(permutations(range(f.arity)))
        for s1 in perms:
            p1 = permute(f, s1)
            if not is_operation(c, p1):
                rep.add("permutation_closure", w + (s1,))
            for s2 in perms:
                if permute(p1, s2) != permute(f, compose_permutations(s1, s2)):
                    rep.add("permutation_action", w + (s1, s2))

    for f in all_ops:
        wf = tuple(lab(m) for m in f.morphisms)
        budget = max_arity
        for gs in _compositions(c, table, f.sources, budget):
            fg = safe(lambda: compose(c, f, gs), "composition_closure", wf)
            if fg is None:
                continue
            # associativity
            for hs in _compositions(c, table, fg.sources, max_arity):
                counts["associativity"] += 1
                lhs = safe(lambda: compose(c, fg, hs), "associativity", wf)
                # regroup hs by the blocks of gs
                grouped, pos = [], 0
                for g in gs:
                    grouped.append(hs[pos:pos + g.arity])
                    pos += g.arity
                rhs = safe(
                    lambda: compose(c, f, tuple(compose(c, g, hh) for g, hh in zip(gs, grouped))),
                    "associativity",
                    wf,
                )
                if lhs is not None and rhs is not None and lhs != rhs:
                    rep.add("associativity", (wf, tuple(g.morphisms for g in gs), tuple(h.morphisms for h in hs)))
            # equivariance
            sizes = [g.arity for g in gs]
            for sigma in permutations(range(f.arity)):
                counts["equivariance"] += 1
                lhs = safe(lambda: compose(c, permute(f, sigma), tuple(gs[s] for s in sigma)), "equivariance", wf)
                rhs = permute(fg, block_permutation(sigma, sizes))
                if lhs is not None and lhs != rhs:
                    rep.add("equivariance_outer", (wf, sigma))
            for taus in product(*[list(permutations(range(k))) for k in sizes]):
                counts["equivariance"] += 1
                lhs = safe(lambda: compose(c, f, tuple(permute(g, t) for g, t in zip(gs, taus))), "equivariance", wf)
                rhs = permute(fg, block_sum(taus))
                if lhs is not None and lhs != rhs:
                    rep.add("equivariance_inner", (wf, taus))
    rep.stats.update(counts)
    return rep


# ---------------------------------------------------------------------------
# Monoidal envelope
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EnvelopeMorphism:
    source: tuple
    target: tuple
    alpha: tuple
    blocks: tuple

    def fiber(self, j: int) -> tuple:
        return tuple(i for i, a in enumerate(self.alpha) if a == j)

    def __repr__(self):
        return f"EnvelopeMorphism({self.source} -> {self.target}, alpha={self.alpha}, blocks={[b.morphisms for b in self.blocks]})"


class MonoidalEnvelope:
    """Symmetric monoidal category of (bounded) tuples of objects."""

    def __init__(self, c: OrthogonalCategory, tuple_cap: int = DEFAULT_TUPLE_CAP):
        self.c = c
        self.tuple_cap = tuple_cap

    def objects(self, max_len: int | None = None) -> list:
        cap = self.tuple_cap if max_len is None else max_len
        out = []
        for k in range(cap + 1):
            out.extend(product(self.c.base.objects, repeat=k))
        return out

    def identity(self, x: tuple) -> EnvelopeMorphism:
        return EnvelopeMorphism(
            tuple(x), tuple(x), tuple(range(len(x))), tuple(identity_operation(self.c, o) for o in x)
        )

    def hom(self, x: tuple, y: tuple) -> list:
        x, y = tuple(x), tuple(y)
        out = []
        for alpha in product(range(len(y)), repeat=len(x)):
            choices = []
            for j, t in enumerate(y):
                fib = tuple(x[i] for i in range(len(x)) if alpha[i] == j)
                ops = enumerate_operations(self.c, t, fib)
                if not ops:
                    break
                choices.append(ops)
            else:
                for blocks in product(*choices):
                    out.append(EnvelopeMorphism(x, y, alpha, tuple(blocks)))
        return out

    def is_morphism(self, m: EnvelopeMorphism) -> bool:
        if len(m.alpha) != len(m.source) or len(m.blocks) != len(m.target):
            return False
        for j, b in enumerate(m.blocks):
            fib = tuple(m.source[i] for i in m.fiber(j))
            if b.target != m.target[j] or b.sources != fib or not is_operation(self.c, b):
                return False
        return True

    def compose(self, g: EnvelopeMorphism, f: EnvelopeMorphism) -> EnvelopeMorphism:
        if f.target != g.source:
            raise OperadError("envelope morphisms are not composable")
        alpha = tuple(g.alpha[a] for a in f.alpha)
        blocks = []
        for k in range(len(g.target)):
            js = g.fiber(k)
            raw = compose(self.c, g.blocks[k], tuple(f.blocks[j] for j in js))
            # raw lists sources fiber by fiber; restore the order of f.source
            raw_order = [i for j in js for i in f.fiber(j)]
            wanted = sorted(raw_order)
            sigma = tuple(raw_order.index(i) for i in wanted)
            blocks.append(permute(raw, sigma))
        return EnvelopeMorphism(f.source, g.target, alpha, tuple(blocks))

    def tensor(self, f: EnvelopeMorphism, g: EnvelopeMorphism) -> EnvelopeMorphism:
        m = len(f.target)
        return EnvelopeMorphism(
            f.source + g.source,
            f.target + g.target,
            f.alpha + tuple(m + a for a in g.alpha),
            f.blocks + g.blocks,
        )

    def braiding(self, x: tuple, y: tuple) -> EnvelopeMorphism:
        n, n2 = len(x), len(y)
        alpha = tuple(n2 + i for i in range(n)) + tuple(range(n2))
        target = tuple(y) + tuple(x)
        return EnvelopeMorphism(
            tuple(x) + tuple(y), target, alpha, tuple(identity_operation(self.c, o) for o in target)
        )

    def to_fincategory(self, max_len: int | None = None) -> FinCategory:
        objs = self.objects(max_len)
        morphisms, homs = [], {}
        for x in objs:
            for y in objs:
                hs = self.hom(x, y)
                homs[(x, y)] = hs
                morphisms.extend((m, x, y) for m in hs)
        comp = {}
        for (x, y), fs in homs.items():
            for z in objs:
                for g in homs.get((y, z), ()):
                    for f in fs:
                        comp[(g, f)] = self.compose(g, f)
        ids = {x: self.identity(x) for x in objs}
        return FinCategory(objs, morphisms, ids, comp, name=f"envelope({self.c.name})")


def monoidal_envelope(c: OrthogonalCategory, tuple_cap: int = DEFAULT_TUPLE_CAP) -> MonoidalEnvelope:
    return MonoidalEnvelope(c, tuple_cap)


class EnvelopeFunctor:
    """The strict symmetric monoidal functor induced by an orthogonal functor."""

    def __init__(self, j: FinFunctor, source: MonoidalEnvelope, target: MonoidalEnvelope):
        self.j = j
        self.source = source
        self.target = target

    @property
    def tuple_cap(self) -> int:
        return self.source.tuple_cap

    def on_object(self, x: tuple) -> tuple:
        return tuple(self.j.on_object(o) for o in x)

    def on_operation(self, op: PFOperation) -> PFOperation:
        return PFOperation(
            self.j.on_object(op.target),
            tuple(self.j.on_object(s) for s in op.sources),
            tuple(self.j.on_morphism(f) for f in op.morphisms),
        )

    def on_morphism(self, m: EnvelopeMorphism) -> EnvelopeMorphism:
        return EnvelopeMorphism(
            self.on_object(m.source),
            self.on_object(m.target),
            m.alpha,
            tuple(self.on_operation(b) for b in m.blocks),
        )

    def slice_over(self, d) -> SliceCategory:
        """Slice over the length-one tuple ``(d)``, tuples bounded by the cap."""
        if isinstance(d, tuple):
            if len(d) != 1:
                raise OperadError("slices are taken over length-one tuples")
            d = d[0]
        src, tgt = self.source, self.target
        D = tgt.c
        preimages = {}
        for o in src.c.base.objects:
            preimages.setdefault(self.j.on_object(o), []).append(o)
        objs = []
        for k in range(self.tuple_cap + 1):
            for op in operations_into(D, d, k, allowed_sources=set(preimages)):
                for cs in product(*[preimages[s] for s in op.sources]):
                    objs.append((tuple(cs), op))
        morphisms, homs = [], {}
        for x in objs:
            for y in objs:
                hs = []
                for k in src.hom(x[0], y[0]):
                    jk = self.on_morphism(k)
                    img = tgt.compose(
                        EnvelopeMorphism(jk.target, (d,), (0,) * len(jk.target), (y[1],)), jk
                    )
                    if img.blocks[0] == x[1]:
                        hs.append(k)
                homs[(x, y)] = hs
                morphisms.extend(((x, k, y), x, y) for k in hs)
        comp = {}
        for (x, y), ks in homs.items():
            for z in objs:
                for k2 in homs.get((y, z), ()):
                    for k in ks:
                        comp[((y, k2, z), (x, k, y))] = (x, src.compose(k2, k), z)
        ids = {x: (x, src.identity(x[0]), x) for x in objs}
        cat = FinCategory(objs, morphisms, ids, comp, name=f"J⊗/({d})")
        return SliceCategory(
            cat,
            {x: x[0] for x in objs},
            {i: cat.label(i)[1] for i in cat.morphism_ids()},
            d,
        )


def envelope_functor(
    j: FinFunctor,
    source: OrthogonalCategory,
    target: OrthogonalCategory,
    tuple_cap: int = DEFAULT_TUPLE_CAP,
) -> EnvelopeFunctor:
    witness = j.preserves_orthogonality(source, target)
    if witness is not None:
        raise OperadError(f"functor does not preserve orthogonality of {witness}")
    return EnvelopeFunctor(j, MonoidalEnvelope(source, tuple_cap), MonoidalEnvelope(target, tuple_cap))
