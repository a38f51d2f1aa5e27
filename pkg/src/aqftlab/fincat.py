"""Finite categories, orthogonality relations, functors and slices.

Morphisms carry stable integer ids (their position in the morphism
list); labels are arbitrary hashable values used for lookups and
reports.  The circle model discretizes intervals in a circle as cyclic
arcs of ``Z_n``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Hashable, Iterable, Mapping, Sequence


class CategoryError(ValueError):
    """Structural defect in a category, functor or relation table."""


@dataclass(frozen=True)
class Violation:
    axiom: str
    witness: tuple
    detail: str = ""

    def to_json(self) -> dict:
        return {"axiom": self.axiom, "witness": [_jsonable(w) for w in self.witness], "detail": self.detail}


def _jsonable(x):
    if isinstance(x, (str, int)) or x is None:
        return x
    if isinstance(x, (tuple, list)):
        return [_jsonable(y) for y in x]
    return str(x)


@dataclass
class Report:
    name: str
    violations: list = field(default_factory=list)
    params: dict = field(default_factory=dict)
    stats: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, axiom: str, witness: tuple, detail: str = "") -> None:
        self.violations.append(Violation(axiom, tuple(witness), detail))

    def extend(self, other: "Report") -> None:
        self.violations.extend(other.violations)

    def to_json(self) -> dict:
        return {
            "check": self.name,
            "ok": self.ok,
            "params": dict(self.params),
            "stats": dict(self.stats),
            "violations": [v.to_json() for v in self.violations],
        }


class FinCategory:
    """A finite category given by explicit tables.

    ``morphisms`` is a sequence of ``(label, source, target)``;
    ``identities`` maps each object to an identity label and
    ``composition`` maps label pairs ``(g, f)`` to the label of ``g∘f``.
    """

    def __init__(
        self,
        objects: Sequence[Hashable],
        morphisms: Sequence[tuple],
        identities: Mapping[Hashable, Hashable],
        composition: Mapping[tuple, Hashable],
        name: str = "",
    ):
        self.name = name
        self.objects = tuple(objects)
        self._obj_set = set(self.objects)
        if len(self._obj_set) != len(self.objects):
            raise CategoryError("duplicate object identifiers")
        self.labels = tuple(m[0] for m in morphisms)
        self.id_of = {}
        for i, lab in enumerate(self.labels):
            if lab in self.id_of:
                raise CategoryError(f"duplicate morphism label {lab!r}")
            self.id_of[lab] = i
        self.sources = []
        self.targets = []
        for lab, s, t in morphisms:
            if s not in self._obj_set or t not in self._obj_set:
                raise CategoryError(f"morphism {lab!r} has unknown endpoint")
            self.sources.append(s)
            self.targets.append(t)
        self.identities = {}
        for obj in self.objects:
            if obj not in identities:
                raise CategoryError(f"object {obj!r} has no identity")
            lab = identities[obj]
            if lab not in self.id_of:
                raise CategoryError(f"identity {lab!r} of {obj!r} is not a morphism")
            self.identities[obj] = self.id_of[lab]
        self.table = {}
        for (g, f), h in composition.items():
            for lab in (g, f, h):
                if lab not in self.id_of:
                    raise CategoryError(f"composition table entry ({g!r}, {f!r}) -> {h!r} names unknown morphism {lab!r}")
            self.table[(self.id_of[g], self.id_of[f])] = self.id_of[h]
        self._hom = {}
        self._into = {}
        self._outof = {}
        for i in range(len(self.labels)):
            self._hom.setdefault((self.sources[i], self.targets[i]), []).append(i)
            self._into.setdefault(self.targets[i], []).append(i)
            self._outof.setdefault(self.sources[i], []).append(i)

    @property
    def n_morphisms(self) -> int:
        return len(self.labels)

    def morphism_ids(self) -> range:
        return range(len(self.labels))

    def source(self, f: int):
        return self.sources[f]

    def target(self, f: int):
        return self.targets[f]

    def identity(self, obj) -> int:
        return self.identities[obj]

    def is_identity(self, f: int) -> bool:
        return self.identities.get(self.sources[f]) == f

    def hom(self, a, b) -> list:
        return list(self._hom.get((a, b), ()))

    def into(self, b) -> list:
        return list(self._into.get(b, ()))

    def out_of(self, a) -> list:
        return list(self._outof.get(a, ()))

    def compose(self, g: int, f: int) -> int:
        """Return ``g∘f``; raises on non-composable pairs or table gaps."""
        if self.targets[f] != self.sources[g]:
            raise CategoryError(f"{self.labels[g]!r} ∘ {self.labels[f]!r} is not composable")
        try:
            return self.table[(g, f)]
        except KeyError:
            raise CategoryError(
                f"composition table has no entry for ({self.labels[g]!r}, {self.labels[f]!r})"
            ) from None

    def label(self, f: int):
        return self.labels[f]

    def validate(self) -> Report:
        """Exhaustive check of totality, typing, unit and associativity laws."""
        rep = Report("category")
        n = self.n_morphisms
        for f in range(n):
            for g in self.out_of(self.targets[f]):
                key = (g, f)
                if key not in self.table:
                    rep.add("totality", (self.labels[g], self.labels[f]), "composable pair missing from table")
                    continue
                h = self.table[key]
                if self.sources[h] != self.sources[f] or self.targets[h] != self.targets[g]:
                    rep.add("typing", (self.labels[g], self.labels[f], self.labels[h]), "composite has wrong endpoints")
        for (g, f) in self.table:
            if self.targets[f] != self.sources[g]:
                rep.add("typing", (self.labels[g], self.labels[f]), "table entry for non-composable pair")
        for obj in self.objects:
            i = self.identities[obj]
            if self.sources[i] != obj or self.targets[i] != obj:
                rep.add("identity", (obj,), "identity is not an endomorphism")
        if not rep.ok:
            return rep
        for f in range(n):
            if self.table[(self.identities[self.targets[f]], f)] != f:
                rep.add("left_unit", (self.labels[f],))
            if self.table[(f, self.identities[self.sources[f]])] != f:
                rep.add("right_unit", (self.labels[f],))
        for f in range(n):
            for g in self.out_of(self.targets[f]):
                gf = self.table[(g, f)]
                for h in self.out_of(self.targets[g]):
                    if self.table[(h, gf)] != self.table[(self.table[(h, g)], f)]:
                        rep.add("associativity", (self.labels[h], self.labels[g], self.labels[f]))
        return rep

    def __repr__(self):
        return f"FinCategory({self.name or '?'}: {len(self.objects)} objects, {self.n_morphisms} morphisms)"


def discrete_category(objects: Sequence, name: str = "") -> FinCategory:
    morphisms = [(f"id_{o}", o, o) for o in objects]
    ids = {o: f"id_{o}" for o in objects}
    comp = {(f"id_{o}", f"id_{o}"): f"id_{o}" for o in objects}
    return FinCategory(objects, morphisms, ids, comp, name=name)


def poset_category(objects: Sequence, leq, name: str = "", label=None) -> FinCategory:
    """Thin category with a morphism ``a -> b`` whenever ``leq(a, b)``."""
    label = label or (lambda a, b: f"id_{a}" if a == b else f"{a}->{b}")
    morphisms = [(label(a, b), a, b) for a in objects for b in objects if leq(a, b)]
    ids = {o: label(o, o) for o in objects}
    comp = {}
    for a, b, c in product(objects, repeat=3):
        if leq(a, b) and leq(b, c):
            comp[(label(b, c), label(a, b))] = label(a, c)
    return FinCategory(objects, morphisms, ids, comp, name=name)


# ---------------------------------------------------------------------------
# Orthogonality
# ---------------------------------------------------------------------------


class OrthogonalCategory:
    """A finite category with a symmetric, composition-stable relation."""

    def __init__(self, base: FinCategory, pairs: Iterable[tuple] = (), *, close: bool = True, name: str = ""):
        self.base = base
        self.name = name or base.name
        ids = set()
        # integers are morphism ids, anything else is a label
        for a, b in pairs:
            ids.add((_as_id(base, a), _as_id(base, b)))
        self.generators = frozenset(ids)
        self.pairs = frozenset(orthogonal_closure(base, ids)) if close else frozenset(ids)

    def orthogonal(self, f: int, g: int) -> bool:
        return (f, g) in self.pairs

    @property
    def objects(self):
        return self.base.objects

    def __repr__(self):
        return f"OrthogonalCategory({self.name or '?'}: {len(self.base.objects)} objects, {len(self.pairs)} ordered ⊥ pairs)"


def _as_id(base: FinCategory, m) -> int:
    if isinstance(m, int) and not isinstance(m, bool):
        if 0 <= m < base.n_morphisms:
            return m
        raise CategoryError(f"morphism id {m} out of range")
    if m in base.id_of:
        return base.id_of[m]
    raise CategoryError(f"unknown morphism {m!r} in orthogonality relation")


def orthogonal_closure(base: FinCategory, pairs: Iterable[tuple]) -> set:
    """Close a relation under symmetry and pre/post-composition."""
    closed = set()
    todo = list(pairs)
    while todo:
        f1, f2 = todo.pop()
        if (f1, f2) in closed:
            continue
        if base.target(f1) != base.target(f2):
            raise CategoryError(
                f"orthogonal pair ({base.label(f1)!r}, {base.label(f2)!r}) has no common target"
            )
        closed.add((f1, f2))
        todo.append((f2, f1))
        t = base.target(f1)
        for g in base.out_of(t):
            todo.append((base.compose(g, f1), base.compose(g, f2)))
        for h1 in base.into(base.source(f1)):
            for h2 in base.into(base.source(f2)):
                todo.append((base.compose(f1, h1), base.compose(f2, h2)))
    return closed


def validate_orthogonal_category(c: OrthogonalCategory) -> Report:
    """Exhaustively check symmetry and composition stability of ⊥."""
    base = c.base
    crep = base.validate()
    if not crep.ok:
        first = crep.violations[0]
        raise CategoryError(f"base category is malformed: {first.axiom} at {first.witness}")
    rep = Report("orthogonal_category")
    for f1, f2 in sorted(c.pairs):
        lab = (base.label(f1), base.label(f2))
        if base.target(f1) != base.target(f2):
            rep.add("common_target", lab)
            continue
        if (f2, f1) not in c.pairs:
            rep.add("symmetry", lab)
        for g in base.out_of(base.target(f1)):
            composite = (base.compose(g, f1), base.compose(g, f2))
            if composite not in c.pairs:
                rep.add("postcomposition", lab + (base.label(g),))
        for h1 in base.into(base.source(f1)):
            for h2 in base.into(base.source(f2)):
                if (base.compose(f1, h1), base.compose(f2, h2)) not in c.pairs:
                    rep.add("precomposition", lab + (base.label(h1), base.label(h2)))
    rep.stats["ordered_pairs"] = len(c.pairs)
    return rep


# ---------------------------------------------------------------------------
# Functors
# ---------------------------------------------------------------------------


class FinFunctor:
    """Functor between finite categories given by object and morphism maps."""

    def __init__(self, source: FinCategory, target: FinCategory, object_map: Mapping, morphism_map: Mapping[int, int]):
        self.source = source
        self.target = target
        self.object_map = dict(object_map)
        self.morphism_map = dict(morphism_map)

    def on_object(self, c):
        return self.object_map[c]

    def on_morphism(self, f: int) -> int:
        return self.morphism_map[f]

    def validate(self) -> Report:
        rep = Report("functor")
        S, T = self.source, self.target
        for c in S.objects:
            if c not in self.object_map or self.object_map[c] not in T._obj_set:
                rep.add("object_map", (c,))
        for f in S.morphism_ids():
            if f not in self.morphism_map:
                rep.add("morphism_map", (S.label(f),), "unmapped")
                continue
            g = self.morphism_map[f]
            if T.source(g) != self.object_map.get(S.source(f)) or T.target(g) != self.object_map.get(S.target(f)):
                rep.add("endpoints", (S.label(f),))
        if not rep.ok:
            return rep
        for c in S.objects:
            if self.morphism_map[S.identity(c)] != T.identity(self.object_map[c]):
                rep.add("identities", (c,))
        for f in S.morphism_ids():
            for g in S.out_of(S.target(f)):
                lhs = self.morphism_map[S.compose(g, f)]
                rhs = T.compose(self.morphism_map[g], self.morphism_map[f])
                if lhs != rhs:
                    rep.add("composition", (S.label(g), S.label(f)))
        return rep

    def is_full(self) -> bool:
        for a in self.source.objects:
            for b in self.source.objects:
                img = {self.morphism_map[f] for f in self.source.hom(a, b)}
                if img != set(self.target.hom(self.object_map[a], self.object_map[b])):
                    return False
        return True

    def preserves_orthogonality(self, src: OrthogonalCategory, tgt: OrthogonalCategory):
        """Return None, or a witness pair of source labels that is not preserved."""
        for f1, f2 in sorted(src.pairs):
            if not tgt.orthogonal(self.morphism_map[f1], self.morphism_map[f2]):
                return (src.base.label(f1), src.base.label(f2))
        return None


def identity_functor(c: FinCategory) -> FinFunctor:
    return FinFunctor(c, c, {o: o for o in c.objects}, {f: f for f in c.morphism_ids()})


@dataclass
class SliceCategory:
    """Slice ``f / d`` together with its projection to the source."""

    category: FinCategory
    projection_objects: dict
    projection_morphisms: dict
    over: object

    def projection(self, source: FinCategory) -> FinFunctor:
        return FinFunctor(self.category, source, self.projection_objects, self.projection_morphisms)


def slice_category(f, d) -> SliceCategory:
    """Slice of a functor over an object of its target.

    Objects are pairs ``(c, h)`` with ``h: f(c) -> d``; a morphism
    ``(c, h) -> (c', h')`` is a source morphism ``k`` with
    ``h' ∘ f(k) = h``.  Works for :class:`FinFunctor` and for any functor
    exposing the same protocol over lazily enumerated categories.
    """
    if hasattr(f, "slice_over"):
        return f.slice_over(d)
    S, T = f.source, f.target
    objs = []
    for c in S.objects:
        for h in T.hom(f.on_object(c), d):
            objs.append((c, T.label(h)))
    morphisms, comp = [], {}
    hom_lists = {}
    for (c, hl) in objs:
        for (c2, hl2) in objs:
            h, h2 = T.id_of[hl], T.id_of[hl2]
            ks = [k for k in S.hom(c, c2) if T.compose(h2, f.on_morphism(k)) == h]
            hom_lists[((c, hl), (c2, hl2))] = ks
            for k in ks:
                morphisms.append((((c, hl), S.label(k), (c2, hl2)), (c, hl), (c2, hl2)))
    ids = {o: (o, S.label(S.identity(o[0])), o) for o in objs}
    for (x, y), ks in hom_lists.items():
        for z in objs:
            for k2 in hom_lists.get((y, z), ()):
                for k in ks:
                    comp[((y, S.label(k2), z), (x, S.label(k), y))] = (x, S.label(S.compose(k2, k)), z)
    cat = FinCategory(objs, morphisms, ids, comp, name=f"slice over {d}")
    proj_obj = {o: o[0] for o in objs}
    proj_mor = {i: S.id_of[cat.label(i)[1]] for i in cat.morphism_ids()}
    return SliceCategory(cat, proj_obj, proj_mor, d)


def terminal_objects(c: FinCategory) -> list:
    out = []
    for t in c.objects:
        if all(len(c.hom(a, t)) == 1 for a in c.objects):
            out.append(t)
    return out


# ---------------------------------------------------------------------------
# Circle model
# ---------------------------------------------------------------------------


def arc_name(a: int, length: int) -> str:
    return f"arc{a}_{length}"


def arc_points(name: str, n: int) -> frozenset:
    if name == "S1":
        return frozenset(range(n))
    a, length = name[3:].split("_")
    a, length = int(a), int(length)
    return frozenset((a + k) % n for k in range(length))


def arc_order(name: str, n: int) -> tuple:
    """Points of an arc in their cyclic order starting at the left end."""
    if name == "S1":
        return tuple(range(n))
    a, length = name[3:].split("_")
    a, length = int(a), int(length)
    return tuple((a + k) % n for k in range(length))


@dataclass
class CircleModel:
    n: int
    disks: OrthogonalCategory
    opens: OrthogonalCategory
    j: FinFunctor

    def points(self, obj) -> frozenset:
        return arc_points(obj, self.n)

    def order(self, obj) -> tuple:
        return arc_order(obj, self.n)


def build_circle_model(n: int) -> CircleModel:
    """Cyclic arcs of ``Z_n`` (lengths 1..n-1) and the full circle ``S1``."""
    if n < 2:
        raise ValueError("circle model needs n >= 2")
    arcs = [arc_name(a, length) for length in range(1, n) for a in range(n)]
    pts = {x: arc_points(x, n) for x in arcs}
    pts["S1"] = frozenset(range(n))

    def leq(a, b):
        return pts[a] <= pts[b]

    def disjoint_pairs(cat: FinCategory):
        out = []
        for f1 in cat.morphism_ids():
            for f2 in cat.into(cat.target(f1)):
                if not (pts[cat.source(f1)] & pts[cat.source(f2)]):
                    out.append((f1, f2))
        return out

    disks_base = poset_category(arcs, leq, name=f"Disk(Z_{n})")
    opens_base = poset_category(arcs + ["S1"], leq, name=f"Open(Z_{n})")
    disks = OrthogonalCategory(disks_base, disjoint_pairs(disks_base), name=disks_base.name)
    opens = OrthogonalCategory(opens_base, disjoint_pairs(opens_base), name=opens_base.name)
    j = FinFunctor(
        disks_base,
        opens_base,
        {a: a for a in arcs},
        {f: opens_base.id_of[disks_base.label(f)] for f in disks_base.morphism_ids()},
    )
    return CircleModel(n, disks, opens, j)
