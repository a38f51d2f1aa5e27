"""Command-line front end: JSON documents, reference resolution and reports.

Each input file holds one document or ``{"documents": [...]}``.  A document
has a ``kind`` and an optional ``id`` (a single-document file defaults to
its file stem).  Cross-references are string ids or inline documents.
Exit codes: 0 computation completed, 1 an asserted validity check failed,
2 malformed input.
"""

from __future__ import annotations

import argparse
import json
import sys
from importlib import resources
from pathlib import Path
from typing import Any, Sequence

import jsonschema

from .algebra import AlgebraError, RationalAlgebra, RightModule, clifford_algebra, exterior_algebra, field_algebra
from .aqft import AQFT, check_aqft, circle_theory, constant_theory, pfa_roundtrip
from .exactlin import Matrix, format_rational
from .fincat import CategoryError, FinFunctor, OrthogonalCategory, Report, build_circle_model, poset_category
from .fredenhagen import (
    DEFAULT_DEGREE_BOUND,
    DEFAULT_PRIME_BOUND,
    DescentObject,
    ExtensionError,
    ExtensionSite,
    _as_equivariant,
    count_simple_loop_objects,
    descent_check,
    descent_from_terminal,
    module_to_descent,
    object_label,
    presented_module,
    universal_algebra,
)
from .gauging import (
    EquivariantAQFT,
    GaugingError,
    circle_equivariant_theory,
    gauge,
    is_hopf_galois,
    is_truncated,
    orbifold_invariants,
    truncate,
    trivially_acted,
)
from .grouprep import (
    FiniteGroup,
    EquivariantModule,
    GroupAction,
    GroupError,
    Representation,
    builtin_group,
    free_equivariant_module,
    function_algebra,
    group_algebra,
    make_group,
    parity_action,
    translation_action,
    trivial_action,
)
from .operad import DEFAULT_TUPLE_CAP, check_operad_axioms

KINDS = ("orthogonal_category", "algebra", "group", "action", "aqft", "equivariant_aqft", "embedding", "descent_object")
DEFAULT_MAX_ARITY = 3
DEFAULT_SEED = 0


class DocumentError(ValueError):
    """Malformed input: schema failure, unresolved reference or bad content."""


# ---------------------------------------------------------------------------
# Schemas and loading
# ---------------------------------------------------------------------------


def load_schema(kind: str) -> dict:
    text = resources.files("aqftlab").joinpath("schemas", f"{kind}.json").read_text(encoding="utf-8")
    return json.loads(text)


def validate_document(doc: Any) -> None:
    if not isinstance(doc, dict) or "kind" not in doc:
        raise DocumentError("schema: every document needs a 'kind'")
    if doc["kind"] not in KINDS:
        raise DocumentError(f"schema: unknown kind {doc['kind']!r}")
    try:
        jsonschema.validate(doc, load_schema(doc["kind"]))
    except jsonschema.ValidationError as exc:
        path = "/".join(str(p) for p in exc.absolute_path)
        raise DocumentError(f"schema ({doc['kind']}{': ' + path if path else ''}): {exc.message}") from None


class Workspace:
    """Documents by id with memoized construction."""

    def __init__(self):
        self.docs: dict = {}
        self.order: list = []
        self._built: dict = {}
        # circle sites by the id of their category, including inline ones
        self.circle_sites: dict = {}

    def add(self, doc: dict, default_id: str | None = None) -> str:
        validate_document(doc)
        ident = doc.get("id", default_id)
        if ident is None:
            ident = f"_{len(self.order)}"
        if ident in self.docs:
            raise DocumentError(f"duplicate document id {ident!r}")
        self.docs[ident] = doc
        self.order.append(ident)
        return ident

    def load_file(self, path: str | Path) -> None:
        p = Path(path)
        try:
            data = json.loads(p.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise DocumentError(f"cannot read {p}: {exc}") from None
        if isinstance(data, dict) and "documents" in data:
            if not isinstance(data["documents"], list) or not data["documents"]:
                raise DocumentError(f"schema: {p} has an empty document list")
            for d in data["documents"]:
                self.add(d)
        else:
            self.add(data, default_id=p.stem)

    def of_kind(self, kind: str) -> list:
        return [i for i in self.order if self.docs[i]["kind"] == kind]

    def primary(self, kind: str) -> str | None:
        ids = self.of_kind(kind)
        return ids[-1] if ids else None

    # -- references -------------------------------------------------------
    def resolve(self, ref, kind: str):
        if isinstance(ref, dict):
            validate_document(ref)
            if ref["kind"] != kind:
                raise DocumentError(f"expected an inline {kind}, found {ref['kind']}")
            key = ("inline", id(ref))
            if key not in self._built:
                self._built[key] = (ref, self._build(ref))
            return self._built[key][1]
        if not isinstance(ref, str) or ref not in self.docs:
            raise DocumentError(f"unresolved reference {ref!r} (expected {kind})")
        doc = self.docs[ref]
        if doc["kind"] != kind:
            raise DocumentError(f"reference {ref!r} is a {doc['kind']}, expected {kind}")
        if ref not in self._built:
            self._built[ref] = self._build(doc)
        return self._built[ref]

    def get(self, ident: str):
        return self.resolve(ident, self.docs[ident]["kind"])

    def _build(self, doc: dict):
        try:
            return getattr(self, f"_build_{doc['kind']}")(doc)
        except (AlgebraError, CategoryError, GroupError, GaugingError, ExtensionError, KeyError, IndexError) as exc:
            raise DocumentError(f"invalid {doc['kind']}: {exc}") from None

    # -- builders -----------------------------------------------------------
    def _build_orthogonal_category(self, doc: dict):
        if "circle" in doc:
            circle = doc["circle"]
            site = CircleSite(build_circle_model(circle["n"]), circle.get("site", "opens"))
            self.circle_sites[id(site.category)] = site
            return site
        objects = doc["objects"]
        less = {tuple(p) for p in doc.get("less", [])}
        leq = _reflexive_transitive(objects, less)
        base = poset_category(objects, lambda a, b: (a, b) in leq, name=doc.get("name", ""))
        pairs = [(f"{a[0]}->{a[1]}" if a[0] != a[1] else f"id_{a[0]}", f"{b[0]}->{b[1]}" if b[0] != b[1] else f"id_{b[0]}") for a, b in doc.get("orthogonal", [])]
        return OrthogonalCategory(base, pairs, name=doc.get("name", ""))

    def _build_algebra(self, doc: dict) -> RationalAlgebra:
        b = doc.get("builtin")
        if b == "field":
            return field_algebra()
        if b == "clifford":
            return clifford_algebra(len(doc["q"]), doc["q"])
        if b == "exterior":
            return exterior_algebra(doc["n"])
        if b == "function_algebra":
            return function_algebra(self.resolve(doc["group"], "group"))
        if b == "group_algebra":
            return group_algebra(self.resolve(doc["group"], "group"))
        return RationalAlgebra.from_entries(doc["dim"], [tuple(e) for e in doc["mult"]], doc["unit"], name=doc.get("name", ""))

    def _build_group(self, doc: dict) -> FiniteGroup:
        if "builtin" in doc:
            return builtin_group(doc["builtin"])
        if len(doc["table"]) != doc["order"]:
            raise DocumentError("group table size does not match the order")
        g = make_group(doc["table"], name=doc.get("name", ""))
        return g

    def _build_action(self, doc: dict) -> GroupAction:
        g = self.resolve(doc["group"], "group")
        b = doc.get("builtin")
        if b == "translation":
            return translation_action(g)
        a = self.resolve(doc["algebra"], "algebra")
        if b == "trivial":
            return trivial_action(g, a)
        if b == "parity":
            if g.order != 2:
                raise DocumentError("the parity action needs a group of order 2")
            return parity_action(a, doc["n_generators"])
        gens = {int(k): _matrix(v, a.dim) for k, v in doc["generators"].items()}
        return GroupAction.from_generators(g, a, gens)

    def _build_aqft(self, doc: dict) -> AQFT:
        site = self.resolve(doc["site"], "orthogonal_category")
        cat = _orth(site)
        if "constant" in doc:
            return constant_theory(cat, self.resolve(doc["constant"], "algebra"))
        if "pointwise" in doc:
            if not isinstance(site, CircleSite):
                raise DocumentError("pointwise theories need a circle site")
            return circle_theory(site.model, self.resolve(doc["pointwise"], "algebra"), site.which)
        base = cat.base
        algebras = {}
        for o in base.objects:
            if str(o) not in doc["algebras"]:
                raise DocumentError(f"no algebra given for object {o!r}")
            algebras[o] = self.resolve(doc["algebras"][str(o)], "algebra")
        maps = {}
        for f in base.morphism_ids():
            lab = str(base.label(f))
            s = algebras[base.source(f)]
            if lab in doc.get("maps", {}):
                maps[f] = _matrix(doc["maps"][lab], s.dim)
            elif base.is_identity(f):
                maps[f] = Matrix.identity(s.dim)
            else:
                raise DocumentError(f"no matrix given for morphism {lab!r}")
        return AQFT(cat, algebras, maps, name=doc.get("name", ""))

    def _build_equivariant_aqft(self, doc: dict) -> EquivariantAQFT:
        if "pointwise_action" in doc:
            site = self.resolve(doc["site"], "orthogonal_category")
            if not isinstance(site, CircleSite):
                raise DocumentError("pointwise actions need a circle site")
            return circle_equivariant_theory(site.model, self.resolve(doc["pointwise_action"], "action"), site.which)
        theory = self.resolve(doc["theory"], "aqft")
        if "actions" in doc:
            acts = {}
            for o in theory.site.base.objects:
                act = self.resolve(doc["actions"][str(o)], "action")
                if act.algebra.dim != theory.algebras[o].dim:
                    raise DocumentError(f"action on {o!r} has the wrong dimension")
                acts[o] = GroupAction(act.group, theory.algebras[o], act.matrices)
            return EquivariantAQFT(theory, acts, check=False)
        return trivially_acted(theory, self.resolve(doc["group"], "group"))

    def _build_embedding(self, doc: dict):
        src = _orth(self.resolve(doc["source"], "orthogonal_category"))
        tgt = _orth(self.resolve(doc["target"], "orthogonal_category"))
        omap = {o: doc["object_map"][str(o)] for o in src.base.objects}
        mmap = {}
        for f in src.base.morphism_ids():
            hs = tgt.base.hom(omap[src.base.source(f)], omap[src.base.target(f)])
            if len(hs) != 1:
                raise DocumentError("embeddings are supported between thin categories only")
            mmap[f] = hs[0]
        return (FinFunctor(src.base, tgt.base, omap, mmap), src, tgt)

    def _build_descent_object(self, doc: dict):
        return doc


class CircleSite:
    """A circle-model site document: the chosen category plus the model (and its ``j``)."""

    def __init__(self, model, which: str):
        if which not in ("disks", "opens"):
            raise DocumentError("circle site must be 'disks' or 'opens'")
        self.model, self.which = model, which
        self.category = model.disks if which == "disks" else model.opens


def _orth(site) -> OrthogonalCategory:
    return site.category if isinstance(site, CircleSite) else site


def _reflexive_transitive(objects: Sequence, less: set) -> set:
    leq = {(o, o) for o in objects} | set(less)
    for a, b in less:
        if a not in objects or b not in objects:
            raise DocumentError(f"order relation ({a!r}, {b!r}) names an unknown object")
    changed = True
    while changed:
        changed = False
        for a, b in list(leq):
            for c, d in list(leq):
                if b == c and (a, d) not in leq:
                    leq.add((a, d))
                    changed = True
    return leq


def _matrix(rows, cols: int | None = None) -> Matrix:
    try:
        m = Matrix.from_json(rows, cols)
    except (TypeError, ValueError) as exc:
        raise DocumentError(f"bad matrix: {exc}") from None
    return m


# ---------------------------------------------------------------------------
# Rendering
# ---------------------------------------------------------------------------


class Output:
    def __init__(self, verdict: str, body: dict, report: Report | None = None, failed: bool = False):
        self.verdict, self.body, self.report, self.failed = verdict, body, report, failed

    def render(self, as_json: bool) -> str:
        if as_json:
            data = {"verdict": self.verdict, **self.body}
            if self.report is not None:
                data["report"] = self.report.to_json()
            return json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False)
        lines = [self.verdict]
        for k, v in self.body.items():
            if isinstance(v, dict):
                lines.append(f"{k}:")
                for kk, vv in v.items():
                    lines.append(f"  {kk}: {_fmt(vv)}")
            else:
                lines.append(f"{k}: {_fmt(v)}")
        if self.report is not None:
            for v in self.report.violations[:20]:
                lines.append(f"violation: {v.axiom} at {json.dumps(v.to_json()['witness'], ensure_ascii=False)}")
            if self.report.params:
                lines.append("params: " + json.dumps(self.report.params, sort_keys=True, ensure_ascii=False))
        return "\n".join(lines)


def _fmt(v) -> str:
    if isinstance(v, (list, tuple, dict)):
        return json.dumps(v, sort_keys=True, ensure_ascii=False)
    return str(v)


def _need(ws: Workspace, kind: str):
    ident = ws.primary(kind)
    if ident is None:
        raise DocumentError(f"no {kind} document among the inputs")
    return ws.get(ident)


def _equivariant(ws: Workspace) -> EquivariantAQFT:
    if ws.primary("equivariant_aqft") is not None:
        return _need(ws, "equivariant_aqft")
    theory = _need(ws, "aqft")
    return trivially_acted(theory, _need(ws, "group"))


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def cmd_validate(ws: Workspace, args) -> Output:
    results, failed = {}, False
    merged = Report("validate")
    for ident in ws.order:
        obj = ws.get(ident)
        kind = ws.docs[ident]["kind"]
        rep = _validate_object(ws, kind, obj)
        results[ident] = "ok" if rep is None or rep.ok else f"invalid ({rep.violations[0].axiom})"
        if rep is not None and not rep.ok:
            failed = True
            merged.extend(rep)
    return Output("VALID: " + ("no" if failed else "yes"), {"documents": results}, merged, failed)


def _validate_object(ws: Workspace, kind: str, obj) -> Report | None:
    if kind == "orthogonal_category":
        from .fincat import validate_orthogonal_category

        return validate_orthogonal_category(_orth(obj))
    if kind == "algebra":
        return obj.validate()
    if kind == "group":
        return obj.validate()
    if kind == "action":
        return obj.validate()
    if kind == "aqft":
        return check_aqft(obj)
    if kind == "equivariant_aqft":
        return obj.validate()
    if kind == "embedding":
        return obj[0].validate()
    if kind == "descent_object":
        return _build_descent(ws, obj, None)[1]
    return None


def cmd_check_operad(ws: Workspace, args) -> Output:
    if ws.primary("orthogonal_category") is not None:
        site = _orth(_need(ws, "orthogonal_category"))
    else:
        site = _need(ws, "aqft").site
    rep = check_operad_axioms(site, args.max_arity)
    return Output("OPERAD: " + ("ok" if rep.ok else "violated"), {"stats": rep.stats}, rep, not rep.ok)


def cmd_aqft_check(ws: Workspace, args) -> Output:
    rep = check_aqft(_need(ws, "aqft"))
    return Output("AQFT: " + ("valid" if rep.ok else "invalid"), {}, rep, not rep.ok)


def cmd_pfa_roundtrip(ws: Workspace, args) -> Output:
    a = _need(ws, "aqft")
    pre = check_aqft(a)
    if not pre.ok:
        return Output("PFA-ROUNDTRIP: invalid input", {}, pre, True)
    rep = pfa_roundtrip(a, args.max_arity)
    return Output("PFA-ROUNDTRIP: " + ("identity" if rep.ok else "mismatch"), {"stats": rep.stats}, rep, not rep.ok)


def cmd_gauge(ws: Workspace, args) -> Output:
    e = _equivariant(ws)
    rep = e.validate()
    if not rep.ok:
        return Output("GAUGE: invalid input", {}, rep, True)
    g = gauge(e)
    tr = truncate(g)
    check = tr.check()
    orb, _ = orbifold_invariants(e)
    body = {
        "group_order": g.group.order,
        "invariant_dims": {str(o): orb.algebras[o].dim for o in e.site.base.objects},
        "truncation_iso": "verified" if check.ok else "failed",
    }
    return Output("GAUGE: " + ("ok" if check.ok else "truncation mismatch"), body, check, not check.ok)


def cmd_hopf_galois(ws: Workspace, args) -> Output:
    act = _need(ws, "action")
    rep = act.validate()
    if not rep.ok:
        return Output("HOPF-GALOIS: invalid input", {}, rep, True)
    v = is_hopf_galois(act.algebra, act)
    return Output(f"HOPF-GALOIS: {v.status}", v.to_json())


def cmd_truncated(ws: Workspace, args) -> Output:
    e = _equivariant(ws)
    rep = e.validate()
    if not rep.ok:
        return Output("TRUNCATED: invalid input", {}, rep, True)
    v = is_truncated(e)
    per = {str(o): pv.status for o, pv in v.per_object.items()}
    return Output("TRUNCATED: " + ("yes" if v.overall else "no"), {"per_object": per})


def _extension_inputs(ws: Workspace, theory: AQFT):
    emb = ws.primary("embedding")
    if emb is not None:
        j, _, tgt = ws.get(emb)
        return j, tgt
    site = ws.circle_sites.get(id(theory.site))
    if site is not None:
        if site.which != "disks":
            raise DocumentError("extension starts from the disk site of a circle model")
        return site.model.j, site.model.opens
    raise DocumentError("extension needs a circle disk site or an embedding document")


def cmd_extend(ws: Workspace, args) -> Output:
    theory = _need(ws, "aqft")
    j, tgt = _extension_inputs(ws, theory)
    if args.to not in tgt.base.objects:
        raise DocumentError(f"unknown target object {args.to!r}")
    res = universal_algebra(theory, j, tgt, args.to, args.degree_bound, args.tuple_cap)
    rep = res.check_cocone()
    alg = res.algebra
    body = {
        "dim": alg.dim,
        "basis": [alg.word_label(w) for w in alg.basis],
        "slice_objects": len(res.site.objects),
        "cocone": "commutes" if rep.ok else "fails",
    }
    return Output(f"EXTEND: dim {alg.dim}", body, rep, not rep.ok)


def _build_descent(ws: Workspace, doc: dict, tuple_cap) -> tuple:
    ref = doc["theory"]
    kind = ws.docs[ref]["kind"] if isinstance(ref, str) and ref in ws.docs else (ref.get("kind") if isinstance(ref, dict) else None)
    if kind == "equivariant_aqft":
        e = ws.resolve(ref, "equivariant_aqft")
        theory, actions = e.theory, e.actions
    else:
        theory, actions = ws.resolve(ref, "aqft"), None
    j, tgt = _extension_inputs(ws, theory)
    cap = doc.get("tuple_cap", tuple_cap if tuple_cap is not None else DEFAULT_TUPLE_CAP)
    site = ExtensionSite(theory, j, tgt, doc["over"], actions=actions, tuple_cap=cap)
    cons = doc.get("construction", "explicit")
    if cons == "from_terminal":
        t = site.terminal()
        if t is None:
            raise DocumentError("the slice has no terminal object")
        r = doc["rep"]
        u = Representation.from_generators(site.group, r["dim"], {int(k): _matrix(v, r["dim"]) for k, v in r.get("generators", {}).items()})
        obj = descent_from_terminal(site, free_equivariant_module(u, site.tuple_action(t)))
    elif cons == "from_module":
        if site.group.order != 1:
            raise DocumentError("module descent objects need a trivially acted theory")
        res = universal_algebra(theory, j, tgt, doc["over"], doc.get("degree_bound", DEFAULT_DEGREE_BOUND), cap)
        gens = {res.algebra.generators.index(k): _matrix(v, doc["dim"]) for k, v in doc.get("generators", {}).items()}
        obj = module_to_descent(res, presented_module(res, doc["dim"], gens))
    else:
        objs = site.objects
        if len(doc["modules"]) != len(objs) or len(doc["xi"]) != site.category.n_morphisms:
            raise DocumentError(f"descent object must list {len(objs)} modules and {site.category.n_morphisms} xi matrices")
        mods = {}
        for x, md in zip(objs, doc["modules"]):
            alg = site.tuple_algebra(x)
            dim = md["dim"]
            action = [_matrix(m, dim) for m in md["action"]]
            if len(action) != alg.dim:
                raise DocumentError(f"module at {object_label(x)} needs {alg.dim} action matrices")
            if "rep" in md:
                act = site.tuple_action(x)
                mods[x] = EquivariantModule(RightModule(alg, dim, action), act, [_matrix(m, dim) for m in md["rep"]])
            else:
                mods[x] = _as_equivariant(site, x, RightModule(alg, dim, action))
        obj = DescentObject(site, mods, {k: _matrix(m) for k, m in enumerate(doc["xi"])})
    for k, m in doc.get("override_xi", {}).items():
        obj.xi[int(k)] = _matrix(m)
    return obj, descent_check(obj)


def cmd_descent_check(ws: Workspace, args) -> Output:
    ident = ws.primary("descent_object")
    if ident is None:
        raise DocumentError("no descent_object document among the inputs")
    obj, rep = _build_descent(ws, ws.docs[ident], args.tuple_cap)
    body = {"slice_objects": len(obj.site.objects), "module_dims": {object_label(x) + f"#{i}": obj.modules[x].dim for i, x in enumerate(obj.site.objects)}}
    return Output("DESCENT: " + ("valid" if rep.ok else "invalid"), body, rep, not rep.ok)


def cmd_loop_category(ws: Workspace, args) -> Output:
    ref = args.group
    if ref in ws.docs:
        g = ws.resolve(ref, "group")
    else:
        try:
            g = builtin_group(ref)
        except GroupError as exc:
            raise DocumentError(str(exc)) from None
    res = count_simple_loop_objects(g, args.prime_bound, args.seed)
    body = {
        "group_order": g.order,
        "simple_objects": res.count,
        "centralizer_count": res.centralizer_count,
        "prime": res.prime,
        "seed": res.seed,
    }
    return Output(f"LOOP-CATEGORY: {res.count} simple objects", body)


COMMANDS = {
    "validate": cmd_validate,
    "check-operad": cmd_check_operad,
    "aqft-check": cmd_aqft_check,
    "pfa-roundtrip": cmd_pfa_roundtrip,
    "gauge": cmd_gauge,
    "hopf-galois": cmd_hopf_galois,
    "truncated": cmd_truncated,
    "extend": cmd_extend,
    "descent-check": cmd_descent_check,
    "loop-category": cmd_loop_category,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise DocumentError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="aqftlab", description="Exact finite checks for algebraic quantum field theories.")
    p.add_argument("--json", action="store_true", help="emit the machine-readable report")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("files", nargs="*")
        sp.add_argument("--json", action="store_true", dest="json_sub", help="emit the machine-readable report")
        if name in ("check-operad", "pfa-roundtrip"):
            sp.add_argument("--max-arity", type=int, default=DEFAULT_MAX_ARITY)
        if name in ("extend", "descent-check"):
            sp.add_argument("--tuple-cap", type=int, default=DEFAULT_TUPLE_CAP)
        if name == "extend":
            sp.add_argument("--to", required=True)
            sp.add_argument("--degree-bound", type=int, default=DEFAULT_DEGREE_BOUND)
        if name == "loop-category":
            sp.add_argument("--group", required=True)
            sp.add_argument("--prime-bound", type=int, default=DEFAULT_PRIME_BOUND)
            sp.add_argument("--seed", type=int, default=DEFAULT_SEED)
    return p


def run(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    as_json = False
    try:
        args = build_parser().parse_args(argv)
        as_json = bool(args.json or getattr(args, "json_sub", False))
        if args.command is None:
            raise DocumentError("missing subcommand")
        ws = Workspace()
        for f in args.files:
            ws.load_file(f)
        if args.command != "loop-category" and not ws.order:
            raise DocumentError("schema: no documents given")
        result = COMMANDS[args.command](ws, args)
    except DocumentError as exc:
        _emit_error(err, out, str(exc), as_json)
        return 2
    except (AlgebraError, CategoryError, GroupError, GaugingError, ExtensionError) as exc:
        _emit_error(err, out, str(exc), as_json)
        return 2
    out.write(result.render(as_json) + "\n")
    return 1 if result.failed else 0


def _emit_error(err, out, message: str, as_json: bool) -> None:
    if as_json:
        out.write(json.dumps({"verdict": "ERROR", "error": message}, sort_keys=True) + "\n")
    err.write(f"error: {message}\n")


def main() -> None:
    sys.exit(run())


__all__ = ["run", "main", "Workspace", "DocumentError", "validate_document", "load_schema", "format_rational"]
