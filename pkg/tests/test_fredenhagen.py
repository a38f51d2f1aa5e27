import random
from itertools import product

import pytest

from aqftlab.algebra import clifford_algebra
from aqftlab.aqft import circle_theory, constant_theory
from aqftlab.exactlin import Matrix
from aqftlab.fredenhagen import (
    DescentObject,
    ExtensionError,
    ExtensionSite,
    LoopModels,
    ThetaObject,
    Transport,
    centralizer_count,
    chain_fixture,
    coaction_to_theta,
    count_simple_loop_objects,
    descent_check,
    descent_from_terminal,
    descent_hom,
    free_product_fixture,
    loop_category_check,
    module_to_descent,
    presented_module,
    random_theta_object,
    surviving_generators,
    theta_to_coaction,
    unitor,
    universal_algebra,
    validate_kg_coaction,
)
from aqftlab.gauging import circle_equivariant_theory
from aqftlab.grouprep import (
    builtin_group,
    cyclic_group,
    free_equivariant_module,
    parity_action,
    trivial_rep,
)


# -- universal algebra -----------------------------------------------------


@pytest.fixture(scope="module")
def constant_res():
    from aqftlab.fincat import build_circle_model

    m = build_circle_model(3)
    return universal_algebra(constant_theory(m.disks), m.j, m.opens, "S1", degree_bound=3)


def test_constant_theory_extends_to_ground_field(constant_res):
    assert constant_res.algebra.dim == 1
    assert len(constant_res.site.objects) == 25
    rep = constant_res.check_cocone()
    assert rep.ok and rep.stats["beyond_bound"] == 0


def alternating_words(max_len):
    out = [()]
    for n in range(1, max_len + 1):
        out += [w for w in product((0, 1), repeat=n) if all(w[i] != w[i + 1] for i in range(n - 1))]
    return out


@pytest.mark.parametrize("bound", [2, 3, 4])
def test_free_product_of_dual_numbers(bound):
    res = universal_algebra(*free_product_fixture(), degree_bound=bound)
    assert res.algebra.dim == len(alternating_words(bound)) == 2 * bound + 1
    assert res.check_cocone().ok
    assert len(surviving_generators(res.algebra)) == 2


def test_chain_fixture_recovers_algebra():
    cl2 = clifford_algebra(2, [1, 1])
    res = universal_algebra(*chain_fixture(cl2), degree_bound=4)
    assert res.algebra.dim == 4
    assert res.check_cocone().ok


def test_degree_bound_below_two_rejected():
    with pytest.raises(ExtensionError):
        universal_algebra(*free_product_fixture(), degree_bound=1)


def test_pointwise_clifford_over_arc(circle3):
    a = circle_theory(circle3, clifford_algebra(1, [1]), "disks")
    res = universal_algebra(a, circle3.j, circle3.opens, "arc0_2", degree_bound=4)
    assert res.algebra.dim == 4
    assert res.check_cocone().ok


# -- descent ----------------------------------------------------------------


def scalar_module(res, dim):
    return presented_module(res, dim, {})


def test_module_to_descent_is_valid(constant_res):
    obj = module_to_descent(constant_res, scalar_module(constant_res, 2))
    rep = descent_check(obj)
    assert rep.ok and rep.stats["composable_pairs"] > 0


@pytest.mark.parametrize("d1,d2", [(1, 1), (2, 3), (0, 2)])
def test_descent_hom_matches_module_hom(constant_res, d1, d2):
    m1, m2 = scalar_module(constant_res, d1), scalar_module(constant_res, d2)
    h = descent_hom(module_to_descent(constant_res, m1), module_to_descent(constant_res, m2))
    assert h.dim == len(m1.homs(m2)) == d1 * d2


def first_non_identity(cat):
    return next(k for k in cat.morphism_ids() if not cat.is_identity(k))


def test_zero_xi_is_not_invertible(constant_res):
    obj = module_to_descent(constant_res, scalar_module(constant_res, 2))
    k = first_non_identity(obj.site.category)
    obj.xi[k] = Matrix.zeros(2, 2)
    rep = descent_check(obj)
    assert [v.axiom for v in rep.violations] == ["xi_not_invertible"]


def test_scaled_xi_breaks_cocycle(constant_res):
    obj = module_to_descent(constant_res, scalar_module(constant_res, 2))
    k = first_non_identity(obj.site.category)
    obj.xi[k] = obj.xi[k].scale(2)
    rep = descent_check(obj)
    assert not rep.ok and rep.violations[0].axiom == "composition_cocycle"


def test_incomplete_candidate_raises(constant_res):
    obj = module_to_descent(constant_res, scalar_module(constant_res, 1))
    partial = DescentObject(obj.site, dict(obj.modules), {})
    with pytest.raises(ExtensionError):
        descent_check(partial)


def test_hom_into_zero_object_vanishes(constant_res):
    x = module_to_descent(constant_res, scalar_module(constant_res, 2))
    zero = module_to_descent(constant_res, scalar_module(constant_res, 0))
    assert descent_check(zero).ok
    assert descent_hom(x, zero).dim == 0
    assert descent_hom(zero, x).dim == 0


@pytest.fixture(scope="module")
def clifford_site():
    from aqftlab.fincat import build_circle_model

    m = build_circle_model(3)
    e = circle_equivariant_theory(m, parity_action(clifford_algebra(1, [1]), 1), "disks")
    return ExtensionSite(e.theory, m.j, m.opens, "arc0_2", actions=e.actions)


def test_equivariant_descent_from_terminal(clifford_site):
    t = clifford_site.terminal()
    assert t is not None and len(clifford_site.objects) == 6
    act = clifford_site.tuple_action(t)
    w = free_equivariant_module(trivial_rep(act.group), act)
    obj = descent_from_terminal(clifford_site, w)
    assert descent_check(obj).ok
    # restriction to the terminal object is an equivalence
    assert descent_hom(obj, obj).dim == len(w.homs(w))


def test_transport_along_diagonal_doubles_dimension(clifford_site):
    cat = clifford_site.category
    t = clifford_site.terminal()
    act = clifford_site.tuple_action(t)
    w = free_equivariant_module(trivial_rep(act.group), act)
    for k in cat.into(t):
        tr = Transport(clifford_site, k, w)
        x = cat.source(k)
        assert tr.module.validate().ok
        # |G^m| / |G| cosets of the diagonal image
        assert tr.dim == w.dim * clifford_site.group.order ** (len(x[0]) - 1)
        if cat.is_identity(k):
            assert unitor(tr).is_invertible()


# -- loop category ----------------------------------------------------------


@pytest.mark.parametrize("name", ["trivial", "Z2", "Z3", "S3"])
def test_random_theta_objects_are_valid(name):
    g = builtin_group(name)
    rng = random.Random(1)
    models = LoopModels(g)
    for _ in range(3):
        obj = random_theta_object(g, rng)
        assert loop_category_check(g, obj, models).ok
        vt = theta_to_coaction(g, obj)
        assert validate_kg_coaction(g, obj.v, vt).ok
        assert coaction_to_theta(g, obj.v, vt).theta == obj.theta


def test_scaled_theta_fails_codegeneracy():
    g = cyclic_group(2)
    obj = random_theta_object(g, random.Random(3))
    bad = ThetaObject(obj.v, obj.theta.scale(2))
    rep = loop_category_check(g, bad)
    # 2 * 2 != 2, so the cocycle condition fails as well
    assert [v.axiom for v in rep.violations] == ["codegeneracy", "cocycle"]


def test_non_equivariant_theta_reported():
    g = cyclic_group(3)
    v = trivial_rep(g, 1)
    swap = Matrix.permutation([1, 0, 2])
    rep = loop_category_check(g, ThetaObject(v, swap))
    assert "not_equivariant" in {x.axiom for x in rep.violations}
    rep = loop_category_check(g, ThetaObject(v, Matrix.identity(2)))
    assert rep.violations[0].axiom == "shape"


@pytest.mark.parametrize("name,expected", [("trivial", 1), ("Z2", 4), ("Z3", 9), ("Z4", 16), ("V4", 16), ("S3", 8)])
def test_simple_loop_object_counts(name, expected):
    g = builtin_group(name)
    assert centralizer_count(g) == expected
    res = count_simple_loop_objects(g)
    assert res.count == expected == res.centralizer_count
    assert len(res.idempotents) == expected


def test_free_product_descent_matches_module_homs():
    res = universal_algebra(*free_product_fixture(), degree_bound=3)
    x_gen, y_gen = surviving_generators(res.algebra)
    nil = Matrix.from_rows([[0, 0], [1, 0]])
    zero = Matrix.zeros(2, 2)
    mods = [
        presented_module(res, 2, {x_gen: nil, y_gen: zero}),
        presented_module(res, 2, {x_gen: zero, y_gen: nil}),
        presented_module(res, 2, {x_gen: nil, y_gen: nil}),
        presented_module(res, 1, {x_gen: Matrix.zeros(1, 1), y_gen: Matrix.zeros(1, 1)}),
    ]
    objs = []
    for v in mods:
        assert v.validate().ok
        obj = module_to_descent(res, v)
        assert descent_check(obj).ok
        objs.append(obj)
    for i, j in product(range(len(mods)), repeat=2):
        assert descent_hom(objs[i], objs[j]).dim == len(mods[i].homs(mods[j]))
