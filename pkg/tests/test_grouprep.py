import random
from itertools import product

import pytest
from hypothesis import given, strategies as st

from aqftlab.algebra import clifford_algebra, exterior_algebra, field_algebra
from aqftlab.exactlin import Matrix
from aqftlab.grouprep import (
    BUILTIN_GROUPS,
    CoinducedRep,
    EquivariantModule,
    GroupError,
    GroupHom,
    InducedRep,
    action_from_coaction,
    adjoint_action,
    builtin_group,
    coaction_from_action,
    cyclic_group,
    diagonal_map,
    enumerate_homomorphisms,
    free_equivariant_module,
    function_hopf_algebra,
    group_hopf_algebra,
    group_power,
    induced_coinduced_check,
    invariants,
    make_group,
    parity_action,
    random_rep,
    rep_intertwiners,
    regular_rep,
    small_reps,
    symmetric_group,
    tensor_action,
    translation_action,
    trivial_action,
    trivial_rep,
    validate_coaction,
)


@pytest.mark.parametrize("name", sorted(BUILTIN_GROUPS))
def test_builtin_groups_validate(name):
    g = builtin_group(name)
    assert g.validate().ok
    assert len(g.generated(g.generating_set())) == g.order


def test_group_facts():
    s3 = symmetric_group(3)
    assert s3.order == 6 and not s3.is_abelian()
    assert sorted(len(c) for c in s3.conjugacy_classes()) == [1, 2, 3]
    assert s3.exponent() == 6
    assert cyclic_group(4).element_order(1) == 4
    assert len(cyclic_group(6).subgroups()) == 4
    with pytest.raises(GroupError):
        builtin_group("Z7x")


def test_make_group_rejects_bad_table():
    with pytest.raises(GroupError):
        make_group([[0, 1], [1, 1]])


def brute_force_homs(g, h):
    out = []
    for imgs in product(h.elements, repeat=g.order):
        if all(imgs[g.mul(a, b)] == h.mul(imgs[a], imgs[b]) for a in g.elements for b in g.elements):
            out.append(tuple(imgs))
    return sorted(out)


@pytest.mark.parametrize("src,tgt", [("Z2", "Z4"), ("Z4", "Z2"), ("S3", "Z2"), ("Z3", "S3"), ("V4", "Z2")])
def test_enumerate_homomorphisms_matches_brute_force(src, tgt):
    g, h = builtin_group(src), builtin_group(tgt)
    assert sorted(f.images for f in enumerate_homomorphisms(g, h)) == brute_force_homs(g, h)


def test_diagonal_map():
    g = cyclic_group(3)
    d = diagonal_map(g, (0, 0, 1), 2)
    assert d.validate().ok
    p2, p3 = group_power(g, 2), group_power(g, 3)
    assert p3.decode(d(p2.encode((1, 2)))) == (1, 1, 2)


@pytest.mark.parametrize("name", ["trivial", "Z2", "Z3", "S3", "V4"])
def test_hopf_algebras_validate(name):
    g = builtin_group(name)
    assert function_hopf_algebra(g).validate().ok
    assert group_hopf_algebra(g).validate().ok


def test_actions_validate_and_invariants():
    s3 = symmetric_group(3)
    ad = adjoint_action(s3)
    assert ad.validate().ok
    b, inc = invariants(ad)
    # class functions
    assert b.dim == 3 and inc.validate().ok
    tr = translation_action(s3)
    assert tr.validate().ok
    assert invariants(tr)[0].dim == 1
    cl2 = clifford_algebra(2, [1, 1])
    par = parity_action(cl2, 2)
    assert par.validate().ok
    assert invariants(par)[0].dim == 2
    assert invariants(trivial_action(cyclic_group(2), exterior_algebra(2)))[0].dim == 4
    with pytest.raises(GroupError):
        parity_action(field_algebra(), 1)


def test_bad_action_is_reported():
    cl1 = clifford_algebra(1, [1])
    scale = Matrix.from_rows([[1, 0], [0, 2]])
    bad = trivial_action(cyclic_group(2), cl1)
    bad.matrices[1] = scale
    assert not bad.validate().ok


def test_tensor_action():
    cl1 = clifford_algebra(1, [1])
    t = tensor_action([parity_action(cl1, 1), parity_action(cl1, 1)])
    assert t.group.order == 4 and t.algebra.dim == 4
    assert t.validate().ok


@pytest.mark.parametrize("name", ["Z2", "Z3", "S3"])
def test_coaction_round_trip(name, rng):
    g = builtin_group(name)
    for _ in range(3):
        r = random_rep(g, rng)
        assert r.validate().ok
        delta = coaction_from_action(r)
        assert validate_coaction(g, delta).ok
        back = action_from_coaction(g, delta)
        assert back.matrices == r.matrices


def test_non_coaction_is_reported():
    g = cyclic_group(2)
    delta = coaction_from_action(regular_rep(g)).scale(2)
    assert not validate_coaction(g, delta).ok


def test_intertwiners_of_regular_rep():
    s3 = symmetric_group(3)
    # End of the regular representation is the group algebra
    assert len(rep_intertwiners(regular_rep(s3), regular_rep(s3))) == 6
    assert len(rep_intertwiners(trivial_rep(s3), regular_rep(s3))) == 1


def all_homs():
    names = ["trivial", "Z2", "Z3", "S3"]
    for a in names:
        for b in names:
            g, h = builtin_group(a), builtin_group(b)
            for f in enumerate_homomorphisms(g, h):
                yield f


def test_induced_and_coinduced_agree():
    for f in all_homs():
        for r in small_reps(f.source, 3):
            rep = induced_coinduced_check(f, r)
            assert rep.ok, (f.images, rep.violations)


def test_induction_dimension_formula():
    s3 = symmetric_group(3)
    inc = GroupHom(builtin_group("trivial"), s3, [s3.identity])
    r = trivial_rep(inc.source, 2)
    assert InducedRep(inc, r).dim == 12
    assert CoinducedRep(inc, r).dim == 12
    to_trivial = GroupHom(s3, builtin_group("trivial"), [0] * 6)
    # coinvariants of the regular representation
    assert InducedRep(to_trivial, regular_rep(s3)).dim == 1
    assert CoinducedRep(to_trivial, regular_rep(s3)).dim == 1


def test_free_equivariant_module_validates():
    cl2 = clifford_algebra(2, [1, 1])
    par = parity_action(cl2, 2)
    for u in small_reps(par.group, 2):
        m = free_equivariant_module(u, par)
        assert m.validate().ok
        assert len(m.homs(m)) >= 1


def test_incompatible_equivariant_module_is_reported():
    cl2 = clifford_algebra(2, [1, 1])
    par = parity_action(cl2, 2)
    m = free_equivariant_module(trivial_rep(par.group), par)
    bad = EquivariantModule(m.module, par, [Matrix.identity(m.dim)] * 2)
    assert not bad.validate().ok


@given(st.integers(0, 10_000))
def test_random_reps_are_valid(seed):
    r = random_rep(symmetric_group(3), random.Random(seed))
    assert r.validate().ok
    assert r.dim <= 4
