import time

import pytest
from hypothesis import given, strategies as st

from aqftlab.fincat import OrthogonalCategory, discrete_category, poset_category
from aqftlab.operad import (
    OperadError,
    check_operad_axioms,
    compose,
    compose_permutations,
    enumerate_operations,
    identity_operation,
    is_operation,
    monoidal_envelope,
    operations_into,
    permute,
    star,
    unary,
)


def test_disjoint_arcs_give_binary_operations(circle3):
    c = circle3.disks
    ops = enumerate_operations(c, "arc0_2", ["arc0_1", "arc1_1"])
    assert len(ops) == 1
    assert is_operation(c, ops[0])
    # an arc overlapping itself is never orthogonal to itself
    assert enumerate_operations(c, "arc0_2", ["arc0_1", "arc0_1"]) == []


def test_circle_binary_operations_into_s1(circle2):
    c = circle2.opens
    ops = operations_into(c, "S1", 2, allowed_sources={"arc0_1", "arc1_1"})
    # both orderings of the two disjoint arcs
    assert len(ops) == 2
    assert {op.sources for op in ops} == {("arc0_1", "arc1_1"), ("arc1_1", "arc0_1")}


def test_star_and_unary(circle2):
    c = circle2.opens
    assert star("S1").arity == 0
    f = c.base.hom("arc0_1", "S1")[0]
    op = unary(c, f)
    assert op.arity == 1 and op.target == "S1"
    assert compose(c, op, (identity_operation(c, "arc0_1"),)) == op
    assert compose(c, identity_operation(c, "S1"), (op,)) == op


def test_compose_rejects_wrong_arity(circle2):
    c = circle2.opens
    with pytest.raises(OperadError):
        compose(c, identity_operation(c, "S1"), ())


def test_permute_swaps_entries(circle2):
    c = circle2.opens
    op = enumerate_operations(c, "S1", ["arc0_1", "arc1_1"])[0]
    sw = permute(op, (1, 0))
    assert sw.sources == ("arc1_1", "arc0_1")
    assert permute(sw, (1, 0)) == op
    with pytest.raises(OperadError):
        permute(op, (0, 0))


@given(st.permutations(range(4)), st.permutations(range(4)))
def test_permutation_action_is_right_action(s1, s2):
    from aqftlab.operad import PFOperation

    op = PFOperation("t", tuple("abcd"), (0, 1, 2, 3))
    assert permute(permute(op, s1), s2) == permute(op, compose_permutations(s1, s2))


@pytest.mark.parametrize("n", [2, 3])
def test_circle_operads_satisfy_axioms(n):
    from aqftlab.fincat import build_circle_model

    m = build_circle_model(n)
    for c in (m.disks, m.opens):
        rep = check_operad_axioms(c, max_arity=3)
        assert rep.ok, rep.violations[:3]
        assert rep.stats["associativity"] > 0


def test_discrete_category_operad_is_unary_only():
    c = OrthogonalCategory(discrete_category(["a", "b"]))
    rep = check_operad_axioms(c, max_arity=3)
    assert rep.ok
    assert operations_into(c, "a", 2) == []
    assert len(operations_into(c, "a", 1)) == 1


def test_unclosed_orthogonality_is_reported():
    rank = {"a": 0, "b": 1, "c": 2}
    base = poset_category(list(rank), lambda x, y: rank[x] <= rank[y])
    bc = base.hom("b", "c")[0]
    # relation declared on a pair but not on its precomposites
    c2 = OrthogonalCategory(base, [(bc, bc)], close=False)
    rep2 = check_operad_axioms(c2, max_arity=2)
    assert not rep2.ok
    assert any(v.axiom == "composition_closure" for v in rep2.violations)


def test_max_arity_must_be_positive(circle2):
    with pytest.raises(ValueError):
        check_operad_axioms(circle2.opens, max_arity=0)


def test_envelope_homs_and_identities(circle2):
    env = monoidal_envelope(circle2.opens, tuple_cap=2)
    x = ("arc0_1", "arc1_1")
    homs = env.hom(x, ("S1",))
    assert len(homs) == 1
    assert env.is_morphism(homs[0])
    idx = env.identity(x)
    assert env.compose(idx, idx) == idx
    assert env.compose(homs[0], idx) == homs[0]


def test_envelope_braiding_and_tensor(circle2):
    env = monoidal_envelope(circle2.opens, tuple_cap=2)
    x, y = ("arc0_1",), ("arc1_1",)
    b = env.braiding(x, y)
    assert env.is_morphism(b)
    assert env.compose(env.braiding(y, x), b) == env.identity(x + y)
    t = env.tensor(env.identity(x), env.identity(y))
    assert t == env.identity(x + y)


def test_envelope_fincategory_validates(circle2):
    env = monoidal_envelope(circle2.opens, tuple_cap=2)
    t0 = time.time()
    cat = env.to_fincategory(2)
    assert cat.validate().ok
    assert time.time() - t0 < 30
