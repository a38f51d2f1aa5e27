import pytest

from aqftlab.fincat import (
    CategoryError,
    FinCategory,
    OrthogonalCategory,
    build_circle_model,
    discrete_category,
    identity_functor,
    orthogonal_closure,
    poset_category,
    slice_category,
    terminal_objects,
    validate_orthogonal_category,
)
from aqftlab.operad import envelope_functor


def chain3():
    rank = {"a": 0, "b": 1, "c": 2}
    return poset_category(list(rank), lambda x, y: rank[x] <= rank[y], name="chain")


def test_circle_model_object_counts():
    m2 = build_circle_model(2)
    assert set(m2.disks.base.objects) == {"arc0_1", "arc1_1"}
    assert len(build_circle_model(3).disks.base.objects) == 6
    for n in range(2, 7):
        assert len(build_circle_model(n).disks.base.objects) == n * (n - 1)
        assert len(build_circle_model(n).opens.base.objects) == n * (n - 1) + 1


def test_circle_n2_arcs_orthogonal_into_circle(circle2):
    base = circle2.opens.base
    f0 = base.hom("arc0_1", "S1")[0]
    f1 = base.hom("arc1_1", "S1")[0]
    assert circle2.opens.orthogonal(f0, f1) and circle2.opens.orthogonal(f1, f0)


def test_disjoint_arcs_in_length_two_arc(circle3):
    base = circle3.disks.base
    f0 = base.hom("arc0_1", "arc0_2")[0]
    f1 = base.hom("arc1_1", "arc0_2")[0]
    assert circle3.disks.orthogonal(f0, f1)
    g = base.hom("arc0_2", "arc0_2")[0]
    assert not circle3.disks.orthogonal(g, f0)


@pytest.mark.parametrize("n", range(2, 7))
def test_circle_models_validate(n):
    m = build_circle_model(n)
    for c in (m.disks, m.opens):
        assert c.base.validate().ok
        assert validate_orthogonal_category(c).ok
    assert m.j.validate().ok
    assert m.j.is_full()


def test_circle_relation_is_closed(circle3):
    for c in (circle3.disks, circle3.opens):
        assert orthogonal_closure(c.base, c.pairs) == set(c.pairs)
        again = OrthogonalCategory(c.base, c.generators)
        assert again.pairs == c.pairs


def test_empty_relation_is_valid():
    assert validate_orthogonal_category(OrthogonalCategory(chain3())).ok


def test_unclosed_relation_reports_witness():
    base = poset_category(["a", "b", "t", "u"], lambda x, y: x == y or (x, y) in {("a", "t"), ("b", "t"), ("t", "u"), ("a", "u"), ("b", "u")})
    c = OrthogonalCategory(base, [("a->t", "b->t"), ("b->t", "a->t")], close=False)
    rep = validate_orthogonal_category(c)
    assert not rep.ok
    assert any(v.axiom == "postcomposition" and v.witness[2] == "t->u" for v in rep.violations)


def test_corrupted_composition_table_detected():
    c = chain3()
    comp = {(c.label(g), c.label(f)): c.label(h) for (g, f), h in c.table.items()}
    comp[("b->c", "a->b")] = "id_a"
    bad = FinCategory(c.objects, [(c.label(i), c.source(i), c.target(i)) for i in c.morphism_ids()], {o: f"id_{o}" for o in c.objects}, comp)
    assert not bad.validate().ok


def test_unknown_labels_rejected():
    with pytest.raises(CategoryError):
        FinCategory(["a"], [("id_a", "a", "a")], {"a": "id_a"}, {("id_a", "x"): "id_a"})
    with pytest.raises(CategoryError):
        OrthogonalCategory(chain3(), [("nope", "a->b")])


def test_slice_of_identity_has_terminal_object():
    c = chain3()
    s = slice_category(identity_functor(c), "b")
    assert len(s.category.objects) == 2
    assert terminal_objects(s.category) == [("b", "id_b")]


def test_slice_of_discrete_functor():
    c = discrete_category(["x", "y"])
    s = slice_category(identity_functor(c), "x")
    assert s.category.objects == (("x", "id_x"),)


def test_envelope_slice_over_circle_n2(circle2):
    env = envelope_functor(circle2.j, circle2.disks, circle2.opens)
    sl = env.slice_over("S1")
    labels = sorted(x[0] for x in sl.category.objects)
    assert labels == sorted([(), ("arc0_1",), ("arc1_1",), ("arc0_1", "arc1_1"), ("arc1_1", "arc0_1")])
    assert sl.category.validate().ok
