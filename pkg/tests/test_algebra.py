from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, strategies as st

from aqftlab.algebra import (
    AlgebraError,
    AlgebraMorphism,
    DegreeBoundExceeded,
    PresentedModule,
    bimodule_from_morphism,
    clifford_algebra,
    endomorphism_algebra,
    exterior_algebra,
    field_algebra,
    free_right_module,
    is_module_map,
    make_algebra,
    module_homs,
    presented_algebra,
    regular_bimodule,
    regular_right_module,
    relative_tensor,
    restrict_module,
    rules_from_relations,
    subalgebra,
    tensor_algebra,
    unit_iso,
    zero_module,
)
from aqftlab.exactlin import Matrix, Subspace, unit_vector


def clifford_oracle(q):
    """Products of increasing monomials by bubble-sorting concatenated words."""
    n = len(q)

    def mono(mask):
        return [i for i in range(n) if mask >> i & 1]

    table = {}
    for s, t in product(range(1 << n), repeat=2):
        word = mono(s) + mono(t)
        coeff = Fraction(1)
        changed = True
        while changed:
            changed = False
            for k in range(len(word) - 1):
                if word[k] > word[k + 1]:
                    word[k], word[k + 1] = word[k + 1], word[k]
                    coeff = -coeff
                    changed = True
                    break
                if word[k] == word[k + 1]:
                    coeff *= q[word[k]]
                    del word[k:k + 2]
                    changed = True
                    break
        mask = sum(1 << i for i in word)
        if coeff:
            table[(s, t)] = {mask: coeff}
    return table


@pytest.mark.parametrize("q", [[1], [1, 1], [1, -1], [2, 3], [0, 0], [1, 0, -2]])
def test_clifford_matches_word_oracle(q):
    a = clifford_algebra(len(q), q)
    oracle = clifford_oracle([Fraction(x) for x in q])
    for i, j in product(range(a.dim), repeat=2):
        assert a.basis_product(i, j) == oracle.get((i, j), {})
    assert a.validate().ok


def test_clifford_anticommutation():
    a = clifford_algebra(2, [1, 1])
    x, y = a.basis_vector(1), a.basis_vector(2)
    assert a.multiply(x, x) == a.unit
    assert a.multiply(x, y) == tuple(-c for c in a.multiply(y, x))
    assert not a.is_commutative()
    assert exterior_algebra(2).multiply(x, x) == (0, 0, 0, 0)


def test_make_algebra_rejects_nonassociative():
    # dual numbers are fine
    dual = make_algebra(2, [(0, 0, 0, 1), (0, 1, 1, 1), (1, 0, 1, 1)], [1, 0])
    assert dual.is_commutative()
    with pytest.raises(AlgebraError):
        # (e1 e1) e1 = e2 but e1 (e1 e1) = 0
        unit = [(0, k, k, 1) for k in range(3)] + [(k, 0, k, 1) for k in (1, 2)]
        make_algebra(3, unit + [(1, 1, 2, 1), (2, 1, 2, 1)], [1, 0, 0])
    with pytest.raises(AlgebraError):
        make_algebra(2, [(0, 0, 0, 1)], [1, 0])
    with pytest.raises(AlgebraError):
        make_algebra(2, [(0, 0, 5, 1)], [1, 0])


def test_tensor_dimensions_and_unit():
    a = tensor_algebra(clifford_algebra(1, [1]), clifford_algebra(2, [1, 1]))
    assert a.dim == 8
    assert a.validate().ok
    assert tensor_algebra(field_algebra(), exterior_algebra(1)).same_structure(
        tensor_algebra(exterior_algebra(1), field_algebra())
    )


def test_even_subalgebra_and_relative_tensor():
    cl2 = clifford_algebra(2, [1, 1])
    even, inc = subalgebra(cl2, Subspace(4, [unit_vector(4, 0), unit_vector(4, 3)]))
    assert even.dim == 2 and inc.validate().ok
    m = restrict_module(regular_right_module(cl2), inc)
    assert m.validate().ok
    rt = relative_tensor(m, bimodule_from_morphism(inc))
    # Cl2 is free of rank two over its even part
    assert rt.dim == 8
    assert rt.module.validate().ok
    with pytest.raises(AlgebraError):
        subalgebra(cl2, Subspace(4, [unit_vector(4, 0), unit_vector(4, 1), unit_vector(4, 2)]))


def test_relative_tensor_over_itself_is_identity():
    a = clifford_algebra(2, [1, -1])
    rt = relative_tensor(regular_right_module(a), regular_bimodule(a))
    assert rt.dim == a.dim
    assert regular_bimodule(a).validate().ok


def test_module_homs_and_endomorphisms():
    a = clifford_algebra(1, [1])
    free2 = free_right_module(a, 2)
    assert free2.validate().ok
    assert len(module_homs(regular_right_module(a), free2)) == 4
    end = endomorphism_algebra(regular_right_module(a))
    assert end.algebra.dim == 2 and end.algebra.validate().ok
    assert module_homs(zero_module(a), free2) == []
    for phi in module_homs(free2, free2):
        assert is_module_map(phi, free2, free2)


@pytest.mark.parametrize("alg", [field_algebra(), clifford_algebra(2, [1, 1]), exterior_algebra(2)])
def test_unit_iso_round_trip(alg):
    fwd, bwd, end = unit_iso(alg)
    assert fwd.validate().ok and bwd.validate().ok
    assert (bwd.matrix @ fwd.matrix).is_identity()
    assert (fwd.matrix @ bwd.matrix).is_identity()


def test_algebra_morphism_detects_failure():
    cl1 = clifford_algebra(1, [1])
    bad = AlgebraMorphism(cl1, cl1, Matrix.from_rows([[1, 0], [0, 2]]))
    assert not bad.validate().ok


def alternating_words(max_len):
    words = [()]
    for n in range(1, max_len + 1):
        for w in product((0, 1), repeat=n):
            if all(w[i] != w[i + 1] for i in range(n - 1)):
                words.append(w)
    return sorted(words, key=lambda w: (len(w), w))


@pytest.mark.parametrize("bound", [1, 2, 3, 4])
def test_square_zero_free_product_basis(bound):
    alg = presented_algebra(["x", "y"], [((0, 0), {}), ((1, 1), {})], degree_bound=bound)
    assert alg.basis == alternating_words(bound)
    assert alg.dim == 2 * bound + 1


def test_presented_reduction_and_overflow():
    alg = presented_algebra(["x", "y"], [((0, 0), {}), ((1, 1), {})], degree_bound=2)
    xy = alg.index[(0, 1)]
    x = alg.index[(0,)]
    assert alg.basis_product(x, x) == tuple([0] * alg.dim)
    assert alg.basis_product(xy, x) is None
    assert (xy, x) in alg.overflow
    with pytest.raises(DegreeBoundExceeded):
        alg.as_rational_algebra()


def test_presented_clifford_matches_structure_constants():
    # x^2 = 1, y^2 = 1, yx = -xy
    rules = rules_from_relations([
        {(0, 0): 1, (): -1},
        {(1, 1): 1, (): -1},
        {(1, 0): 1, (0, 1): 1},
    ])
    alg = presented_algebra(["x", "y"], rules, degree_bound=3)
    assert alg.dim == 4
    ra = alg.as_rational_algebra()
    assert ra.validate().ok
    assert len(ra.generators()) == 2


def test_rules_from_relations_eliminates_linear():
    rules = rules_from_relations([{(0,): 1, (1,): -1}, {(1, 1): 1}])
    alg = presented_algebra(["a", "b"], rules, degree_bound=3)
    assert alg.dim == 2
    assert rules_from_relations([{(): 1}]) == [((), {})]
    assert presented_algebra(["a"], [((), {})], 3).dim == 0


def test_rule_tail_must_be_smaller():
    with pytest.raises(AlgebraError):
        presented_algebra(["a"], [((0,), {(0, 0): 1})], 3)


def test_presented_module_validation():
    alg = presented_algebra(["x"], [((0, 0), {(): 1})], degree_bound=2)
    sw = Matrix.from_rows([[0, 1], [1, 0]])
    assert PresentedModule(alg, 2, [sw]).validate().ok
    assert not PresentedModule(alg, 2, [sw.scale(2)]).validate().ok
    assert len(PresentedModule(alg, 2, [sw]).homs(PresentedModule(alg, 2, [sw]))) == 2


@given(st.lists(st.integers(-3, 3), min_size=4, max_size=4), st.lists(st.integers(-3, 3), min_size=4, max_size=4),
       st.lists(st.integers(-3, 3), min_size=4, max_size=4))
def test_clifford_associative_on_random_elements(u, v, w):
    a = clifford_algebra(2, [1, -1])
    assert a.multiply(a.multiply(u, v), w) == a.multiply(u, a.multiply(v, w))
