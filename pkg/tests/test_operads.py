import random
from itertools import permutations
from math import factorial

import pytest

from opforge.exactla import StructuralError
from opforge.operads import (
    MORPHISMS,
    OperadElement,
    OperadMorphism,
    UnsupportedOperation,
    apply_bijection,
    builtin_morphism,
    builtin_operad,
    forget_unitary,
    identity_morphism,
    partial_compose,
    suspend,
)
from opforge.optree import relabel_leaves
from opforge.symseq import Poly, product_formula

COM = builtin_operad("com")
LIE = builtin_operad("lie")


def pois(n):
    return builtin_operad("pois", n)


def el(O, k, label, c=1):
    return OperadElement(O, k, {O.labels(k).index(label): c})


def test_dimensions():
    assert [COM.dim(k) for k in range(1, 8)] == [1] * 7
    assert [LIE.dim(k) for k in range(1, 7)] == [factorial(k - 1) for k in range(1, 7)]
    for n in (1, 2, 3):
        for k in range(1, 8):
            assert pois(n).poincare(k) == product_formula(k, n - 1)
            assert pois(n).dim(k) == factorial(k)


def test_lie_degrees():
    assert LIE.poincare(4) == Poly({-3: 6})


def test_labels():
    assert pois(2).labels(3) == ["1·2·3", "1·[23]", "[12]·3", "[13]·2", "[1[23]]", "[[13]2]"]
    assert LIE.labels(3) == ["[1[23]]", "[[13]2]"]


def test_generators():
    info = pois(2).generator_info()
    assert info == {"mu": (0, 1), "br": (1, 1)}
    assert pois(1).generator_info()["br"] == (0, -1)
    # the degree -1 bracket is symmetric under the Koszul rule
    assert LIE.generator_info() == {"br": (-1, 1)}


def test_bracket_of_product_is_a_derivation():
    P = pois(2)
    br, mu = el(P, 2, "[12]"), el(P, 2, "1·2")
    assert partial_compose(br, 2, mu) == el(P, 3, "[12]·3") + el(P, 3, "[13]·2")


def test_lie_composite_lands_in_lyndon_basis():
    br = el(LIE, 2, "[12]")
    assert partial_compose(br, 2, br) == el(LIE, 3, "[1[23]]")
    assert partial_compose(br, 1, br).coords  # nonzero, a combination of both basis words


def test_com_composites():
    mu = OperadElement.basis_element(COM, 2, 0)
    assert partial_compose(mu, 2, mu) == partial_compose(mu, 1, mu) == OperadElement.basis_element(COM, 3, 0)


def test_unit():
    P = pois(3)
    unit = OperadElement.basis_element(P, 1, 0)
    x = el(P, 3, "[13]·2")
    assert partial_compose(unit, 1, x) == x
    assert all(partial_compose(x, a, unit) == x for a in (1, 2, 3))


def test_mismatched_operads():
    with pytest.raises(ValueError):
        partial_compose(el(pois(2), 2, "[12]"), 1, el(pois(3), 2, "[12]"))
    with pytest.raises(ValueError):
        partial_compose(el(pois(2), 2, "[12]"), 3, el(pois(2), 2, "[12]"))


def test_relations_vanish_under_all_relabelings():
    for O in (COM, LIE, pois(1), pois(2), pois(3)):
        for rel in O.relations():
            for p in permutations((1, 2, 3)):
                total = {}
                for c, tree in rel:
                    for i, v in O.rewrite(relabel_leaves(tree, {j + 1: p[j] for j in range(3)})).items():
                        total[i] = total.get(i, 0) + c * v
                assert not any(total.values())


def test_normal_form_idempotent():
    for O in (LIE, pois(2)):
        for k in range(2, 5):
            for i in range(O.dim(k)):
                tree, c = O.rep_tree(k, i)
                assert c == 1
                assert O.rewrite(tree) == {i: 1}


def test_arity_three_rank():
    """All 3-leaf generator trees span exactly the normal basis."""
    from opforge.exactla import SparseMatrix, rank
    from opforge.operads import _free_trees

    for O in (LIE, pois(1), pois(2)):
        trees = _free_trees(O.generator_info(), 3)
        cols = [O.compose_tree(t) for t in trees]
        assert rank(SparseMatrix.from_columns(O.dim(3), cols)) == O.dim(3)


def test_forget_unitary():
    mu3 = OperadElement.basis_element(COM, 3, 0)
    assert forget_unitary(mu3, 2) == OperadElement.basis_element(COM, 2, 0)
    P = pois(2)
    assert forget_unitary(el(P, 2, "1·2"), 1) == OperadElement.basis_element(P, 1, 0)
    assert forget_unitary(el(P, 2, "[12]"), 1).is_zero()
    assert forget_unitary(el(P, 3, "[13]·2"), 2) == el(P, 2, "[12]")
    with pytest.raises(UnsupportedOperation):
        forget_unitary(el(LIE, 2, "[12]"), 1)


def test_suspension_degrees():
    assert suspend(COM, 0) is COM
    for n in (1, 2, 3):
        assert suspend(COM, n).generators()["mu"][0] == n
        assert suspend(COM, n).poincare(4) == Poly({3 * n: 1})
    # s_n lie has its bracket in degree n-1, like pois_n
    assert suspend(LIE, 2).generator_info()["br"] == pois(2).generator_info()["br"]


def test_double_suspension_dims():
    for n, m in ((1, 1), (2, -1), (-2, 3)):
        for k in range(1, 5):
            assert suspend(suspend(pois(2), n), m).poincare(k) == suspend(pois(2), n + m).poincare(k)


def test_suspension_degree_additivity():
    rng = random.Random(3)
    for n in (1, -2, 3):
        S = suspend(pois(2), n)
        for _ in range(20):
            k, l = rng.randint(2, 3), rng.randint(2, 3)
            i, j = rng.randrange(S.dim(k)), rng.randrange(S.dim(l))
            a = rng.randint(1, k)
            for x in S.compose(k, i, a, l, j):
                assert S.degree(k + l - 1, x) == S.degree(k, i) + S.degree(l, j)


@pytest.mark.parametrize("name", MORPHISMS)
@pytest.mark.parametrize("n", [1, 2, 3])
def test_builtin_morphisms(name, n):
    f = builtin_morphism(name, n)
    rng = random.Random(n)
    # compatible with composition on random elements
    for _ in range(10):
        k, l = rng.randint(2, 3), rng.randint(2, 3)
        S = f.source
        x = OperadElement.basis_element(S, k, rng.randrange(S.dim(k)))
        y = OperadElement.basis_element(S, l, rng.randrange(S.dim(l)))
        a = rng.randint(1, k)
        assert f(partial_compose(x, a, y)) == partial_compose(f(x), a, f(y))
        perm = tuple(rng.sample(range(k), k))
        assert f(apply_bijection(x, perm)) == apply_bijection(f(x), perm)


def test_lie_to_com_composite_kills_bracket():
    g = builtin_morphism("lie-to-spois", 2).then(builtin_morphism("spois-to-scom", 2))
    assert g.images["br"] == {}


def test_lie_bracket_degree_matches_after_desuspension():
    f = builtin_morphism("lie-to-spois", 2)
    assert f.target.generators()["br"][0] == -1


def test_morphism_checks():
    P = pois(2)
    with pytest.raises(StructuralError):
        OperadMorphism(P, COM, {"mu": {0: 1}, "br": {0: 1}})  # degree mismatch
    with pytest.raises(ValueError):
        OperadMorphism(P, COM, {"mu": {0: 1}})
    with pytest.raises(StructuralError):  # symmetric product onto an antisymmetric bracket
        OperadMorphism(COM, pois(1), {"mu": pois(1).generators()["br"][1]})
    assert identity_morphism(P).map_basis(3, 4) == {4: 1}


def test_unknown_names():
    with pytest.raises(ValueError):
        builtin_operad("ass")
    with pytest.raises(ValueError):
        builtin_operad("pois", 0)
    with pytest.raises(ValueError):
        builtin_morphism("lie-to-com", 2)
