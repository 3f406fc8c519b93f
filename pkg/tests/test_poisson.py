"""The free Poisson model: identities on graded arguments and Lyndon bases."""
from itertools import permutations

import pytest

from opforge.poisson import (
    PoissonAlgebra,
    bracket_string,
    lie_coordinates,
    lyndon_expansion,
    lyndon_multilinear,
    poisson_coordinates,
    standard_factorization,
)


def sign(e):
    return -1 if e % 2 else 1


def add(*terms):
    out = {}
    for c, x in terms:
        for k, v in x.items():
            out[k] = out.get(k, 0) + c * v
    return {k: v for k, v in out.items() if v}


def elements(A):
    """Homogeneous test elements on disjoint letters with their degrees."""
    x = A.letter
    return [
        (lambda o: x(o + 1), 0),
        (lambda o: A.bracket(x(o + 1), x(o + 2)), A.m),
        (lambda o: A.bracket(x(o + 1), A.bracket(x(o + 2), x(o + 3))), 2 * A.m),
        (lambda o: A.mul(x(o + 1), A.bracket(x(o + 2), x(o + 3))), A.m),
    ]


@pytest.mark.parametrize("m", [-1, 0, 1, 2])
def test_graded_identities(m):
    A = PoissonAlgebra(m)
    els = elements(A)
    for (fa, da) in els:
        for (fb, db) in els:
            for (fc, dc) in els:
                a, b, c = fa(0), fb(10), fc(20)
                # symmetry: [b, a] = -(-1)^(|a||b|+m) [a, b]
                assert A.bracket(b, a) == add((-sign(da * db + m), A.bracket(a, b)))
                # Jacobi
                lhs = A.bracket(a, A.bracket(b, c))
                rhs = add(
                    (sign(m * da + m), A.bracket(A.bracket(a, b), c)),
                    (sign((da + m) * (db + m)), A.bracket(b, A.bracket(a, c))),
                )
                assert lhs == rhs
                # the bracket is a derivation of the product
                lhs = A.bracket(a, A.mul(b, c))
                rhs = add((1, A.mul(A.bracket(a, b), c)), (sign((da + m) * db), A.mul(b, A.bracket(a, c))))
                assert lhs == rhs
                # graded commutativity and associativity of the product
                assert A.mul(a, b) == add((sign(da * db), A.mul(b, a)))
                assert A.mul(A.mul(a, b), c) == A.mul(a, A.mul(b, c))


def test_lyndon_words_and_factorization():
    assert lyndon_multilinear((1, 2, 3)) == [(1, 2, 3), (1, 3, 2)]
    assert standard_factorization((1, 3, 2)) == ((1, 3), (2,))
    assert standard_factorization((1, 2, 4, 3)) == ((1,), (2, 4, 3))
    assert bracket_string((1, 3, 2)) == "[[13]2]"


@pytest.mark.parametrize("m", [-1, 0, 1])
def test_lyndon_expansion_is_triangular(m):
    for w in lyndon_multilinear((1, 2, 3, 4)):
        exp = lyndon_expansion(m, w)
        assert min(exp) == w and abs(exp[w]) == 1


@pytest.mark.parametrize("m", [-1, 0, 1, 2])
def test_coordinates_recover_basis(m):
    for w in lyndon_multilinear((1, 2, 3, 4)):
        assert lie_coordinates(m, lyndon_expansion(m, w)) == {w: 1}


def test_non_lie_element_rejected():
    with pytest.raises(ValueError):
        lie_coordinates(0, {(2, 1): 1})


@pytest.mark.parametrize("m", [0, 1])
def test_poisson_coordinates_of_all_bracketings(m):
    """Every bracketing of four letters is a Lie element: coordinates exist
    and reassemble the element."""
    A = PoissonAlgebra(m)
    x = A.letter
    for p in permutations((1, 2, 3, 4)):
        a, b, c, d = (x(i) for i in p)
        e = A.bracket(A.bracket(a, b), A.mul(c, d))
        coords = poisson_coordinates(m, e)
        rebuilt = {}
        for mono, co in coords.items():
            term = {(): 1}
            for w in mono:
                term = {t + (u,): ct * cu for t, ct in term.items() for u, cu in lyndon_expansion(m, w).items()}
            rebuilt = add((1, rebuilt), (co, term))
        flat = {}
        for mono, co in e.items():
            flat[mono] = flat.get(mono, 0) + co
        assert rebuilt == flat
