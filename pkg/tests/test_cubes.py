from itertools import permutations

import pytest

from opforge.cubes import (
    UnsupportedLayer,
    build_cube,
    expected_layer,
    kernel_intersection_poincare,
    layer_report,
    subsets,
    top_degree_layer,
    total_fiber_poincare,
)
from opforge.exactla import SparseMatrix, StructuralError, rank
from opforge.symseq import Poly


def test_k1_cube():
    c = build_cube(2, 1)
    assert c.map((), (1,)) == SparseMatrix.identity(1)
    assert total_fiber_poincare(c) == Poly()


def test_k2_projections_kill_bracket():
    c = build_cube(2, 2)
    assert c.poincare((1, 2)) == Poly({0: 1, 1: 1})
    br = c.spaces[(1, 2)][0].index("[12]")
    for K in ((1,), (2,)):
        assert not any(c.map(K, (1, 2)).apply([int(i == br) for i in range(2)]))
    assert total_fiber_poincare(c) == Poly({1: 1})


def test_functoriality_k3():
    assert build_cube(2, 3).check_functoriality() == 64  # chains K ⊆ J ⊆ L: four states per point


def test_cube_labels_follow_subsets():
    c = build_cube(2, 3)
    assert "[13]" in c.spaces[(1, 3)][0]


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("k", [2, 3, 4, 5])
def test_three_routes_agree(n, k):
    rep = layer_report(n, k, check_functoriality=False)
    assert rep.passed
    assert rep.total_fiber == expected_layer(n, k) == rep.kernel_route
    assert all(v > 0 for v in rep.total_fiber.coeffs.values())


def test_known_values():
    assert layer_report(3, 2).total_fiber == Poly({2: 1})
    assert layer_report(2, 3).total_fiber == Poly({2: 2})
    assert layer_report(2, 4).total_fiber == Poly({2: 3, 3: 6})


def test_single_bracket_part_is_the_top_degree():
    for n in (2, 3):
        for k in range(2, 6):
            tf = layer_report(n, k, check_functoriality=False).total_fiber
            top = max(tf.coeffs)
            assert Poly({top: tf.coeffs[top]}) == top_degree_layer(n, k)


def test_derangement_counts_at_one():
    # value at q=1: partitions without singletons weighted by cyclic orders
    assert [sum(expected_layer(2, k).coeffs.values()) for k in range(2, 6)] == [1, 2, 9, 44]


def test_relabel_invariance():
    """Vertex polynomials and map ranks are carried along by any permutation
    of the index set, so the inclusion-exclusion sum is unchanged."""
    c = build_cube(2, 3)
    subs = list(subsets(c.index))
    for p in permutations(c.index):
        move = lambda J: tuple(sorted(p[x - 1] for x in J))  # noqa: E731
        for J in subs:
            assert c.poincare(move(J)) == c.poincare(J)
            for K in subs:
                if set(K) <= set(J):
                    assert rank(c.map(move(K), move(J))) == rank(c.map(K, J))
    assert total_fiber_poincare(c) == kernel_intersection_poincare(c)


def test_refuses_non_surjective_cube():
    c = build_cube(2, 2)
    c.maps[((1,), (1, 2))] = SparseMatrix.zeros(1, 2)
    with pytest.raises(StructuralError):
        total_fiber_poincare(c)


def test_k1_layer_refused():
    with pytest.raises(UnsupportedLayer, match="formal immersion"):
        layer_report(2, 1)
    with pytest.raises(ValueError):
        build_cube(2, 6)


def test_report_data():
    data = layer_report(2, 3).to_data()
    assert data["total_fiber"] == "2q^2" and data["pass"] is True
    assert data["vertices"]["{1,2,3}"] == "1 + 3q + 2q^2"
