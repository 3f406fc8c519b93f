"""Randomized invariants across the package."""
from math import factorial

from hypothesis import given
from hypothesis import strategies as st

from opforge.barkoszul import _make_compose, _operad_labels, bar_complex, bar_complex_module, check_poincare_koszul
from opforge.cubes import build_cube, expected_layer, layer_report, subsets, total_fiber_poincare
from opforge.exactla import ChainComplex, SparseMatrix, homology_dims, kernel_basis, rank
from opforge.modules import builtin_module, configuration_module, restrict, suspend_module
from opforge.operads import builtin_morphism, builtin_operad, suspend
from opforge.optree import Node, contract_edge, enumerate_trees, graft, leaves, relabel_leaves
from opforge.symseq import apply_bijection, compose_perm, infinitesimal_composite, invert_perm

OPERADS = [builtin_operad("com"), builtin_operad("lie")] + [builtin_operad("pois", n) for n in (1, 2, 3)]
OPERADS += [suspend(builtin_operad("pois", 2), -2), suspend(builtin_operad("com"), 3)]

small_ints = st.integers(-2, 2)


def dense(rows, cols):
    return st.lists(st.lists(small_ints, min_size=cols, max_size=cols), min_size=rows, max_size=rows)


matrix = st.tuples(st.integers(1, 6), st.integers(1, 6)).flatmap(lambda s: dense(*s))


# --- linear algebra ----------------------------------------------------------

@given(matrix)
def test_rank_of_transpose(d):
    m = SparseMatrix.from_dense(d)
    assert rank(m) == rank(m.transpose())


@given(matrix)
def test_rank_nullity(d):
    m = SparseMatrix.from_dense(d)
    assert m.cols == rank(m) + len(kernel_basis(m))


@st.composite
def complexes(draw):
    """Three-term complexes C2 -> C1 -> C0 with d1 d2 = 0 by construction."""
    c0, c1, c2 = draw(st.integers(1, 4)), draw(st.integers(1, 5)), draw(st.integers(1, 4))
    d1 = SparseMatrix.from_dense(draw(dense(c0, c1)))
    ker = kernel_basis(d1)
    cols = []
    for _ in range(c2):
        coeffs = draw(st.lists(small_ints, min_size=len(ker), max_size=len(ker)))
        cols.append({i: sum(c * v[i] for c, v in zip(coeffs, ker)) for i in range(c1)})
    d2 = SparseMatrix.from_columns(c1, cols)
    return ChainComplex({0: range(c0), 1: range(c1), 2: range(c2)}, {1: d1, 2: d2})


@given(complexes(), st.integers(-2, 3))
def test_acyclic_summand_leaves_homology(c, j):
    acyclic = ChainComplex({j: ["a"], j - 1: ["b"]}, {j: SparseMatrix.identity(1)})
    assert homology_dims(c.direct_sum(acyclic)) == homology_dims(c)


@given(complexes())
def test_euler_characteristic(c):
    h = homology_dims(c)
    assert c.euler_characteristic() == sum(v if j % 2 == 0 else -v for j, v in h.items())


# --- symmetric sequences -----------------------------------------------------

@given(st.sets(st.integers(0, 9), min_size=1, max_size=5), st.sets(st.integers(0, 9), min_size=1, max_size=5),
       st.data())
def test_infinitesimal_composite_size(I, J, data):
    a = data.draw(st.sampled_from(sorted(I)))
    assert len(infinitesimal_composite(I, a, J)) == len(I) + len(J) - 1


@given(st.sampled_from(OPERADS), st.integers(2, 4), st.data())
def test_action_is_multiplicative(O, k, data):
    S = O.symseq(k)
    s = tuple(data.draw(st.permutations(range(k))))
    t = tuple(data.draw(st.permutations(range(k))))
    v = {data.draw(st.integers(0, O.dim(k) - 1)): data.draw(st.integers(1, 3))}
    assert apply_bijection(S, compose_perm(s, t), k, v) == apply_bijection(S, s, k, apply_bijection(S, t, k, v))
    assert O.poincare(k)(1) == O.dim(k)


# --- trees ---------------------------------------------------------------------

LABELS = {2: [("a", 0), ("b", 1)], 3: [("c", 1)]}


def trees_on(labels_):
    return st.sampled_from(enumerate_trees(LABELS, labels_))


@given(trees_on((1, 2, 3)), trees_on((4, 5)), trees_on((6, 7, 8)), st.data())
def test_graft_associative(t, s, u, data):
    a = data.draw(st.sampled_from((1, 2, 3)))
    b = data.draw(st.sampled_from((4, 5)))
    left, e1 = graft(t.root, a, s.root)
    left, e2 = graft(left, b, u.root)
    inner, e3 = graft(s.root, b, u.root)
    right, e4 = graft(t.root, a, inner)
    assert left == right and e1 * e2 == e3 * e4


@given(trees_on((1, 2, 3)), trees_on((4, 5)), st.permutations((1, 2, 3, 4, 5)), st.data())
def test_graft_equivariant(t, s, p, data):
    a = data.draw(st.sampled_from((1, 2, 3)))
    sigma = dict(zip((1, 2, 3, 4, 5), p))
    new, e = graft(t.root, a, s.root)
    moved, f = graft(relabel_leaves(t.root, sigma), sigma[a], relabel_leaves(s.root, sigma))
    assert moved == relabel_leaves(new, sigma) and e == f
    assert leaves(moved) == tuple(sorted(sigma[x] for x in leaves(new)))


@given(st.sampled_from([builtin_operad("com"), builtin_operad("pois", 2), builtin_operad("lie")]), st.data())
def test_contractions_cancel_in_pairs(O, data):
    """Contracting two edges in either order gives the same tree with
    opposite signs, so the two-step sum vanishes tree by tree."""
    trees = [t for t in enumerate_trees(_operad_labels(O, 4), range(1, 5)) if len(t.internal_edges()) >= 2]
    t = data.draw(st.sampled_from(trees))
    compose = _make_compose(O)
    total = {}
    for e in t.internal_edges():
        for mid, c in contract_edge(t, e, compose):
            for f in mid.internal_edges():
                for end, c2 in contract_edge(mid, f, compose):
                    total[end] = total.get(end, 0) + c * c2
    assert not any(total.values())


# --- operads -------------------------------------------------------------------

def block_perm(sigma, a, l):
    """The bijection of ``(x.sigma) o_sigma(a) y`` against ``(x o_a y).sigma``."""
    k = len(sigma)
    out = []
    for t in range(k):
        if t == a - 1:
            out.extend(sigma[t] + j for j in range(l))
        else:
            out.append(sigma[t] + (l - 1 if sigma[t] > sigma[a - 1] else 0))
    return tuple(out)


def element(O, k, data):
    idx = data.draw(st.lists(st.integers(0, O.dim(k) - 1), min_size=1, max_size=2))
    return {i: data.draw(st.sampled_from((1, -1, 2))) for i in idx}


@given(st.sampled_from(OPERADS), st.data())
def test_sequential_and_parallel_associativity(O, data):
    k = data.draw(st.integers(2, 3))
    l = data.draw(st.integers(1, 5 - k))
    m = data.draw(st.integers(1, 5 - k - l + 2))
    x, y, z = element(O, k, data), element(O, l, data), element(O, m, data)
    a, b = data.draw(st.integers(1, k)), data.draw(st.integers(1, l))
    lhs = O.compose_elements(O.compose_elements(x, k, a, y, l), k + l - 1, a + b - 1, z, m)
    assert lhs == O.compose_elements(x, k, a, O.compose_elements(y, l, b, z, m), l + m - 1)
    if k >= 2 and k + l + m - 2 <= 5:
        a, c = sorted(data.draw(st.lists(st.integers(1, k), min_size=2, max_size=2, unique=True)))
        first = O.compose_elements(O.compose_elements(x, k, c, z, m), k + m - 1, a, y, l)
        second = O.compose_elements(O.compose_elements(x, k, a, y, l), k + l - 1, c + l - 1, z, m)
        dy = {O.degree(l, i) % 2 for i in y}
        dz = {O.degree(m, i) % 2 for i in z}
        if len(dy) == len(dz) == 1:
            sign = -1 if dy.pop() * dz.pop() else 1
            assert first == {i: sign * v for i, v in second.items()}


@given(st.sampled_from(OPERADS), st.data())
def test_composition_equivariance(O, data):
    k, l = data.draw(st.integers(2, 3)), data.draw(st.integers(2, 3))
    x, y = element(O, k, data), element(O, l, data)
    a = data.draw(st.integers(1, k))
    sigma = tuple(data.draw(st.permutations(range(k))))
    tau = tuple(data.draw(st.permutations(range(l))))
    lhs = O.compose_elements(O.act_element(x, k, sigma), k, sigma[a - 1] + 1, y, l)
    assert lhs == O.act_element(O.compose_elements(x, k, a, y, l), k + l - 1, block_perm(sigma, a, l))
    inner = tuple(range(a - 1)) + tuple(a - 1 + t for t in tau) + tuple(range(a - 1 + l, k + l - 1))
    lhs = O.compose_elements(x, k, a, O.act_element(y, l, tau), l)
    assert lhs == O.act_element(O.compose_elements(x, k, a, y, l), k + l - 1, inner)


UNITARY = [builtin_operad("com")] + [builtin_operad("pois", n) for n in (1, 2, 3)]


@given(st.sampled_from(UNITARY), st.data())
def test_forget_commutes_with_composition(O, data):
    k, l = data.draw(st.integers(2, 3)), data.draw(st.integers(1, 3))
    x, y = element(O, k, data), element(O, l, data)
    b = data.draw(st.integers(1, k))
    p = data.draw(st.integers(1, k).filter(lambda p: p != b))
    composite = O.compose_elements(x, k, b, y, l)
    if p < b:
        assert O.forget_element(composite, k + l - 1, p) == O.compose_elements(O.forget_element(x, k, p), k - 1, b - 1, y, l)
    else:
        assert O.forget_element(composite, k + l - 1, p + l - 1) == \
            O.compose_elements(O.forget_element(x, k, p), k - 1, b, y, l)


# --- modules ---------------------------------------------------------------------

MODULES = [("config", 2), ("config", 3), ("sphere-diagonal", 1), ("torus-diagonal", None), ("pois+", 2)]


@given(st.sampled_from(MODULES), st.data())
def test_module_associativity(kind, data):
    R = builtin_module(*kind)
    O = R.operad
    k = data.draw(st.integers(R.min_arity, 3))
    l = data.draw(st.integers(2, 5 - k))
    m = data.draw(st.integers(1, 5 - k - l + 2))
    if not R.dim(k):
        return
    r, x, y = element(R, k, data), element(O, l, data), element(O, m, data)
    a, b = data.draw(st.integers(1, k)), data.draw(st.integers(1, l))
    lhs = R.compose_elements(R.compose_elements(r, k, a, x, l), k + l - 1, a + b - 1, y, m)
    assert lhs == R.compose_elements(r, k, a, O.compose_elements(x, l, b, y, m), l + m - 1)
    sigma = tuple(data.draw(st.permutations(range(k))))
    lhs = R.compose_elements(R.act_element(r, k, sigma), k, sigma[a - 1] + 1, x, l)
    assert lhs == R.act_element(R.compose_elements(r, k, a, x, l), k + l - 1, block_perm(sigma, a, l))


@given(st.sampled_from([1, 2, 3]), st.integers(1, 3), st.data())
def test_suspension_commutes_with_restriction(n, k, data):
    """Restricting the desuspended configuration module along lie -> s_{-n} pois_n
    agrees with desuspending its restriction along s_n lie -> pois_n, up to
    a sign per structure constant."""
    R = configuration_module(n)
    one = restrict(suspend_module(R, -n, 0), builtin_morphism("lie-to-spois", n))
    two = suspend_module(restrict(R, builtin_morphism("lie-to-pois", n)), -n, 0)
    assert one.poincare(k) == two.poincare(k)
    i, a = data.draw(st.integers(0, R.dim(k) - 1)), data.draw(st.integers(1, k))
    l = data.draw(st.integers(2, 3))
    j = data.draw(st.integers(0, factorial(l - 1) - 1))
    p, q = one.compose(k, i, a, l, j), two.compose(k, i, a, l, j)
    assert set(p) == set(q)
    assert len({p[x] * q[x] for x in p}) <= 1 and all(abs(p[x]) == abs(q[x]) for x in p)


# --- bar complexes and cubes -------------------------------------------------------

@given(st.sampled_from([1, 2, 3]), st.integers(2, 4))
def test_report_euler_consistency(n, k):
    rep = check_poincare_koszul(builtin_operad("pois", n), n, [k])
    assert rep.euler_consistent()
    r = rep.results[0]
    # concentration where predicted: no stray classes
    assert set(r.bar_homology.coeffs) == set(r.predicted.coeffs)


@given(st.sampled_from(MODULES), st.integers(1, 3))
def test_module_bar_euler(kind, k):
    R = builtin_module(*kind)
    if k < R.min_arity:
        return
    bc = bar_complex_module(R, k)
    h = bc.homology()
    assert bc.euler_characteristic() == sum(v if j % 2 == 0 else -v for j, v in h.items())


@given(st.integers(1, 3), st.integers(2, 5))
def test_total_fiber_shape(n, k):
    tf = layer_report(n, k, check_functoriality=False).total_fiber
    assert all(c > 0 for c in tf.coeffs.values())
    # supported between one bracket per pair and one bracket through all points
    assert all((n - 1) * ((k + 1) // 2) <= e <= (n - 1) * (k - 1) for e in tf.coeffs) or n == 1
    d = [1, 0, 1, 2, 9, 44][k]  # derangements of k points
    assert tf(1) == d


@given(st.integers(1, 3), st.integers(2, 4), st.permutations(range(4)))
def test_total_fiber_relabel_invariant(n, k, p):
    c = build_cube(n, k)
    move = {x: y for x, y in zip(c.index, sorted(c.index, key=lambda t: p[t - 1] if t <= 4 else t))}
    for J in subsets(c.index):
        assert c.poincare(tuple(sorted(move[x] for x in J))) == c.poincare(J)
    assert total_fiber_poincare(c) == expected_layer(n, k)


def test_bar_complexes_square_to_zero():
    # construction raises on d o d != 0; exercise every builtin at small arity
    for O in OPERADS:
        for k in (2, 3, 4):
            assert bar_complex(O, k).complex is not None
