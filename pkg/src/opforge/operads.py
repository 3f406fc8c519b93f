"""Presented operads (com, lie, pois_n), suspension, morphisms and unitary
forgetting maps.

Every operad here is reduced: arity 1 is the unit.  Elements of arity ``k``
are sparse dicts ``{basis_index: coefficient}`` over the normal basis.  Inputs
are ``1..k``; a bijection is a 0-based tuple sending input ``t+1`` to input
``perm[t]+1``.  Partial composition ``x o_a y`` places the inputs of ``y`` at
positions ``a .. a+l-1``.
"""
from __future__ import annotations

from itertools import permutations, product

from .exactla import StructuralError, SparseMatrix, kernel_basis
from .optree import Node, enumerate_trees, graft, is_node, relabel_leaves, set_partitions
from .poisson import (
    PoissonAlgebra,
    bracket_string,
    bracket_tree,
    lyndon_multilinear,
    poisson_coordinates,
    word_degree,
)
from .symseq import GradedSpace, Poly, SymSeq, check_bijection, invert_perm, perm_sign


class UnsupportedOperation(Exception):
    pass


def _axpy(out, y, c):
    for k, v in y.items():
        nv = out.get(k, 0) + c * v
        if nv:
            out[k] = nv
        else:
            out.pop(k, None)


class Operad:
    """Common machinery; subclasses provide bases and structure constants
    for arities >= 2 through ``_basis``, ``_degree``, ``_compose``, ``_act``."""

    name = "operad"
    unitary = False

    def __init__(self):
        self._cache_basis = {}
        self._cache_compose = {}
        self._cache_act = {}

    # -- bases ---------------------------------------------------------------

    def basis(self, k):
        if k not in self._cache_basis:
            if k == 1:
                self._cache_basis[k] = ["id"]
            elif k < 1:
                raise ValueError("reduced operads have no arity-0 part")
            else:
                self._cache_basis[k] = self._basis(k)
        return self._cache_basis[k]

    def dim(self, k):
        return len(self.basis(k))

    def degree(self, k, i):
        return 0 if k == 1 else self._degree(k, i)

    def degrees(self, k):
        return [self.degree(k, i) for i in range(self.dim(k))]

    def labels(self, k):
        return ["id"] if k == 1 else [self._label(k, i) for i in range(self.dim(k))]

    def graded_space(self, k):
        return GradedSpace(zip(self.labels(k), self.degrees(k)))

    def poincare(self, k):
        out = {}
        for d in self.degrees(k):
            out[d] = out.get(d, 0) + 1
        return Poly(out)

    def symseq(self, max_arity):
        spaces = {k: self.graded_space(k) for k in range(1, max_arity + 1)}
        return SymSeq(spaces, lambda k, perm, i: self.act(k, i, perm))

    # -- structure -----------------------------------------------------------

    def compose(self, k, i, a, l, j):
        """Basis element ``i`` of arity k composed at ``a`` with basis ``j``."""
        if not 1 <= a <= k:
            raise ValueError(f"position {a} outside 1..{k}")
        if k == 1:
            return {j: 1}
        if l == 1:
            return {i: 1}
        key = (k, i, a, l, j)
        hit = self._cache_compose.get(key)
        if hit is None:
            hit = self._compose(k, i, a, l, j)
            self._cache_compose[key] = hit
        return hit

    def act(self, k, i, perm):
        perm = tuple(perm)
        if k == 1 or perm == tuple(range(k)):
            return {i: 1}
        key = (k, i, perm)
        hit = self._cache_act.get(key)
        if hit is None:
            hit = self._act(k, i, perm)
            self._cache_act[key] = hit
        return hit

    def compose_elements(self, x, k, a, y, l):
        out = {}
        for i, ci in x.items():
            for j, cj in y.items():
                _axpy(out, self.compose(k, i, a, l, j), ci * cj)
        return out

    def act_element(self, x, k, perm):
        check_bijection(perm, k)
        out = {}
        for i, c in x.items():
            _axpy(out, self.act(k, i, perm), c)
        return out

    def forget(self, k, i, a):
        raise UnsupportedOperation(f"{self.name} has no unitary extension")

    def forget_element(self, x, k, a):
        out = {}
        for i, c in x.items():
            _axpy(out, self.forget(k, i, a), c)
        return out

    # -- generators and trees -----------------------------------------------

    def generators(self):
        """``{name: (degree, element of arity 2)}``."""
        raise NotImplementedError

    def generator_info(self):
        """``{name: (degree, symmetry)}`` with symmetry the sign of the swap."""
        info = {}
        for name, (deg, el) in self.generators().items():
            swapped = self.act_element(el, 2, (1, 0))
            if swapped == el:
                sym = 1
            elif swapped == {i: -c for i, c in el.items()}:
                sym = -1
            else:
                raise StructuralError(f"generator {name} is not an eigenvector of the swap")
            info[name] = (deg, sym)
        return info

    def compose_tree(self, root, value=None):
        """Evaluate a tree whose vertices carry elements of this operad.

        ``value(label)`` gives the element for a vertex label (default: the
        generator of that name).  Children are read in planar order and the
        result is expressed on the sorted leaf labels.
        """
        if value is None:
            gens = self.generators()
            value = lambda lab: gens[lab][1]  # noqa: E731

        def rec(x):
            if not is_node(x):
                return {0: 1}, 1, [x]
            elem = value(x.label)
            arity = len(x.children)
            offset = 0
            lv = []
            for c in x.children:
                ce, ca, cl = rec(c)
                if is_node(c):
                    elem = self.compose_elements(elem, arity, offset + 1, ce, ca)
                    arity += ca - 1
                offset += ca
                lv.extend(cl)
            return elem, arity, lv

        elem, k, lv = rec(root)
        order = sorted(lv)
        perm = tuple(order.index(x) for x in lv)
        return self.act_element(elem, k, perm)

    def rep_tree(self, k, i):
        """A generator tree evaluating to ``c * e_i``; returns ``(tree, c)``."""
        tree = self._rep_tree(k, i)
        val = self.compose_tree(tree)
        if set(val) != {i}:
            raise StructuralError(f"representative tree of {self.labels(k)[i]} evaluates to {val}")
        return tree, val[i]

    def __repr__(self):
        return f"<operad {self.name}>"


class PoissonOperad(Operad):
    """Sub-operads of the n-Poisson operad with bracket degree ``m = n - 1``.

    ``product`` and ``bracket`` select which generators are present: com is
    the product alone, lie (degree -1 bracket) the bracket alone with m=-1.
    """

    def __init__(self, name, m, product=True, bracket=True):
        super().__init__()
        if not (product or bracket):
            raise ValueError("need at least one generator")
        self.name = name
        self.m = m
        self.has_product = product
        self.has_bracket = bracket
        self.unitary = product
        self.alg = PoissonAlgebra(m)
        self._index = {}

    def _basis(self, k):
        letters = tuple(range(1, k + 1))
        if not self.has_bracket:
            monos = [tuple((x,) for x in letters)]
        elif not self.has_product:
            monos = [(w,) for w in lyndon_multilinear(letters)]
        else:
            monos = []
            for part in set_partitions(letters):
                for words in product(*(lyndon_multilinear(b) for b in part)):
                    monos.append(tuple(words))
            monos.sort(key=lambda mo: -len(mo))
        self._index[k] = {mo: n for n, mo in enumerate(monos)}
        return monos

    def index(self, k, mono):
        self.basis(k)
        return self._index[k][mono]

    def _degree(self, k, i):
        return sum(word_degree(self.m, w) for w in self.basis(k)[i])

    def _label(self, k, i):
        sep = "," if k >= 10 else ""
        return "·".join(bracket_string(w, sep) for w in self.basis(k)[i])

    def _rep_tree(self, k, i):
        if k == 1:
            return 1
        mono = self.basis(k)[i]

        def btree(t):
            if isinstance(t, tuple):
                return Node("br", self.m, (btree(t[1]), btree(t[2])))
            return t

        factors = [btree(bracket_tree(w)) for w in mono]
        tree = factors[-1]
        for f in reversed(factors[:-1]):
            tree = Node("mu", 0, (f, tree))
        return tree

    def evaluate(self, x):
        """Model value of a planar tree with ``mu``/``br`` vertices."""
        if not is_node(x):
            return self.alg.letter(x)
        a, b = (self.evaluate(c) for c in x.children)
        if x.label == "mu":
            return self.alg.mul(a, b)
        if x.label == "br":
            return self.alg.bracket(a, b)
        raise ValueError(f"unknown generator {x.label!r}")

    def coordinates(self, k, element):
        self.basis(k)
        idx = self._index[k]
        out = {}
        for mono, c in poisson_coordinates(self.m, element).items():
            if mono not in idx:
                raise StructuralError(f"{mono} is outside the normal basis of {self.name}({k})")
            out[idx[mono]] = c
        return out

    def rewrite(self, tree):
        """Normal-form coordinates of a planar generator tree on leaves 1..k."""
        from .optree import leaves

        k = len(leaves(tree))
        return self.coordinates(k, self.evaluate(tree))

    def _compose(self, k, i, a, l, j):
        t = self._rep_tree(k, i)
        s = self._rep_tree(l, j)
        t = relabel_leaves(t, {x: x + l - 1 for x in range(a + 1, k + 1)})
        s = relabel_leaves(s, {x: x + a - 1 for x in range(1, l + 1)})
        tree, sign = graft(t, a, s)
        out = self.coordinates(k + l - 1, self.evaluate(tree))
        return {n: sign * c for n, c in out.items()}

    def _act(self, k, i, perm):
        t = relabel_leaves(self._rep_tree(k, i), {x: perm[x - 1] + 1 for x in range(1, k + 1)})
        return self.coordinates(k, self.evaluate(t))

    def generators(self):
        gens = {}
        if self.has_product:
            gens["mu"] = (0, {self.index(2, ((1,), (2,))): 1})
        if self.has_bracket:
            gens["br"] = (self.m, {self.index(2, ((1, 2),)): 1})
        return gens

    def forget(self, k, i, a):
        """Substitute the unit for input ``a``: a bare factor ``x_a`` drops
        out, any longer bracket word containing ``a`` gives zero."""
        if not self.unitary:
            raise UnsupportedOperation(f"{self.name} has no unitary extension")
        if not 1 <= a <= k:
            raise ValueError(f"position {a} outside 1..{k}")
        if k == 1:
            return {0: 1}
        mono = self.basis(k)[i]
        if (a,) not in mono:
            return {}
        shift = lambda w: tuple(x - 1 if x > a else x for x in w)  # noqa: E731
        rest = tuple(shift(w) for w in mono if w != (a,))
        if k - 1 == 1:
            return {0: 1}
        return {self.index(k - 1, rest): 1}

    def relations(self):
        """Defining relations as lists of ``(coeff, planar tree)`` on 1,2,3."""
        m = self.m
        mu = lambda x, y: Node("mu", 0, (x, y))  # noqa: E731
        br = lambda x, y: Node("br", m, (x, y))  # noqa: E731
        s = -1 if m % 2 else 1
        rels = []
        if self.has_product:
            rels.append([(1, mu(mu(1, 2), 3)), (-1, mu(1, mu(2, 3)))])
        if self.has_bracket:
            rels.append([(1, br(1, br(2, 3))), (-s, br(br(1, 2), 3)), (-s, br(2, br(1, 3)))])
        if self.has_product and self.has_bracket:
            rels.append([(1, br(1, mu(2, 3))), (-1, mu(br(1, 2), 3)), (-1, mu(2, br(1, 3)))])
        return rels


class ComOperad(PoissonOperad):
    def __init__(self):
        super().__init__("com", 0, product=True, bracket=False)

    def _compose(self, k, i, a, l, j):
        return {0: 1}

    def _act(self, k, i, perm):
        return {0: 1}


class SuspendedOperad(Operad):
    """``s_n O(k) = S_n(k) (x) O(k)`` with ``S_n(k)`` one-dimensional in degree
    ``n(k-1)``, carrying the sign representation to the power n.

    ``S_n`` is realized as the endomorphism operad of a line in degree ``-n``,
    which fixes its composition signs:
    ``(f_k (x) p) o_a (f_l (x) q) = (-1)^(n(l-1)(|p| + a - 1)) f (x) (p o_a q)``.
    """

    def __init__(self, base, n):
        super().__init__()
        self.base = base
        self.n = n
        self.name = f"s_{n}({base.name})" if n < 0 else f"s_{n}{base.name}"
        self.unitary = False

    def _basis(self, k):
        return self.base.basis(k)

    def _degree(self, k, i):
        return self.base.degree(k, i) + self.n * (k - 1)

    def _label(self, k, i):
        return self.base.labels(k)[i]

    def _compose(self, k, i, a, l, j):
        e = self.n * (l - 1) * (self.base.degree(k, i) + a - 1)
        c = -1 if e % 2 else 1
        return {x: c * v for x, v in self.base.compose(k, i, a, l, j).items()}

    def _act(self, k, i, perm):
        c = perm_sign(perm) ** (self.n % 2)
        return {x: c * v for x, v in self.base.act(k, i, perm).items()}

    def generators(self):
        return {name: (deg + self.n, el) for name, (deg, el) in self.base.generators().items()}

    def _rep_tree(self, k, i):
        def shift(x):
            if not is_node(x):
                return x
            return Node(x.label, x.degree + self.n * (len(x.children) - 1), tuple(shift(c) for c in x.children))

        return shift(self.base._rep_tree(k, i))

    def relations(self):
        return None


_SUSPENSIONS: dict = {}


def suspend(O, n):
    """Operadic suspension ``s_n O``; ``s_0 O`` is ``O`` itself.  Repeated
    calls return the same object, so morphisms into it compose."""
    if n == 0:
        return O
    key = (id(O), n)
    if key not in _SUSPENSIONS:
        _SUSPENSIONS[key] = (O, SuspendedOperad(O, n))
    return _SUSPENSIONS[key][1]


class OperadElement:
    """An element of ``O(k)`` as sparse coordinates over the normal basis."""

    __slots__ = ("operad", "arity", "coords")

    def __init__(self, operad, arity, coords):
        self.operad = operad
        self.arity = arity
        self.coords = {i: c for i, c in coords.items() if c}
        n = operad.dim(arity) if arity >= 1 else 1
        if any(not 0 <= i < n for i in self.coords):
            raise IndexError("coordinate outside the basis")

    @classmethod
    def basis_element(cls, operad, arity, i):
        return cls(operad, arity, {i: 1})

    def __eq__(self, other):
        return (
            isinstance(other, OperadElement)
            and other.operad is self.operad
            and other.arity == self.arity
            and other.coords == self.coords
        )

    def __add__(self, other):
        out = dict(self.coords)
        _axpy(out, other.coords, 1)
        return OperadElement(self.operad, self.arity, out)

    def __sub__(self, other):
        out = dict(self.coords)
        _axpy(out, other.coords, -1)
        return OperadElement(self.operad, self.arity, out)

    def __mul__(self, c):
        return OperadElement(self.operad, self.arity, {i: c * v for i, v in self.coords.items()})

    __rmul__ = __mul__

    def is_zero(self):
        return not self.coords

    def components(self):
        """Degree-homogeneous parts ``{degree: OperadElement}``."""
        out = {}
        for i, c in self.coords.items():
            d = self.operad.degree(self.arity, i)
            out.setdefault(d, {})[i] = c
        return {d: OperadElement(self.operad, self.arity, v) for d, v in out.items()}

    def __repr__(self):
        labs = self.operad.labels(self.arity) if self.arity >= 1 else ["1"]
        if not self.coords:
            return "0"
        return " + ".join(f"{c}*{labs[i]}" for i, c in sorted(self.coords.items()))


def partial_compose(x: OperadElement, a, y: OperadElement) -> OperadElement:
    if x.operad is not y.operad:
        raise ValueError("elements belong to different operads")
    if not 1 <= a <= x.arity:
        raise ValueError(f"{a} is not an input of an arity-{x.arity} element")
    coords = x.operad.compose_elements(x.coords, x.arity, a, y.coords, y.arity)
    return OperadElement(x.operad, x.arity + y.arity - 1, coords)


def apply_bijection(x: OperadElement, perm) -> OperadElement:
    return OperadElement(x.operad, x.arity, x.operad.act_element(x.coords, x.arity, perm))


def forget_unitary(x: OperadElement, a) -> OperadElement:
    """Insert the unit at input ``a`` (arity drops by one)."""
    if x.arity < 2:
        raise ValueError("need arity >= 2")
    if not 1 <= a <= x.arity:
        raise ValueError(f"{a} is not an input of an arity-{x.arity} element")
    return OperadElement(x.operad, x.arity - 1, x.operad.forget_element(x.coords, x.arity, a))


# --- morphisms ---------------------------------------------------------------

def _free_trees(gen_info, k):
    labels = [(name, deg) for name, (deg, _) in sorted(gen_info.items())]
    return [t.root for t in enumerate_trees({2: labels}, range(1, k + 1))]


class OperadMorphism:
    """A morphism determined by images of the binary generators.

    Construction checks degrees, equivariance in arity 2 and that every
    arity-3 relation of the source maps to zero in the target.
    """

    def __init__(self, source, target, images, name=None):
        self.source = source
        self.target = target
        self.name = name or f"{source.name}->{target.name}"
        gens = source.generators()
        if set(images) != set(gens):
            raise ValueError(f"images must be given for generators {sorted(gens)}")
        self.images = {g: {i: c for i, c in v.items() if c} for g, v in images.items()}
        self._cache = {}
        for g, (deg, _) in gens.items():
            for i in self.images[g]:
                if target.degree(2, i) != deg:
                    raise StructuralError(f"image of {g} is not of degree {deg}")
        for g, (_, el) in gens.items():
            lhs = self.map_element(source.act_element(el, 2, (1, 0)), 2)
            rhs = target.act_element(self.map_element(el, 2), 2, (1, 0))
            if lhs != rhs:
                raise StructuralError(f"image of {g} is not equivariant")
        self._check_relations()

    def _check_relations(self):
        info = {g: (d, 0) for g, (d, _) in self.source.generators().items()}
        trees = _free_trees(info, 3)
        src_cols = [self.source.compose_tree(t) for t in trees]
        tgt_cols = [self.target.compose_tree(t, lambda lab: self.images[lab]) for t in trees]
        src = SparseMatrix.from_columns(self.source.dim(3), src_cols)
        for v in kernel_basis(src):
            total = {}
            for c, col in zip(v, tgt_cols):
                if c:
                    _axpy(total, col, c)
            if total:
                raise StructuralError(f"{self.name}: a relation of the source maps to {total}")

    def map_basis(self, k, i):
        if k == 1:
            return {0: 1}
        key = (k, i)
        if key not in self._cache:
            tree, c = self.source.rep_tree(k, i)
            val = self.target.compose_tree(tree, lambda lab: self.images[lab])
            self._cache[key] = {x: v * c for x, v in val.items()}  # c is +-1
        return self._cache[key]

    def map_element(self, x, k):
        out = {}
        for i, c in x.items():
            _axpy(out, self.map_basis(k, i), c)
        return out

    def __call__(self, x: OperadElement) -> OperadElement:
        if x.operad is not self.source:
            raise ValueError("element is not in the source operad")
        return OperadElement(self.target, x.arity, self.map_element(x.coords, x.arity))

    def then(self, other):
        """Composite ``other o self``."""
        if other.source is not self.target:
            raise ValueError("morphisms are not composable")
        images = {g: other.map_element(v, 2) for g, v in self.images.items()}
        return OperadMorphism(self.source, other.target, images, f"{self.name};{other.name}")


# --- builtins ----------------------------------------------------------------

_BUILTIN = {}


def builtin_operad(name, n=None):
    """``com``, ``lie`` (bracket of degree -1) or ``pois`` with ``n >= 1``."""
    if name.startswith("pois") and n is None and name[4:].isdigit():
        n = int(name[4:])
        name = "pois"
    key = (name, n if name == "pois" else None)
    if key in _BUILTIN:
        return _BUILTIN[key]
    if name == "com":
        O = ComOperad()
    elif name == "lie":
        O = PoissonOperad("lie", -1, product=False, bracket=True)
    elif name == "pois":
        if n is None or n < 1:
            raise ValueError("pois needs n >= 1")
        O = PoissonOperad(f"pois_{n}", n - 1, product=True, bracket=True)
    else:
        raise ValueError(f"unknown operad {name!r}")
    _BUILTIN[key] = O
    return O


MORPHISMS = ("lie-to-pois", "pois-to-com", "lie-to-spois", "spois-to-scom")


def builtin_morphism(name, n):
    """The maps ``lie -> s_{-n} pois_n -> s_{-n} com`` and their suspensions
    ``s_n lie -> pois_n -> com``.

    ``lie-to-pois``: s_n lie -> pois_n; ``pois-to-com``: pois_n -> com;
    ``lie-to-spois``: lie -> s_{-n} pois_n; ``spois-to-scom``: s_{-n} pois_n -> s_{-n} com.
    """
    pois = builtin_operad("pois", n)
    com = builtin_operad("com")
    lie = builtin_operad("lie")
    br = pois.generators()["br"][1]
    mu = pois.generators()["mu"][1]
    mu_com = com.generators()["mu"][1]
    if name == "lie-to-pois":
        return OperadMorphism(suspend(lie, n), pois, {"br": br}, name)
    if name == "pois-to-com":
        return OperadMorphism(pois, com, {"mu": mu_com, "br": {}}, name)
    if name == "lie-to-spois":
        return OperadMorphism(lie, suspend(pois, -n), {"br": br}, name)
    if name == "spois-to-scom":
        return OperadMorphism(suspend(pois, -n), suspend(com, -n), {"mu": mu_com, "br": {}}, name)
    raise ValueError(f"unknown morphism {name!r}; choose from {MORPHISMS}")


def identity_morphism(O):
    return OperadMorphism(O, O, {g: el for g, (_, el) in O.generators().items()}, f"id_{O.name}")


def all_perms(k):
    return list(permutations(range(k)))


__all__ = [
    "MORPHISMS",
    "ComOperad",
    "Operad",
    "OperadElement",
    "OperadMorphism",
    "PoissonOperad",
    "SuspendedOperad",
    "UnsupportedOperation",
    "apply_bijection",
    "builtin_morphism",
    "builtin_operad",
    "forget_unitary",
    "identity_morphism",
    "invert_perm",
    "partial_compose",
    "suspend",
]
