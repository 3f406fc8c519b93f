"""Right modules over the builtin operads.

A right module ``R`` over ``O`` has graded spaces ``R(k)`` and insertions
``R(k) (x) O(l) -> R(k+l-1)`` at a chosen input.  Elements are sparse dicts
over a per-arity basis, as for operads.
"""
from __future__ import annotations

from itertools import product

from .exactla import StructuralError
from .operads import Operad, OperadMorphism, UnsupportedOperation, _axpy, builtin_operad, suspend
from .symseq import GradedSpace, Poly, SymSeq, check_bijection, koszul_sign, perm_sign


class RightModule:
    """Shared bookkeeping; subclasses implement ``_basis``, ``_degree``,
    ``_label``, ``_act`` and ``_compose``."""

    name = "module"
    unitary = False
    min_arity = 1

    def __init__(self, operad: Operad):
        self.operad = operad
        self._cache_basis = {}
        self._cache_compose = {}
        self._cache_act = {}

    def basis(self, k):
        if k < self.min_arity:
            return []
        if k not in self._cache_basis:
            self._cache_basis[k] = self._basis(k)
        return self._cache_basis[k]

    def dim(self, k):
        return len(self.basis(k))

    def degree(self, k, i):
        return self._degree(k, i)

    def degrees(self, k):
        return [self.degree(k, i) for i in range(self.dim(k))]

    def labels(self, k):
        return [self._label(k, i) for i in range(self.dim(k))]

    def graded_space(self, k):
        return GradedSpace(zip(self.labels(k), self.degrees(k)))

    def poincare(self, k):
        out = {}
        for d in self.degrees(k):
            out[d] = out.get(d, 0) + 1
        return Poly(out)

    def symseq(self, max_arity):
        spaces = {k: self.graded_space(k) for k in range(self.min_arity, max_arity + 1)}
        return SymSeq(spaces, lambda k, perm, i: self.act(k, i, perm))

    def act(self, k, i, perm):
        perm = tuple(perm)
        if perm == tuple(range(k)):
            return {i: 1}
        key = (k, i, perm)
        hit = self._cache_act.get(key)
        if hit is None:
            hit = self._cache_act[key] = self._act(k, i, perm)
        return hit

    def compose(self, k, i, a, l, j):
        """``r_i o_a p_j`` for ``r_i`` in R(k) and ``p_j`` in O(l)."""
        if not 1 <= a <= k:
            raise ValueError(f"position {a} outside 1..{k}")
        if l == 1:
            return {i: 1}
        key = (k, i, a, l, j)
        hit = self._cache_compose.get(key)
        if hit is None:
            hit = self._cache_compose[key] = self._compose(k, i, a, l, j)
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
        raise UnsupportedOperation(f"{self.name} has no unitary maps")

    def forget_element(self, x, k, a):
        out = {}
        for i, c in x.items():
            _axpy(out, self.forget(k, i, a), c)
        return out

    def __repr__(self):
        return f"<module {self.name} over {self.operad.name}>"


class OperadAsModule(RightModule):
    """``O`` acting on itself from the right.

    With ``augmentation=True`` arity 1 is dropped, leaving the ideal of
    decomposable arities ``k >= 2``; this is the variant whose bar complex is
    the operad's own bar complex up to a shift.
    """

    def __init__(self, operad, augmentation=False, name=None):
        super().__init__(operad)
        self.augmentation = augmentation
        self.min_arity = 2 if augmentation else 1
        self.unitary = operad.unitary and not augmentation
        self.name = name or (f"{operad.name}+" if augmentation else operad.name)

    def _basis(self, k):
        return self.operad.basis(k)

    def _degree(self, k, i):
        return self.operad.degree(k, i)

    def _label(self, k, i):
        return self.operad.labels(k)[i]

    def _act(self, k, i, perm):
        return self.operad.act(k, i, perm)

    def _compose(self, k, i, a, l, j):
        return self.operad.compose(k, i, a, l, j)

    def forget(self, k, i, a):
        if not self.unitary:
            raise UnsupportedOperation(f"{self.name} has no unitary maps")
        return self.operad.forget(k, i, a)


def operad_as_module(O, augmentation=False):
    return OperadAsModule(O, augmentation)


def configuration_module(n):
    """Homology of the configuration spaces of R^n as a right pois_n-module,
    with the unitary maps induced by forgetting points."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return OperadAsModule(builtin_operad("pois", n), name=f"H_*(F(R^{n},-))")


class SuspendedModule(RightModule):
    """``s_(n,d) R``: arity-k degrees shift by ``n(k-1) + d``; a module over
    ``s_n O`` with the same sign rule as the operadic suspension."""

    def __init__(self, base, n, d, operad=None):
        super().__init__(operad or suspend(base.operad, n))
        self.base = base
        self.n = n
        self.d = d
        self.min_arity = base.min_arity
        self.name = f"s_({n},{d}){base.name}"

    def _basis(self, k):
        return self.base.basis(k)

    def _degree(self, k, i):
        return self.base.degree(k, i) + self.n * (k - 1) + self.d

    def _label(self, k, i):
        return self.base.labels(k)[i]

    def _act(self, k, i, perm):
        c = perm_sign(perm) ** (self.n % 2)
        return {x: c * v for x, v in self.base.act(k, i, perm).items()}

    def _compose(self, k, i, a, l, j):
        e = self.n * (l - 1) * (self.base.degree(k, i) + a - 1)
        c = -1 if e % 2 else 1
        return {x: c * v for x, v in self.base.compose(k, i, a, l, j).items()}


def suspend_module(R, n, d):
    return R if n == 0 and d == 0 else SuspendedModule(R, n, d)


class RestrictedModule(RightModule):
    """``R`` viewed over the source of ``f`` by acting through ``f``."""

    def __init__(self, base, f: OperadMorphism):
        if f.target is not base.operad:
            raise ValueError(f"morphism target {f.target.name} is not the module's operad {base.operad.name}")
        super().__init__(f.source)
        self.base = base
        self.morphism = f
        self.min_arity = base.min_arity
        self.unitary = base.unitary
        self.name = f"res_{f.source.name}({base.name})"

    def _basis(self, k):
        return self.base.basis(k)

    def _degree(self, k, i):
        return self.base.degree(k, i)

    def _label(self, k, i):
        return self.base.labels(k)[i]

    def _act(self, k, i, perm):
        return self.base.act(k, i, perm)

    def _compose(self, k, i, a, l, j):
        return self.base.compose_elements({i: 1}, k, a, self.morphism.map_basis(l, j), l)

    def forget(self, k, i, a):
        return self.base.forget(k, i, a)


def restrict(R, f):
    return RestrictedModule(R, f)


# --- diagonal modules ---------------------------------------------------------

class GradedCoalgebraData:
    """Reduced homology of a pointed space with its reduced diagonal.

    ``basis`` lists ``(label, degree)``; ``diagonal`` maps a basis index to
    ``{(i, j): coeff}``.  Coassociativity, graded cocommutativity and degree
    additivity are checked on construction.
    """

    def __init__(self, basis, diagonal=None, name="X"):
        self.basis = [(str(lab), int(deg)) for lab, deg in basis]
        self.diagonal = {int(x): {tuple(k): v for k, v in d.items() if v} for x, d in (diagonal or {}).items()}
        self.name = name
        self._check()

    def degree(self, i):
        return self.basis[i][1]

    def delta(self, i):
        return self.diagonal.get(i, {})

    def _check(self):
        n = len(self.basis)
        for x, d in self.diagonal.items():
            if not 0 <= x < n:
                raise StructuralError(f"diagonal given for unknown class {x}")
            for (i, j), _ in d.items():
                if self.degree(i) + self.degree(j) != self.degree(x):
                    raise StructuralError(f"diagonal of {self.basis[x][0]} is not degree preserving")
            swapped = {}
            for (i, j), c in d.items():
                s = -1 if (self.degree(i) * self.degree(j)) % 2 else 1
                swapped[(j, i)] = swapped.get((j, i), 0) + s * c
            if {k: v for k, v in swapped.items() if v} != d:
                raise StructuralError(f"diagonal of {self.basis[x][0]} is not cocommutative")
            left, right = {}, {}
            for (i, j), c in d.items():
                for (p, q), e in self.delta(i).items():
                    _axpy(left, {(p, q, j): e}, c)
                for (p, q), e in self.delta(j).items():
                    _axpy(right, {(i, p, q): e}, c)
            if left != right:
                raise StructuralError(f"diagonal of {self.basis[x][0]} is not coassociative")

    def iterated(self, i, l):
        """``Delta^(l)(e_i)`` as ``{tuple of l indices: coeff}``."""
        cur = {(i,): 1}
        for _ in range(l - 1):
            nxt = {}
            for t, c in cur.items():
                for (p, q), e in self.delta(t[0]).items():
                    _axpy(nxt, {(p, q) + t[1:]: e}, c)
            cur = nxt
        return cur


def sphere(n):
    """Reduced homology of S^n: one class, zero reduced diagonal."""
    return GradedCoalgebraData([("i", n)], {}, name=f"S^{n}")


def torus():
    """Reduced homology of S^1 x S^1 with ``t -> a(x)b - b(x)a``."""
    return GradedCoalgebraData([("a", 1), ("b", 1), ("t", 2)], {2: {(0, 1): 1, (1, 0): -1}}, name="T^2")


def complex_projective_plane():
    """Reduced homology of CP^2: ``x4 -> x2 (x) x2``."""
    return GradedCoalgebraData([("x2", 2), ("x4", 4)], {1: {(0, 0): 1}}, name="CP^2")


class DiagonalModule(RightModule):
    """``X^(smash k)`` in homology as a right com-module.

    Arity k has basis the k-tuples of reduced classes; inserting a com
    operation of arity l at slot a applies the iterated reduced diagonal
    there.
    """

    def __init__(self, H: GradedCoalgebraData):
        super().__init__(builtin_operad("com"))
        self.H = H
        self.name = f"({H.name})^"
        self._index = {}

    def _basis(self, k):
        tuples = list(product(range(len(self.H.basis)), repeat=k))
        self._index[k] = {t: n for n, t in enumerate(tuples)}
        return tuples

    def _degree(self, k, i):
        return sum(self.H.degree(x) for x in self.basis(k)[i])

    def _label(self, k, i):
        return "⊗".join(self.H.basis[x][0] for x in self.basis(k)[i])

    def index(self, k, t):
        self.basis(k)
        return self._index[k][tuple(t)]

    def _act(self, k, i, perm):
        t = self.basis(k)[i]
        new = [None] * k
        for s, x in enumerate(t):
            new[perm[s]] = x
        order = [perm.index(p) for p in range(k)]  # old slot sitting at new slot p
        sign = koszul_sign([self.H.degree(x) for x in t], order)
        return {self.index(k, new): sign}

    def _compose(self, k, i, a, l, j):
        t = self.basis(k)[i]
        out = {}
        for parts, c in self.H.iterated(t[a - 1], l).items():
            _axpy(out, {self.index(k + l - 1, t[: a - 1] + parts + t[a:]): c}, 1)
        return out


def diagonal_module(H):
    return DiagonalModule(H)


def builtin_module(kind, n=None):
    """``config`` (needs n), ``sphere-diagonal`` (needs n), ``torus-diagonal``,
    ``cp2-diagonal``, ``pois`` / ``pois+`` / ``com`` / ``com+`` (the operad on
    itself, ``+`` dropping arity 1)."""
    if kind == "config":
        return configuration_module(n)
    if kind == "sphere-diagonal":
        if n is None or n < 1:
            raise ValueError("sphere-diagonal needs n >= 1")
        return diagonal_module(sphere(n))
    if kind == "torus-diagonal":
        return diagonal_module(torus())
    if kind == "cp2-diagonal":
        return diagonal_module(complex_projective_plane())
    aug = kind.endswith("+")
    base = kind.rstrip("+")
    if base in ("pois", "com", "lie"):
        return operad_as_module(builtin_operad(base, n if base == "pois" else None), aug)
    raise ValueError(f"unknown module {kind!r}")


__all__ = [
    "DiagonalModule",
    "GradedCoalgebraData",
    "OperadAsModule",
    "RestrictedModule",
    "RightModule",
    "SuspendedModule",
    "builtin_module",
    "complex_projective_plane",
    "configuration_module",
    "diagonal_module",
    "operad_as_module",
    "restrict",
    "sphere",
    "suspend_module",
    "torus",
]
