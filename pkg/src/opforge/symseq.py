"""Finite sets, graded spaces, Laurent polynomials and symmetric sequences."""
from __future__ import annotations

import json
import random
from fractions import Fraction


class FiniteSet:
    """A finite set of distinct hashable atoms, stored in sorted order."""

    __slots__ = ("labels",)

    def __init__(self, labels):
        labels = list(labels)
        if len(set(labels)) != len(labels):
            raise ValueError(f"labels not distinct: {labels}")
        self.labels = tuple(sorted(labels))

    @classmethod
    def standard(cls, k):
        return cls(range(1, k + 1))

    def __len__(self):
        return len(self.labels)

    def __iter__(self):
        return iter(self.labels)

    def __contains__(self, x):
        return x in self.labels

    def __eq__(self, other):
        return isinstance(other, FiniteSet) and self.labels == other.labels

    def __hash__(self):
        return hash(self.labels)

    def __repr__(self):
        return "{" + ", ".join(map(str, self.labels)) + "}"

    def index(self, x):
        return self.labels.index(x)

    def relabeling(self):
        """Order-preserving bijection onto ``{1..k}``."""
        return {x: i + 1 for i, x in enumerate(self.labels)}


def infinitesimal_composite(I, a, J):
    """``I - {a}`` disjoint union ``J``.

    If ``J`` meets ``I - {a}`` it is first relabeled onto fresh integers above
    ``max(I)``, keeping its order.
    """
    I = I if isinstance(I, FiniteSet) else FiniteSet(I)
    J = J if isinstance(J, FiniteSet) else FiniteSet(J)
    if a not in I:
        raise ValueError(f"{a!r} is not an element of {I}")
    rest = [x for x in I if x != a]
    if set(rest) & set(J.labels):
        top = max(x for x in I.labels)
        J = FiniteSet(range(top + 1, top + 1 + len(J)))
    return FiniteSet(rest + list(J.labels))


# --- permutations -----------------------------------------------------------

def compose_perm(s, t):
    """``(s o t)[i] = s[t[i]]`` for 0-based tuples."""
    return tuple(s[i] for i in t)


def invert_perm(s):
    out = [0] * len(s)
    for i, j in enumerate(s):
        out[j] = i
    return tuple(out)


def perm_sign(s):
    sign = 1
    seen = [False] * len(s)
    for i in range(len(s)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = s[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def check_bijection(s, k=None):
    s = tuple(s)
    if k is not None and len(s) != k:
        raise ValueError(f"bijection has length {len(s)}, expected {k}")
    if sorted(s) != list(range(len(s))):
        raise ValueError(f"{s} is not a bijection of {{0..{len(s) - 1}}}")
    return s


def koszul_sign(degrees, order):
    """Sign of permuting graded items.

    ``degrees[i]`` is the degree of item ``i`` in its current position and
    ``order`` lists the current indices in their new order.
    """
    odd = [i for i in order if degrees[i] % 2]
    inv = 0
    for x in range(len(odd)):
        for y in range(x + 1, len(odd)):
            if odd[x] > odd[y]:
                inv += 1
    return -1 if inv % 2 else 1


def random_perm(k, rng=random):
    p = list(range(k))
    rng.shuffle(p)
    return tuple(p)


# --- Laurent polynomials ----------------------------------------------------

class Poly:
    """Laurent polynomial in ``q`` with integer coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=None):
        self.coeffs = {int(e): int(c) for e, c in (coeffs or {}).items() if c}

    @classmethod
    def monomial(cls, exp, coeff=1):
        return cls({exp: coeff})

    @classmethod
    def from_json(cls, data):
        if isinstance(data, str):
            data = json.loads(data)
        return cls({int(e): c for e, c in data.items()})

    def __eq__(self, other):
        if isinstance(other, int):
            other = Poly({0: other})
        return isinstance(other, Poly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __add__(self, other):
        if isinstance(other, int):
            other = Poly({0: other})
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out.get(e, 0) + c
        return Poly(out)

    __radd__ = __add__

    def __neg__(self):
        return Poly({e: -c for e, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return Poly({e: c * other for e, c in self.coeffs.items()})
        out = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
        return Poly(out)

    __rmul__ = __mul__

    def __call__(self, q):
        return sum(c * Fraction(q) ** e for e, c in self.coeffs.items())

    def __bool__(self):
        return bool(self.coeffs)

    def shift(self, s):
        """Multiply by ``q^s``."""
        return Poly({e + s: c for e, c in self.coeffs.items()})

    def invert(self):
        """Substitute ``q -> 1/q``."""
        return Poly({-e: c for e, c in self.coeffs.items()})

    def substitute_power(self, m):
        """Substitute ``q -> q^m``."""
        out = {}
        for e, c in self.coeffs.items():
            out[e * m] = out.get(e * m, 0) + c
        return Poly(out)

    def degrees(self):
        return sorted(self.coeffs)

    def coefficient(self, e):
        return self.coeffs.get(e, 0)

    def to_json(self):
        return {str(e): c for e, c in sorted(self.coeffs.items())}

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for e, c in sorted(self.coeffs.items()):
            if e == 0:
                mono = str(abs(c))
            else:
                var = "q" if e == 1 else f"q^{e}"
                mono = var if abs(c) == 1 else f"{abs(c)}{var}"
            if not parts:
                parts.append(mono if c > 0 else "-" + mono)
            else:
                parts.append(("+ " if c > 0 else "- ") + mono)
        return " ".join(parts)

    def __repr__(self):
        return f"Poly({self})"


def product_formula(k, exponent):
    """``prod_{i=1}^{k-1} (1 + i q^exponent)``."""
    p = Poly({0: 1})
    for i in range(1, k):
        p = p * (Poly({0: 1}) + Poly({exponent: i}))
    return p


# --- graded spaces and symmetric sequences ----------------------------------

class GradedSpace:
    """Finite-dimensional graded vector space with a named basis."""

    __slots__ = ("basis",)

    def __init__(self, basis=()):
        basis = tuple((lab, int(deg)) for lab, deg in basis)
        if len({lab for lab, _ in basis}) != len(basis):
            raise ValueError("basis labels must be distinct")
        self.basis = basis

    def __len__(self):
        return len(self.basis)

    @property
    def labels(self):
        return [lab for lab, _ in self.basis]

    @property
    def degrees(self):
        return [deg for _, deg in self.basis]

    def dim(self, degree=None):
        if degree is None:
            return len(self.basis)
        return sum(1 for _, d in self.basis if d == degree)

    def dims(self):
        out = {}
        for _, d in self.basis:
            out[d] = out.get(d, 0) + 1
        return out

    def shift(self, s):
        return GradedSpace((lab, d + s) for lab, d in self.basis)

    def __repr__(self):
        return f"GradedSpace({poincare_polynomial(self)})"


def poincare_polynomial(g: GradedSpace) -> Poly:
    return Poly(g.dims())


class SymSeq:
    """Arity-indexed graded spaces with a symmetric-group action.

    ``action(k, perm, i)`` returns the image of basis vector ``i`` of arity
    ``k`` under the bijection ``perm`` (0-based, input ``t`` relabeled to
    ``perm[t]``) as a sparse dict ``{index: coefficient}``.
    """

    def __init__(self, spaces, action):
        self.spaces = dict(spaces)
        self._action = action

    def space(self, k):
        return self.spaces[k]

    def act_basis(self, k, perm, i):
        return self._action(k, perm, i)

    def check_action(self, k, trials=5, rng=None):
        """Identity acts trivially and the action is multiplicative."""
        rng = rng or random.Random(k)
        n = len(self.spaces[k])
        ident = tuple(range(k))
        for i in range(n):
            if self.act_basis(k, ident, i) != {i: 1}:
                return False
        for _ in range(trials):
            s, t = random_perm(k, rng), random_perm(k, rng)
            for i in range(n):
                lhs = apply_bijection(self, compose_perm(s, t), k, {i: 1})
                rhs = apply_bijection(self, s, k, apply_bijection(self, t, k, {i: 1}))
                if lhs != rhs:
                    return False
        return True


def apply_bijection(s: SymSeq, perm, k, vec):
    """Action of a bijection on a sparse vector ``{index: coeff}`` of arity k."""
    perm = check_bijection(perm, k)
    out = {}
    for i, c in vec.items():
        for j, v in s.act_basis(k, perm, i).items():
            out[j] = out.get(j, 0) + c * v
    return {j: v for j, v in out.items() if v}
