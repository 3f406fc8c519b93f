"""Multilinear free n-Poisson algebras on degree-0 generators.

Elements are sparse dicts ``monomial -> int`` where a monomial is a tuple of
words (tuples of letters) sorted by their smallest letter.  A word stands for
an element of the tensor algebra on the shifted letters, so a Lie element is
a combination of words of a fixed letter set; a monomial is the graded
commutative product of its words.

The bracket has degree ``m`` and is transported from the graded commutator on
the shifted tensor algebra, ``[a, b] = (-1)^(m|a|) s^-m [s^m a, s^m b]``.
With this convention swapping the arguments costs ``-(-1)^(|a||b| + m)``,
a sign independent of the arguments' internal structure.
"""
from __future__ import annotations

from functools import lru_cache


def word_degree(m, w):
    return m * (len(w) - 1)


def _add(out, key, c):
    v = out.get(key, 0) + c
    if v:
        out[key] = v
    else:
        out.pop(key, None)


class PoissonAlgebra:
    """Arithmetic in the free algebra with bracket degree ``m``."""

    def __init__(self, m):
        self.m = m

    # -- monomials ----------------------------------------------------------

    def mono_degree(self, mono):
        return sum(word_degree(self.m, w) for w in mono)

    def sort_mono(self, factors):
        """Sort factors by smallest letter; return ``(mono, sign)``."""
        m = self.m
        f = list(factors)
        sign = 1
        # insertion sort keeps track of transpositions
        for i in range(1, len(f)):
            j = i
            while j > 0 and min(f[j - 1]) > min(f[j]):
                if (word_degree(m, f[j - 1]) * word_degree(m, f[j])) % 2:
                    sign = -sign
                f[j - 1], f[j] = f[j], f[j - 1]
                j -= 1
        return tuple(f), sign

    @staticmethod
    def letter(i):
        return {((i,),): 1}

    def mul(self, x, y):
        out = {}
        for a, ca in x.items():
            for b, cb in y.items():
                mono, s = self.sort_mono(a + b)
                _add(out, mono, s * ca * cb)
        return out

    # -- brackets -----------------------------------------------------------

    def word_bracket(self, u, v):
        """``[u, v]`` for single words; returns ``{word: coeff}``."""
        m = self.m
        lu, lv = len(u), len(v)
        s = -1 if (m * (lu - 1)) % 2 else 1
        t = -1 if (m * lu * lv) % 2 else 1
        return {u + v: s, v + u: -s * t}

    def _bracket_mono(self, a, b):
        """``[a, b]`` for monomials ``a``, ``b`` (tuples of words)."""
        m = self.m
        out = {}
        if len(a) == 1:
            w = a[0]
            da = word_degree(m, w)
            passed = 0
            for j, y in enumerate(b):
                sign = -1 if ((da + m) * passed) % 2 else 1
                for word, c in self.word_bracket(w, y).items():
                    mono, s2 = self.sort_mono(b[:j] + (word,) + b[j + 1:])
                    _add(out, mono, sign * s2 * c)
                passed += word_degree(m, y)
            return out
        # [a, b] = -(-1)^(|a||b|+m) [b, a]; expand [b, a] as a derivation in a
        da, db = self.mono_degree(a), self.mono_degree(b)
        outer = -1 if (da * db + m) % 2 == 0 else 1
        passed = 0
        for i, x in enumerate(a):
            sign = -1 if ((db + m) * passed) % 2 else 1
            dx = word_degree(m, x)
            # [b, x] = -(-1)^(|b||x|+m) [x, b]
            swap = -1 if (db * dx + m) % 2 == 0 else 1
            for mono_xb, c in self._bracket_mono((x,), b).items():
                mono, s2 = self.sort_mono(a[:i] + mono_xb + a[i + 1:])
                _add(out, mono, outer * sign * swap * s2 * c)
            passed += dx
        return out

    def bracket(self, x, y):
        out = {}
        for a, ca in x.items():
            for b, cb in y.items():
                for mono, c in self._bracket_mono(a, b).items():
                    _add(out, mono, c * ca * cb)
        return out


# --- Lyndon words and standard bracketings ----------------------------------

def lyndon_multilinear(block):
    """Lyndon words on distinct letters: the minimum first, then any order."""
    from itertools import permutations

    block = tuple(sorted(block))
    first, rest = block[0], block[1:]
    return [(first,) + p for p in permutations(rest)]


def standard_factorization(w):
    """``w = u v`` with ``v`` the longest proper Lyndon suffix."""
    tail = w[1:]
    j = 1 + tail.index(min(tail))
    return w[:j], w[j:]


def bracket_string(w, sep=""):
    if len(w) == 1:
        return str(w[0])
    u, v = standard_factorization(w)
    return "[" + bracket_string(u, sep) + sep + bracket_string(v, sep) + "]"


def bracket_tree(w):
    """Standard bracketing as nested tuples ``("br", left, right)``."""
    if len(w) == 1:
        return w[0]
    u, v = standard_factorization(w)
    return ("br", bracket_tree(u), bracket_tree(v))


@lru_cache(maxsize=None)
def _lyndon_expansion(m, w):
    if len(w) == 1:
        return {w: 1}
    alg = PoissonAlgebra(m)
    u, v = standard_factorization(w)
    pu, pv = _lyndon_expansion(m, u), _lyndon_expansion(m, v)
    out = {}
    for a, ca in pu.items():
        for b, cb in pv.items():
            for word, c in alg.word_bracket(a, b).items():
                _add(out, word, c * ca * cb)
    return out


def lyndon_expansion(m, w):
    """Tensor expansion of the standard bracketing of the Lyndon word ``w``."""
    return _lyndon_expansion(m, tuple(w))


def lie_coordinates(m, element):
    """Coordinates of a multilinear Lie element (``{word: c}``) in the
    Lyndon basis; raises ValueError if it is not a Lie element."""
    f = dict(element)
    coords = {}
    while f:
        lo = min(min(w) for w in f)
        heads = [w for w in f if w[0] == lo]
        if not heads:
            raise ValueError("element is not in the free Lie algebra")
        w = min(heads)
        exp = lyndon_expansion(m, w)
        lead = exp[w]
        c = f[w] * lead  # lead is +-1
        coords[w] = coords.get(w, 0) + c
        for word, e in exp.items():
            _add(f, word, -c * e)
    return coords


def poisson_coordinates(m, element):
    """Coordinates of a multilinear Poisson element in the basis of products
    of Lyndon words.  Returns ``{tuple_of_lyndon_words: c}``."""
    groups = {}
    for mono, c in element.items():
        key = tuple(tuple(sorted(w)) for w in mono)
        groups.setdefault(key, {})[mono] = c
    coords = {}
    for key, f in groups.items():
        f = dict(f)
        mins = [b[0] for b in key]
        while f:
            heads = [mono for mono in f if all(w[0] == lo for w, lo in zip(mono, mins))]
            if not heads:
                raise ValueError("element is not in the free Poisson algebra")
            mono = min(heads)
            exps = [lyndon_expansion(m, w) for w in mono]
            lead = 1
            for w, e in zip(mono, exps):
                lead *= e[w]
            c = f[mono] * lead
            coords[mono] = coords.get(mono, 0) + c
            terms = {(): 1}
            for e in exps:
                terms = {t + (w,): ct * cw for t, ct in terms.items() for w, cw in e.items()}
            for t, ct in terms.items():
                _add(f, t, -c * ct)
    return {k: v for k, v in coords.items() if v}
