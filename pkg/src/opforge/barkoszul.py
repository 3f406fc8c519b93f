"""Bar complexes of operads and right modules, Koszul-dual dimensions and
Poincaré–Koszul duality reports.

The bar complex in arity k is spanned by canonical trees on ``{1..k}`` whose
vertices carry normal-basis elements.  Each operad vertex is suspended by
one degree; a module root is not.  The differential contracts internal edges
and composes the two labels.
"""
from __future__ import annotations

import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .exactla import QQ, ChainComplex, Field, SparseMatrix, StructuralError, homology_dims
from .modules import RightModule
from .operads import Operad
from .optree import OpTree, contract_edge, enumerate_trees, total_degree
from .symseq import Poly


def _threads():
    try:
        return max(1, int(os.environ.get("OPFORGE_THREADS", "1")))
    except ValueError:
        return 1


def _parallel_map(fn, items):
    items = list(items)
    t = _threads()
    if t == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=t) as pool:
        return list(pool.map(fn, items))


@dataclass
class BarComplex:
    """A bar complex together with the trees spanning it."""

    source: object
    arity: int
    trees: dict  # degree -> list of OpTree
    complex: ChainComplex

    def homology(self, field: Field = QQ):
        return homology_dims(self.complex, field)

    def poincare(self, field: Field = QQ):
        return Poly(self.homology(field))

    def chain_poincare(self):
        return Poly({j: len(b) for j, b in self.trees.items()})

    def euler_characteristic(self):
        return self.complex.euler_characteristic()

    def dims(self):
        return {j: len(b) for j, b in sorted(self.trees.items())}


def _operad_labels(O, k):
    return {j: [((j, i), O.degree(j, i)) for i in range(O.dim(j))] for j in range(2, k + 1)}


def _make_compose(O, R=None):
    """Callback for ``contract_edge``: labels are ``(arity, index)`` with a
    ``"R"`` tag in front for the module root."""

    def compose(parent, pos, child, perm):
        l, jj = child
        if parent[0] == "R":
            _, k, i = parent
            src = R
        else:
            k, i = parent
            src = O
        out = {}
        for x, c in src.compose(k, i, pos, l, jj).items():
            for y, e in src.act(k + l - 1, x, perm).items():
                key = ("R", k + l - 1, y) if src is R else (k + l - 1, y)
                deg = src.degree(k + l - 1, y)
                out[(key, deg)] = out.get((key, deg), 0) + c * e
        return {kk: v for kk, v in out.items() if v}

    return compose


def _assemble(source, k, trees, compose, suspended):
    by_deg = {}
    for t in trees:
        by_deg.setdefault(t.degree + suspended(t), []).append(t)
    for lst in by_deg.values():
        lst.sort(key=lambda t: repr(t.root))
    index = {j: {t: n for n, t in enumerate(lst)} for j, lst in by_deg.items()}

    def build(j):
        if j - 1 not in index:
            return j, None
        tgt = index[j - 1]
        entries = {}
        for col, t in enumerate(by_deg[j]):
            for e in t.internal_edges():
                for new, c in contract_edge(t, e, compose):
                    row = tgt.get(new)
                    if row is None:
                        raise StructuralError(f"contraction produced a tree outside the basis: {new}")
                    entries[(row, col)] = entries.get((row, col), 0) + c
        return j, SparseMatrix(len(tgt), len(by_deg[j]), entries)

    diffs = {j: d for j, d in _parallel_map(build, sorted(by_deg)) if d is not None}
    spaces = {j: [t.to_json() for t in lst] for j, lst in by_deg.items()}
    return BarComplex(source, k, by_deg, ChainComplex(spaces, diffs))


def _vertex_count(t):
    from .optree import preorder

    return len(preorder(t.root))


def bar_complex(O: Operad, k: int) -> BarComplex:
    """``B(O)(k)``: degree = label degrees + number of vertices."""
    if k < 2:
        raise ValueError("the operadic bar complex needs arity >= 2")
    trees = enumerate_trees(_operad_labels(O, k), range(1, k + 1))
    return _assemble(O, k, trees, _make_compose(O), _vertex_count)


def bar_complex_module(R: RightModule, k: int) -> BarComplex:
    """``B(R)(k)``: degree = label degrees + number of non-root vertices."""
    if k < 1:
        raise ValueError("arity must be >= 1")
    O = R.operad
    root = {j: [(("R", j, i), R.degree(j, i)) for i in range(R.dim(j))] for j in range(1, k + 1)}
    trees = enumerate_trees(_operad_labels(O, k), range(1, k + 1), module_root=root)
    return _assemble(R, k, trees, _make_compose(O, R), lambda t: _vertex_count(t) - 1)


def koszul_dual_dims(O: Operad, k: int, field: Field = QQ) -> dict:
    """``{"homological": {j: dim H_j B(O)(k)}, "cohomological": {-j: ...}}``;
    the dual ``K(O)(k)`` carries the second grading."""
    h = bar_complex(O, k).homology(field)
    return {"homological": h, "cohomological": {-j: v for j, v in sorted(h.items())}}


# --- duality reports -----------------------------------------------------------

@dataclass
class ArityResult:
    arity: int
    source: Poly
    bar_homology: Poly
    predicted: Poly
    chain_euler: int
    homology_euler: int
    passed: bool

    def to_data(self):
        return {
            "source": self.source.to_json(),
            "bar_homology": self.bar_homology.to_json(),
            "predicted": self.predicted.to_json(),
            "pass": self.passed,
        }


@dataclass
class DualityReport:
    kind: str
    subject: str
    n: int
    d: int | None
    field: str
    results: list = field(default_factory=list)

    @property
    def passed(self):
        return all(r.passed for r in self.results)

    def euler_consistent(self):
        return all(r.chain_euler == r.homology_euler for r in self.results)

    def to_data(self):
        return {str(r.arity): r.to_data() for r in self.results}

    def to_json(self, indent=2):
        return json.dumps(self.to_data(), indent=indent)

    def lines(self):
        head = f"{self.kind} {self.subject} n={self.n}" + (f" d={self.d}" if self.d is not None else "")
        out = [head + f" over {self.field}"]
        for r in self.results:
            out.append(
                f"  k={r.arity}: source {r.source} | bar homology {r.bar_homology} | "
                f"predicted {r.predicted} | {'pass' if r.passed else 'FAIL'}"
            )
        return out


def _euler(p: Poly):
    return sum(c if e % 2 == 0 else -c for e, c in p.coeffs.items())


def predicted_operad(P: Poly, n: int, k: int) -> Poly:
    """``q^(nk-n) P(1/q)``."""
    return P.invert().shift(n * k - n)


def predicted_module(P: Poly, n: int, d: int, k: int) -> Poly:
    """``q^(nk-n+d) P(1/q)``."""
    return P.invert().shift(n * k - n + d)


def check_poincare_koszul(O: Operad, n: int, arities, field: Field = QQ) -> DualityReport:
    """Compare bar homology of ``O`` with ``s_n`` applied to the dual grading
    of ``O`` itself, arity by arity."""
    arities = sorted(arities)

    def one(k):
        bc = bar_complex(O, k)
        h = bc.poincare(field)
        P = O.poincare(k)
        pred = predicted_operad(P, n, k)
        return ArityResult(k, P, h, pred, bc.euler_characteristic(), _euler(h), h == pred)

    rep = DualityReport("operad", O.name, n, None, field.name)
    rep.results = _parallel_map(one, arities)
    return rep


def check_module_pk(R: RightModule, n: int, d: int, arities, target=None, field: Field = QQ) -> DualityReport:
    """Compare bar homology of ``R`` with ``q^(nk-n+d) P_T(k)(1/q)`` where
    ``T`` is the comparison module (``R`` itself by default)."""
    target = target or R
    arities = sorted(arities)

    def one(k):
        bc = bar_complex_module(R, k)
        h = bc.poincare(field)
        P = target.poincare(k)
        pred = predicted_module(P, n, d, k)
        return ArityResult(k, P, h, pred, bc.euler_characteristic(), _euler(h), h == pred)

    rep = DualityReport("module", R.name + (f" vs {target.name}" if target is not R else ""), n, d, field.name)
    rep.results = _parallel_map(one, arities)
    return rep


__all__ = [
    "ArityResult",
    "BarComplex",
    "DualityReport",
    "bar_complex",
    "bar_complex_module",
    "check_module_pk",
    "check_poincare_koszul",
    "koszul_dual_dims",
    "predicted_module",
    "predicted_operad",
]
