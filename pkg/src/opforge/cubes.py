"""Homology cubes of configuration spaces of R^n and the stable layer
calculator.

Vertex ``J`` of the cube on ``I = {1..k}`` is ``H_*(F(R^n, J))``; an inclusion
``K ⊆ J`` induces the projection forgetting the points of ``J - K``.  Every
projection ``F(R^n, J) -> F(R^n, K)`` has a section (add points far away), so
the homology cube is split and its total fiber has Poincaré polynomial
``sum_J (-1)^|I - J| P_J``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations
from math import factorial

from .exactla import QQ, SparseMatrix, StructuralError, rank
from .modules import configuration_module
from .optree import set_partitions
from .symseq import Poly

MAX_K = 5


def subsets(I):
    I = tuple(I)
    for r in range(len(I) + 1):
        yield from combinations(I, r)


def subset_key(J):
    return "{" + ",".join(map(str, J)) + "}"


@dataclass
class HomologyCube:
    n: int
    index: tuple
    spaces: dict  # subset -> (labels, degrees)
    maps: dict = field(default_factory=dict)  # (K, J) -> SparseMatrix, K ⊆ J with |J - K| = 1

    def poincare(self, J):
        out = {}
        for d in self.spaces[tuple(J)][1]:
            out[d] = out.get(d, 0) + 1
        return Poly(out)

    def map(self, K, J):
        """The projection matrix for ``K ⊆ J`` (any codimension)."""
        K, J = tuple(K), tuple(J)
        if not set(K) <= set(J):
            raise ValueError(f"{K} is not a subset of {J}")
        if K == J:
            return SparseMatrix.identity(len(self.spaces[J][0]))
        if (K, J) in self.maps:
            return self.maps[(K, J)]
        # forget the largest missing point first
        x = max(set(J) - set(K))
        J1 = tuple(y for y in J if y != x)
        m = self.map(K, J1) @ self.maps[(J1, J)]
        self.maps[(K, J)] = m
        return m

    def check_functoriality(self):
        """Every pair of composable inclusions, compared with both routes."""
        count = 0
        subs = list(subsets(self.index))
        for L in subs:
            for J in subs:
                if not set(J) <= set(L):
                    continue
                for K in subs:
                    if not set(K) <= set(J):
                        continue
                    direct = _forget_matrix(self.n, L, K)
                    if self.map(K, J) @ self.map(J, L) != direct:
                        raise StructuralError(f"cube maps {K}⊆{J}⊆{L} do not compose")
                    count += 1
        return count

    def check_surjective(self):
        for J in subsets(self.index):
            for x in J:
                K = tuple(y for y in J if y != x)
                m = self.map(K, J)
                if rank(m, QQ) != m.rows:
                    raise StructuralError(f"projection {J} -> {K} is not surjective")
        return True


def _forget_matrix(n, J, K):
    """Matrix of the projection ``H(F(R^n, J)) -> H(F(R^n, K))`` computed by
    forgetting the points of ``J - K`` in one sweep, from the top down."""
    R = configuration_module(n)
    J, K = tuple(J), tuple(K)
    drop = [J.index(x) + 1 for x in J if x not in K]
    cols = []
    for i in range(_dim(R, len(J))):
        vec = {i: 1}
        k = len(J)
        for a in sorted(drop, reverse=True):
            vec = _forget_vec(R, vec, k, a)
            k -= 1
        cols.append(vec)
    return SparseMatrix.from_columns(_dim(R, len(K)), cols)


def _dim(R, k):
    return 1 if k == 0 else R.dim(k)


def _forget_vec(R, vec, k, a):
    if k == 1:
        return dict(vec)  # F(R^n, 1) -> F(R^n, 0): the point class maps to the unit
    return R.forget_element(vec, k, a)


def build_cube(n: int, k: int) -> HomologyCube:
    if not 1 <= k <= MAX_K:
        raise ValueError(f"k must lie in 1..{MAX_K}")
    if n < 1:
        raise ValueError("n must be >= 1")
    R = configuration_module(n)
    I = tuple(range(1, k + 1))
    spaces = {}
    for J in subsets(I):
        if not J:
            spaces[J] = (["1"], [0])
        else:
            relabel = {str(t + 1): str(x) for t, x in enumerate(J)}
            labels = ["".join(relabel.get(ch, ch) for ch in lab) for lab in R.labels(len(J))]
            spaces[J] = (labels, R.degrees(len(J)))
    cube = HomologyCube(n, I, spaces)
    for J in subsets(I):
        for t, x in enumerate(J):
            K = J[:t] + J[t + 1:]
            cols = [_forget_vec(R, {i: 1}, len(J), t + 1) for i in range(_dim(R, len(J)))]
            cube.maps[(K, J)] = SparseMatrix.from_columns(_dim(R, len(K)), cols)
    return cube


def total_fiber_poincare(c: HomologyCube, check=True) -> Poly:
    """Inclusion–exclusion over the cube; refuses non-split cubes."""
    if check:
        c.check_surjective()
    k = len(c.index)
    out = Poly()
    for J in subsets(c.index):
        p = c.poincare(J)
        out = out + (p if (k - len(J)) % 2 == 0 else -p)
    return out


def top_degree_layer(n, k):
    """``(k-1)! q^((n-1)(k-1))``: the part of the total fiber carried by
    single brackets through all k points."""
    return Poly({(n - 1) * (k - 1): factorial(k - 1)})


def expected_layer(n, k):
    """Closed form for the split total fiber: monomials with no singleton
    factor, ``sum over partitions of I without singletons of
    prod (|B|-1)! q^((n-1)(k - #blocks))``."""
    out = {}
    for part in set_partitions(tuple(range(1, k + 1))):
        if any(len(b) == 1 for b in part):
            continue
        c = 1
        for b in part:
            c *= factorial(len(b) - 1)
        e = (n - 1) * (k - len(part))
        out[e] = out.get(e, 0) + c
    return Poly(out)


def kernel_intersection_poincare(c: HomologyCube) -> Poly:
    """Graded dimension of the joint kernel of the codimension-one maps out
    of the top vertex; for a split cube this is the total fiber."""
    I = c.index
    maps = [c.map(I[:t] + I[t + 1:], I) for t in range(len(I))]
    degrees = c.spaces[I][1]
    out = {}
    for d in sorted(set(degrees)):
        cols = [j for j, x in enumerate(degrees) if x == d]
        pos = {j: n for n, j in enumerate(cols)}
        entries = {}
        offset = 0
        for m in maps:
            for (r, col), v in m.entries.items():
                if col in pos:
                    entries[(offset + r, pos[col])] = v
            offset += m.rows
        dim = len(cols) - rank(SparseMatrix(offset, len(cols), entries), QQ)
        if dim:
            out[d] = dim
    return Poly(out)


class UnsupportedLayer(ValueError):
    pass


@dataclass
class LayerReport:
    n: int
    k: int
    vertices: dict
    total_fiber: Poly
    expected: Poly
    kernel_route: Poly
    top_degree: Poly
    functoriality_checks: int

    @property
    def passed(self):
        return self.total_fiber == self.expected == self.kernel_route

    def to_data(self):
        return {
            "n": self.n,
            "k": self.k,
            "vertices": {subset_key(J): str(p) for J, p in self.vertices.items()},
            "total_fiber": str(self.total_fiber),
            "expected": str(self.expected),
            "kernel_route": str(self.kernel_route),
            "top_degree": str(self.top_degree),
            "pass": self.passed,
        }

    def to_json(self, indent=2):
        return json.dumps(self.to_data(), indent=indent)

    def lines(self):
        out = [
            f"layer n={self.n} k={self.k}",
            "  projections F(R^n,J) -> F(R^n,K) are split, so the total fiber is computed by inclusion-exclusion",
        ]
        for J, p in self.vertices.items():
            out.append(f"  {subset_key(J)}: {p}")
        out.append(f"  total fiber: {self.total_fiber}")
        out.append(f"  expected:    {self.expected}")
        out.append(f"  joint kernel of the projections: {self.kernel_route}")
        out.append(f"  single-bracket part: {self.top_degree}")
        out.append(f"  {'pass' if self.passed else 'FAIL'}")
        return out


def layer_report(n: int, k: int, check_functoriality=True) -> LayerReport:
    if k == 1:
        raise UnsupportedLayer(
            "k=1 is the formal immersion layer; the first stage of the tower is the space of formal immersions, "
            "which is not a total fiber of configuration spaces"
        )
    if not 2 <= k <= MAX_K:
        raise ValueError(f"k must lie in 2..{MAX_K}")
    cube = build_cube(n, k)
    checks = cube.check_functoriality() if check_functoriality and k <= 4 else 0
    tf = total_fiber_poincare(cube)
    vertices = {J: cube.poincare(J) for J in subsets(cube.index)}
    return LayerReport(n, k, vertices, tf, expected_layer(n, k), kernel_intersection_poincare(cube), top_degree_layer(n, k), checks)


__all__ = [
    "HomologyCube",
    "LayerReport",
    "UnsupportedLayer",
    "build_cube",
    "expected_layer",
    "kernel_intersection_poincare",
    "layer_report",
    "subsets",
    "top_degree_layer",
    "total_fiber_poincare",
]
