"""Acceptance checks runnable from an installed package (``opforge selftest``).

Each criterion returns a :class:`Criterion` with a one-line verdict.  The
test suite runs the same criteria with independent oracles on top.
"""
from __future__ import annotations

import subprocess
import sys
import time
from dataclasses import dataclass
from math import factorial

from .barkoszul import bar_complex, bar_complex_module, check_module_pk, check_poincare_koszul
from .cubes import build_cube, layer_report, top_degree_layer
from .modules import configuration_module, diagonal_module, sphere
from .operads import builtin_operad, suspend
from .symseq import Poly, compose_perm, product_formula


@dataclass
class Criterion:
    number: int
    title: str
    passed: bool
    detail: str
    seconds: float
    limit: float

    def line(self):
        verdict = "PASS" if self.passed and self.seconds <= self.limit else "FAIL"
        return f"[{verdict}] criterion {self.number}: {self.title} ({self.seconds:.1f}s / {self.limit:.0f}s) {self.detail}"


def _timed(number, title, limit, fn):
    t = time.perf_counter()
    ok, detail = fn()
    return Criterion(number, title, ok, detail, time.perf_counter() - t, limit)


def operad_dimensions(max_k=7):
    bad = []
    com, lie = builtin_operad("com"), builtin_operad("lie")
    for k in range(1, max_k + 1):
        if com.dim(k) != 1:
            bad.append(f"com({k})")
        if k <= 6 and lie.dim(k) != factorial(k - 1):
            bad.append(f"lie({k})")
        for n in (1, 2, 3):
            P = builtin_operad("pois", n)
            if P.dim(k) != factorial(k) or P.poincare(k) != product_formula(k, n - 1):
                bad.append(f"pois_{n}({k})")
    return not bad, "all dimensions match" if not bad else "mismatch: " + ", ".join(bad)


def _random_elements(O, k, rng, terms=2):
    return {rng.randrange(O.dim(k)): rng.choice((1, -1, 2)) for _ in range(terms)}


def relations(max_k=5, trials=40, seed=1):
    import random

    rng = random.Random(seed)
    bad = []
    ops = [builtin_operad("com"), builtin_operad("lie")] + [builtin_operad("pois", n) for n in (1, 2, 3)]
    ops += [suspend(builtin_operad("lie"), 2), suspend(builtin_operad("pois", 2), -2)]
    for O in ops:
        for _ in range(trials):
            k = rng.randint(1, max_k - 2)
            l = rng.randint(1, max_k - k)
            m = rng.randint(1, max_k - k - l + 1)
            x, y, z = (_random_elements(O, a, rng) for a in (k, l, m))
            a, b = rng.randint(1, k), rng.randint(1, l)
            lhs = O.compose_elements(O.compose_elements(x, k, a, y, l), k + l - 1, a + b - 1, z, m)
            rhs = O.compose_elements(x, k, a, O.compose_elements(y, l, b, z, m), l + m - 1)
            if lhs != rhs:
                bad.append(f"{O.name} sequential")
            s, t = tuple(rng.sample(range(k), k)), tuple(rng.sample(range(k), k))
            if O.act_element(x, k, compose_perm(s, t)) != O.act_element(O.act_element(x, k, t), k, s):
                bad.append(f"{O.name} action")
        rels = getattr(O, "relations", lambda: None)()
        for rel in rels or []:
            from itertools import permutations

            from .optree import relabel_leaves

            for p in permutations((1, 2, 3)):
                total = {}
                for c, tree in rel:
                    for i, v in O.rewrite(relabel_leaves(tree, {j + 1: p[j] for j in range(3)})).items():
                        total[i] = total.get(i, 0) + c * v
                if any(total.values()):
                    bad.append(f"{O.name} relation")
    return not bad, "associative, equivariant, relations vanish" if not bad else "; ".join(sorted(set(bad)))


def getzler_jones():
    bad = []
    for k in range(2, 7):
        h = bar_complex(builtin_operad("com"), k).homology()
        if len(h) != 1 or list(h.values())[0] != factorial(k - 1):
            bad.append(f"B(com)({k})={h}")
    for k in range(2, 6):
        h = bar_complex(builtin_operad("lie"), k).homology()
        if len(h) != 1 or list(h.values())[0] != 1:
            bad.append(f"B(lie)({k})={h}")
    return not bad, "concentrated, dims (k-1)! and 1" if not bad else "; ".join(bad)


def operad_report(max_k=4):
    bad = []
    for n in (1, 2, 3):
        rep = check_poincare_koszul(builtin_operad("pois", n), n, range(2, max_k + 1))
        bad += [f"n={n},k={r.arity}" for r in rep.results if not r.passed]
    return not bad, f"pois_n, n<=3, k<={max_k}" if not bad else "failed: " + ", ".join(bad)


def module_report(max_k=4):
    bad = []
    for n in (1, 2):
        rep = check_module_pk(diagonal_module(sphere(n)), n, n, range(1, max_k + 1), configuration_module(n))
        bad += [f"n={n},k={r.arity}" for r in rep.results if not r.passed]
    h = bar_complex_module(diagonal_module(sphere(2)), 2).poincare()
    if h != Poly({3: 1, 4: 1}):
        bad.append(f"n=2,k=2 gave {h}")
    return not bad, f"(S^n)^ vs F(R^n,-), n<=2, k<={max_k}" if not bad else "failed: " + ", ".join(bad)


def layers():
    """The inclusion-exclusion polynomial against the closed form
    ``(k-1)! q^((n-1)(k-1))``, plus the structural invariants."""
    mismatch = []
    structural = []
    for n in (1, 2, 3):
        for k in range(2, 6):
            rep = layer_report(n, k)
            if not rep.passed:
                structural.append(f"n={n},k={k}")
            if rep.total_fiber != top_degree_layer(n, k):
                mismatch.append(f"n={n},k={k}: {rep.total_fiber}")
    detail = []
    if structural:
        detail.append("routes disagree at " + ", ".join(structural))
    if mismatch:
        detail.append(
            "inclusion-exclusion differs from (k-1)! q^((n-1)(k-1)) at " + "; ".join(mismatch)
            + " (monomials built only from brackets of length >= 2 over a partition with several blocks also "
            "survive every projection)"
        )
    return not (mismatch or structural), "; ".join(detail) or "all (n,k) match"


def structural():
    bad = []
    for O, ks in ((builtin_operad("com"), range(2, 6)), (builtin_operad("pois", 2), range(2, 5))):
        for k in ks:
            bc = bar_complex(O, k)  # d o d = 0 is checked on construction
            h = bc.homology()
            if bc.euler_characteristic() != sum(v if j % 2 == 0 else -v for j, v in h.items()):
                bad.append(f"euler {O.name}({k})")
    for n in (1, 2, 3):
        if not check_poincare_koszul(builtin_operad("pois", n), n, range(2, 5)).euler_consistent():
            bad.append(f"report euler n={n}")
    cube = build_cube(2, 3)
    cube.check_functoriality()
    args = [sys.executable, "-m", "opforge", "koszul", "check", "--n", "2", "--max-arity", "3", "--json"]
    outs = [subprocess.run(args, capture_output=True, text=True).stdout for _ in range(2)]
    if outs[0] != outs[1] or not outs[0]:
        bad.append("cli determinism")
    return not bad, "d^2=0, Euler characteristics, deterministic output" if not bad else "; ".join(bad)


def criteria(full=False):
    yield _timed(1, "operad dimensions", 60, operad_dimensions)
    yield _timed(2, "relations and composition axioms", 60, relations)
    yield _timed(3, "bar homology of com and lie", 300, getzler_jones)
    yield _timed(4, "operad duality report", 600, lambda: operad_report(5 if full else 4))
    yield _timed(5, "module duality report", 300, module_report)
    yield _timed(6, "layer calculator", 30, layers)
    yield _timed(7, "structural invariants", 300, structural)


def run(full=False, out=sys.stdout):
    ok = True
    for c in criteria(full):
        out.write(c.line() + "\n")
        out.flush()
        ok = ok and c.passed and c.seconds <= c.limit
    return ok
