"""Pure-Python sparse elimination kernels.

Same call signatures as the compiled ``_kernels`` module.  Rows are passed as
``(cols, vals)`` pairs of equal-length sequences with strictly increasing
column indices.
"""
from math import gcd


def _normalize(cols, vals):
    g = 0
    for v in vals:
        g = gcd(g, v)
        if g == 1:
            break
    if vals[0] < 0:
        g = -g
    if g != 1:
        vals = [v // g for v in vals]
    return cols, vals


def _combine_int(a, rc, rv, b, pc, pv):
    """Return a*r - b*p, merged on sorted columns."""
    oc, ov = [], []
    i = j = 0
    nr, np_ = len(rc), len(pc)
    while i < nr or j < np_:
        if j >= np_ or (i < nr and rc[i] < pc[j]):
            oc.append(rc[i])
            ov.append(a * rv[i])
            i += 1
        elif i >= nr or pc[j] < rc[i]:
            oc.append(pc[j])
            ov.append(-b * pv[j])
            j += 1
        else:
            v = a * rv[i] - b * pv[j]
            if v:
                oc.append(rc[i])
                ov.append(v)
            i += 1
            j += 1
    return oc, ov


def rank_int(rows, ncols):
    """Exact rank over Q of an integer matrix given by sparse rows."""
    pivots = {}
    rank = 0
    for cols, vals in sorted(rows, key=lambda r: len(r[0])):
        rc, rv = list(cols), list(vals)
        while rc:
            c = rc[0]
            piv = pivots.get(c)
            if piv is None:
                pivots[c] = _normalize(rc, rv)
                rank += 1
                break
            pc, pv = piv
            a, b = pv[0], rv[0]
            g = gcd(a, b)
            rc, rv = _combine_int(a // g, rc, rv, b // g, pc, pv)
            if rc:
                rc, rv = _normalize(rc, rv)
    return rank


def rank_modp(rows, ncols, p):
    """Rank over GF(p); entries may be any integers."""
    pivots = {}
    rank = 0
    for cols, vals in sorted(rows, key=lambda r: len(r[0])):
        rc, rv = [], []
        for c, v in zip(cols, vals):
            v %= p
            if v:
                rc.append(c)
                rv.append(v)
        while rc:
            c = rc[0]
            piv = pivots.get(c)
            if piv is None:
                inv = pow(rv[0], p - 2, p)
                pivots[c] = (rc, [v * inv % p for v in rv])
                rank += 1
                break
            pc, pv = piv
            b = rv[0]
            oc, ov = [], []
            i = j = 0
            nr, np_ = len(rc), len(pc)
            while i < nr or j < np_:
                if j >= np_ or (i < nr and rc[i] < pc[j]):
                    oc.append(rc[i])
                    ov.append(rv[i])
                    i += 1
                elif i >= nr or pc[j] < rc[i]:
                    oc.append(pc[j])
                    ov.append(-b * pv[j] % p)
                    j += 1
                else:
                    v = (rv[i] - b * pv[j]) % p
                    if v:
                        oc.append(rc[i])
                        ov.append(v)
                    i += 1
                    j += 1
            rc, rv = oc, ov
    return rank
