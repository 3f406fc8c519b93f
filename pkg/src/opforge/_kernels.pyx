# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled sparse elimination kernels (int64 fraction-free and GF(p)).

``rank_int`` raises OverflowError when an intermediate entry leaves the int64
range; callers retry with the pure-Python big-integer kernel.
"""
from libc.stdlib cimport malloc, free
from libc.stdint cimport int64_t

cdef extern from *:
    """
    static int opf_mul_ovf(long long a, long long b, long long *r) {
        return __builtin_mul_overflow(a, b, r);
    }
    static int opf_sub_ovf(long long a, long long b, long long *r) {
        return __builtin_sub_overflow(a, b, r);
    }
    """
    int opf_mul_ovf(long long a, long long b, long long *r) nogil
    int opf_sub_ovf(long long a, long long b, long long *r) nogil


cdef struct Row:
    int n
    int *cols
    int64_t *vals


cdef inline int64_t _gcd(int64_t a, int64_t b) nogil:
    if a < 0:
        a = -a
    if b < 0:
        b = -b
    while b:
        a, b = b, a % b
    return a


cdef int _load(list rows, Row *out) except -1:
    cdef Py_ssize_t i, j, n
    for i in range(len(rows)):
        cols, vals = rows[i]
        n = len(cols)
        out[i].n = <int>n
        out[i].cols = <int *>malloc((n + 1) * sizeof(int))
        out[i].vals = <int64_t *>malloc((n + 1) * sizeof(int64_t))
        if out[i].cols == NULL or out[i].vals == NULL:
            raise MemoryError()
        for j in range(n):
            out[i].cols[j] = cols[j]
            out[i].vals[j] = vals[j]
    return 0


cdef void _release(Row *r) nogil:
    if r.cols != NULL:
        free(r.cols)
        r.cols = NULL
    if r.vals != NULL:
        free(r.vals)
        r.vals = NULL
    r.n = 0


cdef void _normalize(Row *r) nogil:
    cdef int64_t g = 0
    cdef int i
    for i in range(r.n):
        g = _gcd(g, r.vals[i])
        if g == 1:
            break
    if r.vals[0] < 0:
        g = -g
    if g != 1:
        for i in range(r.n):
            r.vals[i] = r.vals[i] // g


cdef int _combine(int64_t a, Row *r, int64_t b, Row *p, Row *out) nogil:
    """out = a*r - b*p.  Returns 1 on overflow, -1 on allocation failure."""
    cdef int cap = r.n + p.n
    cdef int i = 0, j = 0, k = 0
    cdef long long x, y, v
    out.cols = <int *>malloc((cap + 1) * sizeof(int))
    out.vals = <int64_t *>malloc((cap + 1) * sizeof(int64_t))
    if out.cols == NULL or out.vals == NULL:
        return -1
    while i < r.n or j < p.n:
        if j >= p.n or (i < r.n and r.cols[i] < p.cols[j]):
            if opf_mul_ovf(a, r.vals[i], &x):
                return 1
            out.cols[k] = r.cols[i]
            out.vals[k] = x
            k += 1
            i += 1
        elif i >= r.n or p.cols[j] < r.cols[i]:
            if opf_mul_ovf(-b, p.vals[j], &y):
                return 1
            out.cols[k] = p.cols[j]
            out.vals[k] = y
            k += 1
            j += 1
        else:
            if opf_mul_ovf(a, r.vals[i], &x) or opf_mul_ovf(b, p.vals[j], &y):
                return 1
            if opf_sub_ovf(x, y, &v):
                return 1
            if v != 0:
                out.cols[k] = r.cols[i]
                out.vals[k] = v
                k += 1
            i += 1
            j += 1
    out.n = k
    return 0


def rank_int(list rows, int ncols):
    """Exact rank over Q of an integer matrix (int64 fast path)."""
    cdef Py_ssize_t nrows = len(rows)
    cdef Row *rs
    cdef Row *piv
    cdef Row tmp
    cdef Py_ssize_t i
    cdef int c, status = 0, rank = 0
    cdef int64_t a, b, g
    rows = sorted(rows, key=lambda r: len(r[0]))
    rs = <Row *>malloc((nrows + 1) * sizeof(Row))
    piv = <Row *>malloc((ncols + 1) * sizeof(Row))
    if rs == NULL or piv == NULL:
        free(rs)
        free(piv)
        raise MemoryError()
    for i in range(nrows):
        rs[i].n = 0
        rs[i].cols = NULL
        rs[i].vals = NULL
    for i in range(ncols):
        piv[i].n = 0
        piv[i].cols = NULL
        piv[i].vals = NULL
    try:
        _load(rows, rs)
        with nogil:
            for i in range(nrows):
                while rs[i].n > 0:
                    c = rs[i].cols[0]
                    if piv[c].n == 0:
                        _normalize(&rs[i])
                        piv[c] = rs[i]
                        rs[i].n = 0
                        rs[i].cols = NULL
                        rs[i].vals = NULL
                        rank += 1
                        break
                    a = piv[c].vals[0]
                    b = rs[i].vals[0]
                    g = _gcd(a, b)
                    tmp.n = 0
                    tmp.cols = NULL
                    tmp.vals = NULL
                    status = _combine(a // g, &rs[i], b // g, &piv[c], &tmp)
                    _release(&rs[i])
                    rs[i] = tmp
                    if status != 0:
                        break
                    if rs[i].n > 0:
                        _normalize(&rs[i])
                if status != 0:
                    break
        if status == 1:
            raise OverflowError("int64 overflow in fraction-free elimination")
        if status == -1:
            raise MemoryError()
        return rank
    finally:
        for i in range(nrows):
            _release(&rs[i])
        for i in range(ncols):
            _release(&piv[i])
        free(rs)
        free(piv)


def rank_modp(list rows, int ncols, long long p):
    """Rank over GF(p) for a prime p < 2**31."""
    cdef Py_ssize_t nrows = len(rows)
    cdef Row *rs
    cdef Row *piv
    cdef Row tmp
    cdef Py_ssize_t i
    cdef int c, k, j, jj, rank = 0
    cdef int64_t b, v, inv, base, e
    rows = sorted(rows, key=lambda r: len(r[0]))
    rs = <Row *>malloc((nrows + 1) * sizeof(Row))
    piv = <Row *>malloc((ncols + 1) * sizeof(Row))
    if rs == NULL or piv == NULL:
        free(rs)
        free(piv)
        raise MemoryError()
    for i in range(nrows):
        rs[i].n = 0
        rs[i].cols = NULL
        rs[i].vals = NULL
    for i in range(ncols):
        piv[i].n = 0
        piv[i].cols = NULL
        piv[i].vals = NULL
    try:
        reduced = []
        for cols, vals in rows:
            cc, vv = [], []
            for x, y in zip(cols, vals):
                y %= p
                if y:
                    cc.append(x)
                    vv.append(y)
            reduced.append((cc, vv))
        _load(reduced, rs)
        with nogil:
            for i in range(nrows):
                while rs[i].n > 0:
                    c = rs[i].cols[0]
                    if piv[c].n == 0:
                        # scale to a monic pivot row
                        inv = 1
                        base = rs[i].vals[0]
                        e = p - 2
                        while e > 0:
                            if e & 1:
                                inv = inv * base % p
                            base = base * base % p
                            e >>= 1
                        for k in range(rs[i].n):
                            rs[i].vals[k] = rs[i].vals[k] * inv % p
                        piv[c] = rs[i]
                        rs[i].n = 0
                        rs[i].cols = NULL
                        rs[i].vals = NULL
                        rank += 1
                        break
                    b = rs[i].vals[0]
                    tmp.cols = <int *>malloc((rs[i].n + piv[c].n + 1) * sizeof(int))
                    tmp.vals = <int64_t *>malloc((rs[i].n + piv[c].n + 1) * sizeof(int64_t))
                    k = 0
                    j = 0
                    jj = 0
                    while j < rs[i].n or jj < piv[c].n:
                        if jj >= piv[c].n or (j < rs[i].n and rs[i].cols[j] < piv[c].cols[jj]):
                            tmp.cols[k] = rs[i].cols[j]
                            tmp.vals[k] = rs[i].vals[j]
                            k += 1
                            j += 1
                        elif j >= rs[i].n or piv[c].cols[jj] < rs[i].cols[j]:
                            tmp.cols[k] = piv[c].cols[jj]
                            tmp.vals[k] = (p - b) * piv[c].vals[jj] % p
                            k += 1
                            jj += 1
                        else:
                            v = (rs[i].vals[j] + (p - b) * piv[c].vals[jj]) % p
                            if v != 0:
                                tmp.cols[k] = rs[i].cols[j]
                                tmp.vals[k] = v
                                k += 1
                            j += 1
                            jj += 1
                    tmp.n = k
                    _release(&rs[i])
                    rs[i] = tmp
        return rank
    finally:
        for i in range(nrows):
            _release(&rs[i])
        for i in range(ncols):
            _release(&piv[i])
        free(rs)
        free(piv)
