"""Exact linear algebra over Q (or a prime field): sparse matrices, rank,
kernels and homology dimensions of chain complexes."""
from __future__ import annotations

import csv
import io
import json
from fractions import Fraction
from math import lcm

from . import _accel

Scalar = Fraction


class StructuralError(ValueError):
    """A complex or algebraic structure violates one of its axioms."""


class Field:
    """Coefficient field: ``QQ`` or ``GF(p)``."""

    def __init__(self, p=0):
        if p and p < 2:
            raise ValueError("prime p must be >= 2")
        if p and any(p % d == 0 for d in range(2, int(p**0.5) + 1)):
            raise ValueError(f"{p} is not prime")
        self.p = p

    @property
    def name(self):
        return f"GF({self.p})" if self.p else "QQ"

    def __eq__(self, other):
        return isinstance(other, Field) and other.p == self.p

    def __hash__(self):
        return hash(self.p)

    def __repr__(self):
        return self.name

    def convert(self, x):
        x = Fraction(x)
        if not self.p:
            return x
        if x.denominator % self.p == 0:
            raise ZeroDivisionError(f"{x} is not defined in {self.name}")
        return x.numerator * pow(x.denominator, -1, self.p) % self.p

    def inv(self, x):
        return pow(x, -1, self.p) if self.p else 1 / Fraction(x)


QQ = Field()


def GF(p):
    return Field(p)


def parse_field(text):
    """``"Q"``/``"QQ"``/``"0"`` give the rationals; an integer gives GF(p)."""
    if text is None or str(text).upper() in ("Q", "QQ", "0", ""):
        return QQ
    return Field(int(text))


class SparseMatrix:
    """Immutable sparse matrix in coordinate form, ``(row, col) -> value``."""

    __slots__ = ("rows", "cols", "entries", "_colmajor")

    def __init__(self, rows, cols, entries=None):
        self.rows = int(rows)
        self.cols = int(cols)
        clean = {}
        for (r, c), v in (entries or {}).items():
            if not (0 <= r < self.rows and 0 <= c < self.cols):
                raise IndexError(f"entry ({r}, {c}) outside {self.rows}x{self.cols}")
            if v:
                clean[(r, c)] = Fraction(v)
        self.entries = clean
        self._colmajor = None

    @classmethod
    def from_dense(cls, data):
        rows = len(data)
        cols = len(data[0]) if rows else 0
        return cls(rows, cols, {(i, j): v for i, row in enumerate(data) for j, v in enumerate(row) if v})

    @classmethod
    def from_columns(cls, rows, columns):
        """Build from a list of sparse columns ``{row: value}``."""
        entries = {}
        for j, col in enumerate(columns):
            for i, v in col.items():
                if v:
                    entries[(i, j)] = v
        return cls(rows, len(columns), entries)

    @classmethod
    def identity(cls, n):
        return cls(n, n, {(i, i): 1 for i in range(n)})

    @classmethod
    def zeros(cls, rows, cols):
        return cls(rows, cols)

    @property
    def shape(self):
        return (self.rows, self.cols)

    def __getitem__(self, key):
        return self.entries.get(key, Fraction(0))

    def __eq__(self, other):
        return isinstance(other, SparseMatrix) and self.shape == other.shape and self.entries == other.entries

    def __hash__(self):
        return hash((self.shape, frozenset(self.entries.items())))

    def __repr__(self):
        return f"SparseMatrix({self.rows}x{self.cols}, nnz={len(self.entries)})"

    def columns(self):
        """Column-major view ``col -> [(row, value), ...]`` (cached)."""
        if self._colmajor is None:
            cm = {}
            for (r, c), v in self.entries.items():
                cm.setdefault(c, []).append((r, v))
            for lst in cm.values():
                lst.sort()
            self._colmajor = cm
        return self._colmajor

    def row_lists(self):
        out = {}
        for (r, c), v in self.entries.items():
            out.setdefault(r, []).append((c, v))
        for lst in out.values():
            lst.sort()
        return out

    def transpose(self):
        return SparseMatrix(self.cols, self.rows, {(c, r): v for (r, c), v in self.entries.items()})

    def __matmul__(self, other):
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        left = self.columns()
        out = {}
        for (k, j), v in other.entries.items():
            for i, u in left.get(k, ()):
                out[(i, j)] = out.get((i, j), 0) + u * v
        return SparseMatrix(self.rows, other.cols, out)

    def apply(self, vec):
        """Matrix times a dense vector."""
        out = [Fraction(0)] * self.rows
        for (r, c), v in self.entries.items():
            out[r] += v * vec[c]
        return out

    def is_zero(self):
        return not self.entries

    def to_dense(self):
        d = [[Fraction(0)] * self.cols for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            d[r][c] = v
        return d


def _integer_rows(m, transpose=False):
    """Rows of ``m`` (or of its transpose) scaled to integer entries."""
    groups = m.columns() if transpose else m.row_lists()
    rows = []
    for _, lst in sorted(groups.items()):
        den = lcm(*(v.denominator for _, v in lst))
        rows.append(([c for c, _ in lst], [int(v * den) for _, v in lst]))
    return rows


def rank(m: SparseMatrix, field: Field = QQ) -> int:
    """Exact rank of ``m`` over ``field``."""
    if not m.entries:
        return 0
    # eliminate along the shorter side
    transpose = m.cols > m.rows
    rows = _integer_rows(m, transpose)
    width = m.rows if transpose else m.cols
    if field.p:
        fixed = []
        for cols, vals in rows:
            fixed.append((cols, [v % field.p for v in vals]))
        return _accel.rank_modp(fixed, width, field.p)
    if _accel.rank_int64 is not None:
        try:
            return _accel.rank_int64(rows, width)
        except OverflowError:
            pass
    return _accel.rank_bigint(rows, width)


def _rref(m, field):
    """Reduced row echelon form as a list of ``(pivot_col, {col: value})``."""
    pivots = []
    by_col = {}
    for _, lst in sorted(m.row_lists().items()):
        row = {c: field.convert(v) for c, v in lst}
        row = {c: v for c, v in row.items() if v}
        for c in sorted(list(row)):
            if c in row and c in by_col:
                f = row[c]
                for cc, vv in by_col[c].items():
                    nv = row.get(cc, 0) - f * vv
                    if field.p:
                        nv %= field.p
                    if nv:
                        row[cc] = nv
                    else:
                        row.pop(cc, None)
        if not row:
            continue
        c0 = min(row)
        inv = field.inv(row[c0])
        row = {c: (v * inv) % field.p if field.p else v * inv for c, v in row.items()}
        # back-substitute into existing pivot rows
        for pc, prow in by_col.items():
            if c0 in prow:
                f = prow[c0]
                for cc, vv in row.items():
                    nv = prow.get(cc, 0) - f * vv
                    if field.p:
                        nv %= field.p
                    if nv:
                        prow[cc] = nv
                    else:
                        prow.pop(cc, None)
        by_col[c0] = row
    for c in sorted(by_col):
        pivots.append((c, by_col[c]))
    return pivots


def kernel_basis(m: SparseMatrix, field: Field = QQ) -> list:
    """A basis of the right kernel ``{v : m v = 0}`` as dense tuples."""
    piv = _rref(m, field)
    pivot_cols = {c for c, _ in piv}
    basis = []
    zero = 0 if field.p else Fraction(0)
    for free in range(m.cols):
        if free in pivot_cols:
            continue
        v = [zero] * m.cols
        v[free] = 1 if field.p else Fraction(1)
        for c, row in piv:
            if free in row:
                v[c] = (-row[free]) % field.p if field.p else -row[free]
        basis.append(tuple(v))
    return basis


class ChainComplex:
    """Graded spaces with differentials ``d_j : C_j -> C_{j-1}``.

    ``spaces`` maps degree to a list of basis labels; ``differentials`` maps
    degree ``j`` to a SparseMatrix of shape ``(dim C_{j-1}, dim C_j)``.
    Missing differentials are zero.  ``d o d = 0`` is verified on construction.
    """

    def __init__(self, spaces, differentials=None, check=True):
        self.spaces = {int(j): list(b) for j, b in spaces.items() if len(b)}
        self.differentials = {}
        for j, d in (differentials or {}).items():
            j = int(j)
            src = len(self.spaces.get(j, ()))
            tgt = len(self.spaces.get(j - 1, ()))
            if d.shape != (tgt, src):
                raise StructuralError(f"differential in degree {j} has shape {d.shape}, expected {(tgt, src)}")
            if not d.is_zero():
                self.differentials[j] = d
        if check:
            self.check_square_zero()

    def dim(self, j):
        return len(self.spaces.get(j, ()))

    def d(self, j):
        return self.differentials.get(j) or SparseMatrix(self.dim(j - 1), self.dim(j))

    def check_square_zero(self):
        for j, d in self.differentials.items():
            below = self.differentials.get(j - 1)
            if below is not None and not (below @ d).is_zero():
                raise StructuralError(f"d o d != 0 starting in degree {j}")

    def euler_characteristic(self):
        return sum((-1) ** (j % 2) * len(b) for j, b in self.spaces.items())

    def direct_sum(self, other):
        """Degreewise direct sum (labels tagged by summand)."""
        spaces = {}
        for j in set(self.spaces) | set(other.spaces):
            spaces[j] = [(0, x) for x in self.spaces.get(j, ())] + [(1, x) for x in other.spaces.get(j, ())]
        diffs = {}
        for j in set(self.differentials) | set(other.differentials):
            a, b = self.d(j), other.d(j)
            ent = dict(a.entries)
            for (r, c), v in b.entries.items():
                ent[(r + a.rows, c + a.cols)] = v
            diffs[j] = SparseMatrix(a.rows + b.rows, a.cols + b.cols, ent)
        return ChainComplex(spaces, diffs)


def homology_dims(c: ChainComplex, field: Field = QQ) -> dict:
    """``{degree: dim H_j}`` with zero entries omitted."""
    ranks = {j: rank(d, field) for j, d in c.differentials.items()}
    out = {}
    for j in sorted(c.spaces):
        h = c.dim(j) - ranks.get(j, 0) - ranks.get(j + 1, 0)
        if h:
            out[j] = h
    return out


def dims_to_json(table):
    return json.dumps({str(k): int(v) for k, v in sorted(table.items())}, sort_keys=False)


def dims_from_json(text):
    return {int(k): int(v) for k, v in json.loads(text).items()}


def dims_to_csv(table):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["degree", "dimension"])
    for k, v in sorted(table.items()):
        w.writerow([k, v])
    return buf.getvalue()
