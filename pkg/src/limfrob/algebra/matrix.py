"""Sparse matrices over exact rings (``Fraction`` or :class:`Poly`).

Entries are stored in a dict keyed by ``(row, col)``; zeros are never
stored.  Entries may mix ``Fraction`` and ``Poly`` values because ``Poly``
arithmetic accepts rational scalars.
"""

from __future__ import annotations

from fractions import Fraction

from .poly import Poly

ZERO = Fraction(0)


def _is_zero(v) -> bool:
    return v == 0


class Matrix:
    __slots__ = ("nrows", "ncols", "_d")

    def __init__(self, nrows: int, ncols: int | None = None, entries=None):
        self.nrows = nrows
        self.ncols = nrows if ncols is None else ncols
        self._d = {}
        if entries:
            for (i, j), v in entries.items():
                if not (0 <= i < self.nrows and 0 <= j < self.ncols):
                    raise IndexError((i, j))
                if not _is_zero(v):
                    self._d[i, j] = v if isinstance(v, Poly) else Fraction(v)

    @classmethod
    def _raw(cls, nrows, ncols, d):
        m = cls.__new__(cls)
        m.nrows, m.ncols, m._d = nrows, ncols, d
        return m

    @classmethod
    def zeros(cls, n: int, m: int | None = None) -> Matrix:
        return cls(n, m)

    @classmethod
    def identity(cls, n: int, one=1) -> Matrix:
        return cls(n, n, {(i, i): one for i in range(n)})

    @classmethod
    def diag(cls, values) -> Matrix:
        values = list(values)
        return cls(len(values), len(values), {(i, i): v for i, v in enumerate(values)})

    @classmethod
    def from_rows(cls, rows) -> Matrix:
        rows = [list(r) for r in rows]
        nc = len(rows[0]) if rows else 0
        if any(len(r) != nc for r in rows):
            raise ValueError("ragged rows")
        return cls(len(rows), nc, {(i, j): v for i, r in enumerate(rows) for j, v in enumerate(r)})

    @classmethod
    def unit(cls, n: int, i: int, j: int, value=1) -> Matrix:
        return cls(n, n, {(i, j): value})

    # access -----------------------------------------------------------
    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def __getitem__(self, key):
        i, j = key
        return self._d.get((i, j), ZERO)

    def items(self):
        return self._d.items()

    def nonzero(self) -> list:
        return sorted(self._d)

    def to_rows(self):
        return [[self[i, j] for j in range(self.ncols)] for i in range(self.nrows)]

    def row_dicts(self):
        rows = [dict() for _ in range(self.nrows)]
        for (i, j), v in self._d.items():
            rows[i][j] = v
        return rows

    def column(self, j: int):
        return [self[i, j] for i in range(self.nrows)]

    def diagonal(self):
        return [self[i, i] for i in range(min(self.nrows, self.ncols))]

    def is_diagonal(self) -> bool:
        return all(i == j for i, j in self._d)

    def is_zero(self) -> bool:
        return not self._d

    # arithmetic -------------------------------------------------------
    def _check_same(self, other):
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other: Matrix) -> Matrix:
        self._check_same(other)
        d = dict(self._d)
        for k, v in other._d.items():
            nv = d[k] + v if k in d else v
            if _is_zero(nv):
                d.pop(k, None)
            else:
                d[k] = nv
        return Matrix._raw(self.nrows, self.ncols, d)

    def __neg__(self) -> Matrix:
        return Matrix._raw(self.nrows, self.ncols, {k: -v for k, v in self._d.items()})

    def __sub__(self, other: Matrix) -> Matrix:
        return self + (-other)

    def scale(self, c) -> Matrix:
        d = {}
        for k, v in self._d.items():
            nv = v * c
            if not _is_zero(nv):
                d[k] = nv
        return Matrix._raw(self.nrows, self.ncols, d)

    def __mul__(self, other):
        if not isinstance(other, Matrix):
            return self.scale(other)
        return self @ other

    def __rmul__(self, c):
        return self.scale(c)

    def __matmul__(self, other: Matrix) -> Matrix:
        if self.ncols != other.nrows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        rows_b: dict = {}
        for (k, j), v in other._d.items():
            rows_b.setdefault(k, []).append((j, v))
        d: dict = {}
        for (i, k), a in self._d.items():
            for j, b in rows_b.get(k, ()):
                key = (i, j)
                d[key] = d[key] + a * b if key in d else a * b
        d = {k: v for k, v in d.items() if not _is_zero(v)}
        return Matrix._raw(self.nrows, other.ncols, d)

    def __truediv__(self, c) -> Matrix:
        return Matrix._raw(self.nrows, self.ncols, {k: v / c for k, v in self._d.items()})

    def __pow__(self, k: int) -> Matrix:
        if not self.is_square() or k < 0:
            raise ValueError("power needs a square matrix and k >= 0")
        out = Matrix.identity(self.nrows)
        for _ in range(k):
            out = out @ self
        return out

    def apply(self, vec):
        """Matrix times a dense column vector (list)."""
        out = [ZERO] * self.nrows
        for (i, j), v in self._d.items():
            if not _is_zero(vec[j]):
                out[i] = out[i] + v * vec[j]
        return out

    @property
    def T(self) -> Matrix:
        return Matrix._raw(self.ncols, self.nrows, {(j, i): v for (i, j), v in self._d.items()})

    def map(self, f) -> Matrix:
        d = {}
        for k, v in self._d.items():
            nv = f(v)
            if not _is_zero(nv):
                d[k] = nv
        return Matrix._raw(self.nrows, self.ncols, d)

    def commutator(self, other: Matrix) -> Matrix:
        return self @ other - other @ self

    # ring-specific helpers ------------------------------------------------
    def poly_map(self, method: str, *args) -> Matrix:
        """Apply a :class:`Poly` method entrywise; rational entries are
        treated as constants (derivatives vanish, substitutions fix them)."""
        def f(v):
            if isinstance(v, Poly):
                return getattr(v, method)(*args)
            if method in ("diff", "log_diff"):
                return ZERO
            return v
        return self.map(f)

    def to_rational(self) -> Matrix:
        """Convert constant polynomial entries to ``Fraction``."""
        return self.map(lambda v: v.constant_value() if isinstance(v, Poly) else v)

    def to_poly(self, nvars: int) -> Matrix:
        return self.map(lambda v: v if isinstance(v, Poly) else Poly.const(v, nvars))

    # comparison / display -------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        if self.shape != other.shape:
            return False
        keys = set(self._d) | set(other._d)
        return all(self[k] == other[k] for k in keys)

    __hash__ = None

    def __repr__(self):
        body = "; ".join(
            ", ".join(str(v) for v in row) for row in self.to_rows()
        )
        return f"Matrix({self.nrows}x{self.ncols}: [{body}])"
