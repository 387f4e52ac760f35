"""Sparse multivariate Laurent polynomials with exact rational coefficients.

A :class:`Poly` lives in a ring with a fixed number of variables; exponents
are arbitrary integers (negative allowed).  The two-variable ring with
variable 0 = ``x`` and variable 1 = ``theta`` is the coefficient ring of
every connection matrix in this package; see :func:`laurent`.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational

X_VAR = 0
THETA_VAR = 1


def _scalar(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, (int, Rational)):
        return Fraction(c)
    raise TypeError(f"not an exact rational: {c!r}")


class Poly:
    """Immutable sparse polynomial: ``{exponent tuple: Fraction}``."""

    __slots__ = ("nvars", "terms", "_hash")

    def __init__(self, nvars: int, terms=None):
        self.nvars = nvars
        clean = {}
        if terms:
            for exps, c in terms.items():
                if len(exps) != nvars:
                    raise ValueError("exponent tuple has wrong length")
                c = _scalar(c)
                if c:
                    clean[tuple(exps)] = c
        self.terms = clean
        self._hash = None

    # construction -----------------------------------------------------
    @classmethod
    def const(cls, c, nvars: int) -> Poly:
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def monomial(cls, c, exps) -> Poly:
        exps = tuple(exps)
        return cls(len(exps), {exps: c})

    @classmethod
    def gen(cls, var: int, nvars: int) -> Poly:
        e = [0] * nvars
        e[var] = 1
        return cls(nvars, {tuple(e): 1})

    @classmethod
    def _raw(cls, nvars, terms) -> Poly:
        p = cls.__new__(cls)
        p.nvars = nvars
        p.terms = terms
        p._hash = None
        return p

    def _coerce(self, other) -> Poly:
        if isinstance(other, Poly):
            if other.nvars != self.nvars:
                raise ValueError(f"ring mismatch: {self.nvars} vs {other.nvars} variables")
            return other
        return Poly.const(_scalar(other), self.nvars)

    # predicates -------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and (0,) * self.nvars in self.terms)

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self.terms.get((0,) * self.nvars, Fraction(0))

    def __bool__(self):
        return bool(self.terms)

    # arithmetic -------------------------------------------------------
    def __add__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return Poly._raw(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Poly):
            try:
                c = _scalar(other)
            except TypeError:
                return NotImplemented
            if not c:
                return Poly._raw(self.nvars, {})
            return Poly._raw(self.nvars, {e: v * c for e, v in self.terms.items()})
        other = self._coerce(other)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = out.get(e, 0) + c1 * c2
                if v:
                    out[e] = v
                else:
                    del out[e]
        return Poly._raw(self.nvars, out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        """Division by a nonzero scalar or by a monomial (Laurent inverse)."""
        if isinstance(other, Poly):
            if not other.is_monomial():
                raise ZeroDivisionError("only division by monomials is exact in the Laurent ring")
            (e2, c2), = other.terms.items()
            return Poly._raw(
                self.nvars,
                {tuple(a - b for a, b in zip(e, e2)): c / c2 for e, c in self.terms.items()},
            )
        c = _scalar(other)
        return Poly._raw(self.nvars, {e: v / c for e, v in self.terms.items()})

    def __pow__(self, k: int):
        if k < 0:
            if not self.is_monomial():
                raise ValueError("negative powers need a monomial")
            (e, c), = self.terms.items()
            return Poly.monomial(Fraction(1) / c ** (-k), tuple(a * k for a in e))
        out = Poly.const(1, self.nvars)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def exact_div(self, other: Poly) -> Poly:
        """Exact quotient.

        A monomial divisor is a unit of the Laurent ring and always divides.
        Otherwise both sides are treated as ordinary polynomials and
        ValueError is raised when ``other`` does not divide ``self``.
        """
        other = self._coerce(other)
        if not other.terms:
            raise ZeroDivisionError("division by zero polynomial")
        if other.is_monomial():
            return self / other
        lt_d = max(other.terms)
        c_d = other.terms[lt_d]
        rem = dict(self.terms)
        quo: dict = {}
        while rem:
            lt_r = max(rem)
            shift = tuple(a - b for a, b in zip(lt_r, lt_d))
            if min(shift) < 0:
                raise ValueError("division is not exact")
            c = rem[lt_r] / c_d
            quo[shift] = quo.get(shift, 0) + c
            for e, v in other.terms.items():
                ee = tuple(a + b for a, b in zip(e, shift))
                nv = rem.get(ee, 0) - c * v
                if nv:
                    rem[ee] = nv
                else:
                    rem.pop(ee, None)
        return Poly(self.nvars, quo)

    # calculus and substitutions ---------------------------------------
    def diff(self, var: int) -> Poly:
        out = {}
        for e, c in self.terms.items():
            k = e[var]
            if k:
                ee = list(e)
                ee[var] = k - 1
                out[tuple(ee)] = c * k
        return Poly._raw(self.nvars, out)

    def log_diff(self, var: int) -> Poly:
        """Apply ``v * d/dv`` for the variable ``v``."""
        return Poly._raw(self.nvars, {e: c * e[var] for e, c in self.terms.items() if e[var]})

    def flip_sign(self, var: int) -> Poly:
        """Substitute ``v -> -v``."""
        return Poly._raw(
            self.nvars, {e: (-c if e[var] % 2 else c) for e, c in self.terms.items()}
        )

    def at_zero(self, var: int) -> Poly:
        """Substitute ``v = 0``; requires no negative powers of ``v``."""
        out = {}
        for e, c in self.terms.items():
            if e[var] < 0:
                raise ValueError(f"pole in variable {var}: cannot set it to 0")
            if e[var] == 0:
                out[e] = c
        return Poly._raw(self.nvars, out)

    def subs_power(self, var: int, k: int) -> Poly:
        """Substitute ``v -> v**k`` (multiplies exponents of ``v`` by ``k``)."""
        out = {}
        for e, c in self.terms.items():
            ee = list(e)
            ee[var] *= k
            out[tuple(ee)] = c
        return Poly._raw(self.nvars, out)

    def evaluate(self, values) -> Fraction:
        total = Fraction(0)
        for e, c in self.terms.items():
            t = c
            for v, k in zip(values, e):
                if k:
                    t *= Fraction(v) ** k
            total += t
        return total

    def extend(self, nvars: int) -> Poly:
        """Embed into a ring with more variables (appended at the end)."""
        pad = (0,) * (nvars - self.nvars)
        return Poly._raw(nvars, {e + pad: c for e, c in self.terms.items()})

    def min_exponent(self, var: int) -> int:
        return min((e[var] for e in self.terms), default=0)

    def max_exponent(self, var: int) -> int:
        return max((e[var] for e in self.terms), default=0)

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def depends_on(self, var: int) -> bool:
        return any(e[var] for e in self.terms)

    def coefficient(self, var: int, k: int) -> Poly:
        """Coefficient of ``v**k`` as a polynomial in the same ring (``v``-free)."""
        out = {}
        for e, c in self.terms.items():
            if e[var] == k:
                ee = list(e)
                ee[var] = 0
                out[tuple(ee)] = c
        return Poly._raw(self.nvars, out)

    # comparison / display ---------------------------------------------
    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.nvars == other.nvars and self.terms == other.terms
        try:
            c = _scalar(other)
        except TypeError:
            return NotImplemented
        if not c:
            return not self.terms
        return self.terms == {(0,) * self.nvars: c}

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    def format(self, names=None) -> str:
        if not self.terms:
            return "0"
        if names is None:
            names = ("x", "theta") if self.nvars == 2 else tuple(f"x{i + 1}" for i in range(self.nvars))
        parts = []
        for e in sorted(self.terms, reverse=True):
            c = self.terms[e]
            mono = "*".join(
                n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                cs = f"({c})" if c.denominator != 1 else str(c)
                parts.append(f"{cs}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        return f"Poly({self.format()})"

    __str__ = format


def laurent(coeff, x_exp: int = 0, theta_exp: int = 0) -> Poly:
    """Monomial ``coeff * x**x_exp * theta**theta_exp`` in the (x, theta) ring."""
    return Poly.monomial(coeff, (x_exp, theta_exp))


X = laurent(1, 1, 0)
THETA = laurent(1, 0, 1)
