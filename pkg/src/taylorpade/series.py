"""Sparse multivariate polynomials and truncated power series.

Exponents are plain tuples of non-negative ints; a monomial x^g with
g = (g1, ..., gn) is keyed by that tuple.  Series and polynomials store a
``dict`` from exponent to a nonzero coefficient of the owning field context,
so equality of values is equality of maps.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

from .errors import DomainError, UsageError

Exponent = tuple  # tuple[int, ...]


def exp_degree(g: Exponent) -> int:
    return sum(g)


def exp_add(a: Exponent, b: Exponent) -> Exponent:
    return tuple(x + y for x, y in zip(a, b))


def exp_sub(a: Exponent, b: Exponent) -> Optional[Exponent]:
    """Componentwise a - b, or None when b is not <= a componentwise."""
    out = []
    for x, y in zip(a, b):
        if y > x:
            return None
        out.append(x - y)
    return tuple(out)


def monomials_of_degree(n: int, deg: int) -> list:
    """All exponents of total degree ``deg`` in ``n`` variables, lex decreasing."""
    if n == 1:
        return [(deg,)]
    out = []
    for first in range(deg, -1, -1):
        for rest in monomials_of_degree(n - 1, deg - first):
            out.append((first,) + rest)
    return out


def monomials_upto(n: int, max_deg: int) -> list:
    out = []
    for deg in range(max_deg + 1):
        out.extend(monomials_of_degree(n, deg))
    return out


@dataclass(frozen=True)
class MonomialOrder:
    """Total order on bounded-degree exponents: by degree, then lex on parts."""

    degree_increasing: bool = True
    lex_increasing: bool = False

    def key(self, g: Exponent):
        deg = sum(g)
        d = deg if self.degree_increasing else -deg
        parts = g if self.lex_increasing else tuple(-x for x in g)
        return (d, parts)

    def sorted(self, exps: Iterable[Exponent]) -> list:
        return sorted(exps, key=self.key)


# Layout conventions of the Pade matrix: domain monomials by increasing
# degree, image monomials by decreasing degree, both lex decreasing within a
# degree (this reproduces the reference 15x15 layout for (2,5,4,7)).
DOMAIN_ORDER = MonomialOrder(degree_increasing=True, lex_increasing=False)
IMAGE_ORDER = MonomialOrder(degree_increasing=False, lex_increasing=False)


class TruncatedSeries:
    """Power series truncated at total degree ``order``.

    Stored coefficients are nonzero and of degree <= order; multiplication
    drops any product term of higher degree.  Instances are immutable by
    convention: all operations return fresh series.
    """

    __slots__ = ("field", "nvars", "order", "coeffs")

    def __init__(self, field, nvars: int, order: int, coeffs: dict | None = None):
        self.field = field
        self.nvars = nvars
        self.order = order
        clean = {}
        for g, c in (coeffs or {}).items():
            if len(g) != nvars:
                raise UsageError(f"exponent {g} has wrong arity (nvars={nvars})")
            if sum(g) > order:
                continue
            if not field.is_zero(c):
                clean[g] = c
        self.coeffs = clean

    @classmethod
    def zero(cls, field, nvars: int, order: int) -> "TruncatedSeries":
        return cls(field, nvars, order, {})

    @classmethod
    def one(cls, field, nvars: int, order: int) -> "TruncatedSeries":
        return cls(field, nvars, order, {(0,) * nvars: field.one})

    @classmethod
    def from_terms(cls, field, nvars, order, terms) -> "TruncatedSeries":
        """Build from an iterable of (exponent, coefficient), summing repeats."""
        acc: dict = {}
        for g, c in terms:
            g = tuple(g)
            prev = acc.get(g, field.zero)
            acc[g] = field.add(prev, c)
        return cls(field, nvars, order, acc)

    def coeff(self, g: Exponent):
        return self.coeffs.get(tuple(g), self.field.zero)

    def constant_term(self):
        return self.coeff((0,) * self.nvars)

    def degree(self) -> int:
        """Largest stored total degree (-1 for the zero series)."""
        return max((sum(g) for g in self.coeffs), default=-1)

    def is_zero(self) -> bool:
        return not self.coeffs

    def _check_compatible(self, other: "TruncatedSeries"):
        if self.nvars != other.nvars:
            raise UsageError("series have different numbers of variables")
        if self.field != other.field:
            raise UsageError("series live over different field contexts")

    def add(self, other: "TruncatedSeries") -> "TruncatedSeries":
        self._check_compatible(other)
        order = min(self.order, other.order)
        f = self.field
        out = dict(self.coeffs)
        for g, c in other.coeffs.items():
            out[g] = f.add(out.get(g, f.zero), c)
        return TruncatedSeries(f, self.nvars, order, out)

    def neg(self) -> "TruncatedSeries":
        f = self.field
        return TruncatedSeries(
            f, self.nvars, self.order, {g: f.neg(c) for g, c in self.coeffs.items()}
        )

    def sub(self, other: "TruncatedSeries") -> "TruncatedSeries":
        return self.add(other.neg())

    def scale(self, c) -> "TruncatedSeries":
        f = self.field
        return TruncatedSeries(
            f, self.nvars, self.order, {g: f.mul(c, v) for g, v in self.coeffs.items()}
        )

    def shift(self, g: Exponent) -> "TruncatedSeries":
        """Multiply by the monomial x^g (truncating at the series order)."""
        g = tuple(g)
        return TruncatedSeries(
            self.field,
            self.nvars,
            self.order,
            {exp_add(h, g): c for h, c in self.coeffs.items() if sum(h) + sum(g) <= self.order},
        )

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, TruncatedSeries)
            and self.field == other.field
            and self.nvars == other.nvars
            and self.coeffs == other.coeffs
        )

    def __repr__(self) -> str:
        terms = ", ".join(f"{g}: {c}" for g, c in sorted(self.coeffs.items()))
        return f"TruncatedSeries(order={self.order}, {{{terms}}})"


def series_mul(a: TruncatedSeries, b: TruncatedSeries, order: int) -> TruncatedSeries:
    """Product of two series with all terms of degree > ``order`` removed."""
    a._check_compatible(b)
    f = a.field
    out: dict = {}
    for g, ca in a.coeffs.items():
        dg = sum(g)
        if dg > order:
            continue
        for h, cb in b.coeffs.items():
            if dg + sum(h) > order:
                continue
            k = exp_add(g, h)
            prev = out.get(k)
            term = f.mul(ca, cb)
            out[k] = term if prev is None else f.add(prev, term)
    return TruncatedSeries(f, a.nvars, order, out)


def series_inverse(q: TruncatedSeries, order: int) -> TruncatedSeries:
    """Inverse series r with q*r = 1 up to degree ``order``.

    Requires the constant term of q to be exactly 1; no normalization is
    applied.  The graded recursion r_k = -sum_{j>=1} q_j r_{k-j} uses ring
    operations only, so it also runs over jet coefficients.
    """
    f = q.field
    one = (0,) * q.nvars
    if q.coeff(one) != f.one:
        raise DomainError("series_inverse requires constant term exactly 1")
    # q split into homogeneous layers of positive degree
    layers: dict = {}
    for g, c in q.coeffs.items():
        d = sum(g)
        if d == 0 or d > order:
            continue
        layers.setdefault(d, {})[g] = c
    r: dict = {one: f.one}
    by_degree: dict = {0: {one: f.one}}
    for k in range(1, order + 1):
        acc: dict = {}
        for j, qj in layers.items():
            if j > k:
                continue
            rk = by_degree.get(k - j)
            if not rk:
                continue
            for g, qc in qj.items():
                for h, rc in rk.items():
                    t = exp_add(g, h)
                    prev = acc.get(t, f.zero)
                    acc[t] = f.add(prev, f.mul(qc, rc))
        layer = {g: f.neg(c) for g, c in acc.items() if not f.is_zero(c)}
        if layer:
            by_degree[k] = layer
            r.update(layer)
    return TruncatedSeries(f, q.nvars, order, r)


class SparsePoly:
    """Exact sparse polynomial with Fraction coefficients.

    Used for explicit hypersurface fixtures (Perazzo, Fermat, ...) where the
    Hessian is formed by formal differentiation.  Variables are indexed
    0..nvars-1.
    """

    __slots__ = ("nvars", "coeffs")

    def __init__(self, nvars: int, coeffs: dict | None = None):
        self.nvars = nvars
        clean = {}
        for g, c in (coeffs or {}).items():
            g = tuple(g)
            if len(g) != nvars:
                raise UsageError(f"exponent {g} has wrong arity (nvars={nvars})")
            c = Fraction(c)
            if c != 0:
                clean[g] = c
        self.coeffs = clean

    @classmethod
    def from_terms(cls, nvars: int, terms) -> "SparsePoly":
        acc: dict = {}
        for g, c in terms:
            g = tuple(g)
            acc[g] = acc.get(g, Fraction(0)) + Fraction(c)
        return cls(nvars, acc)

    def is_zero(self) -> bool:
        return not self.coeffs

    def degree(self) -> int:
        return max((sum(g) for g in self.coeffs), default=-1)

    def is_homogeneous(self) -> bool:
        degs = {sum(g) for g in self.coeffs}
        return len(degs) <= 1

    def add(self, other: "SparsePoly") -> "SparsePoly":
        out = dict(self.coeffs)
        for g, c in other.coeffs.items():
            out[g] = out.get(g, Fraction(0)) + c
        return SparsePoly(self.nvars, out)

    def mul(self, other: "SparsePoly") -> "SparsePoly":
        out: dict = {}
        for g, ca in self.coeffs.items():
            for h, cb in other.coeffs.items():
                k = exp_add(g, h)
                out[k] = out.get(k, Fraction(0)) + ca * cb
        return SparsePoly(self.nvars, out)

    def scale(self, c) -> "SparsePoly":
        c = Fraction(c)
        return SparsePoly(self.nvars, {g: c * v for g, v in self.coeffs.items()})

    def diff(self, i: int) -> "SparsePoly":
        out = {}
        for g, c in self.coeffs.items():
            if g[i] == 0:
                continue
            h = g[:i] + (g[i] - 1,) + g[i + 1 :]
            out[h] = out.get(h, Fraction(0)) + c * g[i]
        return SparsePoly(self.nvars, out)

    def eval(self, field, values) -> object:
        """Evaluate at a point; coefficients are mapped into ``field``."""
        if len(values) != self.nvars:
            raise UsageError("wrong number of coordinate values")
        total = field.zero
        for g, c in self.coeffs.items():
            term = field.of_fraction(c)
            for i, e in enumerate(g):
                for _ in range(e):
                    term = field.mul(term, values[i])
            total = field.add(total, term)
        return total

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SparsePoly)
            and self.nvars == other.nvars
            and self.coeffs == other.coeffs
        )

    def __repr__(self) -> str:
        return f"SparsePoly(nvars={self.nvars}, terms={len(self.coeffs)})"
