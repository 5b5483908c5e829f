"""Exact Laurent polynomials in one variable ``v`` and q-combinatorics.

Coefficients are Python ints, so arithmetic never overflows.  A
:class:`LaurentPoly` is immutable; its term map never stores a zero
coefficient, which makes ``==`` a structural comparison.
"""

from __future__ import annotations

import re
from functools import lru_cache
from typing import Iterable, Mapping, Union

__all__ = [
    "LaurentPoly",
    "ZERO",
    "ONE",
    "V",
    "InexactDivision",
    "lp_add",
    "lp_mul",
    "lp_bar",
    "monomial",
    "q_int",
    "q_factorial",
    "q_binomial",
    "identity_i_sides",
    "identity_ii_sides",
    "check_identity_i",
    "check_identity_ii",
    "parse_laurent",
]


class InexactDivision(ArithmeticError):
    """Raised when a division expected to be exact leaves a remainder."""


Scalar = Union[int, "LaurentPoly"]


class LaurentPoly:
    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[int, int] | None = None):
        clean: dict[int, int] = {}
        if terms:
            for k, c in terms.items():
                if c:
                    clean[int(k)] = int(c)
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict[int, int]) -> "LaurentPoly":
        # caller guarantees there are no zero coefficients
        p = object.__new__(cls)
        p._terms = terms
        p._hash = None
        return p

    @classmethod
    def const(cls, c: int) -> "LaurentPoly":
        return cls._raw({0: c} if c else {})

    # -- inspection ---------------------------------------------------
    @property
    def terms(self) -> dict[int, int]:
        return dict(self._terms)

    def items(self):
        return sorted(self._terms.items(), reverse=True)

    def is_zero(self) -> bool:
        return not self._terms

    def coeff(self, k: int) -> int:
        return self._terms.get(k, 0)

    @property
    def max_degree(self) -> int:
        if not self._terms:
            raise ValueError("zero polynomial has no degree")
        return max(self._terms)

    @property
    def min_degree(self) -> int:
        if not self._terms:
            raise ValueError("zero polynomial has no degree")
        return min(self._terms)

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def evaluate(self, x):
        """Value at ``v = x``; ``x`` may be an int, Fraction or float."""
        return sum(c * x**k for k, c in self._terms.items())

    # -- arithmetic ---------------------------------------------------
    @staticmethod
    def _coerce(other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            return other
        if isinstance(other, int):
            return LaurentPoly.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not other._terms:
            return self
        if not self._terms:
            return other
        t = dict(self._terms)
        for k, c in other._terms.items():
            s = t.get(k, 0) + c
            if s:
                t[k] = s
            else:
                t.pop(k, None)
        return LaurentPoly._raw(t)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._raw({k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, int):
            if other == 0:
                return ZERO
            return LaurentPoly._raw({k: c * other for k, c in self._terms.items()})
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        a, b = self._terms, other._terms
        if not a or not b:
            return ZERO
        if len(a) < len(b):
            a, b = b, a
        if len(b) == 1:
            (kb, cb), = b.items()
            return LaurentPoly._raw({k + kb: c * cb for k, c in a.items()})
        t: dict[int, int] = {}
        for ka, ca in a.items():
            for kb, cb in b.items():
                k = ka + kb
                t[k] = t.get(k, 0) + ca * cb
        return LaurentPoly._raw({k: c for k, c in t.items() if c})

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            if self.is_monomial():
                (k, c), = self._terms.items()
                if c in (1, -1):
                    return LaurentPoly._raw({k * n: c ** (-n)})
            raise ValueError("negative power of a non-unit")
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by ``v**k``."""
        if not k:
            return self
        return LaurentPoly._raw({e + k: c for e, c in self._terms.items()})

    def bar(self) -> "LaurentPoly":
        return LaurentPoly._raw({-k: c for k, c in self._terms.items()})

    def divexact(self, other: Scalar) -> "LaurentPoly":
        """Exact quotient ``self / other``; raises :class:`InexactDivision`."""
        if isinstance(other, int):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            out = {}
            for k, c in self._terms.items():
                q, r = divmod(c, other)
                if r:
                    raise InexactDivision(f"{self} not divisible by {other}")
                out[k] = q
            return LaurentPoly._raw(out)
        if other.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        if self.is_zero():
            return ZERO
        d = other._terms
        dtop = max(d)
        dlead = d[dtop]
        rem = dict(self._terms)
        quot: dict[int, int] = {}
        dlow = min(d)
        low = min(rem) - dlow
        while rem:
            top = max(rem)
            k = top - dtop
            if k < low:
                raise InexactDivision(f"{self} not divisible by {other}")
            c, r = divmod(rem[top], dlead)
            if r:
                raise InexactDivision(f"{self} not divisible by {other}")
            quot[k] = c
            for e, dc in d.items():
                s = rem.get(e + k, 0) - c * dc
                if s:
                    rem[e + k] = s
                else:
                    rem.pop(e + k, None)
        return LaurentPoly._raw(quot)

    # -- comparison / hashing ------------------------------------------
    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.const(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __bool__(self):
        return bool(self._terms)

    # -- text ---------------------------------------------------------
    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for k, c in self.items():
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if k == 0:
                body = str(a)
            else:
                body = "v" if k == 1 else f"v^{k}"
                if a != 1:
                    body = f"{a}*{body}"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self) -> str:
        return f"LaurentPoly({str(self)!r})"


ZERO = LaurentPoly()
ONE = LaurentPoly({0: 1})
V = LaurentPoly({1: 1})


def monomial(k: int, c: int = 1) -> LaurentPoly:
    return LaurentPoly({k: c})


def lp_add(x: LaurentPoly, y: LaurentPoly) -> LaurentPoly:
    return x + y


def lp_mul(x: LaurentPoly, y: LaurentPoly) -> LaurentPoly:
    return x * y


def lp_bar(x: LaurentPoly) -> LaurentPoly:
    return x.bar()


_TERM = re.compile(
    r"""\s*([+-])?\s*
        (?:(\d+)\s*(?:\*\s*)?)?
        (v(?:\s*\^\s*(?:\(\s*)?(-?\d+)(?:\s*\))?)?)?\s*""",
    re.VERBOSE,
)


def parse_laurent(text: str) -> LaurentPoly:
    """Parse the rendering produced by ``str(LaurentPoly)``.

    Accepts ``c*v^k`` terms separated by ``+``/``-``; ``c`` and ``*`` may be
    omitted, ``v`` means ``v^1`` and a bare integer is a constant.
    """
    s = text.strip()
    if not s:
        raise ValueError("empty polynomial text")
    if s == "0":
        return ZERO
    pos = 0
    terms: dict[int, int] = {}
    first = True
    while pos < len(s):
        m = _TERM.match(s, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse Laurent polynomial at {s[pos:]!r}")
        sign, coeff, vpart, exp = m.groups()
        if sign is None and not first:
            raise ValueError(f"missing operator in {s!r}")
        if coeff is None and vpart is None:
            raise ValueError(f"dangling sign in {s!r}")
        c = int(coeff) if coeff is not None else 1
        if sign == "-":
            c = -c
        k = 0 if vpart is None else (int(exp) if exp is not None else 1)
        terms[k] = terms.get(k, 0) + c
        pos = m.end()
        first = False
    return LaurentPoly(terms)


# -- q-combinatorics ----------------------------------------------------

@lru_cache(maxsize=None)
def q_int(n: int) -> LaurentPoly:
    """Balanced quantum integer ``[n] = (v^n - v^-n)/(v - v^-1)``."""
    if n == 0:
        return ZERO
    if n < 0:
        return -q_int(-n)
    return LaurentPoly({n - 1 - 2 * i: 1 for i in range(n)})


@lru_cache(maxsize=None)
def q_factorial(n: int) -> LaurentPoly:
    if n < 0:
        raise ValueError("q_factorial of a negative integer")
    out = ONE
    for i in range(2, n + 1):
        out = out * q_int(i)
    return out


@lru_cache(maxsize=None)
def q_binomial(top: int, bottom: int) -> LaurentPoly:
    """Gaussian binomial ``[top; bottom]`` for any integer ``top``.

    Uses the product formula prod_{i=1..k} [top-k+i]/[i], so it vanishes
    when ``0 <= top < bottom`` and carries the sign ``(-1)^bottom`` for
    negative tops.
    """
    if bottom < 0:
        raise ValueError("bottom of a Gaussian binomial must be nonnegative")
    if bottom == 0:
        return ONE
    if 0 <= top < bottom:
        return ZERO
    num = ONE
    for i in range(1, bottom + 1):
        num = num * q_int(top - bottom + i)
    return num.divexact(q_factorial(bottom))


# -- summation identities -----------------------------------------------

def _require(m: int, k: int, *rest: int) -> None:
    if not (m >= k >= 0) or any(x < 0 for x in rest):
        raise ValueError(f"identity needs m >= k >= 0 and naturals, got m={m}, k={k}, rest={rest}")


def identity_i_sides(m: int, k: int, delta: int) -> tuple[LaurentPoly, LaurentPoly]:
    """Both sides of the alternating sum
    sum_i (-1)^i [k-1+i; i][m; delta-i] v^{i(m-k)} = [m-k; delta] v^{-k delta}."""
    _require(m, k, delta)
    lhs = ZERO
    for i in range(delta + 1):
        term = q_binomial(k - 1 + i, i) * q_binomial(m, delta - i)
        term = term.shift(i * (m - k))
        lhs = lhs - term if i % 2 else lhs + term
    rhs = q_binomial(m - k, delta).shift(-k * delta)
    return lhs, rhs


def identity_ii_sides(m: int, k: int, n: int, delta: int) -> tuple[LaurentPoly, LaurentPoly]:
    """Both sides of the two-parameter generalisation (``n = 0`` gives the first)."""
    _require(m, k, n, delta)
    lhs = ZERO
    for i in range(delta + 1):
        term = q_binomial(k - 1 + i, i) * q_binomial(m + n, delta - i)
        term = term.shift(i * (m - k - n))
        lhs = lhs - term if i % 2 else lhs + term
    rhs = ZERO
    for t in range(min(delta, n) + 1):
        term = q_binomial(m - k, delta - t) * q_binomial(n, t)
        rhs = rhs + term.shift(-k * (delta - t) - n * delta + t * (m + n))
    return lhs, rhs


def check_identity_i(m: int, k: int, delta: int) -> bool:
    lhs, rhs = identity_i_sides(m, k, delta)
    return lhs == rhs


def check_identity_ii(m: int, k: int, n: int, delta: int) -> bool:
    lhs, rhs = identity_ii_sides(m, k, n, delta)
    return lhs == rhs


def poly_sum(items: Iterable[LaurentPoly]) -> LaurentPoly:
    out = ZERO
    for p in items:
        out = out + p
    return out
