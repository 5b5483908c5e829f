"""Quantum shuffle realization of U+ of type A4.

Homogeneous elements are finite sums of words over {1,2,3,4} with Laurent
coefficients.  The generator ``e_i`` maps to the one-letter word ``(i,)``
and the product is the twisted shuffle, which makes this an injective
algebra map on each weight space.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from ..laurent import ONE, ZERO, LaurentPoly, q_factorial, q_int

LETTERS = (1, 2, 3, 4)
RANK = 4

Word = tuple[int, ...]


def cartan_pairing(i: int, j: int) -> int:
    """Symmetric Cartan pairing (alpha_i, alpha_j) of type A4."""
    if i not in LETTERS or j not in LETTERS:
        raise ValueError(f"letters must lie in 1..4, got {i}, {j}")
    if i == j:
        return 2
    return -1 if abs(i - j) == 1 else 0


_PAIR = {(i, j): cartan_pairing(i, j) for i in LETTERS for j in LETTERS}
PairTable = tuple[tuple[int, ...], ...]
STANDARD_PAIRING: PairTable = tuple(tuple(cartan_pairing(i, j) for j in LETTERS) for i in LETTERS)


class HeightCapExceeded(ValueError):
    """Weight height above the configured cap."""


def weight_of_word(w: Sequence[int]) -> tuple[int, int, int, int]:
    c = [0, 0, 0, 0]
    for a in w:
        c[a - 1] += 1
    return tuple(c)


class WordSum:
    """Finite ``Word -> LaurentPoly`` map, weight-homogeneous, zeros pruned."""

    __slots__ = ("_t", "weight")

    def __init__(self, terms: Mapping[Word, LaurentPoly] | None = None):
        t: dict[Word, LaurentPoly] = {}
        weight = None
        for w, c in (terms or {}).items():
            if isinstance(c, int):
                c = LaurentPoly.const(c)
            if c.is_zero():
                continue
            w = tuple(w)
            for a in w:
                if a not in LETTERS:
                    raise ValueError(f"letter {a} out of range in word {w}")
            wt = weight_of_word(w)
            if weight is None:
                weight = wt
            elif wt != weight:
                raise ValueError("WordSum must be weight-homogeneous")
            t[w] = c
        self._t = t
        self.weight = weight

    @classmethod
    def word(cls, w: Iterable[int], c: LaurentPoly | int = 1) -> "WordSum":
        return cls({tuple(w): c})

    @classmethod
    def unit(cls) -> "WordSum":
        return cls({(): ONE})

    def items(self):
        return sorted(self._t.items())

    def __len__(self) -> int:
        return len(self._t)

    def __iter__(self):
        return iter(sorted(self._t))

    def __getitem__(self, w: Word) -> LaurentPoly:
        return self._t.get(tuple(w), ZERO)

    def support(self) -> list[Word]:
        return sorted(self._t)

    def is_zero(self) -> bool:
        return not self._t

    def __eq__(self, other) -> bool:
        if not isinstance(other, WordSum):
            return NotImplemented
        return self._t == other._t

    def __add__(self, other: "WordSum") -> "WordSum":
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if self.weight != other.weight:
            raise ValueError("adding WordSums of different weights")
        t = dict(self._t)
        for w, c in other._t.items():
            t[w] = t.get(w, ZERO) + c
        return WordSum(t)

    def __neg__(self) -> "WordSum":
        return WordSum({w: -c for w, c in self._t.items()})

    def __sub__(self, other: "WordSum") -> "WordSum":
        return self + (-other)

    def scale(self, c: LaurentPoly | int) -> "WordSum":
        if isinstance(c, int):
            c = LaurentPoly.const(c)
        if c.is_zero():
            return WordSum()
        return WordSum({w: x * c for w, x in self._t.items()})

    def divexact(self, c: LaurentPoly) -> "WordSum":
        return WordSum({w: x.divexact(c) for w, x in self._t.items()})

    def __str__(self) -> str:
        if not self._t:
            return "0"
        return " + ".join(f"({c})*[{''.join(map(str, w)) or '()'}]" for w, c in self.items())

    __repr__ = __str__


@lru_cache(maxsize=200_000)
def _shuffle_words(
    u: Word, w: Word, sign: int, pair: PairTable | None = None
) -> tuple[tuple[Word, tuple[tuple[int, int], ...]], ...]:
    """Twisted shuffle of two words as ((word, ((exp, count), ...)), ...).

    A pair (a from u, b from w) placed with b before a contributes
    ``sign * (alpha_a, alpha_b)`` to the exponent of v.  ``pair`` replaces
    the Cartan pairing table (rows and columns indexed by letter - 1).
    """
    if not u:
        return ((w, ((0, 1),)),)
    if not w:
        return ((u, ((0, 1),)),)
    acc: dict[Word, dict[int, int]] = {}
    a, b = u[0], w[0]
    for word, poly in _shuffle_words(u[1:], w, sign, pair):
        d = acc.setdefault((a,) + word, {})
        for e, n in poly:
            d[e] = d.get(e, 0) + n
    if pair is None:
        shift = sign * sum(_PAIR[x, b] for x in u)
    else:
        shift = sign * sum(pair[x - 1][b - 1] for x in u)
    for word, poly in _shuffle_words(u, w[1:], sign, pair):
        d = acc.setdefault((b,) + word, {})
        for e, n in poly:
            d[e + shift] = d.get(e + shift, 0) + n
    return tuple((word, tuple(sorted(d.items()))) for word, d in acc.items())


def shuffle_mul(x: WordSum, y: WordSum, sign: int, pair: PairTable | None = None) -> WordSum:
    """Bilinear twisted shuffle product with twist-exponent sign ``sign``."""
    if x.is_zero() or y.is_zero():
        return WordSum()
    acc: dict[Word, dict[int, int]] = {}
    for u, cu in x._t.items():
        for w, cw in y._t.items():
            for word, poly in _shuffle_words(u, w, sign, pair):
                d = acc.setdefault(word, {})
                # (cu * cw * sum n v^e) accumulated term-wise
                for ea, ca in cu._terms.items():
                    for eb, cb in cw._terms.items():
                        base = ea + eb
                        prod = ca * cb
                        for e, n in poly:
                            k = base + e
                            d[k] = d.get(k, 0) + prod * n
    return WordSum({w: LaurentPoly(d) for w, d in acc.items()})


def generator_power(i: int, n: int, sign: int) -> WordSum:
    """Divided power ``e_i^(n)``: a single word ``i^n`` times a power of v."""
    if i not in LETTERS:
        raise ValueError(f"generator index {i} out of range")
    if n < 0:
        raise ValueError("negative exponent")
    # e_i^n = (prod_{k<n} (1 + v^{2 sign} + ... + v^{2 sign k})) i^n; dividing by [n]!
    # leaves v^{sign n(n-1)/2}.
    return WordSum({(i,) * n: LaurentPoly({sign * n * (n - 1) // 2: 1})})


def generator_power_by_multiplication(i: int, n: int, sign: int) -> WordSum:
    """Same as :func:`generator_power` but computed as ``e_i^n / [n]!``."""
    x = WordSum.unit()
    gen = WordSum.word((i,))
    for _ in range(n):
        x = shuffle_mul(x, gen, sign)
    return x.divexact(q_factorial(n))


@dataclass(frozen=True)
class DividedWord:
    """Ordered product of divided powers ``e_{i1}^(n1) e_{i2}^(n2) ...``."""

    factors: tuple[tuple[int, int], ...]

    def __post_init__(self):
        for i, n in self.factors:
            if i not in LETTERS:
                raise ValueError(f"generator index {i} out of range")
            if n < 0:
                raise ValueError(f"negative exponent {n} on e{i}")

    @property
    def weight(self) -> tuple[int, int, int, int]:
        c = [0, 0, 0, 0]
        for i, n in self.factors:
            c[i - 1] += n
        return tuple(c)

    @property
    def height(self) -> int:
        return sum(n for _, n in self.factors)

    def normalized(self) -> "DividedWord":
        """Drop zero exponents and merge equal neighbours (as a product, not as divided powers)."""
        return DividedWord(tuple((i, n) for i, n in self.factors if n))

    def __str__(self) -> str:
        return " ".join(f"e{i}^{n}" for i, n in self.factors) or "1"

    @classmethod
    def parse(cls, text: str) -> "DividedWord":
        import re

        text = text.strip()
        if not text or text == "1":
            return cls(())
        out = []
        for tok in text.split():
            m = re.fullmatch(r"e([1-4])(?:\^\(?(\d+)\)?)?", tok)
            if not m:
                raise ValueError(f"bad divided-power factor {tok!r}")
            out.append((int(m.group(1)), int(m.group(2) or 1)))
        return cls(tuple(out))


def eval_divided_word(dw: DividedWord, sign: int) -> WordSum:
    x = WordSum.unit()
    for i, n in dw.factors:
        if n:
            x = shuffle_mul(x, generator_power(i, n, sign), sign)
    return x


def serre_holds(sign: int, pair: PairTable | None = None) -> bool:
    """Check the quantum Serre relations in the shuffle realization.

    Uses the undivided form ``e_i^2 e_j - [2] e_i e_j e_i + e_j e_i^2`` for
    adjacent letters and ``e_i e_j - e_j e_i`` otherwise.
    """

    def mul(*letters: int) -> WordSum:
        x = WordSum.unit()
        for a in letters:
            x = shuffle_mul(x, WordSum.word((a,)), sign, pair)
        return x

    for i in LETTERS:
        for j in LETTERS:
            if i == j:
                continue
            if abs(i - j) == 1:
                rel = mul(i, i, j) - mul(i, j, i).scale(q_int(2)) + mul(j, i, i)
            else:
                rel = mul(i, j) - mul(j, i)
            if not rel.is_zero():
                return False
    return True
