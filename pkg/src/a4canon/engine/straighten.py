"""PBW straightening: products of generators expanded without word space.

The commutation relation between any two root vectors taken out of
convex order is derived once from the shuffle realization (weights of
height at most 8).  Products are then reduced inside the basis of
undivided PBW monomials, whose structure constants are Laurent
polynomials, and converted to the divided basis at the end.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Sequence

from ..laurent import ONE, LaurentPoly, q_factorial
from .pbw import (
    Convention,
    PBWIndex,
    PBWVector,
    ROOTS,
    SIMPLE_SLOT,
    check_height,
    express_in_pbw,
    root_vector,
    unit_index,
)
from .words import DividedWord, shuffle_mul

Vec = dict  # PBWIndex -> LaurentPoly, undivided basis


def divided_to_undivided(A: Sequence[int]) -> LaurentPoly:
    """The factor ``f`` in ``U^A = f * E^(A)``, i.e. the product of ``[a]!`` over the entries."""
    d = ONE
    for a in A:
        if a > 1:
            d = d * q_factorial(a)
    return d


class RelationError(AssertionError):
    """A derived commutation relation does not have the expected shape."""


def _add_into(acc: Vec, B: PBWIndex, c: LaurentPoly) -> None:
    cur = acc.get(B)
    s = c if cur is None else cur + c
    if s.is_zero():
        acc.pop(B, None)
    else:
        acc[B] = s


class Straightener:
    """Reduction of products into the undivided PBW basis for one convention."""

    def __init__(self, conv: Convention):
        self.conv = conv
        self._relations: dict[tuple[int, int], list[tuple[PBWIndex, LaurentPoly]]] = {}
        self._cache: dict[tuple[PBWIndex, int], Vec] = {}

    def relation(self, s: int, g: int) -> list[tuple[PBWIndex, LaurentPoly]]:
        """Undivided expansion of ``e_s e_g`` for slots ``g < s``."""
        key = (s, g)
        rel = self._relations.get(key)
        if rel is not None:
            return rel
        if not g < s:
            raise ValueError("relation needs g < s")
        conv = self.conv
        prod = shuffle_mul(root_vector(ROOTS[s], conv), root_vector(ROOTS[g], conv), conv.twist)
        pv = express_in_pbw(prod, conv)
        swapped = tuple(a + b for a, b in zip(unit_index(g), unit_index(s)))
        rel = []
        for B, c in pv.items():
            u = c.divexact(divided_to_undivided(B))
            if B != swapped:
                used = [k for k, b in enumerate(B) if b]
                if not all(g < k < s for k in used):
                    raise RelationError(f"e{s}*e{g} has term {B} outside the open interval")
            rel.append((B, u))
        self._relations[key] = rel
        return rel

    def mul_root(self, B: PBWIndex, g: int) -> Vec:
        """Undivided expansion of ``U^B * e_g``."""
        key = (B, g)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        last = max((k for k, b in enumerate(B) if b), default=-1)
        if last <= g:
            out = {B[:g] + (B[g] + 1,) + B[g + 1:]: ONE}
        else:
            B0 = B[:last] + (B[last] - 1,) + B[last + 1:]
            out: Vec = {}
            for N, coef in self.relation(last, g):
                vec: Vec = {B0: coef}
                for slot, n in enumerate(N):
                    for _ in range(n):
                        vec = self.mul_vec_root(vec, slot)
                for M, c in vec.items():
                    _add_into(out, M, c)
        self._cache[key] = out
        return out

    def mul_vec_root(self, vec: Vec, g: int) -> Vec:
        out: Vec = {}
        for B, c in vec.items():
            for M, d in self.mul_root(B, g).items():
                _add_into(out, M, c * d)
        return out

    def expand_divided_word(self, dw: DividedWord) -> PBWVector:
        """Divided-basis coordinates of a product of divided powers of generators."""
        check_height(dw.weight)
        vec: Vec = {(0,) * 10: ONE}
        denom = ONE
        for i, n in dw.factors:
            for _ in range(n):
                vec = self.mul_vec_root(vec, SIMPLE_SLOT[i])
            if n > 1:
                denom = denom * q_factorial(n)
        out = {}
        for B, u in vec.items():
            out[B] = (u * divided_to_undivided(B)).divexact(denom)
        return PBWVector(out, dw.weight if vec else None)


@lru_cache(maxsize=None)
def straightener(conv: Convention) -> Straightener:
    return Straightener(conv)
