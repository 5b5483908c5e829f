"""Root vectors, PBW monomials and the lattice congruence test."""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Mapping, Sequence

from ..laurent import ONE, ZERO, LaurentPoly, q_int
from .linalg import ModularSolver
from .words import (
    HeightCapExceeded,
    WordSum,
    generator_power,
    shuffle_mul,
)

# Convex order of the positive roots, as intervals (i, j) = alpha_i + ... + alpha_j.
ROOTS: tuple[tuple[int, int], ...] = (
    (4, 4), (3, 4), (2, 4), (1, 4), (3, 3), (2, 3), (1, 3), (2, 2), (1, 2), (1, 1),
)
ROOT_SLOT = {r: s for s, r in enumerate(ROOTS)}
ROOT_HEIGHT = tuple(j - i + 1 for i, j in ROOTS)
SIMPLE_SLOT = {i: ROOT_SLOT[i, i] for i in range(1, 5)}
ROOT_NAMES = ("e4", "e34", "e24", "e14", "e3", "e23", "e13", "e2", "e12", "e1")

DEFAULT_HEIGHT_CAP = 14

PBWIndex = tuple[int, ...]


def height_cap() -> int:
    raw = os.environ.get("A4CANON_HEIGHT_CAP")
    return int(raw) if raw else DEFAULT_HEIGHT_CAP


def check_height(weight: Sequence[int], cap: int | None = None) -> None:
    cap = height_cap() if cap is None else cap
    h = sum(weight)
    if h > cap:
        raise HeightCapExceeded(f"weight {tuple(weight)} has height {h} > cap {cap}")


@dataclass(frozen=True)
class Convention:
    """The two free sign choices of the realization plus the commutator side.

    ``twist``: sign of the shuffle twist exponent.
    ``c``: root vectors use the coefficient ``v**c`` in the q-commutator.
    ``side``: ``"left"`` gives e_ij = e_{i,j-1} e_j - v^c e_j e_{i,j-1};
    ``"right"`` gives e_ij = e_j e_{i,j-1} - v^c e_{i,j-1} e_j.
    """

    twist: int = 1
    c: int = -1
    side: str = "left"

    def __post_init__(self):
        if self.twist not in (1, -1) or self.c not in (1, -1):
            raise ValueError("twist and c must be +1 or -1")
        if self.side not in ("left", "right"):
            raise ValueError("side must be 'left' or 'right'")

    def label(self) -> str:
        return f"twist={self.twist:+d} c={self.c:+d} side={self.side}"


# Accepted by the pinning procedure (see checker.pin_conventions); never varied at runtime.
PINNED = Convention(twist=1, c=-1, side="left")


def _check_index(A: Sequence[int]) -> PBWIndex:
    A = tuple(int(a) for a in A)
    if len(A) != 10 or any(a < 0 for a in A):
        raise ValueError(f"PBW index must be 10 nonnegative integers, got {A}")
    return A


def weight_of(A: Sequence[int]) -> tuple[int, int, int, int]:
    A = _check_index(A)
    nu = [0, 0, 0, 0]
    for a, (i, j) in zip(A, ROOTS):
        for k in range(i, j + 1):
            nu[k - 1] += a
    return tuple(nu)


def index_height(A: Sequence[int]) -> int:
    return sum(a * h for a, h in zip(A, ROOT_HEIGHT))


def unit_index(slot: int, n: int = 1) -> PBWIndex:
    A = [0] * 10
    A[slot] = n
    return tuple(A)


@lru_cache(maxsize=None)
def enumerate_pbw(nu: tuple[int, int, int, int]) -> tuple[PBWIndex, ...]:
    """All PBW indices of weight ``nu``, in lexicographic order.

    Works slot by slot; a root's multiplicity is bounded by the remaining
    weight on each simple root it contains.
    """
    nu = tuple(nu)
    if len(nu) != 4 or any(x < 0 for x in nu):
        raise ValueError(f"weight must be 4 nonnegative integers, got {nu}")
    out: list[PBWIndex] = []

    def rec(slot: int, rest: list[int], acc: list[int]) -> None:
        if slot == 10:
            if not any(rest):
                out.append(tuple(acc))
            return
        i, j = ROOTS[slot]
        cap = min(rest[k - 1] for k in range(i, j + 1))
        for a in range(cap + 1):
            for k in range(i, j + 1):
                rest[k - 1] -= a
            acc.append(a)
            rec(slot + 1, rest, acc)
            acc.pop()
            for k in range(i, j + 1):
                rest[k - 1] += a

    rec(0, list(nu), [])
    return tuple(sorted(out))


# -- word-space images ------------------------------------------------------

@lru_cache(maxsize=None)
def root_vector(r: tuple[int, int], conv: Convention) -> WordSum:
    i, j = r
    if not 1 <= i <= j <= 4:
        raise ValueError(f"bad root interval {r}")
    if i == j:
        return WordSum.word((i,))
    left = root_vector((i, j - 1), conv)
    ej = WordSum.word((j,))
    vc = LaurentPoly({conv.c: 1})
    if conv.side == "left":
        return shuffle_mul(left, ej, conv.twist) - shuffle_mul(ej, left, conv.twist).scale(vc)
    return shuffle_mul(ej, left, conv.twist) - shuffle_mul(left, ej, conv.twist).scale(vc)


@lru_cache(maxsize=None)
def root_vector_power(slot: int, n: int, conv: Convention) -> WordSum:
    """Divided power of the root vector in ``slot``."""
    if n == 0:
        return WordSum.unit()
    i, j = ROOTS[slot]
    if i == j:
        return generator_power(i, n, conv.twist)
    x = root_vector_power(slot, n - 1, conv)
    x = shuffle_mul(x, root_vector(ROOTS[slot], conv), conv.twist)
    # x is now e^(n-1) * e = [n] e^(n)
    return x.divexact(q_int(n))


@lru_cache(maxsize=4096)
def pbw_monomial(A: PBWIndex, conv: Convention) -> WordSum:
    A = _check_index(A)
    check_height(weight_of(A))
    x = WordSum.unit()
    for slot, a in enumerate(A):
        if a:
            x = shuffle_mul(x, root_vector_power(slot, a, conv), conv.twist)
    return x


# -- PBW vectors ---------------------------------------------------------------

class PBWVector:
    """Finite map ``PBWIndex -> LaurentPoly`` of one weight, zeros pruned."""

    __slots__ = ("_t", "weight")

    def __init__(self, terms: Mapping[PBWIndex, LaurentPoly] | None = None, weight=None):
        t = {}
        for A, c in (terms or {}).items():
            if isinstance(c, int):
                c = LaurentPoly.const(c)
            if c.is_zero():
                continue
            A = _check_index(A)
            w = weight_of(A)
            if weight is None:
                weight = w
            elif w != weight:
                raise ValueError("PBWVector must be weight-homogeneous")
            t[A] = c
        self._t = t
        self.weight = weight

    def items(self):
        return sorted(self._t.items())

    def __getitem__(self, A) -> LaurentPoly:
        return self._t.get(tuple(A), ZERO)

    def __len__(self):
        return len(self._t)

    def __eq__(self, other):
        if not isinstance(other, PBWVector):
            return NotImplemented
        return self._t == other._t

    def __add__(self, other: "PBWVector") -> "PBWVector":
        if not self._t:
            return other
        if not other._t:
            return self
        if self.weight != other.weight:
            raise ValueError("adding PBWVectors of different weights")
        t = dict(self._t)
        for A, c in other._t.items():
            t[A] = t.get(A, ZERO) + c
        return PBWVector(t, self.weight)

    def scale(self, c) -> "PBWVector":
        return PBWVector({A: x * c for A, x in self._t.items()}, self.weight)

    def __str__(self) -> str:
        return "\n".join(f"E^({','.join(map(str, A))}): {c}" for A, c in self.items()) or "0"


@dataclass
class CongruenceReport:
    in_lattice: bool
    congruent_to_target: bool
    offending: list[tuple[PBWIndex, LaurentPoly]] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "in_lattice": self.in_lattice,
            "congruent_to_target": self.congruent_to_target,
            "offending": [
                {"index": list(A), "coefficient": str(c)} for A, c in self.offending
            ],
        }


def lattice_verdict(pv: PBWVector, A: Sequence[int]) -> CongruenceReport:
    """Decide ``pv == E^A (mod v^-1 L)`` where L is the Z[v^-1]-span of PBW monomials."""
    A = _check_index(A)
    if pv.weight is not None and pv.weight != weight_of(A):
        raise ValueError(f"weight mismatch: vector has {pv.weight}, target {weight_of(A)}")
    in_lattice = True
    congruent = True
    offending = []
    keys = set(pv._t) | {A}
    for B in sorted(keys):
        c = pv[B]
        if not c.is_zero() and c.max_degree > 0:
            in_lattice = False
        d = c - ONE if B == A else c
        if not d.is_zero() and d.max_degree >= 0:
            congruent = False
            offending.append((B, c))
    return CongruenceReport(in_lattice, congruent and in_lattice, offending)


# -- expansion of word sums ----------------------------------------------------

class InconsistentSystem(ArithmeticError):
    """The word sum is not in the span of the PBW images."""


@lru_cache(maxsize=None)
def pbw_system(nu: tuple[int, int, int, int], conv: Convention):
    """(indices, images, solver) for the weight space ``nu``."""
    check_height(nu)
    indices = enumerate_pbw(nu)
    images = [pbw_monomial(A, conv) for A in indices]
    columns = sorted(set().union(*(im._t for im in images)))
    solver = ModularSolver([im._t for im in images], columns)
    return indices, images, solver


MAX_INTERPOLATION_POINTS = 1024


def express_in_pbw(x: WordSum, conv: Convention) -> PBWVector:
    """Coordinates of a homogeneous word sum in the divided PBW basis.

    The result is certified: the combination of PBW images is recomputed
    exactly and compared with ``x`` on every word.
    """
    if x.is_zero():
        return PBWVector()
    nu = x.weight
    indices, images, solver = pbw_system(nu, conv)
    npoints = 32
    while npoints <= MAX_INTERPOLATION_POINTS:
        coeffs = solver.solve(x._t, npoints)
        recombined = WordSum()
        for im, c in zip(images, coeffs):
            if not c.is_zero():
                recombined = recombined + im.scale(c)
        if recombined == x:
            return PBWVector(dict(zip(indices, coeffs)), nu)
        npoints *= 2
    raise InconsistentSystem(f"no Laurent solution found at weight {nu}")
