"""Region membership, instantiation, sampling, symmetry and coverage."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np

from ..engine.pbw import ROOT_HEIGHT, ROOTS, weight_of
from ..engine.words import DividedWord
from ..laurent import ONE, LaurentPoly, q_binomial
from .model import CaseSpec, CaseTable, CoeffFactor, ExponentExpr, Inequality, Region, SumVar

HEIGHTS = np.array(ROOT_HEIGHT, dtype=np.int64)


class RegionViolation(ValueError):
    """The point lies outside the case's region."""


class TranscriptionError(ValueError):
    """Instantiated data is inconsistent (negative exponent or wrong weight)."""


def _point(A: Sequence[int]) -> tuple[int, ...]:
    A = tuple(int(a) for a in A)
    if len(A) != 10 or any(a < 0 for a in A):
        raise ValueError(f"point must be 10 nonnegative integers, got {A}")
    return A


def index_height(A: Sequence[int]) -> int:
    return int(sum(a * h for a, h in zip(A, ROOT_HEIGHT)))


def region_contains(r: Region, A: Sequence[int]) -> bool:
    return all(q.holds(A) for q in r.inequalities)


def strict_count(r: Region, A: Sequence[int]) -> int:
    return sum(q.strict(A) for q in r.inequalities)


def violated(r: Region, A: Sequence[int]) -> list[Inequality]:
    return [q for q in r.inequalities if not q.holds(A)]


def locate(t: CaseTable, A: Sequence[int]) -> list[str]:
    A = _point(A)
    return [c.id for c in t if region_contains(c.region, A)]


def assignments(c: CaseSpec, A: Sequence[int]) -> list[dict[str, int]]:
    """Full rectangle of summation-variable values, in lexicographic order."""
    ranges = [range(max(v.upper(A), -1) + 1) for v in c.vars]
    names = [v.name for v in c.vars]
    return [dict(zip(names, vals)) for vals in itertools.product(*ranges)]


def coefficient(c: CaseSpec, A: Sequence[int], assignment: dict[str, int]) -> LaurentPoly:
    coef = ONE
    for f in c.factors:
        x = assignment[f.var]
        b = q_binomial(f.top(A) + x, x)
        coef = coef * (-b if x % 2 else b)
    return coef


def instantiate(
    c: CaseSpec, A: Sequence[int], check_region: bool = True
) -> list[tuple[LaurentPoly, DividedWord]]:
    """Terms ``(coefficient, divided word)`` of the case's element at ``A``."""
    A = _point(A)
    if check_region and not region_contains(c.region, A):
        bad = "; ".join(map(str, violated(c.region, A)))
        raise RegionViolation(f"case {c.id}: {A} violates {bad}")
    nu = weight_of(A)
    out = []
    for asg in assignments(c, A):
        coef = coefficient(c, A, asg)
        if coef.is_zero():
            continue
        factors = []
        for i, e in c.pattern:
            n = e(A, asg)
            if n < 0:
                raise TranscriptionError(f"case {c.id}: exponent of e{i} is {n} at {A}, {asg}")
            factors.append((i, n))
        dw = DividedWord(tuple(factors))
        if dw.weight != nu:
            raise TranscriptionError(f"case {c.id}: term weight {dw.weight} != {nu} at {A}")
        out.append((coef, dw))
    return out


# -- sampling -------------------------------------------------------------------

@lru_cache(maxsize=16)
def _grid(max_entry: int, max_height: int, a4_cap: int | None) -> np.ndarray:
    """All points of {0..max_entry}^10 with height <= max_height, as an int array."""
    caps = [max_entry] * 10
    if a4_cap is not None:
        caps[3] = min(max_entry, a4_cap)
    pts = np.zeros((1, 0), dtype=np.int64)
    heights = np.zeros(1, dtype=np.int64)
    for slot, cap in enumerate(caps):
        vals = np.arange(cap + 1, dtype=np.int64)
        h = heights[:, None] + vals[None, :] * HEIGHTS[slot]
        keep = h <= max_height
        rows, cols = np.nonzero(keep)
        pts = np.concatenate([pts[rows], vals[cols][:, None]], axis=1)
        heights = h[rows, cols]
    return pts


def _region_arrays(r: Region) -> tuple[np.ndarray, np.ndarray]:
    M, c = r.matrix()
    return np.array(M, dtype=np.int64), np.array(c, dtype=np.int64)


def sample_points(
    r: Region,
    max_entry: int,
    max_height: int,
    count: int,
    a4_cap: int | None = None,
    spread: bool = False,
) -> list[tuple[int, ...]]:
    """Points of the region, most strict inequalities first, then by (height, lex).

    With ``spread``, points are instead picked greedily so that each new
    point makes as many not-yet-seen slots positive as possible (ties
    broken by the order above); this exercises every exponent early.
    """
    if count <= 0:
        return []
    pts = _grid(max_entry, max_height, a4_cap)
    M, c = _region_arrays(r)
    vals = pts @ M.T + c
    inside = np.all(vals >= 0, axis=1)
    pts = pts[inside]
    strict = np.sum(vals[inside] > 0, axis=1)
    heights = pts @ HEIGHTS
    keys = [pts[:, k] for k in range(9, -1, -1)] + [heights, -strict]
    order = np.lexsort(keys)
    if not spread:
        return [tuple(int(x) for x in pts[k]) for k in order[:count]]
    ordered = pts[order] > 0
    seen = np.zeros(10, dtype=bool)
    taken = np.zeros(len(order), dtype=bool)
    out = []
    for _ in range(min(count, len(order))):
        gain = np.where(taken, -1, (ordered & ~seen).sum(axis=1))
        k = int(np.argmax(gain))
        taken[k] = True
        seen |= ordered[k]
        out.append(tuple(int(x) for x in pts[order[k]]))
    return out


# -- symmetry -------------------------------------------------------------------

def _diagram_perm() -> tuple[int, ...]:
    slot = {r: s for s, r in enumerate(ROOTS)}
    return tuple(slot[5 - j, 5 - i] for i, j in ROOTS)


DIAGRAM_PERM = _diagram_perm()
DIAGRAM_GENMAP = {1: 4, 2: 3, 3: 2, 4: 1}


@dataclass(frozen=True)
class SymmetryConfig:
    """Index transform applied to a case: slot permutation, generator relabeling, order reversal."""

    perm: tuple[int, ...]
    gen_map: tuple[tuple[int, int], ...]
    reverse: bool = False
    name: str = field(default="custom", compare=False)

    @property
    def gen(self) -> dict[int, int]:
        return dict(self.gen_map)


IDENTITY_SYMMETRY = SymmetryConfig(tuple(range(10)), tuple((i, i) for i in range(1, 5)), False, "identity")
DIAGRAM_SYMMETRY = SymmetryConfig(DIAGRAM_PERM, tuple(DIAGRAM_GENMAP.items()), True, "diagram-anti")


def apply_symmetry(
    c: CaseSpec,
    perm: Sequence[int],
    gen_map: dict[int, int],
    reverse: bool = False,
) -> CaseSpec:
    """Permute a-slots in every form and relabel generators; optionally reverse the monomial."""
    perm = tuple(perm)
    if sorted(perm) != list(range(10)):
        raise ValueError("perm must be a permutation of 0..9")
    if sorted(gen_map) != [1, 2, 3, 4] or sorted(gen_map.values()) != [1, 2, 3, 4]:
        raise ValueError("gen_map must permute 1..4")
    vars_ = tuple(SumVar(v.name, tuple(b.permuted(perm) for b in v.bounds)) for v in c.vars)
    factors = tuple(CoeffFactor(f.var, f.top.permuted(perm)) for f in c.factors)
    pattern = [(gen_map[i], ExponentExpr(e.base.permuted(perm), e.var_coeffs)) for i, e in c.pattern]
    if reverse:
        pattern.reverse()
    region = Region(tuple(Inequality(q.form.permuted(perm)) for q in c.region.inequalities))
    return CaseSpec(c.id + "*", vars_, factors, tuple(pattern), region)


def apply_config(c: CaseSpec, cfg: SymmetryConfig) -> CaseSpec:
    return apply_symmetry(c, cfg.perm, cfg.gen, cfg.reverse)


# -- coverage -------------------------------------------------------------------

@dataclass
class CoverageReport:
    max_entry: int
    points: int
    uncovered: int
    covered_once: int
    covered_multiple: int
    interior_overlaps: list[tuple[str, str, tuple[int, ...]]]

    def as_dict(self) -> dict:
        return {
            "max_entry": self.max_entry,
            "points": self.points,
            "uncovered": self.uncovered,
            "covered_once": self.covered_once,
            "covered_multiple": self.covered_multiple,
            "interior_overlaps": [
                {"cases": [a, b], "witness": list(p)} for a, b, p in self.interior_overlaps
            ],
        }


def coverage_stats(t: CaseTable, max_entry: int) -> CoverageReport:
    """Coverage of {0..max_entry}^10 with a4 = 0 by the table's regions."""
    axes = [np.arange(max_entry + 1, dtype=np.int64)] * 9
    grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, 9)
    pts = np.insert(grid, 3, 0, axis=1)
    n = len(t)
    inside = np.zeros((len(pts), n), dtype=bool)
    strict = np.zeros((len(pts), n), dtype=bool)
    for k, c in enumerate(t):
        M, b = _region_arrays(c.region)
        vals = pts @ M.T + b
        inside[:, k] = np.all(vals >= 0, axis=1)
        strict[:, k] = np.all(vals > 0, axis=1)
    cover = inside.sum(axis=1)
    overlaps = []
    both = strict.T.astype(np.int64) @ strict.astype(np.int64)
    ids = t.ids
    for i, j in zip(*np.nonzero(np.triu(both, 1))):
        witness = np.nonzero(strict[:, i] & strict[:, j])[0][0]
        overlaps.append((ids[i], ids[j], tuple(int(x) for x in pts[witness])))
    return CoverageReport(
        max_entry=max_entry,
        points=len(pts),
        uncovered=int(np.sum(cover == 0)),
        covered_once=int(np.sum(cover == 1)),
        covered_multiple=int(np.sum(cover >= 2)),
        interior_overlaps=overlaps,
    )
