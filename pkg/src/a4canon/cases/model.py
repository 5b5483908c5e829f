"""Data model for the case table: linear forms, regions and parametrized monomials."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

NSLOTS = 10
VAR_NAMES = ("u", "w")


@dataclass(frozen=True)
class LinForm:
    """Integer linear form ``sum c_r a_r + const`` over a1..a10."""

    coeffs: tuple[int, ...] = (0,) * NSLOTS
    const: int = 0

    def __post_init__(self):
        if len(self.coeffs) != NSLOTS:
            raise ValueError(f"LinForm needs {NSLOTS} coefficients, got {len(self.coeffs)}")

    @classmethod
    def of(cls, terms: Mapping[int, int] | None = None, const: int = 0) -> "LinForm":
        """Build from a 1-based ``{slot: coeff}`` map."""
        c = [0] * NSLOTS
        for k, v in (terms or {}).items():
            c[k - 1] += v
        return cls(tuple(c), const)

    def __call__(self, A: Sequence[int]) -> int:
        return sum(c * a for c, a in zip(self.coeffs, A) if c) + self.const

    def __add__(self, other: "LinForm") -> "LinForm":
        return LinForm(tuple(x + y for x, y in zip(self.coeffs, other.coeffs)), self.const + other.const)

    def __neg__(self) -> "LinForm":
        return LinForm(tuple(-x for x in self.coeffs), -self.const)

    def __sub__(self, other: "LinForm") -> "LinForm":
        return self + (-other)

    def shift(self, k: int) -> "LinForm":
        return LinForm(self.coeffs, self.const + k)

    def permuted(self, perm: Sequence[int]) -> "LinForm":
        """Coefficient of slot r moves to slot ``perm[r]`` (0-based)."""
        c = [0] * NSLOTS
        for r, x in enumerate(self.coeffs):
            c[perm[r]] += x
        return LinForm(tuple(c), self.const)

    def __str__(self) -> str:
        return render_linear([(f"a{r + 1}", c) for r, c in enumerate(self.coeffs)], self.const)


def render_linear(named: Sequence[tuple[str, int]], const: int = 0) -> str:
    parts = []
    for name, c in named:
        if not c:
            continue
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        parts.append(f"{sign}{'' if mag == 1 else mag}{name}")
    if const or not parts:
        parts.append(f"{'-' if const < 0 else '+'}{abs(const)}")
    s = "".join(parts)
    return s[1:] if s.startswith("+") else s


@dataclass(frozen=True)
class Inequality:
    """``form >= 0``; ``lhs``/``rhs`` keep the written shape for display."""

    form: LinForm
    text: str = field(default="", compare=False)

    def holds(self, A: Sequence[int]) -> bool:
        return self.form(A) >= 0

    def strict(self, A: Sequence[int]) -> bool:
        return self.form(A) > 0

    def __str__(self) -> str:
        return self.text or f"{self.form} >= 0"


@dataclass(frozen=True)
class Region:
    inequalities: tuple[Inequality, ...]

    def __post_init__(self):
        if not self.inequalities:
            raise ValueError("region needs at least one inequality")

    def __len__(self) -> int:
        return len(self.inequalities)

    def matrix(self) -> tuple[list[tuple[int, ...]], list[int]]:
        return [q.form.coeffs for q in self.inequalities], [q.form.const for q in self.inequalities]

    def __str__(self) -> str:
        return " ; ".join(map(str, self.inequalities))


@dataclass(frozen=True)
class SumVar:
    name: str
    bounds: tuple[LinForm, ...]

    def __post_init__(self):
        if self.name not in VAR_NAMES:
            raise ValueError(f"summation variable must be one of {VAR_NAMES}, got {self.name!r}")
        if not self.bounds:
            raise ValueError(f"variable {self.name} has no bound")

    def upper(self, A: Sequence[int]) -> int:
        return min(b(A) for b in self.bounds)


@dataclass(frozen=True)
class CoeffFactor:
    """``(-1)^var [top(A) + var; var]``; ``top`` already includes the -1."""

    var: str
    top: LinForm

    @property
    def bracket_form(self) -> LinForm:
        """The form L with bracket top written ``L - 1 + var``."""
        return self.top.shift(1)


@dataclass(frozen=True)
class ExponentExpr:
    base: LinForm
    var_coeffs: tuple[tuple[str, int], ...] = ()

    def __call__(self, A: Sequence[int], assignment: Mapping[str, int]) -> int:
        return self.base(A) + sum(c * assignment[v] for v, c in self.var_coeffs)

    def __str__(self) -> str:
        named = [(f"a{r + 1}", c) for r, c in enumerate(self.base.coeffs)] + list(self.var_coeffs)
        return render_linear(named, self.base.const)


@dataclass(frozen=True)
class CaseSpec:
    id: str = field(compare=False)
    vars: tuple[SumVar, ...]
    factors: tuple[CoeffFactor, ...]
    pattern: tuple[tuple[int, ExponentExpr], ...]
    region: Region

    def var(self, name: str) -> SumVar:
        for v in self.vars:
            if v.name == name:
                return v
        raise KeyError(name)

    def pattern_text(self) -> str:
        return " ".join(f"e{i}^({e})" for i, e in self.pattern)


@dataclass(frozen=True)
class CaseTable:
    entries: tuple[CaseSpec, ...]
    provenance: Mapping[str, str] = field(default_factory=dict, compare=False)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    @property
    def ids(self) -> list[str]:
        return [c.id for c in self.entries]

    def get(self, case_id: str) -> CaseSpec:
        for c in self.entries:
            if c.id == case_id:
                return c
        raise KeyError(f"unknown case id {case_id!r}")

    def one_variable(self) -> list[CaseSpec]:
        return [c for c in self.entries if len(c.vars) == 1]
