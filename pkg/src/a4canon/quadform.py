"""Integral linear and quadratic forms, and a bounded weak-positivity search.

The built-in forms are the degree bookkeeping of the case-1 proofs: the
v-degree of a PBW coefficient is ``-L(x) - Q(x)`` in auxiliary counting
variables, so ``L >= 0`` on a region plus weak positivity of ``Q`` gives
the congruence.
"""

from __future__ import annotations

import itertools
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import IO, Iterable, Mapping, Sequence

import numpy as np

from .cases.model import LinForm, Region
from .cases.grammar import parse_linform

MAIN_VARS = ("x1", "x2", "x3", "x4", "x5", "x6", "x7", "m", "s", "p")
P3_VARS = MAIN_VARS + ("w",)


class ArityError(ValueError):
    pass


def _vec(x: Sequence[int], n: int) -> list[int]:
    x = [int(v) for v in x]
    if len(x) != n:
        raise ArityError(f"expected {n} entries, got {len(x)}")
    return x


# -- linear forms --------------------------------------------------------------------

@dataclass(frozen=True)
class LinearForm:
    variables: tuple[str, ...]
    coeffs: tuple[int, ...]
    const: int = 0

    def __post_init__(self):
        if len(self.variables) != len(self.coeffs):
            raise ArityError("arity does not match coefficient count")

    @property
    def n(self) -> int:
        return len(self.variables)


def eval_linear(f: LinearForm, x: Sequence[int]) -> int:
    return sum(c * v for c, v in zip(f.coeffs, _vec(x, f.n))) + f.const


@dataclass(frozen=True)
class ParametricLinearForm:
    """``sum_k c_k(A) * t_k(x)`` where each ``t_k`` is an integer combination of the variables.

    Most terms are a single variable; the ``w``-form also has compound
    terms such as ``x7 - w``.  ``coefficients`` are the ``c_k``, which are
    what must be nonnegative on a region.
    """

    name: str
    variables: tuple[str, ...]
    terms: tuple[tuple[str, tuple[tuple[str, int], ...], LinForm], ...]

    @property
    def coefficients(self) -> list[tuple[str, LinForm]]:
        return [(label, c) for label, _, c in self.terms]

    def materialize(self, A: Sequence[int]) -> LinearForm:
        idx = {v: k for k, v in enumerate(self.variables)}
        out = [0] * len(self.variables)
        for _, combo, c in self.terms:
            val = c(A)
            for v, k in combo:
                out[idx[v]] += k * val
        return LinearForm(self.variables, tuple(out))


def _term(label: str, coeff: str) -> tuple[str, tuple[tuple[str, int], ...], LinForm]:
    combo = []
    for sign, name in re.findall(r"([+-]?)(\w+)", label):
        combo.append((name, -1 if sign == "-" else 1))
    return label, tuple(combo), parse_linform(coeff)


def _main_terms(**override: str):
    coeffs = {
        "x1": "a10-a8",
        "x2": "a8+a9-a5-a6",
        "x3": "a2-a6",
        "x4": "a5-a8",
        "x5": "a5+a6+a7-a1-a2-a3",
        "x6": "a1+a2-a5-a6",
        "x7": "a1-a5",
        "m": "a9-a6",
        "s": "a7-a3",
        "p": "a6+a7-a2-a3",
    }
    coeffs.update(override)
    return tuple(_term(v, coeffs[v]) for v in MAIN_VARS)


LM = ParametricLinearForm("LM", MAIN_VARS, _main_terms())
LP1 = ParametricLinearForm("LP1", MAIN_VARS, _main_terms(x2="a5+a6-a8-a9"))
LP2 = ParametricLinearForm("LP2", MAIN_VARS, _main_terms(x5="a1+a2+a3-a5-a6-a7"))
LP3 = ParametricLinearForm(
    "LP3",
    P3_VARS,
    (
        _term("x1", "a10-a8"),
        _term("x2", "a8+a9-a5-a6"),
        _term("x3", "a2+a5-a1-a6"),
        _term("x4", "a1-a8"),
        _term("x5", "a5+a6+a7-a1-a2-a3"),
        _term("x6", "a2-a6"),
        _term("x7-w", "a5-a1"),
        _term("m", "a9-a6"),
        _term("s", "a7-a3"),
        _term("p", "a6+a7-a2-a3"),
        _term("x4-x3-x6-w", "a5-a1"),
    ),
)


# -- quadratic forms -----------------------------------------------------------------

@dataclass(frozen=True)
class IntegralForm:
    """``sum d_i x_i^2 + sum_{i<j} q_ij x_i x_j``; ``off`` maps 0-based ``(i, j)``, ``i < j``."""

    variables: tuple[str, ...]
    diag: tuple[int, ...]
    off: Mapping[tuple[int, int], int] = field(default_factory=dict)

    def __post_init__(self):
        n = len(self.variables)
        if len(self.diag) != n:
            raise ArityError("diagonal length does not match arity")
        clean = {}
        for (i, j), c in self.off.items():
            if not (0 <= i < j < n):
                raise ValueError(f"off-diagonal index ({i}, {j}) must satisfy 0 <= i < j < {n}")
            if c:
                clean[i, j] = int(c)
        object.__setattr__(self, "off", dict(sorted(clean.items())))

    @property
    def n(self) -> int:
        return len(self.variables)

    @property
    def is_unit(self) -> bool:
        return all(d == 1 for d in self.diag)

    def gram2(self) -> np.ndarray:
        """Integer matrix ``G`` with ``x^T G x = 2 q(x)``."""
        G = np.diag(np.array(self.diag, dtype=np.int64) * 2)
        for (i, j), c in self.off.items():
            G[i, j] += c
            G[j, i] += c
        return G

    def table(self) -> list[tuple[str, str, int]]:
        return [(self.variables[i], self.variables[j], c) for (i, j), c in self.off.items()]


class UnitForm(IntegralForm):
    """Integral form with every diagonal coefficient equal to 1."""

    def __init__(self, variables: Sequence[str], off: Mapping[tuple[int, int], int]):
        super().__init__(tuple(variables), (1,) * len(variables), off)


def eval_form(q: IntegralForm, x: Sequence[int]) -> int:
    x = _vec(x, q.n)
    s = sum(d * v * v for d, v in zip(q.diag, x))
    return s + sum(c * x[i] * x[j] for (i, j), c in q.off.items())


eval_unit = eval_form


def form_from_polynomial(variables: Sequence[str], text: str) -> IntegralForm:
    """Parse ``x1^2 + 2x6p - x1x4 ...``; variable names are matched greedily."""
    variables = tuple(variables)
    idx = {v: k for k, v in enumerate(variables)}
    names = sorted(variables, key=len, reverse=True)
    name_re = "|".join(map(re.escape, names))
    diag = [0] * len(variables)
    off: dict[tuple[int, int], int] = {}
    s = "".join(text.split())
    for sign, num, mono in re.findall(r"([+-]?)(\d*)((?:(?:%s)(?:\^2)?)+)" % name_re, s):
        c = int(num or 1) * (-1 if sign == "-" else 1)
        factors = []
        for v, sq in re.findall(r"(%s)(\^2)?" % name_re, mono):
            factors += [idx[v]] * (2 if sq else 1)
        if len(factors) != 2:
            raise ValueError(f"not quadratic: {mono}")
        i, j = sorted(factors)
        if i == j:
            diag[i] += c
        else:
            off[i, j] = off.get((i, j), 0) + c
    return IntegralForm(variables, tuple(diag), off)


_QM_TEXT = (
    "x1^2+x2^2+x3^2+x4^2+x5^2+x6^2+x7^2+m^2+s^2+p^2"
    "+x2x4+x2m+x3x6+x3x7+x3s+x3p+x4m+x5x6+x5x7"
    "+x5s+x5p+x6x7+x6s+2x6p+x7p+sp-x1x4-x1m-x2x6"
    "-x2x7-x2s-x2p-x3x4-x3m-x4x7-x4p-x6m-ms"
)


def _qm() -> UnitForm:
    f = form_from_polynomial(MAIN_VARS, _QM_TEXT)
    return UnitForm(MAIN_VARS, f.off)


def _qp3() -> IntegralForm:
    # QM + 2(x4 - x3 - x6 - w)(x7 - w), expanded
    base = form_from_polynomial(P3_VARS, _QM_TEXT)
    extra = form_from_polynomial(
        P3_VARS, "2x4x7-2x4w-2x3x7+2x3w-2x6x7+2x6w-2x7w+2w^2"
    )
    off = dict(base.off)
    for k, c in extra.off.items():
        off[k] = off.get(k, 0) + c
    diag = tuple(a + b for a, b in zip(base.diag, extra.diag))
    return IntegralForm(P3_VARS, diag, off)


QM = _qm()
QP1 = _qm()
QP2 = _qm()
QP3 = _qp3()


def builtin_forms() -> dict[str, IntegralForm | ParametricLinearForm]:
    return {"QM": QM, "QP1": QP1, "QP2": QP2, "QP3": QP3, "LM": LM, "LP1": LP1, "LP2": LP2, "LP3": LP3}


# -- weak positivity -----------------------------------------------------------------

@dataclass
class PositivityVerdict:
    """Result of the bounded search over nonzero ``x`` in ``{0..bound}^n``.

    ``weakly_positive``: no such x has ``q(x) <= 0``; ``witness`` is the
    lexicographically smallest one that does.  ``nonnegative`` and
    ``negative_witness`` are the same for the weaker threshold ``q(x) < 0``.
    """

    weakly_positive: bool
    witness: tuple[int, ...] | None
    witness_value: int | None
    nonnegative: bool
    negative_witness: tuple[int, ...] | None
    search_bound: int

    def as_dict(self) -> dict:
        return {
            "weakly_positive": self.weakly_positive,
            "witness": list(self.witness) if self.witness else None,
            "witness_value": self.witness_value,
            "nonnegative": self.nonnegative,
            "negative_witness": list(self.negative_witness) if self.negative_witness else None,
            "search_bound": self.search_bound,
        }


def _box(k: int, bound: int) -> np.ndarray:
    """All points of ``{0..bound}^k`` in lexicographic order."""
    if k == 0:
        return np.zeros((1, 0), dtype=np.int64)
    return np.array(list(itertools.product(range(bound + 1), repeat=k)), dtype=np.int64)


def _quad_values(X: np.ndarray, G: np.ndarray) -> np.ndarray:
    return np.einsum("ij,jk,ik->i", X, G, X) // 2


def _scan_rows(args) -> tuple[tuple[int, int] | None, tuple[int, int] | None]:
    """First (row, col) with value <= 0 and first with value < 0 in a row range."""
    G, k, bound, lo, hi = args
    n = G.shape[0]
    X = _box(k, bound)
    Y = _box(n - k, bound)
    qx = _quad_values(X, G[:k, :k])
    qy = _quad_values(Y, G[k:, k:])
    C = G[:k, k:]
    # value of q(x, y) is qx + qy + (x C) . y
    min_qy = int(qy.min())
    first_le = first_lt = None
    chunk = max(1, 4_000_000 // len(Y))
    for start in range(lo, hi, chunk):
        stop = min(hi, start + chunk)
        L = X[start:stop] @ C
        # prune rows whose lower bound over the whole y-box is positive
        lb = qx[start:stop] + min_qy + bound * np.minimum(L, 0).sum(axis=1)
        rows = np.nonzero(lb <= 0)[0]
        if len(rows) == 0:
            continue
        vals = qx[start + rows][:, None] + qy[None, :] + L[rows] @ Y.T
        if start + rows[0] == 0:
            vals[0, 0] = 1  # the zero vector is excluded
        if first_le is None:
            hit = np.argwhere(vals <= 0)
            if len(hit):
                r, c = hit[0]
                first_le = (int(start + rows[r]), int(c))
        hit = np.argwhere(vals < 0)
        if len(hit):
            r, c = hit[0]
            first_lt = (int(start + rows[r]), int(c))
            break
    return first_le, first_lt


def weakly_positive(q: IntegralForm, bound: int = 6, jobs: int = 1) -> PositivityVerdict:
    """Exhaustive search for nonzero ``x`` in ``{0..bound}^n`` with ``q(x) <= 0``.

    The box is split into a leading and a trailing half; rows of the
    leading half whose lower bound is positive are skipped.  The reported
    witnesses are lexicographically smallest, whatever ``jobs`` is.
    """
    if bound < 1:
        raise ValueError("bound must be positive")
    n = q.n
    G = q.gram2()
    k = n // 2
    nrows = (bound + 1) ** k
    if jobs > 1 and nrows > 1:
        edges = np.linspace(0, nrows, jobs + 1).astype(int)
        parts = [(G, k, bound, int(a), int(b)) for a, b in zip(edges, edges[1:]) if b > a]
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(_scan_rows, parts))
    else:
        results = [_scan_rows((G, k, bound, 0, nrows))]
    le = next((r[0] for r in results if r[0] is not None), None)
    lt = next((r[1] for r in results if r[1] is not None), None)
    if le is None and lt is not None:
        le = lt

    def decode(rc):
        if rc is None:
            return None
        r, c = rc
        digits = []
        for idx, width in ((r, k), (c, n - k)):
            part = []
            for _ in range(width):
                idx, d = divmod(idx, bound + 1)
                part.append(d)
            digits += part[::-1]
        return tuple(digits)

    w = decode(le)
    wn = decode(lt)
    value = None
    if w is not None:
        value = eval_form(q, w)
        assert any(w) and value <= 0, "witness failed re-verification"
    if wn is not None:
        assert eval_form(q, wn) < 0, "negative witness failed re-verification"
    return PositivityVerdict(w is None, w, value, wn is None, wn, bound)


# -- region checks -------------------------------------------------------------------

@dataclass
class NonnegReport:
    holds: bool
    points_checked: int
    counterexamples: list[tuple[tuple[int, ...], str, int]]

    def as_dict(self) -> dict:
        return {
            "holds": self.holds,
            "points_checked": self.points_checked,
            "counterexamples": [
                {"point": list(A), "term": t, "value": v} for A, t, v in self.counterexamples
            ],
        }


def region_implies_L_nonneg(
    L: ParametricLinearForm,
    r: Region | None,
    max_entry: int,
    limit: int = 10,
) -> NonnegReport:
    """Check every coefficient of ``L`` is >= 0 at all points of ``{0..max_entry}^10`` in ``r``.

    ``r=None`` stands for an empty region: vacuously true.
    """
    if r is None:
        return NonnegReport(True, 0, [])
    axes = [np.arange(max_entry + 1, dtype=np.int64)] * 10
    pts = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, 10)
    M, c = r.matrix()
    inside = np.all(pts @ np.array(M, dtype=np.int64).T + np.array(c) >= 0, axis=1)
    pts = pts[inside]
    labels = [lab for lab, _ in L.coefficients]
    K = np.array([f.coeffs for _, f in L.coefficients], dtype=np.int64)
    k0 = np.array([f.const for _, f in L.coefficients], dtype=np.int64)
    vals = pts @ K.T + k0
    bad = np.argwhere(vals < 0)
    examples = [
        (tuple(int(a) for a in pts[i]), labels[j], int(vals[i, j])) for i, j in bad[:limit]
    ]
    return NonnegReport(len(bad) == 0, len(pts), examples)


# -- form files ----------------------------------------------------------------------

class FormFileError(ValueError):
    pass


def parse_form(lines: Iterable[str]) -> UnitForm:
    """``n=<arity>`` followed by ``q i j <coeff>`` lines (1-based, ``i != j``)."""
    n = None
    off: dict[tuple[int, int], int] = {}
    for lineno, raw in enumerate(lines, 1):
        text = raw.split("#", 1)[0].strip()
        if not text:
            continue
        if n is None:
            m = re.fullmatch(r"n\s*=\s*(\d+)", text)
            if not m or int(m.group(1)) < 1:
                raise FormFileError(f"line {lineno}: expected 'n=<arity>'")
            n = int(m.group(1))
            continue
        parts = text.split()
        if len(parts) != 4 or parts[0] != "q":
            raise FormFileError(f"line {lineno}: expected 'q i j <coeff>'")
        try:
            i, j, c = int(parts[1]), int(parts[2]), int(parts[3])
        except ValueError:
            raise FormFileError(f"line {lineno}: non-integer entry") from None
        if not (1 <= i <= n and 1 <= j <= n) or i == j:
            raise FormFileError(f"line {lineno}: indices must be distinct and in 1..{n}")
        key = (min(i, j) - 1, max(i, j) - 1)
        off[key] = off.get(key, 0) + c
    if n is None:
        raise FormFileError("missing 'n=<arity>' line")
    return UnitForm(tuple(f"x{k + 1}" for k in range(n)), off)


def load_form(source: str | IO) -> UnitForm:
    if isinstance(source, str):
        with open(source, encoding="utf-8") as fh:
            return parse_form(fh)
    return parse_form(source)
