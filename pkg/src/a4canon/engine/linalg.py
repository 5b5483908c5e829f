"""Exact solving of small linear systems with Laurent-polynomial entries.

Strategy: pick pivot columns by a rank computation modulo a large prime
at one value of ``v``, solve the square system at many values of ``v``
modulo the prime, interpolate each unknown as a Laurent polynomial and
finally certify the candidate by exact recombination.  A failed
certification doubles the number of interpolation points.
"""

from __future__ import annotations

from typing import Sequence

from ..laurent import LaurentPoly

PRIME = (1 << 61) - 1
_HALF = PRIME // 2


def eval_mod(p: LaurentPoly, t: int, tinv: int) -> int:
    acc = 0
    for e, c in p._terms.items():
        acc += c * (pow(t, e, PRIME) if e >= 0 else pow(tinv, -e, PRIME))
    return acc % PRIME


def rank_columns(rows: Sequence[Sequence[int]]) -> list[int]:
    """Greedy list of independent column indices of an integer matrix mod PRIME."""
    if not rows:
        return []
    m = [list(r) for r in rows]
    nrows, ncols = len(m), len(m[0])
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if m[i][col] % PRIME), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = pow(m[r][col], PRIME - 2, PRIME)
        row_r = [(x * inv) % PRIME for x in m[r]]
        m[r] = row_r
        for i in range(r + 1, nrows):
            f = m[i][col] % PRIME
            if f:
                row_i = m[i]
                m[i] = [(a - f * b) % PRIME for a, b in zip(row_i, row_r)]
        pivots.append(col)
        r += 1
    return pivots


def invert_mod(mat: list[list[int]]) -> list[list[int]] | None:
    n = len(mat)
    a = [list(row) + [1 if i == j else 0 for j in range(n)] for i, row in enumerate(mat)]
    for col in range(n):
        piv = next((i for i in range(col, n) if a[i][col] % PRIME), None)
        if piv is None:
            return None
        a[col], a[piv] = a[piv], a[col]
        inv = pow(a[col][col], PRIME - 2, PRIME)
        rc = [(x * inv) % PRIME for x in a[col]]
        a[col] = rc
        for i in range(n):
            if i != col:
                f = a[i][col]
                if f:
                    ri = a[i]
                    a[i] = [(x - f * y) % PRIME for x, y in zip(ri, rc)]
    return [row[n:] for row in a]


def interpolate(ts: Sequence[int], values: Sequence[int], low: int) -> LaurentPoly:
    """Laurent polynomial ``p`` with exponents in ``[low, low + len(ts))`` and p(t_k) = values[k]."""
    n = len(ts)
    # g(t) = t^{-low} p(t) is a polynomial of degree < n
    ys = []
    for t, y in zip(ts, values):
        shift = pow(t, -low, PRIME) if low <= 0 else pow(pow(t, PRIME - 2, PRIME), low, PRIME)
        ys.append((y * shift) % PRIME)
    # Newton divided differences
    coef = list(ys)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            num = (coef[i] - coef[i - 1]) % PRIME
            den = (ts[i] - ts[i - j]) % PRIME
            coef[i] = num * pow(den, PRIME - 2, PRIME) % PRIME
    # expand Newton form into monomial coefficients
    poly = [0] * n
    for k in range(n - 1, -1, -1):
        # poly = poly * (t - ts[k]) + coef[k]
        new = [0] * n
        for d in range(n - 1):
            if poly[d]:
                new[d + 1] = (new[d + 1] + poly[d]) % PRIME
                new[d] = (new[d] - poly[d] * ts[k]) % PRIME
        new[0] = (new[0] + coef[k]) % PRIME
        poly = new
    terms = {}
    for d, c in enumerate(poly):
        if c:
            terms[d + low] = c - PRIME if c > _HALF else c
    return LaurentPoly(terms)


class ModularSolver:
    """Solves ``sum_i c_i * row_i = target`` for a fixed list of rows.

    ``rows`` are dicts column -> LaurentPoly; the caller supplies the exact
    certification step because it owns the row objects.
    """

    def __init__(self, rows: Sequence[dict], columns: Sequence):
        self.rows = rows
        self.n = len(rows)
        self._points: list[int] = []
        self._inverses: list[list[list[int]]] = []
        t0 = 1_000_003
        t0inv = pow(t0, PRIME - 2, PRIME)
        mat = [[eval_mod(r.get(col, _ZERO), t0, t0inv) for col in columns] for r in rows]
        piv = rank_columns(mat)
        if len(piv) < self.n:
            raise ArithmeticError("rows are linearly dependent")
        self.pivot_columns = [columns[k] for k in piv]

    def _ensure_points(self, count: int) -> None:
        t = 2 + (self._points[-1] - 1 if self._points else 0)
        while len(self._points) < count:
            tinv = pow(t, PRIME - 2, PRIME)
            mat = [[eval_mod(r.get(col, _ZERO), t, tinv) for col in self.pivot_columns] for r in self.rows]
            inv = invert_mod(mat)
            if inv is not None:
                self._points.append(t)
                self._inverses.append(inv)
            t += 1

    def solve(self, target: dict, npoints: int) -> list[LaurentPoly]:
        self._ensure_points(npoints)
        values = [[0] * npoints for _ in range(self.n)]
        for k in range(npoints):
            t = self._points[k]
            tinv = pow(t, PRIME - 2, PRIME)
            b = [eval_mod(target.get(col, _ZERO), t, tinv) for col in self.pivot_columns]
            inv = self._inverses[k]
            # c S = b  =>  c = b S^{-1}
            for i in range(self.n):
                acc = 0
                for j, bj in enumerate(b):
                    if bj:
                        acc += bj * inv[j][i]
                values[i][k] = acc % PRIME
        ts = self._points[:npoints]
        low = -(npoints // 2)
        return [interpolate(ts, values[i], low) for i in range(self.n)]


_ZERO = LaurentPoly()
