"""Parser for the line-oriented case-file format.

::

    case <id>
    var <name> <= <linform> [, <linform> ...]
    coeff <name> top= <linform>
    term e<i>^(<expexpr>) ...
    region <linform> >= <linform> ; ...
    end

``#`` starts a comment.  ``term`` and ``region`` lines may repeat inside
one case; their contents are appended in order.
"""

from __future__ import annotations

import hashlib
import re
from importlib import resources
from typing import IO, Iterable

from ..engine.words import LETTERS
from .model import (
    VAR_NAMES,
    CaseSpec,
    CaseTable,
    CoeffFactor,
    ExponentExpr,
    Inequality,
    LinForm,
    Region,
    SumVar,
)


class CaseFileError(ValueError):
    """Malformed case file; carries the 1-based line number when known."""

    def __init__(self, message: str, line: int | None = None, case_id: str | None = None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if case_id is not None:
            where.append(f"case {case_id}")
        super().__init__(f"{', '.join(where)}: {message}" if where else message)
        self.line = line
        self.case_id = case_id


_ID_RE = re.compile(r"[A-Za-z0-9][A-Za-z0-9._*-]*")
_PIECE_RE = re.compile(r"[+-]?[^+-]+")
_SLOT_RE = re.compile(r"(?:(\d+)\*?)?a(10|[1-9])")
_VAR_RE = re.compile(r"(?:(\d+)\*?)?([uw])")
_FACTOR_RE = re.compile(r"e(\d+)\^\(([^()]*)\)")


def parse_linear(text: str, allow_vars: bool = False) -> tuple[LinForm, dict[str, int]]:
    s = "".join(text.split())
    if not s:
        raise ValueError("empty linear form")
    pieces = _PIECE_RE.findall(s)
    if "".join(pieces) != s:
        raise ValueError(f"malformed linear form {text!r}")
    coeffs = [0] * 10
    const = 0
    var_coeffs: dict[str, int] = {}
    for p in pieces:
        sign = -1 if p[0] == "-" else 1
        body = p[1:] if p[0] in "+-" else p
        if body.isdigit():
            const += sign * int(body)
            continue
        m = _SLOT_RE.fullmatch(body)
        if m:
            coeffs[int(m.group(2)) - 1] += sign * int(m.group(1) or 1)
            continue
        m = _VAR_RE.fullmatch(body)
        if m and allow_vars:
            var_coeffs[m.group(2)] = var_coeffs.get(m.group(2), 0) + sign * int(m.group(1) or 1)
            continue
        raise ValueError(f"bad term {p!r} in {text!r}")
    return LinForm(tuple(coeffs), const), {k: v for k, v in var_coeffs.items() if v}


def parse_linform(text: str) -> LinForm:
    return parse_linear(text)[0]


def parse_pattern(text: str) -> list[tuple[int, ExponentExpr]]:
    out = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _FACTOR_RE.match(text, pos)
        if not m:
            raise ValueError(f"bad monomial factor at {text[pos:pos + 20]!r}")
        i = int(m.group(1))
        if i not in LETTERS:
            raise ValueError(f"generator e{i} out of range")
        base, vc = parse_linear(m.group(2), allow_vars=True)
        out.append((i, ExponentExpr(base, tuple(sorted(vc.items())))))
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    if not out:
        raise ValueError("empty monomial pattern")
    return out


def parse_region_line(text: str) -> list[Inequality]:
    out = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            raise ValueError("empty inequality")
        if chunk.count(">=") != 1 or "<" in chunk or "=" in chunk.replace(">=", ""):
            raise ValueError(f"inequality must have the form '<linform> >= <linform>': {chunk!r}")
        lhs, rhs = chunk.split(">=")
        form = parse_linform(lhs) - parse_linform(rhs)
        out.append(Inequality(form, f"{''.join(lhs.split())} >= {''.join(rhs.split())}"))
    return out


class _Builder:
    def __init__(self, case_id: str, line: int):
        self.id = case_id
        self.line = line
        self.vars: list[SumVar] = []
        self.factors: list[CoeffFactor] = []
        self.pattern: list[tuple[int, ExponentExpr]] = []
        self.region: list[Inequality] = []

    def build(self) -> CaseSpec:
        def fail(msg):
            raise CaseFileError(msg, self.line, self.id)

        names = [v.name for v in self.vars]
        if len(set(names)) != len(names):
            fail("summation variable declared twice")
        if len(self.vars) > 2:
            fail("at most two summation variables")
        fnames = [f.var for f in self.factors]
        if sorted(fnames) != sorted(names):
            fail("each summation variable needs exactly one coeff line")
        if not self.pattern:
            fail("missing term line")
        if not self.region:
            fail("missing region line")
        for _, e in self.pattern:
            for v, _ in e.var_coeffs:
                if v not in names:
                    fail(f"exponent uses undeclared variable {v}")
        return CaseSpec(
            self.id,
            tuple(self.vars),
            tuple(sorted(self.factors, key=lambda f: names.index(f.var))),
            tuple(self.pattern),
            Region(tuple(self.region)),
        )


def parse_cases(lines: Iterable[str], source: str = "<string>") -> CaseTable:
    entries: list[CaseSpec] = []
    seen: set[str] = set()
    cur: _Builder | None = None
    raw: list[str] = []
    for lineno, line in enumerate(lines, 1):
        raw.append(line)
        text = line.split("#", 1)[0].strip()
        if not text:
            continue
        keyword, _, rest = text.partition(" ")
        rest = rest.strip()
        try:
            if keyword == "case":
                if cur is not None:
                    raise ValueError(f"case {cur.id} not closed with 'end'")
                if not _ID_RE.fullmatch(rest):
                    raise ValueError(f"bad case id {rest!r}")
                if rest in seen:
                    raise CaseFileError(f"duplicate case id {rest}", lineno, rest)
                cur = _Builder(rest, lineno)
                continue
            if cur is None:
                raise ValueError(f"'{keyword}' outside a case block")
            if keyword == "end":
                if rest:
                    raise ValueError("unexpected text after 'end'")
                spec = cur.build()
                entries.append(spec)
                seen.add(spec.id)
                cur = None
            elif keyword == "var":
                m = re.fullmatch(r"(\w+)\s*<=\s*(.+)", rest)
                if not m or m.group(1) not in VAR_NAMES:
                    raise ValueError(f"bad var line {rest!r}")
                bounds = tuple(parse_linform(b) for b in m.group(2).split(","))
                cur.vars.append(SumVar(m.group(1), bounds))
            elif keyword == "coeff":
                m = re.fullmatch(r"(\w+)\s+top=\s*(.+)", rest)
                if not m or m.group(1) not in VAR_NAMES:
                    raise ValueError(f"bad coeff line {rest!r}")
                if m.group(1) in {f.var for f in cur.factors}:
                    raise ValueError(f"second coeff line for {m.group(1)}")
                cur.factors.append(CoeffFactor(m.group(1), parse_linform(m.group(2))))
            elif keyword == "term":
                cur.pattern.extend(parse_pattern(rest))
            elif keyword == "region":
                cur.region.extend(parse_region_line(rest))
            else:
                raise ValueError(f"unknown keyword {keyword!r}")
        except CaseFileError:
            raise
        except ValueError as exc:
            raise CaseFileError(str(exc), lineno, cur.id if cur else None) from None
    if cur is not None:
        raise CaseFileError("missing 'end' at end of file", cur.line, cur.id)
    if not entries:
        raise CaseFileError("no cases found")
    digest = hashlib.sha256("".join(raw).encode()).hexdigest()
    return CaseTable(tuple(entries), {"source": source, "sha256": digest})


def load_cases(source: IO | str | bytes) -> CaseTable:
    """Parse a case table from a text/byte stream, a path, or raw bytes."""
    if isinstance(source, bytes):
        return parse_cases(source.decode("utf-8").splitlines(keepends=True), "<bytes>")
    if isinstance(source, str):
        with open(source, encoding="utf-8") as fh:
            return parse_cases(fh, source)
    data = source.read()
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    return parse_cases(data.splitlines(keepends=True), getattr(source, "name", "<stream>"))


def bundled_text() -> str:
    return resources.files("a4canon").joinpath("data/cases.txt").read_text(encoding="utf-8")


_BUNDLED: CaseTable | None = None


def load_bundled() -> CaseTable:
    global _BUNDLED
    if _BUNDLED is None:
        _BUNDLED = parse_cases(bundled_text().splitlines(keepends=True), "bundled:cases.txt")
    return _BUNDLED
