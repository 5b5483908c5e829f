"""End-to-end verification of case-table entries against the canonical-basis criterion.

For a case and a point A: check the region, instantiate the element,
expand it in the PBW basis, and test ``element == E^A (mod v^-1 L)``
together with bar-invariance of the coefficients.
"""

from __future__ import annotations

import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .cases import (
    CaseSpec,
    CaseTable,
    SymmetryConfig,
    TranscriptionError,
    apply_config,
    index_height,
    instantiate,
    region_contains,
    sample_points,
)
from .cases.ops import violated
from .engine.pbw import (
    PINNED,
    CongruenceReport,
    Convention,
    PBWVector,
    express_in_pbw,
    height_cap,
    lattice_verdict,
)
from .engine.straighten import straightener
from .engine.words import HeightCapExceeded, PairTable, WordSum, eval_divided_word, serre_holds

DEFAULT_SAMPLES = 2
DEFAULT_MAX_ENTRY = 3
DEFAULT_MAX_HEIGHT = 12
DEFAULT_A4_CAP = 1


@dataclass
class VerificationReport:
    case_id: str
    point: tuple[int, ...] | None
    region_ok: bool
    bar_invariant: bool
    term_count: int
    congruence: CongruenceReport | None
    elapsed: float = 0.0
    skipped: str | None = None
    error: str | None = None

    @property
    def passed(self) -> bool:
        return (
            self.skipped is None
            and self.error is None
            and self.region_ok
            and self.bar_invariant
            and self.congruence is not None
            and self.congruence.congruent_to_target
        )

    @property
    def status(self) -> str:
        if self.skipped is not None:
            return "skip"
        return "pass" if self.passed else "fail"

    def as_dict(self, timing: bool = False) -> dict:
        d = {
            "case": self.case_id,
            "point": list(self.point) if self.point is not None else None,
            "status": self.status,
            "region_ok": self.region_ok,
            "bar_invariant": self.bar_invariant,
            "term_count": self.term_count,
            "congruence": self.congruence.as_dict() if self.congruence else None,
            "skipped": self.skipped,
            "error": self.error,
        }
        if timing:
            d["elapsed"] = round(self.elapsed, 6)
        return d

    def text(self) -> str:
        pt = ",".join(map(str, self.point)) if self.point is not None else "-"
        line = f"{self.status.upper():4} {self.case_id:8} A=({pt}) terms={self.term_count}"
        if self.skipped:
            return f"{line} [{self.skipped}]"
        if self.error:
            return f"{line} error: {self.error}"
        if not self.region_ok:
            return f"{line} region violated"
        if not self.bar_invariant:
            line += " coefficients not bar-invariant"
        if self.congruence and not self.congruence.congruent_to_target:
            offs = "; ".join(f"E^({','.join(map(str, B))}): {c}" for B, c in self.congruence.offending[:3])
            line += f" offending {offs}"
        return line


def _bar_fixed(terms) -> bool:
    return all(c.bar() == c for c, _ in terms)


def bar_invariant(c: CaseSpec, A: Sequence[int]) -> bool:
    """All instantiated coefficients are fixed by v -> v^-1 (raises outside the region)."""
    return _bar_fixed(instantiate(c, A))


def expand_terms(terms, conv: Convention = PINNED, engine: str = "straighten") -> PBWVector:
    """PBW expansion of ``sum coef * divided word``."""
    if engine == "straighten":
        s = straightener(conv)
        pv = PBWVector()
        for coef, dw in terms:
            pv = pv + s.expand_divided_word(dw).scale(coef)
        return pv
    if engine == "words":
        x = WordSum()
        for coef, dw in terms:
            x = x + eval_divided_word(dw, conv.twist).scale(coef)
        return express_in_pbw(x, conv)
    raise ValueError(f"unknown engine {engine!r}")


def verify_case_at(
    c: CaseSpec,
    A: Sequence[int],
    conv: Convention = PINNED,
    engine: str = "straighten",
) -> VerificationReport:
    A = tuple(int(a) for a in A)
    t0 = time.perf_counter()
    if not region_contains(c.region, A):
        bad = "; ".join(map(str, violated(c.region, A)))
        return VerificationReport(c.id, A, False, False, 0, None, error=f"outside region: {bad}")
    if index_height(A) > height_cap():
        return VerificationReport(c.id, A, True, False, 0, None, skipped=f"height {index_height(A)} above cap")
    try:
        terms = instantiate(c, A)
    except TranscriptionError as exc:
        return VerificationReport(c.id, A, True, False, 0, None, time.perf_counter() - t0, error=str(exc))
    bar = _bar_fixed(terms)
    try:
        pv = expand_terms(terms, conv, engine)
    except HeightCapExceeded as exc:
        return VerificationReport(c.id, A, True, bar, len(terms), None, skipped=str(exc))
    verdict = lattice_verdict(pv, A)
    return VerificationReport(c.id, A, True, bar, len(terms), verdict, time.perf_counter() - t0)


def case_samples(
    c: CaseSpec,
    samples: int,
    max_entry: int,
    max_height: int,
    a4_cap: int | None = DEFAULT_A4_CAP,
    spread: bool = False,
) -> list[tuple[int, ...]]:
    """Nonzero sample points of the case's region (deterministic order)."""
    pts = sample_points(c.region, max_entry, max_height, samples + 1, a4_cap, spread)
    return [A for A in pts if any(A)][:samples]


def verify_case(
    c: CaseSpec,
    samples: int = DEFAULT_SAMPLES,
    max_entry: int = DEFAULT_MAX_ENTRY,
    max_height: int = DEFAULT_MAX_HEIGHT,
    a4_cap: int | None = DEFAULT_A4_CAP,
    conv: Convention = PINNED,
    engine: str = "straighten",
    spread: bool = False,
) -> list[VerificationReport]:
    if samples <= 0:
        return []
    pts = case_samples(c, samples, max_entry, max_height, a4_cap, spread)
    reports = [verify_case_at(c, A, conv, engine) for A in pts]
    for _ in range(samples - len(pts)):
        reports.append(
            VerificationReport(c.id, None, True, False, 0, None, skipped=f"no further nonzero sample with height <= {max_height}")
        )
    return reports


@dataclass
class ConventionRecord:
    accepted: Convention
    equivalent: list[Convention]
    evidence: list[dict]
    sample_points: list[tuple[int, ...]]

    def as_dict(self) -> dict:
        return {
            "accepted": self.accepted.label(),
            "equivalent": [c.label() for c in self.equivalent],
            "evidence": self.evidence,
            "sample_points": [list(p) for p in self.sample_points],
        }


@dataclass
class BatchSummary:
    counts: dict[str, dict[str, int]] = field(default_factory=dict)
    reports: list[VerificationReport] = field(default_factory=list)
    pinning: ConventionRecord | None = None

    @property
    def failures(self) -> list[VerificationReport]:
        return [r for r in self.reports if r.status == "fail"]

    def total(self, status: str) -> int:
        return sum(c[status] for c in self.counts.values())

    def as_dict(self) -> dict:
        return {
            "totals": {s: self.total(s) for s in ("pass", "fail", "skip")},
            "counts": self.counts,
            "failures": [r.as_dict() for r in self.failures],
            "pinning": self.pinning.as_dict() if self.pinning else None,
        }

    def text(self) -> str:
        lines = [r.text() for r in self.reports]
        lines.append(
            f"total: {self.total('pass')} pass, {self.total('fail')} fail, {self.total('skip')} skip "
            f"over {len(self.counts)} cases"
        )
        if self.pinning:
            lines.append(f"convention: {self.pinning.accepted.label()}")
        return "\n".join(lines)

    def json(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True)


def _verify_job(args) -> list[VerificationReport]:
    return verify_case(*args)


def verify_all(
    t: CaseTable | Iterable[CaseSpec],
    samples: int = DEFAULT_SAMPLES,
    max_entry: int = DEFAULT_MAX_ENTRY,
    max_height: int = DEFAULT_MAX_HEIGHT,
    a4_cap: int | None = DEFAULT_A4_CAP,
    symmetry: SymmetryConfig | None = None,
    conv: Convention = PINNED,
    engine: str = "straighten",
    jobs: int = 1,
    spread: bool = False,
) -> BatchSummary:
    """Verify every entry (and its symmetry image when ``symmetry`` is given), in table order."""
    specs = list(t)
    if symmetry is not None:
        specs = [x for c in specs for x in (c, apply_config(c, symmetry))]
    jobs_args = [(c, samples, max_entry, max_height, a4_cap, conv, engine, spread) for c in specs]
    if jobs > 1 and len(specs) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(_verify_job, jobs_args))
    else:
        results = [_verify_job(a) for a in jobs_args]
    summary = BatchSummary()
    for c, reports in zip(specs, results):
        cnt = summary.counts.setdefault(c.id, {"pass": 0, "fail": 0, "skip": 0})
        for r in reports:
            cnt[r.status] += 1
        summary.reports.extend(reports)
    return summary


def default_jobs() -> int:
    return max(1, len(os.sched_getaffinity(0)) if hasattr(os, "sched_getaffinity") else (os.cpu_count() or 1))


# -- convention pinning ------------------------------------------------------------

class ConventionError(RuntimeError):
    """Zero or several inequivalent conventions pass the pinning checks."""

    def __init__(self, message: str, evidence: list[dict]):
        super().__init__(message + "\n" + json.dumps(evidence, indent=1))
        self.evidence = evidence


def pin_conventions(
    monomial: CaseSpec | None = None,
    samples: int = 3,
    max_entry: int = 2,
    max_height: int = 12,
    check_serre: bool = True,
    pairing: PairTable | None = None,
) -> ConventionRecord:
    """Find the realization conventions under which Serre holds and the reference monomial is canonical.

    Combinations that pass and give identical PBW expansions at every sample
    point are treated as one convention (they differ only in how the algebra
    is embedded into words); the representative has ``twist=+1``.
    """
    if monomial is None:
        from .cases import load_bundled

        monomial = load_bundled().get("M1.1")
    pts = case_samples(monomial, samples, max_entry, max_height, DEFAULT_A4_CAP)
    if len(pts) < samples:
        raise ConventionError(f"only {len(pts)} sample points available", [])
    evidence: list[dict] = []
    for side in ("left", "right"):
        passing: list[tuple[Convention, list[PBWVector]]] = []
        for twist in (1, -1):
            for c in (-1, 1):
                conv = Convention(twist, c, side)
                serre = serre_holds(twist, pairing) if check_serre else None
                if serre is False:
                    evidence.append({"convention": conv.label(), "serre": False, "congruent": None})
                    continue
                expansions = [expand_terms(instantiate(monomial, A), conv) for A in pts]
                good = sum(lattice_verdict(pv, A).congruent_to_target for pv, A in zip(expansions, pts))
                evidence.append({"convention": conv.label(), "serre": serre, "congruent": f"{good}/{len(pts)}"})
                if good == len(pts):
                    passing.append((conv, expansions))
        if passing:
            break
    if not passing:
        raise ConventionError("no convention passes the pinning checks", evidence)
    classes: list[list[tuple[Convention, list[PBWVector]]]] = []
    for item in passing:
        for cls in classes:
            if cls[0][1] == item[1]:
                cls.append(item)
                break
        else:
            classes.append([item])
    if len(classes) > 1:
        raise ConventionError("several inequivalent conventions pass; ambiguous", evidence)
    members = sorted((conv for conv, _ in classes[0]), key=lambda cv: (-cv.twist, cv.c))
    return ConventionRecord(members[0], members[1:], evidence, pts)


# -- probes --------------------------------------------------------------------------

def probe_points(c: CaseSpec, samples: int = 3, max_entry: int = DEFAULT_MAX_ENTRY, max_height: int = DEFAULT_MAX_HEIGHT) -> list[tuple[int, ...]]:
    """Strict-first samples followed by slot-covering samples, without repeats."""
    pts = case_samples(c, samples, max_entry, max_height)
    for A in case_samples(c, samples, max_entry, max_height, spread=True):
        if A not in pts:
            pts.append(A)
    return pts


def mutant_reports(original: CaseSpec, mutant: CaseSpec, samples: int = 3) -> list[VerificationReport]:
    """Verify ``mutant`` at the original's probe points and at its own samples.

    A corrupted inequality shows up as region violations at the original
    points; a corrupted exponent shows up as a failed congruence or an
    inconsistent instantiation.
    """
    pts = probe_points(original, samples)
    for A in probe_points(mutant, samples):
        if A not in pts:
            pts.append(A)
    return [verify_case_at(mutant, A) for A in pts]


def u_zero_terms(c: CaseSpec, A: Sequence[int]):
    """The summand of a one-variable case at ``u = 0`` (coefficient 1)."""
    if len(c.vars) != 1:
        raise ValueError("u_zero_terms needs a one-variable case")
    from .cases.ops import coefficient
    from .engine.words import DividedWord

    name = c.vars[0].name
    asg = {name: 0}
    dw = DividedWord(tuple((i, e(A, asg)) for i, e in c.pattern))
    return [(coefficient(c, A, asg), dw)]


def degeneration_points(c: CaseSpec, count: int = 2, max_entry: int = DEFAULT_MAX_ENTRY, max_height: int = DEFAULT_MAX_HEIGHT) -> list[tuple[int, ...]]:
    """Sample points where the bracket-top form vanishes and the sum has more than one term."""
    form = c.factors[0].bracket_form
    out = []
    for A in sample_points(c.region, max_entry, max_height, 400, DEFAULT_A4_CAP):
        if form(A) == 0 and c.vars[0].upper(A) >= 1:
            out.append(A)
            if len(out) == count:
                break
    return out


def degeneration_holds(c: CaseSpec, A: Sequence[int], conv: Convention = PINNED) -> bool:
    """At a point where the bracket top vanishes, the element equals its ``u = 0`` monomial."""
    return expand_terms(instantiate(c, A), conv) == expand_terms(u_zero_terms(c, A), conv)


def outside_region_probe(c: CaseSpec, count: int = 3, max_entry: int = 2, max_height: int = 10) -> list[VerificationReport]:
    """Informational: run the congruence test at points just outside the region.

    Nothing is concluded from the outcome; the table claims nothing there.
    """
    from .cases.model import Inequality, Region
    from .engine.pbw import index_height as _h

    reports = []
    for q in c.region.inequalities:
        flipped = Region(tuple(Inequality(-p.form.shift(-1)) if p is q else p for p in c.region.inequalities))
        for A in sample_points(flipped, max_entry, max_height, count, DEFAULT_A4_CAP):
            if _h(A) > height_cap():
                continue
            try:
                terms = instantiate(c, A, check_region=False)
                pv = expand_terms(terms, PINNED)
            except (TranscriptionError, HeightCapExceeded) as exc:
                reports.append(VerificationReport(c.id, A, False, False, 0, None, error=str(exc)))
                continue
            reports.append(
                VerificationReport(c.id, A, False, _bar_fixed(terms), len(terms), lattice_verdict(pv, A))
            )
    return reports
