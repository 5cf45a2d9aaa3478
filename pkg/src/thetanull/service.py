"""Request/response documents and the handlers behind the API and the CLI.

The HTTP layer ("api") and the command line ("cli") both call `classify` and
`selftest` here, so a CLI run and a POST with the same document produce the
same report object.  Serialization goes through `render_report`, which is the
single canonical JSON form: field order fixed by the models, two-space
indent, trailing newline.  Reports contain only values derived from the input
document and the options, never timings or environment state, so identical
requests yield byte-identical report files.
"""

from __future__ import annotations

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from .engine import DEFAULT_TARGET_EPS
from .errors import DomainError
from .siegel import SiegelPoint, validate_siegel
from .strata import DEFAULT_RANK_TOL, DEFAULT_VANISH_TOL, StrataReport, stratum

__all__ = [
    "ComplexPair",
    "Options",
    "InputDocument",
    "VanishingEntry",
    "RankEntry",
    "Certificates",
    "ReportDocument",
    "CriterionOutcome",
    "SelftestReport",
    "classify",
    "selftest",
    "render_report",
    "render_selftest",
]


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid")


class ComplexPair(_Strict):
    re: float = 0.0
    im: float = 0.0

    @classmethod
    def of(cls, value: complex) -> "ComplexPair":
        return cls(re=float(value.real), im=float(value.imag))

    def to_complex(self) -> complex:
        return complex(self.re, self.im)


class Options(_Strict):
    target_eps: float = Field(default=DEFAULT_TARGET_EPS, gt=0.0)
    vanish_tol: float = Field(default=DEFAULT_VANISH_TOL, gt=0.0)
    rank_tol: float = Field(default=DEFAULT_RANK_TOL, gt=0.0)


class InputDocument(_Strict):
    genus: int = Field(ge=1, le=8)
    tau: list[list[ComplexPair]]
    options: Options = Options()

    def to_siegel(self) -> SiegelPoint:
        """Validate and convert; DomainError on a malformed matrix."""
        g = self.genus
        if len(self.tau) != g or any(len(row) != g for row in self.tau):
            raise DomainError(f"tau must be a {g} x {g} array of re/im pairs")
        raw = np.array(
            [[cell.to_complex() for cell in row] for row in self.tau], dtype=complex
        )
        return validate_siegel(g, raw)

    @classmethod
    def of(cls, tau: SiegelPoint, options: Options | None = None) -> "InputDocument":
        rows = [[ComplexPair.of(complex(v)) for v in row] for row in tau.entries]
        return cls(genus=tau.genus, tau=rows, options=options or Options())


class VanishingEntry(_Strict):
    characteristic: str  # e.g. "1100/1100"
    abs_value: float
    err: float


class RankEntry(_Strict):
    characteristic: str
    singular_values: list[float]
    rank: int


class Certificates(_Strict):
    target_eps: float
    vanish_tol: float
    rank_tol: float
    max_eval_err: float


class ReportDocument(_Strict):
    input: InputDocument
    vanishing: list[VanishingEntry]
    ranks: list[RankEntry]
    stratum: int | None
    verdict: str | None  # populated at genus 4, null otherwise
    certificates: Certificates


class CriterionOutcome(_Strict):
    name: str
    passed: bool
    detail: str


class SelftestReport(_Strict):
    seed: int
    criteria: list[CriterionOutcome]
    passed: bool


def _report_from_strata(doc: InputDocument, rep: StrataReport) -> ReportDocument:
    return ReportDocument(
        input=doc,
        vanishing=[
            VanishingEntry(characteristic=ch.label(), abs_value=abs(cv.value), err=cv.err)
            for ch, cv in rep.vanishing
        ],
        ranks=[
            RankEntry(characteristic=ch.label(), singular_values=[float(s) for s in sv], rank=rank)
            for ch, sv, rank in rep.ranks
        ],
        stratum=rep.stratum,
        verdict=rep.verdict if doc.genus == 4 else None,
        certificates=Certificates(
            target_eps=doc.options.target_eps,
            vanish_tol=doc.options.vanish_tol,
            rank_tol=doc.options.rank_tol,
            max_eval_err=rep.max_eval_err,
        ),
    )


def classify(doc: InputDocument, threads: int = 1) -> ReportDocument:
    """Full stratum report for one input document."""
    tau = doc.to_siegel()
    rep = stratum(
        tau,
        vanish_tol=doc.options.vanish_tol,
        rank_tol=doc.options.rank_tol,
        target_eps=doc.options.target_eps,
        threads=threads,
    )
    return _report_from_strata(doc, rep)


def selftest(name_filter: str | None = None, seed: int = 0, threads: int = 1) -> SelftestReport:
    """Run the acceptance criteria and collect a deterministic report."""
    from .acceptance import run_criteria

    results = run_criteria(name_filter=name_filter, seed=seed, threads=threads)
    outcomes = [
        CriterionOutcome(name=r.name, passed=r.passed, detail=r.detail) for r in results
    ]
    return SelftestReport(
        seed=seed, criteria=outcomes, passed=bool(outcomes) and all(o.passed for o in outcomes)
    )


def render_report(report: ReportDocument) -> str:
    return report.model_dump_json(indent=2) + "\n"


def render_selftest(report: SelftestReport) -> str:
    return report.model_dump_json(indent=2) + "\n"
