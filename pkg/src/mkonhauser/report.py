"""Verification report records and their serialisation."""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Any, Iterable

REL_FLOOR = 1e-300


def _scalar_json(v: Any) -> Any:
    if isinstance(v, complex):
        return {"re": v.real, "im": v.imag}
    if isinstance(v, float) and not math.isfinite(v):
        return repr(v)
    return v


@dataclass(frozen=True)
class VerificationReport:
    """One identity check.

    ``passed`` holds iff ``abs_err <= tol * max(1, |rhs|)``. Off-diagonal checks
    (rhs = 0) fold their reference scale into ``tol`` and use it as the
    relative-error floor.
    """

    suite: str
    case_id: str
    params: dict
    lhs: float | complex
    rhs: float | complex
    abs_err: float
    rel_err: float
    tol: float
    mode: str = ""
    passed: bool = False
    notes: str = ""
    extra: dict = field(default_factory=dict)

    @classmethod
    def compare(cls, suite: str, case_id: str, params: dict, lhs, rhs, tol: float,
                mode: str = "", scale: float | None = None, notes: str = "",
                extra: dict | None = None) -> "VerificationReport":
        abs_err = abs(lhs - rhs)
        eff_tol = tol * scale if scale is not None else tol
        floor = scale if scale is not None else REL_FLOOR
        rel_err = abs_err / max(abs(rhs), floor)
        passed = bool(abs_err <= eff_tol * max(1.0, abs(rhs)))
        return cls(suite, case_id, dict(params), lhs, rhs, float(abs_err), float(rel_err),
                   float(eff_tol), mode, passed, notes, dict(extra or {}))

    def with_tol(self, tol: float) -> "VerificationReport":
        """Re-judge against a new tolerance (used by ``--tol``)."""
        passed = bool(self.abs_err <= tol * max(1.0, abs(self.rhs)))
        return VerificationReport(self.suite, self.case_id, self.params, self.lhs, self.rhs,
                                  self.abs_err, self.rel_err, tol, self.mode, passed,
                                  self.notes, self.extra)

    def as_record(self) -> dict:
        rec = {
            "suite": self.suite,
            "case_id": self.case_id,
            "params": {k: _scalar_json(v) for k, v in sorted(self.params.items())},
            "lhs": _scalar_json(self.lhs),
            "rhs": _scalar_json(self.rhs),
            "abs_err": _scalar_json(self.abs_err),
            "rel_err": _scalar_json(self.rel_err),
            "tol": self.tol,
            "mode": self.mode,
            "pass": self.passed,
        }
        if self.notes:
            rec["notes"] = self.notes
        if self.extra:
            rec["extra"] = {k: _scalar_json(v) for k, v in sorted(self.extra.items())}
        return rec

    def summary_line(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        return f"{flag} {self.case_id} rel_err={self.rel_err:.3e} tol={self.tol:.1e}"


CSV_FIELDS = ["suite", "case_id", "params", "lhs", "rhs", "abs_err", "rel_err", "tol", "mode", "pass"]


def to_jsonl(reports: Iterable[VerificationReport], header: dict | None = None) -> str:
    lines = []
    if header is not None:
        lines.append(json.dumps({"header": header}, sort_keys=True))
    for r in reports:
        lines.append(json.dumps(r.as_record(), sort_keys=True))
    return "\n".join(lines) + "\n"


def to_csv(reports: Iterable[VerificationReport]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_FIELDS)
    for r in reports:
        rec = r.as_record()
        row = []
        for key in CSV_FIELDS:
            v = rec[key]
            row.append(json.dumps(v, sort_keys=True) if isinstance(v, dict) else v)
        writer.writerow(row)
    return buf.getvalue()
