"""Verification reports: typed check records plus JSON/CSV/Markdown output.

Reports are designed to be diffed in CI: serialization is deterministic
(fixed key order, no volatile fields by default), integers above 2**53 are
emitted as decimal strings so double-based consumers cannot corrupt them,
and exact rationals are emitted as "numerator/denominator" strings.

Each check carries a kind: "proven" mismatches mean the implementation is
broken (a proven statement cannot fail), "conjectured" mismatches are
counterexample candidates worth preserving, and "sampled" results are
informational only.
"""

from __future__ import annotations

import csv
import io
import json
import re
from dataclasses import dataclass, field, replace
from fractions import Fraction

TOOL_VERSION = "0.1.0"

STATUS_MATCH = "match"
STATUS_COUNTEREXAMPLE = "counterexample_candidate"
STATUS_IMPL_ERROR = "implementation_error"
STATUS_UNVERIFIED = "unverified_sampled"

KIND_PROVEN = "proven"
KIND_CONJECTURED = "conjectured"
KIND_SAMPLED = "sampled"

_JSON_SAFE_INT = 2**53
_INT_RE = re.compile(r"^-?[0-9]+$")
_FRACTION_RE = re.compile(r"^-?[0-9]+/[0-9]+$")


@dataclass
class CheckRecord:
    name: str
    paper_anchor: str
    formula_value: object
    observed_value: object
    status: str
    kind: str
    detail: str | None = None


@dataclass
class VerificationReport:
    config: dict
    checks: list[CheckRecord] = field(default_factory=list)
    runtime_ms: int = 0
    tool_version: str = TOOL_VERSION

    def status_counts(self) -> dict[str, int]:
        counts = {
            STATUS_MATCH: 0,
            STATUS_COUNTEREXAMPLE: 0,
            STATUS_IMPL_ERROR: 0,
            STATUS_UNVERIFIED: 0,
        }
        for rec in self.checks:
            counts[rec.status] += 1
        return counts

    def exit_code(self) -> int:
        counts = self.status_counts()
        if counts[STATUS_IMPL_ERROR]:
            return 3
        if counts[STATUS_COUNTEREXAMPLE]:
            return 2
        if counts[STATUS_UNVERIFIED]:
            return 4
        return 0


def derive_status(kind: str, formula_value, observed_value) -> str:
    if kind == KIND_SAMPLED:
        return STATUS_UNVERIFIED
    if formula_value == observed_value:
        return STATUS_MATCH
    return STATUS_IMPL_ERROR if kind == KIND_PROVEN else STATUS_COUNTEREXAMPLE


def make_check(
    name: str,
    paper_anchor: str,
    formula_value,
    observed_value,
    kind: str = KIND_PROVEN,
    detail: str | None = None,
) -> CheckRecord:
    if not paper_anchor:
        raise ValueError("every check needs a non-empty anchor")
    return CheckRecord(
        name=name,
        paper_anchor=paper_anchor,
        formula_value=formula_value,
        observed_value=observed_value,
        status=derive_status(kind, formula_value, observed_value),
        kind=kind,
        detail=detail,
    )


def override_formula(record: CheckRecord, new_formula) -> CheckRecord:
    """Test hook: swap the formula value and rederive the status."""
    return replace(
        record,
        formula_value=new_formula,
        status=derive_status(record.kind, new_formula, record.observed_value),
    )


def encode_value(v):
    if v is None or isinstance(v, bool):
        return v
    if isinstance(v, int):
        return v if -_JSON_SAFE_INT < v < _JSON_SAFE_INT else str(v)
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    if isinstance(v, str):
        return v
    raise TypeError(f"cannot serialize value of type {type(v).__name__}")


def decode_value(v):
    if isinstance(v, str):
        if _INT_RE.match(v):
            return int(v)
        if _FRACTION_RE.match(v):
            return Fraction(v)
    return v


def _record_to_obj(rec: CheckRecord) -> dict:
    return {
        "name": rec.name,
        "paper_anchor": rec.paper_anchor,
        "formula": encode_value(rec.formula_value),
        "observed": encode_value(rec.observed_value),
        "status": rec.status,
        "kind": rec.kind,
        "detail": rec.detail,
    }


def _record_from_obj(obj: dict) -> CheckRecord:
    return CheckRecord(
        name=obj["name"],
        paper_anchor=obj["paper_anchor"],
        formula_value=decode_value(obj["formula"]),
        observed_value=decode_value(obj["observed"]),
        status=obj["status"],
        kind=obj["kind"],
        detail=obj.get("detail"),
    )


def serialize(
    report: VerificationReport, fmt: str = "json", *, include_runtime: bool = False
) -> str:
    if fmt == "json":
        return _to_json(report, include_runtime)
    if fmt == "csv":
        return _to_csv(report)
    if fmt == "md":
        return _to_markdown(report)
    raise ValueError(f"unknown format {fmt!r}")


def _to_json(report: VerificationReport, include_runtime: bool) -> str:
    counts = report.status_counts()
    obj = {
        "tool_version": report.tool_version,
        "config": {k: encode_value(v) for k, v in report.config.items()},
        "checks": [_record_to_obj(r) for r in report.checks],
        "summary": {"checks": len(report.checks), **counts,
                    "exit_code": report.exit_code()},
    }
    if include_runtime:
        obj["runtime_ms"] = report.runtime_ms
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def parse_report(text: str) -> VerificationReport:
    obj = json.loads(text)
    return VerificationReport(
        config={k: decode_value(v) for k, v in obj["config"].items()},
        checks=[_record_from_obj(r) for r in obj["checks"]],
        runtime_ms=obj.get("runtime_ms", 0),
        tool_version=obj["tool_version"],
    )


CSV_HEADER = ("name", "paper_anchor", "formula", "observed", "status")


def _cell(v) -> str:
    enc = encode_value(v)
    return "" if enc is None else str(enc)


def _to_csv(report: VerificationReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for rec in report.checks:
        writer.writerow(
            (
                rec.name,
                rec.paper_anchor,
                _cell(rec.formula_value),
                _cell(rec.observed_value),
                rec.status,
            )
        )
    return buf.getvalue()


def _to_markdown(report: VerificationReport) -> str:
    lines = [
        "| name | anchor | formula | observed | status | detail |",
        "| --- | --- | --- | --- | --- | --- |",
    ]
    for rec in report.checks:
        detail = rec.detail or ""
        lines.append(
            f"| {rec.name} | {rec.paper_anchor} | {_cell(rec.formula_value)} "
            f"| {_cell(rec.observed_value)} | {rec.status} | {detail} |"
        )
    counts = report.status_counts()
    lines.append("")
    lines.append(
        f"{len(report.checks)} checks: "
        + ", ".join(f"{k}={v}" for k, v in counts.items())
    )
    return "\n".join(lines) + "\n"
