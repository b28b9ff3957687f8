"""Structured check reports shared by the checkers and the CLI."""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field

PASS, FAIL, SKIP, UNDETERMINED = "pass", "fail", "skip", "undetermined"


@dataclass
class CheckRecord:
    identity: str
    indices: dict
    status: str
    witness: str = ""
    lhs: str = ""
    rhs: str = ""


@dataclass
class Report:
    """Aggregated verdicts of one sweep.

    Passing tuples are counted, not stored; failures and undetermined
    tuples are kept in full with their witnesses.
    """

    title: str
    cutoff: object = None
    index_box: object = None
    counts: dict = field(default_factory=dict)
    records: list = field(default_factory=list)
    vacuous: int = 0
    meta: dict = field(default_factory=dict)

    def tally(self, identity: str, status: str, n: int = 1) -> None:
        per = self.counts.setdefault(identity, {PASS: 0, FAIL: 0, SKIP: 0, UNDETERMINED: 0})
        per[status] += n

    def add(self, record: CheckRecord) -> None:
        self.tally(record.identity, record.status)
        if record.status != PASS:
            self.records.append(record)

    def merge(self, other: "Report") -> "Report":
        for ident, per in other.counts.items():
            mine = self.counts.setdefault(ident, {PASS: 0, FAIL: 0, SKIP: 0, UNDETERMINED: 0})
            for k, v in per.items():
                mine[k] += v
        self.records.extend(other.records)
        self.vacuous += other.vacuous
        return self

    def total(self, status: str) -> int:
        return sum(per[status] for per in self.counts.values())

    @property
    def passed(self) -> int:
        return self.total(PASS)

    @property
    def failed(self) -> int:
        return self.total(FAIL)

    @property
    def skipped(self) -> int:
        return self.total(SKIP)

    @property
    def undetermined(self) -> int:
        return self.total(UNDETERMINED)

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def failures(self) -> list:
        return [r for r in self.records if r.status == FAIL]

    def to_dict(self) -> dict:
        return {
            "title": self.title,
            "cutoff": _plain(self.cutoff),
            "index_box": _plain(self.index_box),
            "summary": {"passed": self.passed, "failed": self.failed, "skipped": self.skipped,
                        "undetermined": self.undetermined, "vacuous": self.vacuous},
            "counts": {k: dict(v) for k, v in sorted(self.counts.items())},
            "meta": _plain(self.meta),
            "records": [asdict(r) for r in self.records],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def to_text(self, max_records: int = 20) -> str:
        lines = [f"# {self.title}",
                 f"cutoff: {_plain(self.cutoff)}  index box: {_plain(self.index_box)}"]
        for k, v in sorted(self.meta.items()):
            lines.append(f"{k}: {_plain(v)}")
        for ident, per in sorted(self.counts.items()):
            lines.append(f"{ident}: pass={per[PASS]} fail={per[FAIL]} skip={per[SKIP]}"
                         f" undetermined={per[UNDETERMINED]}")
        lines.append(f"total: pass={self.passed} fail={self.failed} skip={self.skipped}"
                     f" undetermined={self.undetermined} vacuous={self.vacuous}")
        for r in self.records[:max_records]:
            lines.append(f"  {r.status.upper()} {r.identity} {_plain(r.indices)} witness={r.witness}")
            if r.lhs or r.rhs:
                lines.append(f"    lhs = {r.lhs}")
                lines.append(f"    rhs = {r.rhs}")
        if len(self.records) > max_records:
            lines.append(f"  ... {len(self.records) - max_records} more records")
        lines.append("verdict: " + ("PASS" if self.ok else "FAIL"))
        return "\n".join(lines)


def _plain(x):
    from fractions import Fraction

    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    return x
