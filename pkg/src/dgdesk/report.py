"""Verdict reports shared by every checker, and their table/json rendering."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction


@dataclass
class Check:
    name: str
    verdict: str  # "pass", "fail" or "info"
    detail: str = ""
    numbers: dict = field(default_factory=dict)

    def to_json(self):
        out = {"name": self.name, "verdict": self.verdict}
        if self.detail:
            out["detail"] = self.detail
        if self.numbers:
            out["numbers"] = {k: _plain(v) for k, v in self.numbers.items()}
        return out


def _plain(v):
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, dict):
        return {str(k): _plain(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    return v


class Report:
    """An ordered list of named checks.  ``ok`` is true when nothing failed."""

    def __init__(self, subject: str = ""):
        self.subject = subject
        self.checks: list = []

    def add(self, name, ok, detail="", **numbers) -> bool:
        self.checks.append(Check(name, "pass" if ok else "fail", detail, numbers))
        return bool(ok)

    def info(self, name, detail="", **numbers):
        self.checks.append(Check(name, "info", detail, numbers))

    def extend(self, other: "Report", prefix: str = ""):
        for c in other.checks:
            self.checks.append(Check(prefix + c.name, c.verdict, c.detail, dict(c.numbers)))
        return self

    @property
    def ok(self) -> bool:
        return all(c.verdict != "fail" for c in self.checks)

    @property
    def failures(self) -> list:
        return [c for c in self.checks if c.verdict == "fail"]

    def __getitem__(self, name) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def __contains__(self, name):
        return any(c.name == name for c in self.checks)

    def passed(self, name) -> bool:
        return self[name].verdict == "pass"

    def __bool__(self):
        return self.ok

    def __repr__(self):
        return "Report(%r, %d checks, %d failed)" % (self.subject, len(self.checks),
                                                     len(self.failures))

    def to_json(self):
        return {"subject": self.subject, "ok": self.ok,
                "checks": [c.to_json() for c in self.checks]}

    def render(self, fmt: str = "table") -> str:
        if fmt == "json":
            return json.dumps(self.to_json(), indent=2, sort_keys=True, ensure_ascii=False)
        width = max([len(c.name) for c in self.checks] + [5])
        lines = ["# " + self.subject] if self.subject else []
        for c in self.checks:
            extra = c.detail
            if c.numbers:
                nums = " ".join("%s=%s" % (k, _plain(v)) for k, v in c.numbers.items())
                extra = (extra + "  " if extra else "") + nums
            lines.append("%-4s  %-*s  %s" % (c.verdict.upper(), width, c.name, extra))
        lines.append("overall: %s" % ("PASS" if self.ok else "FAIL"))
        return "\n".join(l.rstrip() for l in lines)
