"""Structured, diffable run reports.

A report is a header (title, config hash, resolved parameters) followed by
one line per check:

    check <name> | anchor: <identity being verified> | measured: <value> |
    tol: <threshold> | verdict: PASS|FAIL

The anchor states the mathematical fact the check certifies, so a report
is self-describing.  Rendering is deterministic: fixed ordering, fixed
float formatting.
"""

from __future__ import annotations

from dataclasses import dataclass, field


def fmt(value) -> str:
    if isinstance(value, float):
        return "%.6e" % value
    return str(value)


@dataclass(frozen=True)
class CheckRecord:
    name: str
    anchor: str
    measured: str
    tolerance: str
    passed: bool

    def render(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        return (
            f"check {self.name} | anchor: {self.anchor} | "
            f"measured: {self.measured} | tol: {self.tolerance} | verdict: {verdict}"
        )


@dataclass
class RunReport:
    title: str
    config_hash: str
    params: list[tuple[str, str]] = field(default_factory=list)
    checks: list[CheckRecord] = field(default_factory=list)

    def add_param(self, name: str, value) -> None:
        self.params.append((name, fmt(value)))

    def add_check(
        self, name: str, anchor: str, measured, tolerance, passed: bool
    ) -> None:
        self.checks.append(
            CheckRecord(
                name=name,
                anchor=anchor,
                measured=fmt(measured),
                tolerance=fmt(tolerance),
                passed=bool(passed),
            )
        )

    @property
    def overall(self) -> bool:
        return all(c.passed for c in self.checks)

    def failed_checks(self) -> list[str]:
        return [c.name for c in self.checks if not c.passed]

    def render(self) -> str:
        lines = [f"mobiusmin report: {self.title}", f"config_hash: {self.config_hash}"]
        for name, value in self.params:
            lines.append(f"param {name}: {value}")
        for check in self.checks:
            lines.append(check.render())
        lines.append(f"overall: {'PASS' if self.overall else 'FAIL'}")
        return "\n".join(lines) + "\n"

    def write(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.render())
