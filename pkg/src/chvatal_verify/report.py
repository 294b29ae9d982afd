"""Flat verdict records and their JSON Lines / CSV renderings."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from fractions import Fraction
from math import sqrt
from typing import Iterable, Optional

__all__ = ["VerdictRecord", "FIELDS", "sort_records", "render", "format_rational", "compare"]

FIELDS = ("check", "n", "m", "lhs", "rhs", "pass", "margin", "mode", "elapsed_ns")

# pseudo-relation for Monte Carlo records: |lhs - rhs| <= 4 standard errors
WITHIN_4SE = "~4se"


def format_rational(x: Fraction) -> str:
    """Canonical "p/q" string; integers render without a denominator."""
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def compare(lhs: Fraction, op: str, rhs: Fraction, samples: int = 0) -> bool:
    if op == "<":
        return lhs < rhs
    if op == "<=":
        return lhs <= rhs
    if op == ">":
        return lhs > rhs
    if op == ">=":
        return lhs >= rhs
    if op == "==":
        return lhs == rhs
    if op == WITHIN_4SE:
        p = float(lhs)
        return abs(p - float(rhs)) <= 4 * sqrt(p * (1 - p) / samples)
    raise ValueError(f"unknown relation {op!r}")


@dataclass(frozen=True)
class VerdictRecord:
    """One check: ``lhs <op> rhs`` evaluated on exactly the rendered values.

    ``op`` and ``samples`` are kept in memory for re-checking but are not
    part of the serialized row.
    """

    check: str
    n: int
    m: Optional[int]
    lhs: Fraction
    rhs: Fraction
    op: str
    mode: str
    elapsed_ns: int = 0
    samples: int = 0

    @property
    def passed(self) -> bool:
        return compare(self.lhs, self.op, self.rhs, self.samples)

    @property
    def margin(self) -> Fraction:
        return Fraction(self.lhs) - Fraction(self.rhs)

    def sort_key(self):
        return (self.check, self.n, -1 if self.m is None else self.m, self.mode)

    def row(self) -> dict:
        return {
            "check": self.check,
            "n": self.n,
            "m": self.m,
            "lhs": format_rational(self.lhs),
            "rhs": format_rational(self.rhs),
            "pass": self.passed,
            "margin": format_rational(self.margin),
            "mode": self.mode,
            "elapsed_ns": self.elapsed_ns,
        }


def sort_records(records: Iterable[VerdictRecord]) -> list[VerdictRecord]:
    return sorted(records, key=VerdictRecord.sort_key)


def _csv_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


def render(rows: Iterable[dict], fmt: str, fields: Iterable[str]) -> str:
    """Render dict rows as JSON Lines or RFC-4180 CSV (CRLF line ends, header first)."""
    fields = list(fields)
    if fmt == "json":
        return "".join(json.dumps({k: r[k] for k in fields}, separators=(",", ":")) + "\n" for r in rows)
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(fields)
        for r in rows:
            writer.writerow([_csv_cell(r[k]) for k in fields])
        return buf.getvalue()
    raise ValueError(f"unknown format {fmt!r}")
