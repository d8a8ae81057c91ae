"""Instance files and reports.

Instance files are JSON objects with keys ``name``, ``m``, ``n``, ``A``,
``b`` and optionally ``c`` and ``var_upper_bounds``.  Integers are plain
JSON numbers, which Python reads at arbitrary size.

Reports exist in two forms that parse back to the same value: a JSON
document and an aligned text table with ``|`` separators.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Optional

from .bounds import BoundReport
from .model import EXACT, HPReal, Instance, IntMatrix

PROVENANCE = ("exact", "rounded-up", "rounded-down", "monte-carlo")
DIGITS = 30


class ParseError(ValueError):
    def __init__(self, msg: str, line: Optional[int] = None):
        self.line = line
        super().__init__(f"line {line}: {msg}" if line is not None else msg)


def _key_line(text: str, key: str) -> Optional[int]:
    m = re.search(r'"%s"\s*:' % re.escape(key), text)
    return text.count("\n", 0, m.start()) + 1 if m else None


def _int_list(text, key, value, length=None):
    if not isinstance(value, list) or not all(isinstance(v, int) and not isinstance(v, bool) for v in value):
        raise ParseError(f"{key} must be a list of integers", _key_line(text, key))
    if length is not None and len(value) != length:
        raise ParseError(f"{key} has {len(value)} entries, expected {length}", _key_line(text, key))
    return value


def parse_instance(text: str) -> Instance:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno) from None
    if not isinstance(doc, dict):
        raise ParseError("instance file must hold a JSON object", 1)
    for key in ("m", "n", "A", "b"):
        if key not in doc:
            raise ParseError(f"missing field {key!r}")
    m, n = doc["m"], doc["n"]
    if not isinstance(m, int) or not isinstance(n, int) or m < 1 or n < 1:
        raise ParseError("m and n must be positive integers", _key_line(text, "m"))
    A = doc["A"]
    line = _key_line(text, "A")
    if not isinstance(A, list):
        raise ParseError("A must be a list of rows", line)
    if len(A) < m:
        raise ParseError(f"A is missing row {len(A) + 1} of {m}", line)
    if len(A) > m:
        raise ParseError(f"A has {len(A)} rows, expected {m}", line)
    for j, row in enumerate(A):
        try:
            _int_list(text, "A", row, n)
        except ParseError as exc:
            raise ParseError(f"A row {j + 1}: {exc.args[0].split(': ', 1)[-1]}", line) from None
    b = _int_list(text, "b", doc["b"], m)
    c = _int_list(text, "c", doc["c"], n) if doc.get("c") is not None else None
    ub = doc.get("var_upper_bounds")
    if ub is not None:
        ub = _int_list(text, "var_upper_bounds", ub, n)
    try:
        return Instance(IntMatrix.from_rows(A), tuple(b), tuple(c) if c else None,
                        doc.get("name", "instance"), tuple(ub) if ub is not None else None)
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def load_instance(path) -> Instance:
    with open(path) as fh:
        return parse_instance(fh.read())


def instance_to_dict(inst: Instance) -> dict:
    doc = {"name": inst.name, "m": inst.m, "n": inst.n, "A": [list(r) for r in inst.A.rows], "b": list(inst.b)}
    if inst.c is not None:
        doc["c"] = list(inst.c)
    if inst.var_upper_bounds is not None:
        doc["var_upper_bounds"] = list(inst.var_upper_bounds)
    return doc


def dump_instance(inst: Instance) -> str:
    doc = instance_to_dict(inst)
    lines = ["{"]
    lines.append(f'  "name": {json.dumps(doc["name"])},')
    lines.append(f'  "m": {doc["m"]},')
    lines.append(f'  "n": {doc["n"]},')
    lines.append('  "A": [')
    lines.append(",\n".join(f"    {json.dumps(r)}" for r in doc["A"]))
    lines.append("  ],")
    rest = [f'  "b": {json.dumps(doc["b"])}']
    for key in ("c", "var_upper_bounds"):
        if key in doc:
            rest.append(f'  "{key}": {json.dumps(doc[key])}')
    lines.append(",\n".join(rest))
    lines.append("}")
    return "\n".join(lines) + "\n"


# -- reports -----------------------------------------------------------------


@dataclass(frozen=True)
class ReportEntry:
    tag: str
    value: Optional[str]
    provenance: str = EXACT
    applicable: bool = True
    note: str = ""

    def __post_init__(self):
        if self.provenance not in PROVENANCE:
            raise ValueError(f"unknown provenance {self.provenance!r}")
        if "|" in self.tag or "|" in self.note:
            raise ValueError("'|' is reserved as the table separator")

    @classmethod
    def of(cls, tag, value, applicable=True, note="", provenance=None) -> "ReportEntry":
        if value is None:
            return cls(tag, None, provenance or EXACT, applicable, note)
        if isinstance(value, HPReal):
            return cls(tag, value.decimal(DIGITS), provenance or value.rounding, applicable, note)
        if isinstance(value, float):
            return cls(tag, repr(value), provenance or "monte-carlo", applicable, note)
        return cls(tag, str(value), provenance or EXACT, applicable, note)


@dataclass
class Report:
    command: str
    subject: str
    entries: list = field(default_factory=list)
    data: dict = field(default_factory=dict)

    def add(self, *args, **kw) -> "Report":
        self.entries.append(ReportEntry.of(*args, **kw))
        return self

    def extend_bounds(self, rep: BoundReport) -> "Report":
        for e in rep.entries:
            self.add(e.tag, e.value, e.applicable, e.condition_note)
        return self

    def entry(self, tag: str) -> ReportEntry:
        for e in self.entries:
            if e.tag == tag:
                return e
        raise KeyError(tag)

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "subject": self.subject,
            "entries": [
                {"tag": e.tag, "value": e.value, "provenance": e.provenance, "applicable": e.applicable, "note": e.note}
                for e in self.entries
            ],
            "data": self.data,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    @classmethod
    def from_dict(cls, doc: dict) -> "Report":
        entries = [ReportEntry(e["tag"], e["value"], e["provenance"], e["applicable"], e["note"]) for e in doc["entries"]]
        return cls(doc["command"], doc["subject"], entries, doc.get("data", {}))

    @classmethod
    def from_json(cls, text: str) -> "Report":
        return cls.from_dict(json.loads(text))

    def to_text(self) -> str:
        header = ("tag", "value", "provenance", "applicable", "note")
        rows = [(e.tag, "-" if e.value is None else e.value, e.provenance, "yes" if e.applicable else "no", e.note)
                for e in self.entries]
        widths = [max(len(r[i]) for r in [header, *rows]) for i in range(5)]
        fmt = lambda r: " | ".join(v.ljust(w) for v, w in zip(r, widths)).rstrip()
        out = [f"# {self.command}: {self.subject}", fmt(header), "-+-".join("-" * w for w in widths)]
        out += [fmt(r) for r in rows]
        return "\n".join(out) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Report":
        lines = text.splitlines()
        if not lines or not lines[0].startswith("# "):
            raise ParseError("report table must start with '# command: subject'", 1)
        command, _, subject = lines[0][2:].partition(": ")
        entries = []
        for no, line in enumerate(lines[3:], start=4):
            if not line.strip():
                continue
            # the trailing " |" of an empty note survives rstrip without its space
            cells = [c.strip() for c in (line + " ").split(" | ")]
            cells += [""] * (5 - len(cells))
            if len(cells) != 5:
                raise ParseError("expected 5 columns", no)
            tag, value, prov, app, note = cells
            entries.append(ReportEntry(tag, None if value == "-" else value, prov, app == "yes", note))
        return cls(command, subject, entries)
