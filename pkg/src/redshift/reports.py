"""Check/report records, canonical JSON and golden hashes."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from importlib import resources
from typing import Any

SCHEMA_VERSION = 1


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""
    informational: bool = False
    data: dict[str, Any] = field(default_factory=dict)

    def line(self) -> str:
        tag = "INFO" if self.informational else ("PASS" if self.passed else "FAIL")
        return f"[{tag}] {self.name}" + (f": {self.detail}" if self.detail else "")

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed, "detail": self.detail,
                "informational": self.informational, "data": self.data}


@dataclass
class Report:
    title: str
    checks: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks if not c.informational)

    def add(self, name: str, passed: bool, detail: str = "", **data) -> Check:
        c = Check(name, bool(passed), detail, data=data)
        self.checks.append(c)
        return c

    def info(self, name: str, detail: str = "", **data) -> Check:
        c = Check(name, True, detail, informational=True, data=data)
        self.checks.append(c)
        return c

    def extend(self, other: "Report") -> None:
        self.checks.extend(other.checks)

    def first_failure(self) -> Check | None:
        return next((c for c in self.checks if not c.passed and not c.informational), None)

    def text(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return "\n".join([f"{self.title}: {status}"] + ["  " + c.line() for c in self.checks])

    def to_json(self) -> dict:
        return {"schema": f"redshift/report/{SCHEMA_VERSION}", "title": self.title,
                "passed": self.passed, "checks": [c.to_json() for c in self.checks]}


def canonical_json(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=True) + "\n"


def pretty_json(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=True) + "\n"


def golden_hash(obj: Any) -> str:
    return hashlib.sha256(canonical_json(obj).encode()).hexdigest()


def load_schema(name: str) -> dict:
    text = resources.files("redshift").joinpath("schemas", f"{name}.schema.json").read_text()
    return json.loads(text)
