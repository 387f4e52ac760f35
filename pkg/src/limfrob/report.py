"""Check records, structured reports and their JSON/text encodings.

Rationals are emitted as ``"p/q"`` strings and Laurent polynomials as lists
of ``{"coeff", "x_exp", "theta_exp"}`` triples, so every report is plain
JSON and ``Report.from_dict(r.to_dict()) == r``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources


@dataclass
class Check:
    name: str
    anchor: str
    passed: bool | None
    detail: str = ""

    @property
    def status(self) -> str:
        return {True: "PASS", False: "FAIL", None: "INDETERMINATE"}[self.passed]

    def to_dict(self) -> dict:
        return {"name": self.name, "anchor": self.anchor, "passed": self.passed,
                "detail": self.detail}

    @classmethod
    def from_dict(cls, d: dict) -> Check:
        return cls(d["name"], d["anchor"], d["passed"], d.get("detail", ""))


@dataclass
class Section:
    checks: list = field(default_factory=list)
    data: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed is True for c in self.checks)

    def to_dict(self) -> dict:
        return {"checks": [c.to_dict() for c in self.checks], "data": self.data}

    @classmethod
    def from_dict(cls, d: dict) -> Section:
        return cls([Check.from_dict(c) for c in d["checks"]], d.get("data", {}))


@dataclass
class Report:
    command: str
    weights: list
    mu: int
    n: int
    sections: dict = field(default_factory=dict)
    obstruction: str | None = None

    @property
    def passed(self) -> bool:
        return all(s.passed for s in self.sections.values())

    def all_checks(self):
        for name, sec in self.sections.items():
            for c in sec.checks:
                yield name, c

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "weights": list(self.weights),
            "mu": self.mu,
            "n": self.n,
            "sections": {k: v.to_dict() for k, v in self.sections.items()},
            "obstruction": self.obstruction,
            "passed": self.passed,
        }

    @classmethod
    def from_dict(cls, d: dict) -> Report:
        return cls(d["command"], list(d["weights"]), d["mu"], d["n"],
                   {k: Section.from_dict(v) for k, v in d["sections"].items()},
                   d.get("obstruction"))

    def to_text(self) -> str:
        lines = [f"weights {','.join(map(str, self.weights))}  mu={self.mu}  n={self.n}"]
        for name, sec in self.sections.items():
            lines.append(f"[{name}]")
            for c in sec.checks:
                tail = f"  ({c.detail})" if c.detail else ""
                lines.append(f"  {c.status:<13} {c.name} <{c.anchor}>{tail}")
        if self.obstruction:
            lines.append(f"OBSTRUCTION {self.obstruction}")
        lines.append(f"OVERALL {'PASS' if self.passed else 'FAIL'}")
        return "\n".join(lines)


def batch_to_dict(reports) -> dict:
    return {"reports": [r.to_dict() for r in reports],
            "passed": all(r.passed for r in reports)}


def emit_json(doc: dict) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False)


def load_schema() -> dict:
    text = resources.files("limfrob").joinpath("report.schema.json").read_text(encoding="utf-8")
    return json.loads(text)


# value encoders ------------------------------------------------------------

def enc_rational(q) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def dec_rational(s: str) -> Fraction:
    return Fraction(s)


def enc_laurent(p) -> list:
    """Encode a rational or an (x, theta) Laurent polynomial as monomial triples."""
    from .algebra.poly import Poly

    if not isinstance(p, Poly):
        p = Fraction(p)
        return [] if not p else [{"coeff": enc_rational(p), "x_exp": 0, "theta_exp": 0}]
    return [{"coeff": enc_rational(c), "x_exp": e[0], "theta_exp": e[1]}
            for e, c in sorted(p.terms.items())]


def enc_matrix(M, laurent: bool = False) -> list:
    if laurent:
        return [[enc_laurent(v) for v in row] for row in M.to_rows()]
    return [[enc_rational(v) for v in row] for row in M.to_rational().to_rows()]


def enc_poly(p, names) -> list:
    """Encode a multivariate polynomial as ``{"coeff", "monomial"}`` terms."""
    return [{"coeff": enc_rational(c), "monomial": dict(zip(names, map(int, e)))}
            for e, c in sorted(p.terms.items(), reverse=True)]
