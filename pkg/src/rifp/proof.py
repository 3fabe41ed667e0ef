"""Proof objects, axioms, the proof checker and the proof-file format.

File format (UTF-8)::

    rifp-proof v1
    # comment lines start with '#'
    1: ((p |[3:1] ~p) |[1:1] (q |[4:1] ~q)) | axiom
    2: ((p |[1:1] q) |[2:1] (~p |[1:1] ~q)) | rule=III at=. k=1,i=1,l=2,j=1,m=3,n=4
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional

from .errors import CirquentError, ProofSyntaxError
from .rules import RuleApplication, step_diagnostic
from .semantics import classical_tautology
from .syntax import Cirquent, is_classical, parse, render, validate

HEADER = "rifp-proof v1"


@dataclass(frozen=True)
class Step:
    cirquent: Cirquent
    justification: Optional[RuleApplication] = None  # None marks an axiom

    @property
    def is_axiom_step(self) -> bool:
        return self.justification is None


@dataclass(frozen=True)
class Proof:
    steps: tuple[Step, ...]

    @property
    def conclusion(self) -> Cirquent:
        return self.steps[-1].cirquent

    def __len__(self) -> int:
        return len(self.steps)


@dataclass(frozen=True)
class CheckVerdict:
    accepted: bool
    step: Optional[int] = None  # 1-based
    reason: str = ""

    def __bool__(self) -> bool:
        return self.accepted


def is_axiom(c: Cirquent) -> bool:
    """Classical (all clusters singletons), well-formed, and a classical tautology."""
    return is_classical(c) and validate(c).ok and classical_tautology(c, max_atoms=None)


def check_proof(pf: Proof) -> CheckVerdict:
    if not pf.steps:
        return CheckVerdict(False, 1, "empty proof")
    first = pf.steps[0]
    if not first.is_axiom_step:
        return CheckVerdict(False, 1, "first step must be justified as an axiom")
    if not is_axiom(first.cirquent):
        return CheckVerdict(False, 1, "not an axiom")
    for t in range(1, len(pf.steps)):
        step = pf.steps[t]
        if step.is_axiom_step:
            return CheckVerdict(False, t + 1, "only the first step may be an axiom")
        reason = step_diagnostic(pf.steps[t - 1].cirquent, step.cirquent, step.justification)
        if reason is not None:
            return CheckVerdict(False, t + 1, reason)
    return CheckVerdict(True)


def render_proof(pf: Proof) -> str:
    lines = [HEADER]
    for t, step in enumerate(pf.steps, start=1):
        just = "axiom" if step.is_axiom_step else step.justification.to_text()
        lines.append(f"{t}: {render(step.cirquent)} | {just}")
    return "\n".join(lines) + "\n"


_LINE_RE = re.compile(r"\s*(\d+)\s*:\s*(.*?)\s+\|\s+(axiom|rule=.*?)\s*")


def parse_proof(text: str) -> Proof:
    lines = text.splitlines()
    if not lines or lines[0].strip() != HEADER:
        raise ProofSyntaxError(f"missing header {HEADER!r}", 0)
    steps = []
    for number, line in enumerate(lines[1:], start=1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        m = _LINE_RE.fullmatch(line)
        if m is None:
            raise ProofSyntaxError("expected '<t>: <cirquent> | axiom' or '<t>: <cirquent> | rule=...'", number)
        if int(m.group(1)) != len(steps) + 1:
            raise ProofSyntaxError(f"step number {m.group(1)} out of sequence, expected {len(steps) + 1}", number)
        try:
            cirquent = parse(m.group(2))
            just = None if m.group(3) == "axiom" else RuleApplication.from_text(m.group(3))
        except CirquentError as exc:
            raise ProofSyntaxError(str(exc), number) from None
        steps.append(Step(cirquent, just))
    if not steps:
        raise ProofSyntaxError("proof has no steps", len(lines))
    return Proof(tuple(steps))
