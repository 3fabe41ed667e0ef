"""Cirquent calculus with clustering and ranking: syntax, semantics, rules,
proof checking and proof synthesis."""

from .errors import (CapExceeded, CirquentError, IllFormedError, ParseError, PathError,
                     ProofSyntaxError, RelabelError, RuleError, SemanticsError, SynthesisError)
from .proof import CheckVerdict, Proof, Step, check_proof, is_axiom, parse_proof, render_proof
from .rules import RuleApplication, RuleTag, backward_apply, check_step, forward_apply
from .semantics import (Metaselection, ValidityVerdict, classical_tautology, classical_value,
                        metatrue, resolvent, true_under, true_under_naive, valid)
from .synthesis import SynthesisResult, prove, step1, step2, step3
from .syntax import Index, Literal, Node, Op, parse, render, validate

__all__ = [
    "CapExceeded", "CirquentError", "IllFormedError", "ParseError", "PathError",
    "ProofSyntaxError", "RelabelError", "RuleError", "SemanticsError", "SynthesisError",
    "CheckVerdict", "Proof", "Step", "check_proof", "is_axiom", "parse_proof", "render_proof",
    "RuleApplication", "RuleTag", "backward_apply", "check_step", "forward_apply",
    "Metaselection", "ValidityVerdict", "classical_tautology", "classical_value",
    "metatrue", "resolvent", "true_under", "true_under_naive", "valid",
    "SynthesisResult", "prove", "step1", "step2", "step3",
    "Index", "Literal", "Node", "Op", "parse", "render", "validate",
]
