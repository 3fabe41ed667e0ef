from __future__ import annotations

import random

import pytest

from gen import random_cirquent
from rifp.errors import ProofSyntaxError
from rifp.proof import HEADER, Proof, Step, check_proof, is_axiom, parse_proof, render_proof
from rifp.rules import RuleApplication
from rifp.semantics import valid
from rifp.synthesis import prove
from rifp.syntax import parse

AXIOM = parse("((p |[3:1] ~p) |[1:1] (q |[4:1] ~q))")
CROSSED = parse("((p |[1:1] q) |[2:1] (~p |[1:1] ~q))")
MERGE = RuleApplication.from_text("rule=III at=. k=1,i=1,l=2,j=1,m=3,n=4")

WORKED = f"""{HEADER}
1: ((p |[3:1] ~p) |[1:1] (q |[4:1] ~q)) | axiom
2: ((p |[1:1] q) |[2:1] (~p |[1:1] ~q)) | rule=III at=. k=1,i=1,l=2,j=1,m=3,n=4
"""


def worked():
    return Proof((Step(AXIOM), Step(CROSSED, MERGE)))


def test_is_axiom():
    assert is_axiom(parse("(p |[1:1] ~p)"))
    assert not is_axiom(parse("((p |[1:1] q) &[2:2] (r |[1:1] s))"))
    assert not is_axiom(parse("(p |[1:1] q)"))


def test_worked_proof_is_accepted():
    verdict = check_proof(worked())
    assert verdict.accepted and verdict.step is None


def test_non_axiom_start_is_rejected():
    pf = Proof((Step(parse("(p |[1:1] q)")), Step(CROSSED, MERGE)))
    verdict = check_proof(pf)
    assert (verdict.accepted, verdict.step, verdict.reason) == (False, 1, "not an axiom")


def test_swapped_partner_ids_are_rejected_at_step_two():
    swapped = RuleApplication.from_text("rule=III at=. k=1,i=1,l=2,j=1,m=4,n=3")
    verdict = check_proof(Proof((Step(AXIOM), Step(CROSSED, swapped))))
    assert not verdict and verdict.step == 2


def test_other_rejections():
    assert check_proof(Proof(())).step == 1
    assert check_proof(Proof((Step(CROSSED, MERGE),))).step == 1
    twice = Proof((Step(AXIOM), Step(AXIOM)))
    assert check_proof(twice).step == 2


def test_parse_worked_file():
    assert parse_proof(WORKED) == worked()
    assert render_proof(worked()) == WORKED


def test_parse_skips_comments_and_blank_lines():
    text = WORKED.replace("\n1: ", "\n# the axiom\n\n1: ", 1)
    assert parse_proof(text) == worked()


@pytest.mark.parametrize("text, line", [
    ("", 0),
    ("rifp-proof v2\n1: p | axiom\n", 0),
    (f"{HEADER}\n", 1),
    (f"{HEADER}\n2: p | axiom\n", 1),
    (f"{HEADER}\n1: p\n", 1),
    (f"{HEADER}\n1: (p |[1:1] | axiom\n", 1),
    (f"{HEADER}\n1: p | axiom\n2: p | rule=VII at=.\n", 2),
])
def test_parse_errors(text, line):
    with pytest.raises(ProofSyntaxError) as info:
        parse_proof(text)
    assert info.value.line == line


def test_synthesized_proofs_round_trip_bit_exactly():
    rng = random.Random(21)
    seen = 0
    while seen < 60:
        c = random_cirquent(rng, max_nodes=5, names="pq")
        result = prove(c)
        if result.proof is None:
            continue
        seen += 1
        text = render_proof(result.proof)
        assert parse_proof(text) == result.proof
        assert render_proof(parse_proof(text)) == text


def test_accepted_proofs_conclude_valid_cirquents():
    rng = random.Random(22)
    for _ in range(150):
        c = random_cirquent(rng, max_nodes=4, names="pq")
        result = prove(c)
        if result.proof is not None:
            assert check_proof(result.proof)
            assert valid(result.proof.conclusion).valid


def test_tampered_step_is_caught():
    rng = random.Random(23)
    tampered = 0
    while tampered < 30:
        c = random_cirquent(rng, max_nodes=5, names="pq")
        result = prove(c)
        if result.proof is None or len(result.proof) < 2:
            continue
        steps = list(result.proof.steps)
        t = rng.randrange(1, len(steps))
        other = random_cirquent(rng, max_nodes=4, names="pq")
        if other == steps[t].cirquent:
            continue
        steps[t] = Step(other, steps[t].justification)
        verdict = check_proof(Proof(tuple(steps)))
        assert not verdict.accepted
        assert verdict.step in (t + 1, t + 2)
        tampered += 1
