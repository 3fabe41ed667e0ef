"""Truth of cirquents: interpretations, metaselections, metatruth and validity.

Two evaluators of truth are provided and are meant to be checked against
each other:

* :func:`true_under` grounds the literals, then plays the rank-ordered
  quantifier prefix one rank at a time, resolving the clusters of each rank
  and simplifying the tree before moving to the next rank.  Only clusters
  still reachable are enumerated.
* :func:`true_under_naive` materializes every metaselection vector over all
  clusters of the cirquent, evaluates :func:`metatrue` on each, and folds the
  resulting table through the quantifier prefix.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Mapping, Optional

from .errors import CapExceeded, CirquentError, SemanticsError
from .syntax import (LEFT, RIGHT, Cirquent, Literal, Node, Op, Path, atoms, clusters,
                     internal_at, is_classical, iter_nodes, rank_labels, rank_ops)

DEFAULT_MAX_ATOMS = 16
DEFAULT_MAX_CLUSTERS = 20

Interpretation = Mapping[str, bool]


@dataclass(frozen=True)
class Metaselection:
    """A left/right choice per cluster ID; IDs not listed get ``default``."""

    choices: Mapping[int, str] = field(default_factory=dict)
    default: str = LEFT

    def __call__(self, cluster: int) -> str:
        return self.choices.get(cluster, self.default)


# rank label -> metaselection for that rank
MetaselectionVector = Mapping[int, Metaselection]


@dataclass(frozen=True)
class ValidityVerdict:
    valid: bool
    counterexample: Optional[dict[str, bool]] = None

    def __bool__(self) -> bool:
        return self.valid


# --------------------------------------------------------------------------
# interpretations

def parse_interpretation(text: str) -> dict[str, bool]:
    """``"p=1,q=0"`` -> ``{"p": True, "q": False}``."""
    out: dict[str, bool] = {}
    text = text.strip()
    if not text:
        return out
    for item in text.split(","):
        name, sep, value = item.partition("=")
        name, value = name.strip(), value.strip()
        if not sep or value not in ("0", "1") or not name:
            raise CirquentError(f"bad interpretation entry {item!r}; expected atom=0 or atom=1")
        out[name] = value == "1"
    return out


def format_interpretation(star: Interpretation) -> str:
    return ",".join(f"{a}={int(star[a])}" for a in sorted(star))


def interpretations(names: list[str]):
    """All interpretations of ``names`` (sorted) with ⊤ tried before ⊥, first atom slowest."""
    for values in itertools.product((True, False), repeat=len(names)):
        yield dict(zip(names, values))


def literal_value(lit: Literal, star: Interpretation) -> bool:
    try:
        v = star[lit.atom]
    except KeyError:
        raise SemanticsError(f"interpretation does not assign atom {lit.atom!r}", kind="missing-atom") from None
    return v if lit.positive else not v


def classical_value(c: Cirquent, star: Interpretation) -> bool:
    """Classical truth of the index-stripped formula."""
    if isinstance(c, Literal):
        return literal_value(c, star)
    if c.op is Op.AND:
        return classical_value(c.left, star) and classical_value(c.right, star)
    return classical_value(c.left, star) or classical_value(c.right, star)


# --------------------------------------------------------------------------
# metatruth

def resolvent(c: Cirquent, p: Path, f: MetaselectionVector) -> str:
    node = internal_at(c, p)
    return _choose(node, f)


def _choose(node: Node, f: MetaselectionVector) -> str:
    try:
        fi = f[node.index.rank]
    except KeyError:
        raise SemanticsError(f"metaselection vector has no entry for rank {node.index.rank}",
                             kind="missing-rank") from None
    side = fi(node.index.cluster)
    if side not in (LEFT, RIGHT):
        raise SemanticsError(f"metaselection value {side!r} is neither left nor right")
    return side


def metatrue(c: Cirquent, star: Interpretation, f: MetaselectionVector) -> bool:
    sub = c
    while isinstance(sub, Node):
        sub = sub.left if _choose(sub, f) == LEFT else sub.right
    return literal_value(sub, star)


# --------------------------------------------------------------------------
# truth, recursive rank-by-rank evaluator
#
# A grounded tree is either a bool or a tuple (cluster, rank, left, right).
# A node whose two sides ground to the same constant collapses to it.

def _ground(c: Cirquent, star: Interpretation):
    if isinstance(c, Literal):
        return literal_value(c, star)
    left = _ground(c.left, star)
    right = _ground(c.right, star)
    if left.__class__ is bool and left is right:
        return left
    return (c.index.cluster, c.index.rank, left, right)


def _resolve(t, choice: dict[int, str]):
    while t.__class__ is not bool:
        k, rank, left, right = t
        if k in choice:
            t = left if choice[k] == LEFT else right
            continue
        left = _resolve(left, choice)
        right = _resolve(right, choice)
        if left.__class__ is bool and left is right:
            return left
        return (k, rank, left, right)
    return t


def _clusters_of_rank(t, rank: int, out: set[int]) -> None:
    if t.__class__ is bool:
        return
    if t[1] == rank:
        out.add(t[0])
    _clusters_of_rank(t[2], rank, out)
    _clusters_of_rank(t[3], rank, out)


def _play(t, ranks: list[int], ops: dict[int, Op], pos: int) -> bool:
    while True:
        if t.__class__ is bool:
            return t
        rank = ranks[pos]
        live: set[int] = set()
        _clusters_of_rank(t, rank, live)
        if live:
            break
        pos += 1
    ids = sorted(live)
    quantifier = all if ops[rank] is Op.AND else any
    return quantifier(
        _play(_resolve(t, dict(zip(ids, sides))), ranks, ops, pos + 1)
        for sides in itertools.product((LEFT, RIGHT), repeat=len(ids))
    )


def _check_caps(c: Cirquent, max_atoms: Optional[int], max_clusters: Optional[int]) -> None:
    if max_atoms is not None:
        n = len(atoms(c))
        if n > max_atoms:
            raise CapExceeded(f"{n} atoms exceeds the cap of {max_atoms}")
    if max_clusters is not None:
        n = len(clusters(c))
        if n > max_clusters:
            raise CapExceeded(f"{n} clusters exceeds the cap of {max_clusters}")


def true_under(c: Cirquent, star: Interpretation, *,
               max_clusters: Optional[int] = DEFAULT_MAX_CLUSTERS) -> bool:
    """Truth of ``c`` under ``star``: quantify ranks in ascending label order,
    universally for conjunctive ranks and existentially for disjunctive ones."""
    _check_caps(c, None, max_clusters)
    return _play(_ground(c, star), rank_labels(c), rank_ops(c), 0)


# --------------------------------------------------------------------------
# truth, naive oracle

def true_under_naive(c: Cirquent, star: Interpretation, *,
                     max_clusters: Optional[int] = DEFAULT_MAX_CLUSTERS) -> bool:
    _check_caps(c, None, max_clusters)
    ranks = rank_labels(c)
    ops = rank_ops(c)
    per_rank = {i: sorted({n.index.cluster for _, n in iter_nodes(c) if n.index.rank == i}) for i in ranks}
    slots = [(i, k) for i in ranks for k in per_rank[i]]
    table = []
    # product() varies the last slot fastest, so each innermost rank occupies
    # contiguous blocks of the table.
    for sides in itertools.product((LEFT, RIGHT), repeat=len(slots)):
        choices: dict[int, dict[int, str]] = {i: {} for i in ranks}
        for (i, k), side in zip(slots, sides):
            choices[i][k] = side
        vector = {i: Metaselection(choices[i]) for i in ranks}
        table.append(metatrue(c, star, vector))
    for i in reversed(ranks):
        width = 2 ** len(per_rank[i])
        quantifier = all if ops[i] is Op.AND else any
        table = [quantifier(table[s:s + width]) for s in range(0, len(table), width)]
    return table[0]


# --------------------------------------------------------------------------
# validity

def valid(c: Cirquent, *, max_atoms: Optional[int] = DEFAULT_MAX_ATOMS,
          max_clusters: Optional[int] = DEFAULT_MAX_CLUSTERS) -> ValidityVerdict:
    """Check truth under every interpretation of the atoms of ``c``.

    Counterexample choice is deterministic: interpretations are scanned with
    atoms sorted by name, ⊤ before ⊥.  A falsifying interpretation under which
    the index-stripped formula is classically true is preferred, since it
    exhibits the effect of clustering; otherwise the first falsifying one is
    returned.
    """
    _check_caps(c, max_atoms, max_clusters)
    first = None
    for star in interpretations(atoms(c)):
        if true_under(c, star, max_clusters=None):
            continue
        if classical_value(c, star):
            return ValidityVerdict(False, star)
        if first is None:
            first = star
    if first is not None:
        return ValidityVerdict(False, first)
    return ValidityVerdict(True)


def classical_tautology(c: Cirquent, *, max_atoms: Optional[int] = DEFAULT_MAX_ATOMS) -> bool:
    """Truth-table check of the index-stripped formula of a classical cirquent."""
    if not is_classical(c):
        raise CirquentError("classical_tautology needs a classical cirquent", kind="non-classical")
    _check_caps(c, max_atoms, None)
    return all(classical_value(c, star) for star in interpretations(atoms(c)))
