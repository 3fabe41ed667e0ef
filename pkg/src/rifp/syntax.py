"""Cirquent trees: construction, concrete syntax, structural queries.

A cirquent is a binary tree whose leaves are literals and whose internal
nodes are connectives annotated with an :class:`Index` (cluster ID and rank
label).  Trees are immutable; every rewrite returns a new tree.  Nodes are
addressed by paths, tuples over ``"L"``/``"R"``, the root being ``()``.

Concrete syntax::

    cirquent := literal | '(' cirquent op cirquent ')'
    literal  := ['~'] atom
    op       := '&[' nat ':' nat ']' | '|[' nat ':' nat ']'

e.g. ``((p |[1:1] q) &[2:2] (r |[1:1] s))``.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator, Tuple, Union

from .errors import CirquentError, IllFormedError, ParseError, PathError, RelabelError

LEFT = "L"
RIGHT = "R"

Path = Tuple[str, ...]

ATOM_RE = re.compile(r"[a-z][a-z0-9_]*")


class Op(str, Enum):
    AND = "&"
    OR = "|"

    @property
    def dual(self) -> "Op":
        return Op.OR if self is Op.AND else Op.AND


@dataclass(frozen=True, slots=True)
class Index:
    cluster: int
    rank: int

    def __post_init__(self):
        if self.cluster < 1 or self.rank < 1:
            raise CirquentError(f"index components must be >= 1, got {self.cluster}:{self.rank}")

    def __str__(self) -> str:
        return f"{self.cluster}:{self.rank}"


@dataclass(frozen=True, slots=True)
class Literal:
    atom: str
    positive: bool = True

    def __post_init__(self):
        if not ATOM_RE.fullmatch(self.atom):
            raise CirquentError(f"bad atom name {self.atom!r}")

    def __str__(self) -> str:
        return self.atom if self.positive else "~" + self.atom


@dataclass(frozen=True, slots=True)
class Node:
    op: Op
    index: Index
    left: "Cirquent"
    right: "Cirquent"

    def __str__(self) -> str:
        return render(self)


Cirquent = Union[Literal, Node]


# --------------------------------------------------------------------------
# parsing and rendering

_TOKEN_RE = re.compile(r"\s*(?:(?P<lp>\()|(?P<rp>\))|(?P<op>[&|]\[)|(?P<tilde>~)"
                       r"|(?P<atom>[a-z][a-z0-9_]*)|(?P<nat>[0-9]+)|(?P<colon>:)|(?P<rb>\]))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append((kind, m.group(kind), start))
        pos = m.end()
    tokens.append(("eof", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self, kind: str, what: str):
        tok = self.tokens[self.i]
        if tok[0] != kind:
            found = "end of input" if tok[0] == "eof" else repr(tok[1])
            raise ParseError(f"expected {what}, found {found}", tok[2])
        self.i += 1
        return tok

    def nat(self) -> int:
        tok = self.take("nat", "a positive integer")
        value = int(tok[1])
        if value < 1:
            raise ParseError("index components must be >= 1", tok[2])
        return value

    def cirquent(self) -> Cirquent:
        kind, _, _ = self.peek()
        if kind == "lp":
            self.i += 1
            left = self.cirquent()
            op = Op(self.take("op", "'&[' or '|['")[1][0])
            cluster = self.nat()
            self.take("colon", "':'")
            rank = self.nat()
            self.take("rb", "']'")
            right = self.cirquent()
            self.take("rp", "')'")
            return Node(op, Index(cluster, rank), left, right)
        positive = True
        if kind == "tilde":
            self.i += 1
            positive = False
        atom = self.take("atom", "an atom or '('")[1]
        return Literal(atom, positive)


def parse(text: str) -> Cirquent:
    """Parse concrete syntax.  Only grammar errors are raised here; use
    :func:`validate` for clustering/ranking consistency."""
    p = _Parser(text)
    c = p.cirquent()
    p.take("eof", "end of input")
    return c


def render(c: Cirquent) -> str:
    if isinstance(c, Literal):
        return str(c)
    return f"({render(c.left)} {c.op.value}[{c.index.cluster}:{c.index.rank}] {render(c.right)})"


def format_path(p: Path) -> str:
    return "/".join(p) if p else "."


def parse_path(text: str) -> Path:
    text = text.strip()
    if text == ".":
        return ()
    steps = tuple(text.split("/"))
    if any(s not in (LEFT, RIGHT) for s in steps):
        raise CirquentError(f"bad path {text!r}")
    return steps


# --------------------------------------------------------------------------
# traversal helpers

def iter_nodes(c: Cirquent, prefix: Path = ()) -> Iterator[tuple[Path, Node]]:
    """Internal nodes in preorder, with their paths."""
    stack = [(prefix, c)]
    while stack:
        path, sub = stack.pop()
        if isinstance(sub, Node):
            yield path, sub
            stack.append((path + (RIGHT,), sub.right))
            stack.append((path + (LEFT,), sub.left))


def iter_literals(c: Cirquent) -> Iterator[Literal]:
    stack = [c]
    while stack:
        sub = stack.pop()
        if isinstance(sub, Node):
            stack.append(sub.right)
            stack.append(sub.left)
        else:
            yield sub


def atoms(c: Cirquent) -> list[str]:
    return sorted({lit.atom for lit in iter_literals(c)})


def size(c: Cirquent) -> int:
    """Number of oconnectives (internal nodes)."""
    return sum(1 for _ in iter_nodes(c))


def cluster_sizes(c: Cirquent) -> Counter:
    return Counter(node.index.cluster for _, node in iter_nodes(c))


def clusters(c: Cirquent) -> set[int]:
    return {node.index.cluster for _, node in iter_nodes(c)}


def rank_labels(c: Cirquent) -> list[int]:
    return sorted({node.index.rank for _, node in iter_nodes(c)})


def rank_ops(c: Cirquent) -> dict[int, Op]:
    """Rank label -> connective type (first occurrence wins on ill-formed input)."""
    out: dict[int, Op] = {}
    for _, node in iter_nodes(c):
        out.setdefault(node.index.rank, node.op)
    return out


def max_cluster_id(c: Cirquent) -> int:
    return max((node.index.cluster for _, node in iter_nodes(c)), default=0)


def is_prefix(p: Path, q: Path) -> bool:
    return q[:len(p)] == p


# --------------------------------------------------------------------------
# well-formedness

@dataclass(frozen=True)
class Violation:
    kind: str  # mixed-cluster-type | mixed-cluster-rank | mixed-rank-type
    detail: str


@dataclass(frozen=True)
class WellFormednessReport:
    violations: tuple[Violation, ...] = field(default=())

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok


def validate(c: Cirquent) -> WellFormednessReport:
    cluster_op: dict[int, Op] = {}
    cluster_rank: dict[int, int] = {}
    rank_op: dict[int, Op] = {}
    found: dict[tuple[str, int], Violation] = {}
    for path, node in iter_nodes(c):
        k, i = node.index.cluster, node.index.rank
        where = format_path(path)
        if cluster_op.setdefault(k, node.op) is not node.op and ("mixed-cluster-type", k) not in found:
            found["mixed-cluster-type", k] = Violation(
                "mixed-cluster-type", f"cluster {k} holds both '&' and '|' (at {where})")
        if cluster_rank.setdefault(k, i) != i and ("mixed-cluster-rank", k) not in found:
            found["mixed-cluster-rank", k] = Violation(
                "mixed-cluster-rank", f"cluster {k} carries ranks {cluster_rank[k]} and {i} (at {where})")
        if rank_op.setdefault(i, node.op) is not node.op and ("mixed-rank-type", i) not in found:
            found["mixed-rank-type", i] = Violation(
                "mixed-rank-type", f"rank {i} holds both conjunctive and disjunctive clusters (at {where})")
    return WellFormednessReport(tuple(found.values()))


def require_well_formed(c: Cirquent) -> None:
    report = validate(c)
    if not report.ok:
        raise IllFormedError("; ".join(v.detail for v in report.violations))


# --------------------------------------------------------------------------
# paths and contexts

def node_at(c: Cirquent, p: Path) -> Cirquent:
    sub = c
    for depth, step in enumerate(p):
        if not isinstance(sub, Node):
            raise PathError(f"path {format_path(p)} runs past a literal at depth {depth}")
        if step == LEFT:
            sub = sub.left
        elif step == RIGHT:
            sub = sub.right
        else:
            raise PathError(f"bad path step {step!r}")
    return sub


def replace_at(c: Cirquent, p: Path, sub: Cirquent) -> Cirquent:
    """Fill the hole at ``p`` with ``sub``.  No re-indexing happens."""
    if not p:
        return sub
    if not isinstance(c, Node):
        raise PathError(f"path {format_path(p)} runs past a literal")
    step, rest = p[0], p[1:]
    if step == LEFT:
        return Node(c.op, c.index, replace_at(c.left, rest, sub), c.right)
    if step == RIGHT:
        return Node(c.op, c.index, c.left, replace_at(c.right, rest, sub))
    raise PathError(f"bad path step {step!r}")


def internal_at(c: Cirquent, p: Path) -> Node:
    sub = node_at(c, p)
    if not isinstance(sub, Node):
        raise PathError(f"path {format_path(p)} addresses a literal, not an oconnective", kind="literal")
    return sub


def level_of(c: Cirquent, p: Path) -> int:
    """Number of oconnectives having the node at ``p`` in their scope."""
    internal_at(c, p)
    return len(p)


def nca_of(c: Cirquent, p: Path, q: Path) -> Path:
    """Nearest common ancestor of two non-nested oconnectives."""
    internal_at(c, p)
    internal_at(c, q)
    if is_prefix(p, q) or is_prefix(q, p):
        raise PathError(f"{format_path(p)} and {format_path(q)} are nested", kind="nested-pair")
    n = 0
    while p[n] == q[n]:
        n += 1
    return p[:n]


# --------------------------------------------------------------------------
# cluster relabelling

def rename_clusters(c: Cirquent, mapping: dict[int, int]) -> Cirquent:
    """Rename cluster IDs (ranks untouched).  Unmapped IDs are kept."""
    if not mapping:
        return c
    if isinstance(c, Literal):
        return c
    k = c.index.cluster
    index = Index(mapping[k], c.index.rank) if k in mapping else c.index
    return Node(c.op, index, rename_clusters(c.left, mapping), rename_clusters(c.right, mapping))


def relabel_cluster(c: Cirquent, source: Index, target: Index) -> Cirquent:
    """Replace every occurrence of index ``source`` by ``target``."""
    if source.rank != target.rank:
        raise RelabelError(f"cannot relabel {source} as {target}: ranks differ", kind="rank-mismatch")
    ops = {node.op for _, node in iter_nodes(c) if node.index == source}
    if not ops:
        return c
    for _, node in iter_nodes(c):
        if node.index.cluster == target.cluster and (node.index.rank != target.rank or node.op not in ops):
            raise RelabelError(f"cluster {target.cluster} already occurs as {node.op.value}[{node.index}]",
                               kind="type-conflict")
    return _relabel(c, source, target)


def _relabel(c: Cirquent, source: Index, target: Index) -> Cirquent:
    if isinstance(c, Literal):
        return c
    index = target if c.index == source else c.index
    return Node(c.op, index, _relabel(c.left, source, target), _relabel(c.right, source, target))


# --------------------------------------------------------------------------
# classical cirquents

def is_classical(c: Cirquent) -> bool:
    return all(n == 1 for n in cluster_sizes(c).values())


def _renumber(c: Cirquent, counter: list[int], negate: bool) -> Cirquent:
    if isinstance(c, Literal):
        return Literal(c.atom, not c.positive) if negate else c
    counter[0] += 1
    t = counter[0]
    left = _renumber(c.left, counter, negate)
    right = _renumber(c.right, counter, negate)
    return Node(c.op.dual if negate else c.op, Index(t, t), left, right)


def to_formula(c: Cirquent) -> Cirquent:
    """Canonical classical form: the t-th node in preorder gets index t:t."""
    if not is_classical(c):
        raise CirquentError("to_formula needs a classical cirquent", kind="non-classical")
    return _renumber(c, [0], negate=False)


def negate_formula(c: Cirquent) -> Cirquent:
    """De Morgan negation of a classical cirquent, re-indexed like :func:`to_formula`."""
    if not is_classical(c):
        raise CirquentError("negate_formula needs a classical cirquent", kind="non-classical")
    return _renumber(c, [0], negate=True)


def strip(c: Cirquent) -> str:
    """Index-free rendering of the underlying formula."""
    if isinstance(c, Literal):
        return str(c)
    return f"({strip(c.left)} {c.op.value} {strip(c.right)})"
