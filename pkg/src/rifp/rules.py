"""The four inference rules, in both directions.

Every rule rewrites a *redex* subtree at a fixed path; the redex root sits at
the same path in premise and conclusion.  Shapes, with ``o`` the key
connective (index k:i) and ``*`` the partner (index l:j in the conclusion,
m:j / n:j in the premise)::

    I-left    premise  Φ{Ψ{A} o C}             conclusion  Φ{Ψ{A o B} o C}
    I-right   premise  Φ{C o Ψ{A}}             conclusion  Φ{C o Ψ{B o A}}
    II-left   premise  Φ{(A *m C1) o (B *n C2)} conclusion Φ{(A o B) *l C}
    II-right  premise  Φ{(C1 *m A) o (C2 *n B)} conclusion Φ{C *l (A o B)}
    III       premise  Φ{(A *m C) o (B *n D)}   conclusion Φ{(A o B) *l (C o D)}
    IV        premise  Φ{A[l] o B[l/r]}         conclusion Φ{A[l] o B[l]}

``forward_apply`` maps premise to conclusion, ``backward_apply`` the reverse.
Both check every side condition and refuse to produce an ill-formed tree.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from .errors import CirquentError, RuleError
from .syntax import (LEFT, RIGHT, Cirquent, Index, Node, Path, cluster_sizes, clusters,
                     format_path, iter_nodes, node_at, parse, parse_path, relabel_cluster,
                     rename_clusters, render, replace_at, validate)


class RuleTag(str, Enum):
    I_LEFT = "I-left"
    I_RIGHT = "I-right"
    II_LEFT = "II-left"
    II_RIGHT = "II-right"
    III = "III"
    IV = "IV"


_NUMERIC = ("k", "i", "l", "j", "m", "n", "r")


@dataclass(frozen=True)
class RuleApplication:
    """One rule instance.

    ``inner`` (Rule I) runs from the key node's Ψ-side child down to the
    ``A o B`` node of the conclusion.  ``inserted`` is the ``B`` that Rule I
    forward grafts in.  ``split`` (Rule II) lists ``(s, s1, s2)``: singleton
    cluster ``s`` of ``C`` becomes ``s1`` in ``C1`` and ``s2`` in ``C2``.
    """

    rule: RuleTag
    redex: Path = ()
    inner: Optional[Path] = None
    inserted: Optional[Cirquent] = None
    k: Optional[int] = None
    i: Optional[int] = None
    l: Optional[int] = None
    j: Optional[int] = None
    m: Optional[int] = None
    n: Optional[int] = None
    r: Optional[int] = None
    split: tuple[tuple[int, int, int], ...] = field(default=())

    def to_text(self) -> str:
        parts = [f"rule={self.rule.value}", f"at={format_path(self.redex)}"]
        if self.inner is not None:
            parts.append(f"inner={format_path(self.inner)}")
        nums = [f"{name}={getattr(self, name)}" for name in _NUMERIC if getattr(self, name) is not None]
        if nums:
            parts.append(",".join(nums))
        if self.split:
            parts.append("split=" + ";".join(f"{s}->{a}/{b}" for s, a, b in self.split))
        if self.inserted is not None:
            parts.append(f"ins={render(self.inserted)}")
        return " ".join(parts)

    @classmethod
    def from_text(cls, text: str) -> "RuleApplication":
        text = text.strip()
        inserted = None
        head, sep, ins = text.partition(" ins=")
        if sep:
            inserted = parse(ins)
        values: dict = {}
        for token in head.split():
            for item in token.split(","):
                key, eq, value = item.partition("=")
                if not eq:
                    raise CirquentError(f"bad rule-application field {item!r}")
                if key in values:
                    raise CirquentError(f"duplicate rule-application field {key!r}")
                values[key] = value
        try:
            rule = RuleTag(values.pop("rule"))
            redex = parse_path(values.pop("at"))
        except (KeyError, ValueError) as exc:
            raise CirquentError(f"rule application needs valid rule= and at= fields: {text!r}") from exc
        kwargs: dict = {"rule": rule, "redex": redex, "inserted": inserted}
        if "inner" in values:
            kwargs["inner"] = parse_path(values.pop("inner"))
        if "split" in values:
            kwargs["split"] = _parse_split(values.pop("split"))
        for name in _NUMERIC:
            if name in values:
                value = values.pop(name)
                if not value.isdigit():
                    raise CirquentError(f"field {name} must be a natural number, got {value!r}")
                kwargs[name] = int(value)
        if values:
            raise CirquentError(f"unknown rule-application fields: {', '.join(sorted(values))}")
        return cls(**kwargs)


_SPLIT_RE = re.compile(r"(\d+)->(\d+)/(\d+)")


def _parse_split(text: str) -> tuple[tuple[int, int, int], ...]:
    out = []
    for item in filter(None, text.split(";")):
        m = _SPLIT_RE.fullmatch(item)
        if m is None:
            raise CirquentError(f"bad split entry {item!r}; expected s->s1/s2")
        out.append(tuple(int(g) for g in m.groups()))
    return tuple(out)


# --------------------------------------------------------------------------
# shared helpers

def _mismatch(msg: str) -> RuleError:
    return RuleError(msg, kind="schema-mismatch")


def _violation(msg: str) -> RuleError:
    return RuleError(msg, kind="condition-violation")


def _collision(msg: str) -> RuleError:
    return RuleError(msg, kind="fresh-ID-collision")


def _node(c: Cirquent, p: Path, what: str) -> Node:
    try:
        sub = node_at(c, p)
    except CirquentError:
        raise _mismatch(f"{what}: path {format_path(p)} does not exist") from None
    if not isinstance(sub, Node):
        raise _mismatch(f"{what}: path {format_path(p)} addresses a literal")
    return sub


def _sub(c: Cirquent, p: Path, what: str) -> Cirquent:
    try:
        return node_at(c, p)
    except CirquentError:
        raise _mismatch(f"{what}: path {format_path(p)} does not exist") from None


def _need(app: RuleApplication, *names: str) -> None:
    missing = [name for name in names if getattr(app, name) is None]
    if missing:
        raise _mismatch(f"rule {app.rule.value} needs parameter(s) {', '.join(missing)}")


def _expect(node: Node, cluster: int, rank: int, what: str) -> None:
    if node.index != Index(cluster, rank):
        raise _mismatch(f"{what} carries index {node.index}, expected {cluster}:{rank}")


def _well_formed(c: Cirquent, what: str) -> Cirquent:
    report = validate(c)
    if not report.ok:
        raise RuleError(f"{what} is ill-formed: " + "; ".join(v.detail for v in report.violations),
                        kind="ill-formed-result")
    return c


def _ranks_in(c: Cirquent) -> set[int]:
    return {node.index.rank for _, node in iter_nodes(c)}


def _check_partner_ids(app: RuleApplication, conclusion_sizes: Counter, premise_sizes: Counter,
                       rule: str) -> None:
    """Condition (i) shared by Rules II and III."""
    if conclusion_sizes[app.l] > 1:
        if not app.m == app.n == app.l:
            raise _violation(f"Rule {rule} (i): cluster {app.l} is a non-singleton in the conclusion, "
                             f"so m=n=l is required (got m={app.m}, n={app.n})")
    elif premise_sizes[app.m] != 1 or premise_sizes[app.n] != 1:
        raise _violation(f"Rule {rule} (i): cluster {app.l} is a singleton in the conclusion, "
                         f"so clusters m={app.m}, n={app.n} must be singletons in the premise")


def _check_order(app: RuleApplication, rule: str, strict: bool = False) -> None:
    if app.i < app.j if strict else app.i <= app.j:
        return
    sym = "<" if strict else "≤"
    raise _violation(f"Rule {rule} (ii): i{sym}j fails (i={app.i}, j={app.j})")


# --------------------------------------------------------------------------
# Rule I

def _rule1_paths(app: RuleApplication) -> tuple[str, Path]:
    side = LEFT if app.rule is RuleTag.I_LEFT else RIGHT
    inner = app.inner if app.inner is not None else ()
    return side, app.redex + (side,) + inner


def _rule1_backward(conclusion: Cirquent, app: RuleApplication) -> Cirquent:
    key = _node(conclusion, app.redex, "key oconnective")
    side, inner_path = _rule1_paths(app)
    inner = _node(conclusion, inner_path, "inner oconnective")
    if inner.op is not key.op or inner.index != key.index:
        raise _mismatch(f"inner oconnective {inner.op.value}[{inner.index}] differs from "
                        f"key {key.op.value}[{key.index}]")
    if app.k is not None and key.index != Index(app.k, app.i if app.i is not None else key.index.rank):
        raise _mismatch(f"key oconnective carries index {key.index}, expected {app.k}:{app.i}")
    kept, dropped = (inner.left, inner.right) if side == LEFT else (inner.right, inner.left)
    if app.inserted is not None and app.inserted != dropped:
        raise _mismatch("recorded inserted subcirquent does not match the one being removed")
    return _well_formed(replace_at(conclusion, inner_path, kept), "premise")


def _rule1_forward(premise: Cirquent, app: RuleApplication) -> Cirquent:
    key = _node(premise, app.redex, "key oconnective")
    if app.k is not None and key.index != Index(app.k, app.i if app.i is not None else key.index.rank):
        raise _mismatch(f"key oconnective carries index {key.index}, expected {app.k}:{app.i}")
    if app.inserted is None:
        raise _mismatch("Rule I forward needs the inserted subcirquent")
    side, a_path = _rule1_paths(app)
    a = _sub(premise, a_path, "subcirquent A")
    if side == LEFT:
        grown = Node(key.op, key.index, a, app.inserted)
    else:
        grown = Node(key.op, key.index, app.inserted, a)
    return _well_formed(replace_at(premise, a_path, grown), "conclusion")


# --------------------------------------------------------------------------
# Rule II

def _rule2_backward(conclusion: Cirquent, app: RuleApplication) -> Cirquent:
    _need(app, "k", "i", "l", "j", "m", "n")
    partner = _node(conclusion, app.redex, "partner oconnective")
    _expect(partner, app.l, app.j, "partner oconnective")
    if app.rule is RuleTag.II_LEFT:
        key_side, c = partner.left, partner.right
    else:
        key_side, c = partner.right, partner.left
    if not isinstance(key_side, Node):
        raise _mismatch("key oconnective position holds a literal")
    key = key_side
    _expect(key, app.k, app.i, "key oconnective")

    sizes = cluster_sizes(conclusion)
    _check_order(app, "II")
    low = sorted(t for t in _ranks_in(c) if t < app.i)
    if low:
        raise _violation(f"Rule II (iii): rank {low[0]}<i={app.i} occurs inside C")
    if sizes[app.l] > 1:
        if not app.m == app.n == app.l:
            raise _violation(f"Rule II (i): cluster {app.l} is a non-singleton in the conclusion, "
                             f"so m=n=l is required (got m={app.m}, n={app.n})")
        fresh = []
    else:
        fresh = [app.m, app.n]
    singles = {s for s in clusters(c) if sizes[s] == 1}
    split_keys = [s for s, _, _ in app.split]
    if sorted(split_keys) != sorted(singles):
        raise _violation("Rule II (iv): split must cover exactly the singleton clusters of C "
                         f"{sorted(singles)}, got {sorted(split_keys)}")
    fresh += [x for _, a, b in app.split for x in (a, b)]
    taken = [x for x in fresh if sizes[x] > 0]
    if taken or len(set(fresh)) != len(fresh):
        raise _collision(f"Rule II: new cluster IDs {fresh} collide with each other or with the conclusion")

    c1 = rename_clusters(c, {s: a for s, a, _ in app.split})
    c2 = rename_clusters(c, {s: b for s, _, b in app.split})
    m_index, n_index = Index(app.m, app.j), Index(app.n, app.j)
    if app.rule is RuleTag.II_LEFT:
        new = Node(key.op, key.index, Node(partner.op, m_index, key.left, c1),
                   Node(partner.op, n_index, key.right, c2))
    else:
        new = Node(key.op, key.index, Node(partner.op, m_index, c1, key.left),
                   Node(partner.op, n_index, c2, key.right))
    return _well_formed(replace_at(conclusion, app.redex, new), "premise")


def _rule2_forward(premise: Cirquent, app: RuleApplication) -> Cirquent:
    _need(app, "k", "i", "l", "j", "m", "n")
    key = _node(premise, app.redex, "key oconnective")
    _expect(key, app.k, app.i, "key oconnective")
    x, y = key.left, key.right
    if not isinstance(x, Node) or not isinstance(y, Node):
        raise _mismatch("both arguments of the key oconnective must be oconnectives")
    _expect(x, app.m, app.j, "left partner")
    _expect(y, app.n, app.j, "right partner")
    if x.op is not y.op:
        raise _mismatch("the two partner oconnectives have different types")
    if app.rule is RuleTag.II_LEFT:
        a, c1, b, c2 = x.left, x.right, y.left, y.right
    else:
        c1, a, c2, b = x.left, x.right, y.left, y.right

    c = rename_clusters(c1, {a1: s for s, a1, _ in app.split})
    if (rename_clusters(c, {s: a1 for s, a1, _ in app.split}) != c1
            or rename_clusters(c, {s: b1 for s, _, b1 in app.split}) != c2):
        raise _violation("Rule II (iv): C1 and C2 are not the split images of a common C")

    inner = Node(key.op, key.index, a, b)
    l_index = Index(app.l, app.j)
    new = Node(x.op, l_index, inner, c) if app.rule is RuleTag.II_LEFT else Node(x.op, l_index, c, inner)
    conclusion = replace_at(premise, app.redex, new)

    psizes, csizes = cluster_sizes(premise), cluster_sizes(conclusion)
    _check_partner_ids(app, csizes, psizes, "II")
    _check_order(app, "II")
    low = sorted(t for t in _ranks_in(c) if t < app.i)
    if low:
        raise _violation(f"Rule II (iii): rank {low[0]}<i={app.i} occurs inside C")
    singles = {s for s in clusters(c) if csizes[s] == 1}
    if sorted(s for s, _, _ in app.split) != sorted(singles):
        raise _violation("Rule II (iv): split must cover exactly the singleton clusters of C "
                         f"{sorted(singles)}")
    if any(psizes[a1] != 1 or psizes[b1] != 1 for _, a1, b1 in app.split):
        raise _violation("Rule II (iv): split images must be singleton clusters in the premise")
    return _well_formed(conclusion, "conclusion")


# --------------------------------------------------------------------------
# Rule III

def _rule3_backward(conclusion: Cirquent, app: RuleApplication) -> Cirquent:
    _need(app, "k", "i", "l", "j", "m", "n")
    partner = _node(conclusion, app.redex, "partner oconnective")
    _expect(partner, app.l, app.j, "partner oconnective")
    a_node, b_node = partner.left, partner.right
    if not isinstance(a_node, Node) or not isinstance(b_node, Node):
        raise _mismatch("both arguments of the partner oconnective must be key oconnectives")
    _expect(a_node, app.k, app.i, "left key oconnective")
    _expect(b_node, app.k, app.i, "right key oconnective")
    if a_node.op is not b_node.op:
        raise _mismatch("the two key oconnectives have different types")
    _check_order(app, "III")
    sizes = cluster_sizes(conclusion)
    if sizes[app.l] > 1:
        if not app.m == app.n == app.l:
            raise _violation(f"Rule III (i): cluster {app.l} is a non-singleton in the conclusion, "
                             f"so m=n=l is required (got m={app.m}, n={app.n})")
    elif app.m == app.n or sizes[app.m] or sizes[app.n]:
        raise _collision(f"Rule III: m={app.m}, n={app.n} must be distinct IDs absent from the conclusion")
    new = Node(a_node.op, a_node.index,
               Node(partner.op, Index(app.m, app.j), a_node.left, b_node.left),
               Node(partner.op, Index(app.n, app.j), a_node.right, b_node.right))
    return _well_formed(replace_at(conclusion, app.redex, new), "premise")


def _rule3_forward(premise: Cirquent, app: RuleApplication) -> Cirquent:
    _need(app, "k", "i", "l", "j", "m", "n")
    key = _node(premise, app.redex, "key oconnective")
    _expect(key, app.k, app.i, "key oconnective")
    x, y = key.left, key.right
    if not isinstance(x, Node) or not isinstance(y, Node):
        raise _mismatch("both arguments of the key oconnective must be oconnectives")
    _expect(x, app.m, app.j, "left partner")
    _expect(y, app.n, app.j, "right partner")
    if x.op is not y.op:
        raise _mismatch("the two partner oconnectives have different types")
    new = Node(x.op, Index(app.l, app.j),
               Node(key.op, key.index, x.left, y.left),
               Node(key.op, key.index, x.right, y.right))
    conclusion = replace_at(premise, app.redex, new)
    _check_partner_ids(app, cluster_sizes(conclusion), cluster_sizes(premise), "III")
    _check_order(app, "III")
    return _well_formed(conclusion, "conclusion")


# --------------------------------------------------------------------------
# Rule IV

def _count(c: Cirquent, cluster: int) -> int:
    return sum(1 for _, node in iter_nodes(c) if node.index.cluster == cluster)


def _check_shared(conclusion: Cirquent, key: Node, app: RuleApplication) -> None:
    in_a, in_b = _count(key.left, app.l), _count(key.right, app.l)
    if not in_a or not in_b:
        raise _violation(f"Rule IV (i): cluster {app.l} must occur in both A and B")
    if in_a + in_b != _count(conclusion, app.l):
        raise _violation(f"Rule IV (i): cluster {app.l} occurs outside A and B")
    if any(node.index.cluster == app.l and node.index.rank != app.j for _, node in iter_nodes(key)):
        raise _mismatch(f"cluster {app.l} is not of rank {app.j}")


def _rule4_backward(conclusion: Cirquent, app: RuleApplication) -> Cirquent:
    _need(app, "k", "i", "l", "j", "r")
    key = _node(conclusion, app.redex, "key oconnective")
    _expect(key, app.k, app.i, "key oconnective")
    _check_order(app, "IV", strict=True)
    _check_shared(conclusion, key, app)
    if _count(conclusion, app.r):
        raise _collision(f"Rule IV: r={app.r} already occurs in the conclusion")
    b = relabel_cluster(key.right, Index(app.l, app.j), Index(app.r, app.j))
    return _well_formed(replace_at(conclusion, app.redex, Node(key.op, key.index, key.left, b)), "premise")


def _rule4_forward(premise: Cirquent, app: RuleApplication) -> Cirquent:
    _need(app, "k", "i", "l", "j", "r")
    key = _node(premise, app.redex, "key oconnective")
    _expect(key, app.k, app.i, "key oconnective")
    _check_order(app, "IV", strict=True)
    if app.r == app.l:
        raise _violation("Rule IV (i): r must differ from l")
    renamed = key.right
    if any(node.index.cluster == app.r and node.index.rank != app.j for _, node in iter_nodes(renamed)):
        raise _mismatch(f"cluster {app.r} is not of rank {app.j}")
    try:
        b = relabel_cluster(renamed, Index(app.r, app.j), Index(app.l, app.j))
    except CirquentError as exc:
        raise _mismatch(str(exc)) from None
    if relabel_cluster(b, Index(app.l, app.j), Index(app.r, app.j)) != renamed:
        raise _mismatch(f"B already mentions cluster {app.l}, so it is not of the form B[l/r]")
    conclusion = replace_at(premise, app.redex, Node(key.op, key.index, key.left, b))
    if _count(conclusion, app.r):
        raise _violation(f"Rule IV (i): r={app.r} still occurs in the conclusion")
    _check_shared(conclusion, Node(key.op, key.index, key.left, b), app)
    return _well_formed(conclusion, "conclusion")


# --------------------------------------------------------------------------
# dispatch

_FORWARD = {
    RuleTag.I_LEFT: _rule1_forward, RuleTag.I_RIGHT: _rule1_forward,
    RuleTag.II_LEFT: _rule2_forward, RuleTag.II_RIGHT: _rule2_forward,
    RuleTag.III: _rule3_forward, RuleTag.IV: _rule4_forward,
}
_BACKWARD = {
    RuleTag.I_LEFT: _rule1_backward, RuleTag.I_RIGHT: _rule1_backward,
    RuleTag.II_LEFT: _rule2_backward, RuleTag.II_RIGHT: _rule2_backward,
    RuleTag.III: _rule3_backward, RuleTag.IV: _rule4_backward,
}


def forward_apply(premise: Cirquent, app: RuleApplication) -> Cirquent:
    """Premise -> conclusion (top-down in a proof)."""
    return _FORWARD[app.rule](premise, app)


def backward_apply(conclusion: Cirquent, app: RuleApplication) -> Cirquent:
    """Conclusion -> premise (bottom-up, as in proof search)."""
    return _BACKWARD[app.rule](conclusion, app)


def step_diagnostic(premise: Cirquent, conclusion: Cirquent, app: RuleApplication) -> Optional[str]:
    """``None`` if ``app`` takes ``premise`` exactly to ``conclusion``, else the reason it does not."""
    try:
        produced = forward_apply(premise, app)
    except CirquentError as exc:
        return f"{exc.kind}: {exc}"
    if produced != conclusion:
        return f"rule produces {render(produced)}, not the recorded cirquent"
    return None


def check_step(premise: Cirquent, conclusion: Cirquent, app: RuleApplication) -> bool:
    return step_diagnostic(premise, conclusion, app) is None


# --------------------------------------------------------------------------
# constructing applications with fresh IDs

def fresh_ids(c: Cirquent, count: int) -> list[int]:
    """The next ``count`` cluster IDs above the current maximum."""
    top = max((node.index.cluster for _, node in iter_nodes(c)), default=0)
    return list(range(top + 1, top + 1 + count))


def lift_application(conclusion: Cirquent, key_path: Path) -> RuleApplication:
    """Backward Rule II that swaps the oconnective at ``key_path`` with its parent."""
    if not key_path:
        raise _mismatch("the root has no parent to swap with")
    redex = key_path[:-1]
    partner = _node(conclusion, redex, "partner oconnective")
    key = _node(conclusion, key_path, "key oconnective")
    if key_path[-1] == LEFT:
        tag, c = RuleTag.II_LEFT, partner.right
    else:
        tag, c = RuleTag.II_RIGHT, partner.left
    sizes = cluster_sizes(conclusion)
    singles = []
    for _, node in iter_nodes(c):
        s = node.index.cluster
        if sizes[s] == 1:
            singles.append(s)
    l = partner.index.cluster
    need = (2 if sizes[l] == 1 else 0) + 2 * len(singles)
    ids = iter(fresh_ids(conclusion, need))
    if sizes[l] == 1:
        m, n = next(ids), next(ids)
    else:
        m = n = l
    split = tuple((s, next(ids), next(ids)) for s in singles)
    return RuleApplication(tag, redex, k=key.index.cluster, i=key.index.rank,
                           l=l, j=partner.index.rank, m=m, n=n, split=split)


def merge_application(conclusion: Cirquent, redex: Path) -> RuleApplication:
    """Backward Rule III merging the two key children of the node at ``redex``."""
    partner = _node(conclusion, redex, "partner oconnective")
    key = _node(conclusion, redex + (LEFT,), "left key oconnective")
    l = partner.index.cluster
    if cluster_sizes(conclusion)[l] == 1:
        m, n = fresh_ids(conclusion, 2)
    else:
        m = n = l
    return RuleApplication(RuleTag.III, redex, k=key.index.cluster, i=key.index.rank,
                           l=l, j=partner.index.rank, m=m, n=n)


def split_application(conclusion: Cirquent, redex: Path, cluster: int) -> RuleApplication:
    """Backward Rule IV renaming ``cluster`` on the right of the key at ``redex``."""
    key = _node(conclusion, redex, "key oconnective")
    rank = next(node.index.rank for _, node in iter_nodes(key) if node.index.cluster == cluster)
    (r,) = fresh_ids(conclusion, 1)
    return RuleApplication(RuleTag.IV, redex, k=key.index.cluster, i=key.index.rank,
                           l=cluster, j=rank, r=r)


def collapse_application(conclusion: Cirquent, outer: Path, inner: Path) -> RuleApplication:
    """Backward Rule I removing the nested same-cluster node at ``inner`` below ``outer``."""
    side = inner[len(outer)]
    node = _node(conclusion, inner, "inner oconnective")
    dropped = node.right if side == LEFT else node.left
    tag = RuleTag.I_LEFT if side == LEFT else RuleTag.I_RIGHT
    return RuleApplication(tag, outer, inner=inner[len(outer) + 1:], inserted=dropped)
