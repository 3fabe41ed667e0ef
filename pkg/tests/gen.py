"""Cirquent generators shared by the test modules.

Exhaustive corpora enumerate tree shapes, canonical labelings (cluster IDs
numbered by first preorder occurrence, rank labels 1..r) and leaf literals.
Random generators draw labels from a :class:`Palette`, which keeps every
cluster on one type and rank and every rank on one type, so anything it
builds is well-formed by construction.
"""

from __future__ import annotations

import itertools
import random
from typing import Iterator, Optional

from rifp.rules import RuleApplication, RuleTag
from rifp.syntax import (LEFT, RIGHT, Cirquent, Index, Literal, Node, Op, Path, cluster_sizes,
                         clusters, iter_nodes, node_at, rename_clusters, replace_at)

# --------------------------------------------------------------------------
# exhaustive corpora

Shape = Optional[tuple]  # None is a leaf


def shapes(n: int) -> Iterator[Shape]:
    """All binary tree shapes with ``n`` internal nodes."""
    if n == 0:
        yield None
        return
    for a in range(n):
        for left in shapes(a):
            for right in shapes(n - 1 - a):
                yield (left, right)


def set_partitions(n: int) -> Iterator[tuple[int, ...]]:
    """Restricted growth strings of length ``n``."""
    def rec(prefix, top):
        if len(prefix) == n:
            yield tuple(prefix)
            return
        for b in range(top + 1):
            yield from rec(prefix + [b], max(top, b + 1))
    yield from rec([], 0)


def labelings(n: int, max_ranks: Optional[int] = None) -> Iterator[list[tuple[Op, int, int]]]:
    """Every well-formed (op, cluster, rank) assignment to ``n`` nodes in preorder, up to renaming."""
    for part in set_partitions(n):
        c = max(part) + 1 if n else 0
        for grouping in set_partitions(c):
            r = max(grouping) + 1 if c else 0
            if max_ranks is not None and r > max_ranks:
                continue
            for order in itertools.permutations(range(1, r + 1)):
                for ops in itertools.product(list(Op), repeat=r):
                    yield [(ops[grouping[part[t]]], part[t] + 1, order[grouping[part[t]]]) for t in range(n)]


def assemble(shape: Shape, labels: list, leaves: list) -> Cirquent:
    labels, leaves = iter(labels), iter(leaves)

    def build(s):
        if s is None:
            return next(leaves)
        op, k, i = next(labels)
        left = build(s[0])
        return Node(op, Index(k, i), left, build(s[1]))
    return build(shape)


def skeletons(max_nodes: int, max_ranks: Optional[int] = None) -> Iterator[tuple[Shape, list, int]]:
    for n in range(max_nodes + 1):
        for s in shapes(n):
            for lab in labelings(n, max_ranks):
                yield s, lab, n + 1


def literals(names: str) -> list[Literal]:
    return [Literal(a, pos) for a in names for pos in (True, False)]


def exhaustive(max_nodes: int, names: str, max_ranks: Optional[int] = None) -> Iterator[Cirquent]:
    lits = literals(names)
    for s, lab, leaves in skeletons(max_nodes, max_ranks):
        for choice in itertools.product(lits, repeat=leaves):
            yield assemble(s, lab, choice)


# --------------------------------------------------------------------------
# random cirquents

class Palette:
    """Hands out indices consistent with everything handed out before."""

    def __init__(self, rng: random.Random, max_rank: int = 4):
        self.rng = rng
        self.max_rank = max_rank
        self.rank_op: dict[int, Op] = {}
        self.cluster_rank: dict[int, int] = {}
        self.reserved: set[int] = set()

    def new_id(self) -> int:
        return max(self.cluster_rank, default=0) + 1

    def ranks_for(self, op: Op, lo: int = 1, hi: Optional[int] = None) -> list[int]:
        hi = self.max_rank if hi is None else hi
        return [r for r in range(lo, hi + 1) if self.rank_op.get(r, op) is op]

    def rank(self, op: Op, lo: int = 1, hi: Optional[int] = None) -> Optional[int]:
        options = self.ranks_for(op, lo, hi)
        if not options:
            return None
        r = self.rng.choice(options)
        self.rank_op[r] = op
        return r

    def fresh(self, op: Op, rank: int) -> Index:
        assert self.rank_op.get(rank, op) is op
        self.rank_op[rank] = op
        k = self.new_id()
        self.cluster_rank[k] = rank
        return Index(k, rank)

    def index(self, op: Op, lo: int = 1, reuse: float = 0.5) -> Optional[Index]:
        old = [k for k, r in self.cluster_rank.items()
               if k not in self.reserved and r >= lo and self.rank_op[r] is op]
        if old and self.rng.random() < reuse:
            k = self.rng.choice(old)
            return Index(k, self.cluster_rank[k])
        r = self.rank(op, lo)
        return None if r is None else self.fresh(op, r)

    def tree(self, nodes: int, names: str = "pqr", lo: int = 1) -> Cirquent:
        if nodes == 0:
            return Literal(self.rng.choice(names), self.rng.random() < 0.5)
        ops = list(Op)
        self.rng.shuffle(ops)
        index = None
        for op in ops:
            index = self.index(op, lo)
            if index is not None:
                break
        if index is None:
            return self.tree(0, names)
        a = self.rng.randint(0, nodes - 1)
        return Node(op, index, self.tree(a, names, lo), self.tree(nodes - 1 - a, names, lo))


def random_cirquent(rng: random.Random, max_nodes: int = 6, names: str = "pqr",
                    max_rank: int = 3) -> Cirquent:
    return Palette(rng, max_rank).tree(rng.randint(0, max_nodes), names)


def random_classical(rng: random.Random, max_nodes: int = 8, names: str = "pqr") -> Cirquent:
    """All clusters singletons."""
    pal = Palette(rng, max_rank=max_nodes + 1)

    def build(nodes):
        if nodes == 0:
            return Literal(rng.choice(names), rng.random() < 0.5)
        op = rng.choice(list(Op))
        a = rng.randint(0, nodes - 1)
        return Node(op, pal.fresh(op, pal.rank(op)), build(a), build(nodes - 1 - a))
    return build(rng.randint(0, max_nodes))


def leaf_paths(c: Cirquent, prefix: Path = ()) -> list[Path]:
    if isinstance(c, Literal):
        return [prefix]
    return leaf_paths(c.left, prefix + (LEFT,)) + leaf_paths(c.right, prefix + (RIGHT,))


def all_paths(c: Cirquent, prefix: Path = ()) -> list[Path]:
    if isinstance(c, Literal):
        return [prefix]
    return [prefix] + all_paths(c.left, prefix + (LEFT,)) + all_paths(c.right, prefix + (RIGHT,))


def _context(pal: Palette, rng: random.Random) -> tuple[Cirquent, Path]:
    """A random tree and one of its leaf positions, to be filled by a redex."""
    outer = pal.tree(rng.randint(0, 2))
    return outer, rng.choice(leaf_paths(outer))


def _plant(outer: Cirquent, hole: Path, redex: Cirquent) -> Cirquent:
    return replace_at(outer, hole, redex)


# --------------------------------------------------------------------------
# rule instances built from the rule schemata
#
# Each builder returns (premise, conclusion, application) with both sides
# assembled directly from the schema; the caller decides which side is the
# input.  ``None`` means the random draw could not satisfy the side
# conditions (for instance no rank left above i) and should be redrawn.

def _rule1(rng: random.Random, tag: RuleTag):
    pal = Palette(rng)
    outer, hole = _context(pal, rng)
    op = rng.choice(list(Op))
    key = pal.index(op)
    if key is None:
        return None
    a_side = pal.tree(rng.randint(0, 3))
    other = pal.tree(rng.randint(0, 2))
    inserted = pal.tree(rng.randint(0, 2))
    inner = rng.choice(all_paths(a_side))
    a = node_at(a_side, inner)
    grown = Node(op, key, a, inserted) if tag is RuleTag.I_LEFT else Node(op, key, inserted, a)
    psi_concl = replace_at(a_side, inner, grown)
    if tag is RuleTag.I_LEFT:
        prem, concl = Node(op, key, a_side, other), Node(op, key, psi_concl, other)
    else:
        prem, concl = Node(op, key, other, a_side), Node(op, key, other, psi_concl)
    app = RuleApplication(tag, hole, inner=inner, inserted=inserted, k=key.cluster, i=key.rank)
    return _plant(outer, hole, prem), _plant(outer, hole, concl), app


def _partners(pal: Palette, rng: random.Random, key_op: Op, i: int):
    """Partner type, rank j >= i, and (l, m, n) per condition (i)."""
    part_op = rng.choice(list(Op))
    j = pal.rank(part_op, lo=i)
    if j is None:
        return None
    if rng.random() < 0.5:
        l_idx = pal.fresh(part_op, j)
        pal.reserved.add(l_idx.cluster)
        return part_op, j, l_idx.cluster, None
    return part_op, j, None, pal.fresh(part_op, j).cluster  # shared: m = n = l


def _rule2(rng: random.Random, tag: RuleTag):
    pal = Palette(rng)
    op = rng.choice(list(Op))
    key = pal.index(op)
    if key is None:
        return None
    i = key.rank
    got = _partners(pal, rng, op, i)
    if got is None:
        return None
    part_op, j, fresh_l, shared_l = got
    outer, hole = _context(pal, rng)
    a = pal.tree(rng.randint(0, 2))
    b = pal.tree(rng.randint(0, 2))
    c = pal.tree(rng.randint(0, 2), lo=i)
    if shared_l is not None:
        l = shared_l
        # give l a second occurrence so it is not a singleton in the conclusion
        spot = rng.choice(leaf_paths(outer))
        outer = replace_at(outer, spot, Node(part_op, Index(l, j), node_at(outer, spot), pal.tree(0)))
        hole = _relocated(hole, spot)
    else:
        l = fresh_l
    inner = Node(op, key, a, b)
    redex = Node(part_op, Index(l, j), inner, c) if tag is RuleTag.II_LEFT else Node(part_op, Index(l, j), c, inner)
    conclusion = _plant(outer, hole, redex)
    sizes = cluster_sizes(conclusion)
    top = max(clusters(conclusion))
    if sizes[l] == 1:
        m, n = top + 1, top + 2
        top += 2
    else:
        m = n = l
    singles = []
    for _, node in iter_nodes(c):
        if sizes[node.index.cluster] == 1:
            singles.append(node.index.cluster)
    split = []
    for s in singles:
        split.append((s, top + 1, top + 2))
        top += 2
    c1 = rename_clusters(c, {s: x for s, x, _ in split})
    c2 = rename_clusters(c, {s: y for s, _, y in split})
    if tag is RuleTag.II_LEFT:
        prem = Node(op, key, Node(part_op, Index(m, j), a, c1), Node(part_op, Index(n, j), b, c2))
    else:
        prem = Node(op, key, Node(part_op, Index(m, j), c1, a), Node(part_op, Index(n, j), c2, b))
    app = RuleApplication(tag, hole, k=key.cluster, i=i, l=l, j=j, m=m, n=n, split=tuple(split))
    return _plant(outer, hole, prem), conclusion, app


def _relocated(hole: Path, spot: Path) -> Path:
    """Where ``hole`` ends up after the leaf at ``spot`` is pushed down to the left."""
    if hole == spot:
        return hole + (LEFT,)
    return hole


def _rule3(rng: random.Random):
    pal = Palette(rng)
    op = rng.choice(list(Op))
    key = pal.index(op)
    if key is None:
        return None
    i = key.rank
    got = _partners(pal, rng, op, i)
    if got is None:
        return None
    part_op, j, fresh_l, shared_l = got
    outer, hole = _context(pal, rng)
    a, b, c, d = (pal.tree(rng.randint(0, 1)) for _ in range(4))
    if shared_l is not None:
        l = shared_l
        spot = rng.choice(leaf_paths(outer))
        outer = replace_at(outer, spot, Node(part_op, Index(l, j), node_at(outer, spot), pal.tree(0)))
        hole = _relocated(hole, spot)
    else:
        l = fresh_l
    redex = Node(part_op, Index(l, j), Node(op, key, a, b), Node(op, key, c, d))
    conclusion = _plant(outer, hole, redex)
    if cluster_sizes(conclusion)[l] == 1:
        top = max(clusters(conclusion))
        m, n = top + 1, top + 2
    else:
        m = n = l
    prem = Node(op, key, Node(part_op, Index(m, j), a, c), Node(part_op, Index(n, j), b, d))
    app = RuleApplication(RuleTag.III, hole, k=key.cluster, i=i, l=l, j=j, m=m, n=n)
    return _plant(outer, hole, prem), conclusion, app


def _with_cluster(pal: Palette, rng: random.Random, tree: Cirquent, op: Op, index: Index) -> Cirquent:
    spot = rng.choice(all_paths(tree))
    sub = node_at(tree, spot)
    extra = pal.tree(rng.randint(0, 1))
    grown = Node(op, index, sub, extra) if rng.random() < 0.5 else Node(op, index, extra, sub)
    return replace_at(tree, spot, grown)


def _rule4(rng: random.Random):
    pal = Palette(rng)
    op = rng.choice(list(Op))
    key = pal.index(op)
    if key is None:
        return None
    i = key.rank
    l_op = rng.choice(list(Op))
    j = pal.rank(l_op, lo=i + 1)
    if j is None:
        return None
    l_idx = pal.fresh(l_op, j)
    pal.reserved.add(l_idx.cluster)
    outer, hole = _context(pal, rng)
    a = pal.tree(rng.randint(0, 2))
    b = pal.tree(rng.randint(0, 2))
    for _ in range(rng.randint(1, 2)):
        a = _with_cluster(pal, rng, a, l_op, l_idx)
    for _ in range(rng.randint(1, 2)):
        b = _with_cluster(pal, rng, b, l_op, l_idx)
    conclusion = _plant(outer, hole, Node(op, key, a, b))
    r = max(clusters(conclusion)) + 1
    prem = _plant(outer, hole, Node(op, key, a, rename_clusters(b, {l_idx.cluster: r})))
    app = RuleApplication(RuleTag.IV, hole, k=key.cluster, i=i, l=l_idx.cluster, j=j, r=r)
    return prem, conclusion, app


def rule_instance(rng: random.Random, tag: RuleTag):
    """(premise, conclusion, application) drawn from the schema of ``tag``."""
    while True:
        if tag in (RuleTag.I_LEFT, RuleTag.I_RIGHT):
            got = _rule1(rng, tag)
        elif tag in (RuleTag.II_LEFT, RuleTag.II_RIGHT):
            got = _rule2(rng, tag)
        elif tag is RuleTag.III:
            got = _rule3(rng)
        else:
            got = _rule4(rng)
        if got is not None:
            return got
