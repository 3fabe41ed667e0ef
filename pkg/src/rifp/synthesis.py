"""Proof synthesis by the constructive completeness argument.

Working bottom-up from the target cirquent, three phases rewrite it into a
classical cirquent, recording each backward rule application:

1. lift every oconnective above its higher-ranked ancestors (Rule II),
   ranks in ascending order, shallowest offender first;
2. collapse nested same-cluster pairs (Rule I) until none remain;
3. per rank ascending: merge each non-singleton cluster pairwise at its
   deepest common ancestor (Rule II lifts, then Rule III), then split
   higher-ranked clusters shared across each oconnective of the rank
   (Rule IV), shallowest first.

If the classical residue is a tautology the trace, read top-down, is a
proof.  Otherwise the input is invalid and a counterexample is reported.

Where the procedure leaves a choice open, the shallowest, then leftmost,
then lowest-ID candidate is taken.  Termination measures (the
i-distribution in phase 1, the four-component state in phase 3) and the
structural properties the argument relies on are checked after every
rewrite; a failure raises :class:`SynthesisError` instead of continuing.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Optional, Union

from .errors import CapExceeded, CirquentError, SynthesisError
from .proof import Proof, Step
from .rules import (RuleApplication, backward_apply, collapse_application, lift_application,
                    merge_application, split_application)
from .semantics import (DEFAULT_MAX_ATOMS, DEFAULT_MAX_CLUSTERS, classical_tautology,
                        classical_value, valid)
from .syntax import (Cirquent, Node, Path, atoms, cluster_sizes, clusters, format_path,
                     internal_at, is_classical, is_prefix, iter_nodes, rank_labels,
                     require_well_formed)

Log = Optional[Callable[[str], None]]


@dataclass
class Pin:
    """A tracked oconnective, re-aimed by path after every rewrite."""

    target: Path
    label: str = "none"  # unused | used | none


@dataclass(frozen=True)
class IDistribution:
    """Counts of rank-i oconnectives per level, trailing zeros dropped.

    Ordered as a termination measure: at the first level where two
    distributions differ, the one with MORE oconnectives is the smaller.
    """

    counts: tuple[int, ...]

    def __lt__(self, other: "IDistribution") -> bool:
        for x, y in zip(_padded(self.counts, other.counts), _padded(other.counts, self.counts)):
            if x != y:
                return x > y
        return False

    def __le__(self, other: "IDistribution") -> bool:
        return self == other or self < other

    def __str__(self) -> str:
        return "(" + "".join(f"{n}," for n in self.counts) + "0,...)"


def _padded(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    return a + (0,) * max(0, len(b) - len(a))


class StateTuple(NamedTuple):
    """Lexicographically ordered (x, y, z, t)."""

    x: int
    y: int
    z: int
    t: int


@dataclass(frozen=True)
class TraceEntry:
    stage: str
    app: RuleApplication
    conclusion: Cirquent
    premise: Cirquent
    measure: Union[IDistribution, StateTuple, None] = None

    def log_line(self) -> str:
        measure = "-" if self.measure is None else str(tuple(self.measure)) \
            if isinstance(self.measure, StateTuple) else str(self.measure)
        return f"step {self.stage} rule={self.app.rule.value} at={format_path(self.app.redex)} measure={measure}"


@dataclass(frozen=True)
class SynthesisResult:
    proof: Optional[Proof] = None
    counterexample: Optional[dict[str, bool]] = None
    trace: tuple[TraceEntry, ...] = field(default=(), repr=False)

    @property
    def proved(self) -> bool:
        return self.proof is not None


# --------------------------------------------------------------------------
# measures and properties

def i_distribution_of(c: Cirquent, i: int) -> IDistribution:
    counts: list[int] = []
    for path, node in iter_nodes(c):
        if node.index.rank == i:
            level = len(path)
            if level >= len(counts):
                counts.extend([0] * (level + 1 - len(counts)))
            counts[level] += 1
    return IDistribution(tuple(counts))


def state_of(c: Cirquent, k: int, i: int, m: int, a: Pin, b: Optional[Pin]) -> StateTuple:
    sizes = cluster_sizes(c)
    try:
        a_node = internal_at(c, a.target)
        b_node = internal_at(c, b.target) if m == 2 else None
    except (CirquentError, AttributeError) as exc:
        raise CirquentError(f"invalid pins: {exc}", kind="invalid-pins") from None
    if m not in (1, 2):
        raise CirquentError(f"m must be 1 or 2, got {m}", kind="invalid-pins")
    if a_node.index.cluster != k or (b_node is not None and b_node.index.cluster != k):
        raise CirquentError(f"pinned oconnectives are not in cluster {k}", kind="invalid-pins")
    if a_node.index.rank != i:
        raise CirquentError(f"cluster {k} is not of rank {i}", kind="invalid-pins")
    if m == 2 and a.target == b.target:
        raise CirquentError("m=2 needs two distinct pinned oconnectives", kind="invalid-pins")
    x = sizes[k]
    z = len(a.target) + len(b.target) if m == 2 else len(a.target) - 1
    ranks = {node.index.cluster: node.index.rank for _, node in iter_nodes(c)}
    t = sum(n for cl, n in sizes.items() if cl != k and n > 1 and ranks[cl] == i)
    return StateTuple(x, x - m, z, t)


def has_property1(c: Cirquent) -> bool:
    """No oconnective has an ancestor of strictly higher rank."""
    def walk(sub, ceiling):
        if not isinstance(sub, Node):
            return True
        rank = sub.index.rank
        if rank < ceiling:
            return False
        return walk(sub.left, rank) and walk(sub.right, rank)
    return walk(c, 0)


def has_property2(c: Cirquent) -> bool:
    """No oconnective has a descendant in its own cluster."""
    def walk(sub, above):
        if not isinstance(sub, Node):
            return True
        k = sub.index.cluster
        if k in above:
            return False
        above.add(k)
        ok = walk(sub.left, above) and walk(sub.right, above)
        above.discard(k)
        return ok
    return walk(c, set())


def _order(path: Path, node: Node):
    return (len(path), path, node.index.cluster)


# --------------------------------------------------------------------------
# the three phases

class _Run:
    def __init__(self, c: Cirquent, log: Log):
        self.d = c
        self.trace: list[TraceEntry] = []
        self.log = log

    def fire(self, stage: str, app: RuleApplication) -> None:
        try:
            premise = backward_apply(self.d, app)
        except CirquentError as exc:
            raise SynthesisError(f"step {stage}: prescribed {app.rule.value} at "
                                 f"{format_path(app.redex)} is blocked ({exc.kind}: {exc})") from exc
        self.trace.append(TraceEntry(stage, app, self.d, premise))
        self.d = premise

    def note(self, measure) -> None:
        entry = self.trace[-1]
        self.trace[-1] = TraceEntry(entry.stage, entry.app, entry.conclusion, entry.premise, measure)
        if self.log is not None:
            self.log(self.trace[-1].log_line())

    # phase 1 ---------------------------------------------------------------

    def lift_all(self) -> None:
        for i in rank_labels(self.d):
            while True:
                nodes = dict(iter_nodes(self.d))
                offenders = [p for p, node in nodes.items()
                             if node.index.rank == i
                             and any(nodes[p[:t]].index.rank > i for t in range(len(p)))]
                if not offenders:
                    break
                a = min(offenders, key=lambda p: _order(p, nodes[p]))
                while a and internal_at(self.d, a[:-1]).index.rank > i:
                    before = i_distribution_of(self.d, i)
                    self.fire("1", lift_application(self.d, a))
                    a = a[:-1]
                    after = i_distribution_of(self.d, i)
                    if not after < before:
                        raise SynthesisError(f"step 1: {i}-distribution did not decrease: {before} -> {after}")
                    self.note(after)

    # phase 2 ---------------------------------------------------------------

    def collapse_all(self) -> None:
        while True:
            pair = _nested_pair(self.d)
            if pair is None:
                return
            self.fire("2", collapse_application(self.d, *pair))
            self.note(None)
            if not has_property1(self.d):
                raise SynthesisError("step 2: a connective now has a higher-ranked ancestor")

    # phase 3 ---------------------------------------------------------------

    def check_properties(self, stage: str) -> None:
        if not has_property1(self.d):
            raise SynthesisError(f"step {stage}: a connective now has a higher-ranked ancestor")
        if not has_property2(self.d):
            raise SynthesisError(f"step {stage}: a cluster now nests inside itself")

    def decrease(self, stage: str, before: Optional[StateTuple], after: StateTuple) -> None:
        if before is not None and not after < before:
            raise SynthesisError(f"step {stage}: state did not decrease: {tuple(before)} -> {tuple(after)}")

    def singletonize(self, i: int) -> None:
        while True:
            sizes = cluster_sizes(self.d)
            ranks = {node.index.cluster: node.index.rank for _, node in iter_nodes(self.d)}
            shared = sorted(k for k, n in sizes.items() if n > 1 and ranks[k] == i)
            if not shared:
                return
            self.merge_cluster(shared[0], i)

    def merge_cluster(self, k: int, i: int) -> None:
        state = None
        while cluster_sizes(self.d)[k] > 1:
            # 3.1.1: the pair whose nearest common ancestor is deepest
            members = sorted(p for p, node in iter_nodes(self.d) if node.index.cluster == k)
            best = None
            for x in range(len(members)):
                for y in range(x + 1, len(members)):
                    a, b = members[x], members[y]
                    if is_prefix(a, b):
                        raise SynthesisError(f"step 3.1.1: cluster {k} has a nested pair")
                    n = 0
                    while a[n] == b[n]:
                        n += 1
                    key = (-n, a[:n], a, b)
                    if best is None or key < best:
                        best = key
            _, nca, a, b = best
            level = len(nca)
            pa, pb = Pin(a), Pin(b)
            new = state_of(self.d, k, i, 2, pa, pb)
            self.decrease("3.1.1", state, new)
            state = new
            # 3.1.2 / 3.1.3: lift a, then b, up to just below their nca
            for pin, stage in ((pa, "3.1.2"), (pb, "3.1.3")):
                while len(pin.target) > level + 1:
                    self.fire(stage, lift_application(self.d, pin.target))
                    pin.target = pin.target[:-1]
                    new = state_of(self.d, k, i, 2, pa, pb)
                    self.decrease(stage, state, new)
                    state = new
                    self.note(state)
                    self.check_properties(stage)
            # 3.1.4: merge the two keys into one
            self.fire("3.1.4", merge_application(self.d, nca))
            pa.target = nca
            new = state_of(self.d, k, i, 1, pa, None)
            self.decrease("3.1.4", state, new)
            state = new
            self.note(state)
            self.check_properties("3.1.4")

    def split_shared(self, i: int) -> None:
        pins = [Pin(p, "unused") for p, node in iter_nodes(self.d) if node.index.rank == i]
        pins.sort(key=lambda pin: (len(pin.target), pin.target))
        for pin in pins:
            while True:
                cluster = _shared_higher_cluster(self.d, pin.target, i)
                if cluster is None:
                    break
                self.fire("3.2", split_application(self.d, pin.target, cluster))
                self.note(None)
                self.check_properties("3.2")
            pin.label = "used"


def _nested_pair(c: Cirquent) -> Optional[tuple[Path, Path]]:
    nodes = list(iter_nodes(c))
    nodes.sort(key=lambda item: _order(*item))
    for outer, node in nodes:
        below = [p for p, other in nodes
                 if other.index.cluster == node.index.cluster and len(p) > len(outer) and is_prefix(outer, p)]
        if below:
            return outer, below[0]
    return None


def _shared_higher_cluster(c: Cirquent, path: Path, i: int) -> Optional[int]:
    """Smallest cluster of rank > i met on both sides of ``path`` and nowhere else."""
    key = internal_at(c, path)
    left = {n.index.cluster: n.index.rank for _, n in iter_nodes(key.left)}
    right = {n.index.cluster for _, n in iter_nodes(key.right)}
    sizes = cluster_sizes(c)
    inside = cluster_sizes(key)
    for cl in sorted(left):
        if left[cl] > i and cl in right and inside[cl] == sizes[cl]:
            return cl
    return None


def step1(c: Cirquent, log: Log = None) -> tuple[Cirquent, list[TraceEntry]]:
    require_well_formed(c)
    run = _Run(c, log)
    run.lift_all()
    return run.d, run.trace


def step2(c: Cirquent, log: Log = None) -> tuple[Cirquent, list[TraceEntry]]:
    if not has_property1(c):
        raise CirquentError("step 2 expects no connective below a higher-ranked one", kind="precondition")
    run = _Run(c, log)
    run.collapse_all()
    return run.d, run.trace


def step3(c: Cirquent, log: Log = None) -> tuple[Cirquent, list[TraceEntry]]:
    if not (has_property1(c) and has_property2(c)):
        raise CirquentError("step 3 expects no connective below a higher-ranked one and no nested cluster",
                            kind="precondition")
    run = _Run(c, log)
    for i in rank_labels(c):
        run.singletonize(i)
        run.split_shared(i)
    if not is_classical(run.d):
        raise SynthesisError("step 3 ended with a non-classical cirquent")
    return run.d, run.trace


def synthesize(c: Cirquent, log: Log = None) -> tuple[Cirquent, list[TraceEntry]]:
    """Run all three phases; returns the classical residue and the full trace."""
    c1, t1 = step1(c, log)
    c2, t2 = step2(c1, log)
    c3, t3 = step3(c2, log)
    return c3, t1 + t2 + t3


def _assemble(residue: Cirquent, trace: list[TraceEntry]) -> Proof:
    steps = [Step(residue)]
    for entry in reversed(trace):
        steps.append(Step(entry.conclusion, entry.app))
    return Proof(tuple(steps))


def prove(c: Cirquent, *, max_atoms: Optional[int] = DEFAULT_MAX_ATOMS,
          max_clusters: Optional[int] = DEFAULT_MAX_CLUSTERS, log: Log = None) -> SynthesisResult:
    """Build a proof of ``c`` or return a falsifying interpretation."""
    require_well_formed(c)
    if max_atoms is not None and len(atoms(c)) > max_atoms:
        raise CapExceeded(f"{len(atoms(c))} atoms exceeds the cap of {max_atoms}")
    if max_clusters is not None and len(clusters(c)) > max_clusters:
        raise CapExceeded(f"{len(clusters(c))} clusters exceeds the cap of {max_clusters}")

    if is_classical(c):
        residue, trace = c, []
    else:
        residue, trace = synthesize(c, log)
    if classical_tautology(residue, max_atoms=None):
        return SynthesisResult(proof=_assemble(residue, trace), trace=tuple(trace))

    verdict = valid(c, max_atoms=max_atoms, max_clusters=max_clusters)
    if verdict.valid:
        raise SynthesisError("classical residue is not a tautology, yet the input is valid")
    star = verdict.counterexample
    if classical_value(residue, {a: star.get(a, False) for a in atoms(residue)}):
        raise SynthesisError("counterexample does not falsify the classical residue")
    return SynthesisResult(counterexample=star, trace=tuple(trace))
