"""Signatures, labelled graphs, validation, and canonical encoding.

A signature lists the directions an edge end-point may carry (each with an
opposite direction leading back) together with the node labels.  Every label
fixes the exact set of directions available at nodes carrying it, and a
non-empty subset of labels is marked initial.  Graphs over a signature are
finite pointed graphs whose edges form a partial function ``(node, dir) ->
node`` that is symmetric under taking opposites; the unique node with an
initial label is the starting point for automata.

A direction may be declared as its own opposite.  This is required whenever
the total number of directions is odd, and the generated worst-case families
use such signatures.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

__all__ = [
    "GwalkError",
    "StructureError",
    "SignatureMismatchError",
    "DisconnectedGraphError",
    "Direction",
    "NodeLabel",
    "Signature",
    "Problem",
    "ValidationReport",
    "validate_signature",
    "Graph",
    "GraphBuilder",
    "validate_graph",
    "connected_components",
    "canonical_encode",
    "isomorphic",
]


class GwalkError(Exception):
    """Base class for errors raised by this package."""


class StructureError(GwalkError):
    """An object references labels, directions or nodes that do not exist."""


class SignatureMismatchError(GwalkError):
    """Two objects that must share a signature do not."""


class DisconnectedGraphError(GwalkError):
    """The operation requires a connected graph."""


@dataclass(frozen=True)
class Direction:
    """An edge end-point label; ``opposite`` names the direction leading back."""

    name: str
    opposite: str


@dataclass(frozen=True)
class NodeLabel:
    """A node label with its initial flag and available direction set."""

    name: str
    initial: bool
    dirs: frozenset[str]


@dataclass(frozen=True)
class Signature:
    """Directions with an opposite involution plus labelled direction sets.

    Declaration order of ``directions`` is significant: it is the fixed total
    order used by canonical traversal and by deterministic searches elsewhere
    in the package.
    """

    directions: tuple[Direction, ...]
    labels: tuple[NodeLabel, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "_opp", {d.name: d.opposite for d in self.directions})
        object.__setattr__(self, "_label", {a.name: a for a in self.labels})

    @classmethod
    def from_pairs(
        cls,
        pairs: Iterable[tuple[str, str]],
        labels: Iterable[tuple[str, bool, Iterable[str]]],
        self_opposite: Iterable[str] = (),
    ) -> "Signature":
        """Build a signature from opposite pairs plus optional self-opposite names."""
        dirs: list[Direction] = []
        for d, e in pairs:
            dirs.append(Direction(d, e))
            dirs.append(Direction(e, d))
        for d in self_opposite:
            dirs.append(Direction(d, d))
        labs = tuple(NodeLabel(n, init, frozenset(ds)) for n, init, ds in labels)
        return cls(tuple(dirs), labs)

    @property
    def dir_names(self) -> tuple[str, ...]:
        return tuple(d.name for d in self.directions)

    @property
    def label_names(self) -> tuple[str, ...]:
        return tuple(a.name for a in self.labels)

    @property
    def initial_labels(self) -> tuple[str, ...]:
        return tuple(a.name for a in self.labels if a.initial)

    def opposite(self, d: str) -> str:
        try:
            return self._opp[d]
        except KeyError:
            raise StructureError(f"unknown direction {d!r}") from None

    def has_direction(self, d: str) -> bool:
        return d in self._opp

    def label(self, name: str) -> NodeLabel:
        try:
            return self._label[name]
        except KeyError:
            raise StructureError(f"unknown label {name!r}") from None

    def has_label(self, name: str) -> bool:
        return name in self._label

    def dirs_of(self, label: str) -> tuple[str, ...]:
        """Direction set of ``label`` in signature declaration order."""
        ds = self.label(label).dirs
        return tuple(d for d in self.dir_names if d in ds)


@dataclass(frozen=True)
class Problem:
    """One validation finding.

    ``kind`` is ``"structural"`` for dangling references (unknown labels,
    directions or nodes) and ``"invariant"`` for well-formed data violating a
    definitional requirement.
    """

    kind: str
    code: str
    subject: str
    detail: str


@dataclass
class ValidationReport:
    problems: list[Problem] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.problems

    @property
    def structural(self) -> list[Problem]:
        return [p for p in self.problems if p.kind == "structural"]

    @property
    def invariants(self) -> list[Problem]:
        return [p for p in self.problems if p.kind == "invariant"]

    def add(self, kind: str, code: str, subject: str, detail: str) -> None:
        self.problems.append(Problem(kind, code, subject, detail))

    def summary(self) -> str:
        if self.ok:
            return "ok"
        return "; ".join(f"[{p.kind}] {p.code} at {p.subject}: {p.detail}" for p in self.problems)


def validate_signature(sig: Signature) -> ValidationReport:
    """Check a signature: involutive opposites, a non-empty initial label set,
    and per-label direction sets contained in the declared directions."""
    rep = ValidationReport()
    seen: set[str] = set()
    for d in sig.directions:
        if d.name in seen:
            rep.add("structural", "duplicate-direction", d.name, "direction declared twice")
        seen.add(d.name)
    for d in sig.directions:
        if d.opposite not in seen:
            rep.add("structural", "unknown-opposite", d.name,
                    f"opposite {d.opposite!r} is not a declared direction")
        elif sig.opposite(d.opposite) != d.name:
            rep.add("invariant", "opposite-not-involutive", d.name,
                    f"-(-{d.name}) = {sig.opposite(d.opposite)!r}, expected {d.name!r}")
    lab_seen: set[str] = set()
    for a in sig.labels:
        if a.name in lab_seen:
            rep.add("structural", "duplicate-label", a.name, "label declared twice")
        lab_seen.add(a.name)
        for d in sorted(a.dirs):
            if d not in seen:
                rep.add("structural", "unknown-direction", a.name,
                        f"label uses undeclared direction {d!r}")
    if not any(a.initial for a in sig.labels):
        rep.add("invariant", "no-initial-label", "<signature>",
                "at least one label must be initial")
    return rep


class Graph:
    """Finite pointed graph over a signature.

    ``edges`` is the full partial function: both half-edges of every physical
    edge are present, so ``edges[(v, d)] == u`` implies
    ``edges[(u, -d)] == v``.  Instances are immutable by convention; nothing
    in the package mutates a graph after construction.  Node ids are opaque
    strings and equality of graphs is decided by :func:`canonical_encode`,
    never by ids.
    """

    __slots__ = ("sig", "nodes", "initial", "edges", "_labels")

    def __init__(
        self,
        sig: Signature,
        nodes: Iterable[tuple[str, str]],
        initial: str,
        edges: Mapping[tuple[str, str], str],
    ) -> None:
        self.sig = sig
        self.nodes: tuple[tuple[str, str], ...] = tuple((v, a) for v, a in nodes)
        self.initial = initial
        self.edges: dict[tuple[str, str], str] = dict(edges)
        self._labels = {v: a for v, a in self.nodes}

    @property
    def node_ids(self) -> tuple[str, ...]:
        return tuple(v for v, _ in self.nodes)

    @property
    def node_count(self) -> int:
        return len(self.nodes)

    def label_of(self, v: str) -> str:
        try:
            return self._labels[v]
        except KeyError:
            raise StructureError(f"unknown node {v!r}") from None

    def step(self, v: str, d: str) -> str | None:
        return self.edges.get((v, d))

    def __repr__(self) -> str:
        return f"Graph({self.node_count} nodes, initial={self.initial!r})"


class GraphBuilder:
    """Incremental construction of a graph; ``edge`` installs both halves."""

    def __init__(self, sig: Signature) -> None:
        self.sig = sig
        self._nodes: list[tuple[str, str]] = []
        self._ids: set[str] = set()
        self._edges: dict[tuple[str, str], str] = {}

    def node(self, v: str, label: str) -> str:
        if v in self._ids:
            raise StructureError(f"node {v!r} added twice")
        self._ids.add(v)
        self._nodes.append((v, label))
        return v

    def edge(self, v: str, d: str, u: str) -> None:
        e = self.sig.opposite(d)
        for key, target in (((v, d), u), ((u, e), v)):
            old = self._edges.get(key)
            if old is not None and old != target:
                raise StructureError(f"conflicting edge at {key}: {old!r} vs {target!r}")
            self._edges[key] = target

    def has_slot(self, v: str, d: str) -> bool:
        return (v, d) in self._edges

    def build(self, initial: str) -> Graph:
        return Graph(self.sig, self._nodes, initial, self._edges)


def validate_graph(g: Graph, sig: Signature | None = None) -> ValidationReport:
    """Check a graph against a signature: edge symmetry, degree consistency
    (``v+d`` defined exactly when ``d`` is a direction of ``v``'s label),
    the initial label appearing exactly at the initial node, and connectivity."""
    sig = sig if sig is not None else g.sig
    rep = ValidationReport()
    ids = set()
    for v, a in g.nodes:
        if v in ids:
            rep.add("structural", "duplicate-node", v, "node id appears twice")
        ids.add(v)
        if not sig.has_label(a):
            rep.add("structural", "unknown-label", v, f"label {a!r} is not in the signature")
    if g.initial not in ids:
        rep.add("structural", "unknown-initial", g.initial, "initial node id not present")
    for (v, d), u in g.edges.items():
        if v not in ids or u not in ids:
            rep.add("structural", "unknown-node", f"{v}+{d}", "edge endpoint not present")
            continue
        if not sig.has_direction(d):
            rep.add("structural", "unknown-direction", f"{v}+{d}", f"direction {d!r} not declared")
            continue
        back = g.edges.get((u, sig.opposite(d)))
        if back != v:
            rep.add("invariant", "asymmetric-edge", f"{v}+{d}",
                    f"{v}+{d}={u} but {u}+{sig.opposite(d)}={back!r}")
    if rep.structural:
        return rep
    for v, a in g.nodes:
        dirs = sig.label(a).dirs
        for d in sig.dir_names:
            defined = (v, d) in g.edges
            if defined and d not in dirs:
                rep.add("invariant", "extra-edge", f"{v}+{d}",
                        f"edge defined but {d!r} not in the direction set of {a!r}")
            if not defined and d in dirs:
                rep.add("invariant", "missing-edge", f"{v}+{d}",
                        f"label {a!r} requires an edge in direction {d!r}")
        if sig.label(a).initial != (v == g.initial):
            if sig.label(a).initial:
                rep.add("invariant", "initial-label-off-initial-node", v,
                        f"initial label {a!r} on a non-initial node")
            else:
                rep.add("invariant", "non-initial-label-at-initial-node", v,
                        f"initial node carries non-initial label {a!r}")
    if g.nodes:
        comps = connected_components(g)
        if len(comps) > 1:
            rep.add("invariant", "disconnected", "<graph>",
                    f"{len(comps)} connected components")
    return rep


def connected_components(g: Graph) -> list[list[str]]:
    """Partition of the nodes under undirected reachability along edges."""
    adj: dict[str, set[str]] = {v: set() for v, _ in g.nodes}
    for (v, _), u in g.edges.items():
        if v in adj and u in adj:
            adj[v].add(u)
            adj[u].add(v)
    comps: list[list[str]] = []
    left = dict(adj)
    for start, _ in g.nodes:
        if start not in left:
            continue
        comp = [start]
        del left[start]
        frontier = [start]
        while frontier:
            nxt: list[str] = []
            for v in frontier:
                for u in sorted(adj[v]):
                    if u in left:
                        del left[u]
                        comp.append(u)
                        nxt.append(u)
            frontier = nxt
        comps.append(comp)
    return comps


def canonical_encode(g: Graph) -> bytes:
    """Canonical byte code of a pointed graph, equal for two graphs exactly
    when a label- and direction-preserving isomorphism maps one initial node
    to the other.

    The code is produced by a breadth-first traversal from the initial node
    that expands edges in signature declaration order.  Because edges form a
    partial function, the traversal is fully determined by the structure, so
    the numbering it assigns is canonical.  Raises
    :class:`DisconnectedGraphError` when some node is unreachable.
    """
    sig = g.sig
    index: dict[str, int] = {g.initial: 0}
    order: list[str] = [g.initial]
    pos = 0
    while pos < len(order):
        v = order[pos]
        pos += 1
        for d in sig.dir_names:
            u = g.edges.get((v, d))
            if u is not None and u not in index:
                index[u] = len(order)
                order.append(u)
    if len(order) != g.node_count:
        missing = sorted(set(g.node_ids) - set(order))
        raise DisconnectedGraphError(f"unreachable nodes: {missing}")
    parts: list[str] = []
    for v in order:
        arcs = ",".join(
            f"{d}>{index[g.edges[(v, d)]]}"
            for d in sig.dir_names
            if (v, d) in g.edges
        )
        parts.append(f"{g.label_of(v)}:{arcs}")
    return ("GW1;" + ";".join(parts)).encode("utf-8")


def isomorphic(g1: Graph, g2: Graph) -> bool:
    """Equality of pointed graphs up to node renaming (same signature)."""
    if g1.sig != g2.sig:
        raise SignatureMismatchError("graphs are over different signatures")
    return canonical_encode(g1) == canonical_encode(g2)
