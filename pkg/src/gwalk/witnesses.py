"""Generator families on which the inverse-image construction needs many states.

The families are built in tiers over a shared direction roster containing the
pairs a/-a and b/-b:

* start blocks (``H``): two horizontal chains joined by two bridges that are
  locally indistinguishable from the loops carried by every other chain node;
  an automaton starting inside can count its way out through the single
  external edge, while finding the start node from outside is meant to be
  expensive.  This is a desk-scale variant: the published construction
  additionally routes every horizontal edge through a one-way gadget of
  factorial size, which this package deliberately omits, so the hardness
  guarantee is probed empirically rather than certified.
* numbered chains (``F``): a chain of n cells with one start block attached
  at position i and look-alike fake blocks everywhere else; the escape
  automaton leaves the chain in state q_i.
* counting graphs (``G-counter``) and probe graphs (``G-probe``): close a
  numbered chain with a decrement tail ending in a final test node, or with
  a hub node joined to one numbered chain plus k-1 anonymous chains.  The
  counter automaton accepts the image of a counting graph exactly when the
  encoded number matches the tail length, and the image of a probe graph
  exactly when the hub's query label matches the chain's exit direction.

All constructions are deterministic functions of their parameters.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .core import Graph, GwalkError, Signature, StructureError
from .engine import WalkingAutomaton
from .hom import Enter, EXIT, Homomorphism, Pattern, PatternResult, simulate_in_pattern

__all__ = [
    "standard_directions",
    "base_signature",
    "chain_signature",
    "witness_signature",
    "CyclicOrder",
    "cyclic_direction_order",
    "PluggableSubgraph",
    "start_block",
    "escape_automaton",
    "numbered_chain",
    "ring_homomorphism",
    "counting_graph",
    "probe_graph",
    "counter_automaton",
    "ProbeFinding",
    "ProbeReport",
    "distinguishability_probe",
    "SweepReport",
    "sweep_tables",
]

_START = "st"
_LEFT = "cl"
_MID = "cm"
_RIGHT = "cr"


def standard_directions(k: int) -> tuple[list[tuple[str, str]], list[str]]:
    """Opposite pairs plus self-opposite names for a k-direction roster.

    Always contains the pairs (a, -a) and (b, -b); odd k forces one
    self-opposite direction, named z.
    """
    if k < 4:
        raise ValueError("need at least 4 directions (the pairs a/-a and b/-b)")
    pairs = [("a", "-a"), ("b", "-b")]
    for i in range(1, (k - 4) // 2 + 1):
        pairs.append((f"c{i}", f"-c{i}"))
    return pairs, (["z"] if k % 2 else [])


def base_signature(k: int) -> Signature:
    """Signature of the start blocks: chain-start, left-end, middle and
    right-end labels over k directions."""
    pairs, selfopp = standard_directions(k)
    labels = [
        (_START, True, {"a", "b", "-b"}),
        (_LEFT, False, {"a", "b", "-b"}),
        (_MID, False, {"a", "-a", "b", "-b"}),
        (_RIGHT, False, {"-a", "b", "-b"}),
    ]
    return Signature.from_pairs(pairs, labels, selfopp)


def _chain_labels(k: int) -> list[tuple[str, bool, set[str]]]:
    pairs, selfopp = standard_directions(k)
    dirs = [d for p in pairs for d in p] + selfopp
    labels: list[tuple[str, bool, set[str]]] = [
        ("c_st", False, {"-a", "b"}),
        ("c'", False, {"-a", "-b", "b"}),
        ("go'_a", False, {"-a", "-b", "a"}),
        ("go'_b", False, {"-a", "-b", "b"}),
    ]
    for d in dirs:
        if d == "-a":
            labels.append(("go_-a", False, {"-b", "-a"}))
        else:
            labels.append((f"go_{d}", False, {"-a", d}))
    return labels


def chain_signature(k: int) -> Signature:
    """Extends :func:`base_signature` with the numbered-chain labels."""
    pairs, selfopp = standard_directions(k)
    labels = [
        (_START, True, {"a", "b", "-b"}),
        (_LEFT, False, {"a", "b", "-b"}),
        (_MID, False, {"a", "-a", "b", "-b"}),
        (_RIGHT, False, {"-a", "b", "-b"}),
    ] + [(n, i, set(ds)) for n, i, ds in _chain_labels(k)]
    return Signature.from_pairs(pairs, labels, selfopp)


@dataclass(frozen=True)
class CyclicOrder:
    """Cyclic arrangement of all directions in which no direction is followed
    within two positions by its opposite."""

    order: tuple[str, ...]

    def next(self, d: str) -> str:
        i = self.order.index(d)
        return self.order[(i + 1) % len(self.order)]

    def prev(self, d: str) -> str:
        i = self.order.index(d)
        return self.order[(i - 1) % len(self.order)]

    def next2(self, d: str) -> str:
        return self.next(self.next(d))


def _search_cyclic(names: tuple[str, ...], opp: dict[str, str]) -> tuple[str, ...] | None:
    k = len(names)
    order: list[str] = []
    used: set[str] = set()

    def fits(pos: int, d: str) -> bool:
        if pos >= 1 and opp[order[pos - 1]] == d:
            return False
        if pos >= 2 and opp[order[pos - 2]] == d:
            return False
        if pos == k - 1:
            if opp[d] in (order[0], order[1]):
                return False
            if opp[order[k - 2]] == order[0]:
                return False
        return True

    def backtrack(pos: int) -> bool:
        for d in names:
            if d in used or not fits(pos, d):
                continue
            order.append(d)
            used.add(d)
            if pos == k - 1 or backtrack(pos + 1):
                return True
            order.pop()
            used.remove(d)
        return False

    return tuple(order) if backtrack(0) else None


def cyclic_direction_order(sig: Signature) -> CyclicOrder:
    """First cyclic order, in lexicographic backtracking over declaration
    order, such that next(d) and next(next(d)) differ from -d for every d.
    Refused below 9 directions, where the constraint may be unsatisfiable."""
    names = sig.dir_names
    if len(names) < 9:
        raise GwalkError(
            f"cyclic order requires at least 9 directions, got {len(names)}; "
            "with fewer directions the spacing constraint can be unsatisfiable"
        )
    found = _search_cyclic(names, {d: sig.opposite(d) for d in names})
    if found is None:
        raise GwalkError("no cyclic order satisfies the spacing constraint")
    return CyclicOrder(found)


def witness_signature(k: int) -> Signature:
    """Full signature of the counting and probe families: the chain labels
    plus two-direction forwarders, a decrement label, a final-test label,
    one query label per direction, and per-direction accept/reject labels
    whose direction sets follow the cyclic order."""
    pairs, selfopp = standard_directions(k)
    dirs = [d for p in pairs for d in p] + selfopp
    opp = {}
    for d, e in pairs:
        opp[d] = e
        opp[e] = d
    for d in selfopp:
        opp[d] = d
    order = _search_cyclic(tuple(dirs), opp)
    if order is None:
        raise GwalkError("no cyclic order satisfies the spacing constraint")
    cyc = CyclicOrder(order)
    labels = [
        (_START, True, {"a", "b", "-b"}),
        (_LEFT, False, {"a", "b", "-b"}),
        (_MID, False, {"a", "-a", "b", "-b"}),
        (_RIGHT, False, {"-a", "b", "-b"}),
    ]
    labels += [(n, i, set(ds)) for n, i, ds in _chain_labels(k)]
    for e in dirs:
        if e != "a":
            labels.append((f"go_{e}_a", False, {e, "a"}))
    labels.append(("go_a_b", False, {"a", "b"}))
    labels.append(("c-", False, {"-a", "a"}))
    labels.append(("q0?", False, {"-a"}))
    for d in dirs:
        labels.append((f"{d}?", False, set(dirs)))
    for d in dirs:
        triple = {opp[d], opp[cyc.next(d)], cyc.next2(d)}
        if len(triple) != 3:
            raise GwalkError(f"cyclic order degenerate at {d!r}")
        labels.append((f"acc_{d}", False, triple))
        labels.append((f"rej_{d}", False, set(triple)))
    return Signature.from_pairs(pairs, labels, selfopp)


@dataclass(frozen=True)
class PluggableSubgraph:
    """A fragment with a single external edge, ready to be attached to a host
    node; ``has_initial`` records whether the start label occurs inside."""

    pattern: Pattern
    port_dir: str
    has_initial: bool

    def port_node(self) -> str:
        return self.pattern.ports[self.port_dir]

    def initial_node(self) -> str | None:
        for v, lab in self.pattern.nodes:
            if lab == _START:
                return v
        return None


class _Frag:
    """Mutable fragment accumulator with symmetric edge insertion."""

    def __init__(self, sig: Signature) -> None:
        self.sig = sig
        self.nodes: list[tuple[str, str]] = []
        self.edges: dict[tuple[str, str], str] = {}

    def node(self, v: str, label: str) -> str:
        self.nodes.append((v, label))
        return v

    def edge(self, v: str, d: str, u: str) -> None:
        self.edges[(v, d)] = u
        self.edges[(u, self.sig.opposite(d))] = v

    def include(self, plug: PluggableSubgraph, prefix: str) -> str:
        """Copy a pluggable fragment with prefixed ids; returns the copied
        port node, whose port slot is left open for the caller to close."""
        for v, lab in plug.pattern.nodes:
            self.node(prefix + v, lab)
        for (v, d), u in plug.pattern.edges.items():
            self.edges[(prefix + v, d)] = prefix + u
        return prefix + plug.port_node()


def start_block(n: int, k: int, variant: str = "start") -> PluggableSubgraph:
    """Two chains of length 2n in the a direction, bridged by b/-b edges at
    columns n-1 and 2n-1 and carrying b/-b self-loops everywhere else; the
    single external edge replaces the removed node past the upper right end.
    ``variant="fake"`` relabels the start node so that nothing inside is
    initial; the two variants differ in exactly that one label.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    if variant not in ("start", "fake"):
        raise ValueError(f"unknown variant {variant!r}")
    sig = base_signature(k)
    frag = _Frag(sig)
    width = 2 * n
    lo = [f"lo{c}" for c in range(width)]
    up = [f"up{c}" for c in range(width)]
    frag.node(lo[0], _START if variant == "start" else _LEFT)
    for c in range(1, width - 1):
        frag.node(lo[c], _MID)
    frag.node(lo[width - 1], _RIGHT)
    frag.node(up[0], _LEFT)
    for c in range(1, width):
        frag.node(up[c], _MID)
    for c in range(width - 1):
        frag.edge(lo[c], "a", lo[c + 1])
        frag.edge(up[c], "a", up[c + 1])
    bridges = {n - 1, width - 1}
    for c in range(width):
        if c in bridges:
            # both b and -b cross, so a bridge answers b-moves like a loop
            frag.edges[(lo[c], "b")] = up[c]
            frag.edges[(lo[c], "-b")] = up[c]
            frag.edges[(up[c], "b")] = lo[c]
            frag.edges[(up[c], "-b")] = lo[c]
        else:
            frag.edges[(lo[c], "b")] = lo[c]
            frag.edges[(lo[c], "-b")] = lo[c]
            frag.edges[(up[c], "b")] = up[c]
            frag.edges[(up[c], "-b")] = up[c]
    pattern = Pattern(frag.nodes, frag.edges, {"a": up[width - 1]})
    return PluggableSubgraph(pattern, "a", variant == "start")


def escape_automaton(n: int, k: int = 4) -> WalkingAutomaton:
    """n-state automaton that leaves a start block from its start node and,
    on a numbered chain, walks right decrementing at every counting cell, so
    that it exits the chain with index i in state q_i.

    Inside the block it counts n-1 moves along the lower chain, crosses the
    left bridge, and cruises right along the upper chain in its final state.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    sig = chain_signature(k)
    q = [f"q{i}" for i in range(n)]
    delta: dict[tuple[str, str], tuple[str, str]] = {}
    delta[(q[0], _START)] = (q[0], "a")
    for j in range(n - 2):
        delta[(q[j], _MID)] = (q[j + 1], "a")
    delta[(q[n - 2], _MID)] = (q[n - 1], "b")
    delta[(q[n - 1], _MID)] = (q[n - 1], "a")
    for j in range(1, n):
        delta[(q[j], "c_st")] = (q[j - 1], "b")
        delta[(q[j], "c'")] = (q[j - 1], "b")
    for j in range(n):
        delta[(q[j], "go'_a")] = (q[j], "a")
        delta[(q[j], "go'_b")] = (q[j], "b")
        for d in sig.dir_names:
            delta[(q[j], f"go_{d}")] = (q[j], d)
    return WalkingAutomaton(sig, q, q[0], [], delta)


def numbered_chain(n: int, k: int, d: str, i: int | None = None) -> PluggableSubgraph:
    """Chain of n cells, each with a block attached against the a direction,
    ending in a forwarder cell with the external edge in direction ``d``.

    With ``i`` given the block at position i is a start block and the rest
    are fakes (the fragment encodes the number i); without ``i`` every block
    is fake and no number is encoded.  The two differ only in attached-block
    labels.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    sig = chain_signature(k)
    if not sig.has_direction(d):
        raise StructureError(f"unknown direction {d!r}")
    if i is not None and not 0 <= i < n:
        raise ValueError(f"i must lie in [0, {n}), got {i}")
    frag = _Frag(sig)
    u = [f"u{j}" for j in range(n)]
    frag.node(u[0], "c_st")
    for j in range(1, n - 1):
        frag.node(u[j], "c'")
    frag.node(u[n - 1], "go'_b" if d == "-a" else "go'_a")
    ugo = frag.node("ugo", f"go_{d}")
    for j in range(n - 1):
        frag.edge(u[j], "b", u[j + 1])
    frag.edge(u[n - 1], "b" if d == "-a" else "a", ugo)
    for j in range(n):
        block = start_block(n, k, "start" if j == i else "fake")
        port = frag.include(block, f"H{j}.")
        frag.edge(port, "a", u[j])
    pattern = Pattern(frag.nodes, frag.edges, {d: ugo})
    return PluggableSubgraph(pattern, d, i is not None)


def ring_homomorphism(k: int) -> Homomorphism:
    """Maps every query label d? to a ring with one node per direction,
    carrying acc_d at the node for d and rej_e elsewhere; every other label
    maps to a single node with the same label.

    Ring node v_e is joined to v_next(e) by an edge in direction
    next(next(e)) and exposes its external edge in direction -e, so the ring
    has one port in every direction.
    """
    sig = witness_signature(k)
    cyc = cyclic_direction_order(sig)
    patterns = {}
    for lab in sig.labels:
        if not lab.name.endswith("?") or lab.name == "q0?":
            patterns[lab.name] = Pattern(
                [("x", lab.name)], {}, {dd: "x" for dd in sorted(lab.dirs)}
            )
    for d in sig.dir_names:
        nodes = []
        edges: dict[tuple[str, str], str] = {}
        ports: dict[str, str] = {}
        for e in sig.dir_names:
            nodes.append((f"v_{e}", f"acc_{d}" if e == d else f"rej_{e}"))
            ports[sig.opposite(e)] = f"v_{e}"
        for e in sig.dir_names:
            step = cyc.next2(e)
            edges[(f"v_{e}", step)] = f"v_{cyc.next(e)}"
            edges[(f"v_{cyc.next(e)}", sig.opposite(step))] = f"v_{e}"
        patterns[f"{d}?"] = Pattern(nodes, edges, ports)
    return Homomorphism(sig, sig, patterns)


def counting_graph(n: int, k: int, i: int, j: int, d: str) -> Graph:
    """Numbered chain encoding i, continued through two forwarder cells and
    j decrement cells into a final-test node."""
    if not 0 <= i < n or not 0 <= j < n:
        raise ValueError(f"i and j must lie in [0, {n})")
    sig = witness_signature(k)
    if not sig.has_direction(d):
        raise StructureError(f"unknown direction {d!r}")
    chain = numbered_chain(n, k, d, i)
    frag = _Frag(sig)
    port = frag.include(chain, "F.")
    if d == "-a":
        w1 = frag.node("wgo1", "go_a_b")
        w2 = frag.node("wgo2", "go_-b_a")
        frag.edge(port, d, w1)
        frag.edge(w1, "b", w2)
    else:
        w1 = frag.node("wgo1", f"go_{sig.opposite(d)}_a")
        w2 = frag.node("wgo2", "go_-a_a")
        frag.edge(port, d, w1)
        frag.edge(w1, "a", w2)
    prev = w2
    for t in range(1, j + 1):
        wt = frag.node(f"w{t}", "c-")
        frag.edge(prev, "a", wt)
        prev = wt
    wend = frag.node("wend", "q0?")
    frag.edge(prev, "a", wend)
    initial = "F." + (chain.initial_node() or "")
    g = Graph(sig, frag.nodes, initial, frag.edges)
    return g


def probe_graph(n: int, k: int, i: int, d: str, dprime: str) -> Graph:
    """One numbered chain for direction d plus anonymous chains for every
    other direction, all joined to one hub node labelled with the query for
    ``dprime``."""
    if not 0 <= i < n:
        raise ValueError(f"i must lie in [0, {n})")
    sig = witness_signature(k)
    for x in (d, dprime):
        if not sig.has_direction(x):
            raise StructureError(f"unknown direction {x!r}")
    frag = _Frag(sig)
    hub = frag.node("v", f"{dprime}?")
    for e in sig.dir_names:
        chain = numbered_chain(n, k, e, i if e == d else None)
        port = frag.include(chain, f"F{e}.")
        frag.edge(port, e, hub)
    main = numbered_chain(n, k, d, i)
    initial = f"F{d}." + (main.initial_node() or "")
    return Graph(sig, frag.nodes, initial, frag.edges)


def counter_automaton(n: int, k: int) -> WalkingAutomaton:
    """Extends the escape automaton over the full witness signature: at a
    forwarder it moves on in the same state, at a decrement cell it lowers
    its state index (rejecting in q_0), at the final test it accepts exactly
    in q_0, and it accepts at every acc label and rejects at every rej
    label."""
    if n < 4:
        raise ValueError("n must be at least 4")
    if k < 9:
        raise ValueError("k must be at least 9")
    sig = witness_signature(k)
    esc = escape_automaton(n, k)
    q = list(esc.states)
    delta = dict(esc.delta)
    for j in range(n):
        for e in sig.dir_names:
            if e != "a":
                delta[(q[j], f"go_{e}_a")] = (q[j], "a")
        delta[(q[j], "go_a_b")] = (q[j], "b")
    for j in range(1, n):
        delta[(q[j], "c-")] = (q[j - 1], "a")
    accept: list[tuple[str, str]] = [(q[0], "q0?")]
    for j in range(n):
        for e in sig.dir_names:
            accept.append((q[j], f"acc_{e}"))
    return WalkingAutomaton(sig, q, q[0], accept, delta)


@dataclass(frozen=True)
class ProbeFinding:
    automaton_index: int
    entry_state: str
    left: str
    right: str


@dataclass
class ProbeReport:
    """Observation report: automata whose behaviour differs between the two
    fragments when entered through the external edge.

    Findings are observations, not failures: the desk-scale blocks carry no
    indistinguishability guarantee.
    """

    port_dir: str
    automata_checked: int
    entries_checked: int
    findings: list[ProbeFinding] = field(default_factory=list)

    @property
    def distinguisher_count(self) -> int:
        return len(self.findings)


def _describe(res: PatternResult) -> str:
    if res.kind == EXIT:
        return f"exit:{res.state}"
    return res.kind


def distinguishability_probe(
    subgraphs: tuple[PluggableSubgraph, PluggableSubgraph],
    automata: Iterable[WalkingAutomaton],
) -> ProbeReport:
    """For every automaton and every entry state, run both fragments from the
    external edge and report any behavioural difference (different result
    kinds, or exits in different states)."""
    left, right = subgraphs
    if left.port_dir != right.port_dir:
        raise GwalkError("the two fragments must share their port direction")
    report = ProbeReport(left.port_dir, 0, 0)
    for idx, aut in enumerate(automata):
        enter_dir = aut.sig.opposite(left.port_dir)
        report.automata_checked += 1
        for q in aut.states:
            report.entries_checked += 1
            rl = simulate_in_pattern(aut, left.pattern, Enter(q, enter_dir))
            rr = simulate_in_pattern(aut, right.pattern, Enter(q, enter_dir))
            dl, dr = _describe(rl), _describe(rr)
            if dl != dr:
                report.findings.append(ProbeFinding(idx, q, dl, dr))
    return report


@dataclass
class SweepReport:
    """Acceptance tables of the counter automaton over the images of the
    counting and probe families; mismatches against the expected patterns
    (accept exactly when i = j, respectively d = d') must be empty."""

    n: int
    k: int
    counting: dict[tuple[int, int, str], bool]
    probes: dict[tuple[int, str, str], bool]
    mismatches: list[str]

    @property
    def ok(self) -> bool:
        return not self.mismatches


def sweep_tables(n: int, k: int, jobs: int = 1) -> SweepReport:
    from .engine import run
    from .hom import apply

    sig = witness_signature(k)
    h = ring_homomorphism(k)
    aut = counter_automaton(n, k)
    counting_keys = [(i, j, d) for d in sig.dir_names for i in range(n) for j in range(n)]
    probe_keys = [(i, d, dp) for i in range(n) for d in sig.dir_names for dp in sig.dir_names]

    def run_counting(key: tuple[int, int, str]) -> bool:
        i, j, d = key
        return run(aut, apply(h, counting_graph(n, k, i, j, d))).accepted

    def run_probe(key: tuple[int, str, str]) -> bool:
        i, d, dp = key
        return run(aut, apply(h, probe_graph(n, k, i, d, dp))).accepted

    if jobs > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=jobs) as pool:
            counting_acc = list(pool.map(run_counting, counting_keys))
            probe_acc = list(pool.map(run_probe, probe_keys))
    else:
        counting_acc = [run_counting(key) for key in counting_keys]
        probe_acc = [run_probe(key) for key in probe_keys]

    counting = dict(zip(counting_keys, counting_acc))
    probes = dict(zip(probe_keys, probe_acc))
    mismatches = [
        f"counting i={i} j={j} d={d}: accepted={acc}"
        for (i, j, d), acc in counting.items()
        if acc != (i == j)
    ] + [
        f"probe i={i} d={d} d'={dp}: accepted={acc}"
        for (i, d, dp), acc in probes.items()
        if acc != (d == dp)
    ]
    return SweepReport(n, k, counting, probes, mismatches)
