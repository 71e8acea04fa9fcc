"""Deterministic execution of graph-walking automata.

A walking automaton moves over a graph, reading the label of the node it
stands on.  It accepts through a set of (state, label) pairs, gets stuck
(rejects) where its transition function is undefined, and loops when a
configuration repeats.  Loop detection uses an exact set of visited
configurations, never a step cap; the pigeonhole bound ``|Q| * |V| + 1``
steps is asserted on every run.

Runs and traces are pure functions of the (automaton, graph) pair, so suites
may be evaluated in parallel over independent pairs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

from .core import (
    Graph,
    Signature,
    SignatureMismatchError,
    StructureError,
    ValidationReport,
)

__all__ = [
    "ACCEPT",
    "REJECT",
    "LOOP",
    "Configuration",
    "Outcome",
    "WalkingAutomaton",
    "validate_automaton",
    "RunRecord",
    "compute_run",
    "run",
    "trace",
    "enumerate_automata",
    "automaton_space_size",
    "unreachable_states",
    "AgreementEntry",
    "AgreementReport",
    "agree_on",
]

ACCEPT = "accept"
REJECT = "reject"
LOOP = "loop"


@dataclass(frozen=True)
class Configuration:
    state: str
    node: str


@dataclass(frozen=True)
class Outcome:
    """Result of a run.

    ``config`` is the accepting configuration, the stuck configuration, or
    the first configuration seen twice.  ``steps`` is the number of moves
    made before the decision; for loops it is the least step index at which
    a repeat occurs, and ``cycle_length`` is the period.
    """

    kind: str
    config: Configuration
    steps: int
    cycle_length: int | None = None

    @property
    def accepted(self) -> bool:
        return self.kind == ACCEPT


class WalkingAutomaton:
    """Finite-state control walking a graph: states, initial state, accepting
    (state, label) pairs, and a partial transition map to (state, direction)."""

    __slots__ = ("sig", "states", "initial", "accept", "delta")

    def __init__(
        self,
        sig: Signature,
        states: Iterable[str],
        initial: str,
        accept: Iterable[tuple[str, str]],
        delta: Mapping[tuple[str, str], tuple[str, str]],
    ) -> None:
        self.sig = sig
        self.states: tuple[str, ...] = tuple(states)
        self.initial = initial
        self.accept: frozenset[tuple[str, str]] = frozenset(tuple(p) for p in accept)
        self.delta: dict[tuple[str, str], tuple[str, str]] = {
            (q, a): (q2, d) for (q, a), (q2, d) in delta.items()
        }

    @property
    def state_count(self) -> int:
        return len(self.states)

    def renamed(self, mapping: Mapping[str, str]) -> "WalkingAutomaton":
        """Copy with states renamed; the control structure is unchanged."""
        return WalkingAutomaton(
            self.sig,
            tuple(mapping[q] for q in self.states),
            mapping[self.initial],
            {(mapping[q], a) for q, a in self.accept},
            {(mapping[q], a): (mapping[q2], d) for (q, a), (q2, d) in self.delta.items()},
        )

    def __repr__(self) -> str:
        return f"WalkingAutomaton({len(self.states)} states, initial={self.initial!r})"


def validate_automaton(a: WalkingAutomaton) -> ValidationReport:
    """Check an automaton: known states and labels, transition directions
    within the direction set of the label read, and no transition out of an
    accepting pair."""
    rep = ValidationReport()
    states = set()
    for q in a.states:
        if q in states:
            rep.add("structural", "duplicate-state", q, "state declared twice")
        states.add(q)
    if a.initial not in states:
        rep.add("structural", "unknown-initial-state", a.initial, "initial state not declared")
    for q, lab in sorted(a.accept):
        if q not in states:
            rep.add("structural", "unknown-state", q, "accepting pair uses undeclared state")
        if not a.sig.has_label(lab):
            rep.add("structural", "unknown-label", lab, "accepting pair uses undeclared label")
    for (q, lab), (q2, d) in sorted(a.delta.items()):
        subject = f"({q},{lab})"
        if q not in states or q2 not in states:
            rep.add("structural", "unknown-state", subject, "transition uses undeclared state")
            continue
        if not a.sig.has_label(lab):
            rep.add("structural", "unknown-label", subject, f"label {lab!r} not declared")
            continue
        if not a.sig.has_direction(d):
            rep.add("structural", "unknown-direction", subject, f"direction {d!r} not declared")
            continue
        if d not in a.sig.label(lab).dirs:
            rep.add("invariant", "direction-outside-label", subject,
                    f"direction {d!r} is not available at label {lab!r}")
        if (q, lab) in a.accept:
            rep.add("invariant", "transition-on-accepting-pair", subject,
                    "transition defined on an accepting pair")
    return rep


@dataclass
class RunRecord:
    """Full computation prefix up to the decision point.

    ``configs[t]`` is the configuration after ``t`` moves.  For loops, the
    last entry is the first repeated configuration and ``cycle_start`` is the
    index of its earlier occurrence; configurations with index at least
    ``cycle_start`` recur forever.
    """

    configs: list[Configuration]
    outcome: Outcome
    cycle_start: int | None


def compute_run(a: WalkingAutomaton, g: Graph) -> RunRecord:
    if a.sig is not g.sig and a.sig != g.sig:
        raise SignatureMismatchError("automaton and graph are over different signatures")
    bound = len(a.states) * g.node_count + 1
    seen: dict[tuple[str, str], int] = {}
    configs: list[Configuration] = []
    q, v = a.initial, g.initial
    while True:
        t = len(configs)
        configs.append(Configuration(q, v))
        key = (q, v)
        if key in seen:
            return RunRecord(configs, Outcome(LOOP, configs[-1], t, t - seen[key]), seen[key])
        seen[key] = t
        if t > bound:
            raise AssertionError("termination bound exceeded")  # unreachable by pigeonhole
        lab = g.label_of(v)
        if (q, lab) in a.accept:
            return RunRecord(configs, Outcome(ACCEPT, configs[-1], t), None)
        move = a.delta.get((q, lab))
        if move is None:
            return RunRecord(configs, Outcome(REJECT, configs[-1], t), None)
        q2, d = move
        u = g.step(v, d)
        if u is None:
            raise StructureError(f"no edge in direction {d!r} at node {v!r}")
        q, v = q2, u


def run(a: WalkingAutomaton, g: Graph) -> Outcome:
    """Run the automaton from (initial state, initial node) until it accepts,
    gets stuck, or repeats a configuration."""
    return compute_run(a, g).outcome


def trace(a: WalkingAutomaton, g: Graph, max_len: int | None = None) -> list[Configuration]:
    """Prefix of the unique computation, truncated at ``max_len``
    configurations or at the decision point, whichever comes first."""
    configs = compute_run(a, g).configs
    if max_len is not None:
        return configs[:max_len]
    return configs


def _option_table(sig: Signature, states: tuple[str, ...]) -> list[tuple[tuple[str, str], list[tuple]]]:
    """Per (state, label) cell, the ordered candidate behaviours: accept,
    undefined, then every (next state, direction) with states in declaration
    order and directions in signature order."""
    cells: list[tuple[tuple[str, str], list[tuple]]] = []
    for q in states:
        for lab in sig.labels:
            dirs = sig.dirs_of(lab.name)
            opts: list[tuple] = [("accept",), ("undef",)]
            opts.extend(("move", q2, d) for q2 in states for d in dirs)
            cells.append(((q, lab.name), opts))
    return cells


def automaton_space_size(sig: Signature, num_states: int) -> int:
    """Number of automata :func:`enumerate_automata` would yield unbudgeted."""
    total = 1
    for _, opts in _option_table(sig, tuple(f"q{i}" for i in range(num_states))):
        total *= len(opts)
    return total


def enumerate_automata(
    sig: Signature, num_states: int, budget: int | None
) -> Iterator[WalkingAutomaton]:
    """Deterministic stream of pairwise distinct automata with exactly
    ``num_states`` states over ``sig``, at most ``budget`` of them
    (``None`` for no cap).

    Automata are emitted in lexicographic order of their option tables: cells
    are ordered by (state index, label declaration index) and the options of
    the last cell vary fastest.
    """
    if num_states < 1:
        raise ValueError("num_states must be at least 1")
    states = tuple(f"q{i}" for i in range(num_states))
    cells = _option_table(sig, states)
    counts = [len(opts) for _, opts in cells]
    idx = [0] * len(cells)
    yielded = 0
    while budget is None or yielded < budget:
        accept: list[tuple[str, str]] = []
        delta: dict[tuple[str, str], tuple[str, str]] = {}
        for (cell, opts), i in zip(cells, idx):
            opt = opts[i]
            if opt[0] == "accept":
                accept.append(cell)
            elif opt[0] == "move":
                delta[cell] = (opt[1], opt[2])
        yield WalkingAutomaton(sig, states, states[0], accept, delta)
        yielded += 1
        pos = len(cells) - 1
        while pos >= 0:
            idx[pos] += 1
            if idx[pos] < counts[pos]:
                break
            idx[pos] = 0
            pos -= 1
        if pos < 0:
            return


def unreachable_states(a: WalkingAutomaton) -> tuple[str, ...]:
    """States never entered from the initial state in the transition graph.

    Report-only: constructions in this package keep unreachable states, as
    the state count itself is part of their contract.
    """
    succ: dict[str, set[str]] = {q: set() for q in a.states}
    for (q, _), (q2, _) in a.delta.items():
        succ[q].add(q2)
    reached = {a.initial}
    frontier = [a.initial]
    while frontier:
        nxt = []
        for q in frontier:
            for q2 in sorted(succ[q]):
                if q2 not in reached:
                    reached.add(q2)
                    nxt.append(q2)
        frontier = nxt
    return tuple(q for q in a.states if q not in reached)


@dataclass(frozen=True)
class AgreementEntry:
    index: int
    kind1: str
    kind2: str

    @property
    def acceptance_agree(self) -> bool:
        return (self.kind1 == ACCEPT) == (self.kind2 == ACCEPT)

    @property
    def outcome_agree(self) -> bool:
        return self.kind1 == self.kind2


@dataclass
class AgreementReport:
    entries: list[AgreementEntry]

    @property
    def acceptance_agreement(self) -> bool:
        return all(e.acceptance_agree for e in self.entries)

    @property
    def full_agreement(self) -> bool:
        return all(e.outcome_agree for e in self.entries)


def agree_on(a1: WalkingAutomaton, a2: WalkingAutomaton, suite: Iterable[Graph]) -> AgreementReport:
    """Per-graph comparison of the two automata's outcomes.  Acceptance
    agreement (accept vs not-accept) is the headline; full outcome-variant
    agreement is reported separately."""
    entries = []
    for i, g in enumerate(suite):
        entries.append(AgreementEntry(i, run(a1, g).kind, run(a2, g).kind))
    return AgreementReport(entries)
