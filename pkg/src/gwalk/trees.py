"""Ranked trees as graphs, bottom-up tree automata, and the two-homomorphism
characterization of their languages.

A tree signature has directions +1/-1 .. +k/-k; the initial label marks the
root, +i leads to the i-th child, and every non-initial label carries exactly
one parent direction.  A bottom-up automaton assigns states leaves-to-root
and accepts when the root receives the accepting state.

For an automaton with n states over a tree signature S_reg, the bundle built
here provides a middle signature S_mid (S_reg plus fishbone labels), an
annotated signature S_comp (labels paired with child-state vectors), and two
injective homomorphisms into S_mid:

* the padding homomorphism replaces every parent edge with a fishbone of
  length exactly n and keeps labels;
* the encoding homomorphism erases annotations and turns them into fishbone
  lengths: the fishbone between a parent and its i-th child has length
  n - index(q_i) + index(delta(child)), which equals n exactly when the
  annotation is consistent at that edge.

A tree is accepted exactly when its padded image is the encoding of some
annotated tree, which the decoders test constructively; both decoders invert
their homomorphisms uniquely, bottom-up.

A documented consequence, not testable at any finite scale: annotated trees
form the full tree set of their signature, which a single-state walking
automaton recognizes trivially, so the characterization presents every
regular tree language as an inverse homomorphic image of an injective
homomorphic image of a trivially recognizable set.  Since walking automata
are closed under inverse homomorphisms but some regular tree language
escapes them, their tree languages cannot be closed under injective
homomorphisms.  This package demonstrates the characterization itself; the
non-closure is recorded here as the logical consequence it is.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Iterator, Mapping

from .core import (
    Graph,
    GwalkError,
    NodeLabel,
    Signature,
    StructureError,
    ValidationReport,
    canonical_encode,
    isomorphic,
    validate_graph,
)
from .hom import Homomorphism, Pattern, apply, validate_homomorphism

__all__ = [
    "validate_tree_signature",
    "tree_arity",
    "label_rank",
    "parent_direction",
    "is_tree",
    "enumerate_trees",
    "BottomUpTreeAutomaton",
    "validate_tree_automaton",
    "eval_states",
    "eval_dta",
    "language_nonempty",
    "CharacterizationBundle",
    "build_characterization",
    "annotate",
    "strip_annotations",
    "FishboneSkeleton",
    "parse_fishbones",
    "decode_padding",
    "decode_encoding",
    "CharacterizationReport",
    "verify_characterization",
]


def _dir_num(name: str) -> int | None:
    try:
        return int(name)
    except ValueError:
        return None


def tree_arity(sig: Signature) -> int:
    """Largest child index k of a tree signature with directions +-1..+-k."""
    nums = [_dir_num(d) for d in sig.dir_names]
    if any(x is None for x in nums):
        raise StructureError("tree signatures use directions named +i and -i")
    return max(abs(x) for x in nums if x is not None)


def label_rank(sig: Signature, label: str) -> int:
    return sum(1 for d in sig.label(label).dirs if (_dir_num(d) or 0) > 0)


def parent_direction(sig: Signature, label: str) -> int | None:
    """Index i such that -i leads to the parent; None for initial labels."""
    parents = [-(_dir_num(d) or 0) for d in sig.label(label).dirs if (_dir_num(d) or 0) < 0]
    if not parents:
        return None
    if len(parents) > 1:
        raise StructureError(f"label {label!r} has several parent directions")
    return parents[0]


def validate_tree_signature(sig: Signature) -> ValidationReport:
    """Shape checks: directions exactly +-1..+-k with +i opposite -i, initial
    labels with directions +1..+rank, every other label with one parent
    direction and a contiguous child range."""
    rep = ValidationReport()
    nums: dict[str, int] = {}
    for d in sig.dir_names:
        v = _dir_num(d)
        if v is None or v == 0:
            rep.add("invariant", "bad-direction-name", d, "directions must be named +i or -i")
            continue
        nums[d] = v
    if rep.problems:
        return rep
    k = max(abs(v) for v in nums.values()) if nums else 0
    expected = {i for i in range(1, k + 1)} | {-i for i in range(1, k + 1)}
    if set(nums.values()) != expected or len(nums) != 2 * k or k < 1:
        rep.add("invariant", "direction-range", "<signature>",
                f"directions must be exactly +-1..+-{k or 1}")
        return rep
    for d, v in sorted(nums.items()):
        if _dir_num(sig.opposite(d)) != -v:
            rep.add("invariant", "opposite-shape", d, "opposite of +i must be -i")
    for lab in sig.labels:
        ups = sorted(-nums[d] for d in lab.dirs if nums[d] < 0)
        downs = sorted(nums[d] for d in lab.dirs if nums[d] > 0)
        if downs != list(range(1, len(downs) + 1)):
            rep.add("invariant", "child-range", lab.name,
                    f"child directions {downs} are not +1..+rank")
        if lab.initial and ups:
            rep.add("invariant", "root-with-parent", lab.name,
                    "initial labels must not have a parent direction")
        if not lab.initial and len(ups) != 1:
            rep.add("invariant", "parent-count", lab.name,
                    f"non-initial labels need exactly one parent direction, got {ups}")
    return rep


def is_tree(g: Graph) -> bool:
    """A valid graph over a tree signature; one parent per non-root node then
    makes the graph a tree automatically.  The child-edge sweep from the root
    is still checked directly."""
    if not validate_tree_signature(g.sig).ok or not validate_graph(g).ok:
        return False
    seen = {g.initial}
    frontier = [g.initial]
    while frontier:
        nxt = []
        for v in frontier:
            for i in range(1, label_rank(g.sig, g.label_of(v)) + 1):
                c = g.step(v, f"+{i}")
                if c is None or c in seen:
                    return False
                seen.add(c)
                nxt.append(c)
        frontier = nxt
    return len(seen) == g.node_count


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        if total >= 1:
            yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first, *rest)


def enumerate_trees(sig: Signature, max_nodes: int) -> list[Graph]:
    """All trees over a tree signature with at most ``max_nodes`` nodes, once
    per isomorphism class, in a deterministic order.

    Ordered trees with position-determined labels have no nontrivial
    automorphisms, so structural recursion already yields one tree per class;
    canonical codes are used as a cross-check.
    """
    shape_rep = validate_tree_signature(sig)
    if not shape_rep.ok:
        raise GwalkError(f"not a tree signature: {shape_rep.summary()}")
    if max_nodes < 1:
        raise ValueError("max_nodes must be at least 1")
    by_parent: dict[int, list[NodeLabel]] = {}
    for lab in sig.labels:
        if not lab.initial:
            by_parent.setdefault(parent_direction(sig, lab.name) or 0, []).append(lab)

    memo: dict[tuple[int, int], list[tuple]] = {}

    def shapes(pd: int, size: int) -> list[tuple]:
        key = (pd, size)
        if key in memo:
            return memo[key]
        out: list[tuple] = []
        for lab in by_parent.get(pd, ()):
            r = label_rank(sig, lab.name)
            if r == 0:
                if size == 1:
                    out.append((lab.name, ()))
                continue
            for parts in _compositions(size - 1, r):
                for combo in product(*(shapes(i + 1, parts[i]) for i in range(r))):
                    out.append((lab.name, combo))
        memo[key] = out
        return out

    def materialize(shape: tuple) -> Graph:
        nodes: list[tuple[str, str]] = []
        edges: dict[tuple[str, str], str] = {}

        def walk(sh: tuple) -> str:
            vid = f"n{len(nodes)}"
            nodes.append((vid, sh[0]))
            for i, child in enumerate(sh[1], start=1):
                cid = walk(child)
                edges[(vid, f"+{i}")] = cid
                edges[(cid, f"-{i}")] = vid
            return vid

        root = walk(shape)
        return Graph(sig, nodes, root, edges)

    out: list[Graph] = []
    codes: set[bytes] = set()
    for size in range(1, max_nodes + 1):
        for lab in sig.labels:
            if not lab.initial:
                continue
            r = label_rank(sig, lab.name)
            if r == 0:
                if size != 1:
                    continue
                candidates: list[tuple] = [(lab.name, ())]
            else:
                candidates = [
                    (lab.name, combo)
                    for parts in _compositions(size - 1, r)
                    for combo in product(*(shapes(i + 1, parts[i]) for i in range(r)))
                ]
            for shape in candidates:
                g = materialize(shape)
                code = canonical_encode(g)
                if code in codes:
                    raise AssertionError("duplicate tree produced by structural recursion")
                codes.add(code)
                out.append(g)
    return out


class BottomUpTreeAutomaton:
    """Deterministic bottom-up evaluator: one total function per label from
    child-state vectors to states; rank-0 labels map the empty vector."""

    __slots__ = ("sig", "states", "accepting", "delta")

    def __init__(
        self,
        sig: Signature,
        states: Iterable[str],
        accepting: str,
        delta: Mapping[tuple[str, tuple[str, ...]], str],
    ) -> None:
        self.sig = sig
        self.states: tuple[str, ...] = tuple(states)
        self.accepting = accepting
        self.delta: dict[tuple[str, tuple[str, ...]], str] = {
            (lab, tuple(vec)): q for (lab, vec), q in delta.items()
        }

    @property
    def state_count(self) -> int:
        return len(self.states)

    def __repr__(self) -> str:
        return f"BottomUpTreeAutomaton({len(self.states)} states)"


def validate_tree_automaton(a: BottomUpTreeAutomaton) -> ValidationReport:
    rep = validate_tree_signature(a.sig)
    if not rep.ok:
        return rep
    states = set(a.states)
    if len(states) != len(a.states):
        rep.add("structural", "duplicate-state", "<automaton>", "state declared twice")
    if a.accepting not in states:
        rep.add("structural", "unknown-accepting-state", a.accepting, "not a declared state")
    expected = set()
    for lab in a.sig.labels:
        r = label_rank(a.sig, lab.name)
        for vec in product(a.states, repeat=r):
            expected.add((lab.name, vec))
    for key in sorted(expected - set(a.delta)):
        rep.add("invariant", "missing-transition", f"{key[0]}{list(key[1])}",
                "delta must be total on state vectors")
    for key in sorted(set(a.delta) - expected):
        rep.add("structural", "unknown-transition", f"{key[0]}{list(key[1])}",
                "transition for an undeclared label or vector")
    for key, q in sorted(a.delta.items()):
        if q not in states:
            rep.add("structural", "unknown-state", f"{key[0]}{list(key[1])}",
                    f"result state {q!r} not declared")
    return rep


def eval_states(a: BottomUpTreeAutomaton, t: Graph) -> dict[str, str]:
    """State computed in every node, leaves first."""
    order: list[str] = []
    stack = [t.initial]
    while stack:
        v = stack.pop()
        order.append(v)
        for i in range(1, label_rank(t.sig, t.label_of(v)) + 1):
            c = t.step(v, f"+{i}")
            if c is None:
                raise StructureError(f"node {v!r} lacks child {i}")
            stack.append(c)
    states: dict[str, str] = {}
    for v in reversed(order):
        lab = t.label_of(v)
        vec = tuple(
            states[t.step(v, f"+{i}")] for i in range(1, label_rank(t.sig, lab) + 1)
        )
        try:
            states[v] = a.delta[(lab, vec)]
        except KeyError:
            raise StructureError(f"no transition for {lab!r} on {vec}") from None
    return states


def eval_dta(a: BottomUpTreeAutomaton, t: Graph) -> tuple[str, bool]:
    """Root state and acceptance of a tree under the automaton."""
    root_state = eval_states(a, t)[t.initial]
    return root_state, root_state == a.accepting


def language_nonempty(a: BottomUpTreeAutomaton) -> bool:
    """Least-fixpoint reachability over non-initial labels, then the root
    test with an initial label on top."""
    reachable: set[str] = set()
    changed = True
    while changed:
        changed = False
        for lab in a.sig.labels:
            if lab.initial:
                continue
            r = label_rank(a.sig, lab.name)
            for vec in product(sorted(reachable), repeat=r):
                q = a.delta[(lab.name, vec)]
                if q not in reachable:
                    reachable.add(q)
                    changed = True
    for lab in a.sig.labels:
        if not lab.initial:
            continue
        r = label_rank(a.sig, lab.name)
        for vec in product(sorted(reachable), repeat=r):
            if a.delta[(lab.name, vec)] == a.accepting:
                return True
    return False


@dataclass
class CharacterizationBundle:
    """Signatures, homomorphisms and naming maps tying a tree automaton to
    its fishbone encoding."""

    automaton: BottomUpTreeAutomaton
    s_reg: Signature
    s_mid: Signature
    s_comp: Signature
    pad: Homomorphism
    encode: Homomorphism
    n: int
    state_index: dict[str, int]
    annotated: dict[str, tuple[str, tuple[str, ...]]]
    comp_name: dict[tuple[str, tuple[str, ...]], str]


def _fishbone_into(
    nodes: list[tuple[str, str]],
    edges: dict[tuple[str, str], str],
    k: int,
    direction: int,
    length: int,
    prefix: str,
) -> tuple[str | None, str | None]:
    """Spine of ``length`` nodes labelled e_direction with end leaves on all
    other child slots; returns (top node, bottom node), None for length 0."""
    spine = [f"{prefix}s{j}" for j in range(length)]
    for j, sid in enumerate(spine):
        nodes.append((sid, f"e_{direction}"))
        if j + 1 < length:
            edges[(sid, f"+{direction}")] = spine[j + 1]
            edges[(spine[j + 1], f"-{direction}")] = sid
        for m in range(1, k + 1):
            if m == direction:
                continue
            leaf = f"{sid}x{m}"
            nodes.append((leaf, f"end_{m}"))
            edges[(sid, f"+{m}")] = leaf
            edges[(leaf, f"-{m}")] = sid
    if not spine:
        return None, None
    return spine[0], spine[-1]


def _center_pattern(
    sig_mid: Signature,
    base: str,
    rank: int,
    pdir: int | None,
    k: int,
    parent_len: int,
    child_len: dict[int, int],
) -> Pattern:
    """Pattern with a central node, a parent-side fishbone of ``parent_len``
    and child-side fishbones of ``child_len[i]``; zero-length fishbones
    collapse to ports on the centre."""
    nodes: list[tuple[str, str]] = [("c", base)]
    edges: dict[tuple[str, str], str] = {}
    ports: dict[str, str] = {}
    if pdir is not None:
        top, bottom = _fishbone_into(nodes, edges, k, pdir, parent_len, "p")
        if top is None:
            ports[f"-{pdir}"] = "c"
        else:
            ports[f"-{pdir}"] = top
            edges[(bottom, f"+{pdir}")] = "c"
            edges[("c", f"-{pdir}")] = bottom
    for i in range(1, rank + 1):
        top, bottom = _fishbone_into(nodes, edges, k, i, child_len[i], f"c{i}")
        if top is None:
            ports[f"+{i}"] = "c"
        else:
            edges[("c", f"+{i}")] = top
            edges[(top, f"-{i}")] = "c"
            ports[f"+{i}"] = bottom
    return Pattern(nodes, edges, ports)


def build_characterization(
    a: BottomUpTreeAutomaton, s_reg: Signature | None = None
) -> CharacterizationBundle:
    """Middle and annotated signatures plus the padding and encoding
    homomorphisms for the automaton; refused when its language is empty,
    since the annotated signature would have no initial label."""
    if s_reg is not None and s_reg != a.sig:
        raise GwalkError("automaton is not over the given signature")
    s_reg = a.sig
    rep = validate_tree_automaton(a)
    if not rep.ok:
        raise GwalkError(f"invalid tree automaton: {rep.summary()}")
    if not language_nonempty(a):
        raise GwalkError(
            "the automaton accepts no tree; the characterization needs a "
            "non-empty language (no annotated root label would exist)"
        )
    k = tree_arity(s_reg)
    n = a.state_count
    state_index = {q: i for i, q in enumerate(a.states)}

    mid_labels = [(lab.name, lab.initial, set(lab.dirs)) for lab in s_reg.labels]
    for i in range(1, k + 1):
        if s_reg.has_label(f"e_{i}") or s_reg.has_label(f"end_{i}"):
            raise StructureError(f"label name e_{i}/end_{i} already used by the signature")
        mid_labels.append((f"e_{i}", False, {f"-{i}"} | {f"+{m}" for m in range(1, k + 1)}))
        mid_labels.append((f"end_{i}", False, {f"-{i}"}))
    pairs = [(f"+{i}", f"-{i}") for i in range(1, k + 1)]
    s_mid = Signature.from_pairs(pairs, mid_labels)

    comp_labels: list[tuple[str, bool, set[str]]] = []
    annotated: dict[str, tuple[str, tuple[str, ...]]] = {}
    comp_name: dict[tuple[str, tuple[str, ...]], str] = {}
    for lab in s_reg.labels:
        r = label_rank(s_reg, lab.name)
        for vec in product(a.states, repeat=r):
            if lab.initial and a.delta[(lab.name, vec)] != a.accepting:
                continue
            name = f"{lab.name}[{','.join(vec)}]"
            if name in annotated:
                raise StructureError(f"annotated label name collision at {name!r}")
            annotated[name] = (lab.name, vec)
            comp_name[(lab.name, vec)] = name
            comp_labels.append((name, lab.initial, set(lab.dirs)))
    s_comp = Signature.from_pairs(pairs, comp_labels)

    pad_patterns: dict[str, Pattern] = {}
    for lab in s_reg.labels:
        r = label_rank(s_reg, lab.name)
        pdir = parent_direction(s_reg, lab.name)
        if pdir is None:
            pad_patterns[lab.name] = Pattern(
                [("c", lab.name)], {}, {f"+{i}": "c" for i in range(1, r + 1)}
            )
        else:
            pad_patterns[lab.name] = _center_pattern(
                s_mid, lab.name, r, pdir, k, n, {i: 0 for i in range(1, r + 1)}
            )
    pad = Homomorphism(s_reg, s_mid, pad_patterns)

    enc_patterns: dict[str, Pattern] = {}
    for name, (base, vec) in annotated.items():
        r = label_rank(s_reg, base)
        pdir = parent_direction(s_reg, base)
        out_len = state_index[a.delta[(base, vec)]]
        child_len = {i: n - state_index[vec[i - 1]] for i in range(1, r + 1)}
        enc_patterns[name] = _center_pattern(
            s_mid, base, r, pdir, k, out_len, child_len
        )
    encode = Homomorphism(s_comp, s_mid, enc_patterns)

    for name, h in (("padding", pad), ("encoding", encode)):
        hr = validate_homomorphism(h)
        if not hr.ok:
            raise AssertionError(f"{name} homomorphism invalid: {hr.summary()}")
    return CharacterizationBundle(
        a, s_reg, s_mid, s_comp, pad, encode, n, state_index, annotated, comp_name
    )


def annotate(bundle: CharacterizationBundle, t: Graph) -> Graph:
    """Relabel every node with (label, vector of children's computed states);
    refused for rejected trees, whose root annotation has no label."""
    _, accepted = eval_dta(bundle.automaton, t)
    if not accepted:
        raise GwalkError("cannot annotate a rejected tree")
    states = eval_states(bundle.automaton, t)
    nodes = []
    for v, lab in t.nodes:
        r = label_rank(bundle.s_reg, lab)
        vec = tuple(states[t.step(v, f"+{i}")] for i in range(1, r + 1))
        nodes.append((v, bundle.comp_name[(lab, vec)]))
    return Graph(bundle.s_comp, nodes, t.initial, dict(t.edges))


def strip_annotations(bundle: CharacterizationBundle, t_comp: Graph) -> Graph:
    """Drop the state vectors, keeping base labels and topology."""
    nodes = [(v, bundle.annotated[lab][0]) for v, lab in t_comp.nodes]
    return Graph(bundle.s_reg, nodes, t_comp.initial, dict(t_comp.edges))


@dataclass
class FishboneSkeleton:
    """Fishbone-free view of a tree over the middle signature: the nodes
    carrying original labels, and per (parent, child index) the measured
    spine length and the child node."""

    root: str
    labels: dict[str, str]
    links: dict[tuple[str, int], tuple[int, str]] = field(default_factory=dict)


def parse_fishbones(bundle: CharacterizationBundle, t_mid: Graph) -> FishboneSkeleton | None:
    """Contract every maximal e_i chain below a real node into a measured
    link; None when the tree is not fishbone-shaped (a spine carrying
    anything but end leaves off-direction, or a fishbone ending in a leaf)."""
    if t_mid.sig != bundle.s_mid or not validate_graph(t_mid).ok:
        return None
    skel = FishboneSkeleton(t_mid.initial, {})
    todo = [t_mid.initial]
    while todo:
        v = todo.pop()
        lab = t_mid.label_of(v)
        if not bundle.s_reg.has_label(lab):
            return None
        skel.labels[v] = lab
        for i in range(1, label_rank(bundle.s_reg, lab) + 1):
            cur = t_mid.step(v, f"+{i}")
            length = 0
            while cur is not None and t_mid.label_of(cur) == f"e_{i}":
                for m in range(1, tree_arity(bundle.s_mid) + 1):
                    if m == i:
                        continue
                    leaf = t_mid.step(cur, f"+{m}")
                    if leaf is None or t_mid.label_of(leaf) != f"end_{m}":
                        return None
                length += 1
                cur = t_mid.step(cur, f"+{i}")
            if cur is None or not bundle.s_reg.has_label(t_mid.label_of(cur)):
                return None
            skel.links[(v, i)] = (length, cur)
            todo.append(cur)
    return skel


def _rebuild(sig: Signature, skel: FishboneSkeleton, labels: Mapping[str, str]) -> Graph:
    nodes = [(v, labels[v]) for v in sorted(skel.labels)]
    edges: dict[tuple[str, str], str] = {}
    for (v, i), (_, c) in skel.links.items():
        edges[(v, f"+{i}")] = c
        edges[(c, f"-{i}")] = v
    return Graph(sig, nodes, skel.root, edges)


def decode_padding(bundle: CharacterizationBundle, t_mid: Graph) -> Graph | None:
    """The unique tree whose padded image is ``t_mid``, or None; present
    exactly when every link measures the full length n."""
    skel = parse_fishbones(bundle, t_mid)
    if skel is None:
        return None
    if any(length != bundle.n for length, _ in skel.links.values()):
        return None
    t = _rebuild(bundle.s_reg, skel, skel.labels)
    if not validate_graph(t).ok:
        return None
    return t


def decode_encoding(bundle: CharacterizationBundle, t_mid: Graph) -> Graph | None:
    """The unique annotated tree whose encoded image is ``t_mid``, or None.

    Child-state indices are recovered bottom-up from measured lengths via
    index(q_i) = n + index(delta(child)) - length and must land in range;
    the root's recovered vector must name an (accepting) initial label.
    """
    skel = parse_fishbones(bundle, t_mid)
    if skel is None:
        return None
    a = bundle.automaton
    order: list[str] = []
    stack = [skel.root]
    while stack:
        v = stack.pop()
        order.append(v)
        for i in range(1, label_rank(bundle.s_reg, skel.labels[v]) + 1):
            stack.append(skel.links[(v, i)][1])
    out_index: dict[str, int] = {}
    comp_label: dict[str, str] = {}
    for v in reversed(order):
        base = skel.labels[v]
        r = label_rank(bundle.s_reg, base)
        vec: list[str] = []
        for i in range(1, r + 1):
            length, child = skel.links[(v, i)]
            qi = bundle.n + out_index[child] - length
            if not 0 <= qi < bundle.n:
                return None
            vec.append(a.states[qi])
        key = (base, tuple(vec))
        if key not in bundle.comp_name:
            return None  # the root vector does not lead to acceptance
        comp_label[v] = bundle.comp_name[key]
        out_index[v] = bundle.state_index[a.delta[key]]
    t_comp = _rebuild(bundle.s_comp, skel, comp_label)
    if not validate_graph(t_comp).ok:
        return None
    if not isomorphic(apply(bundle.encode, t_comp), t_mid):
        return None
    return t_comp


def _annotation_consistent(bundle: CharacterizationBundle, t_comp: Graph) -> bool:
    """The label vectors match the states the automaton actually computes."""
    t = strip_annotations(bundle, t_comp)
    states = eval_states(bundle.automaton, t)
    for v, lab in t_comp.nodes:
        base, vec = bundle.annotated[lab]
        r = label_rank(bundle.s_reg, base)
        actual = tuple(states[t.step(v, f"+{i}")] for i in range(1, r + 1))
        if vec != actual:
            return False
    return True


@dataclass
class CharacterizationReport:
    reg_trees_checked: int
    comp_trees_checked: int
    counterexamples: list[str]

    @property
    def ok(self) -> bool:
        return not self.counterexamples


def verify_characterization(
    a: BottomUpTreeAutomaton, max_nodes: int
) -> CharacterizationReport:
    """Exhaustive two-sided check up to the node budget: a tree is accepted
    exactly when its padded image decodes as some annotated tree, and an
    annotated tree's encoded image decodes under padding exactly when its
    annotation is consistent (and then round-trips through annotate)."""
    bundle = build_characterization(a)
    cx: list[str] = []
    reg_trees = enumerate_trees(bundle.s_reg, max_nodes)
    for idx, t in enumerate(reg_trees):
        accepted = eval_dta(a, t)[1]
        member = decode_encoding(bundle, apply(bundle.pad, t)) is not None
        if accepted != member:
            cx.append(f"tree {idx}: accepted={accepted} but membership={member}")
    comp_trees = enumerate_trees(bundle.s_comp, max_nodes)
    for idx, tc in enumerate(comp_trees):
        image = apply(bundle.encode, tc)
        decoded = decode_padding(bundle, image)
        valid = _annotation_consistent(bundle, tc)
        if (decoded is not None) != valid:
            cx.append(f"annotated tree {idx}: decoded={decoded is not None} but valid={valid}")
            continue
        if decoded is not None and not isomorphic(annotate(bundle, decoded), tc):
            cx.append(f"annotated tree {idx}: annotate(decode) differs from the original")
    return CharacterizationReport(len(reg_trees), len(comp_trees), cx)
