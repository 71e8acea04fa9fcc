"""Canonical text documents for signatures, graphs, automata, homomorphisms,
tree automata and pluggable fragments.

Every document is JSON with a ``kind`` field, sorted keys, and two-space
indentation.  Lists whose order carries meaning (directions, labels, states)
keep declaration order; all other lists are sorted, and each physical edge is
listed once, the symmetric half being implied.  Serialization is therefore a
deterministic function of the value, and parse followed by serialize
reproduces a canonical file byte for byte.
"""

from __future__ import annotations

import json
from typing import Any, Mapping

from .core import Direction, Graph, NodeLabel, Signature, StructureError
from .engine import WalkingAutomaton
from .hom import Homomorphism, Pattern
from .trees import BottomUpTreeAutomaton
from .witnesses import PluggableSubgraph

__all__ = [
    "dumps",
    "loads",
    "detect_kind",
    "signature_doc",
    "signature_from",
    "graph_doc",
    "graph_from",
    "automaton_doc",
    "automaton_from",
    "homomorphism_doc",
    "homomorphism_from",
    "tree_automaton_doc",
    "tree_automaton_from",
    "pluggable_doc",
    "pluggable_from",
    "graph_to_dot",
]


def dumps(doc: Mapping[str, Any]) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def loads(text: str) -> dict:
    doc = json.loads(text)
    if not isinstance(doc, dict):
        raise StructureError("document must be a JSON object")
    return doc


def detect_kind(doc: Mapping[str, Any]) -> str:
    kind = doc.get("kind")
    if not isinstance(kind, str):
        raise StructureError("document lacks a 'kind' field")
    return kind


def _require(doc: Mapping[str, Any], key: str) -> Any:
    if key not in doc:
        raise StructureError(f"document lacks the {key!r} field")
    return doc[key]


def signature_doc(sig: Signature) -> dict:
    return {
        "kind": "signature",
        "directions": [{"name": d.name, "opposite": d.opposite} for d in sig.directions],
        "labels": [
            {"name": a.name, "initial": a.initial, "dirs": sorted(a.dirs)}
            for a in sig.labels
        ],
    }


def signature_from(doc: Mapping[str, Any]) -> Signature:
    dirs = tuple(
        Direction(str(d["name"]), str(d["opposite"])) for d in _require(doc, "directions")
    )
    labels = tuple(
        NodeLabel(str(a["name"]), bool(a["initial"]), frozenset(map(str, a["dirs"])))
        for a in _require(doc, "labels")
    )
    return Signature(dirs, labels)


def _edges_once(sig: Signature, edges: Mapping[tuple[str, str], str]) -> list[dict]:
    out = []
    for (v, d), u in edges.items():
        if (v, d) <= (u, sig.opposite(d)):
            out.append({"from": v, "dir": d, "to": u})
    return sorted(out, key=lambda e: (e["from"], e["dir"]))


def _edges_expand(sig: Signature, listed: list[Mapping[str, Any]]) -> dict[tuple[str, str], str]:
    edges: dict[tuple[str, str], str] = {}
    for e in listed:
        v, d, u = str(e["from"]), str(e["dir"]), str(e["to"])
        edges[(v, d)] = u
        edges[(u, sig.opposite(d))] = v
    return edges


def graph_doc(g: Graph) -> dict:
    return {
        "kind": "graph",
        "nodes": sorted(
            ({"id": v, "label": a} for v, a in g.nodes), key=lambda n: n["id"]
        ),
        "initial": g.initial,
        "edges": _edges_once(g.sig, g.edges),
    }


def graph_from(doc: Mapping[str, Any], sig: Signature) -> Graph:
    nodes = [(str(n["id"]), str(n["label"])) for n in _require(doc, "nodes")]
    return Graph(
        sig, nodes, str(_require(doc, "initial")), _edges_expand(sig, _require(doc, "edges"))
    )


def automaton_doc(a: WalkingAutomaton) -> dict:
    return {
        "kind": "automaton",
        "states": list(a.states),
        "initial": a.initial,
        "accept": sorted([q, lab] for q, lab in a.accept),
        "transitions": sorted(
            (
                {"state": q, "label": lab, "next": q2, "dir": d}
                for (q, lab), (q2, d) in a.delta.items()
            ),
            key=lambda t: (t["state"], t["label"]),
        ),
    }


def automaton_from(doc: Mapping[str, Any], sig: Signature) -> WalkingAutomaton:
    delta = {
        (str(t["state"]), str(t["label"])): (str(t["next"]), str(t["dir"]))
        for t in _require(doc, "transitions")
    }
    return WalkingAutomaton(
        sig,
        [str(q) for q in _require(doc, "states")],
        str(_require(doc, "initial")),
        [(str(q), str(lab)) for q, lab in _require(doc, "accept")],
        delta,
    )


def _pattern_doc(sig: Signature, p: Pattern) -> dict:
    return {
        "nodes": sorted(
            ({"id": v, "label": a} for v, a in p.nodes), key=lambda n: n["id"]
        ),
        "edges": _edges_once(sig, p.edges),
        "ports": dict(sorted(p.ports.items())),
    }


def _pattern_from(sig: Signature, doc: Mapping[str, Any]) -> Pattern:
    nodes = [(str(n["id"]), str(n["label"])) for n in _require(doc, "nodes")]
    ports = {str(d): str(w) for d, w in _require(doc, "ports").items()}
    return Pattern(nodes, _edges_expand(sig, _require(doc, "edges")), ports)


def homomorphism_doc(h: Homomorphism) -> dict:
    return {
        "kind": "homomorphism",
        "source_sig": signature_doc(h.source),
        "target_sig": signature_doc(h.target),
        "patterns": {
            lab: _pattern_doc(h.target, h.patterns[lab]) for lab in sorted(h.patterns)
        },
    }


def homomorphism_from(doc: Mapping[str, Any]) -> Homomorphism:
    source = signature_from(_require(doc, "source_sig"))
    target = signature_from(_require(doc, "target_sig"))
    patterns = {
        str(lab): _pattern_from(target, p) for lab, p in _require(doc, "patterns").items()
    }
    return Homomorphism(source, target, patterns)


def tree_automaton_doc(a: BottomUpTreeAutomaton) -> dict:
    return {
        "kind": "tree_automaton",
        "states": list(a.states),
        "accept": a.accepting,
        "delta": sorted(
            (
                {"label": lab, "args": list(vec), "result": q}
                for (lab, vec), q in a.delta.items()
            ),
            key=lambda t: (t["label"], t["args"]),
        ),
    }


def tree_automaton_from(doc: Mapping[str, Any], sig: Signature) -> BottomUpTreeAutomaton:
    delta = {
        (str(t["label"]), tuple(map(str, t["args"]))): str(t["result"])
        for t in _require(doc, "delta")
    }
    return BottomUpTreeAutomaton(
        sig,
        [str(q) for q in _require(doc, "states")],
        str(_require(doc, "accept")),
        delta,
    )


def pluggable_doc(sig: Signature, p: PluggableSubgraph) -> dict:
    doc = _pattern_doc(sig, p.pattern)
    doc["kind"] = "pluggable"
    doc["port_dir"] = p.port_dir
    doc["has_initial"] = p.has_initial
    return doc


def pluggable_from(doc: Mapping[str, Any], sig: Signature) -> PluggableSubgraph:
    return PluggableSubgraph(
        _pattern_from(sig, doc), str(_require(doc, "port_dir")), bool(_require(doc, "has_initial"))
    )


def graph_to_dot(g: Graph) -> str:
    """Graphviz rendering of a graph for external viewers; each physical edge
    appears once with its direction pair as the edge label."""
    lines = ["graph G {"]
    for v, a in sorted(g.nodes):
        shape = ' shape="doublecircle"' if v == g.initial else ""
        lines.append(f'  "{v}" [label="{v}:{a}"{shape}];')
    for e in _edges_once(g.sig, g.edges):
        back = g.sig.opposite(e["dir"])
        lines.append(f'  "{e["from"]}" -- "{e["to"]}" [label="{e["dir"]}/{back}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
