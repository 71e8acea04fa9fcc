"""Round trips and canonical serialization for every document kind."""

from gwalk import formats
from gwalk.core import canonical_encode, validate_graph
from gwalk.demo import (
    binary_tree_signature,
    leaf_parity_automaton,
    leafy_parity_automaton,
    leafy_signature,
    leaf_expanding_hom,
)
from gwalk.suites import random_graphs
from gwalk.witnesses import base_signature, start_block, witness_signature


def test_signature_round_trip_and_canonical_bytes():
    sig = witness_signature(9)
    doc = formats.signature_doc(sig)
    text = formats.dumps(doc)
    back = formats.signature_from(formats.loads(text))
    assert back == sig
    assert formats.dumps(formats.signature_doc(back)) == text


def test_graph_round_trip_preserves_structure():
    sig = leafy_signature()
    for g in random_graphs(sig, 10, seed=3):
        text = formats.dumps(formats.graph_doc(g))
        back = formats.graph_from(formats.loads(text), sig)
        assert validate_graph(back).ok
        assert canonical_encode(back) == canonical_encode(g)
        assert formats.dumps(formats.graph_doc(back)) == text


def test_edges_listed_once():
    sig = leafy_signature()
    g = random_graphs(sig, 1, seed=11, max_nodes=8)[0]
    doc = formats.graph_doc(g)
    listed = {(e["from"], e["dir"]) for e in doc["edges"]}
    assert len(listed) == len(doc["edges"])
    # both halves present after parsing even though one is listed
    assert len(formats.graph_from(doc, sig).edges) == len(g.edges)


def test_automaton_round_trip():
    a = leafy_parity_automaton()
    text = formats.dumps(formats.automaton_doc(a))
    back = formats.automaton_from(formats.loads(text), a.sig)
    assert back.states == a.states
    assert back.accept == a.accept
    assert back.delta == a.delta
    assert formats.dumps(formats.automaton_doc(back)) == text


def test_homomorphism_round_trip():
    h = leaf_expanding_hom()
    text = formats.dumps(formats.homomorphism_doc(h))
    back = formats.homomorphism_from(formats.loads(text))
    assert back.source == h.source and back.target == h.target
    assert set(back.patterns) == set(h.patterns)
    for lab in h.patterns:
        assert back.patterns[lab].edges == h.patterns[lab].edges
        assert back.patterns[lab].ports == h.patterns[lab].ports
    assert formats.dumps(formats.homomorphism_doc(back)) == text


def test_tree_automaton_round_trip():
    a = leaf_parity_automaton()
    text = formats.dumps(formats.tree_automaton_doc(a))
    back = formats.tree_automaton_from(formats.loads(text), binary_tree_signature())
    assert back.delta == a.delta and back.accepting == a.accepting
    assert formats.dumps(formats.tree_automaton_doc(back)) == text


def test_pluggable_round_trip():
    sig = base_signature(4)
    blk = start_block(3, 4, "fake")
    text = formats.dumps(formats.pluggable_doc(sig, blk))
    back = formats.pluggable_from(formats.loads(text), sig)
    assert back.port_dir == blk.port_dir
    assert back.has_initial is False
    assert back.pattern.edges == blk.pattern.edges
    assert formats.dumps(formats.pluggable_doc(sig, back)) == text


def test_dot_export_mentions_every_node():
    sig = leafy_signature()
    g = random_graphs(sig, 1, seed=2, max_nodes=6)[0]
    dot = formats.graph_to_dot(g)
    assert dot.startswith("graph G {")
    for v, _ in g.nodes:
        assert f'"{v}"' in dot
