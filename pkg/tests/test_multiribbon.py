import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from tensordual import ModelSignature, enumerate_rooted
from tensordual.invariants import PARALLEL
from tensordual.multiribbon import (
    MultiRibbonGraph,
    edge_semantics,
    faces_per_color,
    multi_orbit_and_stabilizer,
    restrict_to_color,
)
from tensordual.ribbon import GraphError, RibbonGraph, face_count

D2 = ModelSignature.build(2, (0, 0))
D3 = ModelSignature.build(3, (0, 0, 0))
D2_GRAPHS = enumerate_rooted(D2, 3)
D3_GRAPHS = enumerate_rooted(D3, 2)


def test_edge_semantics_table():
    rho, two = D2.invariants
    assert edge_semantics(rho, 0) == {}
    assert edge_semantics(two, 0) == {2: 1}  # straight P-term, parallel channel: twisted ribbon
    assert edge_semantics(two, 1) == {2: 0}
    tetra = D3.invariants[-1]
    assert tetra.channels == (PARALLEL, 1)
    assert edge_semantics(tetra, 0) == {2: 1, 3: 0}
    with pytest.raises(ValueError):
        edge_semantics(two, 2)


def test_restriction_examples():
    point = MultiRibbonGraph(RibbonGraph.build([[]]), D3)
    assert faces_per_color(point) == (1, 1, 1)
    # every non-rho D=2 edge transmits color 2, so color 1 only sees the vertices
    for mg in D2_GRAPHS:
        g1 = restrict_to_color(mg, 1)
        assert g1.E == 0
        assert faces_per_color(mg)[0] == mg.graph.V
    with pytest.raises(ValueError):
        restrict_to_color(point, 4)


def test_restriction_keeps_tau_bits():
    mg = D2_GRAPHS[1]
    g2 = restrict_to_color(mg, 2)
    assert g2.E == mg.total_edges - mg.graph.E_rho
    assert face_count(g2) == faces_per_color(mg)[1]


@given(st.sampled_from(D2_GRAPHS + D3_GRAPHS), st.data())
def test_faces_per_color_invariant_under_flips(mg, data):
    if mg.graph.V < 2:
        return
    root_vertex = mg.graph.vert[mg.root]
    v = data.draw(st.sampled_from([w for w in range(mg.graph.V) if w != root_vertex]))
    flipped = mg.flip_vertex(v)
    assert faces_per_color(flipped) == faces_per_color(mg)
    assert flipped.code() == mg.code()
    for c in range(1, mg.sig.D + 1):
        assert face_count(restrict_to_color(flipped, c)) == face_count(restrict_to_color(mg, c))


def test_orbit_times_stabilizer():
    for mg in D2_GRAPHS + D3_GRAPHS:
        if mg.total_edges == 0:
            continue
        orb, stab = multi_orbit_and_stabilizer(mg)
        assert orb * stab == 2 ** (mg.total_edges - mg.graph.E_rho)


def test_one_edge_d3_classes_are_distinct():
    one = [mg for mg in D3_GRAPHS if mg.total_edges == 1]
    assert len({mg.code() for mg in one}) == len(one) == 14
    per_inv = {}
    for mg in one:
        q = mg.edge_counts().index(1)
        per_inv[D3.invariants[q].ident] = per_inv.get(D3.invariants[q].ident, 0) + 1
    assert per_inv == {"rho": 2, "2p": 3, "3p": 3, "2p-3p": 3, "2p-3x": 3}


def test_representative_bit_is_largest_color():
    tetra = D3.invariants[-1]
    for mg in D3_GRAPHS:
        for h in range(mg.graph.n):
            if mg.invariant_of(h) == tetra:
                assert mg.representative_bit(h) == mg.tau(h)[3]


@pytest.mark.parametrize("mg", D3_GRAPHS[:40], ids=lambda mg: mg.code().decode())
def test_json_round_trip(mg):
    data = json.loads(json.dumps(mg.to_json()))
    back = MultiRibbonGraph.from_json(data, D3)
    assert back.code() == mg.code()
    assert faces_per_color(back) == faces_per_color(mg)


def test_json_tau_must_match_a_p_term():
    mg = next(m for m in D2_GRAPHS if m.edge_counts() == (0, 1))
    data = mg.to_json()
    data["twist"] = {}
    back = MultiRibbonGraph.from_json(data, D2)
    assert back.code() == mg.code()
    bad = dict(data, invariant=["9z"])
    with pytest.raises(GraphError):
        MultiRibbonGraph.from_json(bad, D2)


def test_orbit_times_stabilizer_d3_three_edges():
    for mg in enumerate_rooted(D3, 3, exact=None):
        if mg.total_edges == 3:
            orb, stab = multi_orbit_and_stabilizer(mg)
            assert orb * stab == 2 ** (3 - mg.graph.E_rho)
