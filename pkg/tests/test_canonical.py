import random

import pytest
from hypothesis import given

from conftest import ribbon_graphs
from tensordual.canonical import (
    CanonicalSurface,
    Invariants,
    MoveError,
    Rosette,
    canonical_form,
    contract_edge,
    find_nice_crossing,
    reduce_graph,
    sign_by_definition,
    sign_theorem_check,
    slide,
    slide_IIa,
)
from tensordual.enumerator import random_ribbon_graph
from tensordual.ribbon import GraphError, RibbonGraph, euler_characteristic, face_count, is_orientable

POINT = RibbonGraph.build([[]])
RP2 = RibbonGraph.build([[0, 1]], [(0, 1)], [1])
T2 = RibbonGraph.build([[0, 1, 2, 3]], [(0, 2), (1, 3)], [0, 0])
THREE_RP2 = RibbonGraph.build([[0, 1, 2, 3, 4, 5]], [(0, 1), (2, 3), (4, 5)], [1, 1, 1])


def test_surface_type():
    s = CanonicalSurface(2, 1)
    assert (s.k, s.chi, s.orientable) == (5, -3, False)
    with pytest.raises(ValueError):
        CanonicalSurface(0, 3)


def test_canonical_form_examples():
    assert canonical_form(POINT).as_tuple() == (0, 0)
    assert canonical_form(T2).as_tuple() == (1, 0)
    assert canonical_form(RP2).as_tuple() == (0, 1)
    assert canonical_form(THREE_RP2).as_tuple() == (1, 1)


def test_three_crosscaps_trace_names_the_moves():
    moves = [step["move"] for step in reduce_graph(THREE_RP2).trace]
    assert "IIa" in moves and any(m.startswith("Ia^-1") for m in moves)


def test_disconnected_input_is_refused():
    two = RibbonGraph.build([[0, 1], [2, 3]], [(0, 1), (2, 3)], [0, 0])
    with pytest.raises(GraphError):
        canonical_form(two)


@given(ribbon_graphs(max_edges=7))
def test_canonical_form_matches_invariants(g):
    s = canonical_form(g)
    assert s.chi == euler_characteristic(g)
    assert s.orientable == is_orientable(g)


@given(ribbon_graphs(max_edges=6))
def test_canonical_form_is_idempotent(g):
    red = reduce_graph(g)
    assert canonical_form(red.final).as_tuple() == red.surface.as_tuple()


def test_sign_examples():
    assert sign_by_definition(POINT) == -1
    assert sign_by_definition(RP2) == -1
    assert sign_by_definition(T2) == -1
    assert all(sign_theorem_check(g) for g in (POINT, RP2, T2))


@given(ribbon_graphs(max_edges=8))
def test_sign_theorem(g):
    assert sign_by_definition(g) == (-1) ** face_count(g)


# contraction


def test_contraction_examples():
    for tw in (0, 1):
        bar = RibbonGraph.build([[0], [1]], [(0, 1)], [tw])
        c = contract_edge(bar, 0)
        assert (c.V, c.E, face_count(c)) == (1, 0, 1)
    with pytest.raises(MoveError):
        contract_edge(RP2, 0)


def test_contraction_keeps_faces_on_random_graphs():
    rng = random.Random(7)
    done = 0
    while done < 100:
        g = random_ribbon_graph(rng.randint(1, 6), rng)
        bridges = [a for a, b in g.edges() if g.vert[a] != g.vert[b]]
        if not bridges:
            continue
        before = Invariants.of(g)
        after = Invariants.of(contract_edge(g, bridges[0]))
        assert (after.F, after.chi, after.orientable, after.sign) == (
            before.F, before.chi, before.orientable, before.sign)
        done += 1


# slides


def test_Ia_on_a_lone_crosscap_is_identity():
    assert slide(RP2, "Ia", (0,)) == RP2


def test_IIa_cleans_a_crossing():
    # e = (0, 3), f = (2, 5), with halfedges 1 and 4 inside
    g = RibbonGraph.build([[0, 1, 2, 3, 4, 5, 6, 7]], [(0, 3), (2, 5), (1, 6), (4, 7)], [0, 0, 0, 0])
    r = Rosette.from_graph(g)
    e1, f1, clean = find_nice_crossing(r)
    assert not clean
    out = slide_IIa(r, e1, f1)
    assert find_nice_crossing(out, {e1, f1})[2]
    h = out.to_graph()
    assert (face_count(h), euler_characteristic(h)) == (face_count(g), euler_characteristic(g))


def test_nice_crossing_search():
    assert find_nice_crossing(Rosette.from_graph(T2)) == (0, 1, True)
    one = RibbonGraph.build([[0, 1]], [(0, 1)], [0])
    assert find_nice_crossing(Rosette.from_graph(one)) is None
    genus2 = RibbonGraph.build([list(range(8))], [(0, 2), (1, 3), (4, 6), (5, 7)], [0] * 4)
    assert find_nice_crossing(Rosette.from_graph(genus2)) == (0, 1, True)


def test_move_precondition_errors():
    with pytest.raises(MoveError):
        slide(T2, "Ia", (0,))
    with pytest.raises(MoveError):
        slide(T2, "XX", (0,))
    with pytest.raises(MoveError):
        slide(RP2, "IIb", (0, 0))
