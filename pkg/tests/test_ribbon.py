import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import ribbon_graphs
from tensordual.enumerator import rooted_ribbon_classes
from tensordual.ribbon import (
    GraphError,
    RibbonGraph,
    canonical_code,
    component_root_vertices,
    components_after_rho_deletion,
    dual,
    euler_characteristic,
    face_count,
    is_orientable,
    stabilizer_formula,
    twist_orbit_and_stabilizer,
)

POINT = RibbonGraph.build([[]])
LOOP = RibbonGraph.build([[0, 1]], [(0, 1)], [0])
RP2 = RibbonGraph.build([[0, 1]], [(0, 1)], [1])
T2 = RibbonGraph.build([[0, 1, 2, 3]], [(0, 2), (1, 3)], [0, 0])


def worked_example() -> RibbonGraph:
    """Three vertices of ribbon degree 5, 2, 1; four ribbon edges, two rho-edges."""
    cycles = [[0, 1, 2, 3, 4, 5], [6, 7], [8, 9, 10, 11]]
    return RibbonGraph.build(cycles, [(0, 2), (1, 6), (3, 7), (4, 8)], [1, 0, 0, 0],
                             [(5, 9), (10, 11)], root=0)


def test_face_examples():
    assert face_count(POINT) == 1
    assert face_count(RP2) == 1
    assert face_count(T2) == 1
    assert face_count(LOOP) == 2
    assert euler_characteristic(T2) == 0
    assert euler_characteristic(RP2) == 1
    assert is_orientable(T2) and not is_orientable(RP2)


def test_rho_edges_are_transparent():
    with_rho = RibbonGraph.build([[0, 1, 2, 3]], [(0, 1)], [1], [(2, 3)])
    assert face_count(with_rho) == face_count(RP2)
    assert with_rho.E == 1 and with_rho.E_rho == 1


@given(ribbon_graphs(), st.data())
def test_flip_keeps_faces_and_class(g, data):
    if g.V < 2:
        return
    g = g.with_root(g.cycles[0][0])
    v = data.draw(st.integers(1, g.V - 1))
    h = g.flip_vertex(v)
    assert (h.V, h.E, face_count(h)) == (g.V, g.E, face_count(g))
    assert is_orientable(h) == is_orientable(g)
    assert canonical_code(h) == canonical_code(g)


@given(ribbon_graphs())
def test_orientable_euler_is_even(g):
    if is_orientable(g):
        assert euler_characteristic(g) % 2 == 0
        assert euler_characteristic(g) <= 2


@given(ribbon_graphs())
def test_json_round_trip(g):
    if g.n:
        g = g.with_root(g.n - 1)
    back = RibbonGraph.from_json(json.loads(json.dumps(g.to_json())))
    assert back == g


def test_malformed_json():
    with pytest.raises(GraphError):
        RibbonGraph.from_json({"alpha": [[0, 1]]})
    with pytest.raises(GraphError):
        RibbonGraph.from_json({"pi": [[0, 1, 2]], "alpha": [[0, 1, 2]]})
    with pytest.raises(GraphError):
        RibbonGraph.build([[0, 1, 4, 5]], [(0, 1)], [1], [(4, 5)])


# duality


def test_dual_examples():
    assert dual(POINT).V == 1 and dual(POINT).E == 0
    d = dual(LOOP)
    assert (d.V, d.E, face_count(d)) == (2, 1, 1)
    d = dual(T2)
    assert (d.V, d.E, face_count(d)) == (1, 2, 1)


@given(ribbon_graphs())
def test_dual_swaps_vertices_and_faces(g):
    d = dual(g)
    assert (d.V, d.E, face_count(d)) == (face_count(g), g.E, g.V)
    assert is_orientable(d) == is_orientable(g)


@given(ribbon_graphs(max_edges=5))
def test_dual_is_an_involution(g):
    if not g.n:
        return
    g = g.with_root(0)
    assert canonical_code(dual(dual(g))) == canonical_code(g)


def test_dual_carries_rho_edges():
    g = RibbonGraph.build([[0, 1, 2, 3]], [(0, 1)], [0], [(2, 3)], root=0)
    d = dual(g)
    assert d.E_rho == 1 and d.V == 2
    assert canonical_code(dual(d)) == canonical_code(g)


# codes and components


def test_code_examples():
    g = T2.with_root(0)
    more = RibbonGraph.build([[0, 1, 2, 3, 4, 5]], [(0, 2), (1, 3)], [0, 0], [(4, 5)], root=0)
    assert canonical_code(g) != canonical_code(more)
    assert canonical_code(POINT) == b"o"


def test_components_after_rho_deletion():
    assert components_after_rho_deletion(T2) == 1
    pair = RibbonGraph.build([[0, 1, 4], [2, 3, 5]], [(0, 1), (2, 3)], [0, 0], [(4, 5)])
    assert components_after_rho_deletion(pair) == 2
    assert components_after_rho_deletion(worked_example()) == 1


# stabilizers


def test_stabilizer_examples():
    assert twist_orbit_and_stabilizer(LOOP.with_root(0)) == (2, 1)
    path = RibbonGraph.build([[0], [1]], [(0, 1)], [0], root=0)
    assert twist_orbit_and_stabilizer(path) == (1, 2)
    assert stabilizer_formula(path) == 2
    with pytest.raises(GraphError):
        twist_orbit_and_stabilizer(LOOP)


def test_worked_example_stabilizer():
    g = worked_example()
    assert face_count(g) == 1
    assert [g.ribbon_degree(v) for v in range(3)] == [5, 2, 1]
    assert twist_orbit_and_stabilizer(g)[1] == 4
    assert stabilizer_formula(g) == 4


def test_induced_roots_follow_rho_paths():
    pair = RibbonGraph.build([[0, 1, 4], [2, 3, 5]], [(0, 1), (2, 3)], [0, 0], [(4, 5)], root=0)
    assert component_root_vertices(pair) == [0, 1]
    # both vertices are component roots, so nothing can be flipped
    assert twist_orbit_and_stabilizer(pair) == (4, 1)
    assert stabilizer_formula(pair) == 1


@pytest.mark.parametrize("E", [1, 2, 3])
def test_stabilizer_formula_exhaustive(E):
    for g in rooted_ribbon_classes(E):
        orb, stab = twist_orbit_and_stabilizer(g)
        assert orb * stab == 2 ** E
        assert stab == stabilizer_formula(g)
