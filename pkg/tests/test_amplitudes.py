from fractions import Fraction

import pytest

from golden import table
from test_ribbon import worked_example
from tensordual import ModelSignature, enumerate_rooted
from tensordual.amplitudes import (
    EmptyGraph,
    amplitude,
    check_dse,
    check_duality,
    dual_cancellation_check,
    euler_char_of,
    leading_term,
    multi_dual,
    rescaling_sign_check,
    series_g2,
    series_lnz,
    series_z,
    vacuum_weight,
    weight_g2,
    weight_g2_exact,
    weight_lnz,
)
from tensordual.multiribbon import MultiRibbonGraph, faces_per_color
from tensordual.poly import Poly, series_log
from tensordual.ribbon import RibbonGraph, components_after_rho_deletion

OO = ModelSignature.build(2, (0, 0))
OSP = ModelSignature.build(2, (0, 1))


def _with_labels(g: RibbonGraph, sig) -> MultiRibbonGraph:
    rho = next(i for i, inv in enumerate(sig.invariants) if inv.is_rho)
    lam = next(i for i, inv in enumerate(sig.invariants) if not inv.is_rho)
    lab = tuple(rho if g.rho[h] else lam for h in range(g.n))
    return MultiRibbonGraph(RibbonGraph(g.pi, g.alpha, g.twist, g.rho, lab, g.root, g.isolated), sig)


def mono(sig, coeff, **powers):
    return Poly.monomial(sig.variables, powers, coeff)


def test_amplitude_examples():
    point = MultiRibbonGraph(RibbonGraph.build([[]]), OO)
    assert amplitude(point) == mono(OO, 1, N1=1, N2=1)
    # one straight P-term self-loop in the parallel channel: a crosscap in color 2
    rp2 = _with_labels(RibbonGraph.build([[0, 1]], [(0, 1)], [0], root=0), OO)
    assert faces_per_color(rp2) == (1, 1)
    assert amplitude(rp2) == mono(OO, -1, N1=1, N2=1, **{"lambda": 1})


def test_worked_example_amplitude_and_weight():
    mg = _with_labels(worked_example(), OSP)
    assert (mg.graph.V, mg.graph.E, mg.graph.E_rho) == (3, 4, 2)
    # one face in the ribbon color, three vertices in the other
    assert faces_per_color(mg) == (3, 1)
    assert amplitude(mg) == mono(OSP, -4, N1=3, N2=1, kappa=2, **{"lambda": 4})
    assert vacuum_weight(mg) == Fraction(1, 2)
    assert weight_g2(mg) == 1


def test_weights():
    graphs = enumerate_rooted(OO, 2)
    one_edge = [mg for mg in graphs if mg.total_edges == 1]
    for mg in one_edge:
        C = components_after_rho_deletion(mg.graph)
        assert weight_lnz(mg) == (Fraction(1, 4) if C == 1 else Fraction(1, 8))
    split = [mg for mg in graphs if weight_g2(mg) == Fraction(1, 2)]
    assert split and all(mg.graph.E_rho >= 1 for mg in split)
    assert all(weight_g2(mg) == weight_g2_exact(mg) for mg in graphs)
    with pytest.raises(EmptyGraph):
        weight_lnz(graphs[0])


def test_series_rows():
    g2 = series_g2(OO, 2)
    assert g2 == table()
    assert g2.truncate(("kappa", "lambda"), 0) == leading_term(OO)
    assert leading_term(OSP) == mono(OSP, -1, N1=1, N2=1)
    assert leading_term(OSP, "product") == mono(OSP, 1, N1=1, N2=1)


def test_lnz_and_z():
    lnz = series_lnz(OO, 2)
    assert lnz.constant_term() == 0
    z = series_z(OO, 2)
    assert z.constant_term() == 1
    assert series_log(z, OO.coupling_names, 2) == lnz


@pytest.mark.parametrize("parity", [(0, 0), (0, 1), (1, 0), (1, 1)])
def test_dse(parity):
    sig = ModelSignature.build(2, parity)
    assert check_dse(sig, 2)
    assert check_dse(sig, 2, convention="product") == (sum(parity) % 2 == 0)


def test_dse_d3_order_two():
    assert check_dse(ModelSignature.build(3, (0, 1, 0)), 2)


def test_degree_bound():
    for mg in enumerate_rooted(OO, 3):
        for exps in amplitude(mg).terms:
            assert max(exps[:2]) <= mg.total_edges + 1


@pytest.mark.parametrize("parity", [(0, 0), (0, 1)])
def test_duality(parity):
    assert all(check_duality(ModelSignature.build(2, parity), 2).values())
    assert check_duality(ModelSignature.build(2, parity), 2, colors=[]) == {}


def test_dual_cancellation():
    rep = dual_cancellation_check(2)
    assert rep.ok
    assert rep.classes == rep.pairs_checked == 70
    # the single untwisted self-loop: V + F = 3, so it cancels against its dual
    sig = ModelSignature.build(2, (0, 1))
    loop = _with_labels(RibbonGraph.build([[0, 1]], [(0, 1)], [1], root=0), sig)
    assert faces_per_color(loop) == (1, 2)
    d = multi_dual(loop)
    assert (d.graph.V, faces_per_color(d)[1]) == (2, 1)


def test_rescaling_signs():
    assert rescaling_sign_check(2)
    planar = _with_labels(RibbonGraph.build([[0, 1]], [(0, 1)], [1], root=0), OO)
    cross = _with_labels(RibbonGraph.build([[0, 1]], [(0, 1)], [0], root=0), OO)
    torus = _with_labels(RibbonGraph.build([[0, 1, 2, 3]], [(0, 2), (1, 3)], [1, 1], root=0), OO)
    assert [euler_char_of(g) for g in (planar, cross, torus)] == [2, 1, 0]
