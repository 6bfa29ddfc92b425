"""Amplitudes, symmetry weights and the G2 / ln Z / Z series.

Polynomials live in the variables ``N1..ND`` followed by the coupling names
of the signature. The factor 2 of every rho-edge is folded into the rho
coupling monomial, so for D=2 a rho-edge contributes ``-2 kappa``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .canonical import canonical_form
from .enumerator import enumerate_rooted
from .invariants import ModelSignature
from .multiribbon import MultiRibbonGraph, edge_semantics, faces_per_color, restrict_to_color
from .poly import Poly, series_exp
from .ribbon import components_after_rho_deletion, dual, rooted_symmetry_order, split_components


class SignatureMismatch(ValueError):
    pass


class EmptyGraph(ValueError):
    """The edgeless graph does not contribute to ln Z."""


def amplitude(mg: MultiRibbonGraph, sig: Optional[ModelSignature] = None) -> Poly:
    sig = sig or mg.sig
    if sig.invariants != mg.sig.invariants or sig.D != mg.sig.D:
        raise SignatureMismatch("graph was built for a different set of invariants")
    powers: Dict[str, int] = {}
    coeff = 1
    for inv, name, e in zip(sig.invariants, sig.coupling_names, mg.edge_counts()):
        if e:
            powers[name] = e
            coeff *= (-1) ** e * (2 ** e if inv.is_rho else 1)
    for c, f in enumerate(faces_per_color(mg), start=1):
        powers[f"N{c}"] = f
        if sig.parity[c - 1]:
            coeff *= (-1) ** f
    return Poly.monomial(sig.variables, powers, coeff)


def _components_without_rho(mg: MultiRibbonGraph) -> int:
    return components_after_rho_deletion(mg.graph)


def weight_g2(mg: MultiRibbonGraph) -> Fraction:
    return Fraction(1, 2 ** (_components_without_rho(mg) - 1))


def weight_lnz(mg: MultiRibbonGraph) -> Fraction:
    total = mg.total_edges
    if total == 0:
        raise EmptyGraph("ln Z sums over graphs with at least one edge")
    return Fraction(1, 2 ** (_components_without_rho(mg) + 1) * total)


def weight_g2_exact(mg: MultiRibbonGraph) -> Fraction:
    """1/|Aut| of the rooted class (relabelings fixing the root plus flips).

    Agrees with ``weight_g2`` whenever every non-root rho-separated component
    is symmetric under its own mirror image, which holds through two edges.
    """
    return Fraction(1, rooted_symmetry_order(mg.graph))


def weight_lnz_exact(mg: MultiRibbonGraph) -> Fraction:
    total = mg.total_edges
    if total == 0:
        raise EmptyGraph("ln Z sums over graphs with at least one edge")
    return weight_g2_exact(mg) / (4 * total)


def vacuum_weight(mg: MultiRibbonGraph, weights: str = "closed") -> Fraction:
    """Weight of an unrooted graph in Z: the ln Z weights of its distinct rootings."""
    if mg.total_edges == 0:
        raise EmptyGraph("vacuum weight needs at least one edge")
    lnz_weight = _weights(weights)[1]
    seen = set()
    total = Fraction(0)
    for h in range(mg.graph.n):
        rooted = MultiRibbonGraph(mg.graph.with_root(h), mg.sig)
        code = rooted.code()
        if code not in seen:
            seen.add(code)
            total += lnz_weight(rooted)
    return total


WEIGHTS = {
    "closed": (weight_g2, weight_lnz),
    "exact": (weight_g2_exact, weight_lnz_exact),
}


def _weights(kind: str):
    try:
        return WEIGHTS[kind]
    except KeyError:
        raise ValueError(f"weights is one of {sorted(WEIGHTS)}") from None


def leading_term(sig: ModelSignature, convention: str = "amplitude") -> Poly:
    """Order-zero G2: the edgeless amplitude, or the bare product of the N_c."""
    p = Poly.const(sig.variables, 1)
    for c in range(1, sig.D + 1):
        sgn = -1 if (convention == "amplitude" and sig.parity[c - 1]) else 1
        p = p * Poly.var(sig.variables, f"N{c}") * sgn
    if convention not in ("amplitude", "product"):
        raise ValueError("convention is 'amplitude' or 'product'")
    return p


def series_g2(sig: ModelSignature, max_order: int, jobs: int = 1,
              graphs: Optional[Sequence[MultiRibbonGraph]] = None, weights: str = "closed") -> Poly:
    w2, _ = _weights(weights)
    graphs = enumerate_rooted(sig, max_order, jobs=jobs) if graphs is None else graphs
    out = Poly.zero(sig.variables)
    for mg in graphs:
        if mg.total_edges <= max_order:
            out = out + amplitude(mg) * w2(mg)
    return out


def series_lnz(sig: ModelSignature, max_order: int, jobs: int = 1,
               graphs: Optional[Sequence[MultiRibbonGraph]] = None, weights: str = "closed") -> Poly:
    _, wl = _weights(weights)
    graphs = enumerate_rooted(sig, max_order, jobs=jobs) if graphs is None else graphs
    out = Poly.zero(sig.variables)
    for mg in graphs:
        if 0 < mg.total_edges <= max_order:
            out = out + amplitude(mg) * wl(mg)
    return out


def series_z(sig: ModelSignature, max_order: int, jobs: int = 1,
             graphs: Optional[Sequence[MultiRibbonGraph]] = None, weights: str = "closed") -> Poly:
    lnz = series_lnz(sig, max_order, jobs, graphs, weights)
    return series_exp(lnz, sig.coupling_names, max_order)


def series(sig: ModelSignature, target: str, max_order: int, jobs: int = 1, weights: str = "closed") -> Poly:
    fn = {"g2": series_g2, "lnz": series_lnz, "z": series_z}.get(target)
    if fn is None:
        raise ValueError("target is one of g2, lnz, z")
    return fn(sig, max_order, jobs, weights=weights)


# checks ---------------------------------------------------------------------


def dse_rhs(sig: ModelSignature, lnz: Poly, convention: str = "amplitude") -> Poly:
    out = leading_term(sig, convention)
    for name in sig.coupling_names:
        out = out + lnz.euler(name) * 4
    return out


def check_dse(sig: ModelSignature, max_order: int, convention: str = "amplitude", jobs: int = 1) -> bool:
    graphs = enumerate_rooted(sig, max_order, jobs=jobs)
    g2 = series_g2(sig, max_order, graphs=graphs)
    lnz = series_lnz(sig, max_order, graphs=graphs)
    return g2 == dse_rhs(sig, lnz, convention)


def check_duality(sig: ModelSignature, max_order: int, colors: Optional[Sequence[int]] = None,
                  jobs: int = 1) -> Dict[int, bool]:
    """Per color: the series of the flipped model equals this one after N_c -> -N_c.

    Both sides come from separate enumerations; G2 and ln Z are compared.
    """
    colors = range(1, sig.D + 1) if colors is None else colors
    graphs = enumerate_rooted(sig, max_order, jobs=jobs)
    base = (series_g2(sig, max_order, graphs=graphs), series_lnz(sig, max_order, graphs=graphs))
    out = {}
    for c in colors:
        parity = list(sig.parity)
        parity[c - 1] ^= 1
        other = sig.with_parity(parity)
        ograph = enumerate_rooted(other, max_order, jobs=jobs)
        flipped = (series_g2(other, max_order, graphs=ograph).flip_sign(f"N{c}"),
                   series_lnz(other, max_order, graphs=ograph).flip_sign(f"N{c}"))
        out[c] = flipped == base
    return out


# dual cancellation (D=2, O(N) x Sp(N)) ---------------------------------------


@dataclass
class CancellationReport:
    classes: int
    pairs_checked: int
    relation_failures: List[bytes] = field(default_factory=list)
    missing_duals: List[bytes] = field(default_factory=list)
    odd_classes: int = 0
    odd_sum: Optional[Poly] = None
    surviving: Optional[Poly] = None

    @property
    def ok(self) -> bool:
        return (not self.relation_failures and not self.missing_duals
                and self.odd_sum is not None and not self.odd_sum)

    def to_json(self) -> dict:
        return {
            "classes": self.classes,
            "pairs_checked": self.pairs_checked,
            "relation_failures": [c.decode() for c in self.relation_failures],
            "missing_duals": [c.decode() for c in self.missing_duals],
            "odd_classes": self.odd_classes,
            "odd_sum": self.odd_sum.to_json() if self.odd_sum is not None else None,
            "surviving": self.surviving.to_json() if self.surviving is not None else None,
            "ok": self.ok,
        }


def mixed_d2_signature() -> ModelSignature:
    return ModelSignature.build(2, (0, 1))


def _equal_n(p: Poly) -> Poly:
    """Set every N_c equal to one variable N."""
    ns = [i for i, v in enumerate(p.variables) if v.startswith("N")]
    rest = [i for i, v in enumerate(p.variables) if not v.startswith("N")]
    names = ("N",) + tuple(p.variables[i] for i in rest)
    out: Dict[tuple, Fraction] = {}
    for e, c in p.terms.items():
        k = (sum(e[i] for i in ns),) + tuple(e[i] for i in rest)
        out[k] = out.get(k, 0) + c
    return Poly(names, out)


def multi_dual(mg: MultiRibbonGraph) -> MultiRibbonGraph:
    """Dual of a D=2 graph whose ribbon edges all transmit color 2.

    The color-2 ribbon graph (twists tau^2) is dualized with rho-edges riding in
    their corners; the result is read back with the same edge semantics.
    """
    sig = mg.sig
    g = mg.graph
    tau = list(g.twist)
    for h in range(g.n):
        if not g.rho[h]:
            inv = mg.invariant_of(h)
            if inv.transmitted != (2,):
                raise ValueError("multi_dual handles D=2 graphs with C={2} edges only")
            tau[h] = edge_semantics(inv, g.twist[h])[2]
    d = dual(g.with_twists(tau))
    lam = sig.invariants.index(next(inv for inv in sig.invariants if not inv.is_rho))
    # back to P-term bits: tau = pbit ^ 1 for the parallel channel
    inv = sig.invariants[lam]
    flip = 1 if inv.channels[0] == 0 else 0
    tw = [0 if d.rho[h] else d.twist[h] ^ flip for h in range(d.n)]
    return MultiRibbonGraph(d.with_twists(tw), sig)


def dual_cancellation_check(max_order: int, jobs: int = 1) -> CancellationReport:
    sig = mixed_d2_signature()
    graphs = enumerate_rooted(sig, max_order, jobs=jobs)
    codes = {mg.code(): mg for mg in graphs}
    rep = CancellationReport(len(graphs), 0)
    odd = Poly.zero(("N",) + sig.coupling_names)
    total = Poly.zero(("N",) + sig.coupling_names)
    for mg in graphs:
        a = _equal_n(amplitude(mg) * weight_g2(mg))
        total = total + a
        V = mg.graph.V
        F = faces_per_color(mg)[1]
        d = multi_dual(mg)
        dcode = d.code()
        if dcode not in codes:
            rep.missing_duals.append(mg.code())
            continue
        rep.pairs_checked += 1
        ad = _equal_n(amplitude(codes[dcode]) * weight_g2(codes[dcode]))
        if ad != a * (-1) ** (V + F):
            rep.relation_failures.append(mg.code())
        if (V + F) % 2:
            rep.odd_classes += 1
            odd = odd + a
    rep.odd_sum = odd
    rep.surviving = total
    return rep


# rescaling ------------------------------------------------------------------


def euler_char_of(mg: MultiRibbonGraph, color: Optional[int] = None) -> int:
    """chi of the color restriction (default: the last color), summed over
    components, each read off its canonical form."""
    g = restrict_to_color(mg, mg.sig.D if color is None else color)
    return sum(canonical_form(c, check=False).chi for c in split_components(g))


def _rescaled(mg: MultiRibbonGraph, lam_sign: int) -> Tuple[Fraction, Dict[str, int]]:
    """Amplitude at N1=N2=N with lambda -> lam_sign * lambda / N (coefficient, powers)."""
    a = _equal_n(amplitude(mg))
    ((exps, coeff),) = a.terms.items()
    powers = dict(zip(a.variables, exps))
    e = powers.get("lambda", 0)
    powers["N"] -= e
    return coeff * lam_sign ** e, powers


def rescaling_sign_check(max_order: int, jobs: int = 1) -> bool:
    oo = ModelSignature.build(2, (0, 0))
    sp = ModelSignature.build(2, (1, 1))
    for mg in enumerate_rooted(oo, max_order, jobs=jobs):
        other = MultiRibbonGraph(mg.graph, sp)
        c1, p1 = _rescaled(mg, 1)
        c2, p2 = _rescaled(other, -1)
        if p1 != p2 or c2 != c1 * (-1) ** euler_char_of(mg):
            return False
    return True
