"""D-colored multi-ribbon graphs.

A multi-ribbon graph is a ribbon graph whose edges are typed by quartic
invariants of a model signature. The edge label indexes
``sig.invariants``; edges of the disconnected invariant (``C`` empty) are the
rho-edges. The stored twist bit of an edge is its P-term state (0 straight,
1 twisted). For each transmitted color ``c`` the ribbon of color ``c`` is
twisted when

    tau^c = pbit XOR (1 if the channel of c is parallel else 0)

so a straight P-term in the parallel channel gives a twisted ribbon. Flipping
a vertex toggles the P-term bit, hence every tau^c of the edge at once.
Colors outside ``C`` carry no ribbon on that edge.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from .invariants import PARALLEL, ModelSignature, QuarticInvariant
from .ribbon import GraphError, RibbonGraph, canonical_code, face_count

STRAIGHT, TWISTED = 0, 1


def edge_semantics(inv: QuarticInvariant, p_term: int) -> Dict[int, int]:
    """Per transmitted color twist bits for one edge; {} for a rho-edge."""
    if p_term not in (STRAIGHT, TWISTED):
        raise ValueError("p_term is 0 (straight) or 1 (twisted)")
    return {c: p_term ^ (1 if b == PARALLEL else 0) for c, b in zip(inv.transmitted, inv.channels)}


@dataclass(frozen=True)
class MultiRibbonGraph:
    graph: RibbonGraph
    sig: ModelSignature

    def __post_init__(self):
        g = self.graph
        k = len(self.sig.invariants)
        for h in range(g.n):
            if not 0 <= g.label[h] < k:
                raise GraphError(f"halfedge {h} has no invariant")
            if g.rho[h] != self.sig.invariants[g.label[h]].is_rho:
                raise GraphError(f"halfedge {h}: rho flag and invariant disagree")

    @property
    def root(self) -> Optional[int]:
        return self.graph.root

    def invariant_of(self, h: int) -> QuarticInvariant:
        return self.sig.invariants[self.graph.label[h]]

    def edge_counts(self) -> Tuple[int, ...]:
        """E_q per invariant of the signature (rho-edges included)."""
        counts = [0] * len(self.sig.invariants)
        g = self.graph
        for h in range(g.n):
            if h < g.alpha[h]:
                counts[g.label[h]] += 1
        return tuple(counts)

    @property
    def total_edges(self) -> int:
        return self.graph.n // 2

    def tau(self, h: int) -> Dict[int, int]:
        return edge_semantics(self.invariant_of(h), self.graph.twist[h])

    def representative_bit(self, h: int) -> int:
        """Twist of the ribbon of the largest transmitted color."""
        inv = self.invariant_of(h)
        if inv.is_rho:
            raise GraphError("rho-edges have no twist state")
        return self.tau(h)[inv.transmitted[-1]]

    def flip_vertex(self, v: int) -> "MultiRibbonGraph":
        return MultiRibbonGraph(self.graph.flip_vertex(v), self.sig)

    def code(self) -> bytes:
        return multi_canonical_code(self)

    def to_json(self) -> dict:
        g = self.graph
        data = g.to_json()
        data["alpha"] = [list(e) for e in _all_edges(g)]
        data["alpha_rho"] = []
        data["twist"] = {}
        data["colors"] = []
        data["tau"] = []
        data["invariant"] = []
        for i, (a, _) in enumerate(_all_edges(g)):
            inv = self.invariant_of(a)
            data["invariant"].append(inv.ident)
            data["colors"].append(list(inv.transmitted))
            data["tau"].append([self.tau(a)[c] for c in inv.transmitted])
            if not inv.is_rho:
                data["twist"][str(i)] = g.twist[a]
        return data

    @classmethod
    def from_json(cls, data: dict, sig: ModelSignature) -> "MultiRibbonGraph":
        ids = [inv.ident for inv in sig.invariants]
        try:
            edges = [tuple(e) for e in data["alpha"]] + [tuple(e) for e in data.get("alpha_rho", [])]
            names = data["invariant"]
            if len(names) != len(edges):
                raise GraphError("one invariant id per edge")
            taus = data.get("tau") or [None] * len(edges)
            tw_map = data.get("twist", {})
            rib, rib_tw, rib_lab, rho, rho_lab = [], [], [], [], []
            for i, (e, ident) in enumerate(zip(edges, names)):
                if ident not in ids:
                    raise GraphError(f"edge {i}: unknown invariant {ident!r}")
                q = ids.index(ident)
                inv = sig.invariants[q]
                if inv.is_rho:
                    rho.append(e)
                    rho_lab.append(q)
                    continue
                bits = taus[i]
                pbit = tw_map.get(str(i))
                if pbit is None:
                    if bits is None:
                        raise GraphError(f"edge {i}: needs twist or tau")
                    pbit = bits[0] ^ (1 if inv.channels[0] == PARALLEL else 0)
                if bits is not None and [edge_semantics(inv, pbit)[c] for c in inv.transmitted] != list(bits):
                    raise GraphError(f"edge {i}: tau bits are not a P-term pattern of {ident}")
                rib.append(e)
                rib_tw.append(int(pbit))
                rib_lab.append(q)
            g = RibbonGraph.build(data["pi"], rib, rib_tw, rho, data.get("root"), rib_lab)
        except (KeyError, TypeError, IndexError) as exc:
            raise GraphError(f"malformed graph JSON: {exc}") from None
        lab = list(g.label)
        for (a, b), q in zip(rho, rho_lab):
            lab[a] = lab[b] = q
        g = RibbonGraph(g.pi, g.alpha, g.twist, g.rho, tuple(lab), g.root, g.isolated)
        return cls(g, sig)


def _all_edges(g: RibbonGraph) -> List[Tuple[int, int]]:
    return [(h, g.alpha[h]) for h in range(g.n) if h < g.alpha[h]]


def restrict_to_color(mg: MultiRibbonGraph, c: int) -> RibbonGraph:
    """Keep every vertex and the color-c ribbons with their tau^c bits."""
    if not 1 <= c <= mg.sig.D:
        raise ValueError(f"color must be in 1..{mg.sig.D}")
    g = mg.graph
    keep = [h for h in range(g.n) if c in mg.invariant_of(h).transmitted]
    new = {h: i for i, h in enumerate(keep)}
    cycles = [[new[h] for h in cyc if h in new] for cyc in g.cycles]
    edges, tws = [], []
    for h in keep:
        a = g.alpha[h]
        if h < a:
            edges.append((new[h], new[a]))
            tws.append(mg.tau(h)[c])
    return RibbonGraph.build(cycles, edges, tws)


def faces_per_color(mg: MultiRibbonGraph) -> Tuple[int, ...]:
    return tuple(face_count(restrict_to_color(mg, c)) for c in range(1, mg.sig.D + 1))


def multi_canonical_code(mg: MultiRibbonGraph) -> bytes:
    """Rooted code; labels carry the invariant, twist bits the P-term state."""
    return canonical_code(mg.graph)


def multi_orbit_and_stabilizer(mg: MultiRibbonGraph) -> Tuple[int, int]:
    """Brute force over P-term toggles of the non-rho edges."""
    from .ribbon import twist_orbit_and_stabilizer

    return twist_orbit_and_stabilizer(mg.graph)
