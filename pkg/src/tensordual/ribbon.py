"""Ribbon graphs as combinatorial maps with rho-edges.

Halfedges are the integers ``0..n-1``. ``pi[h]`` is the next halfedge
counter-clockwise around the vertex of ``h``; ``alpha[h]`` is the other end of
the edge of ``h``. Ribbon and rho halfedges live in the same arrays and are
told apart by ``rho[h]``. Twist bits are stored per halfedge (both ends of an
edge carry the same bit; rho halfedges always carry 0). ``label[h]`` is a free
integer edge type, used by multi-ribbon graphs to record the invariant.

Vertices without any halfedge are counted by ``isolated``.

Face tracing works on strand sides ``(h, s)`` with ``s = 0`` the clockwise
side and ``s = 1`` the counter-clockwise side of ``h``. A corner joins
``(h, 1)`` to ``(next ribbon halfedge, 0)``; an untwisted edge joins
``(h, s)`` to ``(alpha h, 1 - s)``, a twisted one to ``(alpha h, s)``. Rho
halfedges are skipped by corners, which makes rho-edges invisible to faces.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

Node = Tuple[int, int]


class GraphError(ValueError):
    pass


@dataclass(frozen=True)
class RibbonGraph:
    pi: Tuple[int, ...]
    alpha: Tuple[int, ...]
    twist: Tuple[int, ...]
    rho: Tuple[bool, ...]
    label: Tuple[int, ...]
    root: Optional[int] = None
    isolated: int = 0

    def __post_init__(self):
        n = len(self.pi)
        if not (len(self.alpha) == len(self.twist) == len(self.rho) == len(self.label) == n):
            raise GraphError("array lengths differ")
        if sorted(self.pi) != list(range(n)):
            raise GraphError("pi is not a permutation")
        for h in range(n):
            a = self.alpha[h]
            if not 0 <= a < n or a == h or self.alpha[a] != h:
                raise GraphError(f"alpha is not a fixed-point-free involution at {h}")
            if self.rho[a] != self.rho[h] or self.twist[a] != self.twist[h] or self.label[a] != self.label[h]:
                raise GraphError(f"edge {h}-{a} has inconsistent ends")
            if self.rho[h] and self.twist[h]:
                raise GraphError("rho-edges carry no twist")
        if self.root is not None and not 0 <= self.root < max(n, 1):
            raise GraphError("root out of range")
        if self.isolated < 0:
            raise GraphError("negative isolated vertex count")

    # construction

    @classmethod
    def build(
        cls,
        cycles: Sequence[Sequence[int]],
        edges: Iterable[Tuple[int, int]] = (),
        twists: Optional[Sequence[int]] = None,
        rho_edges: Iterable[Tuple[int, int]] = (),
        root: Optional[int] = None,
        labels: Optional[Sequence[int]] = None,
    ) -> "RibbonGraph":
        """From vertex cycles, ribbon edge pairs (with twists) and rho pairs."""
        edges = list(edges)
        rho_edges = list(rho_edges)
        n = sum(len(c) for c in cycles)
        if sorted(h for c in cycles for h in c) != list(range(n)):
            raise GraphError("vertex cycles must use each halfedge 0..n-1 exactly once")
        pi = [-1] * n
        isolated = 0
        for cyc in cycles:
            if not cyc:
                isolated += 1
            for i, h in enumerate(cyc):
                pi[h] = cyc[(i + 1) % len(cyc)]
        alpha = [-1] * n
        tw = [0] * n
        rh = [False] * n
        lab = [0] * n
        twists = list(twists) if twists is not None else [0] * len(edges)
        labels = list(labels) if labels is not None else [0] * len(edges)
        for (a, b), t, lb in zip(edges, twists, labels):
            alpha[a], alpha[b] = b, a
            tw[a] = tw[b] = t
            lab[a] = lab[b] = lb
        for a, b in rho_edges:
            alpha[a], alpha[b] = b, a
            rh[a] = rh[b] = True
        if -1 in pi or -1 in alpha:
            raise GraphError("halfedges must be 0..n-1, each in one cycle and one edge")
        return cls(tuple(pi), tuple(alpha), tuple(tw), tuple(rh), tuple(lab), root, isolated)

    # basic structure

    @property
    def n(self) -> int:
        return len(self.pi)

    @cached_property
    def pinv(self) -> Tuple[int, ...]:
        inv = [0] * self.n
        for h, p in enumerate(self.pi):
            inv[p] = h
        return tuple(inv)

    @cached_property
    def cycles(self) -> Tuple[Tuple[int, ...], ...]:
        """Vertex cycles, each starting at its smallest halfedge, sorted."""
        seen = [False] * self.n
        out = []
        for h in range(self.n):
            if seen[h]:
                continue
            cyc = []
            x = h
            while not seen[x]:
                seen[x] = True
                cyc.append(x)
                x = self.pi[x]
            out.append(tuple(cyc))
        return tuple(out) + ((),) * self.isolated

    @cached_property
    def vert(self) -> Tuple[int, ...]:
        v = [0] * self.n
        for i, cyc in enumerate(self.cycles):
            for h in cyc:
                v[h] = i
        return tuple(v)

    @property
    def V(self) -> int:
        return len(self.cycles)

    @property
    def E(self) -> int:
        return sum(1 for h in range(self.n) if not self.rho[h]) // 2

    @property
    def E_rho(self) -> int:
        return sum(self.rho) // 2

    def edges(self) -> List[Tuple[int, int]]:
        """Ribbon edges as (h, alpha h) with h < alpha h, by first halfedge."""
        return [(h, self.alpha[h]) for h in range(self.n) if not self.rho[h] and h < self.alpha[h]]

    def rho_edges(self) -> List[Tuple[int, int]]:
        return [(h, self.alpha[h]) for h in range(self.n) if self.rho[h] and h < self.alpha[h]]

    def ribbon_degree(self, v: int) -> int:
        return sum(1 for h in self.cycles[v] if not self.rho[h])

    def is_self_loop(self, h: int) -> bool:
        return self.vert[h] == self.vert[self.alpha[h]]

    # ribbon successor skipping rho halfedges

    @cached_property
    def rsucc(self) -> Dict[int, int]:
        out = {}
        for cyc in self.cycles:
            rib = [h for h in cyc if not self.rho[h]]
            for i, h in enumerate(rib):
                out[h] = rib[(i + 1) % len(rib)]
        return out

    @cached_property
    def rpred(self) -> Dict[int, int]:
        return {b: a for a, b in self.rsucc.items()}

    def corner(self, x: Node) -> Node:
        h, s = x
        if s:
            return (self.rsucc[h], 0)
        return (self.rpred[h], 1)

    def strand(self, x: Node) -> Node:
        h, s = x
        a = self.alpha[h]
        return (a, s) if self.twist[h] else (a, 1 - s)

    # derived graphs

    def with_root(self, root: Optional[int]) -> "RibbonGraph":
        return RibbonGraph(self.pi, self.alpha, self.twist, self.rho, self.label, root, self.isolated)

    def with_twists(self, twist: Sequence[int]) -> "RibbonGraph":
        return RibbonGraph(self.pi, self.alpha, tuple(twist), self.rho, self.label, self.root, self.isolated)

    def toggle(self, edge_halfedges: Iterable[int]) -> "RibbonGraph":
        tw = list(self.twist)
        for h in edge_halfedges:
            if self.rho[h]:
                raise GraphError("rho-edges cannot be twisted")
            a = self.alpha[h]
            tw[h] ^= 1
            tw[a] = tw[h]
        return self.with_twists(tw)

    def flip_vertex(self, v: int) -> "RibbonGraph":
        """Reverse the cyclic order at v and twist every incident ribbon edge."""
        cyc = self.cycles[v]
        pi = list(self.pi)
        for h in cyc:
            pi[h] = self.pinv[h]
        tw = list(self.twist)
        for h in cyc:
            if not self.rho[h]:
                # a self-loop is visited from both ends and toggles back
                tw[h] ^= 1
                tw[self.alpha[h]] ^= 1
        return RibbonGraph(tuple(pi), self.alpha, tuple(tw), self.rho, self.label, self.root, self.isolated)

    def mirror(self) -> "RibbonGraph":
        """Flip every vertex: cyclic orders reverse, twists are unchanged."""
        return RibbonGraph(self.pinv, self.alpha, self.twist, self.rho, self.label, self.root, self.isolated)

    def relabel(self, perm: Sequence[int]) -> "RibbonGraph":
        """Rename halfedge h to perm[h]."""
        n = self.n
        pi = [0] * n
        alpha = [0] * n
        tw = [0] * n
        rh = [False] * n
        lab = [0] * n
        for h in range(n):
            p = perm[h]
            pi[p] = perm[self.pi[h]]
            alpha[p] = perm[self.alpha[h]]
            tw[p] = self.twist[h]
            rh[p] = self.rho[h]
            lab[p] = self.label[h]
        root = None if self.root is None else perm[self.root]
        return RibbonGraph(tuple(pi), tuple(alpha), tuple(tw), tuple(rh), tuple(lab), root, self.isolated)

    def ribbon_part(self) -> "RibbonGraph":
        """Drop rho halfedges (vertices left bare become isolated)."""
        keep = [h for h in range(self.n) if not self.rho[h]]
        new = {h: i for i, h in enumerate(keep)}
        cycles = []
        for cyc in self.cycles:
            cycles.append([new[h] for h in cyc if not self.rho[h]])
        edges = [(new[a], new[b]) for a, b in self.edges()]
        tw = [self.twist[a] for a, _ in self.edges()]
        lab = [self.label[a] for a, _ in self.edges()]
        root = None
        if self.root is not None and not self.rho[self.root]:
            root = new[self.root]
        return RibbonGraph.build(cycles, edges, tw, (), root, lab)

    # JSON

    def to_json(self) -> dict:
        edges = self.edges()
        return {
            "pi": [list(c) for c in self.cycles],
            "alpha": [list(e) for e in edges],
            "alpha_rho": [list(e) for e in self.rho_edges()],
            "twist": {str(i): self.twist[a] for i, (a, _) in enumerate(edges)},
            "root": self.root,
        }

    @classmethod
    def from_json(cls, data: dict) -> "RibbonGraph":
        try:
            edges = [tuple(e) for e in data.get("alpha", [])]
            tw_map = data.get("twist", {})
            twists = [int(tw_map.get(str(i), 0)) for i in range(len(edges))]
            rho_edges = [tuple(e) for e in data.get("alpha_rho", [])]
            for e in edges + rho_edges:
                if len(e) != 2:
                    raise GraphError("edges are pairs")
            return cls.build(data["pi"], edges, twists, rho_edges, data.get("root"))
        except (KeyError, TypeError, IndexError) as exc:
            raise GraphError(f"malformed graph JSON: {exc}") from None


# faces ---------------------------------------------------------------------


@dataclass(frozen=True)
class FaceSet:
    faces: Tuple[Tuple[Node, ...], ...]
    bare: int = 0  # faces of vertices without ribbon halfedges

    @property
    def F(self) -> int:
        return len(self.faces) + self.bare


def faces(g: RibbonGraph) -> FaceSet:
    seen = set()
    out = []
    for h in range(g.n):
        if g.rho[h]:
            continue
        for s in (0, 1):
            x = (h, s)
            if x in seen:
                continue
            circuit = []
            while x not in seen:
                seen.add(x)
                circuit.append(x)
                y = g.strand(x)
                seen.add(y)
                circuit.append(y)
                x = g.corner(y)
            out.append(tuple(circuit))
    bare = sum(1 for v in range(g.V) if g.ribbon_degree(v) == 0)
    return FaceSet(tuple(out), bare)


def face_count(g: RibbonGraph) -> int:
    return faces(g).F


def euler_characteristic(g: RibbonGraph) -> int:
    return g.V - g.E + face_count(g)


# connectivity --------------------------------------------------------------


def _components(g: RibbonGraph, use_rho: bool) -> List[List[int]]:
    parent = list(range(g.V))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for h in range(g.n):
        if g.rho[h] and not use_rho:
            continue
        a, b = find(g.vert[h]), find(g.vert[g.alpha[h]])
        if a != b:
            parent[a] = b
    groups: Dict[int, List[int]] = {}
    for v in range(g.V):
        groups.setdefault(find(v), []).append(v)
    return sorted(groups.values())


def components(g: RibbonGraph) -> List[List[int]]:
    return _components(g, True)


def is_connected(g: RibbonGraph) -> bool:
    return len(components(g)) == 1


def components_after_rho_deletion(g: RibbonGraph) -> int:
    return len(_components(g, False))


def split_components(g: RibbonGraph) -> List[RibbonGraph]:
    """One unrooted graph per connected component (rho-edges count as links)."""
    out = []
    for comp in components(g):
        hs = [h for v in comp for h in g.cycles[v]]
        new = {h: i for i, h in enumerate(hs)}
        cycles = [[new[h] for h in g.cycles[v]] for v in comp]
        edges = [(new[a], new[b]) for a, b in g.edges() if a in new]
        tws = [g.twist[a] for a, _ in g.edges() if a in new]
        labs = [g.label[a] for a, _ in g.edges() if a in new]
        rho = [(new[a], new[b]) for a, b in g.rho_edges() if a in new]
        h = RibbonGraph.build(cycles, edges, tws, rho, None, labs)
        lab = list(h.label)
        for a, b in g.rho_edges():
            if a in new:
                lab[new[a]] = lab[new[b]] = g.label[a]
        out.append(RibbonGraph(h.pi, h.alpha, h.twist, h.rho, tuple(lab), None, h.isolated))
    return out


def is_orientable(g: RibbonGraph) -> bool:
    """Some choice of vertex flips removes every twist."""
    orient: Dict[int, int] = {}
    for comp in _components(g, False):
        orient[comp[0]] = 0
        stack = [comp[0]]
        while stack:
            v = stack.pop()
            for h in g.cycles[v]:
                if g.rho[h]:
                    continue
                w = g.vert[g.alpha[h]]
                want = orient[v] ^ g.twist[h]
                if w not in orient:
                    orient[w] = want
                    stack.append(w)
                elif orient[w] != want:
                    return False
    return True


# canonical codes -----------------------------------------------------------


def canonical_code(g: RibbonGraph) -> bytes:
    """Code of a connected rooted graph, equal exactly for equivalent graphs.

    Equivalence is relabeling plus flips of non-root vertices. A vertex reached
    first through a ribbon edge is oriented so that edge looks untwisted; a
    vertex reached first through a rho-edge has no preferred orientation, so
    both are tried and the smallest code wins.
    """
    return _encode(min_code_tuple(g))


def min_code_tuple(g: RibbonGraph) -> tuple:
    if g.n == 0:
        if g.V != 1:
            raise GraphError("canonical codes need a connected graph")
        return ()
    if g.root is None:
        raise GraphError("canonical codes need a root")
    best = None
    for code in _codes(g, g.root):
        if best is None or code < best:
            best = code
    return best


def unrooted_code(g: RibbonGraph) -> bytes:
    if g.n == 0:
        return _encode(min_code_tuple(g))
    best = None
    for h in (g, g.mirror()):
        for r in range(h.n):
            for code in _codes(h, r):
                if best is None or code < best:
                    best = code
    return _encode(best)


def _codes(g: RibbonGraph, root: int):
    for code, _, _ in walk_codes(g, root):
        yield code


def walk_codes(g: RibbonGraph, root: int):
    """Yield (code, visiting order, vertex orientation) per rho-orientation branch."""
    pi, pinv, alpha, vert, rho = g.pi, g.pinv, g.alpha, g.vert, g.rho
    nv = g.V - g.isolated

    def walk(orient, queue, qi, order, degrees):
        while qi < len(queue):
            h0 = queue[qi]
            qi += 1
            v = vert[h0]
            s = orient[v]
            step = pi if s > 0 else pinv
            h = h0
            pending = []
            deg = 0
            while True:
                order.append(h)
                deg += 1
                p = alpha[h]
                w = vert[p]
                if w not in orient:
                    if rho[h]:
                        if w not in pending:
                            pending.append(w)
                            orient[w] = 0
                            queue.append(p)
                    else:
                        orient[w] = -s if g.twist[h] else s
                        queue.append(p)
                h = step[h]
                if h == h0:
                    break
            degrees.append(deg)
            if pending:
                for signs in itertools.product((1, -1), repeat=len(pending)):
                    o2 = dict(orient)
                    for w, sg in zip(pending, signs):
                        o2[w] = sg
                    yield from walk(o2, list(queue), qi, list(order), list(degrees))
                return
        if len(degrees) != nv or g.isolated:
            raise GraphError("canonical codes need a connected graph")
        pos = [0] * len(order)
        for i, h in enumerate(order):
            pos[h] = i
        body = []
        for h in order:
            a = alpha[h]
            if rho[h]:
                t = 2
            else:
                t = g.twist[h] ^ (orient[vert[h]] < 0) ^ (orient[vert[a]] < 0)
            body.append((pos[a], g.label[h], t))
        yield (tuple(degrees), tuple(body)), order, orient

    yield from walk({vert[root]: 1}, [root], 0, [], [])


def rooted_symmetry_order(g: RibbonGraph) -> int:
    """Order of the group of root-fixing relabelings combined with flips of
    non-root vertices that map ``g`` to itself.

    Relabeling parts are read off the canonical walks: branches reaching the
    minimal code with different visiting orders differ by an automorphism.
    Pure flips fixing every label are the flips of whole non-root
    rho-separated components whose vertices all have total degree <= 2.
    """
    if g.n == 0:
        return 1
    best = None
    orders = set()
    for code, order, _ in walk_codes(g, g.root):
        if best is None or code < best:
            best, orders = code, {tuple(order)}
        elif code == best:
            orders.add(tuple(order))
    rv = g.vert[g.root]
    pure = 0
    for comp in _components(g, False):
        if rv not in comp and all(len(g.cycles[v]) <= 2 for v in comp):
            pure += 1
    return len(orders) * 2 ** pure


def _encode(code: tuple) -> bytes:
    if not code:
        return b"o"
    degrees, body = code
    parts = [",".join(map(str, degrees))]
    parts.append(";".join(f"{p}.{lb}.{t}" for p, lb, t in body))
    return "|".join(parts).encode()


def equivalent(g1: RibbonGraph, g2: RibbonGraph) -> bool:
    return canonical_code(g1) == canonical_code(g2)


# twist group ---------------------------------------------------------------


def _flip_key(g: RibbonGraph, flippable: Sequence[int]) -> tuple:
    """Smallest (pi, twist) over all re-embeddings of the given vertices."""
    best = None
    for k in range(len(flippable) + 1):
        for S in itertools.combinations(flippable, k):
            h = g
            for v in S:
                h = h.flip_vertex(v)
            key = (h.pi, h.twist)
            if best is None or key < best:
                best = key
    return best


def component_root_vertices(g: RibbonGraph) -> List[int]:
    """Fixed vertex of every rho-separated component.

    The root vertex fixes its own component. Every other component is entered
    along a breadth-first spanning tree of rho-edges (lowest halfedge first);
    the vertex where that path enters is the component's induced root.
    """
    if g.root is None:
        raise GraphError("induced roots need a rooted graph")
    comps = _components(g, False)
    comp_of = {}
    for i, comp in enumerate(comps):
        for v in comp:
            comp_of[v] = i
    start = g.vert[g.root] if g.n else 0
    roots = {comp_of[start]: start}
    queue = [comp_of[start]]
    while queue:
        c = queue.pop(0)
        hs = sorted(h for v in comps[c] for h in g.cycles[v] if g.rho[h])
        for h in hs:
            w = g.vert[g.alpha[h]]
            if comp_of[w] not in roots:
                roots[comp_of[w]] = w
                queue.append(comp_of[w])
    if len(roots) != len(comps):
        raise GraphError("graph is not connected")
    return sorted(roots.values())


def twist_orbit_and_stabilizer(g: RibbonGraph) -> Tuple[int, int]:
    """Brute force over all 2^E twist subsets of the ribbon edges.

    The twist group acts on the labeled map. Two results count as the same
    ribbon graph when re-embedding vertices other than the (induced) roots
    turns one into the other; rho-edges are deleted first since the group
    does not see them. Returns (orbit size, stabilizer order), product 2^E.
    """
    if g.root is None:
        raise GraphError("twist stabilizer needs a rooted graph")
    if not is_connected(g):
        raise GraphError("twist stabilizer needs a connected graph")
    keep = [h for h in range(g.n) if not g.rho[h]]
    rib = g.ribbon_part()
    fixed = {rib.vert[keep.index(h)] for v in component_root_vertices(g) for h in g.cycles[v] if not g.rho[h]}
    edges = rib.edges()
    flippable = [v for v in range(rib.V) if v not in fixed]
    ref = _flip_key(rib, flippable)
    keys = set()
    stab = 0
    for bits in itertools.product((0, 1), repeat=len(edges)):
        h = rib.toggle(a for (a, _), b in zip(edges, bits) if b)
        k = _flip_key(h, flippable)
        keys.add(k)
        stab += k == ref
    return len(keys), stab


def stabilizer_formula(g: RibbonGraph) -> int:
    """2^(V1+V2): vertices of ribbon degree one or two, (induced) roots excluded."""
    if g.root is None:
        raise GraphError("stabilizer formula needs a rooted graph")
    fixed = set(component_root_vertices(g))
    k = sum(1 for v in range(g.V) if v not in fixed and g.ribbon_degree(v) in (1, 2))
    return 2 ** k


# duality -------------------------------------------------------------------


def dual(g: RibbonGraph) -> RibbonGraph:
    """Dual ribbon graph; rho halfedges follow their corners.

    Disconnected ribbon parts are dualized component by component. A root is
    carried to the same corner; the root face is traversed so that this corner
    keeps its counter-clockwise direction.
    """
    # corner of a (non-bare) vertex: keyed by the ribbon halfedge it follows
    corner_rho: Dict[int, List[int]] = {}
    for cyc in g.cycles:
        rib = [i for i, h in enumerate(cyc) if not g.rho[h]]
        if not rib:
            continue
        k = len(cyc)
        for j, i in enumerate(rib):
            nxt = rib[(j + 1) % len(rib)]
            span = (nxt - i) % k or k
            corner_rho[cyc[i]] = [cyc[(i + t) % k] for t in range(1, span)]

    # root location as (corner key, fine position) or a bare vertex
    root_corner = None
    if g.root is not None and g.n:
        r = g.root
        if not g.rho[r]:
            key = g.rpred[r]
            root_corner = (key, len(corner_rho[key]))
        else:
            for key, seq in corner_rho.items():
                if r in seq:
                    root_corner = (key, seq.index(r))
                    break

    fs = faces(g)
    face_list = list(fs.faces)
    # put the root face first, rotated to start at the root corner
    if root_corner is not None:
        start = (root_corner[0], 1)
        for i, f in enumerate(face_list):
            if start in f:
                j = f.index(start)
                # circuits go strand first from even positions; rotate so that
                # the root corner is the first corner traversed forwards
                rot = f[j:] + f[:j]
                if rot[0] != start:
                    raise GraphError("internal: face rotation")
                face_list[i] = _corner_first(g, f, start)
                face_list.insert(0, face_list.pop(i))
                break

    new_id: Dict[int, int] = {}
    new_id_of_node: Dict[Node, int] = {}
    cycles: List[List[int]] = []
    counter = itertools.count()
    rho_pairs_old: List[Tuple[int, int]] = g.rho_edges()
    new_root = None
    ccw_star: Dict[Node, int] = {}

    for f in face_list:
        # f alternates: x0, t(x0), c(t(x0)), ... ; we want corner-first walks
        cyc: List[int] = []
        walk = _corner_walk(g, f)
        for x, y in walk:
            # corner from x (ccw* flag of current dual halfedge) to y = c(x)
            hx = new_id_of_node.get(x)
            if hx is None:
                hx = next(counter)
                new_id_of_node[x] = hx
                new_id_of_node[g.strand(x)] = hx
            if not cyc:
                cyc.append(hx)
            ccw_star[x] = 1
            ccw_star[y] = 0
            h, s = x
            seq = corner_rho[h] if s == 1 else list(reversed(corner_rho[g.rpred[h]]))
            forward = s == 1
            key = h if s == 1 else g.rpred[h]
            for rh in seq:
                new_id[rh] = next(counter)
                cyc.append(new_id[rh])
            hy = new_id_of_node.get(y)
            if hy is None:
                hy = next(counter)
                new_id_of_node[y] = hy
                new_id_of_node[g.strand(y)] = hy
            if root_corner is not None and key == root_corner[0] and new_root is None:
                k = len(seq)
                p = root_corner[1] if forward else k - root_corner[1]
                new_root = ("pos", len(cyc) - k + p, cyc, hy)
            cyc.append(hy)
        cyc.pop()  # last equals first halfedge
        cycles.append(cyc)
        if new_root is not None and new_root[0] == "pos":
            _, idx, c_ref, hy = new_root
            new_root = ("done", c_ref[idx] if idx < len(c_ref) else c_ref[0])

    for cyc in g.cycles:
        if cyc and all(g.rho[h] for h in cyc):
            cycles.append([])
            for rh in cyc:
                new_id[rh] = next(counter)
                cycles[-1].append(new_id[rh])
            if g.root is not None and g.root in cyc:
                new_root = ("done", new_id[g.root])
    for _ in range(g.isolated):
        cycles.append([])

    # dual edges: the two strands through the sides of one primal halfedge
    edges = []
    twists = []
    labels = []
    done = set()
    for h, _ in g.edges():
        a = new_id_of_node[(h, 0)]
        b = new_id_of_node[(h, 1)]
        tw = 0 if ccw_star[(h, 0)] != ccw_star[(h, 1)] else 1
        edges.append((a, b))
        twists.append(tw)
        labels.append(g.label[h])
        done.add(h)
    rho_edges = [(new_id[a], new_id[b]) for a, b in rho_pairs_old]
    root = None
    if g.root is not None:
        if g.n == 0:
            root = None
        elif new_root is None or new_root[0] != "done":
            raise GraphError("internal: root lost in dual")
        else:
            root = new_root[1]
    return RibbonGraph.build(cycles, edges, twists, rho_edges, root, labels)


def _corner_first(g: RibbonGraph, f: Tuple[Node, ...], start: Node) -> Tuple[Node, ...]:
    """Re-trace a face starting with the corner out of ``start``."""
    out = []
    x = start
    while True:
        out.append(x)
        y = g.corner(x)
        out.append(y)
        x = g.strand(y)
        if x == start:
            break
    return tuple(out)


def _corner_walk(g: RibbonGraph, f: Tuple[Node, ...]) -> List[Tuple[Node, Node]]:
    """Corners (x, c(x)) along a face, each traversed x -> c(x)."""
    start = f[0]
    # faces from ``faces`` start strand first; ``_corner_first`` corner first
    if g.corner(start) != f[1]:
        start = f[1]
    walk = []
    x = start
    while True:
        y = g.corner(x)
        walk.append((x, y))
        x = g.strand(y)
        if x == start:
            break
    return walk
