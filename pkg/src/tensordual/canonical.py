"""Reduction of ribbon graphs to canonical surfaces, and the graph sign.

Every connected ribbon graph is moved, by tree contractions and edge slides,
to a single vertex carrying ``g`` clean nice crossings and ``r`` simple twisted
self-loops with ``r`` in {0, 1, 2}. The moves act on one-vertex graphs
(rosettes) written as a list of halfedges in counter-clockwise order.

Move catalogue on a rosette ``[... ]`` (blocks in capitals, ``'`` marks a
twist toggle on the edges of a block, ``rev`` reverses a block):

* ``Ia``   ``[e1 H e2 X]  -> [rev(H)' e1 e2 X]``  (e twisted)
* ``Ib``   ``[H e1 e2 X]  -> [e1 e2 H X]``        (e simple and twisted)
* ``IIa``  ``[e1 H f1 e2 K f2 X] -> [K H e1 f1 e2 f2 X]``  (nice crossing)
* ``IIb``  ``[H e1 f1 e2 f2 X] -> [e1 f1 e2 f2 H X]``      (clean crossing)

A mirrored move is the reversal of the list, the move, and reversal back.
Reversing a rosette is a vertex flip, and a flip leaves self-loop twists alone.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .ribbon import (
    GraphError,
    RibbonGraph,
    euler_characteristic,
    face_count,
    faces,
    is_connected,
    is_orientable,
)


class MoveError(ValueError):
    """A move was asked for at a site that does not match its pattern."""


@dataclass(frozen=True)
class CanonicalSurface:
    genus: int
    crosscaps: int

    def __post_init__(self):
        if self.genus < 0 or self.crosscaps not in (0, 1, 2):
            raise ValueError("genus >= 0 and crosscaps in {0,1,2}")

    @property
    def k(self) -> int:
        return 2 * self.genus + self.crosscaps

    @property
    def chi(self) -> int:
        return 2 - self.k

    @property
    def orientable(self) -> bool:
        return self.crosscaps == 0

    def as_tuple(self) -> Tuple[int, int]:
        return (self.genus, self.crosscaps)


# sign ------------------------------------------------------------------------


def _face_flips(g: RibbonGraph, circuit) -> int:
    """Arrows along one face pointing against the traversal direction."""
    against = 0
    m = len(circuit)
    for i in range(0, m, 2):
        x, y = circuit[i], circuit[i + 1]
        # strand arrows run from the smaller halfedge to the larger one
        if x[0] > y[0]:
            against += 1
        z = circuit[(i + 2) % m]
        # corner arrows are counter-clockwise: (h, 1) -> (next, 0)
        if y[1] == 0:
            against += 1
        del z
    # the parity does not depend on the direction of traversal
    if (m - against) % 2 != against % 2:
        raise AssertionError("odd arrow count on a face")
    return against


def sign_by_definition(g: RibbonGraph) -> int:
    """(-1)^V prod_e (-1)^tau(e) prod_f (-1)^t(f) on the ribbon part."""
    if not is_connected(g):
        raise GraphError("sign needs a connected graph")
    exp = g.V
    exp += sum(g.twist[a] for a, _ in g.edges())
    for f in faces(g).faces:
        exp += _face_flips(g, f)
    return -1 if exp % 2 else 1


def sign_theorem_check(g: RibbonGraph) -> bool:
    return sign_by_definition(g) == (-1) ** face_count(g)


# contraction -----------------------------------------------------------------


def contract_edge(g: RibbonGraph, h: int) -> RibbonGraph:
    """Contract the ribbon edge through halfedge ``h`` (ends on distinct vertices).

    A twisted edge is first untwisted by flipping the far vertex. The
    halfedges of the vertex of ``h`` come first, then those of the other end.
    """
    if g.rho[h]:
        raise MoveError("contraction: rho-edges cannot be contracted")
    a = g.alpha[h]
    v, w = g.vert[h], g.vert[a]
    if v == w:
        raise MoveError("contraction: edge is a self-loop")
    if g.twist[h]:
        g = g.flip_vertex(w)
    seq_v = _cycle_from(g, g.pi[h], h)
    seq_w = _cycle_from(g, g.pi[a], a)
    merged = seq_v + seq_w
    cycles = [merged] + [list(c) for i, c in enumerate(g.cycles) if i not in (v, w)]
    return _rebuild(g, cycles, drop={h, a})


def _cycle_from(g: RibbonGraph, start: int, stop: int) -> List[int]:
    out = []
    x = start
    while x != stop:
        out.append(x)
        x = g.pi[x]
    return out


def _rebuild(g: RibbonGraph, cycles: Sequence[Sequence[int]], drop=frozenset(), twist: Optional[Dict[int, int]] = None) -> RibbonGraph:
    keep = sorted(h for c in cycles for h in c)
    keep = [h for h in keep if h not in drop]
    new = {h: i for i, h in enumerate(keep)}
    cyc = [[new[h] for h in c if h not in drop] for c in cycles]
    edges, tws, labels, rho_edges = [], [], [], []
    for h in keep:
        a = g.alpha[h]
        if h < a:
            if g.rho[h]:
                rho_edges.append((new[h], new[a]))
            else:
                edges.append((new[h], new[a]))
                t = g.twist[h] if twist is None else twist.get(h, g.twist[h])
                tws.append(t)
                labels.append(g.label[h])
    root = None
    if g.root is not None and g.root in new:
        root = new[g.root]
    return RibbonGraph.build(cyc, edges, tws, rho_edges, root, labels)


# rosettes ------------------------------------------------------------------


@dataclass
class Rosette:
    """One vertex as a list of halfedges, with partner and twist maps."""

    seq: List[int]
    alpha: Dict[int, int]
    twist: Dict[int, int]

    @classmethod
    def from_graph(cls, g: RibbonGraph) -> "Rosette":
        if g.V != 1:
            raise MoveError("rosette moves need a one-vertex graph")
        if any(g.rho):
            raise MoveError("rosette moves act on the ribbon part only")
        seq = list(g.cycles[0])
        return cls(seq, {h: g.alpha[h] for h in seq}, {h: g.twist[h] for h in seq})

    def to_graph(self) -> RibbonGraph:
        if not self.seq:
            return RibbonGraph.build([[]])
        pos = {h: i for i, h in enumerate(self.seq)}
        edges, tws = [], []
        for h in self.seq:
            a = self.alpha[h]
            if pos[h] < pos[a]:
                edges.append((pos[h], pos[a]))
                tws.append(self.twist[h])
        return RibbonGraph.build([list(range(len(self.seq)))], edges, tws)

    def copy(self) -> "Rosette":
        return Rosette(list(self.seq), dict(self.alpha), dict(self.twist))

    def rotate_to(self, h: int) -> None:
        i = self.seq.index(h)
        self.seq = self.seq[i:] + self.seq[:i]

    def reverse(self) -> None:
        self.seq = self.seq[::-1]

    def toggle_block(self, block: Sequence[int]) -> None:
        for h in block:
            a = self.alpha[h]
            self.twist[h] ^= 1
            self.twist[a] = self.twist[h]

    def loops(self) -> List[Tuple[int, int]]:
        pos = {h: i for i, h in enumerate(self.seq)}
        return sorted((h, self.alpha[h]) for h in self.seq if pos[h] < pos[self.alpha[h]])

    def is_simple(self, h: int) -> bool:
        n = len(self.seq)
        i = self.seq.index(h)
        a = self.alpha[h]
        return self.seq[(i + 1) % n] == a or self.seq[(i - 1) % n] == a


def slide_Ia(r: Rosette, e1: int) -> Rosette:
    """Slide the block enclosed by twisted loop e (starting at e1) out of it."""
    if not r.twist[e1]:
        raise MoveError("Ia: the loop is not twisted")
    out = r.copy()
    out.rotate_to(e1)
    e2 = out.alpha[e1]
    j = out.seq.index(e2)
    block = out.seq[1:j]
    rest = out.seq[j + 1:]
    out.toggle_block(block)
    out.seq = block[::-1] + [e1, e2] + rest
    return out


def slide_Ia_inverse(r: Rosette, e1: int, n: int) -> Rosette:
    """Slide the ``n`` halfedges preceding the simple twisted loop e into it."""
    if not r.twist[e1]:
        raise MoveError("Ia^-1: the loop is not twisted")
    out = r.copy()
    out.rotate_to(e1)
    e2 = out.alpha[e1]
    if out.seq[1] != e2:
        raise MoveError("Ia^-1: the loop at e1 is not simple")
    if n > len(out.seq) - 2:
        raise MoveError("Ia^-1: block longer than the vertex")
    rest = out.seq[2:]
    block = rest[len(rest) - n:] if n else []
    keep = rest[:len(rest) - n]
    out.toggle_block(block)
    out.seq = [e1] + block[::-1] + [e2] + keep
    return out


def slide_Ib(r: Rosette, e1: int, n: int) -> Rosette:
    """Move the ``n`` halfedges preceding simple twisted loop e to after it."""
    if not r.twist[e1]:
        raise MoveError("Ib: the loop is not twisted")
    out = r.copy()
    out.rotate_to(e1)
    e2 = out.alpha[e1]
    if out.seq[1] != e2:
        raise MoveError("Ib: the loop at e1 is not simple")
    rest = out.seq[2:]
    if n > len(rest):
        raise MoveError("Ib: block longer than the vertex")
    block = rest[len(rest) - n:] if n else []
    keep = rest[:len(rest) - n]
    out.seq = [e1, e2] + block + keep
    return out


def find_nice_crossing(r: Rosette, allowed: Optional[set] = None) -> Optional[Tuple[int, int, bool]]:
    """Return (e1, f1, clean) for a nice crossing, lowest e1 then f1, else None.

    A nice crossing reads ``e1 .. f1 e2 .. f2`` counter-clockwise from e1,
    with e, f untwisted self-loops and e2 right after f1.
    """
    n = len(r.seq)
    pos = {h: i for i, h in enumerate(r.seq)}
    best = None
    for i, f1 in enumerate(r.seq):
        e2 = r.seq[(i + 1) % n]
        e1 = r.alpha[e2]
        f2 = r.alpha[f1]
        if e1 == f1 or r.twist[e1] or r.twist[f1]:
            continue
        if allowed is not None and not {e1, f1} <= allowed:
            continue
        # measured from e1: e1 < f1 < e2 < f2
        d = lambda h: (pos[h] - pos[e1]) % n
        if d(f1) < d(e2) < d(f2):
            clean = d(f1) == 1 and d(f2) == 3
            cand = (e1, f1, clean)
            if best is None or (e1, f1) < best[:2]:
                best = cand
    return best


def slide_IIa(r: Rosette, e1: int, f1: int) -> Rosette:
    out = r.copy()
    out.rotate_to(e1)
    e2, f2 = out.alpha[e1], out.alpha[f1]
    s = out.seq
    i_f1, i_e2, i_f2 = s.index(f1), s.index(e2), s.index(f2)
    if out.twist[e1] or out.twist[f1]:
        raise MoveError("IIa: crossing edges must be untwisted")
    if not (0 < i_f1 < i_e2 < i_f2) or i_e2 != i_f1 + 1:
        raise MoveError("IIa: (e, f) is not a nice crossing")
    H = s[1:i_f1]
    K = s[i_e2 + 1:i_f2]
    X = s[i_f2 + 1:]
    out.seq = K + H + [e1, f1, e2, f2] + X
    return out


def slide_IIb(r: Rosette, e1: int, n: int) -> Rosette:
    """Move the ``n`` halfedges preceding clean crossing at e1 to after it."""
    out = r.copy()
    out.rotate_to(e1)
    s = out.seq
    if len(s) < 4:
        raise MoveError("IIb: no clean crossing at e1")
    f1, e2, f2 = s[1], s[2], s[3]
    if out.alpha[e1] != e2 or out.alpha[f1] != f2 or out.twist[e1] or out.twist[f1]:
        raise MoveError("IIb: no clean crossing at e1")
    rest = s[4:]
    if n > len(rest):
        raise MoveError("IIb: block longer than the vertex")
    block = rest[len(rest) - n:] if n else []
    keep = rest[:len(rest) - n]
    out.seq = [e1, f1, e2, f2] + block + keep
    return out


def mirrored(move, r: Rosette, *args) -> Rosette:
    m = r.copy()
    m.reverse()
    m = move(m, *args)
    m.reverse()
    return m


def slide(g: RibbonGraph, move: str, site: Tuple[int, ...]) -> RibbonGraph:
    """Apply a named move to a one-vertex graph; ``site`` as in the move functions."""
    r = Rosette.from_graph(g)
    fn = {"Ia": slide_Ia, "Ib": slide_Ib, "IIa": slide_IIa, "IIb": slide_IIb}.get(move)
    if fn is None:
        raise MoveError(f"unknown move {move!r}")
    return fn(r, *site).to_graph()


# reduction -----------------------------------------------------------------


@dataclass
class Invariants:
    chi: int
    F: int
    orientable: bool
    sign: int

    @classmethod
    def of(cls, g: RibbonGraph) -> "Invariants":
        return cls(euler_characteristic(g), face_count(g), is_orientable(g), sign_by_definition(g))


@dataclass
class Reduction:
    surface: CanonicalSurface
    trace: List[dict] = field(default_factory=list)
    final: Optional[RibbonGraph] = None


class _Tracker:
    def __init__(self, g: RibbonGraph, check: bool):
        self.check = check
        self.ref = Invariants.of(g) if check else None
        self.trace: List[dict] = []

    def step(self, name: str, g: RibbonGraph, faces_removed: int = 0, **detail) -> None:
        entry = {"move": name, **detail}
        if self.check:
            now = Invariants.of(g)
            want_F = self.ref.F - faces_removed
            ok = (now.chi == self.ref.chi and now.orientable == self.ref.orientable and now.F == want_F
                  and now.sign == (-1) ** want_F)
            if not ok:
                raise AssertionError(f"move {name} broke an invariant: {self.ref} -> {now}")
            self.ref = now
            entry.update(chi=now.chi, F=now.F, sign=now.sign)
        self.trace.append(entry)


def canonical_form(g: RibbonGraph, check: bool = True) -> CanonicalSurface:
    return reduce_graph(g, check).surface


def reduce_graph(g: RibbonGraph, check: bool = True) -> Reduction:
    """Reduce a connected graph (rho-edges ignored) to its canonical surface.

    With ``check`` every step is verified to keep chi, orientability and the
    sign, and F (except in the deletion phase, where it drops by one per edge).
    """
    g = g.ribbon_part().with_root(None)
    if not is_connected(g):
        raise GraphError("canonical form needs a connected ribbon graph")
    chi0 = euler_characteristic(g)
    orient0 = is_orientable(g)
    tr = _Tracker(g, check)

    # 1. contract a spanning tree, lowest halfedge first
    while g.V > 1:
        h = min(a for a, b in g.edges() if g.vert[a] != g.vert[b])
        g = contract_edge(g, h)
        tr.step("contract", g, edge=h)
    if g.n == 0:
        return Reduction(CanonicalSurface(0, 0), tr.trace, g)
    r = Rosette.from_graph(g)

    def emit(name, **detail):
        tr.step(name, r.to_graph(), **detail)

    # 2. isolate twists: parked simple twisted loops sit at the front
    parked: List[int] = []
    while True:
        head = len(parked) * 2
        work = r.seq[head:]
        tw = [h for h in work if r.twist[h]]
        if not tw:
            break
        e1 = tw[0]
        if r.alpha[e1] not in work or work.index(r.alpha[e1]) < work.index(e1):
            e1 = r.alpha[e1]
        r = slide_Ia(r, e1)
        # slide_Ia rotated to e1; restore the parked block at the front
        if parked:
            r.rotate_to(parked[0])
        emit("Ia", loop=e1)
        i = r.seq.index(e1)
        n_before = i - head
        if n_before:
            r = slide_Ib(r, e1, n_before)
            if parked:
                r.rotate_to(parked[0])
            emit("Ib", loop=e1, block=n_before)
        # now e1 e2 follow the parked loops directly
        if parked:
            r.rotate_to(parked[0])
        parked.append(e1)
        if r.seq[:2 * len(parked)] != [x for p in parked for x in (p, r.alpha[p])]:
            raise AssertionError("twist isolation lost the parked block")

    # 3. three neighbouring simple twisted loops -> one twisted loop + torus
    crossings: List[int] = []
    anchor = parked[0] if parked else None
    n_twisted = len(parked)
    while n_twisted >= 3:
        r.rotate_to(anchor)
        a, b, c = r.seq[0], r.seq[2], r.seq[4]
        # a1 a2 b1 b2 c1 c2 ...
        r = slide_Ia_inverse(r, b, 1)
        emit("Ia^-1", loop=b, block=1)
        # mirror frame: Ia on b, then slide two halfedges back into b
        r = mirrored(slide_Ia, r, r.alpha[b])
        emit("Ia*", loop=b)
        r = mirrored(slide_Ia_inverse, r, r.alpha[b], 2)
        emit("Ia^-1*", loop=b, block=2)
        # a1 b1 c1 a2 b2 c2: (a, c) is a nice crossing around twisted b
        found = find_nice_crossing(r, {a, r.alpha[a], c, r.alpha[c]})
        if found is None:
            raise AssertionError("crosscap reduction did not produce a nice crossing")
        e1, f1, _ = found
        r = slide_IIa(r, e1, f1)
        emit("IIa", e=e1, f=f1)
        # [b2 b1 e1 f1 e2 f2 ...]: park the torus behind the twisted block
        anchor = r.seq[0]
        r = slide_IIb(r, e1, 2)
        emit("IIb", at=e1, block=2)
        crossings.append(e1)
        n_twisted -= 2
    parked = [h for h in r.seq if r.twist[h] and r.is_simple(h) and r.seq.index(h) < r.seq.index(r.alpha[h])]
    if len(parked) != n_twisted:
        raise AssertionError("twisted loops are not all simple")

    # 4. delete edges separating two faces (a spanning tree of the dual)
    while True:
        gg = r.to_graph()
        fs = faces(gg).faces
        owner = {}
        for i, f in enumerate(fs):
            for x in f:
                owner[x] = i
        pos_to_h = r.seq
        victim = None
        for p, q in sorted(gg.edges()):
            if gg.twist[p]:
                continue
            if owner[(p, 0)] != owner[(p, 1)]:
                victim = (pos_to_h[p], pos_to_h[q])
                break
        if victim is None:
            break
        r.seq = [h for h in r.seq if h not in victim]
        for h in victim:
            del r.alpha[h]
            del r.twist[h]
        if crossings and victim[0] in crossings:
            raise AssertionError("deleted a crossing edge")
        tr.step("delete", r.to_graph(), faces_removed=1, edge=victim[0])

    # 5. clean up crossings among the remaining untwisted loops
    done = set()
    for e in crossings:
        done |= {e, r.alpha[e]}
        f = _crossing_partner(r, e)
        done |= {f, r.alpha[f]}
    for p in parked:
        done |= {p, r.alpha[p]}
    while True:
        free = {h for h in r.seq if h not in done}
        if not free:
            break
        found = _free_crossing(r, free)
        if found is None:
            raise AssertionError("superrosette without a nice crossing")
        e1, f1 = found
        # move parked summands out of the gap between f1 and e2
        while True:
            i = r.seq.index(f1)
            nxt = r.seq[(i + 1) % len(r.seq)]
            if nxt == r.alpha[e1]:
                break
            r = _slide_summand_left(r, nxt, 1)
            emit("Ib" if r.twist[nxt] else "IIb", at=nxt, block=1)
        r = slide_IIa(r, e1, f1)
        emit("IIa", e=e1, f=f1)
        done |= {e1, f1, r.alpha[e1], r.alpha[f1]}
        crossings.append(e1)

    g_final = r.to_graph()
    genus = len(crossings)
    crosscaps = len(parked)
    surface = CanonicalSurface(genus, crosscaps)
    if surface.chi != chi0 or surface.orientable != orient0:
        raise AssertionError("canonical form disagrees with chi/orientability")
    return Reduction(surface, tr.trace, g_final)


def _crossing_partner(r: Rosette, e1: int) -> int:
    i = r.seq.index(e1)
    return r.seq[(i + 1) % len(r.seq)]


def _free_crossing(r: Rosette, free: set) -> Optional[Tuple[int, int]]:
    """Nice crossing in the cyclic subsequence of free halfedges."""
    sub = Rosette([h for h in r.seq if h in free], r.alpha, r.twist)
    found = find_nice_crossing(sub)
    return None if found is None else found[:2]


def _slide_summand_left(r: Rosette, h: int, n: int) -> Rosette:
    """Move the parked summand starting at ``h`` left past ``n`` halfedges."""
    if r.twist[h]:
        return slide_Ib(r, h, n)
    return slide_IIb(r, h, n)


def reduction_trace(g: RibbonGraph) -> List[dict]:
    return reduce_graph(g, True).trace
