"""Exhaustive generation of connected rooted (multi-)ribbon graph classes.

Labeled maps are produced by fixing the vertex cycles to consecutive
halfedge blocks (one block per part of an integer partition of 2E) and
running over all perfect matchings. Every rooted map is isomorphic to one of
these with the root at the start of a cycle, so that is where roots go.
Edge types and twist bits are then assigned and each result is reduced to its
canonical code.
"""

from __future__ import annotations

import itertools
import os
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from .invariants import ModelSignature
from .multiribbon import MultiRibbonGraph
from .ribbon import RibbonGraph, is_connected, min_code_tuple, twist_orbit_and_stabilizer, unrooted_code, walk_codes


class CostGuard(ValueError):
    pass


def partitions(n: int, largest: Optional[int] = None) -> Iterator[Tuple[int, ...]]:
    """Integer partitions of n, parts non-increasing."""
    if largest is None:
        largest = n
    if n == 0:
        yield ()
        return
    for k in range(min(n, largest), 0, -1):
        for rest in partitions(n - k, k):
            yield (k,) + rest


def perfect_matchings(items: Sequence[int]) -> Iterator[List[Tuple[int, int]]]:
    if not items:
        yield []
        return
    a = items[0]
    for i in range(1, len(items)):
        b = items[i]
        rest = list(items[1:i]) + list(items[i + 1:])
        for m in perfect_matchings(rest):
            yield [(a, b)] + m


def _is_connected(parts: Sequence[int], matching) -> bool:
    owner = []
    for v, d in enumerate(parts):
        owner += [v] * d
    parent = list(range(len(parts)))

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    for a, b in matching:
        ra, rb = find(owner[a]), find(owner[b])
        if ra != rb:
            parent[ra] = rb
    return len({find(v) for v in range(len(parts))}) == 1


@lru_cache(maxsize=None)
def connected_maps(E: int) -> Tuple[Tuple[Tuple[Tuple[int, ...], ...], Tuple[Tuple[int, int], ...]], ...]:
    """(cycles, matching) for all labeled connected maps in block form."""
    if E == 0:
        return (((), ()),)
    out = []
    n = 2 * E
    for parts in partitions(n):
        cycles = []
        start = 0
        for d in parts:
            cycles.append(tuple(range(start, start + d)))
            start += d
        for m in perfect_matchings(list(range(n))):
            if _is_connected(parts, m):
                out.append((tuple(cycles), tuple(m)))
    return tuple(out)


def _root_choices(cycles) -> List[int]:
    seen = set()
    roots = []
    for cyc in cycles:
        if len(cyc) not in seen:
            seen.add(len(cyc))
            roots.append(cyc[0])
    return roots


# plain ribbon graphs ---------------------------------------------------------


def labeled_ribbon_graphs(E: int) -> Iterator[RibbonGraph]:
    """Every connected labeled ribbon graph in block form with E edges."""
    if E == 0:
        yield RibbonGraph.build([[]])
        return
    for cycles, m in connected_maps(E):
        for tw in itertools.product((0, 1), repeat=E):
            yield RibbonGraph.build(cycles, m, tw)


def rooted_ribbon_classes(E: int) -> List[RibbonGraph]:
    """One representative per rooted class, sorted by code."""
    if E == 0:
        return [RibbonGraph.build([[]])]
    found: Dict[tuple, RibbonGraph] = {}
    for g in labeled_ribbon_graphs(E):
        for r in _root_choices(g.cycles):
            h = g.with_root(r)
            code = min_code_tuple(h)
            if code not in found:
                found[code] = h
    return [found[k] for k in sorted(found)]


def unrooted_ribbon_classes(E: int) -> List[RibbonGraph]:
    if E == 0:
        return [RibbonGraph.build([[]])]
    found: Dict[bytes, RibbonGraph] = {}
    for g in labeled_ribbon_graphs(E):
        code = unrooted_code(g)
        if code not in found:
            found[code] = g
    return [found[k] for k in sorted(found)]


def random_ribbon_graph(E: int, rng: random.Random) -> RibbonGraph:
    """A random connected ribbon graph with E edges."""
    if E == 0:
        return RibbonGraph.build([[]])
    n = 2 * E
    while True:
        nv = rng.randint(1, E + 1)
        hs = list(range(n))
        rng.shuffle(hs)
        cuts = sorted(rng.sample(range(1, n), nv - 1)) if nv > 1 else []
        cycles = [hs[a:b] for a, b in zip([0] + cuts, cuts + [n])]
        perm = list(range(n))
        rng.shuffle(perm)
        pairs = [(perm[2 * i], perm[2 * i + 1]) for i in range(E)]
        tw = [rng.randint(0, 1) for _ in range(E)]
        g = RibbonGraph.build(cycles, pairs, tw)
        if is_connected(g):
            return g


# multi-ribbon classes --------------------------------------------------------


@dataclass(frozen=True)
class GraphClass:
    graph: MultiRibbonGraph
    code: bytes


def _classes_for_map(args) -> Dict[tuple, RibbonGraph]:
    cycles, m, n_types, rho_types = args
    found: Dict[tuple, RibbonGraph] = {}
    E = len(m)
    roots = _root_choices(cycles)
    for types in itertools.product(range(n_types), repeat=E):
        twistable = [i for i, t in enumerate(types) if t not in rho_types]
        for bits in itertools.product((0, 1), repeat=len(twistable)):
            tw = [0] * E
            for i, b in zip(twistable, bits):
                tw[i] = b
            rib = [(e, tw[i], types[i]) for i, e in enumerate(m) if types[i] not in rho_types]
            rho = [(e, types[i]) for i, e in enumerate(m) if types[i] in rho_types]
            g = RibbonGraph.build(cycles, [e for e, _, _ in rib], [t for _, t, _ in rib], [e for e, _ in rho])
            lab = list(g.label)
            for i, e in enumerate(m):
                lab[e[0]] = lab[e[1]] = types[i]
            g = RibbonGraph(g.pi, g.alpha, g.twist, g.rho, tuple(lab), None, g.isolated)
            for r in roots:
                h = g.with_root(r)
                code = min_code_tuple(h)
                if code not in found:
                    found[code] = h
    return found


def enumerate_rooted(sig: ModelSignature, max_edges: int, exact: Optional[Sequence[int]] = None,
                     jobs: int = 1) -> List[MultiRibbonGraph]:
    """Connected rooted multi-ribbon classes with at most ``max_edges`` edges.

    ``exact`` optionally fixes the edge count per invariant. The edgeless
    one-vertex graph is included (total order 0). Output is sorted by
    (total edges, code) and independent of ``jobs``.
    """
    if max_edges < 0:
        return []
    rho_types = {i for i, inv in enumerate(sig.invariants) if inv.is_rho}
    n_types = len(sig.invariants)
    out: List[MultiRibbonGraph] = []
    for E in range(0, max_edges + 1):
        if exact is not None and sum(exact) != E:
            continue
        if E == 0:
            out.append(MultiRibbonGraph(RibbonGraph.build([[]]), sig))
            continue
        tasks = [(c, m, n_types, frozenset(rho_types)) for c, m in connected_maps(E)]
        found: Dict[tuple, RibbonGraph] = {}
        if jobs and jobs > 1 and len(tasks) > 64:
            with ProcessPoolExecutor(max_workers=jobs) as ex:
                for part in ex.map(_classes_for_map, tasks, chunksize=16):
                    for k, v in part.items():
                        found.setdefault(k, v)
        else:
            for t in tasks:
                for k, v in _classes_for_map(t).items():
                    found.setdefault(k, v)
        for k in sorted(found):
            mg = MultiRibbonGraph(_normal_form(found[k]), sig)
            if exact is not None and list(mg.edge_counts()) != list(exact):
                continue
            out.append(mg)
    return out


def _normal_form(g: RibbonGraph) -> RibbonGraph:
    """Relabel along the minimizing canonical walk and apply its vertex flips."""
    best = None
    for code, order, orient in walk_codes(g, g.root):
        if best is None or code < best[0]:
            best = (code, order, orient)
    _, order, orient = best
    perm = [0] * g.n
    for i, h in enumerate(order):
        perm[h] = i
    flips = [v for v, s in orient.items() if s < 0]
    for v in flips:
        g = g.flip_vertex(v)
    return g.relabel(perm)


# small unrooted orbit data ----------------------------------------------------


@dataclass(frozen=True)
class OrbitRecord:
    graph: RibbonGraph
    orbit: int
    stabilizer: int


def enumerate_unrooted_small(max_edges: int) -> List[OrbitRecord]:
    """Rooted connected ribbon classes with orbit data from the twist action."""
    if max_edges > 4:
        raise CostGuard("orbit data is brute force; use max_edges <= 4")
    out = []
    for E in range(0, max_edges + 1):
        for g in rooted_ribbon_classes(E):
            if E == 0:
                out.append(OrbitRecord(g, 1, 1))
                continue
            orb, stab = twist_orbit_and_stabilizer(g)
            out.append(OrbitRecord(g, orb, stab))
    return out


def default_jobs() -> int:
    return os.cpu_count() or 1
