"""Graph-free evaluation of Gaussian moments by summing over pairings.

The quadratic form is ``Q = g^1 (x) ... (x) g^D`` and the covariance is
``<T^a T^b> = (Q^-1)^{ab}``. For an odd total parity the tensor entries are
Grassmann numbers and every pairing carries the sign of the permutation that
brings paired factors next to each other.

Each color is handled separately: metric factors from the invariants and the
two-point insertion, and inverse-metric factors from the pairing, close into
loops. A loop is written as a word in G, G^T, G^-1, G^-T and evaluated by
``ColorLoopWord``; nothing else in this module knows about signs of omega.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import factorial
from typing import Dict, List, Mapping, Optional, Tuple

from .invariants import (
    G,
    G_INV,
    G_INV_T,
    G_T,
    ColorLoopWord,
    ModelSignature,
    QuarticInvariant,
    invariant_sign_normalization,
)
from .poly import Poly, series_inverse, series_log

MAX_PAIRS = 8


class CostGuard(ValueError):
    pass


def _metric_pairs(sig: ModelSignature, insertion: bool, multiset: Mapping[QuarticInvariant, int]):
    """Factor count and, per color, the ordered metric pairs (x, y) meaning g_{a_x a_y}."""
    pairs: Dict[int, List[Tuple[int, int]]] = {c: [] for c in range(1, sig.D + 1)}
    n = 0
    if insertion:
        for c in pairs:
            pairs[c].append((0, 1))
        n = 2
    for inv in sig.invariants:
        for _ in range(multiset.get(inv, 0)):
            for c, ps in inv.contractions(sig.D).items():
                for x, y in ps:
                    pairs[c].append((n + x, n + y))
            n += 4
    return n, pairs


def _pairings(n: int):
    """Perfect matchings of 0..n-1 with the sign of the interleaving permutation."""

    def rec(rest: List[int], sign: int, acc: List[Tuple[int, int]]):
        if not rest:
            yield sign, acc
            return
        a = rest[0]
        for k in range(1, len(rest)):
            b = rest[k]
            s = sign if k % 2 == 1 else -sign
            yield from rec(rest[1:k] + rest[k + 1:], s, acc + [(a, b)])

    yield from rec(list(range(n)), 1, [])


def gaussian_moment(sig: ModelSignature, insertion: bool = False,
                    multiset: Optional[Mapping[QuarticInvariant, int]] = None) -> Poly:
    """< [T T prod g] prod_q I_q^{m_q} > at zero coupling, as a polynomial in N_c.

    Each invariant is multiplied by its sign normalization. Raises CostGuard
    beyond 2*MAX_PAIRS factors.
    """
    multiset = dict(multiset or {})
    for inv in multiset:
        if inv not in sig.invariants:
            raise ValueError(f"invariant {inv.ident} is not in the signature")
    key = (sig.D, sig.parity, insertion, tuple(sorted((inv.sort_key(), k) for inv, k in multiset.items() if k)))
    terms = _moment_terms(key, sig, insertion, tuple((inv, k) for inv, k in multiset.items() if k))
    norm = 1
    for inv, k in multiset.items():
        norm *= invariant_sign_normalization(inv, sig.parity) ** k
    names = sig.variables
    out: Dict[tuple, Fraction] = {}
    for exps, c in terms.items():
        full = exps + (0,) * (len(names) - sig.D)
        out[full] = c * norm
    return Poly(names, out)


_CACHE: Dict[tuple, Dict[tuple, int]] = {}


def _moment_terms(key, sig, insertion, items) -> Dict[tuple, int]:
    if key in _CACHE:
        return _CACHE[key]
    n, metric = _metric_pairs(sig, insertion, dict(items))
    if n % 2:
        raise ValueError("odd number of tensor factors")
    if n > 2 * MAX_PAIRS:
        raise CostGuard(f"{n} factors: more than {2 * MAX_PAIRS} is refused, lower the order")
    grassmann = sig.tensor_parity == 1
    # per color: partner and whether this factor is the left index of the metric
    mpart = {}
    for c, ps in metric.items():
        part = [0] * n
        left = [False] * n
        for x, y in ps:
            part[x], part[y] = y, x
            left[x] = True
        mpart[c] = (part, left)
    terms: Dict[tuple, int] = {}
    for sign, pairing in _pairings(n):
        prop = [0] * n
        for a, b in pairing:
            prop[a], prop[b] = b, a
        total = sign if grassmann else 1
        exps = []
        for c in range(1, sig.D + 1):
            part, left = mpart[c]
            parity = sig.parity[c - 1]
            seen = [False] * n
            loops = 0
            for x0 in range(n):
                if seen[x0]:
                    continue
                letters = []
                x = x0
                while True:
                    seen[x] = True
                    y = part[x]
                    letters.append(G if left[x] else G_T)
                    seen[y] = True
                    z = prop[y]
                    letters.append(G_INV if y < z else G_INV_T)
                    x = z
                    if x == x0:
                        break
                loops += 1
                total *= ColorLoopWord(tuple(letters)).evaluate(parity)
            exps.append(loops)
        k = tuple(exps)
        terms[k] = terms.get(k, 0) + total
    terms = {k: v for k, v in terms.items() if v}
    _CACHE[key] = terms
    return terms


def _multisets(k: int, order: int):
    for m in itertools.product(range(order + 1), repeat=k):
        if sum(m) <= order:
            yield m


def _expansion(sig: ModelSignature, max_order: int, insertion: bool) -> Poly:
    """sum_m prod_q (-lambda_q/4)^{m_q}/m_q! < [TTg] prod I_q^{m_q} >; rho counts as lambda."""
    names = sig.variables
    out = Poly.zero(names)
    for m in _multisets(len(sig.invariants), max_order):
        coeff = Fraction(1)
        powers = {}
        for name, k in zip(sig.coupling_names, m):
            coeff *= Fraction((-1) ** k, 4 ** k * factorial(k))
            if k:
                powers[name] = k
        mom = gaussian_moment(sig, insertion, {inv: k for inv, k in zip(sig.invariants, m) if k})
        out = out + mom * Poly.monomial(names, powers, coeff)
    return out


def oracle_z(sig: ModelSignature, max_order: int) -> Poly:
    return _expansion(sig, max_order, False)


def oracle_g2(sig: ModelSignature, max_order: int) -> Poly:
    num = _expansion(sig, max_order, True)
    z = _expansion(sig, max_order, False)
    inv = series_inverse(z, sig.coupling_names, max_order)
    return (num * inv).truncate(sig.coupling_names, max_order)


def oracle_lnz(sig: ModelSignature, max_order: int) -> Poly:
    return series_log(_expansion(sig, max_order, False), sig.coupling_names, max_order)
