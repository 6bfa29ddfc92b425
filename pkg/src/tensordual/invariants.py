"""Quartic trace invariants of a real graded tensor of order D.

An invariant contracts four tensors ``a1, a2, b1, b2``. Colors outside the
transmitted set ``C`` are contracted inside each half (``a1-a2`` and
``b1-b2``); a color ``c`` in ``C`` is contracted across the halves, either in
the parallel channel (``a1-b1, a2-b2``) or the cross channel
(``a1-b2, a2-b1``). Exchanging ``b1`` and ``b2`` flips every channel at once,
so a class is stored as the lexicographically smaller of the two channel
vectors. Color 1 is never transmitted.

Channel bits: parallel = 0, cross = 1.

Metric conventions: ``g = delta`` for an orthogonal color and ``g = omega``
for a symplectic one, with ``omega^2 = -1`` so that ``omega^T = -omega`` and
``omega^-1 = -omega``.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple

PARALLEL = 0
CROSS = 1

# tensor slots inside one invariant
A1, A2, B1, B2 = 0, 1, 2, 3


class InvalidOrder(ValueError):
    pass


class ConfigError(ValueError):
    """Malformed model configuration; ``field`` names the offending entry."""

    def __init__(self, field_name: str, message: str):
        super().__init__(f"{field_name}: {message}")
        self.field = field_name


def count_invariants(D: int) -> int:
    if not isinstance(D, int) or D < 1:
        raise InvalidOrder(f"tensor order must be a positive integer, got {D!r}")
    return (1 + 3 ** (D - 1)) // 2


@dataclass(frozen=True, order=True)
class QuarticInvariant:
    transmitted: Tuple[int, ...] = ()
    channels: Tuple[int, ...] = ()

    def __post_init__(self):
        if len(self.transmitted) != len(self.channels):
            raise ValueError("one channel bit per transmitted color")
        if list(self.transmitted) != sorted(set(self.transmitted)):
            raise ValueError("transmitted colors must be sorted and distinct")
        if 1 in self.transmitted:
            raise ValueError("color 1 is never transmitted; use canonical_invariant")
        if any(b not in (0, 1) for b in self.channels):
            raise ValueError("channel bits are 0 (parallel) or 1 (cross)")

    @classmethod
    def make(cls, transmitted: Iterable[int], channels: Iterable[int]) -> "QuarticInvariant":
        pairs = sorted(zip(transmitted, channels))
        cs = tuple(c for c, _ in pairs)
        bits = tuple(b for _, b in pairs)
        flipped = tuple(1 - b for b in bits)
        return cls(cs, min(bits, flipped))

    @property
    def is_rho(self) -> bool:
        return not self.transmitted

    def channel(self, c: int) -> int:
        return self.channels[self.transmitted.index(c)]

    @property
    def ident(self) -> str:
        if not self.transmitted:
            return "rho"
        return "-".join(f"{c}{'p' if b == PARALLEL else 'x'}" for c, b in zip(self.transmitted, self.channels))

    def sort_key(self):
        return (len(self.transmitted), self.transmitted, self.channels)

    def contractions(self, D: int) -> Dict[int, List[Tuple[int, int]]]:
        """Ordered metric factors per color, as (slot, slot) pairs."""
        out: Dict[int, List[Tuple[int, int]]] = {}
        for c in range(1, D + 1):
            if c not in self.transmitted:
                out[c] = [(A1, A2), (B1, B2)]
            elif self.channel(c) == PARALLEL:
                out[c] = [(A1, B1), (A2, B2)]
            else:
                out[c] = [(A1, B2), (A2, B1)]
        return out

    def to_json(self) -> dict:
        return {"colors": list(self.transmitted), "channels": list(self.channels)}


RHO = QuarticInvariant()


def enumerate_invariants(D: int) -> List[QuarticInvariant]:
    count_invariants(D)
    out = {RHO}
    others = range(2, D + 1)
    for k in range(1, D):
        for cs in itertools.combinations(others, k):
            for bits in itertools.product((0, 1), repeat=k):
                out.add(QuarticInvariant.make(cs, bits))
    return sorted(out, key=QuarticInvariant.sort_key)


def invariant_sign_normalization(inv: QuarticInvariant, parity: Sequence[int]) -> int:
    """prod over transmitted colors of (-sgn pi^c)^{|c|}."""
    s = 1
    for c, b in zip(inv.transmitted, inv.channels):
        if b == PARALLEL and parity[c - 1]:
            s = -s
    return s


def _pattern(contr: Mapping[int, Sequence[Tuple[int, int]]]) -> Dict[int, frozenset]:
    return {c: frozenset(frozenset(p) for p in pairs) for c, pairs in contr.items()}


def canonical_invariant(D: int, colors: Iterable[int], channels: Iterable[int]) -> QuarticInvariant:
    """Re-sort a user invariant (possibly transmitting color 1) to canonical form.

    The four tensors are relabeled until the contraction pattern matches one of
    the canonical classes.
    """
    colors = list(colors)
    channels = list(channels)
    if len(colors) != len(channels):
        raise ValueError("one channel per color")
    if any(not 1 <= c <= D for c in colors) or len(set(colors)) != len(colors):
        raise ValueError(f"colors must be distinct and in 1..{D}")
    if 1 not in colors:
        return QuarticInvariant.make(colors, channels)
    raw: Dict[int, List[Tuple[int, int]]] = {}
    for c in range(1, D + 1):
        if c not in colors:
            raw[c] = [(A1, A2), (B1, B2)]
        elif channels[colors.index(c)] == PARALLEL:
            raw[c] = [(A1, B1), (A2, B2)]
        else:
            raw[c] = [(A1, B2), (A2, B1)]
    target = _pattern(raw)
    for inv in enumerate_invariants(D):
        pat = _pattern(inv.contractions(D))
        for perm in itertools.permutations(range(4)):
            moved = {c: frozenset(frozenset(perm[x] for x in p) for p in ps) for c, ps in pat.items()}
            if moved == target:
                return inv
    raise ValueError("no canonical class matches")  # unreachable for valid input


# colour loop words ---------------------------------------------------------

G, G_T, G_INV, G_INV_T = "G", "G_T", "G_INV", "G_INV_T"
_LETTER_SIGN = {G: 1, G_T: -1, G_INV: -1, G_INV_T: 1}


@dataclass(frozen=True)
class ColorLoopWord:
    """Closed product of metric factors along one color loop.

    Evaluates to ``sign * N_c``; ``sign`` is what ``evaluate`` returns.
    """

    letters: Tuple[str, ...]

    def evaluate(self, parity: int) -> int:
        for a in self.letters:
            if a not in _LETTER_SIGN:
                raise ValueError(f"unknown letter {a!r}")
        if not parity:
            return 1
        k = len(self.letters)
        if k % 2:
            raise ValueError("odd number of omega factors: trace vanishes")
        s = -1 if (k // 2) % 2 else 1
        for a in self.letters:
            s *= _LETTER_SIGN[a]
        return s

    def reversed(self) -> "ColorLoopWord":
        swap = {G: G_T, G_T: G, G_INV: G_INV_T, G_INV_T: G_INV}
        return ColorLoopWord(tuple(swap[a] for a in reversed(self.letters)))


# model signature -----------------------------------------------------------


def default_coupling_name(inv: QuarticInvariant, D: int) -> str:
    if inv.is_rho:
        return "kappa"
    if D == 2:
        return "lambda"
    return "lambda_" + inv.ident.replace("-", "_")


@dataclass(frozen=True)
class ModelSignature:
    D: int
    parity: Tuple[int, ...]
    invariants: Tuple[QuarticInvariant, ...] = ()
    coupling_names: Tuple[str, ...] = ()

    def __post_init__(self):
        count_invariants(self.D)
        if len(self.parity) != self.D or any(p not in (0, 1) for p in self.parity):
            raise ValueError("parity needs exactly D entries in {0,1}")
        if len(self.invariants) != len(self.coupling_names):
            raise ValueError("one coupling name per invariant")
        if len(set(self.invariants)) != len(self.invariants):
            raise ValueError("duplicate invariant")
        if len(set(self.coupling_names)) != len(self.coupling_names):
            raise ValueError("duplicate coupling name")
        for inv in self.invariants:
            if inv.transmitted and inv.transmitted[-1] > self.D:
                raise ValueError("invariant uses a color beyond D")

    @classmethod
    def build(cls, D: int, parity: Sequence[int], invariants: Sequence[QuarticInvariant] | None = None,
              couplings: Mapping[str, str] | None = None) -> "ModelSignature":
        invs = enumerate_invariants(D) if invariants is None else sorted(set(invariants), key=QuarticInvariant.sort_key)
        couplings = couplings or {}
        names = tuple(couplings.get(inv.ident, default_coupling_name(inv, D)) for inv in invs)
        return cls(D, tuple(parity), tuple(invs), names)

    @property
    def tensor_parity(self) -> int:
        return sum(self.parity) % 2

    @property
    def n_names(self) -> Tuple[str, ...]:
        return tuple(f"N{c}" for c in range(1, self.D + 1))

    @property
    def variables(self) -> Tuple[str, ...]:
        return self.n_names + self.coupling_names

    def coupling(self, inv: QuarticInvariant) -> str:
        return self.coupling_names[self.invariants.index(inv)]

    def with_parity(self, parity: Sequence[int]) -> "ModelSignature":
        return ModelSignature(self.D, tuple(parity), self.invariants, self.coupling_names)

    def to_json(self) -> dict:
        return {
            "D": self.D,
            "parity": list(self.parity),
            "invariants": [inv.to_json() for inv in self.invariants],
            "couplings": {inv.ident: name for inv, name in zip(self.invariants, self.coupling_names)},
        }


def load_model(data: Mapping | str) -> ModelSignature:
    """Parse the model JSON (dict or text). Raises ConfigError naming the bad field."""
    if isinstance(data, str):
        try:
            data = json.loads(data)
        except json.JSONDecodeError as exc:
            raise ConfigError("<root>", f"not valid JSON ({exc})") from None
    if not isinstance(data, Mapping):
        raise ConfigError("<root>", "expected an object")
    D = data.get("D")
    if not isinstance(D, int) or isinstance(D, bool) or D < 1:
        raise ConfigError("D", "must be a positive integer")
    parity = data.get("parity", [0] * D)
    if not isinstance(parity, list) or len(parity) != D or any(p not in (0, 1) or isinstance(p, bool) for p in parity):
        raise ConfigError("parity", f"must be a list of {D} entries in {{0,1}}")
    chosen = data.get("invariants", "all")
    if chosen == "all":
        invs = None
    elif isinstance(chosen, list):
        invs = []
        for i, item in enumerate(chosen):
            where = f"invariants[{i}]"
            if not isinstance(item, Mapping) or "colors" not in item:
                raise ConfigError(where, "expected {\"colors\": [...], \"channels\": [...]}")
            colors = item["colors"]
            channels = item.get("channels", [0] * len(colors) if isinstance(colors, list) else None)
            if not isinstance(colors, list) or not isinstance(channels, list):
                raise ConfigError(where, "colors and channels must be lists")
            try:
                invs.append(canonical_invariant(D, colors, channels))
            except ValueError as exc:
                raise ConfigError(where, str(exc)) from None
    else:
        raise ConfigError("invariants", "must be \"all\" or a list")
    couplings = data.get("couplings", {})
    if not isinstance(couplings, Mapping) or not all(isinstance(v, str) for v in couplings.values()):
        raise ConfigError("couplings", "must map invariant ids to names")
    try:
        sig = ModelSignature.build(D, parity, invs, couplings)
    except ValueError as exc:
        raise ConfigError("couplings", str(exc)) from None
    known = {inv.ident for inv in sig.invariants}
    for key in couplings:
        if key not in known:
            raise ConfigError(f"couplings.{key}", "unknown invariant id")
    return sig
