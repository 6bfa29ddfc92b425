"""Exact multivariate polynomials with rational coefficients.

A polynomial lives over a fixed tuple of variable names. Terms are stored as a
dict mapping exponent tuples to ``Fraction`` coefficients; zero coefficients
are never stored.

Truncated power-series helpers (``series_exp``, ``series_log``,
``series_inverse``) treat a subset of the variables (the couplings) as the
grading variables and drop every term whose total degree in them exceeds the
requested order.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, Mapping, Sequence, Tuple, Union

Exponents = Tuple[int, ...]
Scalar = Union[int, Fraction]


class Poly:
    __slots__ = ("variables", "terms")

    def __init__(self, variables: Sequence[str], terms: Mapping[Exponents, Scalar] | None = None):
        self.variables: Tuple[str, ...] = tuple(variables)
        clean: Dict[Exponents, Fraction] = {}
        if terms:
            n = len(self.variables)
            for exps, c in terms.items():
                if len(exps) != n:
                    raise ValueError("exponent vector has wrong length")
                if c:
                    clean[tuple(exps)] = Fraction(c)
        self.terms = clean

    # construction helpers

    @classmethod
    def zero(cls, variables: Sequence[str]) -> "Poly":
        return cls(variables)

    @classmethod
    def const(cls, variables: Sequence[str], c: Scalar) -> "Poly":
        return cls(variables, {(0,) * len(variables): c})

    @classmethod
    def var(cls, variables: Sequence[str], name: str, power: int = 1) -> "Poly":
        exps = [0] * len(variables)
        exps[list(variables).index(name)] = power
        return cls(variables, {tuple(exps): 1})

    @classmethod
    def monomial(cls, variables: Sequence[str], powers: Mapping[str, int], coeff: Scalar = 1) -> "Poly":
        variables = tuple(variables)
        exps = [0] * len(variables)
        for name, p in powers.items():
            exps[variables.index(name)] += p
        return cls(variables, {tuple(exps): coeff})

    # arithmetic

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.variables != self.variables:
                raise ValueError("polynomials over different variables")
            return other
        if isinstance(other, (int, Fraction)):
            return Poly.const(self.variables, other)
        return NotImplemented

    def __add__(self, other) -> "Poly":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return _raw(self.variables, out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return _raw(self.variables, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> "Poly":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> "Poly":
        return (-self) + other

    def __mul__(self, other) -> "Poly":
        if isinstance(other, (int, Fraction)):
            if not other:
                return Poly(self.variables)
            return _raw(self.variables, {e: c * other for e, c in self.terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: Dict[Exponents, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return Poly(self.variables, out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        if k < 0:
            raise ValueError("negative power")
        result = Poly.const(self.variables, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Poly.const(self.variables, other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.variables == other.variables and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.variables, frozenset(self.terms.items())))

    def __bool__(self) -> bool:
        return bool(self.terms)

    # queries and transforms

    def coefficient(self, powers: Mapping[str, int]) -> Fraction:
        exps = [0] * len(self.variables)
        for name, p in powers.items():
            exps[self.variables.index(name)] = p
        return self.terms.get(tuple(exps), Fraction(0))

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * len(self.variables), Fraction(0))

    def degree_in(self, names: Iterable[str]) -> int:
        idx = [self.variables.index(n) for n in names]
        return max((sum(e[i] for i in idx) for e in self.terms), default=0)

    def truncate(self, names: Iterable[str], order: int) -> "Poly":
        """Drop terms whose total degree in ``names`` exceeds ``order``."""
        idx = [self.variables.index(n) for n in names]
        return _raw(self.variables, {e: c for e, c in self.terms.items() if sum(e[i] for i in idx) <= order})

    def diff(self, name: str) -> "Poly":
        i = self.variables.index(name)
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                f = list(e)
                f[i] -= 1
                out[tuple(f)] = c * e[i]
        return _raw(self.variables, out)

    def euler(self, name: str) -> "Poly":
        """x d/dx: scale each term by its degree in ``name``."""
        i = self.variables.index(name)
        return _raw(self.variables, {e: c * e[i] for e, c in self.terms.items() if e[i]})

    def flip_sign(self, name: str) -> "Poly":
        """Substitute name -> -name."""
        i = self.variables.index(name)
        return _raw(self.variables, {e: (-c if e[i] % 2 else c) for e, c in self.terms.items()})

    def substitute(self, values: Mapping[str, "Poly | Scalar"]) -> "Poly":
        out = Poly(self.variables)
        for e, c in self.terms.items():
            term = Poly.const(self.variables, c)
            rest = list(e)
            for name, val in values.items():
                i = self.variables.index(name)
                k = rest[i]
                rest[i] = 0
                if k:
                    if not isinstance(val, Poly):
                        val = Poly.const(self.variables, val)
                    term = term * (val ** k)
            out = out + term * Poly(self.variables, {tuple(rest): 1})
        return out

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: (sum(t[0]), t[0]))

    def to_json(self) -> dict:
        return {
            "variables": list(self.variables),
            "terms": [{"exponents": list(e), "coeff": _frac_str(c)} for e, c in self.sorted_terms()],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "Poly":
        terms = {tuple(t["exponents"]): Fraction(t["coeff"]) for t in data["terms"]}
        return cls(data["variables"], terms)

    def __repr__(self) -> str:
        return f"Poly({self.pretty()})"

    def pretty(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                (v if k == 1 else f"{v}^{k}") for v, k in zip(self.variables, e) if k
            )
            cs = str(c)
            if not mono:
                parts.append(cs)
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{cs}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


def _raw(variables: Tuple[str, ...], terms: Dict[Exponents, Fraction]) -> Poly:
    p = Poly.__new__(Poly)
    p.variables = variables
    p.terms = terms
    return p


def _frac_str(c: Fraction) -> str:
    return f"{c.numerator}/{c.denominator}"


# truncated series in a subset of grading variables

def series_inverse(p: Poly, names: Sequence[str], order: int) -> Poly:
    """1/p up to ``order``; the grade-zero part must be a nonzero constant."""
    c0 = p.truncate(names, 0)
    if set(c0.terms) - {(0,) * len(p.variables)} or not c0:
        raise ValueError("series_inverse needs a nonzero constant leading term")
    a = c0.constant_term()
    x = (p - c0) * Fraction(1, a)
    out = Poly.const(p.variables, 1)
    power = Poly.const(p.variables, 1)
    for k in range(1, order + 1):
        power = (power * x).truncate(names, order)
        out = out + power * (-1) ** k
    return out * Fraction(1, a)


def series_log(p: Poly, names: Sequence[str], order: int) -> Poly:
    """log p up to ``order``; p must have grade-zero part exactly 1."""
    c0 = p.truncate(names, 0)
    if c0 != Poly.const(p.variables, 1):
        raise ValueError("series_log needs leading term 1")
    x = p - 1
    out = Poly(p.variables)
    power = Poly.const(p.variables, 1)
    for k in range(1, order + 1):
        power = (power * x).truncate(names, order)
        out = out + power * Fraction((-1) ** (k + 1), k)
    return out


def series_exp(p: Poly, names: Sequence[str], order: int) -> Poly:
    """exp p up to ``order``; p must have no grade-zero part."""
    if p.truncate(names, 0):
        raise ValueError("series_exp needs a vanishing grade-zero part")
    out = Poly.const(p.variables, 1)
    power = Poly.const(p.variables, 1)
    fact = 1
    for k in range(1, order + 1):
        power = (power * p).truncate(names, order)
        fact *= k
        out = out + power * Fraction(1, fact)
    return out
