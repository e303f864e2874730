"""Sparse exact polynomials in formal parameters h1, h2, ... and a Laurent
variable eps (integer exponents of either sign).

A monomial key is ``(eexp, hexp)`` where ``eexp`` is the eps exponent and
``hexp`` is a tuple of non-negative h-exponents, trailing zeros trimmed, so
``hexp[i]`` is the power of ``h_{i+1}``.  The weight of a monomial assigns
``h_j`` weight ``j`` (the cohomological degree it carries); eps carries none.

Instances are immutable after construction and all arithmetic is exact,
so values can be shared across concurrent workers without synchronization.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Union

from .rationals import rat_parse, rat_str

Key = tuple[int, tuple[int, ...]]
Scalar = Union[int, Fraction]

_ZERO = Fraction(0)


def _trim(h: tuple[int, ...]) -> tuple[int, ...]:
    n = len(h)
    while n and h[n - 1] == 0:
        n -= 1
    return h[:n]


def _hmul(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    if not a:
        return b
    if not b:
        return a
    if len(a) < len(b):
        a, b = b, a
    return tuple(x + (b[i] if i < len(b) else 0) for i, x in enumerate(a))


def _hweight(h: tuple[int, ...]) -> int:
    return sum((i + 1) * e for i, e in enumerate(h))


class ParamPoly:
    """Sparse polynomial over Fraction in eps (Laurent) and h1..hM."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Key, Fraction] | None = None):
        t: dict[Key, Fraction] = {}
        if terms:
            for (e, h), c in terms.items():
                c = Fraction(c)
                if c:
                    t[(e, _trim(tuple(h)))] = c
        self.terms = t

    # -- constructors -------------------------------------------------------

    @staticmethod
    def const(c: Scalar) -> "ParamPoly":
        c = Fraction(c)
        return ParamPoly({(0, ()): c}) if c else ParamPoly()

    @staticmethod
    def zero() -> "ParamPoly":
        return ParamPoly()

    @staticmethod
    def one() -> "ParamPoly":
        return ParamPoly.const(1)

    @staticmethod
    def eps(power: int = 1, coeff: Scalar = 1) -> "ParamPoly":
        return ParamPoly({(power, ()): Fraction(coeff)})

    @staticmethod
    def h(index: int, power: int = 1, coeff: Scalar = 1) -> "ParamPoly":
        """The monomial coeff * h_index^power (index >= 1)."""
        if index < 1:
            raise ValueError("h variables are indexed from 1")
        hexp = [0] * index
        hexp[index - 1] = power
        return ParamPoly({(0, tuple(hexp)): Fraction(coeff)})

    # -- predicates ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and (0, ()) in self.terms)

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def as_fraction(self) -> Fraction:
        if not self.terms:
            return _ZERO
        if self.is_constant():
            return self.terms[(0, ())]
        raise ValueError(f"not a constant: {self}")

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other: "ParamPoly | Scalar") -> "ParamPoly":
        other = _coerce(other)
        if not other.terms:
            return self
        if not self.terms:
            return other
        t = dict(self.terms)
        for k, c in other.terms.items():
            s = t.get(k, _ZERO) + c
            if s:
                t[k] = s
            elif k in t:
                del t[k]
        out = ParamPoly.__new__(ParamPoly)
        out.terms = t
        return out

    __radd__ = __add__

    def __neg__(self) -> "ParamPoly":
        out = ParamPoly.__new__(ParamPoly)
        out.terms = {k: -c for k, c in self.terms.items()}
        return out

    def __sub__(self, other: "ParamPoly | Scalar") -> "ParamPoly":
        return self + (-_coerce(other))

    def __rsub__(self, other: "ParamPoly | Scalar") -> "ParamPoly":
        return _coerce(other) + (-self)

    def __mul__(self, other: "ParamPoly | Scalar") -> "ParamPoly":
        if isinstance(other, (int, Fraction)):
            other = Fraction(other)
            if not other:
                return ParamPoly()
            out = ParamPoly.__new__(ParamPoly)
            out.terms = {k: c * other for k, c in self.terms.items()}
            return out
        return self.mul(other)

    __rmul__ = __mul__

    def mul(self, other: "ParamPoly", max_h_weight: int | None = None) -> "ParamPoly":
        """Product, optionally dropping monomials of h-weight > max_h_weight."""
        t: dict[Key, Fraction] = {}
        for (e1, h1), c1 in self.terms.items():
            for (e2, h2), c2 in other.terms.items():
                h = _hmul(h1, h2)
                if max_h_weight is not None and _hweight(h) > max_h_weight:
                    continue
                k = (e1 + e2, h)
                s = t.get(k, _ZERO) + c1 * c2
                if s:
                    t[k] = s
                elif k in t:
                    del t[k]
        out = ParamPoly.__new__(ParamPoly)
        out.terms = t
        return out

    def __pow__(self, n: int) -> "ParamPoly":
        if n < 0:
            raise ValueError("negative powers only via eps monomials")
        out = ParamPoly.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base if n > 1 else base
            n >>= 1
        return out

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = ParamPoly.const(other)
        if not isinstance(other, ParamPoly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    # -- eps / h structure ---------------------------------------------------

    def eps_valuation(self) -> int:
        """Minimal eps exponent; undefined (raises) on the zero polynomial."""
        if not self.terms:
            raise ValueError("eps valuation of zero is undefined")
        return min(e for e, _ in self.terms)

    def eps_part(self, power: int) -> "ParamPoly":
        """Coefficient of eps^power, as a polynomial in h alone."""
        return ParamPoly({(0, h): c for (e, h), c in self.terms.items() if e == power})

    def max_h_weight(self) -> int:
        return max((_hweight(h) for _, h in self.terms), default=0)

    def subs_eps(self, value: Scalar) -> "ParamPoly":
        """Substitute a rational value for eps (exact; negative powers allowed)."""
        v = Fraction(value)
        t: dict[Key, Fraction] = {}
        for (e, h), c in self.terms.items():
            if e and not v:
                if e < 0:
                    raise ZeroDivisionError("eps -> 0 with negative eps powers")
                continue
            s = t.get((0, h), _ZERO) + c * v**e
            if s:
                t[(0, h)] = s
            elif (0, h) in t:
                del t[(0, h)]
        return ParamPoly(t)

    def subs_h(self, values: Mapping[int, "ParamPoly | Scalar"]) -> "ParamPoly":
        """Substitute values (scalars or polynomials) for the h variables.

        Every h-index appearing in self must be present in ``values``.
        """
        out = ParamPoly()
        for (e, h), c in self.terms.items():
            term = ParamPoly.eps(e, c) if e else ParamPoly.const(c)
            for i, p in enumerate(h):
                if not p:
                    continue
                v = values[i + 1]
                v = v if isinstance(v, ParamPoly) else ParamPoly.const(v)
                term = term * v**p
            out = out + term
        return out

    # -- serialization -------------------------------------------------------

    def to_triples(self) -> list[tuple[int, list[int], str]]:
        """Canonical (eps-exp, h-exp-vector, "p/q") triples, sorted by key."""
        return [
            (e, list(h), rat_str(c))
            for (e, h), c in sorted(self.terms.items())
        ]

    @staticmethod
    def from_triples(triples: Iterable) -> "ParamPoly":
        return ParamPoly(
            {(int(e), tuple(int(x) for x in h)): rat_parse(c) for e, h, c in triples}
        )

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        bits = []
        for (e, h), c in sorted(self.terms.items()):
            factors = []
            if c != 1 or (e == 0 and not h):
                factors.append(rat_str(c))
            if e:
                factors.append(f"e^{e}" if e != 1 else "e")
            for i, p in enumerate(h):
                if p:
                    factors.append(f"h{i + 1}" + (f"^{p}" if p > 1 else ""))
            bits.append("*".join(factors))
        return " + ".join(bits)

    __repr__ = __str__


def _coerce(x: "ParamPoly | Scalar") -> ParamPoly:
    if isinstance(x, ParamPoly):
        return x
    return ParamPoly.const(x)


PP_ZERO = ParamPoly()
PP_ONE = ParamPoly.one()
