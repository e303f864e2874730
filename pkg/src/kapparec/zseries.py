"""Truncated Laurent series in one variable z with ParamPoly coefficients.

Every series carries its provable truncation ``order``: exponents j < order
are stored exactly, querying j >= order raises :class:`TruncationError`.
``order is None`` marks an exactly-known series (finite Laurent polynomial).
``parity`` (0 even / 1 odd / None mixed) is tracked and asserted: the
recursion only ever meets definite-parity series, and parity mismatches are
the cheapest symmetry-bug detector available.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Union

from .parampoly import PP_ZERO, ParamPoly, Scalar

Coeff = Union[ParamPoly, Fraction, int]


class TruncationError(Exception):
    """Raised when a coefficient beyond the provable order is requested."""


def _pp(c: Coeff) -> ParamPoly:
    return c if isinstance(c, ParamPoly) else ParamPoly.const(c)


def _min_order(a: int | None, b: int | None) -> int | None:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


class ZSeries:
    __slots__ = ("coeffs", "order", "parity")

    def __init__(
        self,
        coeffs: Mapping[int, Coeff] | None = None,
        order: int | None = None,
        parity: int | None = None,
    ):
        cs: dict[int, ParamPoly] = {}
        if coeffs:
            for j, c in coeffs.items():
                c = _pp(c)
                if c:
                    cs[j] = c
        if order is not None:
            for j in cs:
                if j >= order:
                    raise ValueError(f"stored exponent {j} >= order {order}")
        if parity is not None:
            for j in cs:
                if j % 2 != parity:
                    raise ValueError(f"exponent {j} violates declared parity {parity}")
        self.coeffs = cs
        self.order = order
        self.parity = parity

    # -- basics --------------------------------------------------------------

    @staticmethod
    def zero(order: int | None = None) -> "ZSeries":
        return ZSeries({}, order=order)

    @staticmethod
    def monomial(exponent: int, coeff: Coeff = 1, order: int | None = None) -> "ZSeries":
        return ZSeries({exponent: coeff}, order=order, parity=exponent % 2)

    def low(self) -> int | None:
        """Smallest possibly-nonzero exponent (None for the exact zero series)."""
        if self.coeffs:
            return min(self.coeffs)
        return self.order  # zero up to order; None = exactly zero

    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, j: int) -> ParamPoly:
        if self.order is not None and j >= self.order:
            raise TruncationError(f"coefficient of z^{j} beyond order {self.order}")
        return self.coeffs.get(j, PP_ZERO)

    def items(self):
        return sorted(self.coeffs.items())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ZSeries):
            return NotImplemented
        return self.coeffs == other.coeffs and self.order == other.order

    def __str__(self) -> str:
        if not self.coeffs:
            return "0" + (f" + O(z^{self.order})" if self.order is not None else "")
        bits = [f"({c})*z^{j}" for j, c in self.items()]
        tail = f" + O(z^{self.order})" if self.order is not None else ""
        return " + ".join(bits) + tail

    __repr__ = __str__

    # -- linear structure ------------------------------------------------------

    def __add__(self, other: "ZSeries") -> "ZSeries":
        order = _min_order(self.order, other.order)
        cs = dict(self.coeffs)
        for j, c in other.coeffs.items():
            s = cs.get(j, PP_ZERO) + c
            if s:
                cs[j] = s
            elif j in cs:
                del cs[j]
        if order is not None:
            cs = {j: c for j, c in cs.items() if j < order}
        if not self.coeffs:
            parity = other.parity
        elif not other.coeffs:
            parity = self.parity
        else:
            parity = self.parity if self.parity == other.parity else None
        return ZSeries(cs, order=order, parity=parity)

    def __neg__(self) -> "ZSeries":
        return ZSeries(
            {j: -c for j, c in self.coeffs.items()}, order=self.order, parity=self.parity
        )

    def __sub__(self, other: "ZSeries") -> "ZSeries":
        return self + (-other)

    def scale(self, c: ParamPoly | Scalar) -> "ZSeries":
        c = _pp(c)
        if not c:
            return ZSeries.zero(order=self.order)
        return ZSeries(
            {j: v * c for j, v in self.coeffs.items()}, order=self.order, parity=self.parity
        )

    def shift(self, k: int) -> "ZSeries":
        """Multiply by z^k."""
        order = None if self.order is None else self.order + k
        parity = None if self.parity is None else (self.parity + k) % 2
        return ZSeries({j + k: c for j, c in self.coeffs.items()}, order=order, parity=parity)

    # -- multiplication ----------------------------------------------------------

    def mul(
        self,
        other: "ZSeries",
        hi: int | None = None,
        max_h_weight: int | None = None,
    ) -> "ZSeries":
        """Exact truncated product.

        The provable order is min(N1+b2, N2+b1) for truncations N_i and lower
        bounds b_i.  If hi is given the order is capped at hi+1 and higher
        exponents are not computed.
        """
        if not self.coeffs or not other.coeffs:
            if (self.order is None and not self.coeffs) or (
                other.order is None and not other.coeffs
            ):
                return ZSeries.zero(order=None)
            b1, b2 = self.low(), other.low()
            n = _min_order(
                None if self.order is None or b2 is None else self.order + b2,
                None if other.order is None or b1 is None else other.order + b1,
            )
            return ZSeries.zero(order=n)
        b1 = min(self.coeffs)
        b2 = min(other.coeffs)
        order = _min_order(
            None if self.order is None else self.order + b2,
            None if other.order is None else other.order + b1,
        )
        if hi is not None:
            order = _min_order(order, hi + 1)
        cs: dict[int, ParamPoly] = {}
        a_items = list(self.coeffs.items())
        b_items = list(other.coeffs.items())
        if len(a_items) > len(b_items):
            a_items, b_items = b_items, a_items
        for j1, c1 in a_items:
            for j2, c2 in b_items:
                j = j1 + j2
                if order is not None and j >= order:
                    continue
                p = c1.mul(c2, max_h_weight=max_h_weight)
                if not p:
                    continue
                s = cs.get(j, PP_ZERO) + p
                if s:
                    cs[j] = s
                elif j in cs:
                    del cs[j]
        if self.parity is None or other.parity is None:
            parity = None
        else:
            parity = (self.parity + other.parity) % 2
        return ZSeries(cs, order=order, parity=parity)

    def __mul__(self, other: "ZSeries") -> "ZSeries":
        return self.mul(other)


def series_invert(s: ZSeries, out_order: int | None = None) -> ZSeries:
    """Multiplicative inverse of a series whose leading coefficient is a unit.

    The leading coefficient must be a single monomial with no h-part (only
    c * eps^k is invertible in the coefficient ring).  The provable order of
    the result is N - 2b for input order N and leading exponent b; for an
    exactly-known input, ``out_order`` must be supplied.
    """
    if s.is_zero():
        raise ValueError("cannot invert the zero series")
    b = min(s.coeffs)
    lead = s.coeffs[b]
    if not lead.is_monomial():
        raise ValueError("leading term not a unit")
    (e0, h0), c0 = next(iter(lead.terms.items()))
    if h0:
        raise ValueError("leading term not a unit")
    inv_lead = ParamPoly.eps(-e0, Fraction(1) / c0) if e0 else ParamPoly.const(Fraction(1) / c0)
    if s.order is None:
        if out_order is None:
            raise ValueError("out_order required to invert an exact series")
        rel = out_order + b
    else:
        # s = lead*z^b*(1+r) with r known to relative order N-b, and the
        # relative inverse coefficient d_k only involves r_j for j <= k
        rel = s.order - b
        if out_order is not None:
            rel = min(rel, out_order + b)
    if rel <= 0:
        raise ValueError("insufficient truncation order for inversion")
    # s = lead * z^b * (1 + r),  r_j = coeff(b+j) / lead
    r = {}
    for j, c in s.coeffs.items():
        if j != b:
            r[j - b] = c * inv_lead
    d: dict[int, ParamPoly] = {0: ParamPoly.one()}
    for k in range(1, rel):
        acc = ParamPoly.zero()
        for j, rj in r.items():
            if 0 < j <= k and (k - j) in d:
                acc = acc + rj * d[k - j]
        if acc:
            d[k] = -acc
    cs = {k - b: dk * inv_lead for k, dk in d.items()}
    # the inverse of a definite-parity series has the same parity
    return ZSeries(cs, order=rel - b, parity=s.parity)


def series_exp(s: ZSeries, out_order: int | None = None) -> ZSeries:
    """exp of a series with zero constant term and no negative exponents."""
    if s.coeffs and min(s.coeffs) < 1:
        raise ValueError("exp requires positive valuation (constant term 0)")
    order = s.order if s.order is not None else out_order
    if order is None:
        raise ValueError("out_order required for exp of an exact series")
    out = ZSeries({0: 1}, order=order)
    term = ZSeries({0: 1}, order=order)
    for k in range(1, order):
        term = term.mul(s, hi=order - 1).scale(Fraction(1, k))
        if term.is_zero():
            break
        out = out + term
    return out


def series_log(s: ZSeries, out_order: int | None = None) -> ZSeries:
    """log of a series with constant term 1 and no negative exponents."""
    if s.is_zero() or min(s.coeffs) != 0 or s.coeffs[0] != ParamPoly.one():
        raise ValueError("log requires constant term 1")
    order = s.order if s.order is not None else out_order
    if order is None:
        raise ValueError("out_order required for log of an exact series")
    u = s - ZSeries({0: 1}, order=order)
    out = ZSeries.zero(order=order)
    term = ZSeries({0: 1}, order=order)
    for k in range(1, order):
        term = term.mul(u, hi=order - 1)
        if term.is_zero():
            break
        out = out + term.scale(Fraction((-1) ** (k + 1), k))
    return out


def principal_part(s: ZSeries) -> ZSeries:
    """The sub-series of strictly negative z-exponents.

    Exact (order None) whenever the input order is >= 0, since all negative
    exponents are then fully known.
    """
    cs = {j: c for j, c in s.coeffs.items() if j < 0}
    if s.order is None or s.order >= 0:
        order = None
    else:
        order = s.order
    return ZSeries(cs, order=order, parity=s.parity)
