"""Topological recursion engine for spectral curves x = z^2/2 with an odd
y-series (a simple pole at z=0 is allowed).

Correlators are stored in the basis prod (2k_i+1)!! dz_i / z_i^{2k_i+2}; the
entry at (k_1..k_n) of the curve with y = z + sum h_k z^{2k+1}/(2k+1)!! equals
the pairing of exp(sum s_i(h) kappa_i) with prod psi_i^{k_i}.

The recursion computes, one active variable at a time,

    w_{g,n}(z, rest) = principal part of  W_{g,n}(z, rest) / (2 eta(z)),

where eta/dz = z y(z) and W is the diagonal term w_{g-1,n+1}(z,z,rest) plus
all ordered pair products; the unstable conventions are w_{0,1} = 0, the
mixed w_{0,2}(z, z_j) expanding as (2k_j+1) z^{2k_j} dz, and the (0,2)
diagonal replaced by dz^2/(4 z^2) (it only arises for (g,n) = (1,1)).

Computed correlators are immutable and the per-engine table is append-only
with deterministic, schedule-independent entries.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Iterator

from .coeffs import h_star
from .parampoly import PP_ZERO, ParamPoly
from .rationals import fact, odd_df
from .zseries import ZSeries, principal_part, series_invert

FAMILIES = ("kw", "k", "j", "weak-k", "weak-j", "bgw", "kstar")


class InsufficientOrderError(Exception):
    """The curve series is not truncated deep enough for the requested (g, n)."""


class SpectralCurve:
    """Odd y-series together with the derived inverse of 2*eta."""

    def __init__(self, family: str, y: ZSeries, order: int, n_h: int = 0,
                 h_weight_cap: int | None = None):
        if y.parity != 1:
            raise ValueError("y must be odd in z")
        low = y.low()
        if low is None or low < -1:
            raise ValueError("y may have at most a simple pole at z = 0")
        self.family = family
        self.y = y
        self.order = order
        self.n_h = n_h
        self.h_weight_cap = h_weight_cap
        self._inv2eta: ZSeries | None = None

    def eta_over_dz(self) -> ZSeries:
        return self.y.shift(1)

    def inv2eta(self) -> ZSeries:
        if self._inv2eta is None:
            two_eta = self.eta_over_dz().scale(2)
            if two_eta.order is None:
                inv = series_invert(two_eta, out_order=self.order)
            else:
                inv = series_invert(two_eta)
            if self.h_weight_cap is not None:
                inv = _cap_series(inv, self.h_weight_cap)
            self._inv2eta = inv
        return self._inv2eta


def _cap_series(s: ZSeries, cap: int) -> ZSeries:
    cs = {}
    for j, c in s.coeffs.items():
        c2 = ParamPoly({k: v for k, v in c.terms.items() if _hw(k[1]) <= cap})
        if c2:
            cs[j] = c2
    return ZSeries(cs, order=s.order, parity=s.parity)


def _hw(h: tuple[int, ...]) -> int:
    return sum((i + 1) * e for i, e in enumerate(h))


def required_order(g: int, n: int) -> int:
    """Truncation order of y needed to assemble w_{g,n}: all poles of the
    first slot have order <= 2(3g-2+n)+2."""
    return 2 * (3 * g - 2 + n) + 2


def build_curve(family: str, order: int, n_h: int = 0,
                h_weight_cap: int | None = None) -> SpectralCurve:
    """Construct a named curve with y truncated at the given order.

    Families: "kw" y=z; "k" y=z/(z^2+eps); "j" the arcsinh-series curve;
    "weak-k"/"weak-j" the two-parameter curves with formal h_1..h_{n_h};
    "bgw" y=1/z; "kstar" y=z/(1-z^2).
    """
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}; choose from {FAMILIES}")
    if order < 2:
        raise ValueError("curve order must be at least 2")
    if family == "kw":
        y = ZSeries({1: 1}, order=None, parity=1)
    elif family == "bgw":
        y = ZSeries({-1: 1}, order=None, parity=1)
    elif family == "kstar":
        y = ZSeries({2 * k + 1: 1 for k in range(order // 2 + 1) if 2 * k + 1 < order},
                    order=order, parity=1)
    elif family in ("k", "j"):
        style = family
        cs = {}
        for k in range(order // 2 + 1):
            e = 2 * k + 1
            if e >= order:
                break
            cs[e] = ParamPoly.eps(-(k + 1), h_star(style, k) / odd_df(k))
        y = ZSeries(cs, order=order, parity=1)
    else:
        style = family.split("-")[1]
        cs = {}
        for k in range(order // 2 + 1):
            e = 2 * k + 1
            if e >= order:
                break
            acc = ParamPoly.zero()
            for i in range(k + 1):
                j = k - i
                if j > n_h:
                    continue
                hj = ParamPoly.one() if j == 0 else ParamPoly.h(j)
                acc = acc + ParamPoly.eps(-(i + 1), h_star(style, i)) * hj
            acc = acc * Fraction(1, odd_df(k))
            if acc:
                cs[e] = acc
        y = ZSeries(cs, order=order, parity=1)
    return SpectralCurve(family, y, order, n_h=n_h, h_weight_cap=h_weight_cap)


class Correlator:
    """Finite symmetric table (k_1..k_n) -> ParamPoly for fixed (g, n)."""

    __slots__ = ("g", "n", "entries")

    def __init__(self, g: int, n: int, entries: dict[tuple[int, ...], ParamPoly]):
        self.g = g
        self.n = n
        self.entries = entries

    def value(self, key: tuple[int, ...]) -> ParamPoly:
        return self.entries.get(tuple(sorted(key)), PP_ZERO)

    def items(self):
        return sorted(self.entries.items())

    def min_eps_valuation(self) -> int | None:
        vals = [c.eps_valuation() for c in self.entries.values() if c]
        return min(vals) if vals else None

    def to_json(self) -> dict:
        return {
            "g": self.g,
            "n": self.n,
            "basis": "doublefactorial",
            "entries": [
                {"k": list(k), "coeff": c.to_triples()} for k, c in self.items()
            ],
        }


@lru_cache(maxsize=None)
def _sorted_tuples(n: int, total_max: int) -> tuple[tuple[int, ...], ...]:
    """Non-decreasing n-tuples of non-negative ints with sum <= total_max."""
    if n == 0:
        return ((),)
    out = []

    def rec(prefix: list[int], minv: int, rem: int):
        if len(prefix) == n:
            out.append(tuple(prefix))
            return
        for v in range(minv, rem + 1):
            prefix.append(v)
            rec(prefix, v, rem - v)
            prefix.pop()

    rec([], 0, total_max)
    return tuple(out)


def _sub_multisets(key: tuple[int, ...]) -> Iterator[tuple[tuple[int, ...], tuple[int, ...], int]]:
    """All ordered splits (alpha, beta) of a sorted multiset, with the number
    of labeled-slot splits realizing each."""
    from .kappapoly import multiplicities
    from .rationals import binomial

    items = sorted(multiplicities(key).items())
    splits = [((), (), 1)]
    for v, m in items:
        nxt = []
        for alpha, beta, ways in splits:
            for take in range(m + 1):
                nxt.append(
                    (alpha + (v,) * take, beta + (v,) * (m - take), ways * binomial(m, take))
                )
        splits = nxt
    return iter(splits)


class Engine:
    """Memoizing recursion driver bound to one spectral curve."""

    def __init__(self, curve: SpectralCurve):
        self.curve = curve
        self.table: dict[tuple[int, int], Correlator] = {}

    def correlator(self, g: int, n: int) -> Correlator:
        if n < 1 or g < 0 or 2 * g - 2 + n <= 0:
            raise ValueError(f"unstable or invalid (g, n) = ({g}, {n})")
        key = (g, n)
        hit = self.table.get(key)
        if hit is not None:
            return hit
        if self.curve.order is not None and self.curve.y.order is not None:
            if self.curve.order < required_order(g, n):
                raise InsufficientOrderError(
                    f"curve order {self.curve.order} < required "
                    f"{required_order(g, n)} for (g, n) = ({g}, {n})"
                )
        corr = self._compute(g, n)
        self.table[key] = corr
        return corr

    # -- assembly -------------------------------------------------------------

    def _slice_series(self, gp: int, alpha: tuple[int, ...]) -> ZSeries | None:
        """w'-factor with active variable z and remaining slots frozen at alpha."""
        if gp == 0 and len(alpha) == 0:
            return None  # w_{0,1} = 0
        if gp == 0 and len(alpha) == 1:
            # mixed w_{0,2}(z, z_j) against the (2k+1)!! basis: z^{2k}/(2k-1)!!
            k = alpha[0]
            return ZSeries.monomial(2 * k, Fraction(2 * k + 1, odd_df(k)))
        corr = self.correlator(gp, len(alpha) + 1)
        smax = 3 * gp - 3 + len(alpha) + 1 - sum(alpha)
        if smax < 0:
            return None
        cs = {}
        for k in range(smax + 1):
            v = corr.value((k,) + alpha)
            if v:
                cs[-2 * k - 2] = v * odd_df(k)
        if not cs:
            return None
        return ZSeries(cs, order=None, parity=0)

    def _assemble_w(self, g: int, n: int, rest: tuple[int, ...]) -> ZSeries:
        cap = self.curve.h_weight_cap
        w = ZSeries.zero(order=None)
        # diagonal part w_{g-1, n+1}(z, z, rest)
        if g >= 1:
            if 2 * (g - 1) - 2 + (n + 1) > 0:
                lower = self.correlator(g - 1, n + 1)
                smax = 3 * (g - 1) - 3 + (n + 1) - sum(rest)
                cs: dict[int, ParamPoly] = {}
                for k in range(smax + 1):
                    for kp in range(k, smax - k + 1):
                        v = lower.value((k, kp) + rest)
                        if not v:
                            continue
                        c = v * Fraction(odd_df(k) * odd_df(kp) * (1 if k == kp else 2))
                        e = -2 * (k + kp) - 4
                        s = cs.get(e, PP_ZERO) + c
                        if s:
                            cs[e] = s
                        elif e in cs:
                            del cs[e]
                w = w + ZSeries(cs, order=None, parity=0)
            elif (g, n) == (1, 1):
                w = w + ZSeries({-2: Fraction(1, 4)}, order=None, parity=0)
        # ordered pair products; w_{0,1} factors vanish and must be skipped
        # before any recursive lookup (they would otherwise self-recurse)
        for g1 in range(0, g + 1):
            g2 = g - g1
            for alpha, beta, ways in _sub_multisets(rest):
                if (g1 == 0 and not alpha) or (g2 == 0 and not beta):
                    continue
                s1 = self._slice_series(g1, alpha)
                if s1 is None:
                    continue
                s2 = self._slice_series(g2, beta)
                if s2 is None:
                    continue
                w = w + s1.mul(s2, max_h_weight=cap).scale(ways)
        return w

    def _compute(self, g: int, n: int) -> Correlator:
        dim = 3 * g - 3 + n
        inv = self.curve.inv2eta()
        cap = self.curve.h_weight_cap
        entries: dict[tuple[int, ...], ParamPoly] = {}
        for rest in _sorted_tuples(n - 1, dim):
            w = self._assemble_w(g, n, rest)
            if w.is_zero():
                continue
            prod = w.mul(inv, hi=-1, max_h_weight=cap)
            if prod.order is not None and prod.order < 0:
                raise InsufficientOrderError(
                    f"product order {prod.order} < 0 at (g, n) = ({g}, {n})"
                )
            pp = principal_part(prod)
            for e, c in pp.items():
                if e % 2:
                    raise AssertionError(f"odd pole exponent {e} at ({g}, {n})")
                k1 = (-e - 2) // 2
                if k1 < 0:
                    raise AssertionError(f"unexpected exponent {e} at ({g}, {n})")
                if k1 + sum(rest) > dim:
                    raise AssertionError(
                        f"dimension bound violated at ({g}, {n}): k = {(k1,) + rest}"
                    )
                key = tuple(sorted((k1,) + rest))
                val = c * Fraction(1, odd_df(k1))
                old = entries.get(key)
                if old is None:
                    entries[key] = val
                elif old != val:
                    raise AssertionError(
                        f"symmetry violated at ({g}, {n}) for key {key}"
                    )
        return Correlator(g, n, entries)

    # -- diagnostics ------------------------------------------------------------

    def loop_equation_negative_residual(self, g: int, n: int) -> bool:
        """Recombine 2*eta*w - W independently and verify the pole part cancels.

        True when, for every slice, all provably-known negative-exponent
        coefficients of 2*eta*w_{g,n} - W_{g,n} vanish.
        """
        corr = self.correlator(g, n)
        two_eta = self.curve.eta_over_dz().scale(2)
        dim = 3 * g - 3 + n
        for rest in _sorted_tuples(n - 1, dim):
            sw = self._slice_series(g, rest) if (g, len(rest)) != (0, 0) else None
            if sw is None:
                sw = ZSeries.zero(order=None)
            lhs = two_eta.mul(sw)
            rhs = self._assemble_w(g, n, rest)
            diff = lhs - rhs
            for e, c in diff.items():
                if e < 0 and c:
                    return False
        return True


def correlators_to_potential(corr: Correlator) -> dict[tuple[int, ...], ParamPoly]:
    """Coefficients of the potential piece F_{g,n} on monomials in t.

    The coefficient of prod t_{k_i} (sorted key) is the correlator entry
    divided by the product of multiplicities' factorials.
    """
    from .kappapoly import multiplicities

    out = {}
    for key, c in corr.entries.items():
        denom = 1
        for _, m in multiplicities(key).items():
            denom *= fact(m)
        out[key] = c * Fraction(1, denom)
    return out
