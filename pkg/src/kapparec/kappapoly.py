"""Partition-indexed polynomials in kappa classes, mixed kappa-psi polynomials,
the universal families built from coefficient sequences, and their
push-forward / pull-back rules under the point-forgetting map.

A kappa monomial is stored as its partition in canonical non-increasing form,
e.g. kappa_2^2 * kappa_1 <-> (2, 2, 1).  Monomial ordering for rendering and
serialization is graded lexicographic.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from .coeffs import ell_from_ab
from .parampoly import ParamPoly
from .rationals import binomial, fact, rat_str

Partition = tuple[int, ...]


@lru_cache(maxsize=None)
def partitions(n: int, max_part: int | None = None) -> tuple[Partition, ...]:
    """All partitions of n (non-increasing tuples); partitions(0) = ((),)."""
    if n < 0:
        return ()
    if n == 0:
        return ((),)
    if max_part is None or max_part > n:
        max_part = n
    out: list[Partition] = []
    for first in range(max_part, 0, -1):
        for rest in partitions(n - first, first):
            out.append((first,) + rest)
    return tuple(out)


def merge_partitions(a: Partition, b: Partition) -> Partition:
    return tuple(sorted(a + b, reverse=True))


def partition_weight(p: Partition) -> int:
    return sum(p)


def multiplicities(p: Sequence[int]) -> dict[int, int]:
    out: dict[int, int] = {}
    for x in p:
        out[x] = out.get(x, 0) + 1
    return out


def _canon(p: Iterable[int]) -> Partition:
    t = tuple(sorted((x for x in p if x != 0), reverse=True))
    if any(x < 0 for x in t):
        raise ValueError("partition parts must be positive")
    return t


class KappaPoly:
    """Polynomial in kappa_1, kappa_2, ... with Fraction coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Partition, Fraction] | None = None):
        t: dict[Partition, Fraction] = {}
        if terms:
            for p, c in terms.items():
                c = Fraction(c)
                if c:
                    t[_canon(p)] = c
        self.terms = t

    @staticmethod
    def one() -> "KappaPoly":
        return KappaPoly({(): Fraction(1)})

    @staticmethod
    def kappa(m: int, coeff: Fraction = Fraction(1)) -> "KappaPoly":
        return KappaPoly({(m,): coeff})

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int | None:
        """Common weighted degree, or None if inhomogeneous / zero."""
        degs = {partition_weight(p) for p in self.terms}
        if len(degs) == 1:
            return degs.pop()
        return None

    def __add__(self, other: "KappaPoly") -> "KappaPoly":
        t = dict(self.terms)
        for p, c in other.terms.items():
            s = t.get(p, Fraction(0)) + c
            if s:
                t[p] = s
            elif p in t:
                del t[p]
        out = KappaPoly.__new__(KappaPoly)
        out.terms = t
        return out

    def __neg__(self) -> "KappaPoly":
        out = KappaPoly.__new__(KappaPoly)
        out.terms = {p: -c for p, c in self.terms.items()}
        return out

    def __sub__(self, other: "KappaPoly") -> "KappaPoly":
        return self + (-other)

    def __mul__(self, other: "KappaPoly | Fraction | int") -> "KappaPoly":
        if isinstance(other, (int, Fraction)):
            other = Fraction(other)
            if not other:
                return KappaPoly()
            out = KappaPoly.__new__(KappaPoly)
            out.terms = {p: c * other for p, c in self.terms.items()}
            return out
        t: dict[Partition, Fraction] = {}
        for p1, c1 in self.terms.items():
            for p2, c2 in other.terms.items():
                p = merge_partitions(p1, p2)
                s = t.get(p, Fraction(0)) + c1 * c2
                if s:
                    t[p] = s
                elif p in t:
                    del t[p]
        out = KappaPoly.__new__(KappaPoly)
        out.terms = t
        return out

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, KappaPoly):
            return NotImplemented
        return self.terms == other.terms

    def graded_part(self, m: int) -> "KappaPoly":
        return KappaPoly(
            {p: c for p, c in self.terms.items() if partition_weight(p) == m}
        )

    def _sorted_keys(self) -> list[Partition]:
        return sorted(self.terms, key=lambda p: (partition_weight(p), p))

    def render(self) -> str:
        """Human-readable form like "9/2*k1^2 - 21/2*k2"."""
        if not self.terms:
            return "0"
        bits = []
        for p in self._sorted_keys():
            c = self.terms[p]
            mono = "*".join(
                f"k{v}" + (f"^{m}" if m > 1 else "")
                for v, m in sorted(multiplicities(p).items())
            )
            cs = rat_str(abs(c))
            head = "- " if c < 0 else ("+ " if bits else "")
            if mono:
                body = mono if abs(c) == 1 else f"{cs}*{mono}"
            else:
                body = cs
            bits.append(head + body)
        return " ".join(bits).lstrip("+ ")

    def to_json(self) -> dict[str, str]:
        return {
            ",".join(map(str, p)): rat_str(c)
            for p, c in sorted(self.terms.items())
        }

    def __str__(self) -> str:
        return self.render()

    __repr__ = __str__


class MixedPoly:
    """Polynomial in kappa classes and psi_1..psi_n for a fixed point count n.

    Keys are (kappa partition, psi exponent tuple of length n).
    """

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Mapping[tuple[Partition, tuple[int, ...]], Fraction] | None = None):
        self.n = n
        t: dict[tuple[Partition, tuple[int, ...]], Fraction] = {}
        if terms:
            for (p, a), c in terms.items():
                c = Fraction(c)
                if not c:
                    continue
                a = tuple(a)
                if len(a) != n:
                    raise ValueError("psi exponent vector has wrong length")
                t[(_canon(p), a)] = c
        self.terms = t

    @staticmethod
    def from_kappa(P: KappaPoly, n: int) -> "MixedPoly":
        zero = (0,) * n
        return MixedPoly(n, {(p, zero): c for p, c in P.terms.items()})

    def __add__(self, other: "MixedPoly") -> "MixedPoly":
        if self.n != other.n:
            raise ValueError("mixing incompatible point counts")
        t = dict(self.terms)
        for k, c in other.terms.items():
            s = t.get(k, Fraction(0)) + c
            if s:
                t[k] = s
            elif k in t:
                del t[k]
        out = MixedPoly.__new__(MixedPoly)
        out.n, out.terms = self.n, t
        return out

    def __neg__(self) -> "MixedPoly":
        out = MixedPoly.__new__(MixedPoly)
        out.n = self.n
        out.terms = {k: -c for k, c in self.terms.items()}
        return out

    def __sub__(self, other: "MixedPoly") -> "MixedPoly":
        return self + (-other)

    def __mul__(self, other: "MixedPoly | KappaPoly | Fraction | int") -> "MixedPoly":
        if isinstance(other, (int, Fraction)):
            return MixedPoly(self.n, {k: c * Fraction(other) for k, c in self.terms.items()})
        if isinstance(other, KappaPoly):
            other = MixedPoly.from_kappa(other, self.n)
        if self.n != other.n:
            raise ValueError("mixing incompatible point counts")
        t: dict[tuple[Partition, tuple[int, ...]], Fraction] = {}
        for (p1, a1), c1 in self.terms.items():
            for (p2, a2), c2 in other.terms.items():
                k = (merge_partitions(p1, p2), tuple(x + y for x, y in zip(a1, a2)))
                s = t.get(k, Fraction(0)) + c1 * c2
                if s:
                    t[k] = s
                elif k in t:
                    del t[k]
        out = MixedPoly.__new__(MixedPoly)
        out.n, out.terms = self.n, t
        return out

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MixedPoly):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    def set_last_psi_zero(self) -> "MixedPoly":
        """Drop terms with psi_n and forget the last slot."""
        t = {}
        for (p, a), c in self.terms.items():
            if a[-1] == 0:
                t[(p, a[:-1])] = c
        return MixedPoly(self.n - 1, t)

    def degree(self) -> int | None:
        degs = {partition_weight(p) + sum(a) for (p, a) in self.terms}
        if len(degs) == 1:
            return degs.pop()
        return None

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        bits = []
        for (p, a), c in sorted(self.terms.items()):
            mono = [f"k{v}" + (f"^{m}" if m > 1 else "") for v, m in sorted(multiplicities(p).items())]
            mono += [f"p{i + 1}" + (f"^{e}" if e > 1 else "") for i, e in enumerate(a) if e]
            bits.append(rat_str(c) + ("*" + "*".join(mono) if mono else ""))
        return " + ".join(bits)

    __repr__ = __str__


def expand_family(ell: Sequence[Fraction], m_max: int) -> list[KappaPoly]:
    """Graded pieces L_0..L_{m_max} of exp(sum_i ell_i kappa_i)."""
    if len(ell) < m_max:
        raise ValueError("need at least m_max sequence values")
    pieces: list[KappaPoly] = [KappaPoly.one()] + [KappaPoly() for _ in range(m_max)]
    for i in range(1, m_max + 1):
        li = Fraction(ell[i - 1])
        if not li:
            continue
        # multiply the accumulated expansion by exp(ell_i kappa_i), graded
        factor_pows: list[tuple[int, Fraction, Partition]] = []
        power = Fraction(1)
        for j in range(1, m_max // i + 1):
            power *= li
            factor_pows.append((i * j, power / fact(j), (i,) * j))
        updated = [KappaPoly(dict(p.terms)) for p in pieces]
        for deg, coeff, part in factor_pows:
            for m in range(0, m_max - deg + 1):
                for p, c in pieces[m].terms.items():
                    key = merge_partitions(p, part)
                    tgt = updated[m + deg]
                    s = tgt.terms.get(key, Fraction(0)) + c * coeff
                    if s:
                        tgt.terms[key] = s
                    elif key in tgt.terms:
                        del tgt.terms[key]
        pieces = updated
    return pieces


@lru_cache(maxsize=None)
def family_polys(a: Fraction, b: Fraction, m_max: int) -> tuple[KappaPoly, ...]:
    """L^(a,b)_0..L^(a,b)_{m_max}; (3,2) gives the K family, (1,1) the J family."""
    if m_max == 0:
        return (KappaPoly.one(),)
    ell = ell_from_ab(Fraction(a), Fraction(b), m_max)
    return tuple(expand_family(list(ell), m_max))


def k_polys(m_max: int) -> tuple[KappaPoly, ...]:
    return family_polys(Fraction(3), Fraction(2), m_max)


def j_polys(m_max: int) -> tuple[KappaPoly, ...]:
    return family_polys(Fraction(1), Fraction(1), m_max)


def p_polys(m_max: int) -> tuple[KappaPoly, ...]:
    return family_polys(Fraction(1), Fraction(2), m_max)


def pushforward(P: KappaPoly, a: Fraction, b: Fraction, g: int, n: int) -> KappaPoly:
    """pi_* L^(a,b)_{m+1} = (a(2g-2+n) - b m) L^(a,b)_m on the target space.

    P must be the degree-(m+1) family polynomial; the scalar recursion is all
    the content, so the input is validated against the family.
    """
    m1 = P.degree()
    if m1 is None or m1 < 1:
        raise ValueError("expected a homogeneous family polynomial of degree >= 1")
    fam = family_polys(Fraction(a), Fraction(b), m1)
    if P != fam[m1]:
        raise ValueError("input is not the (a,b) family polynomial of its degree")
    m = m1 - 1
    scalar = Fraction(a) * (2 * g - 2 + n) - Fraction(b) * m
    return fam[m] * scalar


def pullback(P: KappaPoly, a: Fraction, b: Fraction) -> MixedPoly:
    """pi^* L^(a,b)_m = sum_{i=0}^m (-1)^i prod_{r<i}(a+rb) psi^i L^(a,b)_{m-i}.

    The psi is the new point's; the result is a MixedPoly with one psi slot.
    """
    m = P.degree()
    if m is None:
        raise ValueError("expected a homogeneous family polynomial")
    fam = family_polys(Fraction(a), Fraction(b), m)
    if P != fam[m]:
        raise ValueError("input is not the (a,b) family polynomial of its degree")
    out = MixedPoly(1)
    prod = Fraction(1)
    for i in range(0, m + 1):
        if i > 0:
            prod *= Fraction(a) + (i - 1) * Fraction(b)
        contrib = MixedPoly(
            1, {(p, (i,)): c * Fraction((-1) ** i) * prod for p, c in fam[m - i].terms.items()}
        )
        out = out + contrib
    return out


def kappa_substitute_pullback(P: "KappaPoly | MixedPoly", n: int | None = None) -> MixedPoly:
    """Substitute kappa_j -> kappa_j - psi_new^j, appending a new psi slot.

    For a KappaPoly input the result has n slots ending with the new point
    (n defaults to 1); for a MixedPoly input one slot is appended.
    """
    if isinstance(P, KappaPoly):
        P = MixedPoly.from_kappa(P, (n or 1) - 1)
    nn = P.n + 1
    out = MixedPoly(nn)
    for (p, a), c in P.terms.items():
        expansion = MixedPoly(nn, {((), a + (0,)): c})
        for v, mult in multiplicities(p).items():
            factor = MixedPoly(nn)
            for ch in range(mult + 1):
                key = ((v,) * (mult - ch), tuple([0] * (nn - 1)) + (v * ch,))
                factor = factor + MixedPoly(
                    nn, {key: Fraction(binomial(mult, ch) * (-1) ** ch)}
                )
            expansion = expansion * factor
        out = out + expansion
    return out


def shift_coeffs(style: str, k: int, chi: int, order: int) -> ParamPoly:
    """Scalar shift coefficients of the push-forward-averaged families.

    Iterates the push-forward scalar recursion, sums eps^m/m! (times the
    (1-eps)^{2g-2+n} prefactor in the K case), and cross-checks the closed
    forms d_k = e^{-(k+chi) eps} and c_k = (1-eps)^{2(k+chi)} before returning
    the truncated eps-polynomial.  chi = 2 - 2g - n of the target space.
    """
    if style not in ("k", "j"):
        raise ValueError("style must be 'k' or 'j'")
    if -chi < 0:
        raise ValueError("need 2g-2+n >= 0")
    a, b = (Fraction(3), Fraction(2)) if style == "k" else (Fraction(1), Fraction(1))
    total = ParamPoly.const(1)
    run = Fraction(1)
    factm = 1
    for m in range(1, order):
        # m-th forgetful step: target (g, n+m-1), source class L_{k+m}
        run *= a * (-chi + (m - 1)) - b * (k + m - 1)
        factm *= m
        total = total + ParamPoly.eps(m, run / factm)
    if style == "k":
        total = _eps_trunc(total.mul(_binseries(-chi, order)), order)
        closed = _binseries(2 * (k + chi), order)
    else:
        closed = ParamPoly.zero()
        run = Fraction(1)
        for m in range(order):
            if m:
                run = run * Fraction(-(k + chi)) / m
            closed = closed + ParamPoly.eps(m, run)
    closed = _eps_trunc(closed, order)
    if total != closed:
        raise AssertionError("shift coefficient recursion disagrees with closed form")
    return total


def _binseries(e: int, order: int) -> ParamPoly:
    """(1-eps)^e as a truncated eps-series, any integer e."""
    out = ParamPoly.zero()
    for i in range(order):
        if e >= 0:
            c = Fraction(binomial(e, i) * (-1) ** i)
        else:
            c = Fraction(binomial(-e + i - 1, i))
        if c:
            out = out + ParamPoly.eps(i, c)
    return out


def _eps_trunc(p: ParamPoly, order: int) -> ParamPoly:
    return ParamPoly({key: c for key, c in p.terms.items() if key[0] < order})
