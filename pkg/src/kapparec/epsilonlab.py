"""eps-regularity verification, eps -> 0 limits, and the weak vanishing checks.

Regularity of the rescaled correlators is the computational content of the
vanishing statements: an entry with negative eps-valuation is exactly a
non-vanishing pairing with a class of degree beyond 2g-2+n.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .intersect import IntersectionOracle
from .kappapoly import (
    KappaPoly,
    MixedPoly,
    j_polys,
    k_polys,
    kappa_substitute_pullback,
    partitions,
)
from .parampoly import ParamPoly
from .toprec import Engine, _sorted_tuples, correlators_to_potential


@dataclass
class RegularityReport:
    family: str
    g: int
    n: int
    entries: int
    min_eps_valuation: int | None  # None when every entry vanishes
    passed: bool

    def row(self) -> str:
        v = "-" if self.min_eps_valuation is None else str(self.min_eps_valuation)
        status = "PASS" if self.passed else "FAIL"
        return f"{self.family:8s} g={self.g} n={self.n} entries={self.entries:4d} min_eps_val={v:>3s} {status}"


def levels(budget: int):
    """Stable (g, n) with n >= 1 and 2g-2+n <= budget, by increasing level."""
    out = []
    for lvl in range(1, budget + 1):
        for g in range(0, lvl // 2 + 2):
            n = lvl + 2 - 2 * g
            if n >= 1 and 2 * g - 2 + n == lvl:
                out.append((g, n))
    return out


def check_regularity(engine: Engine, budget: int) -> list[RegularityReport]:
    """Minimal eps-valuation per correlator within the level budget."""
    out = []
    for g, n in levels(budget):
        corr = engine.correlator(g, n)
        v = corr.min_eps_valuation()
        out.append(
            RegularityReport(
                family=engine.curve.family,
                g=g,
                n=n,
                entries=len(corr.entries),
                min_eps_valuation=v,
                passed=(v is None or v >= 0),
            )
        )
    return out


def take_limit(engine: Engine, budget: int) -> dict[tuple[int, tuple[int, ...]], ParamPoly]:
    """eps -> 0 limit of the potential pieces within the budget.

    Raises when a negative valuation is present (no limit exists).
    """
    out: dict[tuple[int, tuple[int, ...]], ParamPoly] = {}
    for g, n in levels(budget):
        corr = engine.correlator(g, n)
        v = corr.min_eps_valuation()
        if v is not None and v < 0:
            raise ValueError(f"not regular, no limit at (g, n) = ({g}, {n})")
        for key, coeff in correlators_to_potential(corr).items():
            c0 = coeff.eps_part(0)
            if c0:
                out[(g, key)] = c0
    return out


def take_limit_one_point(engine: Engine, g_max: int) -> dict[int, dict[int, ParamPoly]]:
    """eps -> 0 limit of the one-point potential chain up to genus g_max.

    Returns {g: {k: coefficient of t_k}}; the (g, 1) tables only need the
    anti-diagonal g' + n' <= g + 1 of lower correlators, so they reach much
    deeper than a uniform level budget.
    """
    out: dict[int, dict[int, ParamPoly]] = {}
    for g in range(1, g_max + 1):
        corr = engine.correlator(g, 1)
        v = corr.min_eps_valuation()
        if v is not None and v < 0:
            raise ValueError(f"not regular, no limit at (g, n) = ({g}, 1)")
        row = {}
        for (k,), coeff in corr.items():
            c0 = coeff.eps_part(0)
            if c0:
                row[k] = c0
        out[g] = row
    return out


def complementary_monomials(g: int, n: int, degree: int):
    """All psi-kappa monomials (psis sorted, kappa partition) of given degree."""
    for kw in range(degree + 1):
        for lam in partitions(kw):
            for psis in _sorted_tuples(n, degree - kw):
                if sum(psis) == degree - kw:
                    yield psis, lam


def verify_vanishing(oracle: IntersectionOracle, g: int, n: int, m: int, style: str) -> bool:
    """Weak vanishing of the degree-m family polynomial on (g, n).

    Pairs the polynomial against every psi-kappa monomial of complementary
    degree; admissible ranges are m > 2g-2+n for the K style (excluding the
    (m, n) = (3g-3, 0) exception) and additionally m = 2g-2+n with n > 1 for
    the J style.
    """
    if style == "k":
        if not (m > 2 * g - 2 + n) or (n == 0 and m == 3 * g - 3):
            raise ValueError("inadmissible (g, n, m) for the K-style claim")
        fam = k_polys(m)[m]
    elif style == "j":
        if not (m > 2 * g - 2 + n or (m == 2 * g - 2 + n and n > 1)):
            raise ValueError("inadmissible (g, n, m) for the J-style claim")
        fam = j_polys(m)[m]
    else:
        raise ValueError("style must be 'k' or 'j'")
    dim = 3 * g - 3 + n
    if m > dim:
        return True
    comp = dim - m
    for psis, lam in complementary_monomials(g, n, comp):
        total = Fraction(0)
        for p, c in fam.terms.items():
            total += c * oracle.kappa_psi_number(
                g, n, psis, tuple(sorted(p + lam, reverse=True))
            )
        if total:
            return False
    return True


def nested_psi_pullback(P: KappaPoly, n: int) -> MixedPoly:
    """The class psi_n pi^*( ... psi_1 pi^*(P) ... ) on n marked points.

    Each pullback step substitutes kappa_j -> kappa_j - psi_new^j and then
    multiplies by psi_new; the psi-correction terms of the forgetful map die
    against these factors, so the formal substitution is exact here.
    """
    cur: MixedPoly = MixedPoly.from_kappa(P, 0)
    for i in range(1, n + 1):
        cur = kappa_substitute_pullback(cur)
        psi_new = MixedPoly(i, {((), (0,) * (i - 1) + (1,)): Fraction(1)})
        cur = cur * psi_new
    return cur


def verify_pullback_identity(oracle: IntersectionOracle, g: int, n: int) -> bool:
    """Check that K_{2g-2+n} - prod(psi_i) pi^* K_{2g-2} pairs to zero on (g, n)."""
    if g < 2 or n < 1:
        raise ValueError("needs g >= 2, n >= 1")
    m = 2 * g - 2 + n
    diff = MixedPoly.from_kappa(k_polys(m)[m], n) - nested_psi_pullback(
        k_polys(2 * g - 2)[2 * g - 2], n
    )
    dim = 3 * g - 3 + n
    comp = dim - m
    if comp < 0:
        return True
    for psis, lam in complementary_monomials(g, n, comp):
        omega = MixedPoly(n, {(lam, psis): Fraction(1)})
        if oracle.integrate(diff * omega, g, n):
            return False
    return True
