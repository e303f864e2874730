"""Tau-function side: potential tables, Virasoro and KdV residual checkers,
the BGW bootstrap, and the genus-1 closed form.

A potential is stored per (g, sorted t-monomial) as the plain monomial
coefficient, so F = sum C[g, mono] hbar^g prod t_mono with the 1/aut factors
already inside C.  Tables are complete for 2g-2+n <= budget, which is what
makes residual rows provably determined.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Mapping

from .intersect import IntersectionOracle
from .kappapoly import multiplicities
from .parampoly import PP_ZERO, ParamPoly
from .rationals import fact, odd_df
from .toprec import Engine, _sorted_tuples, correlators_to_potential

Mono = tuple[int, ...]
Entry = tuple[int, Mono]


class Potential:
    def __init__(self, coeffs: dict[Entry, ParamPoly], budget: int, label: str = ""):
        self.coeffs = {k: v for k, v in coeffs.items() if v}
        self.budget = budget
        self.label = label

    def coeff(self, g: int, mono: Mono) -> ParamPoly:
        return self.coeffs.get((g, tuple(sorted(mono))), PP_ZERO)

    def items(self):
        return sorted(self.coeffs.items())

    def perturbed(self, g: int, mono: Mono, delta: Fraction = Fraction(1)) -> "Potential":
        c = dict(self.coeffs)
        key = (g, tuple(sorted(mono)))
        c[key] = c.get(key, PP_ZERO) + ParamPoly.const(delta)
        return Potential(c, self.budget, self.label + "+perturbation")

    @staticmethod
    def from_engine(engine: Engine, budget: int, label: str = "") -> "Potential":
        coeffs: dict[Entry, ParamPoly] = {}
        for lvl in range(1, budget + 1):
            for g in range(0, lvl // 2 + 2):
                n = lvl + 2 - 2 * g
                if n < 1 or 2 * g - 2 + n != lvl:
                    continue
                pot = correlators_to_potential(engine.correlator(g, n))
                for mono, c in pot.items():
                    coeffs[(g, mono)] = c
        return Potential(coeffs, budget, label or engine.curve.family)

    @staticmethod
    def kw_from_oracle(oracle: IntersectionOracle, budget: int) -> "Potential":
        coeffs: dict[Entry, ParamPoly] = {}
        for lvl in range(1, budget + 1):
            for g in range(0, lvl // 2 + 2):
                n = lvl + 2 - 2 * g
                if n < 1 or 2 * g - 2 + n != lvl:
                    continue
                for mono in _sorted_tuples(n, 3 * g - 3 + n):
                    if sum(mono) != 3 * g - 3 + n:
                        continue
                    v = oracle.kw_number(g, mono)
                    if not v:
                        continue
                    denom = 1
                    for _, m in multiplicities(mono).items():
                        denom *= fact(m)
                    coeffs[(g, mono)] = ParamPoly.const(v / denom)
        return Potential(coeffs, budget, "kw")


# -- derivative / product coefficient extraction --------------------------------


def _deriv_coeff(F: Potential, g: int, mono: Mono, k: int) -> ParamPoly:
    """Coefficient of hbar^g t^mono in dF/dt_k."""
    key = tuple(sorted(mono + (k,)))
    c = F.coeffs.get((g, key))
    if c is None:
        return PP_ZERO
    return c * Fraction(mono.count(k) + 1)


def _d2_coeff(F: Potential, g: int, mono: Mono, a: int, b: int) -> ParamPoly:
    key = tuple(sorted(mono + (a, b)))
    c = F.coeffs.get((g, key))
    if c is None:
        return PP_ZERO
    mb = mono.count(b) + 1
    ma = (mono + (b,)).count(a) + 1
    return c * Fraction(ma * mb)


def _mono_splits(mono: Mono):
    """Distinct ordered factorizations of a sorted monomial into two monomials."""
    items = sorted(multiplicities(mono).items())
    out = [((), ())]
    for v, m in items:
        nxt = []
        for alpha, beta in out:
            for take in range(m + 1):
                nxt.append((alpha + (v,) * take, beta + (v,) * (m - take)))
        out = nxt
    return out


def _quadratic_coeff(F: Potential, g: int, mono: Mono, a: int, b: int) -> ParamPoly:
    """Coefficient of hbar^g t^mono in (dF/dt_a)(dF/dt_b)."""
    total = PP_ZERO
    for g1 in range(0, g + 1):
        g2 = g - g1
        for alpha, beta in _mono_splits(mono):
            c1 = _deriv_coeff(F, g1, alpha, a)
            if not c1:
                continue
            c2 = _deriv_coeff(F, g2, beta, b)
            if not c2:
                continue
            total = total + c1 * c2
    return total


# -- Virasoro ----------------------------------------------------------------------


def constraint_row(
    F: Potential,
    m: int,
    g: int,
    mono: Mono,
    htilde: Mapping[int, ParamPoly | Fraction],
) -> ParamPoly:
    """Coefficient of hbar^g t^mono in the m-th constraint applied to F.

    The constraint is
        1/2 sum_{i+j=m-1} (2i+1)!!(2j+1)!! (hbar F_{t_i t_j} + F_{t_i} F_{t_j})
        + sum_{k-i=m} (t_i - htilde_{i-1}) (2k+1)!!/(2i-1)!! F_{t_k}
        + [m=-1] t_0^2/2 + [m=0] hbar/8,
    with htilde_0 = 1, htilde_{-1} = 0 recovering the unshifted case.
    """
    total = PP_ZERO
    for a in range(0, m):
        b = m - 1 - a
        c = Fraction(odd_df(a) * odd_df(b), 2)
        d2 = _d2_coeff(F, g - 1, mono, a, b)
        if d2:
            total = total + d2 * c
        q = _quadratic_coeff(F, g, mono, a, b)
        if q:
            total = total + q * c
    for v in set(mono):
        k = m + v
        if k < 0:
            continue
        rest = list(mono)
        rest.remove(v)
        c = _deriv_coeff(F, g, tuple(rest), k)
        if c:
            total = total + c * Fraction(odd_df(k), odd_df(v - 1))
    for i, hv in htilde.items():
        k = m + i + 1
        if k < 0:
            continue
        c = _deriv_coeff(F, g, mono, k)
        if not c:
            continue
        term = c * Fraction(odd_df(k), odd_df(i))
        hv = hv if isinstance(hv, ParamPoly) else ParamPoly.const(hv)
        total = total - hv * term
    if m == -1 and g == 0 and mono == (0, 0):
        total = total + Fraction(1, 2)
    if m == 0 and g == 1 and mono == ():
        total = total + Fraction(1, 8)
    return total


def _row_candidates(g: int, n_out: int, m: int):
    smax = 3 * g - 2 + n_out - m
    if smax < 0:
        return ()
    return _sorted_tuples(n_out, smax)


def virasoro_rows(
    F: Potential,
    m: int,
    htilde: Mapping[int, ParamPoly | Fraction],
    g_max: int | None = None,
) -> tuple[int, dict[Entry, ParamPoly]]:
    """Evaluate the m-th constraint on every determined row.

    Returns (rows checked, nonzero residual entries); an empty dict means the
    constraint holds to the table's truncation.  Rows (g, mono) are
    determined when 2g-2+len(mono), plus one for h-corrections beyond
    htilde_0, stays within the budget.
    """
    checked = 0
    bad: dict[Entry, ParamPoly] = {}
    gm = g_max if g_max is not None else F.budget
    for g in range(0, gm + 1):
        for n_out in range(0, F.budget + 3 - 2 * g):
            if 2 * g - 2 + n_out + 1 > F.budget:
                continue
            for mono in _row_candidates(g, n_out, m):
                r = constraint_row(F, m, g, mono, htilde)
                checked += 1
                if r:
                    bad[(g, mono)] = r
    return checked, bad


def htilde_unshifted() -> dict[int, Fraction]:
    return {0: Fraction(1)}


def htilde_weak(style: str, n_h: int, w_max: int) -> dict[int, ParamPoly]:
    """Effective shift sequence of the eps-rescaled two-parameter family.

    htilde_k = sum_{i+j=k} eps^{-i-1} hstar_i h_j, including htilde_0 = 1/eps.
    """
    from .coeffs import h_star

    out: dict[int, ParamPoly] = {}
    for k in range(0, w_max + 1):
        acc = ParamPoly.zero()
        for i in range(k + 1):
            j = k - i
            if j > n_h:
                continue
            hj = ParamPoly.one() if j == 0 else ParamPoly.h(j)
            acc = acc + ParamPoly.eps(-(i + 1), h_star(style, i)) * hj
        if acc:
            out[k] = acc
    return out


def virk_rows(F: Potential, m: int, with_eps: bool = True) -> tuple[int, dict[Entry, ParamPoly]]:
    """Residual of (2m+1)!! dF/dt_m = eps G_{m-1}(F) + G_m(F), m >= 0.

    G_m is the connected form of the m-th unshifted constraint operator; at
    eps = 0 (with_eps False) this is the constraint family that pins the
    limit potential.
    """
    if m < 0:
        raise ValueError("virK constraints start at m = 0")
    checked = 0
    bad: dict[Entry, ParamPoly] = {}
    empty: dict[int, Fraction] = {}
    for g in range(0, F.budget + 1):
        for n_out in range(0, F.budget + 3 - 2 * g):
            if 2 * g - 2 + n_out + 1 > F.budget:
                continue
            for mono in _row_candidates(g, n_out, m):
                lhs = _deriv_coeff(F, g, mono, m) * Fraction(odd_df(m))
                rhs = constraint_row(F, m, g, mono, empty)
                if with_eps:
                    rhs = rhs + ParamPoly.eps(1) * constraint_row(F, m - 1, g, mono, empty)
                r = lhs - rhs
                checked += 1
                if r:
                    bad[(g, mono)] = r
    return checked, bad


def bgw_bootstrap(budget: int) -> Potential:
    """Solve the eps = 0 constraints (2m+1)!! dF/dt_m = G_m(F) from scratch.

    The constraints determine the potential uniquely level by level; entry
    (m, mu) is read off the constraint indexed by its largest exponent.
    """
    coeffs: dict[Entry, ParamPoly] = {}
    F = Potential(coeffs, budget, "bgw-bootstrap")
    empty: dict[int, Fraction] = {}
    for lvl in range(1, budget + 1):
        for g in range(0, lvl // 2 + 2):
            n = lvl + 2 - 2 * g
            if n < 1 or 2 * g - 2 + n != lvl:
                continue
            for key in _sorted_tuples(n, 3 * g - 3 + n):
                m = key[-1]
                mono = key[:-1]
                rhs = constraint_row(F, m, g, mono, empty)
                if rhs:
                    val = rhs * Fraction(1, odd_df(m) * key.count(m))
                    F.coeffs[(g, key)] = val
    return F


# -- KdV ---------------------------------------------------------------------------


def _u_coeff(F: Potential, g: int, mono: Mono) -> ParamPoly:
    key = tuple(sorted(mono + (0, 0)))
    c = F.coeffs.get((g, key))
    if c is None:
        return PP_ZERO
    m0 = mono.count(0)
    return c * Fraction((m0 + 1) * (m0 + 2))


def kdv_residual(F: Potential) -> tuple[int, dict[Entry, ParamPoly]]:
    """Residual of U_{t_1} = U U_{t_0} + (hbar/12) U_{t_0 t_0 t_0}, U = d^2F/dt_0^2.

    Rows are evaluated where the table determines them (level <= budget - 3).
    """
    U: dict[Entry, ParamPoly] = {}
    for (g, mono), c in F.coeffs.items():
        m0 = mono.count(0)
        if m0 >= 2:
            U[(g, mono[2:])] = c * Fraction(m0 * (m0 - 1))

    def u(g: int, mono: Mono) -> ParamPoly:
        return U.get((g, tuple(sorted(mono))), PP_ZERO)

    def u_d(g: int, mono: Mono, k: int) -> ParamPoly:
        c = U.get((g, tuple(sorted(mono + (k,)))))
        if c is None:
            return PP_ZERO
        return c * Fraction(mono.count(k) + 1)

    def u_d3_0(g: int, mono: Mono) -> ParamPoly:
        c = U.get((g, tuple(sorted(mono + (0, 0, 0)))))
        if c is None:
            return PP_ZERO
        m0 = mono.count(0)
        return c * Fraction((m0 + 1) * (m0 + 2) * (m0 + 3))

    checked = 0
    bad: dict[Entry, ParamPoly] = {}
    for g in range(0, F.budget + 1):
        for n_out in range(0, F.budget + 1):
            if 2 * g - 2 + n_out > F.budget - 3:
                continue
            for mono in _sorted_tuples(n_out, 3 * g + n_out + 1):
                r = u_d(g, mono, 1)
                r = r - ParamPoly.eps(0) * _uu0(u, u_d, g, mono)
                d3 = u_d3_0(g - 1, mono)
                if d3:
                    r = r - d3 * Fraction(1, 12)
                checked += 1
                if r:
                    bad[(g, mono)] = r
    return checked, bad


def _uu0(u: Callable, u_d: Callable, g: int, mono: Mono) -> ParamPoly:
    total = PP_ZERO
    for g1 in range(0, g + 1):
        g2 = g - g1
        for alpha, beta in _mono_splits(mono):
            c1 = u(g1, alpha)
            if not c1:
                continue
            c2 = u_d(g2, beta, 0)
            if not c2:
                continue
            total = total + c1 * c2
    return total


# -- genus 1 closed form ---------------------------------------------------------


class TPoly:
    """Multivariate polynomial in t_0..t_T as {sorted index tuple: Fraction},
    truncated by total degree."""

    __slots__ = ("terms", "deg")

    def __init__(self, terms: dict[Mono, Fraction], deg: int):
        self.terms = {k: v for k, v in terms.items() if v and len(k) <= deg}
        self.deg = deg

    @staticmethod
    def const(c: Fraction, deg: int) -> "TPoly":
        return TPoly({(): Fraction(c)}, deg)

    @staticmethod
    def var(i: int, deg: int) -> "TPoly":
        return TPoly({(i,): Fraction(1)}, deg)

    def __add__(self, other: "TPoly") -> "TPoly":
        t = dict(self.terms)
        for k, v in other.terms.items():
            s = t.get(k, Fraction(0)) + v
            if s:
                t[k] = s
            elif k in t:
                del t[k]
        return TPoly(t, min(self.deg, other.deg))

    def __sub__(self, other: "TPoly") -> "TPoly":
        return self + other.scale(Fraction(-1))

    def scale(self, c: Fraction) -> "TPoly":
        return TPoly({k: v * c for k, v in self.terms.items()}, self.deg)

    def __mul__(self, other: "TPoly") -> "TPoly":
        deg = min(self.deg, other.deg)
        t: dict[Mono, Fraction] = {}
        for k1, v1 in self.terms.items():
            for k2, v2 in other.terms.items():
                if len(k1) + len(k2) > deg:
                    continue
                k = tuple(sorted(k1 + k2))
                s = t.get(k, Fraction(0)) + v1 * v2
                if s:
                    t[k] = s
                elif k in t:
                    del t[k]
        return TPoly(t, deg)

    def pow(self, n: int) -> "TPoly":
        out = TPoly.const(Fraction(1), self.deg)
        for _ in range(n):
            out = out * self
        return out

    def valuation(self) -> int:
        return min((len(k) for k in self.terms), default=self.deg + 1)


def genus1_closed_form(shift: Mapping[int, Fraction], t_max: int, deg: int) -> dict[Mono, Fraction]:
    """Genus-1 potential from the fixed-point ansatz.

    F_1 = -1/24 log(1 - sum_k q_{k+1} Y^k / k!) with Y the solution of
    Y = sum_k q_k Y^k / k!, where q_i = t_i - shift.get(i, 0) are the shifted
    times (the shift only touches indices >= 2).
    """
    if any(i < 2 for i in shift):
        raise ValueError("shifts apply to t-indices >= 2 only")

    def q(i: int) -> TPoly:
        out = TPoly.var(i, deg) if i <= t_max else TPoly({}, deg)
        s = Fraction(shift.get(i, 0))
        if s:
            out = out - TPoly.const(s, deg)
        return out

    kmax = max(deg, t_max) + 2
    y = TPoly({}, deg)
    for _ in range(deg + 1):
        new = TPoly({}, deg)
        ypow = TPoly.const(Fraction(1), deg)
        for k in range(0, kmax):
            if k:
                ypow = ypow * y
                if not ypow.terms:
                    break
            term = q(k) * ypow
            new = new + term.scale(Fraction(1, fact(k)))
        y = new
    # A = sum_k q_{k+1} Y^k / k!
    a = TPoly({}, deg)
    ypow = TPoly.const(Fraction(1), deg)
    for k in range(0, kmax):
        if k:
            ypow = ypow * y
            if not ypow.terms:
                break
        a = a + (q(k + 1) * ypow).scale(Fraction(1, fact(k)))
    if a.valuation() < 1:
        raise ValueError("shifted ansatz has nonzero constant term")
    # F1 = -1/24 log(1 - A)
    logp = TPoly({}, deg)
    apow = TPoly.const(Fraction(1), deg)
    for j in range(1, deg + 1):
        apow = apow * a
        if not apow.terms:
            break
        logp = logp + apow.scale(Fraction(1, j))
    f1 = logp.scale(Fraction(1, 24))
    return dict(f1.terms)
