"""Exact rational helpers: "p/q" serialization and small combinatorial numbers.

Every Q-valued quantity in the package is a ``fractions.Fraction`` kept in
canonical form (positive denominator, reduced) by the stdlib itself.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

Rat = Fraction


def rat_str(x: Fraction) -> str:
    """Serialize as "p/q", or "p" when the denominator is 1."""
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def rat_parse(s: str) -> Fraction:
    """Parse the "p/q" / "p" format produced by :func:`rat_str`."""
    s = s.strip()
    if "/" in s:
        p, q = s.split("/")
        return Fraction(int(p), int(q))
    return Fraction(int(s))


def double_factorial(n: int) -> int:
    """(2k+1)!! style double factorial with the convention (-1)!! = 1."""
    if n < -1:
        raise ValueError(f"double factorial undefined for {n}")
    out = 1
    while n > 1:
        out *= n
        n -= 2
    return out


@lru_cache(maxsize=None)
def odd_df(k: int) -> int:
    """(2k+1)!!, cached; odd_df(-1) = (-1)!! = 1."""
    return double_factorial(2 * k + 1)


def binomial(n: int, k: int) -> int:
    if k < 0 or k > n:
        return 0
    return comb(n, k)


@lru_cache(maxsize=None)
def bernoulli(n: int) -> Fraction:
    """Bernoulli number B_n (B_1 = -1/2 convention), via the defining recurrence."""
    if n == 0:
        return Fraction(1)
    # sum_{j=0}^{n} C(n+1, j) B_j = 0
    acc = Fraction(0)
    for j in range(n):
        acc += comb(n + 1, j) * bernoulli(j)
    return -acc / (n + 1)


def fact(n: int) -> int:
    return factorial(n)
