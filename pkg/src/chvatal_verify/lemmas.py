"""Equivalent forms of q_m >= q_{m+1} and the monotone family g_v / h.

``lemma1_conditions`` evaluates four exact criteria that must agree with one
another (and with the switch predicate ``6m + 3 < 4n``):

* direct: ``q_m >= q_{m+1}`` from the exact tail table;
* main:   ``int_{m/n}^{(m+1)/n} x^(m+1) (1-x)^(n-m-2) dx >= b_m``;
* eq3:    ``int_0^1 (1+t/m)^(m+1) (1-t/(n-m))^(n-m-2) dt >= (n-m)/(n-m-1)``
          (undefined at m = 0, so omitted there);
* eq4:    ``int_0^1 (1-v/(m+1))^m (1+v/(n-m-1))^(n-m-1) dv >= 1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .binom import q_direct, switch_predicate
from .polyrat import RatPoly, affine_power, poly_integrate, poly_mul

__all__ = [
    "Comparison",
    "Lemma1Conditions",
    "Lemma2Scan",
    "DEFAULT_V_GRID",
    "b_value",
    "main_integral",
    "eq3_integral",
    "eq4_integrand",
    "lemma1_conditions",
    "g_of",
    "h_of",
    "lemma2_scan",
]

DEFAULT_V_GRID = (Fraction(1, 4), Fraction(1, 2), Fraction(3, 4), Fraction(1))


@dataclass(frozen=True)
class Comparison:
    """One ``lhs >= rhs`` criterion with its exact operands."""

    lhs: Fraction
    rhs: Fraction

    @property
    def holds(self) -> bool:
        return self.lhs >= self.rhs


@dataclass(frozen=True)
class Lemma1Conditions:
    n: int
    m: int
    direct: Comparison
    main: Comparison
    eq3: Optional[Comparison]
    eq4: Comparison

    def booleans(self) -> dict[str, bool]:
        out = {"direct": self.direct.holds, "main": self.main.holds, "eq4": self.eq4.holds}
        if self.eq3 is not None:
            out["eq3"] = self.eq3.holds
        return out

    @property
    def consistent(self) -> bool:
        """All present criteria agree with each other and with 6m+3 < 4n."""
        expected = switch_predicate(self.n, self.m)
        return all(v == expected for v in self.booleans().values())


@dataclass(frozen=True)
class Lemma2Scan:
    n: int
    h_values: tuple[tuple[int, Fraction], ...]
    strictly_decreasing: bool
    g_checks: tuple[tuple[Fraction, int, bool], ...]

    @property
    def g_decreasing(self) -> bool:
        return all(ok for _, _, ok in self.g_checks)

    @property
    def passed(self) -> bool:
        return self.strictly_decreasing and self.g_decreasing


def _check_lemma1_range(n: int, m: int) -> None:
    if n < 2 or not 0 <= m <= n - 2:
        raise ValueError(f"need n >= 2 and 0 <= m <= n-2, got n={n}, m={m}")


def _check_lemma2_range(n: int, m: int) -> None:
    if n < 3 or not 1 <= m <= n - 2:
        raise ValueError(f"need n >= 3 and 1 <= m <= n-2, got n={n}, m={m}")


def b_value(n: int, m: int) -> Fraction:
    """b_m = (m/n)^(m+1) (1-m/n)^(n-m-1) / (n-m-1)."""
    _check_lemma1_range(n, m)
    return Fraction(m ** (m + 1) * (n - m) ** (n - m - 1), n ** n * (n - m - 1))


def main_integral(n: int, m: int) -> Fraction:
    _check_lemma1_range(n, m)
    integrand = poly_mul(affine_power(0, 1, m + 1), affine_power(1, -1, n - m - 2))
    return poly_integrate(integrand, Fraction(m, n), Fraction(m + 1, n))


def eq3_integral(n: int, m: int) -> Fraction:
    _check_lemma1_range(n, m)
    if m == 0:
        raise ValueError("the t/m substitution is undefined at m = 0")
    integrand = poly_mul(
        affine_power(1, Fraction(1, m), m + 1),
        affine_power(1, Fraction(-1, n - m), n - m - 2),
    )
    return poly_integrate(integrand, 0, 1)


def eq4_integrand(n: int, m: int) -> RatPoly:
    """(1 - v/(m+1))^m (1 + v/(n-m-1))^(n-m-1) as a polynomial in v."""
    return poly_mul(
        affine_power(1, Fraction(-1, m + 1), m),
        affine_power(1, Fraction(1, n - m - 1), n - m - 1),
    )


@lru_cache(maxsize=1 << 16)
def _eq4_value(n: int, m: int) -> Fraction:
    return poly_integrate(eq4_integrand(n, m), 0, 1)


def lemma1_conditions(n: int, m: int, q_pair: Optional[Sequence[Fraction]] = None) -> Lemma1Conditions:
    """Evaluate the four criteria for ``q_m >= q_{m+1}`` exactly.

    ``q_pair`` may carry precomputed ``(q_m, q_{m+1})`` from a tail table.
    """
    _check_lemma1_range(n, m)
    qm, qm1 = q_pair if q_pair is not None else (q_direct(n, m), q_direct(n, m + 1))
    eq3 = None
    if m >= 1:
        eq3 = Comparison(eq3_integral(n, m), Fraction(n - m, n - m - 1))
    return Lemma1Conditions(
        n=n,
        m=m,
        direct=Comparison(qm, qm1),
        main=Comparison(main_integral(n, m), b_value(n, m)),
        eq3=eq3,
        eq4=Comparison(_eq4_value(n, m), Fraction(1)),
    )


def g_of(n: int, m: int, v: Fraction) -> Fraction:
    """g_v(m) = (1 - v/(m+1))^m (1 + v/(n-m-1))^(n-m-1)."""
    _check_lemma2_range(n, m)
    v = Fraction(v)
    if not 0 <= v <= 1:
        raise ValueError(f"v must lie in [0, 1], got {v}")
    return (1 - v / (m + 1)) ** m * (1 + v / (n - m - 1)) ** (n - m - 1)


def h_of(n: int, m: int) -> Fraction:
    """h(m) = int_0^1 g_v(m) dv."""
    _check_lemma2_range(n, m)
    return _eq4_value(n, m)


def lemma2_scan(n: int, v_grid: Iterable[Fraction] = DEFAULT_V_GRID) -> Lemma2Scan:
    """Check that h and every g_v strictly decrease across integer m in [1, n-2]."""
    if n < 4:
        raise ValueError(f"lemma2_scan needs n >= 4, got {n}")
    ms = range(1, n - 1)
    h_values = tuple((m, h_of(n, m)) for m in ms)
    decreasing = all(a[1] > b[1] for a, b in zip(h_values, h_values[1:]))
    g_checks = []
    for v in v_grid:
        v = Fraction(v)
        if not 0 < v <= 1:
            raise ValueError(f"grid point {v} outside (0, 1]")
        g = [g_of(n, m, v) for m in ms]
        g_checks.extend((v, m, g[i] > g[i + 1]) for i, m in enumerate(ms[:-1]))
    return Lemma2Scan(n, h_values, decreasing, tuple(g_checks))
