"""Exact binomial tail probabilities q_m = P(B(n, m/n) <= m).

Two independent routes are provided: a direct sum over the binomial pmf,
kept in the all-integer form ``S / n**n``, and the order-statistic integral
``(m+1) C(n, m+1) * int_{m/n}^1 x^m (1-x)^(n-m-1) dx`` evaluated with
:mod:`chvatal_verify.polyrat`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, sqrt
from typing import Optional

import numpy as np

from .polyrat import affine_power, poly_integrate, poly_mul

__all__ = [
    "TailTable",
    "TheoremVerdict",
    "MCEstimate",
    "binom_coeff",
    "tail_numerator",
    "tail_numerators",
    "q_direct",
    "q_integral",
    "q_table",
    "target_m",
    "switch_predicate",
    "theorem_check",
    "verdict_from_order",
    "mc_estimate",
]


@dataclass(frozen=True)
class TailTable:
    n: int
    q: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.q) != self.n + 1:
            raise ValueError("a tail table holds exactly n + 1 values")

    def __getitem__(self, m: int) -> Fraction:
        return self.q[m]

    def __len__(self) -> int:
        return len(self.q)

    def numerators(self) -> list[int]:
        """The integers q[m] * n**n."""
        scale = self.n ** self.n
        return [int(v * scale) for v in self.q]


@dataclass(frozen=True)
class TheoremVerdict:
    n: int
    argmin_m: int
    unique_min: bool
    target_m: int
    minimizer_matches: bool
    switch_iff_holds: bool
    first_violation_m: Optional[int]
    all_strict: bool

    @property
    def passed(self) -> bool:
        return self.minimizer_matches and self.unique_min and self.switch_iff_holds


def binom_coeff(n: int, k: int) -> int:
    if n < 0 or k < 0 or k > n:
        raise ValueError(f"binom_coeff needs 0 <= k <= n, got n={n}, k={k}")
    return comb(n, k)


def _check_nm(n: int, m: int, m_max: int) -> None:
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if not 0 <= m <= m_max:
        raise ValueError(f"m must lie in [0, {m_max}] for n={n}, got {m}")


def tail_numerator(n: int, m: int) -> int:
    """S = sum_{k<=m} C(n,k) m^k (n-m)^(n-k), so that q_m = S / n**n."""
    _check_nm(n, m, n)
    if m == n:
        return n ** n
    b = n - m
    term = b ** n
    total = term
    for k in range(m):
        # T_{k+1} = T_k (n-k) m / ((k+1)(n-m)); the quotient is always exact
        term = term * ((n - k) * m) // ((k + 1) * b)
        total += term
    return total


def q_direct(n: int, m: int) -> Fraction:
    """q_m by the direct binomial sum."""
    return Fraction(tail_numerator(n, m), n ** n)


def q_integral(n: int, m: int) -> Fraction:
    """q_m by integrating the density of the (m+1)-th order statistic over [m/n, 1]."""
    _check_nm(n, m, n - 1)
    integrand = poly_mul(affine_power(0, 1, m), affine_power(1, -1, n - m - 1))
    return (m + 1) * comb(n, m + 1) * poly_integrate(integrand, Fraction(m, n), 1)


def tail_numerators(n: int) -> list[int]:
    return [tail_numerator(n, m) for m in range(n + 1)]


def q_table(n: int) -> TailTable:
    if n < 2:
        raise ValueError(f"q_table needs n >= 2, got {n}")
    scale = n ** n
    return TailTable(n, tuple(Fraction(s, scale) for s in tail_numerators(n)))


def target_m(n: int) -> int:
    """Nearest integer to 2n/3 (never a tie: 2n/3 is not a half-integer)."""
    if n < 2:
        raise ValueError(f"target_m needs n >= 2, got {n}")
    return (2 * n + 1) // 3


def switch_predicate(n: int, m: int) -> bool:
    """m + 1/2 < 2n/3 in integer form."""
    return 6 * m + 3 < 4 * n


def verdict_from_order(n: int, argmins: list[int], ge: list[bool], strict: list[bool]) -> TheoremVerdict:
    """Assemble a verdict from the set of minimizers and the consecutive comparisons.

    ``ge[m]`` is ``q[m] >= q[m+1]`` and ``strict[m]`` says the two differ.
    """
    target = target_m(n)
    unique = len(argmins) == 1
    matches = argmins[0] == target
    first_switch = next((m for m in range(n) if ge[m] != switch_predicate(n, m)), None)
    if first_switch is not None:
        first = first_switch
    elif not (unique and matches):
        first = argmins[0] if argmins[0] != target else argmins[1]
    else:
        first = None
    return TheoremVerdict(
        n=n,
        argmin_m=argmins[0],
        unique_min=unique,
        target_m=target,
        minimizer_matches=matches,
        switch_iff_holds=first_switch is None,
        first_violation_m=first,
        all_strict=all(strict),
    )


def theorem_check(
    n: int, table: Optional[TailTable] = None, numerators: Optional[list[int]] = None
) -> TheoremVerdict:
    """Exact check of both parts of the minimizer theorem for one n.

    Either a tail table or its integer numerators (``q[m] * n**n``) may be
    passed in to avoid recomputation.
    """
    if n < 2:
        raise ValueError(f"theorem_check needs n >= 2, got {n}")
    if numerators is not None:
        num = numerators
    else:
        num = table.numerators() if table is not None else tail_numerators(n)
    low = min(num)
    argmins = [m for m, v in enumerate(num) if v == low]
    ge = [num[m] >= num[m + 1] for m in range(n)]
    strict = [num[m] != num[m + 1] for m in range(n)]
    return verdict_from_order(n, argmins, ge, strict)


@dataclass(frozen=True)
class MCEstimate:
    estimate: float
    stderr: float
    successes: int
    samples: int
    seed: int
    generator: str = "numpy.random.PCG64"

    def within(self, exact: float, k: float = 4.0) -> bool:
        return abs(self.estimate - exact) <= k * self.stderr


def mc_estimate(n: int, m: int, samples: int, seed: int, chunk: int = 1 << 20) -> MCEstimate:
    """Monte Carlo estimate of q_m from n uniforms per trial.

    A trial succeeds when at most m of the uniforms fall in [0, m/n], which is
    the event that the (m+1)-th order statistic exceeds m/n.  Uniforms are
    drawn on (0, 1] so the event is certain at m = 0 and m = n.
    """
    _check_nm(n, m, n)
    if samples < 1:
        raise ValueError("samples must be positive")
    rng = np.random.Generator(np.random.PCG64(seed))
    p = m / n
    rows = max(1, chunk // n)
    successes = 0
    left = samples
    while left:
        size = min(rows, left)
        u = 1.0 - rng.random((size, n))
        counts = np.count_nonzero(u <= p, axis=1)
        successes += int(np.count_nonzero(counts <= m))
        left -= size
    est = successes / samples
    return MCEstimate(est, sqrt(est * (1.0 - est) / samples), successes, samples, seed)
