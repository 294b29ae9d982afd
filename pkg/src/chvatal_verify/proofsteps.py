"""The integrals and bounds behind the n = 3s + r case analysis.

Every integral here is an instance of ``h(n, m)`` from :mod:`lemmas`:

=============  ==========  ==========
quantity        m           n
=============  ==========  ==========
ineq8_first(s)  2s - 1      3s
I_of(s)         2s          3s
J_of(s, r)      2s          3s + r
H_of(s, r)      2s + 1      3s + r
=============  ==========  ==========

They are computed directly from their own integrands so that the identities
above can be checked against :func:`lemmas.h_of` rather than assumed.

Transcendental side conditions are decided with enclosures; an enclosure
that cannot separate the two sides is reported as inconclusive, never as a
pass.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Literal, Optional, Sequence

from .enclosure import Enclosure, enc_exp, enc_from_rational, enc_log1p
from .polyrat import affine_power, poly_integrate, poly_mul

__all__ = [
    "DEFAULT_V_GRID",
    "SCALAR_KINDS",
    "ProofStepReport",
    "ScalarCheck",
    "ScanFailure",
    "ineq8_first",
    "I_of",
    "J_of",
    "H_of",
    "cubic_truncation",
    "gamma_closed_form",
    "truncation_sign_scan",
    "eq8_lower_bound",
    "I_bound",
    "I_bound_numerators",
    "J1_bound",
    "H2_bound",
    "H2_bound_numerator",
    "closed_form_bounds",
    "proof_step_report",
    "bound_scan",
    "log_exponent",
    "scalar_inequality_check",
]

DEFAULT_V_GRID = tuple(Fraction(*p) for p in [(1, 10), (1, 4), (1, 2), (3, 4), (9, 10), (1, 1)])

Variant = Literal["gamma", "lambda"]


def _product_integral(a: int, p: int, b: int, q: int) -> Fraction:
    """int_0^1 (1 - v/a)^p (1 + v/b)^q dv; a zero exponent drops its factor."""
    first = affine_power(1, Fraction(-1, a), p)
    second = affine_power(1, Fraction(1, b), q) if q else affine_power(1, 0, 0)
    return poly_integrate(poly_mul(first, second), 0, 1)


def _check_s(s: int, smin: int = 1) -> None:
    if not isinstance(s, int) or s < smin:
        raise ValueError(f"s must be an integer >= {smin}, got {s}")


def _check_r(r: int) -> None:
    if r not in (1, 2):
        raise ValueError(f"r must be 1 or 2, got {r}")


def ineq8_first(s: int) -> Fraction:
    _check_s(s)
    return _product_integral(2 * s, 2 * s - 1, s, s)


def I_of(s: int) -> Fraction:
    _check_s(s)
    return _product_integral(2 * s + 1, 2 * s, s - 1, s - 1)


def J_of(s: int, r: int) -> Fraction:
    _check_s(s)
    _check_r(r)
    return _product_integral(2 * s + 1, 2 * s, s + r - 1, s + r - 1)


def H_of(s: int, r: int) -> Fraction:
    _check_s(s)
    _check_r(r)
    return _product_integral(2 * s + 2, 2 * s + 1, s + r - 2, s + r - 2)


# -- cubic truncations of the log-exponent ----------------------------------

def _denominators(s: int, variant: Variant) -> tuple[int, int]:
    if variant == "gamma":
        if s < 2:
            raise ValueError("the gamma truncation needs s >= 2")
        return s - 1, 2 * s + 1
    if variant == "lambda":
        _check_s(s)
        return s, 2 * s + 2
    raise ValueError(f"unknown variant {variant!r}")


def cubic_truncation(s: int, v: Fraction, variant: Variant) -> Fraction:
    """sum_{k=2}^{3} (v^k/k) ((-1)^(k-1)/d1^(k-1) - 1/d2^(k-1))."""
    d1, d2 = _denominators(s, variant)
    v = Fraction(v)
    return sum(
        (v ** k / k) * (Fraction((-1) ** (k - 1), d1 ** (k - 1)) - Fraction(1, d2 ** (k - 1)))
        for k in (2, 3)
    )


def gamma_closed_form(s: int, v: Fraction) -> Fraction:
    if s < 2:
        raise ValueError("the gamma truncation needs s >= 2")
    v = Fraction(v)
    return (-3 * v ** 2 * s / Fraction(2 * (s - 1) * (2 * s + 1))
            + v ** 3 * s * (s + 2) / Fraction((s - 1) ** 2 * (2 * s + 1) ** 2))


@dataclass
class ScanFailure:
    label: str
    s: int
    detail: str


def truncation_sign_scan(s_max: int, v_grid: Iterable[Fraction] = DEFAULT_V_GRID) -> list[ScanFailure]:
    """Both truncations must be negative on [2, s_max] x grid; returns the failures."""
    if s_max < 2:
        raise ValueError("s_max must be >= 2")
    grid = [Fraction(v) for v in v_grid]
    failures = []
    for s in range(2, s_max + 1):
        for v in grid:
            if not 0 < v <= 1:
                raise ValueError(f"grid point {v} outside (0, 1]")
            g = cubic_truncation(s, v, "gamma")
            if g != gamma_closed_form(s, v):
                failures.append(ScanFailure("gamma.closed_form", s, f"v={v}"))
            if not g < 0:
                failures.append(ScanFailure("gamma.sign", s, f"v={v}: {g}"))
            lam = cubic_truncation(s, v, "lambda")
            if not lam < 0:
                failures.append(ScanFailure("lambda.sign", s, f"v={v}: {lam}"))
    return failures


# -- displayed bounds ------------------------------------------------------

def eq8_lower_bound(s: int) -> Fraction:
    _check_s(s)
    return 1 + Fraction(5, 96 * s ** 2) - Fraction(1, 80 * s ** 3) + Fraction(1, 96 * s ** 4)


def I_bound_numerators(s: int) -> tuple[int, Fraction]:
    _check_s(s)
    return 1 + 3 * s * (-11 * s ** 3 + (s + 4) ** 2), s ** 6 * (29 + 7 * s - Fraction(15 * s ** 2, 2))


def I_bound(s: int) -> Fraction:
    _check_s(s, 2)
    first, second = I_bound_numerators(s)
    den = (s - 1) ** 4 * (2 * s + 1) ** 6
    return 1 + Fraction(first, den) + second / den


def J1_bound(s: int) -> Fraction:
    _check_s(s)
    return 1 + Fraction(1, 12 * (2 * s + 1) ** 2)


def H2_bound_numerator(s: int) -> int:
    _check_s(s)
    return -2 * s ** 5 - 9 * (s ** 4 + s ** 3) + 8 * s ** 2 + 22 * s + 18


def H2_bound(s: int) -> Fraction:
    _check_s(s, 2)
    return 1 + Fraction(H2_bound_numerator(s), 64 * s * (s + 1) ** 6)


def closed_form_bounds(s: int) -> dict[str, Fraction]:
    """Every closed-form bound defined at this s (I and H2 need s >= 2)."""
    _check_s(s)
    out = {"eq8_lower": eq8_lower_bound(s), "J1": J1_bound(s)}
    if s >= 2:
        out["I"] = I_bound(s)
        out["H2"] = H2_bound(s)
    return out


@dataclass(frozen=True)
class Relation:
    """``lhs <op> rhs`` with exact operands."""

    name: str
    lhs: Fraction
    op: str
    rhs: Fraction

    @property
    def holds(self) -> bool:
        return {
            "<": self.lhs < self.rhs,
            "<=": self.lhs <= self.rhs,
            ">": self.lhs > self.rhs,
            ">=": self.lhs >= self.rhs,
            "==": self.lhs == self.rhs,
        }[self.op]


@dataclass
class ProofStepReport:
    s: int
    values: dict[str, Fraction]
    bounds: dict[str, Fraction]
    relations: list[Relation]

    @property
    def failures(self) -> list[Relation]:
        return [rel for rel in self.relations if not rel.holds]

    @property
    def passed(self) -> bool:
        return not self.failures


def proof_step_report(s: int) -> ProofStepReport:
    """All exact relations for one s (covering n = 3s, 3s + 1, 3s + 2)."""
    _check_s(s)
    values = {
        "ineq8_first": ineq8_first(s),
        "I": I_of(s),
        "J1": J_of(s, 1),
        "J2": J_of(s, 2),
        "H1": H_of(s, 1),
        "H2": H_of(s, 2),
    }
    bounds = closed_form_bounds(s)
    rel = [
        Relation("eq8.first", values["ineq8_first"], ">=", Fraction(1)),
        Relation("bound.eq8", values["ineq8_first"], ">=", bounds["eq8_lower"]),
        Relation("bound.eq8.gt1", bounds["eq8_lower"], ">", Fraction(1)),
        Relation("eq8.second", values["I"], "<", Fraction(1)),
        Relation("eq9.r1", values["J1"], ">=", Fraction(1)),
        Relation("eq9.r2", values["J2"], ">=", Fraction(1)),
        Relation("bound.J1", values["J1"], ">=", bounds["J1"]),
        Relation("mono.J", values["J1"], "<=", values["J2"]),
        Relation("eq10.r1", values["H1"], "<", Fraction(1)),
        Relation("eq10.r2", values["H2"], "<", Fraction(1)),
        Relation("mono.H", values["H1"], "<=", values["H2"]),
    ]
    if s >= 2:
        rel.append(Relation("bound.H2", values["H2"], "<", bounds["H2"]))
        rel.append(Relation("bound.H2.num", Fraction(H2_bound_numerator(s)), "<", Fraction(0)))
    if s >= 3:
        first, second = I_bound_numerators(s)
        rel.append(Relation("bound.I", values["I"], "<", bounds["I"]))
        rel.append(Relation("bound.I.num1", Fraction(first), "<", Fraction(0)))
        rel.append(Relation("bound.I.num2", Fraction(second), "<", Fraction(0)))
    if s == 1:
        # the Bernoulli step is an equality at s = 1
        rel.append(Relation("bound.J1.tight", values["J1"], "==", bounds["J1"]))
    return ProofStepReport(s, values, bounds, rel)


def bound_scan(s_max: int) -> list[Relation]:
    """Failed relations over s in [1, s_max]; empty means every chain endpoint holds."""
    if s_max < 3:
        raise ValueError("s_max must be >= 3")
    failures = []
    for s in range(1, s_max + 1):
        failures.extend(proof_step_report(s).failures)
    return failures


# -- transcendental and scalar side conditions ------------------------------

SCALAR_KINDS = (
    "eq5", "eq6", "eq7", "recip_bound", "exp_bound", "bernoulli",
    "power_monotone", "ratio_5_4", "ratio_6_5", "log_tail_I", "log_tail_H",
)

MAX_PRECISION = 512


def log_exponent(s: int, v: Fraction, variant: Variant, precision: int) -> Enclosure:
    """Enclosure of d2*log(1 - v/d2) + d1*log(1 + v/d1).

    This is the full exponent whose k = 2, 3 terms form the cubic truncation;
    (d1, d2) = (s-1, 2s+1) for the I integrand and (s, 2s+2) for H2.
    """
    d1, d2 = _denominators(s, variant)
    v = Fraction(v)
    return d2 * enc_log1p(-v / d2, precision) + d1 * enc_log1p(v / d1, precision)


@dataclass(frozen=True)
class ScalarCheck:
    """Outcome of one side condition at one grid point.

    ``lhs`` and ``rhs`` are the decisive bounds (for ``lhs < rhs`` the upper
    end of the left side and the lower end of the right side), so that
    ``passed`` is exactly the stated relation on the rendered values.
    ``status`` is 'pass', 'fail' or 'inconclusive'.
    """

    kind: str
    params: tuple[tuple[str, object], ...]
    lhs: Fraction
    op: str
    rhs: Fraction
    status: str
    mode: str
    precision: Optional[int] = None

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    @property
    def s(self) -> int:
        return int(dict(self.params).get("s", 0))

    def label(self) -> str:
        return ",".join(f"{k}={v}" for k, v in self.params)


def _exact(kind, params, lhs, op, rhs) -> ScalarCheck:
    holds = Relation(kind, Fraction(lhs), op, Fraction(rhs)).holds
    return ScalarCheck(kind, params, Fraction(lhs), op, Fraction(rhs),
                       "pass" if holds else "fail", "exact")


def _strict(kind, params, build: Callable[[int], tuple[Enclosure, Enclosure]],
            op: str, precision: int, max_precision: int) -> ScalarCheck:
    """Decide ``lhs op rhs`` (op '<' or '>') strictly, doubling precision when needed."""
    prec = precision
    while True:
        left, right = build(prec)
        if op == ">":
            left, right = right, left  # decide right < left instead
        if left.hi < right.lo:
            status = "pass"
        elif left.lo >= right.hi:
            status = "fail"
        else:
            status = None
        if status or prec * 2 > max_precision:
            if op == ">":
                lhs, rhs = right.lo, left.hi
            else:
                lhs, rhs = left.hi, right.lo
            return ScalarCheck(kind, params, lhs, op, rhs, status or "inconclusive", "enclosure", prec)
        prec *= 2


def _point(x: Fraction, prec: int) -> Enclosure:
    return enc_from_rational(x, prec)


def _check_unit(v: Fraction, closed: bool = True) -> None:
    if not (0 < v <= 1 if closed else 0 < v < 1):
        raise ValueError(f"v={v} outside {'(0, 1]' if closed else '(0, 1)'}")


def _eq5(c: Fraction, precision: int, max_precision: int, params) -> ScalarCheck:
    if c <= 0:
        raise ValueError(f"eq5 needs c > 0, got {c}")
    return _strict("eq5", params, lambda p: (_point(c / (1 + c), p), enc_log1p(c, p)),
                   "<", precision, max_precision)


def _eq6(x: Fraction, v: Fraction, precision: int, max_precision: int) -> ScalarCheck:
    if x < 1:
        raise ValueError(f"eq6 needs x >= 1, got {x}")
    _check_unit(v)
    c = v / (x + 1 - v)
    rhs = (v * x / (x + 1) ** 2) / (1 - v / (x + 1))
    return _strict("eq6", (("x", x), ("v", v)), lambda p: (enc_log1p(c, p), _point(rhs, p)),
                   ">", precision, max_precision)


def _eq7(x: Fraction, v: Fraction, precision: int, max_precision: int) -> ScalarCheck:
    if x < 1:
        raise ValueError(f"eq7 needs x >= 1, got {x}")
    _check_unit(v)
    c = v / (x + 1 - v)
    rational = -c + c ** 2 / (v * (c + 1))
    return _strict("eq7", (("x", x), ("v", v)),
                   lambda p: (enc_log1p(c, p) + _point(rational, p), _point(Fraction(0), p)),
                   ">", precision, max_precision)


def _exp_bound(c: Fraction, precision: int, max_precision: int, params) -> ScalarCheck:
    if c >= 0:
        raise ValueError(f"exp_bound needs c < 0, got {c}")
    return _strict("exp_bound", params, lambda p: (enc_exp(c, p), _point(1 + c + c ** 2 / 2, p)),
                   "<", precision, max_precision)


def _log_tail(s: int, v: Fraction, variant: Variant, precision: int, max_precision: int) -> ScalarCheck:
    if s < 2:
        raise ValueError("the log-tail checks need s >= 2")
    _check_unit(v)
    kind = "log_tail_I" if variant == "gamma" else "log_tail_H"
    trunc = cubic_truncation(s, v, variant)
    return _strict(kind, (("s", Fraction(s)), ("v", v)),
                   lambda p: (log_exponent(s, v, variant, p), _point(trunc, p)),
                   "<", precision, max_precision)


def _bernoulli_bases(s: int, v: Fraction) -> list[tuple[str, Fraction]]:
    """The two bases the Bernoulli inequality is applied to, shifted to the form 1 + c."""
    c8 = -3 * v ** 2 / (4 * s ** 2) + v ** 3 / (4 * s ** 3)
    c9 = v * (1 - 2 * v) / (s * (2 * s + 1)) + v ** 2 / (2 * s + 1) ** 2 * (1 + v / s)
    return [("eq8", c8), ("eq9", c9)]


def scalar_inequality_check(
    kind: str,
    s_values: Sequence[int] = range(2, 51),
    v_grid: Sequence[Fraction] = DEFAULT_V_GRID,
    precision: int = 128,
    max_precision: int = MAX_PRECISION,
) -> list[ScalarCheck]:
    """Evaluate one side condition over its grid.

    ``s_values`` doubles as the integer grid for x (eq6/eq7 also get the
    half-integers in between) and for the divisor d in c = v/d (eq5).
    Points outside an inequality's domain raise ``ValueError``.
    """
    if kind not in SCALAR_KINDS:
        raise ValueError(f"unknown kind {kind!r}")
    grid = [Fraction(v) for v in v_grid]
    s_values = list(s_values)
    out: list[ScalarCheck] = []
    if kind == "eq5":
        for d in s_values:
            for v in grid:
                _check_unit(v)
                out.append(_eq5(v / d, precision, max_precision, (("d", Fraction(d)), ("v", v))))
    elif kind in ("eq6", "eq7"):
        fn = _eq6 if kind == "eq6" else _eq7
        xs = sorted({Fraction(k, 2) for s in s_values for k in (2 * s, 2 * s + 1)})
        for x in xs:
            for v in grid:
                out.append(fn(x, v, precision, max_precision))
    elif kind == "exp_bound":
        for s in s_values:
            for v in grid:
                for variant in ("gamma", "lambda"):
                    if variant == "gamma" and s < 2:
                        continue
                    c = cubic_truncation(s, v, variant)
                    params = (("s", Fraction(s)), ("v", v), ("via", variant))
                    out.append(_exp_bound(c, precision, max_precision, params))
    elif kind in ("log_tail_I", "log_tail_H"):
        variant = "gamma" if kind == "log_tail_I" else "lambda"
        for s in s_values:
            for v in grid:
                out.append(_log_tail(s, v, variant, precision, max_precision))
    elif kind == "recip_bound":
        # applied to c = v/(2s), the factor (1 - v/(2s))^-1
        for s in s_values:
            for v in grid:
                _check_unit(v)
                c = v / (2 * s)
                _check_unit(c, closed=False)
                out.append(_exact("recip_bound", (("s", Fraction(s)), ("v", v)),
                                  1 / (1 - c), ">", 1 + c + c ** 2))
    elif kind == "bernoulli":
        for s in s_values:
            for v in grid:
                _check_unit(v)
                for tag, c in _bernoulli_bases(s, v):
                    if c <= -1:
                        raise ValueError(f"Bernoulli needs c > -1, got {c}")
                    params = (("s", Fraction(s)), ("v", v), ("via", tag))
                    out.append(_exact("bernoulli", params, (1 + c) ** s, ">=", 1 + s * c))
    elif kind == "power_monotone":
        for s in s_values:
            for v in grid:
                _check_unit(v)
                out.append(_exact("power_monotone", (("s", Fraction(s)), ("v", v)),
                                  (1 + v / s) ** s, "<=", (1 + v / (s + 1)) ** (s + 1)))
    elif kind in ("ratio_5_4", "ratio_6_5"):
        for s in s_values:
            if kind == "ratio_6_5" and s < 2:
                raise ValueError("ratio_6_5 needs s >= 2")
            a = 2 * s + 1 if kind == "ratio_5_4" else 2 * s + 2
            coef = Fraction(5, 4) if kind == "ratio_5_4" else Fraction(6, 5)
            op = "<=" if kind == "ratio_5_4" else "<"
            for v in grid:
                if v == 1:
                    # the step is only used on the open interval
                    continue
                _check_unit(v, closed=False)
                out.append(_exact(kind, (("s", Fraction(s)), ("v", v)),
                                  Fraction(a) / (a - v), op, 1 + v / a + coef * v ** 2 / a ** 2))
    return out
