"""Exact univariate polynomials over the rationals.

Every integrand handled by this package is a product of affine powers
``(c0 + c1*v)**p``, so the module only needs expansion, multiplication and
definite integration.  Coefficients are stored as integer numerators over a
single positive denominator; ``RatPoly.coeffs`` exposes them as canonical
``Fraction`` values.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence, Union

Rational = Union[int, Fraction]

__all__ = ["RatPoly", "affine_power", "poly_mul", "poly_integrate", "monomial"]

# below this many coefficient products schoolbook convolution beats packing
_KRONECKER_MIN = 64


def _canonical(num: Sequence[int], den: int) -> tuple[tuple[int, ...], int]:
    num = list(num)
    while num and num[-1] == 0:
        num.pop()
    if not num:
        return (), 1
    if den < 0:
        num = [-c for c in num]
        den = -den
    g = den
    for c in num:
        g = gcd(g, c)
        if g == 1:
            break
    if g != 1:
        num = [c // g for c in num]
        den //= g
    return tuple(num), den


def _pack(values: Sequence[int], nbytes: int) -> int:
    return int.from_bytes(b"".join(v.to_bytes(nbytes, "little") for v in values), "little")


def _signed_pack(values: Sequence[int], nbytes: int) -> int:
    pos = _pack([v if v > 0 else 0 for v in values], nbytes)
    neg = _pack([-v if v < 0 else 0 for v in values], nbytes)
    return pos - neg


def _int_convolve(a: Sequence[int], b: Sequence[int]) -> list[int]:
    """Product of two integer coefficient lists (Kronecker substitution)."""
    if len(a) * len(b) < _KRONECKER_MIN:
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return out
    amax = max(abs(x) for x in a)
    bmax = max(abs(y) for y in b)
    # every output coefficient is bounded by min(len) * amax * bmax; one spare
    # bit keeps the balanced digits in range
    bits = amax.bit_length() + bmax.bit_length() + min(len(a), len(b)).bit_length() + 2
    nbytes = (bits + 7) // 8
    product = _signed_pack(a, nbytes) * _signed_pack(b, nbytes)
    count = len(a) + len(b) - 1
    half = 1 << (8 * nbytes - 1)
    offset = _pack([half] * count, nbytes)
    raw = (product + offset).to_bytes(nbytes * count, "little")
    return [
        int.from_bytes(raw[i * nbytes:(i + 1) * nbytes], "little") - half
        for i in range(count)
    ]


class RatPoly:
    """Dense polynomial ``sum(coeffs[i] * v**i)`` with exact rational coefficients.

    Instances are immutable.  The zero polynomial has no coefficients.
    """

    __slots__ = ("_num", "_den")

    def __init__(self, coeffs: Iterable[Rational] = ()):
        fracs = [Fraction(c) for c in coeffs]
        den = 1
        for c in fracs:
            den = den * c.denominator // gcd(den, c.denominator)
        self._num, self._den = _canonical([c.numerator * (den // c.denominator) for c in fracs], den)

    @classmethod
    def _from_ints(cls, num: Sequence[int], den: int = 1) -> "RatPoly":
        poly = cls.__new__(cls)
        poly._num, poly._den = _canonical(num, den)
        return poly

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(c, self._den) for c in self._num)

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self._num) - 1

    def is_zero(self) -> bool:
        return not self._num

    def __len__(self) -> int:
        return len(self._num)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, RatPoly):
            return self._num == other._num and self._den == other._den
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self._num, self._den))

    def __repr__(self) -> str:
        return f"RatPoly([{', '.join(str(c) for c in self.coeffs)}])"

    def __neg__(self) -> "RatPoly":
        return RatPoly._from_ints([-c for c in self._num], self._den)

    def __add__(self, other: "RatPoly") -> "RatPoly":
        if not isinstance(other, RatPoly):
            return NotImplemented
        den = self._den * other._den // gcd(self._den, other._den)
        fa, fb = den // self._den, den // other._den
        size = max(len(self._num), len(other._num))
        a = list(self._num) + [0] * (size - len(self._num))
        b = list(other._num) + [0] * (size - len(other._num))
        return RatPoly._from_ints([x * fa + y * fb for x, y in zip(a, b)], den)

    def __sub__(self, other: "RatPoly") -> "RatPoly":
        if not isinstance(other, RatPoly):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other: Union["RatPoly", Rational]) -> "RatPoly":
        if isinstance(other, RatPoly):
            return poly_mul(self, other)
        if isinstance(other, (int, Fraction)):
            other = Fraction(other)
            return RatPoly._from_ints(
                [c * other.numerator for c in self._num], self._den * other.denominator
            )
        return NotImplemented

    __rmul__ = __mul__

    def __call__(self, x: Rational) -> Fraction:
        x = Fraction(x)
        p, q = x.numerator, x.denominator
        # homogeneous Horner: sum c_i p^i q^(d-i), then divide by q^d
        acc = 0
        qpow = 1
        for c in reversed(self._num):
            acc = acc * p + c * qpow
            qpow *= q
        if not self._num:
            return Fraction(0)
        return Fraction(acc, self._den * q ** (len(self._num) - 1))

    def antiderivative(self) -> "RatPoly":
        """Antiderivative with zero constant term."""
        if not self._num:
            return self
        size = len(self._num) + 1
        # lcm(1..size) keeps every c_i / (i + 1) integral
        scale = 1
        for k in range(2, size + 1):
            scale = scale * k // gcd(scale, k)
        num = [0] + [c * (scale // (i + 1)) for i, c in enumerate(self._num)]
        return RatPoly._from_ints(num, self._den * scale)

    def integrate(self, a: Rational, b: Rational) -> Fraction:
        return poly_integrate(self, a, b)


def monomial(k: int, c: Rational = 1) -> RatPoly:
    """The polynomial ``c * v**k``."""
    return RatPoly([0] * k + [c])


def affine_power(c0: Rational, c1: Rational, p: int) -> RatPoly:
    """Expand ``(c0 + c1*v)**p`` by the binomial theorem.

    ``p == 0`` gives the constant 1 whatever the base, so factors such as
    ``(1 + v/(s-1))**(s-1)`` at ``s = 1`` never touch the undefined base.
    """
    if p < 0:
        raise ValueError(f"exponent must be nonnegative, got {p}")
    if p == 0:
        return RatPoly._from_ints([1])
    c0, c1 = Fraction(c0), Fraction(c1)
    a, b = c0.numerator, c0.denominator
    c, d = c1.numerator, c1.denominator
    if c == 0:
        return RatPoly._from_ints([a ** p], b ** p)
    # coefficient k is C(p,k) a^(p-k) c^k / (b^(p-k) d^k); over the common
    # denominator (b d)^p its numerator is C(p,k) (a d)^(p-k) (b c)^k
    ad, bc = a * d, b * c
    ad_pows = [1] * (p + 1)
    for k in range(1, p + 1):
        ad_pows[k] = ad_pows[k - 1] * ad
    num = []
    binom = 1
    bc_pow = 1
    for k in range(p + 1):
        num.append(binom * ad_pows[p - k] * bc_pow)
        binom = binom * (p - k) // (k + 1)
        bc_pow *= bc
    return RatPoly._from_ints(num, (b * d) ** p)


def poly_mul(a: RatPoly, b: RatPoly) -> RatPoly:
    """Exact product of two polynomials."""
    if a.is_zero() or b.is_zero():
        return RatPoly._from_ints([])
    return RatPoly._from_ints(_int_convolve(a._num, b._num), a._den * b._den)


def poly_integrate(p: RatPoly, a: Rational, b: Rational) -> Fraction:
    """Exact value of the definite integral of ``p`` from ``a`` to ``b``."""
    a, b = Fraction(a), Fraction(b)
    if p.is_zero() or a == b:
        return Fraction(0)
    anti = p.antiderivative()
    return anti(b) - anti(a)
