"""Exact arithmetic in cyclotomic fields Q(zeta_k).

Elements are residues modulo the k-th cyclotomic polynomial, stored as
coefficient tuples over :class:`fractions.Fraction`.  Division works for
any nonzero element (extended Euclid against the modulus), so Gaussian
elimination over these fields is exact.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Sequence, Union

Coeffs = tuple[Fraction, ...]
Scalar = Union[int, Fraction]


# ---------------------------------------------------------------------------
# dense polynomial helpers over Q (low-degree first, trailing zeros stripped)
# ---------------------------------------------------------------------------


def _trim(p: list[Fraction]) -> list[Fraction]:
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_sub(a: Sequence[Fraction], b: Sequence[Fraction]) -> list[Fraction]:
    n = max(len(a), len(b))
    return _trim(
        [
            (a[i] if i < len(a) else Fraction(0)) - (b[i] if i < len(b) else Fraction(0))
            for i in range(n)
        ]
    )


def _poly_mul(a: Sequence[Fraction], b: Sequence[Fraction]) -> list[Fraction]:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return _trim(out)


def _poly_divmod(
    a: Sequence[Fraction], b: Sequence[Fraction]
) -> tuple[list[Fraction], list[Fraction]]:
    a = list(a)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(0, len(a) - len(b) + 1)
    inv_lead = 1 / b[-1]
    while len(a) >= len(b) and _trim(list(a)):
        a = _trim(a)
        if len(a) < len(b):
            break
        shift = len(a) - len(b)
        factor = a[-1] * inv_lead
        q[shift] = factor
        for i, c in enumerate(b):
            a[shift + i] -= factor * c
        a = _trim(a)
    return _trim(q), _trim(list(a))


@lru_cache(maxsize=None)
def cyclotomic_polynomial(k: int) -> Coeffs:
    """Coefficients of the k-th cyclotomic polynomial, low degree first.

    Computed by dividing x^k - 1 by the cyclotomic polynomials of the
    proper divisors of k.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    num: list[Fraction] = [Fraction(-1)] + [Fraction(0)] * (k - 1) + [Fraction(1)]
    for d in range(1, k):
        if k % d == 0:
            num, rem = _poly_divmod(num, list(cyclotomic_polynomial(d)))
            assert not rem
    return tuple(num)


# ---------------------------------------------------------------------------
# field elements
# ---------------------------------------------------------------------------


class Cyclotomic:
    """An element of Q(zeta_k), reduced mod the k-th cyclotomic polynomial."""

    __slots__ = ("k", "coeffs")

    def __init__(self, k: int, coeffs: Union[Scalar, Sequence[Scalar]] = 0):
        self.k = k
        phi = cyclotomic_polynomial(k)
        deg = len(phi) - 1
        if isinstance(coeffs, (int, Fraction)):
            cs = [Fraction(coeffs)]
        else:
            cs = [Fraction(c) for c in coeffs]
        if len(cs) > deg:
            _, cs = _poly_divmod(cs, list(phi))
        cs = cs + [Fraction(0)] * (deg - len(cs))
        self.coeffs: Coeffs = tuple(cs[:deg])

    @staticmethod
    def zeta(k: int, power: int = 1) -> "Cyclotomic":
        """zeta_k**power as a field element."""
        power %= k
        return Cyclotomic(k, [Fraction(0)] * power + [Fraction(1)])

    # -- predicates ---------------------------------------------------

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"not rational: {self}")
        return self.coeffs[0] if self.coeffs else Fraction(0)

    # -- arithmetic ---------------------------------------------------

    def _check(self, other: "Cyclotomic") -> None:
        if self.k != other.k:
            raise ValueError(f"mixed cyclotomic orders {self.k} and {other.k}")

    def __add__(self, other: Union["Cyclotomic", Scalar]) -> "Cyclotomic":
        other = self._coerce(other)
        return Cyclotomic(self.k, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    __radd__ = __add__

    def __neg__(self) -> "Cyclotomic":
        return Cyclotomic(self.k, [-c for c in self.coeffs])

    def __sub__(self, other: Union["Cyclotomic", Scalar]) -> "Cyclotomic":
        return self + (-self._coerce(other))

    def __rsub__(self, other: Scalar) -> "Cyclotomic":
        return self._coerce(other) - self

    def __mul__(self, other: Union["Cyclotomic", Scalar]) -> "Cyclotomic":
        other = self._coerce(other)
        return Cyclotomic(self.k, _poly_mul(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def inverse(self) -> "Cyclotomic":
        """Multiplicative inverse via extended Euclid against the modulus."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in cyclotomic field")
        phi = list(cyclotomic_polynomial(self.k))
        # Bezout: s*self + t*phi = gcd (a nonzero constant, since phi irreducible)
        r0, r1 = _trim(list(self.coeffs)), phi
        s0: list[Fraction] = [Fraction(1)]
        s1: list[Fraction] = []
        while r1:
            q, r = _poly_divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
        assert len(r0) == 1, "cyclotomic modulus not coprime to element?"
        inv_gcd = 1 / r0[0]
        return Cyclotomic(self.k, [c * inv_gcd for c in s0])

    def __truediv__(self, other: Union["Cyclotomic", Scalar]) -> "Cyclotomic":
        return self * self._coerce(other).inverse()

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Cyclotomic(self.k, other)
        if not isinstance(other, Cyclotomic):
            return NotImplemented
        return self.k == other.k and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.k, self.coeffs))

    def _coerce(self, x: Union["Cyclotomic", Scalar]) -> "Cyclotomic":
        if isinstance(x, Cyclotomic):
            self._check(x)
            return x
        return Cyclotomic(self.k, x)

    def __repr__(self) -> str:
        if self.is_zero():
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                parts.append(str(c))
            else:
                mon = "z" if i == 1 else f"z^{i}"
                parts.append(mon if c == 1 else f"{c}*{mon}")
        return " + ".join(parts)
