"""Univariate polynomials over Q with exact coefficients.

Used as the coefficient ring for operator expressions: a formal variable
``h`` tracks a deformation degree.  All arithmetic is over
:class:`fractions.Fraction`; there is deliberately no float path.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Union

Scalar = Union[int, Fraction]


def _as_fraction(x: Scalar) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"expected int or Fraction, got {type(x).__name__}")


class QPoly:
    """Polynomial ``c0 + c1*h + c2*h^2 + ...`` with Fraction coefficients.

    Immutable; coefficients are stored low-degree first with trailing
    zeros stripped, so equality is structural.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Union[Scalar, Iterable[Scalar]] = 0):
        if isinstance(coeffs, (int, Fraction)):
            cs = [_as_fraction(coeffs)]
        else:
            cs = [_as_fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    # -- constructors -------------------------------------------------

    @staticmethod
    def zero() -> "QPoly":
        return QPoly(0)

    @staticmethod
    def one() -> "QPoly":
        return QPoly(1)

    @staticmethod
    def gen() -> "QPoly":
        """The variable h itself."""
        return QPoly([0, 1])

    # -- predicates ---------------------------------------------------

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    @property
    def degree(self) -> int:
        """Degree, with the usual convention deg 0 = -1."""
        return len(self.coeffs) - 1

    def constant_value(self) -> Fraction:
        """The constant term; raises if the polynomial is not constant."""
        if not self.is_constant():
            raise ValueError(f"not a constant: {self}")
        return self.coeffs[0] if self.coeffs else Fraction(0)

    # -- arithmetic ---------------------------------------------------

    def __add__(self, other: Union["QPoly", Scalar]) -> "QPoly":
        other = _coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return QPoly(
            [
                (self.coeffs[i] if i < len(self.coeffs) else 0)
                + (other.coeffs[i] if i < len(other.coeffs) else 0)
                for i in range(n)
            ]
        )

    __radd__ = __add__

    def __neg__(self) -> "QPoly":
        return QPoly([-c for c in self.coeffs])

    def __sub__(self, other: Union["QPoly", Scalar]) -> "QPoly":
        return self + (-_coerce(other))

    def __rsub__(self, other: Scalar) -> "QPoly":
        return _coerce(other) - self

    def __mul__(self, other: Union["QPoly", Scalar]) -> "QPoly":
        other = _coerce(other)
        if not self.coeffs or not other.coeffs:
            return QPoly(0)
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return QPoly(out)

    __rmul__ = __mul__

    def __truediv__(self, other: Scalar) -> "QPoly":
        d = _as_fraction(other)
        return QPoly([c / d for c in self.coeffs])

    def __pow__(self, n: int) -> "QPoly":
        if n < 0:
            raise ValueError("negative power of a polynomial")
        out = QPoly(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = QPoly(other)
        if not isinstance(other, QPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __call__(self, value: Scalar) -> Fraction:
        v = _as_fraction(value)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * v + c
        return acc

    def __repr__(self) -> str:
        return f"QPoly({self})"

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                parts.append(str(c))
            else:
                mon = "h" if i == 1 else f"h^{i}"
                if c == 1:
                    parts.append(mon)
                elif c == -1:
                    parts.append(f"-{mon}")
                else:
                    parts.append(f"{c}*{mon}")
        return " + ".join(parts).replace("+ -", "- ")


def _coerce(x: Union[QPoly, Scalar]) -> QPoly:
    return x if isinstance(x, QPoly) else QPoly(x)
