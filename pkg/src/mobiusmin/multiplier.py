"""The degree-two multiplier f in exact arithmetic.

f(z) = (z - m1)(z - m2)(m1 z + 1)(m2 z + 1) / z^2  with m1, m2 real.

Expanded with s = m1 + m2, p = m1 m2:

    f(z) = p z^2 + s(1-p) z + (1 - s^2 + p^2) - s(1-p)/z + p/z^2,

so f is a Laurent polynomial with poles only at 0 and infinity, it is
function-symmetric (f(-1/conj(z)) = conj(f(z))), its zeros are
{m1, m2, -1/m1, -1/m2}, and the residue of f(z) dz/z at 0 is the constant
term b_0 = (1 - m1^2)(1 - m2^2) - 2 m1 m2.  Choosing m2 as a root of
(m1^2 - 1) m2^2 - 2 m1 m2 + (1 - m1^2) = 0 kills that residue; for m1 = 2
the roots are (2 +- sqrt(13))/3.  All of these identities are exact
cancellations, so they are established in Q[sqrt(D)], not in floating
point; floats enter only for the annulus bound scan.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

import numpy as np

from .errors import NoValidRootError, ParameterError, ZeroInAnnulusError
from .laurent import LaurentCoefficients


def _square_free(n: int) -> tuple[int, int]:
    """n = s^2 * d with d square-free; returns (s, d). Requires n >= 1."""
    if n < 1:
        raise ValueError("argument must be a positive integer")
    s, d, i = 1, 1, 2
    while i * i <= n:
        if n % i == 0:
            e = 0
            while n % i == 0:
                n //= i
                e += 1
            s *= i ** (e // 2)
            if e % 2:
                d *= i
        i += 1
    d *= n
    return s, d


def _exact_sqrt(t: Fraction) -> tuple[Fraction, int]:
    """sqrt(t) = s * sqrt(d) with s rational, d square-free. Requires t > 0."""
    if t <= 0:
        raise ValueError("argument must be positive")
    v = t.numerator * t.denominator
    s, d = _square_free(v)
    return Fraction(s, t.denominator), d


@dataclass(frozen=True)
class QuadExact:
    """Exact element a + b*sqrt(d) of a real quadratic field, a, b rational."""

    a: Fraction
    b: Fraction
    d: int

    def __post_init__(self):
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "b", Fraction(self.b))
        if self.d < 1:
            raise ValueError("d must be a positive integer")
        if _square_free(self.d)[1] != self.d:
            raise ValueError(f"d = {self.d} is not square-free")
        if self.d == 1:  # sqrt(1) folds into the rational part
            object.__setattr__(self, "a", self.a + self.b)
            object.__setattr__(self, "b", Fraction(0))

    @classmethod
    def rational(cls, r, d: int = 1) -> "QuadExact":
        return cls(Fraction(r), Fraction(0), max(d, 1))

    def _coerce(self, other) -> "QuadExact | None":
        if isinstance(other, QuadExact):
            if other.d == self.d or other.b == 0:
                return QuadExact(other.a, other.b, self.d)
            if self.b == 0:
                return other
            raise ValueError(f"incompatible radicands {self.d} and {other.d}")
        if isinstance(other, (int, Rational)):
            return QuadExact(Fraction(other), Fraction(0), self.d)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        d = self.d if self.b != 0 else o.d
        return QuadExact(self.a + o.a, self.b + o.b, d)

    __radd__ = __add__

    def __neg__(self):
        return QuadExact(-self.a, -self.b, self.d)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        d = self.d if self.b != 0 else o.d
        return QuadExact(
            self.a * o.a + d * self.b * o.b, self.a * o.b + self.b * o.a, d
        )

    __rmul__ = __mul__

    def inverse(self) -> "QuadExact":
        norm = self.a * self.a - self.d * self.b * self.b
        if norm == 0:
            raise ZeroDivisionError("zero or non-invertible element")
        return QuadExact(self.a / norm, -self.b / norm, self.d)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.a == o.a and self.b == o.b

    def __hash__(self):
        return hash((self.a, self.b, self.d if self.b else 1))

    def sign(self) -> int:
        if self.b == 0:
            return (self.a > 0) - (self.a < 0)
        if self.a == 0:
            return 1 if self.b > 0 else -1
        if self.a > 0 and self.b > 0:
            return 1
        if self.a < 0 and self.b < 0:
            return -1
        # opposite signs: compare a^2 against d b^2 (equality impossible
        # for square-free d > 1 with b != 0)
        bigger_rational = self.a * self.a > self.d * self.b * self.b
        if self.a > 0:
            return 1 if bigger_rational else -1
        return -1 if bigger_rational else 1

    def __lt__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return (self - o).sign() < 0

    def __le__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return (self - o).sign() <= 0

    def __gt__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return (self - o).sign() > 0

    def __ge__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return (self - o).sign() >= 0

    def __abs__(self):
        return self if self.sign() >= 0 else -self

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    def __float__(self) -> float:
        return float(self.a) + float(self.b) * math.sqrt(self.d)

    def __str__(self) -> str:
        if self.b == 0:
            return str(self.a)
        radical = f"{abs(self.b)}*sqrt({self.d})" if abs(self.b) != 1 else f"sqrt({self.d})"
        if self.a == 0:
            return radical if self.b > 0 else f"-{radical}"
        op = "+" if self.b > 0 else "-"
        return f"{self.a} {op} {radical}"


def _as_exact(x) -> QuadExact:
    if isinstance(x, QuadExact):
        return x
    return QuadExact.rational(Fraction(x))


def residue_invariant(m1, m2):
    """(1 - m1^2)(1 - m2^2) - 2 m1 m2, exactly.

    This is the residue of f(z) dz/z at 0, equal to the z^2 coefficient of
    (z - m1)(z - m2)(m1 z + 1)(m2 z + 1), i.e. 1 - (m1+m2)^2 + (m1 m2)^2.
    Accepts Fractions, ints, or QuadExact values.
    """
    return (1 - m1 * m1) * (1 - m2 * m2) - 2 * m1 * m2


def solve_m2(m1) -> tuple[QuadExact, QuadExact]:
    """Exact roots m2 of (m1^2 - 1) m2^2 - 2 m1 m2 + (1 - m1^2) = 0.

    Both returned roots satisfy residue_invariant(m1, root) = 0 exactly.
    Raises NoValidRootError when m1^2 = 1 (the quadratic degenerates and
    the surviving linear root m2 = 0 is not a zero of f).
    """
    m1 = Fraction(m1)
    lead = m1 * m1 - 1
    if lead == 0:
        raise NoValidRootError(
            "m1^2 = 1 degenerates the quadratic; its root m2 = 0 is rejected"
        )
    # roots (m1 +- sqrt(m1^2 + lead^2)) / lead
    s, d = _exact_sqrt(m1 * m1 + lead * lead)
    plus = QuadExact(m1 / lead, s / lead, d)
    minus = QuadExact(m1 / lead, -s / lead, d)
    return plus, minus


@dataclass(frozen=True)
class MultiplierParams:
    """Exact data of the multiplier: parameters, band coefficients, zeros."""

    m1: QuadExact
    m2: QuadExact
    b: tuple[QuadExact, ...]  # b_{-2} .. b_{2}
    zeros: tuple[QuadExact, ...]  # m1, m2, -1/m1, -1/m2
    degree: int = 2

    def coefficient(self, n: int) -> QuadExact:
        if abs(n) > self.degree:
            raise IndexError(f"index {n} outside band {self.degree}")
        return self.b[n + self.degree]

    @property
    def residue(self) -> QuadExact:
        return self.coefficient(0)

    @property
    def zero_moduli(self) -> tuple[QuadExact, ...]:
        return tuple(abs(z) for z in self.zeros)

    def unit_circle_zero_free(self) -> bool:
        """Exact check of f != 0 on |z| = 1: no (real) zero equals +-1."""
        return all(z != 1 and z != -1 for z in self.zeros)

    def min_outer_zero_modulus(self) -> QuadExact:
        outer = [m for m in self.zero_moduli if m > 1]
        return min(outer)

    def to_series(self, r_in: float, r_out: float) -> LaurentCoefficients:
        """Materialize the coefficients as floats on an explicit annulus.

        Exact zeros map to exact 0.0 (in particular b_0 for residue-free
        parameters), so the structural cancellations survive the cast.
        """
        arr = np.array([complex(float(c)) for c in self.b], dtype=np.complex128)
        return LaurentCoefficients(arr, self.degree, r_in, r_out)

    def evaluate_many(self, zs) -> np.ndarray:
        """Direct rational evaluation (z-m1)(z-m2)(m1 z+1)(m2 z+1)/z^2."""
        zs = np.asarray(zs, dtype=np.complex128)
        m1, m2 = float(self.m1), float(self.m2)
        return (zs - m1) * (zs - m2) * (m1 * zs + 1) * (m2 * zs + 1) / zs**2

    def evaluate(self, z: complex) -> complex:
        return complex(self.evaluate_many(np.asarray([z]))[0])


def coefficients(m1, m2) -> MultiplierParams:
    """Exact band coefficients and zero list for real nonzero m1, m2."""
    m1, m2 = _as_exact(m1), _as_exact(m2)
    if m1 == 0 or m2 == 0:
        raise ParameterError("m1 and m2 must be nonzero")
    s = m1 + m2
    p = m1 * m2
    b2 = p
    b1 = s * (1 - p)
    b0 = 1 - s * s + p * p
    b = (b2, -b1, b0, b1, b2)  # indices -2 .. 2
    zeros = (m1, m2, -m1.inverse(), -m2.inverse())
    return MultiplierParams(m1=m1, m2=m2, b=b, zeros=zeros)


def annulus_bounds(
    params: MultiplierParams,
    rho: float,
    n_r: int = 64,
    n_theta: int = 512,
    inflation: float = 0.01,
) -> float:
    """c > 1 with 1/c < |f| < c on the closed annulus [1/rho, rho].

    The zero-clearance precondition is checked exactly against the zero
    list; the bound itself is a dense grid scan inflated by ``inflation``
    (the value is used for comparison reporting, not for proofs).
    """
    if rho <= 1.0:
        raise ParameterError("rho must exceed 1")
    rho_exact = Fraction(rho)
    inner = 1 / rho_exact
    for z, mod in zip(params.zeros, params.zero_moduli):
        if inner <= mod <= rho_exact:
            raise ZeroInAnnulusError(
                f"zero {z} (modulus {float(mod):.6g}) lies in the closed "
                f"annulus [1/{rho:.6g}, {rho:.6g}]"
            )
    radii = np.geomspace(1.0 / rho, rho, n_r)
    angles = np.exp(2j * np.pi * np.arange(n_theta) / n_theta)
    grid = np.outer(radii, angles).ravel()
    mags = np.abs(params.evaluate_many(grid))
    c = max(float(np.max(mags)), 1.0 / float(np.min(mags))) * (1.0 + inflation)
    return c
