"""Truncated Laurent-series calculus on annuli.

A series is stored as a dense coefficient band a_n, n in [-N, N], together
with the annulus r_in < |z| < r_out on which it represents an analytic
function.  Everything downstream (restriction of the punctured-sphere data,
the multiplier product, the power-cover pullback, residues, antiderivatives)
is built on these coefficients.

Two symmetry conditions relative to the fixed-point-free antiholomorphic
involution I(z) = -1/conj(z) recur throughout:

* function symmetry, a_{-n} = (-1)^n conj(a_n), equivalent to
  f(I(z)) = conj(f(z));
* form symmetry, a_{-n} = (-1)^(n+1) conj(a_n)  (so a_0 is purely
  imaginary), equivalent to I*(phi dz/z) = conj(phi dz/z).

Both are checked coefficient-by-coefficient; the unit circle must lie in
the annulus for either to be meaningful.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NonExactFormError

# Relative residue tolerance: a form counts as exact when its index-0
# coefficient is below this fraction of the largest coefficient, so that
# rescaling the data cannot flip the verdict.
RESIDUE_RTOL = 1e-12


@dataclass(frozen=True)
class LaurentCoefficients:
    """Coefficients of sum_{|n| <= band} a_n z^n on r_in < |z| < r_out.

    ``coeffs[n + band]`` holds a_n.  Instances are immutable; the backing
    array is marked read-only.
    """

    coeffs: np.ndarray
    band: int
    r_in: float
    r_out: float

    def __post_init__(self) -> None:
        arr = np.ascontiguousarray(self.coeffs, dtype=np.complex128)
        if self.band < 0:
            raise ValueError("band must be >= 0")
        if arr.shape != (2 * self.band + 1,):
            raise ValueError(
                f"expected {2 * self.band + 1} coefficients, got {arr.shape}"
            )
        if not np.all(np.isfinite(arr.view(np.float64))):
            raise ValueError("non-finite coefficient")
        if not (0.0 < self.r_in < self.r_out):
            raise ValueError(f"invalid annulus ({self.r_in}, {self.r_out})")
        arr.setflags(write=False)
        object.__setattr__(self, "coeffs", arr)

    @classmethod
    def from_coeff_dict(
        cls,
        entries: dict[int, complex],
        band: int | None = None,
        r_in: float = 0.5,
        r_out: float = 2.0,
    ) -> "LaurentCoefficients":
        if band is None:
            band = max((abs(n) for n in entries), default=0)
        arr = np.zeros(2 * band + 1, dtype=np.complex128)
        for n, c in entries.items():
            if abs(n) > band:
                raise ValueError(f"index {n} outside band {band}")
            arr[n + band] = c
        return cls(arr, band, r_in, r_out)

    @property
    def annulus(self) -> tuple[float, float]:
        return (self.r_in, self.r_out)

    def coeff(self, n: int) -> complex:
        """a_n, with indices outside the band implicitly zero."""
        if abs(n) > self.band:
            return 0j
        return complex(self.coeffs[n + self.band])

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.coeffs))) if self.band >= 0 else 0.0

    def contains(self, z: complex) -> bool:
        return self.r_in < abs(z) < self.r_out

    def evaluate(self, z: complex) -> complex:
        """sum a_n z^n, accumulated in ascending index order."""
        return complex(self.evaluate_many(np.asarray([z], dtype=np.complex128))[0])

    def evaluate_many(self, zs) -> np.ndarray:
        zs = np.asarray(zs, dtype=np.complex128)
        r = np.abs(zs)
        if np.any(r <= self.r_in) or np.any(r >= self.r_out):
            raise DomainError(
                f"evaluation point outside annulus ({self.r_in}, {self.r_out})"
            )
        acc = np.zeros_like(zs)
        zpow = zs ** (-self.band)
        for c in self.coeffs:  # ascending index: deterministic summation
            acc = acc + c * zpow
            zpow = zpow * zs
        return acc

    def multiply(self, other: "LaurentCoefficients") -> "LaurentCoefficients":
        """Coefficient convolution; bands add, annuli intersect."""
        lo = max(self.r_in, other.r_in)
        hi = min(self.r_out, other.r_out)
        if not lo < hi:
            raise DomainError("annuli of the factors are disjoint")
        conv = np.convolve(self.coeffs, other.coeffs)
        return LaurentCoefficients(conv, self.band + other.band, lo, hi)

    def scaled(self, c: complex) -> "LaurentCoefficients":
        return LaurentCoefficients(self.coeffs * c, self.band, self.r_in, self.r_out)

    def __mul__(self, other):
        if isinstance(other, LaurentCoefficients):
            return self.multiply(other)
        if isinstance(other, (int, float, complex)):
            return self.scaled(other)
        return NotImplemented

    __rmul__ = __mul__

    def pullback_power(self, k: int) -> "LaurentCoefficients":
        """Substitute z -> z^k: coefficient a_n moves to index k*n.

        Radii become k-th roots.  Note this is the substitution on the
        coefficient family only; pulling back a 1-form phi dz/z in addition
        picks up the Jacobian factor k (see FormOnAnnulus.pullback_power).
        """
        if k < 1:
            raise ValueError("k must be a positive integer")
        out = np.zeros(2 * k * self.band + 1, dtype=np.complex128)
        out[::k] = self.coeffs
        return LaurentCoefficients(
            out, k * self.band, self.r_in ** (1.0 / k), self.r_out ** (1.0 / k)
        )

    def symmetry_defect(self, mode: str) -> float:
        """Worst deviation from function or form symmetry over n >= 0.

        function: max |a_{-n} - (-1)^n   conj(a_n)|
        form:     max |a_{-n} - (-1)^(n+1) conj(a_n)|   (n = 0 gives
                  |a_0 + conj(a_0)|, i.e. a_0 purely imaginary)
        """
        if not (self.r_in < 1.0 < self.r_out):
            raise DomainError("unit circle must lie inside the annulus")
        if mode == "function":
            parity = 0
        elif mode == "form":
            parity = 1
        else:
            raise ValueError(f"unknown symmetry mode {mode!r}")
        worst = 0.0
        for n in range(self.band + 1):
            sign = -1.0 if (n + parity) % 2 else 1.0
            d = abs(self.coeff(-n) - sign * self.coeff(n).conjugate())
            worst = max(worst, d)
        return worst


@dataclass(frozen=True)
class FormOnAnnulus:
    """Holomorphic 1-form written phi(z) dz/z with truncated Laurent phi.

    In this normalization the residue at 0 is the index-0 coefficient of
    phi, and the form is exact precisely when that coefficient vanishes.
    """

    phi: LaurentCoefficients

    @property
    def annulus(self) -> tuple[float, float]:
        return self.phi.annulus

    def residue(self) -> complex:
        return self.phi.coeff(0)

    def density(self, z: complex) -> complex:
        """dz-density phi(z)/z."""
        return self.phi.evaluate(z) / z

    def density_many(self, zs) -> np.ndarray:
        zs = np.asarray(zs, dtype=np.complex128)
        return self.phi.evaluate_many(zs) / zs

    def antiderivative(self, rtol: float = RESIDUE_RTOL) -> LaurentCoefficients:
        """Primitive F with F_n = a_n / n (n != 0), F_0 = 0.

        Raises NonExactFormError unless |a_0| <= rtol * max|a_n|: a
        surviving residue is a logarithmic obstruction to exactness.
        """
        scale = self.phi.max_abs()
        res = self.residue()
        if abs(res) > rtol * scale:
            raise NonExactFormError(
                f"residue {res!r} exceeds {rtol} * max|a_n| = {rtol * scale:.3e}"
            )
        band = self.phi.band
        ns = np.arange(-band, band + 1, dtype=np.float64)
        ns[band] = 1.0  # avoid 0/0; F_0 set to zero below
        prim = self.phi.coeffs / ns
        prim[band] = 0j
        return LaurentCoefficients(prim, band, self.phi.r_in, self.phi.r_out)

    def pullback_power(self, k: int) -> "FormOnAnnulus":
        """Pull back under z -> z^k, including the Jacobian factor k."""
        return FormOnAnnulus(self.phi.pullback_power(k).scaled(float(k)))

    def symmetry_defect(self) -> float:
        return self.phi.symmetry_defect("form")

    def multiply_series(self, series: LaurentCoefficients) -> "FormOnAnnulus":
        return FormOnAnnulus(self.phi.multiply(series))
