"""Explicit Weierstrass data on a four-punctured sphere, and its
restriction to an involution-invariant annulus.

The data is

    g(z) = z,
    eta  = i dz / ((z - alpha)(z - beta)(conj(alpha) z + 1)(conj(beta) z + 1)),

holomorphic away from the punctures {alpha, beta, -1/conj(alpha),
-1/conj(beta)}, a set closed under the fixed-point-free antiholomorphic
involution I(z) = -1/conj(z).  The pair satisfies

    g(I(z)) = -1/conj(g(z)),      I*(eta) = -conj(eta g^2),

which makes the three forms phi_1 = eta (1 - g^2)/2, phi_2 = i eta
(1 + g^2)/2, phi_3 = eta g transform as I*(phi_j) = conj(phi_j).

With |alpha|, |beta| > 1 the unit circle avoids the punctures, so for
1 < R < min(|alpha|, |beta|) the forms restrict to the annulus
A(R) = {1/R < |z| < R}.  Laurent coefficients of the restricted forms are
extracted two independent ways: discrete Fourier transform of boundary
samples on the unit circle, and partial-fraction decomposition over the
four simple poles followed by geometric-series expansion.  Their agreement
is one of the package's primary cross-checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import simpson

from .errors import (
    DomainError,
    InvalidPunctureError,
    ParameterError,
    PoleError,
    UnitAnnulusError,
)
from .laurent import FormOnAnnulus, LaurentCoefficients

_COINCIDENCE_RTOL = 1e-12
_POLE_GUARD = 1e-12


def _close(u: complex, v: complex) -> bool:
    return abs(u - v) <= _COINCIDENCE_RTOL * (1.0 + abs(u) + abs(v))


@dataclass(frozen=True)
class PunctureConfig:
    """Validated puncture pair (alpha, beta); see validate_punctures."""

    alpha: complex
    beta: complex

    @property
    def punctures(self) -> tuple[complex, complex, complex, complex]:
        a, b = self.alpha, self.beta
        return (a, b, -1.0 / a.conjugate(), -1.0 / b.conjugate())

    @property
    def min_outer_modulus(self) -> float:
        return min(abs(self.alpha), abs(self.beta))


def validate_punctures(alpha: complex, beta: complex) -> PunctureConfig:
    """Check the puncture constraints and return the validated pair.

    Rejections, in order: zero, coincident, antipodally coincident
    (beta = -1/conj(alpha)) -> InvalidPunctureError; then |alpha| <= 1 or
    |beta| <= 1 -> UnitAnnulusError (the unit circle must separate each
    puncture from its antipodal image).
    """
    alpha, beta = complex(alpha), complex(beta)
    for name, v in (("alpha", alpha), ("beta", beta)):
        if not (math.isfinite(v.real) and math.isfinite(v.imag)):
            raise InvalidPunctureError(f"{name} must be finite")
        if v == 0:
            raise InvalidPunctureError(f"{name} must be nonzero")
    if _close(alpha, beta):
        raise InvalidPunctureError("alpha and beta coincide")
    if _close(alpha, -1.0 / beta.conjugate()):
        raise InvalidPunctureError("alpha coincides with -1/conj(beta)")
    if abs(alpha) <= 1.0 or abs(beta) <= 1.0:
        raise UnitAnnulusError("punctures must satisfy |alpha|, |beta| > 1")
    return PunctureConfig(alpha, beta)


@dataclass(frozen=True)
class PuncturedSphereData:
    """Evaluators for g = z and the eta density of the punctured sphere."""

    config: PunctureConfig

    def _pole_check(self, zs: np.ndarray) -> None:
        for p in self.config.punctures:
            if np.any(np.abs(zs - p) <= _POLE_GUARD * (1.0 + abs(p))):
                raise PoleError(f"evaluation at puncture {p}")

    def eta_density_many(self, zs, check: bool = True) -> np.ndarray:
        zs = np.asarray(zs, dtype=np.complex128)
        if check:
            self._pole_check(zs)
        a, b = self.config.alpha, self.config.beta
        den = (zs - a) * (zs - b) * (np.conj(a) * zs + 1) * (np.conj(b) * zs + 1)
        return 1j / den

    def eta_density(self, z: complex) -> complex:
        return complex(self.eta_density_many(np.asarray([z]))[0])

    def gauss(self, z: complex) -> complex:
        return z

    def densities(self, z: complex) -> tuple[complex, tuple[complex, complex, complex]]:
        """(eta density, the three form densities) at a non-puncture z."""
        eta, forms = self.form_densities_many(np.asarray([z], dtype=np.complex128))
        return complex(eta[0]), tuple(complex(f[0]) for f in forms)

    def form_densities_many(self, zs, check: bool = True):
        """eta and (phi_1, phi_2, phi_3) dz-densities, vectorized."""
        zs = np.asarray(zs, dtype=np.complex128)
        eta = self.eta_density_many(zs, check=check)
        g = zs
        d1 = 0.5 * (1.0 - g * g) * eta
        d2 = 0.5j * (1.0 + g * g) * eta
        d3 = g * eta
        return eta, (d1, d2, d3)

    def infinity_chart_densities(self, w: complex):
        """Form densities (and eta) in the chart w = 1/z around infinity.

        Used for regularity scans: the point z = infinity is regular, with
        densities (i, 1, 0) / (2 conj(alpha) conj(beta)) at w = 0.
        Returns ((d1, d2, d3), eta_w).
        """
        a, b = self.config.alpha, self.config.beta
        w = complex(w)
        P = (1 - a * w) * (1 - b * w) * (a.conjugate() + w) * (b.conjugate() + w)
        if abs(P) <= _POLE_GUARD:
            raise PoleError("chart point maps to a puncture")
        eta_w = -1j * w * w / P
        d1 = -1j * (w * w - 1) / (2 * P)
        d2 = (w * w + 1) / (2 * P)
        d3 = -1j * w / P
        return (d1, d2, d3), eta_w


def involution_defect(data: PuncturedSphereData, samples) -> float:
    """Worst deviation from the two involution identities over the samples.

    For I(z) = -1/conj(z):
      |g(I(z)) + 1/conj(g(z))|  (identically zero for g = z), and
      |eta(I(z)) / conj(z)^2 + conj(eta(z) z^2)|  (pullback via
      d(-1/conj(z)) = dconj(z)/conj(z)^2).
    """
    zs = np.asarray(samples, dtype=np.complex128)
    data._pole_check(zs)
    iz = -1.0 / np.conj(zs)
    data._pole_check(iz)
    g_defect = np.abs(iz + 1.0 / np.conj(zs))
    eta_z = data.eta_density_many(zs, check=False)
    eta_iz = data.eta_density_many(iz, check=False)
    eta_defect = np.abs(eta_iz / np.conj(zs) ** 2 + np.conj(eta_z * zs * zs))
    return float(max(np.max(g_defect), np.max(eta_defect)))


# Coefficients below this fraction of the largest one are unresolvable by
# unit-circle sampling in double precision: what the DFT returns there is
# rounding noise, and noise at high indices gets amplified by |z|^band
# near the annulus boundary.  Zero is the better estimate.
NOISE_FLOOR_RTOL = 1e-16


def restrict_to_annulus(
    data: PuncturedSphereData, R: float, band: int, sample_count: int
) -> tuple[FormOnAnnulus, FormOnAnnulus, FormOnAnnulus]:
    """Restrict the three forms to A(R), extracting coefficients by DFT.

    Writing phi_j dz/z with phi_j(z) = z * (form density)_j(z), the
    coefficients a_n = (1/S) sum_s phi_j(e^{i theta_s}) e^{-i n theta_s}
    are taken on the unit circle, the involution-invariant locus, so the
    form symmetry is exact up to quadrature error.  Entries below the
    double-precision resolution of the sampling are flushed to zero.
    """
    if not 1.0 < R < data.config.min_outer_modulus:
        raise DomainError(
            f"R must satisfy 1 < R < min(|alpha|, |beta|) = "
            f"{data.config.min_outer_modulus:.6g}"
        )
    if band < 1:
        raise ParameterError("band must be >= 1")
    if sample_count < 4 * band or sample_count & (sample_count - 1):
        raise ParameterError("sample_count must be a power of two >= 4*band")
    zs = np.exp(2j * np.pi * np.arange(sample_count) / sample_count)
    _, dens = data.form_densities_many(zs)
    forms = []
    for d in dens:
        spectrum = np.fft.fft(zs * d) / sample_count
        coeffs = np.empty(2 * band + 1, dtype=np.complex128)
        for n in range(-band, band + 1):
            coeffs[n + band] = spectrum[n % sample_count]
        coeffs[np.abs(coeffs) < NOISE_FLOOR_RTOL * np.max(np.abs(coeffs))] = 0j
        forms.append(FormOnAnnulus(LaurentCoefficients(coeffs, band, 1.0 / R, R)))
    return tuple(forms)


def _pole_residues(data: PuncturedSphereData):
    """Partial-fraction residues of phi_j = N_j(z)/D(z) at the four poles.

    D(z) = (z-alpha)(z-beta)(conj(alpha) z + 1)(conj(beta) z + 1) has
    leading coefficient conj(alpha) conj(beta);
    N_1 = i(z - z^3)/2, N_2 = -(z + z^3)/2, N_3 = i z^2.
    """
    poles = data.config.punctures
    lead = data.config.alpha.conjugate() * data.config.beta.conjugate()

    def numerators(z: complex) -> tuple[complex, complex, complex]:
        return (0.5j * (z - z**3), -0.5 * (z + z**3), 1j * z * z)

    residues = []
    for i, p in enumerate(poles):
        dprime = lead
        for j, q in enumerate(poles):
            if j != i:
                dprime *= p - q
        residues.append(tuple(n / dprime for n in numerators(p)))
    return poles, residues


def eta_residues(data: PuncturedSphereData) -> list[complex]:
    """Residues of the eta density at the four poles (they sum to zero:
    the density is O(z^-4) at infinity)."""
    poles = data.config.punctures
    lead = data.config.alpha.conjugate() * data.config.beta.conjugate()
    out = []
    for i, p in enumerate(poles):
        dprime = lead
        for j, q in enumerate(poles):
            if j != i:
                dprime *= p - q
        out.append(1j / dprime)
    return out


def analytic_coefficients(
    data: PuncturedSphereData, band: int
) -> tuple[LaurentCoefficients, LaurentCoefficients, LaurentCoefficients]:
    """Laurent coefficients of phi_j by partial fractions, independently of
    any sampling.

    A simple pole at q with |q| > 1 expands as 1/(z-q) =
    -sum_{n>=0} z^n / q^{n+1} on |z| < |q| (nonnegative indices); a pole
    with |q| < 1 as sum_{n>=1} q^{n-1} z^{-n} on |z| > |q| (negative
    indices).  The annulus of validity is bounded by the nearest poles.
    """
    poles, residues = _pole_residues(data)
    outer = [abs(p) for p in poles if abs(p) > 1]
    inner = [abs(p) for p in poles if abs(p) < 1]
    r_in, r_out = max(inner), min(outer)
    series = []
    for j in range(3):
        coeffs = np.zeros(2 * band + 1, dtype=np.complex128)
        for p, res in zip(poles, residues):
            c = res[j]
            if abs(p) > 1:
                for n in range(0, band + 1):
                    coeffs[n + band] -= c / p ** (n + 1)
            else:
                for n in range(1, band + 1):
                    coeffs[-n + band] += c * p ** (n - 1)
        series.append(LaurentCoefficients(coeffs, band, r_in, r_out))
    return tuple(series)


def _path_density(data: PuncturedSphereData, zs: np.ndarray) -> np.ndarray:
    # induced length density of the punctured-sphere metric along a path:
    # ds = |eta|(1 + |z|^2)/2 |dz| for the pair (g, eta) with g = z
    return 0.5 * np.abs(data.eta_density_many(zs, check=False)) * (
        1.0 + np.abs(zs) ** 2
    )


def completeness_probe(
    data: PuncturedSphereData,
    target: complex,
    epsilons,
    quad_points: int = 4097,
) -> list[float]:
    """Metric lengths L(eps) of radial segments approaching ``target``.

    The path runs along the ray from 0 through the target, from
    |z| = |target|/2 up to distance eps from it.  Toward a puncture the
    eta density has a simple pole and L grows logarithmically, so the
    per-decade differences of L are asymptotically constant; toward a
    regular point the lengths converge.  Integration uses the
    substitution u = log(|target| - t), which flattens the singularity,
    then composite Simpson quadrature on a uniform u-grid.
    """
    target = complex(target)
    eps = [float(e) for e in epsilons]
    if any(e <= 0 for e in eps):
        raise ParameterError("epsilons must be positive")
    if any(e2 >= e1 for e1, e2 in zip(eps, eps[1:])):
        raise ParameterError("epsilons must be strictly decreasing")
    radius = abs(target)
    if radius == 0:
        raise ParameterError("target must be nonzero")
    others = [p for p in data.config.punctures if not _close(p, target)]
    if any(e >= min(abs(target - p) for p in others) for e in eps):
        raise ParameterError("epsilons must stay below the nearest other puncture")
    direction = target / radius
    t0 = radius / 2.0
    lengths = []
    for e in eps:
        if radius - e <= t0:
            raise ParameterError(f"epsilon {e} leaves no path beyond |target|/2")
        u = np.linspace(math.log(e), math.log(radius - t0), quad_points)
        t = radius - np.exp(u)
        zs = t * direction
        for p in others:
            if np.min(np.abs(zs - p)) <= _POLE_GUARD * (1.0 + abs(p)):
                raise PoleError(f"probe path passes through puncture {p}")
        integrand = _path_density(data, zs) * np.exp(u)
        lengths.append(float(simpson(integrand, x=u)))
    return lengths
