"""Integration of the immersion X = Re(integral of Psi), its certificates,
and the omitted-value report of the Gauss map.

Exactness of the Psi_j (vanishing residues) makes the primitives F_j
single-valued on the annulus, so X(z) = Re(F(z) - F(1)) is well defined
with X(1) = 0.  Form symmetry gives F(-1/conj(z)) = conj(F(z)) termwise,
hence X(I(z)) = X(z): the immersion descends to the quotient by the
involution.  The components of X are real parts of holomorphic functions,
so they are harmonic; the five-point Laplacian defect is pure second-order
finite-difference error and must shrink by ~4 when the step halves.

The Gauss map of the constructed triple is z -> z^k, whose image on
A(rho) is the annulus A(R); the report quantifies the omitted set
{alpha, beta, -1/conj(alpha), -1/conj(beta)}, its pairing into two
antipodal classes, and the clearance between image and omitted points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .errors import ParameterError
from .laurent import FormOnAnnulus, LaurentCoefficients
from .punctured_sphere import PunctureConfig
from .weierstrass import WeierstrassTriple, gauss_map_many, metric_density


@dataclass(frozen=True)
class ImmersionData:
    """Primitives F_j of the Psi_j and the base-point values F_j(1)."""

    antiderivatives: tuple[LaurentCoefficients, ...]
    forms: tuple[FormOnAnnulus, ...]
    base_values: np.ndarray
    base_point: complex = 1.0 + 0j

    @property
    def annulus(self) -> tuple[float, float]:
        return self.antiderivatives[0].annulus

    def complex_potentials(self, zs) -> np.ndarray:
        """F_j(z) - F_j(1), shape (3,) + shape(zs)."""
        zs = np.asarray(zs, dtype=np.complex128)
        return np.stack(
            [
                F.evaluate_many(zs) - self.base_values[j]
                for j, F in enumerate(self.antiderivatives)
            ]
        )

    def position_many(self, zs) -> np.ndarray:
        """X(z) in R^3; shape = shape(zs) + (3,)."""
        pots = self.complex_potentials(zs)
        return np.moveaxis(np.real(pots), 0, -1)

    def position(self, z: complex) -> np.ndarray:
        return self.position_many(np.asarray([z], dtype=np.complex128))[0]


def integrate(psi, res_rtol: float = 1e-12) -> ImmersionData:
    """Antidifferentiate the three forms and normalize X(1) = 0.

    Raises NonExactFormError (from the antiderivative) when any residue
    survives: the integral would be multivalued.
    """
    psi = tuple(psi)
    prims = tuple(form.antiderivative(rtol=res_rtol) for form in psi)
    base = np.array([F.evaluate(1.0 + 0j) for F in prims], dtype=np.complex128)
    return ImmersionData(antiderivatives=prims, forms=psi, base_values=base)


def paired_samples(
    r_in: float, r_out: float, n_r: int = 25, n_theta: int = 20, depth: float = 0.4
) -> np.ndarray:
    """Deterministic grid of sample points for involution-compatibility
    checks, at the certification depth where the truncated coefficients
    resolve the primitives; the annulus is involution-invariant, so the
    partner points -1/conj(z) lie inside automatically."""
    radii = np.exp(
        np.linspace(depth * math.log(r_in), depth * math.log(r_out), n_r)
    )
    angles = np.exp(2j * np.pi * np.arange(n_theta) / n_theta)
    return np.outer(radii, angles).ravel()


def involution_compat_defect(imm: ImmersionData, samples) -> float:
    """max over samples of ||X(-1/conj(z)) - X(z)||."""
    zs = np.asarray(samples, dtype=np.complex128)
    partner = -1.0 / np.conj(zs)
    diff = imm.position_many(partner) - imm.position_many(zs)
    return float(np.max(np.linalg.norm(diff, axis=-1)))


def _five_point_laplacian(imm: ImmersionData, h: float, zs: np.ndarray) -> np.ndarray:
    x0 = imm.position_many(zs)
    stencil = (
        imm.position_many(zs + h)
        + imm.position_many(zs - h)
        + imm.position_many(zs + 1j * h)
        + imm.position_many(zs - 1j * h)
    )
    return (stencil - 4.0 * x0) / (h * h)


def harmonicity_defect(imm: ImmersionData, h: float, points) -> float:
    """Worst five-point discrete-Laplacian norm of X, divided by the
    squared metric density.

    Dividing the flat Laplacian by lambda^2 turns it into the
    Laplace-Beltrami operator of the induced metric, so the figure is the
    discrete mean-curvature residual of the surface.  For harmonic
    components the continuous value vanishes and the stencil leaves only
    the O(h^2) truncation term.
    """
    zs = np.asarray(points, dtype=np.complex128)
    lap = _five_point_laplacian(imm, h, zs)
    scale = metric_density(WeierstrassTriple.from_forms(imm.forms), zs)
    return float(np.max(np.linalg.norm(lap, axis=-1) / scale**2))


def harmonicity_residual(imm: ImmersionData, h: float, points) -> float:
    """Richardson-extrapolated Laplacian residual, scaled by lambda^2.

    Combining the stencils at h and h/2 pointwise as (4 L_{h/2} - L_h)/3
    cancels the O(h^2) truncation term, so what survives is genuine
    non-harmonicity plus an O(h^4) remainder.  Unlike the plain defect,
    whose magnitude tracks the configuration's fourth-derivative scale,
    this residual is small for every harmonic immersion.
    """
    zs = np.asarray(points, dtype=np.complex128)
    extrapolated = (
        4.0 * _five_point_laplacian(imm, h / 2.0, zs)
        - _five_point_laplacian(imm, h, zs)
    ) / 3.0
    scale = metric_density(WeierstrassTriple.from_forms(imm.forms), zs)
    return float(np.max(np.linalg.norm(extrapolated, axis=-1) / scale**2))


def harmonicity_grid(
    r_in: float,
    r_out: float,
    h: float,
    n_r: int = 8,
    n_theta: int = 16,
    depth: float = 0.4,
) -> np.ndarray:
    """Interior grid at the certification depth, leaving room for the
    stencil arms of width h."""
    if r_in * (1.0 + 4.0 * h) >= r_out * (1.0 - 4.0 * h):
        raise ParameterError(
            f"step {h} leaves no room for the stencil inside ({r_in}, {r_out})"
        )
    lo = math.log(r_in * (1.0 + 4.0 * h))
    hi = math.log(r_out * (1.0 - 4.0 * h))
    radii = np.exp(np.linspace(depth * lo, depth * hi, n_r))
    angles = np.exp(2j * np.pi * np.arange(n_theta) / n_theta)
    return np.outer(radii, angles).ravel()


def unit_circle_periods(psi, n: int = 4096) -> np.ndarray:
    """Trapezoid quadrature of each Psi_j around |z| = 1 (dz/z = i dtheta).

    Exact forms have no periods; the full complex value is returned so the
    caller can confirm both parts vanish.
    """
    zs = np.exp(2j * np.pi * np.arange(n) / n)
    out = []
    for form in psi:
        vals = form.phi.evaluate_many(zs)
        out.append(1j * (2.0 * np.pi / n) * np.sum(vals))
    return np.array(out, dtype=np.complex128)


def _exact_modulus(q: complex) -> Optional[Fraction]:
    """|q| as an exact Fraction when sqrt(re^2 + im^2) is rational
    (e.g. axis-aligned punctures); None otherwise."""
    m2 = Fraction(q.real) ** 2 + Fraction(q.imag) ** 2
    num, den = m2.numerator, m2.denominator
    rn, rd = math.isqrt(num), math.isqrt(den)
    if rn * rn == num and rd * rd == den:
        return Fraction(rn, rd)
    return None


def chordal_distance(p: complex, q: complex) -> float:
    """Distance of stereographic images on the unit sphere:
    2|p - q| / sqrt((1 + |p|^2)(1 + |q|^2))."""
    return 2.0 * abs(p - q) / math.sqrt((1.0 + abs(p) ** 2) * (1.0 + abs(q) ** 2))


@dataclass(frozen=True)
class OmittedPoint:
    point: complex
    clearance: float
    clearance_exact: Optional[Fraction]
    chordal_clearance: float
    sampled_min_distance: Optional[float]


@dataclass(frozen=True)
class GaussReport:
    """Omitted values of the composed Gauss map z -> z^k on A(rho)."""

    omitted: tuple[OmittedPoint, ...]
    projective_classes: tuple[tuple[complex, complex], ...]
    n_projective_classes: int
    image_modulus_range: Optional[tuple[float, float]]
    R: float

    @property
    def image_in_closed_annulus(self) -> bool:
        if self.image_modulus_range is None:
            return True
        lo, hi = self.image_modulus_range
        eps = 1e-9
        return lo >= 1.0 / self.R - eps and hi <= self.R + eps

    @property
    def clearances_respected(self) -> bool:
        eps = 1e-9
        return all(
            p.sampled_min_distance is None
            or p.sampled_min_distance >= p.clearance - eps
            for p in self.omitted
        )


def _clearance(q: complex, R: float) -> tuple[float, Optional[Fraction]]:
    """Euclidean distance from q to the closed annulus {1/R <= |w| <= R}:
    |q| - R outside, 1/R - |q| inside the hole.  Exact when |q| and R are
    exactly representable rationals."""
    Rf = Fraction(R)
    exact_mod = _exact_modulus(q)
    if exact_mod is not None:
        exact = exact_mod - Rf if exact_mod > Rf else 1 / Rf - exact_mod
        return float(exact), exact
    mod = abs(q)
    return (mod - R) if mod > R else (1.0 / R - mod), None


def gauss_samples(r_in: float, r_out: float, n: int = 10000, inset: float = 0.02) -> np.ndarray:
    """Near-full-annulus grid; the inset is applied in log scale so that
    arbitrarily thin annuli keep a valid, non-inverted sample range."""
    side = max(2, int(math.isqrt(n)))
    lo = (1.0 - inset) * math.log(r_in)
    hi = (1.0 - inset) * math.log(r_out)
    radii = np.exp(np.linspace(lo, hi, side))
    angles = np.exp(2j * np.pi * np.arange(side) / side)
    return np.outer(radii, angles).ravel()


def gauss_report(
    config: PunctureConfig,
    k: int,
    R: float,
    psi=None,
    n_samples: int = 10000,
    inset: float = 0.02,
) -> GaussReport:
    """Omitted set, antipodal pairing, and clearance diagnostics.

    The image of z -> z^k on A(R^(1/k)) is exactly A(R), so the analytic
    clearance to an omitted point q is its distance to the closed annulus.
    When the Psi forms are supplied, the actual ratio -(Psi_1 + i Psi_2)/
    Psi_3 is sampled on a mesh-like grid and its distances to the omitted
    points and its modulus range are reported.
    """
    punctures = config.punctures
    classes = ((punctures[0], punctures[2]), (punctures[1], punctures[3]))
    # count distinct antipodal orbits (2 unless orbits collide, which
    # validation excludes)
    reps: list[tuple[complex, complex]] = []
    for q in punctures:
        if not any(abs(q - r) < 1e-12 for rep in reps for r in rep):
            reps.append((q, -1.0 / q.conjugate()))
    g_vals = None
    mod_range = None
    if psi is not None:
        rho_in, rho_out = psi[0].annulus
        zs = gauss_samples(rho_in, rho_out, n_samples, inset)
        g_vals = gauss_map_many(WeierstrassTriple.from_forms(psi), zs)
        mods = np.abs(g_vals)
        mod_range = (float(np.min(mods)), float(np.max(mods)))
    omitted = []
    for q in punctures:
        clear, clear_exact = _clearance(q, R)
        nearest = q / abs(q) * (R if abs(q) > R else 1.0 / R)
        sampled = (
            float(np.min(np.abs(g_vals - q))) if g_vals is not None else None
        )
        omitted.append(
            OmittedPoint(
                point=q,
                clearance=clear,
                clearance_exact=clear_exact,
                chordal_clearance=chordal_distance(q, nearest),
                sampled_min_distance=sampled,
            )
        )
    return GaussReport(
        omitted=tuple(omitted),
        projective_classes=classes,
        n_projective_classes=len(reps),
        image_modulus_range=mod_range,
        R=R,
    )
