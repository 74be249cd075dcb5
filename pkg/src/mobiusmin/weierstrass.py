"""Weierstrass-representation machinery for triples of holomorphic 1-forms.

A triple (Phi_1, Phi_2, Phi_3) encodes a minimal immersion X = Re(integral)
when it is conformal (sum of squares vanishes) and regular (sum of squared
moduli positive).  Triples come in two representations:

* "laurent": three FormOnAnnulus values (phi_j dz/z with truncated series);
* "analytic": three pointwise dz-density evaluators, typically built from a
  Weierstrass pair via phi_1 = eta (1-g^2)/2, phi_2 = i eta (1+g^2)/2,
  phi_3 = eta g.

The Gauss map is recovered as -(Phi_1 + i Phi_2)/Phi_3; when the triple was
built from a pair, that ratio collapses to g, which is also used directly
at zeros of Phi_3.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import RegularityError
from .laurent import FormOnAnnulus


@dataclass(frozen=True)
class WeierstrassTriple:
    forms: Optional[tuple[FormOnAnnulus, FormOnAnnulus, FormOnAnnulus]] = None
    density_fns: Optional[tuple[Callable, Callable, Callable]] = None
    gauss_fn: Optional[Callable] = None
    eta_fn: Optional[Callable] = None

    def __post_init__(self):
        if (self.forms is None) == (self.density_fns is None):
            raise ValueError("exactly one representation must be supplied")

    @property
    def kind(self) -> str:
        return "laurent" if self.forms is not None else "analytic"

    @classmethod
    def from_forms(cls, forms) -> "WeierstrassTriple":
        f1, f2, f3 = forms
        return cls(forms=(f1, f2, f3))

    @classmethod
    def from_pair(cls, g: Callable, eta_density: Callable) -> "WeierstrassTriple":
        d1 = lambda z: 0.5 * (1.0 - g(z) ** 2) * eta_density(z)
        d2 = lambda z: 0.5j * (1.0 + g(z) ** 2) * eta_density(z)
        d3 = lambda z: g(z) * eta_density(z)
        return cls(density_fns=(d1, d2, d3), gauss_fn=g, eta_fn=eta_density)

    def densities_at(self, zs) -> np.ndarray:
        """dz-densities, shape (3,) + shape(zs)."""
        zs = np.asarray(zs, dtype=np.complex128)
        if self.forms is not None:
            return np.stack([f.density_many(zs) for f in self.forms])
        return np.stack(
            [np.asarray(fn(zs), dtype=np.complex128) for fn in self.density_fns]
        )

    def phi_values_at(self, zs) -> np.ndarray:
        """phi_j(z) = z * density_j(z); for the laurent representation this
        evaluates the stored series directly."""
        zs = np.asarray(zs, dtype=np.complex128)
        if self.forms is not None:
            return np.stack([f.phi.evaluate_many(zs) for f in self.forms])
        return self.densities_at(zs) * zs


def forms_from_pair(g: Callable, eta_density: Callable) -> WeierstrassTriple:
    """Triple (eta(1-g^2)/2, i eta(1+g^2)/2, eta g) as pointwise evaluators."""
    return WeierstrassTriple.from_pair(g, eta_density)


def gauss_map(triple: WeierstrassTriple, z: complex):
    """-(Phi_1 + i Phi_2)/Phi_3 at z; math.inf when Phi_3 = 0 only.

    At a zero of Phi_3 the ratio is evaluated through the pair
    representation when available (g itself); a common zero of all three
    densities is a regularity failure.
    """
    d1, d2, d3 = (complex(v) for v in triple.densities_at(z).ravel())
    if d3 == 0:
        if triple.gauss_fn is not None:
            return complex(triple.gauss_fn(complex(z)))
        if d1 == 0 and d2 == 0:
            raise RegularityError(f"all three densities vanish at {z}")
        return math.inf
    return -(d1 + 1j * d2) / d3


def gauss_map_many(triple: WeierstrassTriple, zs) -> np.ndarray:
    d = triple.densities_at(zs)
    return -(d[0] + 1j * d[1]) / d[2]


def conformality_defect(triple: WeierstrassTriple, samples) -> float:
    """max over samples of |sum Phi_j^2| / (sum |Phi_j|)^2 (scale-free).

    Samples where all three densities vanish contribute zero; regularity
    checks flag those separately.
    """
    d = triple.densities_at(samples)
    num = np.abs(np.sum(d * d, axis=0))
    den = np.sum(np.abs(d), axis=0) ** 2
    ratio = np.divide(num, den, out=np.zeros_like(num), where=den > 0)
    return float(np.max(ratio))


def metric_density(triple: WeierstrassTriple, zs):
    """lambda with ds = lambda |dz|: sqrt(sum |density_j|^2), which for the
    laurent representation equals sqrt(sum |phi_j(z)|^2)/|z|."""
    d = triple.densities_at(zs)
    out = np.sqrt(np.sum(np.abs(d) ** 2, axis=0))
    if np.ndim(zs) == 0:
        return float(out.ravel()[0])
    return out


def regularity_min(triple: WeierstrassTriple, samples) -> float:
    """min over samples of sum |phi_j(z)|^2 (laurent) or sum |density_j|^2
    (analytic); positivity certifies the immersion is unbranched there."""
    if triple.forms is not None:
        v = triple.phi_values_at(samples)
    else:
        v = triple.densities_at(samples)
    return float(np.min(np.sum(np.abs(v) ** 2, axis=0)))
