"""Punctured-sphere data: validation, involution identities, restriction,
the partial-fraction oracle, completeness probes."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mobiusmin.errors import (
    DomainError,
    InvalidPunctureError,
    ParameterError,
    PoleError,
    UnitAnnulusError,
)
from mobiusmin.punctured_sphere import (
    analytic_coefficients,
    completeness_probe,
    eta_residues,
    involution_defect,
    restrict_to_annulus,
    validate_punctures,
)

ALPHA, BETA = 2 + 0j, 3j


# --------------------------------------------------------------- validation

def test_standard_pair_accepted():
    cfg = validate_punctures(ALPHA, BETA)
    assert cfg.alpha == ALPHA and cfg.beta == BETA


def test_coincident_rejected():
    with pytest.raises(InvalidPunctureError):
        validate_punctures(2, 2)


def test_antipodal_coincidence_rejected():
    with pytest.raises(InvalidPunctureError):
        validate_punctures(2, -0.5)  # beta = -1/conj(alpha)


def test_zero_rejected():
    with pytest.raises(InvalidPunctureError):
        validate_punctures(0, 3j)


def test_unit_modulus_rejected():
    with pytest.raises(UnitAnnulusError):
        validate_punctures(1, 3j)
    with pytest.raises(UnitAnnulusError):
        validate_punctures(2, 0.5j)


outside_disc = st.complex_numbers(
    min_magnitude=1.001, max_magnitude=50.0, allow_nan=False, allow_infinity=False
)


@given(outside_disc, outside_disc)
@settings(max_examples=60, deadline=None)
def test_puncture_set_closed_under_involution(alpha, beta):
    try:
        cfg = validate_punctures(alpha, beta)
    except InvalidPunctureError:
        return
    punctures = cfg.punctures
    for p in punctures:
        image = -1.0 / p.conjugate()
        assert min(abs(image - q) for q in punctures) < 1e-9 * (1 + abs(image))


# --------------------------------------------------------------- evaluation

def test_eta_density_at_origin(sphere):
    # denominator at 0 is (-alpha)(-beta) = alpha beta = 6i; i/(6i) = 1/6
    assert sphere.eta_density(0) == pytest.approx(1 / 6)


def test_phi3_density_vanishes_at_origin(sphere):
    _, (d1, d2, d3) = sphere.densities(0)
    assert d3 == 0


def test_conformality_identity_of_densities(sphere):
    rng = np.random.default_rng(3)
    zs = rng.uniform(0.2, 1.4, 200) * np.exp(2j * np.pi * rng.uniform(size=200))
    _, dens = sphere.form_densities_many(zs)
    total = sum(d * d for d in dens)
    scale = sum(np.abs(d) for d in dens) ** 2
    assert np.max(np.abs(total) / scale) < 1e-14


def test_pole_rejected(sphere):
    with pytest.raises(PoleError):
        sphere.densities(ALPHA)


def test_regularity_on_grid_and_at_infinity(sphere):
    rng = np.random.default_rng(11)
    zs = rng.uniform(0.05, 1.45, 199) * np.exp(2j * np.pi * rng.uniform(size=199))
    _, dens = sphere.form_densities_many(zs)
    total = sum(np.abs(d) ** 2 for d in dens)
    assert np.min(total) > 0
    (d1, d2, d3), _ = sphere.infinity_chart_densities(0.0)
    assert abs(d1) ** 2 + abs(d2) ** 2 + abs(d3) ** 2 > 0
    expected = 1.0 / (2 * abs(ALPHA) * abs(BETA))
    assert abs(d1) == pytest.approx(expected)
    assert abs(d2) == pytest.approx(expected)
    assert d3 == 0


# ---------------------------------------------------------------- involution

def test_gauss_involution_identity_is_exact(sphere):
    z = 1 + 1j
    iz = -1.0 / np.conj(z)
    assert iz + 1.0 / np.conj(z) == 0


def test_involution_defect_small_on_annulus(sphere):
    rng = np.random.default_rng(5)
    zs = rng.uniform(1 / 1.5, 1.5, 100) * np.exp(2j * np.pi * rng.uniform(size=100))
    assert involution_defect(sphere, zs) < 1e-12


def test_involution_defect_symmetric_under_involution(sphere):
    rng = np.random.default_rng(6)
    zs = rng.uniform(0.8, 1.3, 50) * np.exp(2j * np.pi * rng.uniform(size=50))
    d1 = involution_defect(sphere, zs)
    d2 = involution_defect(sphere, -1.0 / np.conj(zs))
    assert abs(d1 - d2) < 1e-12


# --------------------------------------------------------------- restriction

def test_restriction_form_symmetry(base_forms):
    for form in base_forms:
        assert form.symmetry_defect() < 1e-10


def test_restriction_decay_ratio(base_forms):
    # nearest singularities at |alpha| = 2 and 1/|alpha| = 0.5
    phi = base_forms[2].phi
    ratios = [abs(phi.coeff(n + 1) / phi.coeff(n)) for n in range(30, 47)]
    assert np.allclose(ratios, 0.5, atol=0.01)
    ratios_neg = [abs(phi.coeff(-n - 1) / phi.coeff(-n)) for n in range(30, 47)]
    assert np.allclose(ratios_neg, 0.5, atol=0.01)


def test_restriction_stable_under_oversampling(sphere, base_forms):
    finer = restrict_to_annulus(sphere, 1.5, 48, 8192)
    coarser = restrict_to_annulus(sphere, 1.5, 48, 2048)
    for f_ref, f_alt in zip(base_forms, coarser):
        assert np.max(np.abs(f_ref.phi.coeffs - f_alt.phi.coeffs)) < 1e-12
    for f_ref, f_alt in zip(base_forms, finer):
        assert np.max(np.abs(f_ref.phi.coeffs - f_alt.phi.coeffs)) < 1e-12


def test_restriction_rejects_bad_radius(sphere):
    with pytest.raises(DomainError):
        restrict_to_annulus(sphere, 2.5, 48, 4096)
    with pytest.raises(DomainError):
        restrict_to_annulus(sphere, 0.9, 48, 4096)


def test_restriction_rejects_bad_sampling(sphere):
    with pytest.raises(ParameterError):
        restrict_to_annulus(sphere, 1.5, 48, 100)  # not a power of two
    with pytest.raises(ParameterError):
        restrict_to_annulus(sphere, 1.5, 48, 128)  # < 4 N


def test_restriction_flushes_unresolvable_tail(sphere):
    # band far beyond the geometric decay: those entries would be pure
    # sampling noise, amplified by |z|^n near the boundary, so they must
    # come back as exact zeros while resolvable entries survive
    forms = restrict_to_annulus(sphere, 1.5, 96, 4096)
    phi = forms[2].phi
    assert phi.coeff(96) == 0
    assert phi.coeff(-96) == 0
    assert abs(phi.coeff(48)) > 0


def test_restriction_matches_density_on_circle(sphere, base_forms):
    zs = 1.2 * np.exp(2j * np.pi * np.arange(64) / 64)
    _, dens = sphere.form_densities_many(zs)
    for form, d in zip(base_forms, dens):
        assert np.max(np.abs(form.phi.evaluate_many(zs) - zs * d)) < 1e-9


# ------------------------------------------------------------ analytic route

def test_eta_residues_sum_to_zero(sphere):
    assert abs(sum(eta_residues(sphere))) < 1e-14


def test_analytic_matches_dft(sphere, base_forms):
    analytic = analytic_coefficients(sphere, 48)
    for form, series in zip(base_forms, analytic):
        assert np.max(np.abs(form.phi.coeffs - series.coeffs)) < 1e-10


def test_analytic_constant_term_purely_imaginary(sphere):
    phi3 = analytic_coefficients(sphere, 48)[2]
    a0 = phi3.coeff(0)
    assert abs(a0.real) < 1e-13 * max(abs(a0), 1e-30)
    assert abs(a0.imag) > 0


def test_analytic_annulus_matches_pole_moduli(sphere):
    series = analytic_coefficients(sphere, 8)[0]
    assert series.r_in == pytest.approx(0.5)
    assert series.r_out == pytest.approx(2.0)


# ------------------------------------------------------- completeness probes

EPSILONS = [1e-2, 1e-3, 1e-4, 1e-5]


def test_probe_toward_puncture_log_divergent(sphere):
    lengths = completeness_probe(sphere, ALPHA, EPSILONS)
    assert all(b > a for a, b in zip(lengths, lengths[1:]))
    diffs = [b - a for a, b in zip(lengths, lengths[1:])]
    assert max(diffs) / min(diffs) < 1.10
    # closed-form tail rate: the density behaves like C/|z - alpha| with
    # C = (1 + |alpha|^2) / (2 |(alpha-beta)(conj(alpha) alpha + 1)(conj(beta) alpha + 1)|),
    # so each decade adds about C ln 10
    a, b = ALPHA, BETA
    C = (1 + abs(a) ** 2) / (
        2 * abs((a - b) * (np.conj(a) * a + 1) * (np.conj(b) * a + 1))
    )
    for d in diffs:
        assert d == pytest.approx(C * math.log(10), rel=0.10)


def test_probe_toward_regular_point_converges(sphere):
    lengths = completeness_probe(sphere, 1.2 + 0j, EPSILONS)
    diffs = [b - a for a, b in zip(lengths, lengths[1:])]
    assert all(d >= 0 for d in diffs)
    assert diffs[-1] < 0.02 * diffs[0]


def test_probe_epsilons_must_decrease(sphere):
    with pytest.raises(ParameterError):
        completeness_probe(sphere, ALPHA, [1e-3, 1e-2])


def test_probe_epsilon_vs_other_punctures(sphere):
    with pytest.raises(ParameterError):
        completeness_probe(sphere, ALPHA, [5.0, 1e-3])
