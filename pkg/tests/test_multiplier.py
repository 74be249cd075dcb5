"""Exact multiplier arithmetic: quadratic-field values, residue identity,
parameter solving, annulus bounds."""

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mobiusmin.errors import NoValidRootError, ParameterError, ZeroInAnnulusError
from mobiusmin.multiplier import (
    QuadExact,
    _square_free,
    annulus_bounds,
    coefficients,
    residue_invariant,
    solve_m2,
)

rationals = st.fractions(min_value=-8, max_value=8, max_denominator=12)
nonzero_rationals = rationals.filter(lambda r: r != 0)


ROOT_PLUS = QuadExact(Fraction(2, 3), Fraction(1, 3), 13)
ROOT_MINUS = QuadExact(Fraction(2, 3), Fraction(-1, 3), 13)


# ---------------------------------------------------------------- QuadExact

def test_square_free_decomposition():
    assert _square_free(52) == (2, 13)
    assert _square_free(1) == (1, 1)
    assert _square_free(49) == (7, 1)


def test_quad_exact_arithmetic():
    x = QuadExact(Fraction(1), Fraction(1), 13)  # 1 + sqrt(13)
    assert x * x == QuadExact(Fraction(14), Fraction(2), 13)
    assert x - x == 0
    assert x + 1 == QuadExact(Fraction(2), Fraction(1), 13)
    assert (x * x.inverse()) == 1


def test_quad_exact_ordering():
    assert ROOT_PLUS > 1
    assert ROOT_MINUS < 0
    assert abs(ROOT_MINUS) == -ROOT_MINUS
    assert float(ROOT_PLUS) == pytest.approx((2 + 13**0.5) / 3)


def test_quad_exact_radicand_fold():
    assert QuadExact(Fraction(1), Fraction(2), 1) == 3


@given(rationals, rationals, rationals, rationals)
@settings(max_examples=60, deadline=None)
def test_quad_exact_ring_identities(a1, b1, a2, b2):
    x = QuadExact(a1, b1, 13)
    y = QuadExact(a2, b2, 13)
    assert x + y == y + x
    assert x * y == y * x
    assert x * (y + 1) == x * y + x


# ---------------------------------------------------------- residue identity

def test_residue_invariant_vanishes_for_canonical_pair():
    assert residue_invariant(QuadExact.rational(2, 13), ROOT_PLUS) == 0


def test_residue_invariant_at_origin():
    assert residue_invariant(Fraction(0), Fraction(0)) == 1


def test_residue_invariant_first_factor_vanishes():
    m2 = Fraction(3, 7)
    assert residue_invariant(Fraction(1), m2) == -2 * m2


@given(nonzero_rationals, nonzero_rationals)
@settings(max_examples=60, deadline=None)
def test_series_constant_term_equals_residue_invariant(m1, m2):
    params = coefficients(m1, m2)
    assert params.residue == residue_invariant(m1, m2)


# ---------------------------------------------------------------- solve_m2

def test_solve_m2_canonical():
    plus, minus = solve_m2(2)
    assert plus == ROOT_PLUS
    assert minus == ROOT_MINUS
    assert residue_invariant(QuadExact.rational(2, 13), plus) == 0
    assert residue_invariant(QuadExact.rational(2, 13), minus) == 0


def test_solve_m2_degenerate():
    with pytest.raises(NoValidRootError):
        solve_m2(1)
    with pytest.raises(NoValidRootError):
        solve_m2(-1)


def test_solve_m2_other_parameter():
    plus, minus = solve_m2(3)
    # roots of 8 m2^2 - 6 m2 - 8 = 0: (3 +- sqrt(73)) / 8
    assert plus == QuadExact(Fraction(3, 8), Fraction(1, 8), 73)
    assert minus == QuadExact(Fraction(3, 8), Fraction(-1, 8), 73)


# ------------------------------------------------------------- coefficients

def test_coefficient_band(fparams):
    s = fparams.m1 + fparams.m2
    p = fparams.m1 * fparams.m2
    assert fparams.coefficient(2) == p
    assert fparams.coefficient(-2) == p
    assert fparams.coefficient(1) == s * (1 - p)
    assert fparams.coefficient(-1) == -s * (1 - p)
    assert fparams.residue == 0


@given(nonzero_rationals, nonzero_rationals)
@settings(max_examples=40, deadline=None)
def test_coefficient_reflection(m1, m2):
    params = coefficients(m1, m2)
    assert params.coefficient(-2) == params.coefficient(2)
    assert params.coefficient(-1) == -params.coefficient(1)


def test_series_matches_rational_evaluation(fparams):
    rng = np.random.default_rng(7)
    zs = rng.uniform(0.6, 1.6, 100) * np.exp(2j * np.pi * rng.uniform(size=100))
    f_series = fparams.to_series(0.5, 2.0)
    lhs = f_series.evaluate_many(zs)
    rhs = fparams.evaluate_many(zs)
    assert np.max(np.abs(lhs - rhs) / (1.0 + np.abs(rhs))) < 1e-12


def test_zero_parameters_rejected():
    with pytest.raises(ParameterError):
        coefficients(0, Fraction(1, 2))


def test_function_symmetry_exact(fparams):
    assert fparams.to_series(0.5, 2.0).symmetry_defect("function") == 0.0


def test_zeros_pair_into_reciprocal_moduli(fparams):
    mods = fparams.zero_moduli
    assert mods[0] * mods[2] == 1
    assert mods[1] * mods[3] == 1


def test_no_zero_on_unit_circle(fparams):
    assert fparams.unit_circle_zero_free()
    zs = np.exp(2j * np.pi * np.arange(512) / 512)
    assert np.min(np.abs(fparams.evaluate_many(zs))) > 0


# ------------------------------------------------------------ annulus bounds

def test_annulus_bounds_standard(fparams):
    rho = 1.5 ** (1.0 / 3.0)
    assert float(fparams.min_outer_zero_modulus()) == pytest.approx(1.8685, abs=1e-4)
    c = annulus_bounds(fparams, rho)
    radii = np.geomspace(1 / rho, rho, 64)
    grid = np.outer(radii, np.exp(2j * np.pi * np.arange(512) / 512)).ravel()
    mags = np.abs(fparams.evaluate_many(grid))
    assert np.all((mags > 1 / c) & (mags < c))


def test_annulus_bounds_zero_inside(fparams):
    with pytest.raises(ZeroInAnnulusError):
        annulus_bounds(fparams, 2.0)  # m1 = 2 sits on the boundary


def test_annulus_bounds_requires_expansion(fparams):
    with pytest.raises(ParameterError):
        annulus_bounds(fparams, 0.9)
