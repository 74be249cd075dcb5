"""Laurent-series calculus: evaluation, products, pullbacks, residues,
antiderivatives, symmetry checks."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mobiusmin.errors import DomainError, NonExactFormError
from mobiusmin.laurent import FormOnAnnulus, LaurentCoefficients
from mobiusmin.punctured_sphere import analytic_coefficients


def series(entries, band=None, r_in=0.4, r_out=2.5):
    return LaurentCoefficients.from_coeff_dict(entries, band=band, r_in=r_in, r_out=r_out)


# ---------------------------------------------------------------- strategies

coeff = st.complex_numbers(max_magnitude=2.0, allow_nan=False, allow_infinity=False)


@st.composite
def random_series(draw, max_band=4):
    band = draw(st.integers(0, max_band))
    vals = draw(
        st.lists(coeff, min_size=2 * band + 1, max_size=2 * band + 1)
    )
    return LaurentCoefficients(np.array(vals), band, 0.4, 2.5)


@st.composite
def symmetric_series(draw, parity, max_band=4):
    """parity 0: function-symmetric, parity 1: form-symmetric."""
    band = draw(st.integers(0, max_band))
    pos = draw(st.lists(coeff, min_size=band + 1, max_size=band + 1))
    arr = np.zeros(2 * band + 1, dtype=np.complex128)
    if parity == 1:
        pos[0] = 1j * pos[0].real  # a_0 purely imaginary
    else:
        pos[0] = complex(pos[0].real, 0.0)
    for n in range(band + 1):
        sign = -1.0 if (n + parity) % 2 else 1.0
        arr[band + n] = pos[n]
        arr[band - n] = sign * np.conj(pos[n])
    return LaurentCoefficients(arr, band, 0.4, 2.5)


# ---------------------------------------------------------------- evaluate

def test_evaluate_constant():
    assert series({0: 1}).evaluate(0.5) == 1


def test_evaluate_cancels_at_i():
    s = series({1: 1, -1: 1})
    assert abs(s.evaluate(1j)) == 0


def test_evaluate_matches_direct_formula(sphere):
    # phi_3(z) = z * g(z) * eta_density(z) = z^2 * eta_density(z)
    phi3 = analytic_coefficients(sphere, 48)[2]
    z = 1.0 + 0j
    direct = z * sphere.gauss(z) * sphere.eta_density(z)
    assert abs(phi3.evaluate(z) - direct) < 1e-10


def test_evaluate_outside_annulus_rejected():
    s = series({0: 1}, r_in=0.5, r_out=2.0)
    with pytest.raises(DomainError):
        s.evaluate(3.0)
    with pytest.raises(DomainError):
        s.evaluate(0.25)


def test_non_finite_coefficients_rejected():
    with pytest.raises(ValueError):
        LaurentCoefficients(np.array([np.nan + 0j]), 0, 0.5, 2.0)


# ---------------------------------------------------------------- multiply

def test_multiply_monomials():
    prod = series({0: 2}).multiply(series({1: 3}))
    assert prod.coeff(1) == 6
    assert prod.coeff(0) == 0


def test_multiply_band_arithmetic():
    a = series({2: 1, -2: 1}, band=2)
    b = series({3: 1, -3: 1}, band=3)
    assert a.multiply(b).band == 5


def test_multiply_with_f_kills_residue(fparams):
    f = fparams.to_series(0.5, 2.0)
    prod = f.multiply(series({0: 1}))
    assert prod.coeff(0) == 0  # b_0 = 0 exactly


def test_multiply_disjoint_annuli():
    a = series({0: 1}, r_in=0.1, r_out=0.5)
    b = series({0: 1}, r_in=2.0, r_out=3.0)
    with pytest.raises(DomainError):
        a.multiply(b)


@given(random_series(), random_series(), st.floats(0.6, 1.8), st.floats(0.0, 6.28))
@settings(max_examples=60, deadline=None)
def test_multiply_agrees_with_pointwise_product(s, t, r, theta):
    z = r * np.exp(1j * theta)
    lhs = s.multiply(t).evaluate(z)
    rhs = s.evaluate(z) * t.evaluate(z)
    assert abs(lhs - rhs) < 1e-12 * (1.0 + abs(rhs))


# ---------------------------------------------------------- pullback_power

def test_pullback_moves_indices():
    out = series({1: 2 + 1j}).pullback_power(3)
    assert out.coeff(3) == 2 + 1j
    assert out.band == 3
    assert np.count_nonzero(out.coeffs) == 1


def test_pullback_annulus_roots():
    out = series({1: 1}, r_in=0.5, r_out=2.0).pullback_power(3)
    assert out.r_in == pytest.approx(0.5 ** (1 / 3))
    assert out.r_out == pytest.approx(2.0 ** (1 / 3))


@given(symmetric_series(parity=1), st.sampled_from([1, 3, 5, 7]))
@settings(max_examples=40, deadline=None)
def test_pullback_odd_preserves_form_symmetry(s, k):
    assert s.pullback_power(k).symmetry_defect("form") == 0.0


def test_pullback_even_breaks_form_symmetry():
    s = series({1: 1j, -1: -1j})  # form-symmetric: a_{-1} = conj(a_1)
    assert s.symmetry_defect("form") == 0.0
    assert s.pullback_power(2).symmetry_defect("form") == 2.0


# ---------------------------------------------------------------- residue

def test_residue_of_dz_over_z():
    assert FormOnAnnulus(series({0: 1})).residue() == 1


def test_residue_of_exact_form():
    assert FormOnAnnulus(series({1: 1})).residue() == 0


def test_residue_of_multiplier_series(fparams):
    assert FormOnAnnulus(fparams.to_series(0.5, 2.0)).residue() == 0


# ---------------------------------------------------------- antiderivative

def test_antiderivative_of_2dz():
    prim = FormOnAnnulus(series({1: 2})).antiderivative()
    assert prim.coeff(1) == 2
    assert prim.coeff(0) == 0


def test_antiderivative_log_obstruction():
    with pytest.raises(NonExactFormError):
        FormOnAnnulus(series({0: 1})).antiderivative()


def test_antiderivative_derivative_matches_form(psi_forms):
    # central finite differences of F against the psi_3 density
    form = psi_forms[2]
    prim = form.antiderivative()
    zs = 1.02 * np.exp(2j * np.pi * np.arange(100) / 100)
    h = 1e-6
    fd = (prim.evaluate_many(zs + h) - prim.evaluate_many(zs - h)) / (2 * h)
    assert np.max(np.abs(fd - form.density_many(zs))) < 1e-6


@given(random_series())
@settings(max_examples=60, deadline=None)
def test_residue_exactness_dichotomy(s):
    form = FormOnAnnulus(s)
    scale = s.max_abs()
    if abs(s.coeff(0)) <= 1e-12 * scale:
        prim = form.antiderivative()
        # termwise re-differentiation reproduces the input up to 1 ulp
        for n in range(-s.band, s.band + 1):
            if n == 0:
                continue
            back = n * prim.coeff(n)
            assert abs(back - s.coeff(n)) <= 4e-16 * abs(s.coeff(n))
    else:
        with pytest.raises(NonExactFormError):
            form.antiderivative()


# ---------------------------------------------------------- symmetry defect

def test_function_symmetry_of_odd_difference():
    s = series({1: 1, -1: -1})
    assert s.symmetry_defect("function") == 0.0


def test_form_symmetry_constant_term():
    assert series({0: 1j}).symmetry_defect("form") == 0.0
    assert series({0: 1}).symmetry_defect("form") == 2.0


def test_restricted_forms_are_form_symmetric(base_forms):
    for form in base_forms:
        assert form.symmetry_defect() < 1e-10


def test_symmetry_needs_unit_circle():
    s = series({0: 1j}, r_in=2.0, r_out=3.0)
    with pytest.raises(DomainError):
        s.symmetry_defect("form")


@given(symmetric_series(parity=0), symmetric_series(parity=1))
@settings(max_examples=40, deadline=None)
def test_product_of_symmetric_series_is_form_symmetric(f, phi):
    prod = f.multiply(phi)
    scale = max(prod.max_abs(), 1.0)
    assert prod.symmetry_defect("form") <= 1e-13 * scale
