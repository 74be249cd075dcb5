import pytest

from mobiusmin.config import RunConfig
from mobiusmin import construction, immersion, multiplier, punctured_sphere


@pytest.fixture(scope="session")
def standard_config():
    return RunConfig.standard()


@pytest.fixture(scope="session")
def sphere(standard_config):
    cfg = standard_config
    return punctured_sphere.PuncturedSphereData(
        punctured_sphere.validate_punctures(cfg.alpha, cfg.beta)
    )


@pytest.fixture(scope="session")
def base_forms(sphere, standard_config):
    cfg = standard_config
    return punctured_sphere.restrict_to_annulus(sphere, cfg.R, cfg.band, cfg.samples)


@pytest.fixture(scope="session")
def fparams(standard_config):
    plus, _ = multiplier.solve_m2(standard_config.m1)
    return multiplier.coefficients(standard_config.m1, plus)


@pytest.fixture(scope="session")
def psi_forms(base_forms, fparams):
    return construction.build_psi(base_forms, fparams, 3)


@pytest.fixture(scope="session")
def immersion_std(psi_forms):
    return immersion.integrate(psi_forms)


@pytest.fixture(scope="session")
def rho(standard_config):
    return standard_config.R ** (1.0 / 3.0)


@pytest.fixture(scope="session")
def core_samples(rho):
    return construction.certification_samples(1.0 / rho, rho)
