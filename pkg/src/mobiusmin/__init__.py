"""mobiusmin: minimal Moebius strips with two-point-omitting Gauss maps.

Builds explicit Weierstrass data on a four-punctured sphere, restricts it
to an involution-invariant annulus, multiplies by an exactly residue-free
Laurent polynomial on an odd power cover, certifies every checkable
hypothesis (residues, symmetries, conformality, metric bounds), integrates
the immersion, and exports Moebius-strip meshes.
"""

from .config import RunConfig, Tolerances
from .construction import (
    ConstructionParams,
    build_psi,
    choose_k,
    metric_comparison,
    verify_psi,
)
from .errors import (
    ConfigError,
    DomainError,
    InvalidPunctureError,
    MobiusminError,
    NonExactFormError,
    NoValidRootError,
    ParameterError,
    PoleError,
    RegularityError,
    UnitAnnulusError,
    ZeroInAnnulusError,
)
from .immersion import ImmersionData, GaussReport, gauss_report, integrate
from .laurent import FormOnAnnulus, LaurentCoefficients
from .meshing import Mesh, build_mesh, export_obj, is_orientable, load_obj
from .multiplier import (
    MultiplierParams,
    QuadExact,
    annulus_bounds,
    coefficients,
    residue_invariant,
    solve_m2,
)
from .punctured_sphere import (
    PunctureConfig,
    PuncturedSphereData,
    analytic_coefficients,
    completeness_probe,
    involution_defect,
    restrict_to_annulus,
    validate_punctures,
)
from .weierstrass import (
    WeierstrassTriple,
    conformality_defect,
    forms_from_pair,
    gauss_map,
    metric_density,
    regularity_min,
)

__version__ = "0.1.0"
