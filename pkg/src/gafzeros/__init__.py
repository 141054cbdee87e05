"""Expected zeros of random power series with finitely dependent Gaussian coefficients."""

from .covariance import (
    Covariance,
    MAFilter,
    RegionLabel,
    SpectralPoly,
    binomial_covariance,
    check_positive_definite,
    classify_region,
    from_gamma,
    in_region,
    spectral_factorize,
    spectral_poly,
    two_dependent,
)
from .errors import (
    AmbiguousMatching,
    ConvergenceError,
    DegenerateInput,
    DomainError,
    FactorizationError,
    GafZerosError,
    NearMultipleRoot,
    NoConvergence,
    NotPositiveDefinite,
    NumericalError,
    OddMultiplicity,
    OutsideRegion,
    ValidationError,
    ZeroOnCircle,
)
from .expected_zeros import (
    Method,
    ZeroCountResult,
    baseline,
    correction_area_quad,
    correction_contour_quad,
    correction_residue,
    expected_zeros,
)
from .kernel import GPoly, OracleModel, common_shock, g_poly, kernel_value, ornstein_uhlenbeck
from .montecarlo import McConfig, MonteCarloReport, count_zeros_in_disk, empirical_expected_zeros
from .puiseux import (
    AsymptoticPrediction,
    case_prediction,
    dn_constant,
    empirical_asymptotics,
    general_exponent,
    predicted_root,
    puiseux_branches,
)
from .rootfind import BranchTrack, RootSet, poly_roots, theta_roots, track_branches

__version__ = "0.1.0"
