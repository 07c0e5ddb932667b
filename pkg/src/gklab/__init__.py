"""Average-case approximation complexity of tensor-product
Gaussian-kernel random fields.

Public surface: spectrum generation, exact complexity by ordered
eigenvalue enumeration, binned-convolution estimation for large d,
limiting laws (normal and Dickman convolution powers), normalization
plans, and the condition checks tying spectra to their limit laws.
"""

from .asymptotics import (
    BoundednessVerdict,
    ConditionReport,
    ConditionRow,
    NormalizationPlan,
    boundedness_criterion,
    condition_A,
    condition_B,
    condition_C,
    condition_report,
    cutoff_index,
    hat_a_d,
    lemma1_verify,
    normalization_plan,
    predicted_log_complexity,
)
from .backend import BACKEND
from .distribution import (
    DEFAULT_BIN_WIDTH,
    CenteredSummandLaw,
    EmpiricalCdf,
    LogSpectralMeasure,
    build_measure,
    gd_value,
    log_complexity_estimate,
    sample_gd,
)
from .enumeration import (
    DEFAULT_CAP,
    ComplexityResult,
    EigenIndex,
    average_error,
    enumerate_top,
    exact_complexity,
)
from .errors import CapacityError, ConfigError, GklabError, RangeError
from .limits import (
    DickmanCdf,
    DickmanLevy,
    QuantileFn,
    SelfDecompTriplet,
    ZeroLevy,
    dickman_cdf,
    dickman_quantile,
    dickman_sample,
    dickman_triplet,
    gamma_tau,
    gaussian_triplet,
    normal_cdf,
    normal_quantile,
)
from .spectrum import (
    OmegaVector,
    SigmaSequence,
    generate_sigmas,
    omega_from_sigma,
    univariate_eigenvalue,
    univariate_tail,
)

__version__ = "0.1.0"
