"""decaylab: a numerical laboratory for decay rates of Cayley-transform
powers and inverse-generator semigroups.

The package measures weighted boundary-derivative norms of explicit
holomorphic function families, evaluates the matching operator norms on
diagonal spectral models, fits the measured decay rates, and packages the
comparisons as reproducible command-line experiments.
"""

from .bnorm import InnerSupWarning, NormResult, QuadConfig, b0q_norm, inner_sup, psi
from .experiments import (
    REGISTRY,
    ConfigError,
    ExperimentConfig,
    NumericalError,
    RunResult,
    experiment_names,
    registry_text,
    run_experiment,
)
from .extremal import (
    SupResult,
    brute_force_sup,
    golden_section_max,
    sup_bound_inv,
    sup_g_cayley,
    sup_g_exp,
    sup_h_cayley,
    sup_h_exp,
)
from .functions import (
    CayleyPower,
    CayleyShifted,
    InverseGen,
    InverseGenPoly,
    VariableCayley,
)
from .rates import (
    EnvelopeResult,
    NormSequence,
    RateFit,
    envelope_check,
    fit_power_law,
)
from .spectral import (
    ParamSeq,
    SpectrumModel,
    cayley_product_norm,
    cayley_product_sweep,
    frac_normalize_residual,
    fractional_power_norm,
    inverse_gen_norm,
    make_poly_stable_spectrum,
    make_sqrt_spectrum,
    plancherel_check,
    semigroup_norm,
    splitmix64_floats,
    splitmix64_values,
    weighted_resolvent_sup,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # function families
    "CayleyPower",
    "CayleyShifted",
    "VariableCayley",
    "InverseGen",
    "InverseGenPoly",
    # boundary norms
    "b0q_norm",
    "inner_sup",
    "psi",
    "NormResult",
    "QuadConfig",
    "InnerSupWarning",
    # extremal helpers
    "SupResult",
    "golden_section_max",
    "brute_force_sup",
    "sup_g_cayley",
    "sup_h_cayley",
    "sup_g_exp",
    "sup_h_exp",
    "sup_bound_inv",
    # spectral models
    "SpectrumModel",
    "ParamSeq",
    "make_poly_stable_spectrum",
    "make_sqrt_spectrum",
    "cayley_product_norm",
    "cayley_product_sweep",
    "semigroup_norm",
    "inverse_gen_norm",
    "fractional_power_norm",
    "frac_normalize_residual",
    "plancherel_check",
    "weighted_resolvent_sup",
    "splitmix64_values",
    "splitmix64_floats",
    # rate fitting
    "NormSequence",
    "RateFit",
    "fit_power_law",
    "envelope_check",
    "EnvelopeResult",
    # experiments
    "REGISTRY",
    "ExperimentConfig",
    "RunResult",
    "run_experiment",
    "experiment_names",
    "registry_text",
    "ConfigError",
    "NumericalError",
]
