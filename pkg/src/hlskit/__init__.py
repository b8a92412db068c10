"""hlskit: exact boundedness deciders for Riesz potentials between iterated-norm
spaces, with numerical cross-checks.

* :mod:`hlskit.exponents`: exact exponents (reciprocals as fractions), index specs.
* :mod:`hlskit.gamma`, :mod:`hlskit.omega`: the recursive membership deciders.
* :mod:`hlskit.consistency`: lattice sweeps that cross-check the deciders.
* :mod:`hlskit.grid`, :mod:`hlskit.riesz`: grid functions, mixed norms, the Riesz
  potential and the scaling experiments.
* :mod:`hlskit.kfunctional`: K-functionals, interpolation and Lorentz norms.
* :mod:`hlskit.suites`: default verification suites; :mod:`hlskit.cli`: the CLI.
"""
from .errors import DomainError, HLSError, InputError, PreconditionError
from .exponents import (INF, Exponent, IndexSpec, conjugate, format_rational, hls_exponent,
                        homogeneity_defect, parse_exponent, parse_exponent_list, parse_rational)
from .gamma import GAMMA_RULES, MembershipReport, TraceStep, gamma_member, riesz_bounded
from .omega import OMEGA_RULES, omega_member, omega_via_gamma
from .consistency import (ConsistencyReport, LatticeSpec, check_duality, check_known_regions,
                          check_m1_closed_form, check_omega_gamma, default_lattices,
                          enumerate_lattice)
from .grid import Axis, GridFunction, TestFunctionSpec, mixed_norm, sample, staggered
from .riesz import (ExperimentResult, blowup_probe, dilation_check, drift_estimate,
                    riesz_apply)
from .kfunctional import (Couple, SimpleFunction, k_functional, k_growth_check, lorentz_norm,
                          theta_norm)

__version__ = "0.1.0"

__all__ = [
    "HLSError", "InputError", "DomainError", "PreconditionError",
    "Exponent", "INF", "IndexSpec", "parse_exponent", "parse_exponent_list", "parse_rational",
    "format_rational", "conjugate", "homogeneity_defect", "hls_exponent",
    "GAMMA_RULES", "MembershipReport", "TraceStep", "gamma_member", "riesz_bounded",
    "OMEGA_RULES", "omega_member", "omega_via_gamma",
    "ConsistencyReport", "LatticeSpec", "default_lattices", "enumerate_lattice",
    "check_duality", "check_omega_gamma", "check_known_regions", "check_m1_closed_form",
    "Axis", "GridFunction", "TestFunctionSpec", "sample", "mixed_norm", "staggered",
    "ExperimentResult", "riesz_apply", "dilation_check", "drift_estimate", "blowup_probe",
    "Couple", "SimpleFunction", "k_functional", "theta_norm", "lorentz_norm", "k_growth_check",
]
