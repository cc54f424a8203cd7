"""Exact arithmetic of prime-degree Kummer extensions at desk scale.

Build a monogenic number field containing zeta_ell, enumerate the cyclic
degree-ell extensions L = K(ell-root of gamma) by discriminant norm, and
study how their Steinitz classes and discriminant wild parts distribute:
exact rho tables, exact partition identities, analytic leading terms, and
statistical equidistribution experiments.
"""

from .density import density_report, identity_check, rho, zeta_constants
from .harness import (
    load_field_spec,
    report_serialize,
    run_count_asymptotic_check,
    run_equidistribution_experiment,
)
from .kummer import enumerate_extensions, iter_extensions, normalize_gamma, steinitz_class
from .number_field import build_field

__version__ = "0.1.0"

__all__ = [
    "build_field",
    "load_field_spec",
    "normalize_gamma",
    "steinitz_class",
    "iter_extensions",
    "enumerate_extensions",
    "rho",
    "density_report",
    "identity_check",
    "zeta_constants",
    "run_equidistribution_experiment",
    "run_count_asymptotic_check",
    "report_serialize",
    "__version__",
]
