"""Exact degree growth and dynamical degree bounds for rational maps."""

__version__ = "0.1.0"

from .errors import *  # noqa: F401,F403
from .interval import Interval
from .polycore import (AmbientSpace, Polynomial, RationalMap, compose, format_map,
                       format_polynomial, is_dominant, parse_map, parse_polynomial,
                       poly_gcd, poly_mul, reduce_map)
from .degseq import (DegreeSequence, bezout_number, bound_constant, conjugate_map,
                     degree_table, iterate_degrees, lambda_estimate, stability_check)
from .monomial import (MonomialMap, MonomialSemiConjugacy, compound_matrix,
                       kernel_restriction, monomial_dynamical_degrees,
                       monomial_relative_degrees, monomial_to_rational_map,
                       product_formula_check, spectral_radius_certified, spectral_report)
from .cyclelat import (CycleLattice, PullbackAction, blowup_lattice,
                       cone_preservation_r1r2_check, cremona_action, hodge_signature,
                       lehmer_action, norm_one, simplicity_check, spectral_data)
from .relative import (SemiConjugacy, build_semiconjugacy, product_formula_verify,
                       relative_degree_sequence, surface_primitivity_probe)
from .suites import run_suite
