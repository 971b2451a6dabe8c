"""Exact q-series engine for Appell-Lerch sums, Hecke-type multi-sums, and
machine verification of their identities.

The value type everywhere is a truncated formal Laurent series in q (with a
global fractional-exponent scale) over exact rationals; specializing the
free parameters to monomials c*q^e turns each analytic identity into a
coefficientwise-checkable statement.  A certified rational numeric backend
and Richardson-extrapolated residue checks complete the verification story.
"""

import sys as _sys

# exact certified error bounds carry integers with thousands of digits, and
# Fraction both pickles and serializes through str()
if hasattr(_sys, "set_int_max_str_digits"):
    _sys.set_int_max_str_digits(4_000_000)

from .series import (
    Coeff,
    DiffReport,
    Exponent,
    MonomialSpec,
    Series,
    build_to_order,
    coeff_at,
    dilate,
    eq_upto,
    geom_expand,
    series_add,
    series_invert_unit,
    series_mul,
)
from .qfunctions import (
    J_shorthand,
    appell_lerch_m,
    bilateral_pole_sum,
    jacobi_theta,
    pochhammer_finite,
    pochhammer_inf,
)
from .heckesums import (
    DoubleSumSpec,
    F_kernel,
    G_kernel,
    TripleSumSpec,
    conventional_range,
    conventional_range_sum,
    double_sum,
    kronecker_unilateral,
    reindex_shift_check,
    script_F_shift_check,
    sg,
    triple_sum,
)
from .numeric import Ball
from .identities import CATALOG, IdentitySpec
from .verify import (
    Report,
    Specialization,
    SuiteConfig,
    SuiteReport,
    check_identity,
    cross_validate,
    numeric_eval,
    random_specialization,
    run_suite,
)
from .residues import (
    ResidueCase,
    ResidueReport,
    check_residue_lemma,
    residue_cases,
    richardson_residue,
    run_residue_family,
)
from . import errors

__all__ = [
    "Ball", "CATALOG", "Coeff", "DiffReport", "DoubleSumSpec", "Exponent",
    "F_kernel", "G_kernel", "IdentitySpec", "J_shorthand", "MonomialSpec",
    "Report", "ResidueCase", "ResidueReport", "Series", "Specialization",
    "SuiteConfig", "SuiteReport", "TripleSumSpec", "appell_lerch_m",
    "bilateral_pole_sum", "build_to_order", "check_identity",
    "check_residue_lemma", "coeff_at", "conventional_range",
    "conventional_range_sum", "cross_validate", "dilate", "double_sum",
    "eq_upto", "errors", "geom_expand", "jacobi_theta",
    "kronecker_unilateral", "pochhammer_finite", "pochhammer_inf",
    "numeric_eval", "random_specialization", "reindex_shift_check", "residue_cases",
    "richardson_residue", "run_residue_family", "run_suite",
    "script_F_shift_check", "series_add", "series_invert_unit", "series_mul",
    "sg", "triple_sum",
]
