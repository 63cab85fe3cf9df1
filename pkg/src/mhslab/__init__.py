"""Exact and modular arithmetic for multiple harmonic sums.

The package computes truncated multiple harmonic sums and their weighted
relatives both over the rationals and in the rings Z/p^e (e <= 3),
verifies polynomial identities between them on ranges of arguments, and
checks a registry of Bernoulli-number congruences across primes, with a
CRT-based fitter for recovering unknown rational coefficients.
"""

from .bernoulli import (
    BernoulliCache,
    IndexAboveCap,
    PDividesDenominator,
    bernoulli_exact,
    bernoulli_mod,
    von_staudt_clausen_check,
    warm_cache,
)
from .compositions import Composition, FormalSum, parse_composition, stuffle
from .congruences import (
    CheckMember,
    CheckReport,
    CongruenceCheck,
    FitResult,
    HypothesisViolated,
    InsufficientPrimes,
    UnknownCheckId,
    fit_coefficient,
    fit_families,
    get_check,
    registry,
    reports_to_csv,
    reports_to_json,
    rhs_depth2,
    rhs_depth3_oddweight,
    rhs_homogeneous,
    rhs_tauraso_232,
    rhs_thm23,
    run_battery,
    run_check,
    run_scan,
)
from .exactnum import (
    DenominatorDivisibleByP,
    NotAUnit,
    Rational,
    Residue,
    crt_list,
    is_prime,
    mod_inverse,
    primes_in_range,
    rational_reconstruct,
    rational_to_residue,
    xgcd,
)
from .identities import (
    IdentityInstance,
    SuiteReport,
    check_thm21_form1,
    check_thm21_form2,
    check_thm31,
    eval_formal_sum,
    probe_thm31_random,
    run_thm21_suite,
    run_thm31_suite,
)
from .mhs import (
    EXACT_N_CAP,
    PrefixTable,
    mhs_exact,
    mhs_mod,
    weighted_sum2,
    weighted_sum3,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "BernoulliCache",
    "IndexAboveCap",
    "PDividesDenominator",
    "bernoulli_exact",
    "bernoulli_mod",
    "von_staudt_clausen_check",
    "warm_cache",
    "Composition",
    "FormalSum",
    "parse_composition",
    "stuffle",
    "CheckMember",
    "CheckReport",
    "CongruenceCheck",
    "FitResult",
    "HypothesisViolated",
    "InsufficientPrimes",
    "UnknownCheckId",
    "fit_coefficient",
    "fit_families",
    "get_check",
    "registry",
    "reports_to_csv",
    "reports_to_json",
    "rhs_depth2",
    "rhs_depth3_oddweight",
    "rhs_homogeneous",
    "rhs_tauraso_232",
    "rhs_thm23",
    "run_battery",
    "run_check",
    "run_scan",
    "DenominatorDivisibleByP",
    "NotAUnit",
    "Rational",
    "Residue",
    "crt_list",
    "is_prime",
    "mod_inverse",
    "primes_in_range",
    "rational_reconstruct",
    "rational_to_residue",
    "xgcd",
    "IdentityInstance",
    "SuiteReport",
    "check_thm21_form1",
    "check_thm21_form2",
    "check_thm31",
    "eval_formal_sum",
    "probe_thm31_random",
    "run_thm21_suite",
    "run_thm31_suite",
    "EXACT_N_CAP",
    "PrefixTable",
    "mhs_exact",
    "mhs_mod",
    "weighted_sum2",
    "weighted_sum3",
]
