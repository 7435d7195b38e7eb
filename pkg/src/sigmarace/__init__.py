"""Divisor-sum races on arithmetic progressions.

Library + CLI for computing sigma_s on progressions, certifying sign changes
of sigma_s(an+b) - sigma_s(cn+d), constructing explicit witnesses with
machine-checkable certificates, and evaluating zeta-based dominance criteria.
"""

from .config import RunConfig, load_config
from .errors import (
    BudgetExhaustedError,
    DomainError,
    PartialFactorizationError,
    PrecisionError,
    ResourceLimitError,
    SigmaRaceError,
    UndecidedComparisonError,
    VerificationError,
)
from .factorize import Factorization, SpfTable, build_spf, factorize
from .numerics import (
    Ball,
    Comparison,
    Exact,
    Exponent,
    Rel,
    ScalarValue,
    ZetaEnclosure,
    compare,
    pow_scalar,
    solve_zeta_threshold,
    zeta_enclosure,
)
from .progression import ProgressionSpec, ScanSummary, scan_progression
from .race import (
    ConstancyReport,
    CrossingResult,
    Direction,
    RaceSpec,
    RaceStats,
    check_condition_A,
    first_crossing,
    race_stats,
    sample_rows,
    scan_constancy,
    table_g,
    table_h,
)
from .sigma import (
    SmallFunctions,
    sigma_reflect_check,
    sigma_restricted,
    sigma_s,
    small_functions,
)
from .theorems import (
    DominanceCriterion,
    ExactSignChangeParams,
    RatioBounds,
    SignChangeParams,
    always_less_check,
    always_less_check_sumform,
    bounds_ad_eq_bc,
    dominance_eventual,
    dominance_s0,
    global_bounds_large_s,
    thmA_min_d,
    thmA_part2_params,
)
from .witness import (
    Certificate,
    CrtWitness,
    MartinNumber,
    NewmanWitness,
    OmegaCertificate,
    PrimeTripleWitness,
    build_modulus,
    certify_omega,
    certify_ratio,
    construct_newman_witness,
    crt_witness,
    martin_number,
    prime_triple_witness,
    solve_linear_congruence,
)

__version__ = "1.0.0"
