"""orbitprimes: exact arithmetic for semigroup orbits of rational self-maps
of the projective line modulo primes.

The package computes reduced orbit sizes m_p over sweeps of primes, the
analytic statistics built on them (epsilon-weighted prime sums, logarithmic
density curves, difference-ideal products), and decides the hypothesis
predicates (critical simplicity and separation, power-likeness,
compositional factors, finite freeness) that make those statistics provably
meaningful for a given system.
"""

from .errors import (
    BudgetExceededError,
    CacheIntegrityError,
    ContractError,
    CoordinateSearchError,
    EscapeNotFoundError,
    InvalidPointError,
    SystemFileError,
)
from .exact_algebra import (
    BinaryFormZ,
    ProjectivePointQ,
    QPoly,
    is_squarefree,
    normalize_point,
    poly_gcd,
    resultant,
    squarefree_decomposition,
    weil_height,
)
from .dynamics import (
    CollisionWitness,
    DPrimeResult,
    NoCollisionUpToDepth,
    PreperiodicWitness,
    RationalMapQ,
    SemigroupSystem,
    Word,
    compose_maps,
    default_height_threshold,
    difference_ideal,
    dprime,
    evaluate,
    height_escape_point,
    moderately_preperiodic_search,
    pigeonhole_word_length,
    wandering_certificate,
    word_evaluate,
)
from .modp import (
    INF_SENTINEL,
    OrbitRecord,
    good_reduction,
    orbit_size_mod_p,
    primes_up_to,
    reduce_point,
    sweep,
    system_good_reduction,
    system_key,
)
from .analytics import (
    DensityCurve,
    EpsilonSumResult,
    GrowthReport,
    SubexponentialSpec,
    abel_crosscheck,
    degree_slope_constant,
    density_estimate,
    dm_lognorm,
    epsilon_sum,
    growth_report,
    subexp_density,
)
from .hypotheses import (
    CriticalData,
    FreenessReport,
    GenusConstants,
    PowerLikeVerdict,
    PowerLikeWitness,
    SampleReport,
    are_critically_separated,
    chebyshev_t,
    critical_values,
    free_semigroup_finite_check,
    genus_constants,
    has_left_compositional_factor,
    is_critically_simple,
    is_power_like,
    left_compositional_factor,
    sample_good_family,
)
from .systemfile import load_system, parse_system_obj, save_system

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
