"""
Constants and configuration values for linmap
Centralized location for desk-scale guards and default values
"""

# ============================================================================
# Finite field guards
# ============================================================================

# Largest field size accepted by field_ctx
MAX_FIELD_SIZE = 2 ** 20

# Largest extension degree for the auto-chosen modulus
MAX_EXTENSION_DEGREE = 8

# Exhaustive irreducible search: degree and q^t limits
MAX_IRREDUCIBLE_DEGREE = 6
MAX_IRREDUCIBLE_SEARCH = 2 ** 24

# Field/vector add and mul tables are materialised up to this q
FIELD_TABLE_LIMIT = 256

# ============================================================================
# Number theory guards
# ============================================================================

# Largest integer factor() accepts
MAX_FACTOR_VALUE = 2 ** 128

# Trial division runs through all primes below this bound before Pollard rho
TRIAL_DIVISION_BOUND = 10 ** 6

# Miller-Rabin with the first 13 prime bases is deterministic below this value
MILLER_RABIN_PROVEN_BOUND = 3_317_044_064_679_887_385_961_981
MILLER_RABIN_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)

# Pollard rho: polynomial constants tried in order, iterations per constant
POLLARD_RHO_CONSTANTS = tuple(range(1, 64))
POLLARD_RHO_MAX_STEPS = 1 << 22

# Partition function guards
MAX_PARTITION_COUNT_N = 10 ** 4
MAX_PARTITION_LIST_N = 60

# primorial(k) guard
MAX_PRIMORIAL_K = 100

# ============================================================================
# Census / oracle guards
# ============================================================================

# enumerate_graph_data, bounds and growth report
MAX_CENSUS_N = 12

# Oracle: q^(n^2) matrices enumerated at most
MAX_ORACLE_MATRICES = 2 ** 20

# Oracle: q^n vertices per functional graph at most
MAX_GRAPH_VERTICES = 2 ** 16

# fitting_split dimension limit
MAX_FITTING_N = 8

# Conjugates sampled per Jordan type when exhaustive nilpotent search is too big
NILPOTENT_SAMPLES_PER_TYPE = 40

# Extra working precision (bits) for certified ceilings of irrational bounds
CEIL_GUARD_BITS = 32
CEIL_START_PREC = 128

# ============================================================================
# CLI / cache
# ============================================================================

DEFAULT_CACHE_FILE = 'factor-cache.json'
CACHE_ENV_VAR = 'LINMAP_CACHE'

# Only factorizations of values at least this large are persisted
CACHE_MIN_VALUE = 10**12

OUTPUT_FORMATS = ('json', 'csv', 'text')

DEFAULT_SEED = 20200101

# Exit codes
EXIT_OK = 0
EXIT_GUARD = 1
EXIT_VIOLATION = 2
EXIT_USAGE = 64

# ============================================================================
# Formatting Thresholds
# ============================================================================

# Threshold for underscore grouping in text tables
FORMAT_THOUSANDS_THRESHOLD = 1_000
