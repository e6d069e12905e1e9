MAX_VERTICES = 16
MAX_ISOMORPHISM_VERTICES = 8
MAX_ENUMERATION_VERTICES = 5
MAX_DETERMINANT_DIMENSION = 6

MONOMIAL_ORDER = "grevlex"
VARIABLE_PREFIX = "x"

GROEBNER_STEP_CAP = 10**6
STEP_CAP_ENVIRONMENT_VARIABLE = "CRITICAL_IDEALS_STEP_CAP"

WITNESS_PRIMES = (2, 3, 5)
WITNESS_COORDINATES = (-1, 0, 1, 2)
WITNESS_MAX_VARIABLES = 6

DIGRAPH6_HEADER = "&"
DIGRAPH6_FILE_HEADER = ">>digraph6<<"

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_RESOURCE = 3
