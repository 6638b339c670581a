VERSION = "0.1.0"

EXIT_OK = 0
EXIT_IO_ERROR = 1
EXIT_DOMAIN_ERROR = 2

MANIFEST_SUFFIX = ".manifest.json"
ERROR_SUFFIX = ".error.json"
SEQUENCE_GLOB = "fn_*.json"

# Solver option ladders, tried in order on numerical failure.
QHULL_OPTION_LADDER = (None, "QJ")
CDD_NUMBER_TYPE_LADDER = ("float", "fraction")
LP_METHOD_LADDER = ("highs", "highs-ds", "highs-ipm")
CONIC_SOLVER_LADDER = ("CLARABEL", "SCS")

# Objective value handed to the simplex search for infeasible parameters.
INFEASIBLE_SCORE = float("-inf")
