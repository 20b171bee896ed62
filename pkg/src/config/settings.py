# src/config/settings.py

# Numerical settings for the spin chain simulator

SIMULATOR_NAME = "spinsim"
SIMULATOR_VERSION = "1.0.0"
MAX_DENSE_SPINS = 12  # dense 2^N matrices only
HERMITIAN_TOL = 1e-12
NORM_TOL = 1e-10
DEFAULT_DEGENERACY_TOL = 1e-8
DEFAULT_GHZ_THRESHOLD = 0.05  # three-tangle above this is GHZ class
DEFAULT_PRODUCT_TOL = 1e-6  # single-spin entropy in bits
CSV_SCHEMA_VERSION = "1"
LOGGING_LEVEL = "INFO"
