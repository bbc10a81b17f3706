"""
Configuration settings for the MTC bound engine
"""
import os
from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()

# =============================================================================
# Degree and search bounds
# =============================================================================
# Global degree bound capping every enumeration
MAX_DEGREE = int(os.getenv("MTC_MAX_DEGREE", "16"))

# Default largest join order examined by `mtc` and `nil-ker-mu`
MAX_N = int(os.getenv("MTC_MAX_N", "3"))

# The zeta-series of the path-fibration model may apply (zeta d) at most
# ZETA_CAP_FACTOR * max_degree times
ZETA_CAP_FACTOR = int(os.getenv("MTC_ZETA_CAP_FACTOR", "2"))

# =============================================================================
# Generator naming
# =============================================================================
# a -> a' for the second tensor factor, a -> abar for the path generators
PRIME_SUFFIX = os.getenv("MTC_PRIME_SUFFIX", "'")
BAR_SUFFIX = os.getenv("MTC_BAR_SUFFIX", "bar")

# =============================================================================
# Randomized checks
# =============================================================================
RANDOM_SEED = int(os.getenv("MTC_RANDOM_SEED", "65"))

# =============================================================================
# Output Configuration
# =============================================================================
LOG_LEVEL = os.getenv("MTC_LOG_LEVEL", "WARNING").upper()
OUTPUT_DIR = os.getenv(
    "MTC_OUTPUT_DIR",
    os.path.join(os.path.dirname(os.path.dirname(__file__)), "output"),
)
CSV_FILENAME_PREFIX = "mtc_table"

# =============================================================================
# Exit statuses of the command-line tool
# =============================================================================
EXIT_OK = 0
EXIT_USAGE_ERROR = 1
EXIT_PARSE_ERROR = 2
EXIT_INTEGRITY_ERROR = 3
EXIT_INCONCLUSIVE = 4
