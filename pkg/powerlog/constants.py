APPLICATION_ROOT_LOGGER_NAME = "powerlog"
DEFAULT_ENCODING = "utf-8"
YAML_VERSION = (1, 2)
PYTHON_LOGGING_SCHEMA_DOCS = (
    "https://docs.python.org/3/library/logging.config.html#dictionary-schema-details"
)

DEFAULT_LOG_LEVEL_LIBRARIES = "ERROR"
ENV_LOG_LEVEL_LIBRARIES = "LOG_LEVEL_LIBRARIES"
ENV_CONFIG_FILE = "POWERLOG_CONFIG"
ENV_WORKERS = "POWERLOG_WORKERS"
DEFAULT_WORKERS = 1

# radial solver
DEFAULT_GRID_POINTS = 4000
MIN_GRID_POINTS = 100
DEFAULT_MAX_GRID_POINTS = 1_024_000
DEFAULT_TOLERANCE = 1e-6
DEFAULT_TAIL_TOLERANCE = 1e-8
DEFAULT_DECAY_EXPONENT = 25.0
DEFAULT_CONFINING_MARGIN = 10.0  # in energy units
MARGIN_RULE_MIN_EXPONENT = 1.0
COULOMB_BOX_FACTOR = 12.0  # 4 (n + l)^2 times a safety factor 3
TAIL_FRACTION = 0.05
BOX_GROWTH_FACTOR = 1.5
MAX_BOX_ATTEMPTS = 12

# interpolation nodes and supported exponent range
Q_MIN = -1.0
Q_MAX = 2.0
NODES = (-1.0, 0.0, 1.0, 2.0)

# airy
AIRY_MAX_ARGUMENT = 25.0
AIRY_MAX_ZERO_INDEX = 20
AIRY_SERIES_LOWER = -7.5
AIRY_SERIES_UPPER = 5.0

# envelope / tangent optimisation
ENVELOPE_XATOL = 1e-10
TANGENT_XATOL = 1e-10
TANGENT_LOG_T_RANGE = (-12.0, 12.0)
TANGENT_GRID_SIZE = 241

# files
DEFAULT_CACHE_PATH = "./pdata.csv"
CACHE_FORMAT_VERSION = 1
CACHE_MAGIC = "powerlog-pdata"
DATA_SIGNIFICANT_DIGITS = 12
GOLDEN_TABLE1_FILE = "table1.csv"

# figure data
DEFAULT_Q_GRID_STEP = 0.05
DEFAULT_FIGURE_N_MAX = 5
DEFAULT_FIGURE_ELL_MAX = 5
TABLE1_N_MAX = 5
TABLE1_ELL_MAX = 4
TABLE1_Q = 0.5

# exit codes
EXIT_OK = 0
EXIT_USAGE = 2
EXIT_SOLVER_FAILURE = 3
EXIT_GOLDEN_CHECK_FAILURE = 4
