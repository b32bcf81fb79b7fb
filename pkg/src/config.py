"""
Configuration file for the dyadic potential project
"""

import os
from pathlib import Path

from dotenv import load_dotenv

load_dotenv()

# ===================================
# Project Paths
# ===================================
PROJECT_ROOT = Path(__file__).parent.parent  # dyadic-potential/
DATA_DIR = PROJECT_ROOT / "data"
REPORTS_DIR = Path(os.getenv("DYADIC_REPORTS_DIR", PROJECT_ROOT / "reports"))
EXPERIMENT_CONFIG_FILE = Path(
    os.getenv("DYADIC_EXPERIMENT_CONFIG", DATA_DIR / "experiments_config.json")
)

# ===================================
# Logger Settings
# ===================================
LOGGER_NAME = "dyadic_potential"
LOG_LEVEL = os.getenv("DYADIC_LOG_LEVEL", "INFO")  # DEBUG, INFO, WARNING, ERROR

# ===================================
# Engine Version
# ===================================
ENGINE_VERSION = "0.1.0"

# ===================================
# Solver Settings
# ===================================
SOLVER_TOL = 1e-12  # relative objective gain per sweep that counts as converged
KKT_TOL = 1e-6  # tolerance on V >= 1 over E and |V - 1| over the support
MAX_SWEEPS = 100_000
KERNEL_CACHE_LIMIT = 20_000  # above this the solver runs matrix-free
POLISH_EVERY = 25  # sweeps between active-set polishing attempts

# ===================================
# Engine Budgets
# ===================================
POSET_BOX_CAP = int(os.getenv("DYADIC_POSET_BOX_CAP", 2**28))
DENSE_MAX_DEPTH = {1: 14, 2: 7, 3: 4}
CHUNK_SIZE = 65_536  # boxes per vectorised potential block
LEVELSET_GRID_CAP = 2**22  # trie-product boxes scanned for exact level sets

# ===================================
# Randomness
# ===================================
DEFAULT_SEED = int(os.getenv("DYADIC_SEED", 20190601))
