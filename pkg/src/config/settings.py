"""Configuration settings for the circuit cutting engine."""
import os
from dotenv import load_dotenv

load_dotenv()

# Simulator
SIMULATOR_MAX_QUBITS = int(os.getenv("SIMULATOR_MAX_QUBITS", 24))

# Cut search
DEFAULT_ALPHA = float(os.getenv("DEFAULT_ALPHA", 0.5))
MAX_SUBCIRCUITS = int(os.getenv("MAX_SUBCIRCUITS", 4))
SOLVER_TIMEOUT_S = float(os.getenv("SOLVER_TIMEOUT_S", 30))
DEGREE_CAP = int(os.getenv("DEGREE_CAP", 15))

# Contraction
MEMORY_LIMIT_VALUES = int(os.getenv("MEMORY_LIMIT_VALUES", 2**28))
EXHAUSTIVE_ORDER_MAX_NODES = int(os.getenv("EXHAUSTIVE_ORDER_MAX_NODES", 8))

# States merging
MAX_BINS = int(os.getenv("MAX_BINS", 2**8))
TOP_R = int(os.getenv("TOP_R", 1))
MAX_RECURSIONS = int(os.getenv("MAX_RECURSIONS", 32))
SOLUTION_THRESHOLD = float(os.getenv("SOLUTION_THRESHOLD", 1e-3))

# Sampling
DEFAULT_SEED = int(os.getenv("DEFAULT_SEED", 1234))
DEFAULT_TRIALS = int(os.getenv("DEFAULT_TRIALS", 1))

# Execution
WORKERS = int(os.getenv("WORKERS", 4))
LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO")

# Pauli labels of a cut, in basis-index order
PAULI_LABELS = ("I", "X", "Y", "Z")

# Output Configuration
OUTPUT_DIR = os.getenv(
    "OUTPUT_DIR", os.path.join(os.path.dirname(__file__), "..", "..", "output")
)
REPORT_SCHEMA_VERSION = "1.0"
