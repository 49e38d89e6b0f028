"""
VSBraid - Configuration
========================
Process-wide defaults. Read once at import from the environment, after loading
a .env file from the project root (falls back to the current directory).

  VSB_MAX_STATES            states stored before a search gives up   (2000000)
  VSB_MAX_DEPTH             combined depth of both search frontiers  (24)
  VSB_EXTRA_LENGTH          word length allowed above the endpoints   (6)
  VSB_EXTRA_STRANDS         strands allowed above the endpoints       (2)
  VSB_REDUCTION_MAX_STATES  per-relation budget of verify_reduction   (20000)
  VSB_VERIFY_WORKERS        threads used to verify lemma instances    (4)
  VSB_SCRIPTS_DIR           directory of bundled rewrite scripts
  VSB_LOG_LEVEL             logging level used by the CLI             (WARNING)
"""

import logging
import os
from pathlib import Path

from dotenv import load_dotenv

log = logging.getLogger(__name__)

load_dotenv(Path(__file__).resolve().parent.parent / ".env")
load_dotenv()


def _env_int(name: str, default: int) -> int:
    raw = os.getenv(name, "")
    if not raw.strip():
        return default
    try:
        value = int(raw)
    except ValueError:
        log.warning("[config] %s=%r is not an integer, using %d", name, raw, default)
        return default
    if value < 1:
        log.warning("[config] %s=%d must be positive, using %d", name, value, default)
        return default
    return value


# ---------------------------------------------------------------------------
# Search budgets
# ---------------------------------------------------------------------------
DEFAULT_MAX_STATES = _env_int("VSB_MAX_STATES", 2_000_000)
DEFAULT_MAX_DEPTH = _env_int("VSB_MAX_DEPTH", 24)
EXTRA_LENGTH = _env_int("VSB_EXTRA_LENGTH", 6)
EXTRA_STRANDS = _env_int("VSB_EXTRA_STRANDS", 2)
REDUCTION_MAX_STATES = _env_int("VSB_REDUCTION_MAX_STATES", 20_000)

# ---------------------------------------------------------------------------
# Verification
# ---------------------------------------------------------------------------
VERIFY_WORKERS = _env_int("VSB_VERIFY_WORKERS", 4)
SCRIPTS_DIR = Path(os.getenv("VSB_SCRIPTS_DIR", "") or Path(__file__).resolve().parent / "scripts")

LOG_LEVEL = os.getenv("VSB_LOG_LEVEL", "WARNING").upper()
