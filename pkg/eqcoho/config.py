"""
eqcoho - Configuration
"""
import logging
import os

from dotenv import load_dotenv

load_dotenv()

log = logging.getLogger(__name__)


def _env_int(name: str, default: int, minimum: int = 0) -> int:
    raw = os.getenv(name, "").strip()
    if not raw:
        return default
    try:
        value = int(raw)
    except ValueError:
        log.warning("config: %s=%r is not an integer, using %d", name, raw, default)
        return default
    if value < minimum:
        log.warning("config: %s=%d is below %d, using %d", name, value, minimum, default)
        return default
    return value


# ── Size guards ────────────────────────────────────────────
# Polygon pipelines build n·2^(n-1) edge cells; past 12 vertices the H1 module
# alone has several thousand dimensions.
MAX_N = _env_int("EQCOHO_MAX_N", 12, minimum=3)

# ── Linear algebra ─────────────────────────────────────────
DENSE_LIMIT = _env_int("EQCOHO_DENSE_LIMIT", 512, minimum=1)
# a matrix above DENSE_LIMIT still goes dense when at least this share is nonzero
DENSE_FILL_RATIO = 1 / 16
# sparse matrices up to this many entries are eliminated and multiplied densely
# when fill-in would make the dict path slower; the H1 module at n = 12 has
# 8194² ≈ 67M entries (about 540 MB as int64)
DENSE_ELIMINATION_CELLS = _env_int("EQCOHO_DENSE_ELIMINATION_CELLS", 80_000_000, minimum=0)
# columns per panel in blocked dense elimination
RANK_BLOCK = 128
PRIME_BOUND = 2 ** 16

# ── Spectral sequence pages ────────────────────────────────
DEFAULT_WINDOW = _env_int("EQCOHO_DEFAULT_WINDOW", 8, minimum=1)

# ── Sweeps ─────────────────────────────────────────────────
WORKERS = _env_int("EQCOHO_WORKERS", 1, minimum=1)

# ── Logging ────────────────────────────────────────────────
LOG_LEVEL = os.getenv("EQCOHO_LOG_LEVEL", "WARNING").strip().upper() or "WARNING"
LOG_FORMAT = "%(asctime)s [eqcoho] %(levelname)s %(message)s"
LOG_DATEFMT = "%Y-%m-%d %H:%M:%S"
