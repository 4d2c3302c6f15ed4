"""
Runtime settings for regforge.
Values come from the environment (optionally a .env file) with defaults suited to desk-scale runs.
"""
import os
import logging
from functools import lru_cache
from pydantic import BaseModel
from dotenv import load_dotenv

load_dotenv()

DEFAULT_PAIR_CAP = 32
DEFAULT_POLYAD_EDGE_CAP = 18
DEFAULT_EDIT_EDGE_CAP = 12
DEFAULT_EDIT_CELL_CAP = 16
DEFAULT_TOWER_BITS = 2 ** 20


def _env_int(name: str, default: int) -> int:
    """Read an integer environment variable, falling back to default on bad values."""
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw)
    except ValueError:
        logging.getLogger(__name__).warning("Ignoring non-integer %s=%r", name, raw)
        return default


class Settings(BaseModel):
    """Enumeration caps and engine budgets"""
    pair_cap: int = DEFAULT_PAIR_CAP
    polyad_edge_cap: int = DEFAULT_POLYAD_EDGE_CAP
    edit_edge_cap: int = DEFAULT_EDIT_EDGE_CAP
    edit_cell_cap: int = DEFAULT_EDIT_CELL_CAP
    tower_bits: int = DEFAULT_TOWER_BITS
    log_level: str = "INFO"


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    """Build settings from the environment. REGFORGE_CAP_BITS overrides every enumeration cap."""
    override = _env_int("REGFORGE_CAP_BITS", 0)
    settings = Settings(
        pair_cap=_env_int("REGFORGE_PAIR_CAP", DEFAULT_PAIR_CAP),
        polyad_edge_cap=_env_int("REGFORGE_POLYAD_EDGE_CAP", DEFAULT_POLYAD_EDGE_CAP),
        edit_edge_cap=_env_int("REGFORGE_EDIT_EDGE_CAP", DEFAULT_EDIT_EDGE_CAP),
        edit_cell_cap=_env_int("REGFORGE_EDIT_CELL_CAP", DEFAULT_EDIT_CELL_CAP),
        tower_bits=_env_int("REGFORGE_TOWER_BITS", DEFAULT_TOWER_BITS),
        log_level=os.getenv("REGFORGE_LOG_LEVEL", "INFO"),
    )
    if override > 0:
        settings = settings.model_copy(update={
            "pair_cap": override,
            "polyad_edge_cap": override,
            "edit_edge_cap": override,
            "edit_cell_cap": override,
        })
    return settings
