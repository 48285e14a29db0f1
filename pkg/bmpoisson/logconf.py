import logging
import os

_FORMAT = "[bmpoisson] %(levelname)s: %(message)s"


def _env_level(default: int) -> int:
    raw = os.getenv("BMPOISSON_LOGLEVEL")
    if not raw:
        return default
    if raw.isdigit():
        return int(raw)
    level = logging.getLevelName(raw.upper())
    return level if isinstance(level, int) else default


def configure_logger(level: int = logging.INFO, name: str = "bmpoisson") -> logging.Logger:
    root = logging.getLogger("bmpoisson")
    if not any(isinstance(h, logging.StreamHandler) for h in root.handlers):
        handler = logging.StreamHandler()
        handler.setFormatter(logging.Formatter(_FORMAT))
        root.addHandler(handler)
    root.setLevel(_env_level(level))
    root.propagate = False
    return logging.getLogger(name)
