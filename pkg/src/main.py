# import libraries
import logging
import os

from src.api.cli import cli
from src.config.appconfig import env_config
from src.config.settings import settings
from src.error_trace.errorlogger import system_logger

# === Log file paths ===
LOG_DIR = env_config.log_dir
LOG_FILES = {
    "info": os.path.join(LOG_DIR, "info.log"),
    "warning": os.path.join(LOG_DIR, "warning.log"),
    "error": os.path.join(LOG_DIR, "error.log"),
}

# === Logging format ===
log_format = logging.Formatter("%(asctime)s - %(levelname)s - %(name)s - %(message)s")

logger = logging.getLogger(__name__)


def configure_logging() -> None:
    """Per-level file handlers under LOG_DIR plus a console handler on stderr."""
    os.makedirs(LOG_DIR, exist_ok=True)

    # === Set up handlers per log level ===
    handlers = []
    for name, level in (("info", logging.INFO), ("warning", logging.WARNING), ("error", logging.ERROR)):
        handler = logging.FileHandler(LOG_FILES[name], encoding="utf-8")
        handler.setLevel(level)
        handler.setFormatter(log_format)
        handlers.append(handler)

    # console output stays quiet so command output is readable
    console = logging.StreamHandler()
    console.setLevel(max(logging.WARNING, logging.getLevelName(env_config.log_level)))
    console.setFormatter(log_format)
    handlers.append(console)

    # === Attach handlers to root logger ===
    root_logger = logging.getLogger()
    root_logger.setLevel(logging.getLevelName(env_config.log_level))
    root_logger.handlers = []
    for handler in handlers:
        root_logger.addHandler(handler)


def main() -> None:
    configure_logging()
    system_logger.info(f"{settings.PROJECT_NAME} {settings.VERSION} starting", additional_info={"env": env_config.env})
    cli(prog_name="monopole-triplet")


# === Entry point ===
if __name__ == "__main__":
    main()
