import inspect
import sys
import traceback
from datetime import datetime
from enum import Enum
from pathlib import Path
from typing import Any, Dict, Optional

from src.config.appconfig import env_config
from src.config.settings import settings

RULE, THIN_RULE = "=" * 80, "-" * 80


class LogLevel(Enum):
    INFO = "INFO"
    WARNING = "WARNING"
    ERROR = "ERROR"


def _render(value: Any) -> str:
    """Floats in scientific notation, complex numbers as a+bi."""
    if isinstance(value, complex):
        return f"{value.real:.6e}{value.imag:+.6e}i"
    if isinstance(value, float):
        return f"{value:.6e}"
    if isinstance(value, (tuple, list)):
        return "(" + ", ".join(_render(v) for v in value) + ")"
    return str(value)


class Logger:
    """
    Writes one block per event to ``info.log``, ``warning.log`` or
    ``error.log`` under LOG_DIR. Each block carries the calling function, the
    run seed and any numerical context passed as ``additional_info``;
    identical blocks are written once per process.
    """

    def __init__(self, log_dir: str | None = None):
        self.log_dir = Path(log_dir or env_config.log_dir)
        self.log_files = {level: self.log_dir / f"{level.value.lower()}.log" for level in LogLevel}
        self.log_dir.mkdir(parents=True, exist_ok=True)
        self._seen: set[int] = set()

    @staticmethod
    def _callers() -> tuple[str, str]:
        outside = [frame.function for frame in inspect.stack() if frame.filename != __file__]
        outside += ["Unknown", "Unknown"]
        return outside[0], outside[1]

    def _block(
        self,
        level: LogLevel,
        message: str,
        error: Optional[BaseException] = None,
        additional_info: Optional[Dict[str, Any]] = None,
        exc_info: bool = False,
    ) -> str:
        function, parent = self._callers()
        lines = [
            RULE,
            f"TIMESTAMP: {datetime.now():%Y-%m-%d %H:%M:%S}",
            f"LEVEL: {level.value}",
            f"FUNCTION: {function} (called from {parent})",
            THIN_RULE,
            f"MESSAGE: {message}",
        ]
        if error is not None:
            lines += [f"ERROR: {type(error).__name__}: {error}"]
            if error.__cause__ is not None:
                lines += [f"CAUSED BY: {type(error.__cause__).__name__}: {error.__cause__}"]
            if exc_info and error.__traceback__ is not None:
                lines += ["TRACEBACK:", "".join(traceback.format_exception(type(error), error, error.__traceback__)).rstrip()]

        context = {"environment": env_config.env, "version": settings.VERSION, "seed": settings.SEED}
        context.update(additional_info or {})
        lines += [THIN_RULE, "CONTEXT:"]
        lines += [f"  {key}: {_render(value)}" for key, value in context.items()]
        lines += [RULE, ""]
        return "\n".join(lines)

    def _write(self, level: LogLevel, block: str) -> None:
        # repeated events differ only by their timestamp line
        key = hash("\n".join(line for line in block.splitlines() if not line.startswith("TIMESTAMP")))
        if key in self._seen:
            return
        try:
            self.log_dir.mkdir(parents=True, exist_ok=True)
            with open(self.log_files[level], "a", encoding="utf-8") as handle:
                handle.write(block + "\n")
            self._seen.add(key)
        except OSError as e:
            print(f"could not write {self.log_files[level]}: {e}", file=sys.stderr)

    def info(self, message: str, additional_info: Optional[Dict[str, Any]] = None) -> None:
        self._write(LogLevel.INFO, self._block(LogLevel.INFO, message, additional_info=additional_info))

    def warning(self, message: str, additional_info: Optional[Dict[str, Any]] = None) -> None:
        self._write(LogLevel.WARNING, self._block(LogLevel.WARNING, message, additional_info=additional_info))

    def error(self, error: BaseException, additional_info: Optional[Dict[str, Any]] = None, exc_info: bool = False) -> None:
        """
        Log a failed computation.

        Args:
            error: the exception raised by the computation
            additional_info: numerical context (case, ε, span, quantum numbers ...)
            exc_info: include the full traceback
        """
        self._write(LogLevel.ERROR, self._block(LogLevel.ERROR, "computation failed", error, additional_info, exc_info))


system_logger = Logger()
