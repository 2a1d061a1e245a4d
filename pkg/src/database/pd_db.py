import csv
import io
import json
import logging
from contextlib import contextmanager
from pathlib import Path
from typing import Generator, Iterable

import numpy as np
import pandas as pd
from pydantic import BaseModel

from src.database.schemas import OutputHeader
from src.error_trace.errorlogger import system_logger

logger = logging.getLogger(__name__)


@contextmanager
def output_file(path: str | Path) -> Generator[io.TextIOWrapper, None, None]:
    """Text handle for one output file; parent directories are created."""
    target = Path(path)
    try:
        target.parent.mkdir(parents=True, exist_ok=True)
        handle = open(target, "w", encoding="utf-8", newline="")
    except OSError as e:
        system_logger.error(e, additional_info={"path": str(target)}, exc_info=True)
        raise
    try:
        yield handle
    finally:
        handle.close()


def rows_to_frame(rows: Iterable[BaseModel]) -> pd.DataFrame:
    return pd.DataFrame([row.model_dump() for row in rows])


def _plain(value):
    if isinstance(value, (np.floating, np.integer, np.bool_)):
        return value.item()
    if isinstance(value, complex):
        return {"re": value.real, "im": value.imag}
    raise TypeError(f"not JSON serializable: {type(value).__name__}")


# ✅ CSV with a commented header block
def write_table(frame: pd.DataFrame, path: str | Path, header: OutputHeader) -> Path:
    with output_file(path) as handle:
        handle.write("\n".join(header.comment_lines()) + "\n")
        frame.to_csv(handle, index=False, quoting=csv.QUOTE_MINIMAL, float_format="%.15g", lineterminator="\n")
    logger.info("wrote %d rows to %s", len(frame), path)
    return Path(path)


# ✅ JSON, key-sorted so repeated runs are byte-identical
def write_json(payload: dict, path: str | Path, header: OutputHeader) -> Path:
    document = {"header": header.model_dump(), **payload}
    with output_file(path) as handle:
        handle.write(json.dumps(document, sort_keys=True, indent=2, ensure_ascii=False, default=_plain) + "\n")
    logger.info("wrote %s", path)
    return Path(path)


def write_rows(rows: Iterable[BaseModel], path: str | Path, header: OutputHeader, fmt: str = "csv") -> Path:
    rows = list(rows)
    if fmt == "json":
        return write_json({"rows": [row.model_dump() for row in rows]}, path, header)
    return write_table(rows_to_frame(rows), path, header)


def read_table(path: str | Path) -> tuple[dict, pd.DataFrame]:
    """Header fields and the table body of a file written by :func:`write_table`."""
    meta = {}
    with open(path, "r", encoding="utf-8") as handle:
        for line in handle:
            if not line.startswith("#"):
                break
            key, _, value = line[1:].partition(":")
            meta[key.strip()] = value.strip()
    return meta, pd.read_csv(path, comment="#")
