from pathlib import Path

import numpy as np

from satkf.core.errors import OutputError
from satkf.core.logger import get_logger

logger = get_logger(__name__)


def emit(location: Path, emitter_cls: type, **bundle) -> Path:
    """
    Configure an emitter with the run bundle and write its file
    """
    emitter = emitter_cls(location)
    emitter.configure(**bundle)
    emitter.create()
    logger.info("wrote %s", emitter.path)
    return emitter.path


def make_folder(loc: Path):
    """make a folder in the given path"""
    try:
        loc.mkdir(exist_ok=True, parents=True)
    except OSError as e:
        raise OutputError(f"Could not create {loc}: {e}", data={"path": str(loc)})


def write_file(path: Path, content: str) -> None:
    """write text to a file"""
    try:
        path.write_text(content, encoding="utf-8")
    except OSError as e:
        raise OutputError(f"Could not write {path}: {e}", data={"path": str(path)})


def write_csv(path: Path, header: list[str], columns: list[np.ndarray], int_columns: int = 1) -> None:
    """
    write columns as CSV with a header row; the first `int_columns` columns
    are integers, the rest use 10 significant digits
    """
    data = np.column_stack(columns)
    fmt = ["%d"] * int_columns + ["%.10g"] * (data.shape[1] - int_columns)
    try:
        np.savetxt(path, data, fmt=fmt, delimiter=",", header=",".join(header), comments="")
    except OSError as e:
        raise OutputError(f"Could not write {path}: {e}", data={"path": str(path)})


def fmt4(value: float) -> str:
    """table cell at four decimals"""
    return f"{value:.4f}"
