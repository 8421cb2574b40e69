from __future__ import annotations

import os
import tempfile
from pathlib import Path
from typing import Union

from ..errors import ReportWriteError


def atomic_write_text(path: Union[str, Path], content: str, encoding: str = "utf-8") -> Path:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(prefix=path.name, dir=str(path.parent))
    except OSError as e:
        raise ReportWriteError(f"cannot write {path}: {e}") from e
    try:
        with os.fdopen(fd, "w", encoding=encoding) as f:
            f.write(content)
        os.replace(tmp, path)
    except OSError as e:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise ReportWriteError(f"cannot write {path}: {e}") from e
    return path
