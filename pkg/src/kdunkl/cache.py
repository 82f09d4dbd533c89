"""On-disk memo of generated Schubert and Grothendieck polynomials.

One JSON file per (kind, permutation, rank). Unreadable or mismatched
files are treated as misses and overwritten on the next store.
"""

from __future__ import annotations

import json
import logging
import os
import tempfile
from pathlib import Path
from typing import Optional

from .perm import Permutation
from .polyring import SparsePolynomial

SCHEMA_VERSION = 1

log = logging.getLogger(__name__)


class PolynomialCache:
    def __init__(self, directory: str | os.PathLike):
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)

    def path(self, kind: str, w: Permutation, rank: int) -> Path:
        word = "-".join(map(str, w.word))
        return self.directory / f"{kind}_{word}_r{rank}.json"

    def get(self, kind: str, w: Permutation, rank: int) -> Optional[SparsePolynomial]:
        path = self.path(kind, w, rank)
        try:
            data = json.loads(path.read_text())
        except FileNotFoundError:
            return None
        except (OSError, ValueError) as exc:
            log.warning("ignoring unreadable cache entry %s: %s", path, exc)
            return None
        try:
            if (data["schema"] != SCHEMA_VERSION or data["kind"] != kind
                    or data["perm"] != list(w.word) or data["rank"] != rank):
                return None
            return SparsePolynomial.from_json(data["poly"])
        except (KeyError, TypeError, ValueError) as exc:
            log.warning("ignoring malformed cache entry %s: %s", path, exc)
            return None

    def put(self, kind: str, w: Permutation, rank: int, poly: SparsePolynomial) -> None:
        data = {"schema": SCHEMA_VERSION, "kind": kind, "perm": list(w.word), "rank": rank,
                "poly": poly.to_json()}
        path = self.path(kind, w, rank)
        fd, tmp = tempfile.mkstemp(dir=self.directory, suffix=".tmp")
        try:
            with os.fdopen(fd, "w") as fh:
                json.dump(data, fh, sort_keys=True)
            os.replace(tmp, path)
        except OSError as exc:
            log.warning("could not write cache entry %s: %s", path, exc)
            if os.path.exists(tmp):
                os.unlink(tmp)
