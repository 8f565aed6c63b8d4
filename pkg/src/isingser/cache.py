"""On-disk cache of oracle series.

Records are JSON files named by a SHA-256 key over the oracle name, the
correlation, the order, the padding, the method and the engine version, so
an engine upgrade silently invalidates old entries.  Writes go to a
temporary file in the same directory followed by ``os.replace``.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from dataclasses import dataclass
from pathlib import Path

from .series import TruncatedSeries

ENGINE_VERSION = "isingser-engine-1"
ENV_VAR = "ISINGSER_CACHE"
DEFAULT_DIR = ".isingser-cache"


def cache_key(oracle: str, cid, order: int, padding, method: str = "flm", extra: str = "") -> str:
    ident = {
        "oracle": oracle,
        "id": list(cid.offset),
        "order": order,
        "padding": padding,
        "method": method,
        "extra": extra,
        "engine": ENGINE_VERSION,
    }
    blob = json.dumps(ident, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


@dataclass
class SeriesRecord:
    key: str
    series: TruncatedSeries
    provenance: dict
    engine: str = ENGINE_VERSION

    def to_json_obj(self) -> dict:
        return {"key": self.key, "series": self.series.to_json_obj(),
                "provenance": self.provenance, "engine": self.engine}

    @classmethod
    def from_json_obj(cls, obj: dict) -> "SeriesRecord":
        return cls(obj["key"], TruncatedSeries.from_json_obj(obj["series"]),
                   obj["provenance"], obj["engine"])


class SeriesCache:
    def __init__(self, directory: str | os.PathLike | None = None):
        self.directory = Path(directory or os.environ.get(ENV_VAR) or DEFAULT_DIR)

    def _path(self, key: str) -> Path:
        return self.directory / f"{key}.json"

    def get(self, key: str) -> SeriesRecord | None:
        try:
            obj = json.loads(self._path(key).read_text())
        except (FileNotFoundError, json.JSONDecodeError):
            return None
        if not isinstance(obj, dict) or obj.get("engine") != ENGINE_VERSION or obj.get("key") != key:
            return None
        try:
            return SeriesRecord.from_json_obj(obj)
        except (KeyError, TypeError, ValueError):
            return None

    def put(self, record: SeriesRecord) -> Path:
        self.directory.mkdir(parents=True, exist_ok=True)
        target = self._path(record.key)
        fd, tmp = tempfile.mkstemp(dir=self.directory, prefix=".tmp-", suffix=".json")
        try:
            with os.fdopen(fd, "w") as f:
                json.dump(record.to_json_obj(), f, sort_keys=True)
            os.replace(tmp, target)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
        return target

    def fetch(self, key: str, compute) -> tuple:
        """``(series, provenance, hit)``; ``compute()`` returns ``(series, provenance)``."""
        rec = self.get(key)
        if rec is not None:
            return rec.series, rec.provenance, True
        series, prov = compute()
        self.put(SeriesRecord(key, series, prov))
        return series, prov, False
