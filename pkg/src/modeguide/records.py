"""Run records and the optional on-disk result cache.

Every command run can be captured as a :class:`RunRecord`: the resolved
parameter set, the command name, the primary outputs and enough
provenance (truncation, tolerances, oracle settings, package version) to
reproduce the run bit-identically.  Records serialize to JSON and round
trip losslessly; data files themselves never carry timestamps, so
identical flags give byte-identical primary outputs while the sidecar
record holds the when/how.

Expensive results (finite-difference oracle runs, acceptance artifacts)
can be cached across processes in the directory named by the
MODEGUIDE_CACHE environment variable; caching is disabled when the
variable is unset.
"""

from __future__ import annotations

import dataclasses
import datetime
import hashlib
import json
import os
from pathlib import Path
from typing import Any

__all__ = ["RunRecord", "cache_get", "cache_put", "cache_dir"]

CACHE_ENV = "MODEGUIDE_CACHE"


@dataclasses.dataclass
class RunRecord:
    """Reproducibility sidecar for one command invocation."""

    command: str
    config: dict[str, Any]
    outputs: dict[str, Any]
    provenance: dict[str, Any]
    created: str = ""

    def __post_init__(self) -> None:
        if not self.created:
            self.created = datetime.datetime.now(datetime.timezone.utc).isoformat()

    def to_json(self) -> str:
        return json.dumps(dataclasses.asdict(self), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "RunRecord":
        data = json.loads(text)
        return cls(**data)

    def replay_argv(self) -> list[str]:
        """Reconstruct the command line that regenerates this run's outputs."""
        argv = [self.command]
        for key, value in sorted(self.config.items()):
            if value is None or value is False:
                continue
            flag = "--" + key.replace("_", "-")
            if value is True:
                argv.append(flag)
            else:
                argv.extend([flag, str(value)])
        return argv


def cache_dir() -> Path | None:
    root = os.environ.get(CACHE_ENV)
    if not root:
        return None
    path = Path(root)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _cache_path(key: dict[str, Any]) -> Path | None:
    root = cache_dir()
    if root is None:
        return None
    blob = json.dumps(key, sort_keys=True).encode()
    return root / (hashlib.sha256(blob).hexdigest()[:24] + ".json")


def cache_get(key: dict[str, Any]) -> Any | None:
    path = _cache_path(key)
    if path is None or not path.exists():
        return None
    try:
        return json.loads(path.read_text())["payload"]
    except (json.JSONDecodeError, KeyError):
        return None


def cache_put(key: dict[str, Any], payload: Any) -> None:
    path = _cache_path(key)
    if path is None:
        return
    path.write_text(json.dumps({"key": key, "payload": payload}, sort_keys=True))
