"""Plain ``key=value`` configuration with documented defaults.

Lines starting with ``#`` and blank lines are ignored.  The file path comes
from the ``ZECKPRIMES_CONFIG`` environment variable or an explicit argument;
command-line flags override whatever the file sets.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, fields
from pathlib import Path

ENV_VAR = "ZECKPRIMES_CONFIG"


@dataclass
class Settings:
    clt_sup_tol: float = 0.01
    clt_modal_tol: float = 0.10
    residue_tol: float = 0.01
    expsum_ratio_tol: float = 0.1
    memory_budget: int = 2 << 30
    threads: int = 1

    @classmethod
    def load(cls, path: str | os.PathLike | None = None) -> Settings:
        path = path or os.environ.get(ENV_VAR)
        settings = cls()
        if path:
            settings.update(parse_config(Path(path).read_text(encoding="utf-8")))
        return settings

    def update(self, values: dict[str, str]) -> None:
        types = {f.name: f.type for f in fields(self)}
        for key, raw in values.items():
            if key not in types:
                raise ValueError(f"unknown config key {key!r}")
            kind = int if types[key] in (int, "int") else float
            setattr(self, key, kind(raw))


def parse_config(text: str) -> dict[str, str]:
    out: dict[str, str] = {}
    for number, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ValueError(f"config line {number} is not key=value: {line!r}")
        out[key.strip()] = value.strip()
    return out
