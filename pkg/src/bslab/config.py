"""Run configuration read from simple ``key = value`` files."""
from __future__ import annotations

from dataclasses import dataclass, fields, replace
from pathlib import Path

from .quad_arith import DEFAULT_PRECISION
from .sym_chars import DEGREE_CAP


@dataclass(frozen=True)
class Config:
    precision: int = DEFAULT_PRECISION
    cache_path: str | None = None
    q_max: int = 100
    degree_cap: int = DEGREE_CAP
    # imaginary sweep buckets compared by the Siegel-trend check
    siegel_low: tuple[int, int] = (9_000, 10_000)
    siegel_high: tuple[int, int] = (900_000, 1_000_000)
    threads: int = 1

    def __post_init__(self):
        if self.precision < 15:
            raise ValueError("precision must be at least 15 digits")
        if self.q_max < 2 or self.threads < 1:
            raise ValueError("q_max and threads must be positive")
        if not 1 <= self.degree_cap <= DEGREE_CAP:
            raise ValueError(f"degree_cap must lie in 1..{DEGREE_CAP}")
        for lo, hi in (self.siegel_low, self.siegel_high):
            if not 3 <= lo < hi:
                raise ValueError("sweep ranges need 3 <= lo < hi")

    def with_overrides(self, **kw) -> "Config":
        return replace(self, **{k: v for k, v in kw.items() if v is not None})


def _parse_value(name: str, raw: str, kind):
    if name in ("siegel_low", "siegel_high"):
        parts = [p.strip() for p in raw.split(",")]
        if len(parts) != 2:
            raise ValueError(f"{name} expects 'lo,hi'")
        return (int(parts[0]), int(parts[1]))
    if name == "cache_path":
        return raw or None
    return int(raw)


def load_config(path: str | Path | None) -> Config:
    if path is None:
        return Config()
    known = {f.name: f.type for f in fields(Config)}
    values = {}
    text = Path(path).read_text(encoding="utf-8")
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key = value")
        key, raw = (s.strip() for s in line.split("=", 1))
        if key not in known:
            raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
        try:
            values[key] = _parse_value(key, raw, known[key])
        except ValueError as exc:
            raise ValueError(f"{path}:{lineno}: {exc}") from None
    return Config(**values)
