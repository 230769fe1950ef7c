"""Family-level statistics: Brauer-Siegel sweeps, tower invariants, the GBS functional."""
from __future__ import annotations

import csv
import io
import json
import os
import statistics
import threading
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence, TextIO

import mpmath

from .quad_arith import (
    CLASS_NUMBER_LIMIT,
    DEFAULT_PRECISION,
    FieldInvariants,
    class_numbers_imaginary,
    field_invariants,
    fundamental_discriminants,
    mpf_str,
)

SWEEP_COLUMNS = ("D", "h", "R", "g", "rho", "ratio")


@dataclass(frozen=True)
class FamilyRecord:
    D: int
    h: int
    R: mpmath.mpf
    g: mpmath.mpf
    rho: mpmath.mpf
    ratio: mpmath.mpf

    @classmethod
    def from_invariants(cls, inv: FieldInvariants) -> "FamilyRecord":
        return cls(inv.D, inv.h, inv.R, inv.g, inv.rho, inv.ratio)

    def row(self, prec: int) -> list[str]:
        return [str(self.D), str(self.h)] + [mpf_str(v, prec) for v in (self.R, self.g, self.rho, self.ratio)]


@dataclass(frozen=True)
class SweepSummary:
    sign: str
    lo: int
    hi: int
    count: int
    median_ratio: mpmath.mpf | None = None
    mean_ratio: mpmath.mpf | None = None
    min_ratio: mpmath.mpf | None = None
    max_ratio: mpmath.mpf | None = None
    min_stark_ratio: mpmath.mpf | None = None

    def to_json_dict(self, prec: int = DEFAULT_PRECISION) -> dict:
        out = {"sign": self.sign, "lo": self.lo, "hi": self.hi, "count": self.count}
        for key in ("median_ratio", "mean_ratio", "min_ratio", "max_ratio", "min_stark_ratio"):
            v = getattr(self, key)
            out[key] = None if v is None else mpf_str(v, prec)
        return out


def stark_ratio_monitor(records: Iterable) -> mpmath.mpf:
    """min rho / (1 - beta_hat) with 1 - beta_hat = 1/(4 log d) = 1/(8 g)."""
    vals = [r.rho * 8 * r.g for r in records]
    if not vals:
        raise ValueError("stark_ratio_monitor needs at least one record")
    return min(vals)


def summarize(sign: str, lo: int, hi: int, records: Sequence[FamilyRecord]) -> SweepSummary:
    if not records:
        return SweepSummary(sign, lo, hi, 0)
    ratios = [r.ratio for r in records]
    return SweepSummary(
        sign,
        lo,
        hi,
        len(records),
        median_ratio=statistics.median(ratios),
        mean_ratio=mpmath.fsum(ratios) / len(ratios),
        min_ratio=min(ratios),
        max_ratio=max(ratios),
        min_stark_ratio=stark_ratio_monitor(records),
    )


def sweep_records(
    sign: str,
    lo: int,
    hi: int,
    prec: int = DEFAULT_PRECISION,
    threads: int = 1,
    cache: "InvariantCache | None" = None,
) -> list[FamilyRecord]:
    if not 3 <= lo < hi <= CLASS_NUMBER_LIMIT:
        raise ValueError(f"sweep range must satisfy 3 <= lo < hi <= {CLASS_NUMBER_LIMIT}")
    discs = fundamental_discriminants(sign, lo, hi)
    if not discs:
        return []
    hs: dict[int, int] = {}
    if sign == "imaginary":
        # one batch pass is far cheaper than per-D reduction
        counts = class_numbers_imaginary(lo, hi)
        hs = {D: int(counts[-D - lo]) for D in discs}

    found: dict[int, FieldInvariants] = {}
    if cache is not None:
        for D in discs:
            inv = cache.get(D)
            if inv is not None and inv.precision == prec:
                found[D] = inv
    todo = [D for D in discs if D not in found]
    if threads > 1 and len(todo) > 1:
        # mpmath keeps its precision in process-global state, so workers are processes
        size = -(-len(todo) // (4 * threads))
        chunks = [[(D, hs.get(D)) for D in todo[i : i + size]] for i in range(0, len(todo), size)]
        with ProcessPoolExecutor(max_workers=threads) as pool:
            for part in pool.map(_invariants_chunk, chunks, [prec] * len(chunks)):
                found.update((inv.D, inv) for inv in part)
    else:
        found.update((D, field_invariants(D, prec, h=hs.get(D))) for D in todo)
    if cache is not None:
        # single writer: only this process appends
        for D in todo:
            cache.put(found[D])
    return [FamilyRecord.from_invariants(found[D]) for D in discs]


def _invariants_chunk(items: list[tuple[int, int | None]], prec: int) -> list[FieldInvariants]:
    return [field_invariants(D, prec, h=h) for D, h in items]


def write_records(records: Sequence[FamilyRecord], out: TextIO, prec: int) -> None:
    w = csv.writer(out, lineterminator="\n")
    w.writerow(SWEEP_COLUMNS)
    for r in records:
        w.writerow(r.row(prec))


def sweep(
    sign: str,
    lo: int,
    hi: int,
    out: TextIO | str | os.PathLike | None = None,
    prec: int = DEFAULT_PRECISION,
    threads: int = 1,
    cache: "InvariantCache | None" = None,
) -> SweepSummary:
    """Invariants of every quadratic field with lo <= |D| <= hi, ordered by |D|.

    Records go to ``out`` as CSV (a path or text stream) when given.
    """
    records = sweep_records(sign, lo, hi, prec, threads, cache)
    if isinstance(out, (str, os.PathLike)):
        with open(out, "w", encoding="utf-8", newline="") as fh:
            write_records(records, fh, prec)
    elif out is not None:
        write_records(records, out, prec)
    return summarize(sign, lo, hi, records)


# --- towers -------------------------------------------------------------


@dataclass(frozen=True)
class TowerLevel:
    level: int
    n: int
    r1: int
    r2: int
    g: mpmath.mpf
    counts: dict[int, int | None] = field(default_factory=dict)


@dataclass(frozen=True)
class TowerData:
    levels: tuple[TowerLevel, ...]

    def __post_init__(self):
        for lv in self.levels:
            if lv.r1 < 0 or lv.r2 < 0 or lv.r1 + 2 * lv.r2 != lv.n:
                raise ValueError(f"level {lv.level}: r1 + 2 r2 != n")
            if not lv.g > 0:
                raise ValueError(f"level {lv.level}: g must be positive")
        for a, b in zip(self.levels, self.levels[1:]):
            if not b.g > a.g:
                raise ValueError(f"g is not strictly increasing at level {b.level}")

    @property
    def qs(self) -> list[int]:
        seen = set()
        for lv in self.levels:
            seen.update(lv.counts)
        return sorted(seen)

    @classmethod
    def from_csv(cls, text: str, prec: int = DEFAULT_PRECISION) -> "TowerData":
        lines = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
        reader = csv.DictReader(lines)
        base = ["level", "n", "r1", "r2", "g"]
        if reader.fieldnames is None or list(reader.fieldnames[:5]) != base:
            raise ValueError("tower CSV must start with columns level,n,r1,r2,g")
        qcols = reader.fieldnames[5:]
        for c in qcols:
            if not c.startswith("Nq_") or not c[3:].isdigit():
                raise ValueError(f"unexpected tower column {c!r}")
        levels = []
        with mpmath.workdps(prec):
            for row in reader:
                counts = {int(c[3:]): (int(row[c]) if row[c] not in (None, "") else None) for c in qcols}
                levels.append(
                    TowerLevel(int(row["level"]), int(row["n"]), int(row["r1"]), int(row["r2"]), mpmath.mpf(row["g"]), counts)
                )
        return cls(tuple(levels))

    def to_csv(self, prec: int = DEFAULT_PRECISION) -> str:
        qs = self.qs
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["level", "n", "r1", "r2", "g"] + [f"Nq_{q}" for q in qs])
        for lv in self.levels:
            cnt = [lv.counts.get(q) for q in qs]
            w.writerow([lv.level, lv.n, lv.r1, lv.r2, mpf_str(lv.g, prec)] + ["" if c is None else c for c in cnt])
        return buf.getvalue()


@dataclass(frozen=True)
class TVInvariants:
    phi_R: mpmath.mpf
    phi_C: mpmath.mpf
    phi_q: dict[int, mpmath.mpf]
    diagnostics: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.phi_R < 0 or self.phi_C < 0 or any(v < 0 for v in self.phi_q.values()):
            raise ValueError("phi invariants must be nonnegative")


def phi_invariants(tower: TowerData, q_max: int = 100, qs: Sequence[int] | None = None, prec: int = DEFAULT_PRECISION) -> TVInvariants:
    """Estimate each phi by its ratio at the last level; the whole sequence is kept in diagnostics."""
    if len(tower.levels) < 2:
        raise ValueError("a tower needs at least two levels")
    wanted = [q for q in (tower.qs if qs is None else qs) if q <= q_max]
    with mpmath.workdps(prec):
        diag: dict = {
            "R": [mpmath.mpf(lv.r1) / lv.g for lv in tower.levels],
            "C": [mpmath.mpf(lv.r2) / lv.g for lv in tower.levels],
        }
        for q in wanted:
            seq = []
            for lv in tower.levels:
                c = lv.counts.get(q)
                if c is None:
                    raise ValueError(f"missing N_{q} at tower level {lv.level}")
                seq.append(mpmath.mpf(c) / lv.g)
            diag[q] = seq
    return TVInvariants(diag["R"][-1], diag["C"][-1], {q: diag[q][-1] for q in wanted}, diag)


@dataclass(frozen=True)
class GBSValue:
    full: mpmath.mpf
    residue_form: mpmath.mpf
    tail: mpmath.mpf


def gbs_rhs(phi: TVInvariants, q_max: int | None = None, prec: int = DEFAULT_PRECISION) -> GBSValue:
    """1 + sum phi_q log(q/(q-1)) - phi_R log 2 - phi_C log 2 pi, and the bare q-sum.

    Terms with q > q_max are left out of both sums and bounded instead by
    sum phi_q / (q - 1), returned as ``tail``.
    """
    with mpmath.workdps(prec):
        inside = [(q, v) for q, v in sorted(phi.phi_q.items()) if q_max is None or q <= q_max]
        outside = [(q, v) for q, v in sorted(phi.phi_q.items()) if q_max is not None and q > q_max]
        for q, _ in inside + outside:
            if q < 2:
                raise ValueError(f"invalid prime power {q}")
        residue = mpmath.fsum(v * mpmath.log(mpmath.mpf(q) / (q - 1)) for q, v in inside)
        tail = mpmath.fsum(v / (q - 1) for q, v in outside)
        full = 1 + residue - phi.phi_R * mpmath.log(2) - phi.phi_C * mpmath.log(2 * mpmath.pi)
        return GBSValue(full, residue, tail)


def condition_ratios(pairs: Sequence[tuple], prec: int = DEFAULT_PRECISION) -> tuple[list[mpmath.mpf], bool]:
    """log d_N / log d_L for each pair, and whether the sequence is strictly increasing."""
    out = []
    with mpmath.workdps(prec):
        for d_L, d_N in pairs:
            d_L, d_N = mpmath.mpf(d_L), mpmath.mpf(d_N)
            if d_L <= 1 or d_N <= 1:
                raise ValueError("discriminants must exceed 1 so their logs are positive")
            out.append(mpmath.log(d_N) / mpmath.log(d_L))
    trend = len(out) >= 2 and all(b > a for a, b in zip(out, out[1:]))
    return out, trend


# --- cache --------------------------------------------------------------

_PATH_LOCKS: dict[str, threading.Lock] = {}
_PATH_LOCKS_GUARD = threading.Lock()


def _lock_for(path: Path) -> threading.Lock:
    key = str(path.resolve())
    with _PATH_LOCKS_GUARD:
        return _PATH_LOCKS.setdefault(key, threading.Lock())


class CacheCorruptError(ValueError):
    pass


class InvariantCache:
    """Append-only JSON-lines store of FieldInvariants keyed by D.

    Writes in this process go through one lock per file path.
    """

    def __init__(self, path: str | os.PathLike):
        self.path = Path(path)
        self._lock = _lock_for(self.path)
        self._index: dict[int, dict] = {}
        self._offset = 0
        self._lineno = 0

    def _refresh(self) -> None:
        if not self.path.exists():
            self._index, self._offset, self._lineno = {}, 0, 0
            return
        with open(self.path, "r", encoding="utf-8") as fh:
            fh.seek(self._offset)
            while True:
                line = fh.readline()
                if not line:
                    break
                if not line.endswith("\n"):
                    # partial trailing write: stop before it
                    break
                self._lineno += 1
                lineno = self._lineno
                self._offset = fh.tell()
                if not line.strip():
                    continue
                try:
                    obj = json.loads(line)
                    D = int(obj["D"])
                    FieldInvariants.from_json_dict(obj)
                except (ValueError, KeyError, TypeError) as exc:
                    raise CacheCorruptError(f"{self.path}:{lineno}: corrupt cache line ({exc})") from None
                self._index.setdefault(D, obj)

    def get(self, D: int) -> FieldInvariants | None:
        with self._lock:
            self._refresh()
            obj = self._index.get(D)
        return None if obj is None else FieldInvariants.from_json_dict(obj)

    def put(self, inv: FieldInvariants) -> None:
        rec = inv.to_json_dict()
        with self._lock:
            self._refresh()
            old = self._index.get(inv.D)
            if old is not None:
                if old != rec:
                    raise ValueError(f"cache already holds a different record for D={inv.D}")
                return
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with open(self.path, "a", encoding="utf-8") as fh:
                fh.write(json.dumps(rec, sort_keys=True) + "\n")
            self._refresh()

    def __len__(self) -> int:
        with self._lock:
            self._refresh()
            return len(self._index)
