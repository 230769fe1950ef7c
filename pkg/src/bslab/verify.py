"""Named identity checks, one per acceptance criterion.

Each check returns a list of ``CheckLine``; the report is plain text with a
single status line per check and contains no timings, so repeated runs are
byte-identical.  The ``quick`` suite runs every check on scaled-down ranges.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import mpmath
import numpy as np

from . import __version__
from .config import Config
from .family_sweep import TVInvariants, gbs_rhs, sweep_records
from .lfunc import Field, L1_exact, artin_product_coefficients, dedekind_coefficients, mellin_residual
from .quad_arith import (
    class_number,
    field_invariants,
    fundamental_discriminants,
    roots_of_unity,
)
from .regions import (
    almost_sn_region,
    both_zeros_bound,
    murty_scale_cubed,
    murty_width_le_stark,
    stark_region,
    zero_scan,
)
from .sym_chars import (
    Composition,
    Partition,
    character_table,
    decompose,
    decompose_product,
    hook,
    hook_dimension,
    induce_from_young,
    induce_product,
    kostka,
)

BIQUADRATIC_PAIRS = [(-4, 8), (5, 8), (-3, 5), (-4, 5), (-3, -4), (-7, 13), (-8, 12), (12, 13), (-11, 17), (-20, 5)]
MELLIN_FIELDS = [(), (-3,), (-4,), (5,)]
GBS_SEED = 20240601


@dataclass(frozen=True)
class CheckLine:
    status: str  # PASS | FAIL | WARN
    name: str
    detail: str

    def __str__(self) -> str:
        return f"{self.status} {self.name}: {self.detail}"


@dataclass(frozen=True)
class Sizes:
    hook_m: range
    twisted_m: range
    orth_n: range
    young_n: tuple[int, ...]
    cnf_bound: int
    residue_bound: int
    biquad_X: int
    mellin_X: tuple[int, int]
    nesting_grid: int
    scan_bound: int
    scan_points: int
    gbs_trials: int


FULL = Sizes(range(5, 9), range(2, 8), range(1, 9), (8, 9), 10**4, 10**4, 10**4, (10**4, 10**6), 1000, 500, 1000, 100)
QUICK = Sizes(range(5, 7), range(2, 6), range(1, 7), (8,), 1000, 500, 2000, (10**3, 10**5), 100, 60, 200, 20)


def _ok(flag: bool) -> str:
    return "PASS" if flag else "FAIL"


def check_hook_decomposition(sz: Sizes, cfg: Config) -> list[CheckLine]:
    bad = []
    count = 0
    for m in sz.hook_m:
        for i in range(1, m):
            got = decompose(induce_from_young(Composition((m - i, i), (False, True))))
            if got != sorted([(hook(m, i), 1), (hook(m, i + 1), 1)], key=lambda t: _table_pos(t[0])):
                bad.append(f"m={m},i={i}")
            count += 1
    return [CheckLine(_ok(not bad), "hook_decomposition", f"{count} cases m={_span(sz.hook_m)}" + _bad(bad))]


def _table_pos(lam: Partition) -> int:
    return character_table(lam.n).partitions.index(lam)


def _span(r: range) -> str:
    return f"{r.start}..{r.stop - 1}"


def _bad(bad: list) -> str:
    return "" if not bad else "; failures " + " ".join(map(str, bad[:5]))


def check_twisted_hook(sz: Sizes, cfg: Config) -> list[CheckLine]:
    bad = []
    count = 0
    for m in sz.twisted_m:
        for i in range(1, m):
            got = decompose_product(induce_product(Composition((m - i, i), (False, True)), twist=True))
            want = {(hook(m, i), True, 1), (hook(m, i + 1), True, 1)}
            if set(got) != want or len(got) != 2:
                bad.append(f"m={m},i={i}")
            count += 1
    return [CheckLine(_ok(not bad), "twisted_hook_decomposition", f"{count} cases m={_span(sz.twisted_m)}" + _bad(bad))]


def check_orthogonality(sz: Sizes, cfg: Config) -> list[CheckLine]:
    bad = []
    for n in sz.orth_n:
        t = character_table(n)
        order = math.factorial(n)
        for a, ra in enumerate(t.rows):
            for b in range(a, len(t.rows)):
                rb = t.rows[b]
                s = sum(c * x * y for c, x, y in zip(t.class_sizes, ra, rb))
                if s != (order if a == b else 0):
                    bad.append(f"n={n}:{t.partitions[a]}|{t.partitions[b]}")
    return [CheckLine(_ok(not bad), "orthogonality", f"row orthogonality exact for n={_span(sz.orth_n)}" + _bad(bad))]


def hook_only_young_decomposition(n: int) -> list[tuple[Partition, int]]:
    """Hook-only candidate 1 + 2 rho_(n-1) + rho_(n-2) + rho_(n-3), with rho_(n-k) the hook (n-k, 1^k)."""
    return [(hook(n, 1), 1), (hook(n, 2), 2), (hook(n, 3), 1), (hook(n, 4), 1)]


def check_young_audit(sz: Sizes, cfg: Config) -> list[CheckLine]:
    lines = []
    bad = []
    dims = []
    for n in sz.young_n:
        content = (n - 4, 2, 2)
        got = decompose(induce_from_young(Composition(content)))
        oracle = [(lam, kostka(lam, content)) for lam in character_table(n).partitions]
        oracle = [(lam, k) for lam, k in oracle if k]
        total = sum(k * hook_dimension(lam) for lam, k in got)
        expect = n * (n - 1) * (n - 2) * (n - 3) // 4
        if got != oracle or total != expect:
            bad.append(f"n={n}")
        dims.append(f"n={n} dim {total}")
    lines.append(CheckLine(_ok(not bad), "young_module_audit", "Kostka match, " + ", ".join(dims) + _bad(bad)))
    for n in sz.young_n:
        candidate = hook_only_young_decomposition(n)
        pdim = sum(k * hook_dimension(lam) for lam, k in candidate)
        expect = n * (n - 1) * (n - 2) * (n - 3) // 4
        k_hook = kostka(hook(n, 4), (n - 4, 2, 2))
        lines.append(
            CheckLine(
                "WARN",
                "hook_only_young_decomposition",
                f"n={n}: hook-only decomposition has dimension {pdim}, induced module has {expect}; "
                f"Kostka([{hook(n, 4)}], [{n - 4},2,2]) = {k_hook}",
            )
        )
    return lines


def _negative_fundamentals(bound: int) -> list[int]:
    return fundamental_discriminants("imaginary", 3, bound)


def check_class_numbers(sz: Sizes, cfg: Config) -> list[CheckLine]:
    bad = []
    discs = _negative_fundamentals(sz.cnf_bound)
    for D in discs:
        h = class_number(D)
        with mpmath.workdps(cfg.precision):
            analytic = L1_exact(D, cfg.precision) * roots_of_unity(D) * mpmath.sqrt(-D) / (2 * mpmath.pi)
            k = int(mpmath.nint(analytic))
            if k != h or abs(analytic - k) > mpmath.mpf(10) ** (-(cfg.precision - 10)):
                bad.append(D)
    return [CheckLine(_ok(not bad), "class_number_crosscheck", f"{len(discs)} discriminants -{sz.cnf_bound}<=D<0, {len(bad)} mismatches" + _bad(bad))]


def check_residues(sz: Sizes, cfg: Config) -> list[CheckLine]:
    bad = []
    worst = mpmath.mpf(0)
    discs = _negative_fundamentals(sz.residue_bound) + fundamental_discriminants("real", 3, sz.residue_bound)
    tol = mpmath.mpf("1e-10")
    for D in discs:
        inv = field_invariants(D, cfg.precision)
        with mpmath.workdps(cfg.precision):
            diff = abs(inv.rho - L1_exact(D, cfg.precision))
        worst = max(worst, diff)
        if not diff < tol:
            bad.append(D)
    return [
        CheckLine(
            _ok(not bad),
            "residue_crosscheck",
            f"{len(discs)} discriminants |D|<={sz.residue_bound}, max deviation {mpmath.nstr(worst, 3)}" + _bad(bad),
        )
    ]


def check_biquadratic(sz: Sizes, cfg: Config) -> list[CheckLine]:
    bad = []
    for D1, D2 in BIQUADRATIC_PAIRS:
        fld = Field((D1, D2))
        if not np.array_equal(dedekind_coefficients(fld, sz.biquad_X).coefficients, artin_product_coefficients(fld, sz.biquad_X)):
            bad.append(f"({D1},{D2})")
    return [CheckLine(_ok(not bad), "biquadratic_factorization", f"{len(BIQUADRATIC_PAIRS)} pairs, n<={sz.biquad_X}" + _bad(bad))]


def check_siegel(sz: Sizes, cfg: Config, quick: bool) -> list[CheckLine]:
    if quick:
        low, high = (900, 1000), (90_000, 100_000)
    else:
        low, high = cfg.siegel_low, cfg.siegel_high
    import statistics

    meds = []
    for lo, hi in (low, high):
        recs = sweep_records("imaginary", lo, hi, cfg.precision, cfg.threads)
        meds.append(statistics.median([r.ratio for r in recs]))
    a, b = meds
    ok = b > a and all(mpmath.mpf("0.5") < m < mpmath.mpf("1.05") for m in meds)
    return [
        CheckLine(
            _ok(ok),
            "siegel_trend",
            f"median ratio {mpmath.nstr(a, 6)} on [{low[0]},{low[1]}], {mpmath.nstr(b, 6)} on [{high[0]},{high[1]}]",
        )
    ]


def check_gbs(sz: Sizes, cfg: Config) -> list[CheckLine]:
    zero = gbs_rhs(TVInvariants(mpmath.mpf(0), mpmath.mpf(0), {}), prec=cfg.precision)
    ok_zero = zero.full == 1 and zero.residue_form == 0
    rng = random.Random(GBS_SEED)
    qs = [2, 3, 4, 5, 7, 8, 9, 11, 13, 16]
    worst = mpmath.mpf(0)
    with mpmath.workdps(cfg.precision):
        for _ in range(sz.gbs_trials):
            phi = TVInvariants(
                mpmath.mpf(rng.random()), mpmath.mpf(rng.random()), {q: mpmath.mpf(rng.random()) for q in qs}
            )
            v = gbs_rhs(phi, prec=cfg.precision)
            lhs = v.full - v.residue_form
            rhs = 1 - phi.phi_R * mpmath.log(2) - phi.phi_C * mpmath.log(2 * mpmath.pi)
            worst = max(worst, abs(lhs - rhs))
        tol = mpmath.mpf(10) ** (-(cfg.precision - 3))
    ok = ok_zero and worst < tol
    return [
        CheckLine(
            _ok(ok),
            "gbs_degeneration",
            f"zero phi gives ({mpmath.nstr(zero.full, 3)}, {mpmath.nstr(zero.residue_form, 3)}); "
            f"{sz.gbs_trials} random phi, max identity error {mpmath.nstr(worst, 3)}",
        )
    ]


def check_mellin(sz: Sizes, cfg: Config) -> list[CheckLine]:
    x_small, x_big = sz.mellin_X
    parts = []
    flipped = []
    ok = True
    for discs in MELLIN_FIELDS:
        fld = Field(discs)
        a = mellin_residual(fld, 2, x_small, cfg.precision)
        b = mellin_residual(fld, 2, x_big, cfg.precision)
        ok = ok and b.residual < mpmath.mpf("0.01") and b.residual < a.residual
        parts.append(f"{fld}: {mpmath.nstr(a.residual, 3)} -> {mpmath.nstr(b.residual, 3)}")
        flipped.append(f"{fld}: {mpmath.nstr(b.flipped_sign_residual, 3)}")
    return [
        CheckLine(_ok(ok), "mellin_identity", f"s=2, X={x_small}->{x_big}; " + ", ".join(parts)),
        CheckLine(
            "WARN",
            "mellin_flipped_sign",
            "with a plus sign in front of the integral the residual stays at " + ", ".join(flipped),
        ),
    ]


def check_nesting(sz: Sizes, cfg: Config) -> list[CheckLine]:
    # 10 group parameters m times nesting_grid/10 values of log d
    ms = 10
    bad = []
    count = 0
    logs = [Fraction(k, 7) + Fraction(1, 3) for k in range(1, max(1, sz.nesting_grid // ms) + 1)]
    for m in range(1, ms + 1):
        for x in logs:
            stark = stark_region(x).width
            count += 1
            if not almost_sn_region(m, x).width <= stark:
                bad.append(f"almost_sn m={m},x={x}")
            for t in (1, 2, 3):
                if not both_zeros_bound(t, m, x)[0].width <= stark:
                    bad.append(f"both t={t},m={m},x={x}")
            n = m + 1
            # Murty width c/(n^e delta log d) vs 1/(4 log d): compare cubes exactly
            if murty_scale_cubed(n) >= 64 and not murty_width_le_stark(n):
                bad.append(f"murty n={n}")
    return [CheckLine(_ok(not bad), "region_nesting", f"{count} grid points (m, log d), exact rational comparisons" + _bad(bad))]


def check_zero_scan(sz: Sizes, cfg: Config) -> list[CheckLine]:
    bad = []
    indeterminate = 0
    total = 0
    worst = 1.0
    discs = _negative_fundamentals(sz.scan_bound)
    for D in discs:
        lo = 1 - 1 / (4 * math.log(-D))
        rep = zero_scan(D, (lo, 0.999), sz.scan_points)
        frac = rep.certified_fraction
        worst = min(worst, frac)
        total += len(rep.points)
        indeterminate += sum(p.status == "indeterminate" for p in rep.points)
        if rep.sign_changes or frac < 0.9 or rep.hidden_change_possible:
            bad.append(D)
    return [
        CheckLine(
            _ok(not bad),
            "zero_scan",
            f"{len(discs)} discriminants -{sz.scan_bound}<=D<0, {sz.scan_points} points each, "
            f"{indeterminate}/{total} indeterminate, worst certified fraction {worst:.3f}" + _bad(bad),
        )
    ]


CHECKS: dict[str, Callable] = {
    "hook_decomposition": check_hook_decomposition,
    "twisted_hook_decomposition": check_twisted_hook,
    "orthogonality": check_orthogonality,
    "young_module_audit": check_young_audit,
    "class_number_crosscheck": check_class_numbers,
    "residue_crosscheck": check_residues,
    "biquadratic_factorization": check_biquadratic,
    "siegel_trend": None,
    "gbs_degeneration": check_gbs,
    "mellin_identity": check_mellin,
    "region_nesting": check_nesting,
    "zero_scan": check_zero_scan,
}


def run_suite(suite: str = "all", cfg: Config | None = None, only: list[str] | None = None) -> list[CheckLine]:
    if suite not in ("all", "quick"):
        raise ValueError("suite must be 'all' or 'quick'")
    cfg = cfg or Config()
    sz = FULL if suite == "all" else QUICK
    names = list(CHECKS) if only is None else only
    lines: list[CheckLine] = []
    for name in names:
        if name not in CHECKS:
            raise ValueError(f"unknown check {name!r}")
        if name == "siegel_trend":
            lines += check_siegel(sz, cfg, quick=suite == "quick")
        else:
            lines += CHECKS[name](sz, cfg)
    return lines


def render_report(lines: list[CheckLine], suite: str, cfg: Config) -> str:
    head = f"# bslab {__version__} verify suite={suite} precision={cfg.precision}\n"
    body = "".join(f"{ln}\n" for ln in lines)
    fails = sum(ln.status == "FAIL" for ln in lines)
    passes = sum(ln.status == "PASS" for ln in lines)
    warns = sum(ln.status == "WARN" for ln in lines)
    return head + body + f"# summary: {passes} pass, {fails} fail, {warns} warn\n"
