"""Zero-free region widths near s = 1 and a real-axis scanner for L(s, chi_D).

Widths are exact Fractions whenever log d is supplied as an int or Fraction;
the Murty region carries a cube root of 3 and is returned as an mpf, with
:func:`murty_scale_cubed` available for exact comparisons.
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational

import mpmath

from .lfunc import TruncatedL
from .quad_arith import DEFAULT_PRECISION, mpf_str


def _exact(x):
    if isinstance(x, bool):
        raise TypeError("boolean is not a number")
    if isinstance(x, Rational):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    return mpmath.mpf(x)


def _mp(x):
    return mpmath.mpf(x.numerator) / x.denominator if isinstance(x, Fraction) else mpmath.mpf(x)


def _positive(name: str, x) -> None:
    if not x > 0:
        raise ValueError(f"{name} must be positive, got {x}")


@dataclass(frozen=True)
class ZeroFreeRegion:
    kind: str
    width: Fraction | mpmath.mpf
    params: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if not 0 < self.width < 1:
            raise ValueError(f"{self.kind} region width {self.width} leaves lower endpoint outside (0, 1)")

    @property
    def lower(self):
        return 1 - self.width

    def to_json(self, prec: int = DEFAULT_PRECISION) -> str:
        def fmt(v):
            if isinstance(v, Fraction):
                return str(v) if v.denominator == 1 else mpf_str(_mp(v), prec)
            if isinstance(v, mpmath.mpf):
                return mpf_str(v, prec)
            return v

        with mpmath.workdps(prec):
            return json.dumps(
                {
                    "kind": self.kind,
                    "parameters": {k: fmt(v) for k, v in self.params.items()},
                    "lower": fmt(self.lower),
                    "width": fmt(self.width),
                },
                sort_keys=True,
            )


def stark_region(log_d) -> ZeroFreeRegion:
    """At most one zero with 1 - 1/(4 log d) <= Re s < 1."""
    log_d = _exact(log_d)
    _positive("log_d", log_d)
    return ZeroFreeRegion("Stark", 1 / (4 * log_d), {"log_d": log_d})


def max_prime_exponent(n: int) -> int:
    if n < 2:
        raise ValueError("n must be at least 2")
    e, p = 0, 2
    while p * p <= n:
        k = 0
        while n % p == 0:
            n //= p
            k += 1
        e = max(e, k)
        p += 1
    return max(e, 1)


@dataclass(frozen=True)
class MurtyParams:
    n: int
    e: int
    delta: mpmath.mpf
    c: Fraction | mpmath.mpf


def murty_delta(n: int, prec: int = DEFAULT_PRECISION) -> mpmath.mpf:
    e = max_prime_exponent(n)
    with mpmath.workdps(prec):
        return (e + 1) ** 2 * mpmath.cbrt(3) * mpmath.mpf(12) ** (e - 1)


def murty_scale_cubed(n: int) -> int:
    """(n^e delta(n))^3 as an exact integer."""
    e = max_prime_exponent(n)
    return n ** (3 * e) * (e + 1) ** 6 * 12 ** (3 * (e - 1)) * 3


def murty_region(n: int, log_d, c=1, prec: int = DEFAULT_PRECISION) -> tuple[MurtyParams, ZeroFreeRegion]:
    if n < 2:
        raise ValueError("degree must be at least 2")
    log_d, c = _exact(log_d), _exact(c)
    _positive("log_d", log_d)
    _positive("c", c)
    e = max_prime_exponent(n)
    with mpmath.workdps(prec):
        delta = murty_delta(n, prec)
        width = _mp(c) / (mpmath.mpf(n) ** e * delta * _mp(log_d))
    params = MurtyParams(n, e, delta, c)
    return params, ZeroFreeRegion("Murty", width, {"n": n, "e": e, "delta": delta, "c": c, "log_d": log_d})


def murty_width_le_stark(n: int, c=1) -> bool:
    """Exact test of c / (n^e delta) <= 1/4, i.e. the Murty width never exceeds the Stark width."""
    c = Fraction(c)
    return (4 * c) ** 3 <= murty_scale_cubed(n)


def almost_sn_region(m: int, log_d_N) -> ZeroFreeRegion:
    """1 - beta >= 1/(4^{m+2} m log d_N) for quadratic extensions of an almost S_n field."""
    if m < 1:
        raise ValueError("m must be at least 1")
    log_d = _exact(log_d_N)
    _positive("log_d_N", log_d)
    return ZeroFreeRegion("AlmostSn", 1 / (4 ** (m + 2) * m * log_d), {"m": m, "log_d": log_d})


def ahc_exponent_bound(n: int) -> tuple[Fraction, Fraction]:
    """(n + n(n-1)(n-2)(n-3)/4, n^4/4): d_L <= d_K^first <= d_K^second."""
    return Fraction(n) + Fraction(n * (n - 1) * (n - 2) * (n - 3), 4), Fraction(n**4, 4)


def ahc_region(n: int, log_d_K) -> ZeroFreeRegion:
    if n < 2:
        raise ValueError("n must be at least 2")
    log_d = _exact(log_d_K)
    _positive("log_d_K", log_d)
    exponent, cap = ahc_exponent_bound(n)
    return ZeroFreeRegion(
        "AHC", 1 / (4 * n**4 * log_d), {"n": n, "log_d": log_d, "exponent": exponent, "exponent_cap": cap}
    )


def both_zeros_bound(t: int, m: int, log_d_N) -> tuple[ZeroFreeRegion, int]:
    """Interval [1 - 1/(8 t m log d_N), 1] and the compositum exponent 2tm with d_{MM'} <= d_N^{2tm}."""
    if t < 1 or m < 1:
        raise ValueError("t and m must be at least 1")
    log_d = _exact(log_d_N)
    _positive("log_d_N", log_d)
    return ZeroFreeRegion("BothZeros", 1 / (8 * t * m * log_d), {"t": t, "m": m, "log_d": log_d}), 2 * t * m


@dataclass(frozen=True)
class L1Bound:
    r1: int
    r2: int
    n_L: int
    d_L: int
    beta_chi: mpmath.mpf
    sigma1: mpmath.mpf
    c: mpmath.mpf
    value: mpmath.mpf


def stark_L1_lower(r1: int, r2: int, n_L: int, d_L, beta_chi, sigma1, c=1, prec: int = DEFAULT_PRECISION) -> L1Bound:
    """Lower bound for L(1, chi) of a quadratic extension N/L in terms of data of L."""
    with mpmath.workdps(prec):
        s1 = _mp(_exact(sigma1))
        beta = _mp(_exact(beta_chi))
        c = _mp(_exact(c))
        if not (1 < s1 <= 2):
            raise ValueError("sigma1 must lie in (1, 2]")
        if not beta < 1:
            raise ValueError("beta_chi must be below 1")
        if d_L < 1 or min(r1, r2, n_L) < 0:
            raise ValueError("invalid field data")
        value = (
            c
            * (1 - beta)
            / (s1 - 1)
            * mpmath.mpf(d_L) ** (-(s1 - 1) / 2)
            * (mpmath.sqrt(mpmath.pi) / mpmath.gamma(s1 / 2)) ** r1
            * (mpmath.mpf(2) ** (s1 - 1) / mpmath.gamma(s1)) ** r2
            * (mpmath.pi ** ((s1 - 1) / 2) / mpmath.zeta(s1)) ** n_L
        )
        return L1Bound(r1, r2, n_L, d_L, beta, s1, c, value)


@dataclass(frozen=True)
class GBSTheta:
    I: mpmath.mpf
    theta: mpmath.mpf
    log_theta_over_g: mpmath.mpf


def gbs_theta(m: int, n: int, g, c=1, prec: int = DEFAULT_PRECISION) -> GBSTheta:
    """I = max(4^{m+2} log d_M, n^e delta g / c) with log d_M = 2g, and theta = 1/(I g)."""
    if m < 1 or n < 2:
        raise ValueError("need m >= 1 and n >= 2")
    with mpmath.workdps(prec):
        g = _mp(_exact(g))
        _positive("g", g)
        e = max_prime_exponent(n)
        stark_part = mpmath.mpf(4) ** (m + 2) * 2 * g
        murty_part = mpmath.mpf(n) ** e * murty_delta(n, prec) * g / _mp(_exact(c))
        I = max(stark_part, murty_part)
        theta = 1 / (I * g)
        return GBSTheta(I, theta, mpmath.log(theta) / g)


@dataclass
class ScanPoint:
    s: float
    value: float
    bound: float
    status: str


@dataclass
class ScanReport:
    D: int
    interval: tuple[float, float]
    X: int
    points: list[ScanPoint]
    sign_changes: list[tuple[float, float]]
    indeterminate_runs: list[tuple[float, float, str]]

    @property
    def certified_fraction(self) -> float:
        return sum(p.status != "indeterminate" for p in self.points) / len(self.points)

    @property
    def hidden_change_possible(self) -> bool:
        return any(kind != "same-sign" for _, _, kind in self.indeterminate_runs)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["s", "value", "bound", "sign_status"])
        for p in self.points:
            w.writerow([repr(p.s), repr(p.value), repr(p.bound), p.status])
        return buf.getvalue()


def zero_scan(D: int, interval: tuple[float, float], grid_points: int = 1000, X: int | None = None) -> ScanReport:
    """Evaluate L(s, chi_D) on a grid and report certified sign changes.

    A point is certified when |value| exceeds the truncation bound.  Runs of
    uncertified points are listed with the signs on either side: "same-sign"
    runs cannot hide a net sign change, "opposite-sign" and "unbracketed" runs
    might.
    """
    lo, hi = (float(v) for v in interval)
    if not 0.5 < lo < hi < 1:
        raise ValueError("scan interval must satisfy 1/2 < lo < hi < 1")
    if grid_points < 2:
        raise ValueError("need at least two grid points")
    if X is None:
        X = max(10**4, 20 * abs(D))
    L = TruncatedL(D, X)
    grid = [lo + (hi - lo) * k / (grid_points - 1) for k in range(grid_points)]
    points = []
    for s, (value, bound) in zip(grid, L.many(grid)):
        if value - bound > 0:
            status = "positive"
        elif value + bound < 0:
            status = "negative"
        else:
            status = "indeterminate"
        points.append(ScanPoint(s, value, bound, status))

    changes = []
    runs = []
    last = None
    run_start = None
    for p in points:
        if p.status == "indeterminate":
            if run_start is None:
                run_start = p.s
            run_end = p.s
            continue
        if run_start is not None:
            kind = "unbracketed" if last is None else ("same-sign" if last.status == p.status else "opposite-sign")
            runs.append((run_start, run_end, kind))
            run_start = None
        if last is not None and last.status != p.status:
            changes.append((last.s, p.s))
        last = p
    if run_start is not None:
        runs.append((run_start, run_end, "unbracketed"))
    return ScanReport(D, (lo, hi), X, points, changes, runs)
