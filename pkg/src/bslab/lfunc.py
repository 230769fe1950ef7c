"""Dirichlet and Dedekind series for Q, quadratic and biquadratic fields.

Coefficient arrays are 1-indexed numpy vectors (slot 0 is unused and zero).
Prime-ideal data is derived from the splitting type (e, f, g) of each
rational prime, which for the fields handled here is read off from the
quadratic characters of the quadratic subfields.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from math import comb, isqrt

import gmpy2
import mpmath
import numpy as np

from .quad_arith import (
    DEFAULT_PRECISION,
    character_period,
    character_values,
    is_fundamental,
    mpf_str,
    third_discriminant,
)

COEFFICIENT_CUTOFF = 10**6
CHEBYSHEV_CUTOFF = 10**7
L1_EXACT_LIMIT = 10**6


def _bits(prec: int) -> int:
    return int(prec * 3.33) + 24


def _power_sum(terms, s, prec: int) -> mpmath.mpf:
    """sum c * w * n^{-s} over (n, c, w) with integer c, n and mpf-compatible w, in MPFR."""
    with gmpy2.context(gmpy2.get_context(), precision=_bits(prec)):
        neg_s = -gmpy2.mpfr(str(s))
        acc = gmpy2.mpfr(0)
        for n, c, w in terms:
            acc += c * w * gmpy2.mpfr(n) ** neg_s
        return mpmath.mpf(acc)


@dataclass(frozen=True)
class Field:
    """Q (no discriminants), Q(sqrt(D)) or the biquadratic field Q(sqrt(D1), sqrt(D2))."""

    discs: tuple[int, ...] = ()

    def __post_init__(self):
        discs = tuple(int(d) for d in self.discs)
        object.__setattr__(self, "discs", discs)
        if len(discs) > 2:
            raise ValueError("only Q, quadratic and biquadratic fields are supported")
        for d in discs:
            if not is_fundamental(d):
                raise ValueError(f"{d} is not a fundamental discriminant")
        if len(discs) == 2 and discs[0] == discs[1]:
            raise ValueError("biquadratic field needs distinct discriminants")

    @property
    def kind(self) -> str:
        return ("rational", "quadratic", "biquadratic")[len(self.discs)]

    @property
    def degree(self) -> int:
        return 2 ** len(self.discs)

    def characters(self) -> tuple[int, ...]:
        """Discriminants of the nontrivial characters in the Artin factorization."""
        if len(self.discs) == 2:
            return self.discs + (third_discriminant(*self.discs),)
        return self.discs

    def __str__(self) -> str:
        return "Q" if not self.discs else ",".join(map(str, self.discs))

    @classmethod
    def parse(cls, text: str) -> "Field":
        text = text.strip()
        if text.upper() in ("Q", "QQ", ""):
            return cls()
        return cls(tuple(int(t) for t in text.split(",")))


QQ = Field()


def primes_up_to(n: int) -> np.ndarray:
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return np.nonzero(sieve)[0].astype(np.int64)


def _char_at(D: int, p: int, period: np.ndarray) -> int:
    return int(period[p % abs(D)])


class _Splitter:
    """Splitting type (e, f, g) of rational primes in a field."""

    def __init__(self, fld: Field):
        self.field = fld
        self.chars = fld.characters()
        self.periods = [character_period(D) for D in self.chars]

    def __call__(self, p: int) -> tuple[int, int, int]:
        if not self.chars:
            return (1, 1, 1)
        vals = [_char_at(D, p, per) for D, per in zip(self.chars, self.periods)]
        if len(vals) == 1:
            return {1: (1, 1, 2), 0: (2, 1, 1), -1: (1, 2, 1)}[vals[0]]
        # characters of V4 trivial on inertia / decomposition group
        unramified = 1 + sum(1 for v in vals if v != 0)
        split = 1 + sum(1 for v in vals if v == 1)
        e = 4 // unramified
        decomp = 4 // split
        return (e, decomp // e, 4 // decomp)


def splitting_type(fld: Field, p: int) -> tuple[int, int, int]:
    return _Splitter(fld)(p)


@dataclass(frozen=True)
class DirichletData:
    field: Field
    X: int
    coefficients: np.ndarray = field(repr=False, compare=False)

    def __getitem__(self, n: int) -> int:
        return int(self.coefficients[n])

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "a_n"])
        for n in range(1, self.X + 1):
            w.writerow([n, int(self.coefficients[n])])
        return buf.getvalue()


def dirichlet_convolution(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """(a * b)[n] = sum_{d | n} a[d] b[n/d] on 1-indexed arrays of equal length."""
    X = len(a) - 1
    out = np.zeros(X + 1, dtype=np.int64)
    for d in range(1, X + 1):
        if a[d]:
            out[d::d] += a[d] * b[1 : X // d + 1]
    return out


def _series_for_character(D: int, X: int) -> np.ndarray:
    out = character_values(D, X + 1).astype(np.int64)
    out[0] = 0
    return out


def _ones(X: int) -> np.ndarray:
    out = np.ones(X + 1, dtype=np.int64)
    out[0] = 0
    return out


def _coefficients_by_splitting(fld: Field, X: int) -> np.ndarray:
    # Multiplicative sieve with local factor (1 - p^{-fs})^{-g}: the
    # coefficient at p^k counts g-tuples of exponents with f * sum = k.
    a = _ones(X)
    split = _Splitter(fld)
    for p in primes_up_to(X).tolist():
        e, f, g = split(p)
        if f == 1 and g == 1:
            continue
        local = np.full(X // p, comb(g, g - 1) if f == 1 else 0, dtype=np.int64)
        pk, k = p * p, 2
        while pk <= X:
            local[pk // p - 1 :: pk // p] = comb(k // f + g - 1, g - 1) if k % f == 0 else 0
            pk *= p
            k += 1
        a[p::p] *= local
    return a


def dedekind_coefficients(fld: Field, X: int) -> DirichletData:
    """Ideal counts a_n = #{ideals of norm n} for n <= X."""
    if not 1 <= X <= COEFFICIENT_CUTOFF:
        raise ValueError(f"cutoff {X} outside 1..{COEFFICIENT_CUTOFF}")
    if fld.kind == "rational":
        a = _ones(X)
    elif fld.kind == "quadratic":
        a = dirichlet_convolution(_series_for_character(fld.discs[0], X), _ones(X))
    else:
        a = _coefficients_by_splitting(fld, X)
    return DirichletData(fld, X, a)


def artin_product_coefficients(fld: Field, X: int) -> np.ndarray:
    """Coefficients of zeta(s) times the L-series of every nontrivial character of the field."""
    a = _ones(X)
    for D in fld.characters():
        a = dirichlet_convolution(a, _series_for_character(D, X))
    return a


def prime_ideal_counts(fld: Field, q_max: int) -> dict[int, int]:
    """N_q = number of prime ideals of norm exactly q, for every prime power q <= q_max."""
    split = _Splitter(fld)
    out = {}
    for p in primes_up_to(q_max).tolist():
        _, f, g = split(p)
        q, k = p, 1
        while q <= q_max:
            out[q] = g if k == f else 0
            q *= p
            k += 1
    return dict(sorted(out.items()))


def von_mangoldt_jumps(fld: Field, X: int) -> list[tuple[int, int, int]]:
    """(n, p, c) for every prime power n = p^k <= X with Lambda_K(n) = c log p != 0."""
    split = _Splitter(fld)
    jumps = []
    for p in primes_up_to(X).tolist():
        _, f, g = split(p)
        n, k = p, 1
        while n <= X:
            if k % f == 0:
                jumps.append((n, p, g * f))
            n *= p
            k += 1
    jumps.sort()
    return jumps


def log_coefficients_from_dirichlet(a: np.ndarray) -> dict[int, int]:
    """Per prime p, the integer c with sum_{n <= X} Lambda_K(n) restricted to powers of p = c log p.

    Lambda_K is recovered from the ideal counts through a_n log n = (Lambda_K * a)(n),
    which on powers of p reads k a(p^k) = sum_j c_j a(p^{k-j}).
    """
    X = len(a) - 1
    out = {}
    for p in primes_up_to(X).tolist():
        powers = [1]
        while powers[-1] * p <= X:
            powers.append(powers[-1] * p)
        c = [0]
        for k in range(1, len(powers)):
            acc = k * int(a[powers[k]]) - sum(c[j] * int(a[powers[k - j]]) for j in range(1, k))
            c.append(acc)
        out[p] = sum(c)
    return out


@dataclass(frozen=True)
class ChebyshevValue:
    x: float
    value: mpmath.mpf


def chebyshev_G(fld: Field, x, prec: int = DEFAULT_PRECISION) -> ChebyshevValue:
    """Sum of N_q log q over prime powers q and m >= 1 with q^m <= x."""
    if x < 1 or x > CHEBYSHEV_CUTOFF:
        raise ValueError(f"x = {x} outside 1..{CHEBYSHEV_CUTOFF}")
    X = int(math.floor(x))
    coeffs: dict[int, int] = {}
    for _, p, c in von_mangoldt_jumps(fld, X):
        coeffs[p] = coeffs.get(p, 0) + c
    with mpmath.workdps(prec):
        value = mpmath.fsum(c * mpmath.log(p) for p, c in coeffs.items()) if coeffs else mpmath.mpf(0)
    return ChebyshevValue(x, value)


def chebyshev_trace_csv(fld: Field, X: int, prec: int = DEFAULT_PRECISION) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["x_jump", "G_value"])
    with mpmath.workdps(prec):
        G = mpmath.mpf(0)
        for n, p, c in von_mangoldt_jumps(fld, X):
            G += c * mpmath.log(p)
            w.writerow([n, mpf_str(G, prec)])
    return buf.getvalue()


def L1_exact(D: int, prec: int = DEFAULT_PRECISION) -> mpmath.mpf:
    """L(1, chi_D) from the finite closed forms for odd and even characters."""
    if not is_fundamental(D):
        raise ValueError(f"{D} is not a fundamental discriminant")
    q = abs(D)
    if q > L1_EXACT_LIMIT:
        raise ValueError(f"|D| = {q} exceeds {L1_EXACT_LIMIT}")
    chi = character_period(D)
    with mpmath.workdps(prec + 10):
        if D < 0:
            s = int(np.dot(np.arange(q, dtype=np.int64), chi))
            val = -mpmath.pi * s / mpmath.mpf(q) ** 1.5
        else:
            # chi is even, so pair a with q - a; the sines lie in (0, 1] and
            # only the two products need a logarithm
            # sin(pi a/q) by rotating through the q-th half-turn; rounding
            # error grows linearly in a and stays far below the working bits
            with gmpy2.context(gmpy2.get_context(), precision=_bits(prec + 10) + 16):
                step = gmpy2.const_pi() / q
                c1, s1 = gmpy2.cos(step), gmpy2.sin(step)
                c, sn = c1, s1
                plus = gmpy2.mpfr(1)
                minus = gmpy2.mpfr(1)
                for a in range(1, (q + 1) // 2):
                    v = chi[a]
                    if v > 0:
                        plus *= sn
                    elif v < 0:
                        minus *= sn
                    c, sn = c * c1 - sn * s1, sn * c1 + c * s1
                log_ratio = mpmath.mpf(gmpy2.log(plus) - gmpy2.log(minus))
            val = -2 * log_ratio / mpmath.sqrt(q)
    with mpmath.workdps(prec):
        return +val


def max_character_partial_sum(D: int) -> int:
    """max_n |sum_{k <= n} chi_D(k)|, attained within one period."""
    return int(np.abs(np.cumsum(character_period(D))).max())


def polya_vinogradov(D: int) -> float:
    q = abs(D)
    return math.sqrt(q) * math.log(q)


class TruncatedL:
    """Partial sums of L(s, chi_D) over n <= X, reusable across many s."""

    def __init__(self, D: int, X: int):
        if not is_fundamental(D):
            raise ValueError(f"{D} is not a fundamental discriminant")
        if X < abs(D):
            raise ValueError("cutoff must be at least |D|")
        self.D, self.X = D, X
        chi = character_values(D, X + 1)[1:]
        keep = np.nonzero(chi)[0]
        self._chi = chi[keep].astype(np.float64)
        self._logn = np.log(keep + 1.0)
        self.S = max_character_partial_sum(D)

    def __call__(self, s: float) -> tuple[float, float]:
        if s <= 0.5:
            raise ValueError("s must exceed 1/2")
        terms = self._chi * np.exp(-s * self._logn)
        value = math.fsum(terms)
        bound = float(2.0 * self.S * self.X ** (-s) + 4 * np.finfo(float).eps * float(np.abs(terms).sum()))
        if not math.isfinite(bound) or bound >= 1e6:
            raise ArithmeticError(f"tail bound blew up at s={s}, X={self.X}")
        return value, bound

    def many(self, s_values) -> list[tuple[float, float]]:
        """Same as calling on each s, with the exponentials computed in blocks."""
        s_values = np.asarray(s_values, dtype=np.float64)
        if s_values.size and s_values.min() <= 0.5:
            raise ValueError("s must exceed 1/2")
        out = []
        for start in range(0, s_values.size, 64):
            block = s_values[start : start + 64]
            terms = self._chi * np.exp(-np.outer(block, self._logn))
            for s, row in zip(block, terms):
                bound = float(2.0 * self.S * self.X ** (-float(s)) + 4 * np.finfo(float).eps * float(np.abs(row).sum()))
                out.append((math.fsum(row), bound))
        return out


def L_truncated(D: int, s: float, X: int) -> tuple[float, float]:
    """Partial sum of L(s, chi_D) over n <= X and a bound on the omitted tail.

    Partial summation against S = max |sum_{k<=n} chi_D(k)| bounds the tail by
    2 S X^{-s} for every real s > 0; S is computed exactly over one period and
    never exceeds the Polya-Vinogradov value sqrt|D| log|D|.  The float64 sum
    adds a rounding allowance of 4 eps times the sum of absolute values.
    """
    return TruncatedL(D, X)(s)


def _lambda_sum(jumps, s, prec: int) -> mpmath.mpf:
    with gmpy2.context(gmpy2.get_context(), precision=_bits(prec)):
        logs = {p: gmpy2.log(p) for p in {p for _, p, _ in jumps}}
        return _power_sum(((n, c, logs[p]) for n, p, c in jumps), s, prec)


@dataclass(frozen=True)
class ZFPair:
    s: float
    F: mpmath.mpf
    Z: mpmath.mpf
    F_error: mpmath.mpf
    Z_tail: mpmath.mpf


def _residue(fld: Field, prec: int):
    from .quad_arith import biquadratic_invariants

    if fld.kind == "rational":
        return mpmath.mpf(1)
    if fld.kind == "quadratic":
        return L1_exact(fld.discs[0], prec)
    return biquadratic_invariants(*fld.discs, prec=prec).rho


def _count_error_model(fld: Field, X: int) -> tuple[float, float]:
    # |A(y) - rho y| <= B y^theta for y >= X, with A the ideal counting function.
    if fld.kind == "rational":
        return 1.0, 0.0
    if fld.kind == "quadratic":
        # Dirichlet hyperbola split at U = 2 sqrt(S y); valid once y >= 4 S.
        S = max_character_partial_sum(fld.discs[0])
        if X < 4 * S:
            raise ValueError(f"cutoff {X} below 4*S = {4 * S} needed by the counting bound")
        return 4.0 * math.sqrt(S), 0.5
    raise ValueError("no counting-function bound implemented for biquadratic fields")


def F_and_Z(fld: Field, s, X: int, prec: int = DEFAULT_PRECISION) -> ZFPair:
    """F(s) = (s-1) zeta_K(s) / rho_K and Z(s) = F'(s)/F(s) from truncated series."""
    with mpmath.workdps(prec + 10):
        s = mpmath.mpf(s)
        if s - 1 < mpmath.mpf("0.01") - mpmath.mpf(10) ** (-prec):
            raise ValueError("F_and_Z needs s - 1 >= 0.01")
        B, theta = _count_error_model(fld, X)
        rho = _residue(fld, prec + 10)
        a = dedekind_coefficients(fld, X).coefficients
        nz = np.nonzero(a)[0].tolist()
        partial = _power_sum(((n, int(a[n]), 1) for n in nz), s, prec + 10)
        count = int(a.sum())
        boundary = (count - rho * X) * mpmath.power(X, -s)
        zeta_K = partial + rho * mpmath.power(X, 1 - s) / (s - 1) - boundary
        err = s * B * mpmath.power(X, theta - s) / (s - theta)
        F = (s - 1) * zeta_K / rho
        F_error = (s - 1) * err / rho
        if F_error >= abs(F):
            raise ArithmeticError("tail bound dominates F")
        lam = _lambda_sum(von_mangoldt_jumps(fld, X), s, prec + 10)
        Z = -lam + 1 / (s - 1)
        Z_tail = mpmath.power(X, 1 - s) / (s - 1)
    with mpmath.workdps(prec):
        return ZFPair(float(s), +F, +Z, +F_error, +Z_tail)


@dataclass(frozen=True)
class MellinReport:
    field: Field
    s: float
    X: int
    residual: mpmath.mpf
    tail_estimate: mpmath.mpf
    flipped_sign_residual: mpmath.mpf
    precision: int = DEFAULT_PRECISION

    def to_json(self) -> str:
        p = self.precision
        return json.dumps(
            {
                "field": str(self.field),
                "s": self.s,
                "X": self.X,
                "residual": mpf_str(self.residual, p),
                "tail_estimate": mpf_str(self.tail_estimate, p),
                "flipped_sign_residual": mpf_str(self.flipped_sign_residual, p),
                "precision": p,
            },
            sort_keys=True,
        )


def mellin_pieces_integral(jumps, s, X):
    """Integral over [1, X] of (G(x) - x) x^{-s-1}, exact on each step of G."""
    total = mpmath.mpf(0)
    G = mpmath.mpf(0)
    left = mpmath.mpf(1)
    left_s, left_1s = mpmath.mpf(1), mpmath.mpf(1)
    sm1 = s - 1
    points = []
    for n, p, c in jumps:
        if points and points[-1][0] == n:
            points[-1][1] += c * mpmath.log(p)
        else:
            points.append([n, c * mpmath.log(p)])
    points.append([X, None])
    for n, inc in points:
        right = mpmath.mpf(n)
        if right > left:
            right_s = mpmath.power(right, -s)
            right_1s = right * right_s
            total += G * (left_s - right_s) / s - (left_1s - right_1s) / sm1
            left, left_s, left_1s = right, right_s, right_1s
        if inc is not None:
            G += inc
    return total


def mellin_residual(fld: Field, s, X: int, prec: int = DEFAULT_PRECISION) -> MellinReport:
    """Residual of Z(s)/s = -int_1^X (G(x) - x) x^{-s-1} dx - 1/s at a common cutoff.

    Z and G are built from the same list of prime-ideal powers, so both sides
    are truncated identically and the residual is the omitted analytic tail.
    The residual of the identity with the opposite sign in front of the
    integral is reported alongside for comparison.
    """
    if X < 1000:
        raise ValueError("mellin_residual needs X >= 1000")
    with mpmath.workdps(prec + 10):
        s = mpmath.mpf(s)
        if not (1 < s <= mpmath.mpf("2.5")):
            raise ValueError("s must lie in (1, 2.5]")
        jumps = von_mangoldt_jumps(fld, X)
        if jumps and jumps[-1][0] > X:
            raise ValueError("inconsistent cutoffs between G and Z")
        integral = mellin_pieces_integral(jumps, s, X)
        lam = _lambda_sum(jumps, s, prec + 10)
        Z = -lam + 1 / (s - 1)
        lhs = Z / s
        residual = abs(lhs - (-integral - 1 / s))
        flipped = abs(lhs - (integral - 1 / s))
        tail = mpmath.power(X, 1 - s) / (s - 1)
    with mpmath.workdps(prec):
        return MellinReport(fld, float(s), X, +residual, +tail, +flipped, prec)
