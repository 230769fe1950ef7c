"""Quadratic fields: discriminants, class numbers, regulators and zeta residues.

Class numbers come from binary quadratic forms (reduced forms for D < 0,
cycles of reduced indefinite forms for D > 0), never from the analytic
formula, so the L(1, chi) evaluations in :mod:`bslab.lfunc` stay an
independent check.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from math import isqrt

import gmpy2
import mpmath
import numpy as np

DEFAULT_PRECISION = 30
CLASS_NUMBER_LIMIT = 10**7


def squarefree_kernel(d: int) -> int:
    """d with every square factor removed, sign kept."""
    if d == 0:
        raise ValueError("0 has no squarefree kernel")
    sign = -1 if d < 0 else 1
    m = abs(d)
    out = 1
    p = 2
    while p * p <= m:
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            if e % 2:
                out *= p
        p += 1 if p == 2 else 2
    return sign * out * m


def fundamental_discriminant(d: int) -> int:
    """Discriminant of Q(sqrt(d))."""
    if d == 0:
        raise ValueError("d must be nonzero")
    k = squarefree_kernel(d)
    if k == 1:
        raise ValueError(f"{d} is a square; Q(sqrt({d})) is not a quadratic field")
    return k if k % 4 == 1 else 4 * k


def is_fundamental(D: int) -> bool:
    if D in (0, 1):
        return False
    if D % 4 == 1:
        return squarefree_kernel(D) == D
    if D % 4 == 0:
        m = D // 4
        return m % 4 in (2, 3) and squarefree_kernel(m) == m
    return False


def _require_fundamental(D: int) -> None:
    if not is_fundamental(D):
        raise ValueError(f"{D} is not a fundamental discriminant")


def kronecker(D: int, n: int) -> int:
    """Kronecker symbol (D/n)."""
    return int(gmpy2.kronecker(D, n))


def _jacobi_array(x: np.ndarray, n: np.ndarray) -> np.ndarray:
    # Binary Jacobi algorithm run elementwise; n must be odd and positive.
    x = x % n
    n = n.copy()
    result = np.ones(x.shape, dtype=np.int64)
    active = x != 0
    while active.any():
        while True:
            even = active & (x % 2 == 0)
            if not even.any():
                break
            x[even] //= 2
            r = n[even] % 8
            flip = np.zeros_like(even)
            flip[even] = (r == 3) | (r == 5)
            result[flip] *= -1
        swap_sign = active & (x % 4 == 3) & (n % 4 == 3)
        result[swap_sign] *= -1
        x_act, n_act = x[active], n[active]
        n[active] = x_act
        x[active] = n_act % x_act
        active = x != 0
    result[n != 1] = 0
    return result


def character_period(D: int) -> np.ndarray:
    """chi_D(a) for a = 0 .. |D|-1 as an int64 array."""
    q = abs(D)
    a = np.arange(q, dtype=np.int64)
    out = np.zeros(q, dtype=np.int64)
    if q == 1:
        return np.ones(1, dtype=np.int64)
    nz = a > 0
    a = a[nz]
    twos = np.zeros(a.shape, dtype=np.int64)
    odd = a.copy()
    while True:
        m = odd % 2 == 0
        if not m.any():
            break
        odd[m] //= 2
        twos[m] += 1
    if D % 2 == 0:
        chi2 = 0
    else:
        chi2 = 1 if D % 8 in (1, 7) else -1
    if chi2 == 0:
        two_part = (twos == 0).astype(np.int64)
    else:
        two_part = np.int64(chi2) ** twos
    jac = _jacobi_array(np.full(odd.shape, abs(D), dtype=np.int64), odd)
    if D < 0:
        jac = jac * np.where(odd % 4 == 3, -1, 1)
    out[nz] = two_part * jac
    return out


def character_values(D: int, length: int) -> np.ndarray:
    """chi_D(n) for n = 0 .. length-1, using periodicity mod |D|."""
    period = character_period(D)
    reps = -(-length // len(period))
    return np.tile(period, reps)[:length]


def _class_number_imaginary(D: int) -> int:
    d = -D
    h = 0
    a = 1
    while 3 * a * a <= d:
        for b in range(D % 2, a + 1, 2):
            num = b * b + d
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a:
                continue
            h += 1 if (b == 0 or b == a or a == c) else 2
        a += 1
    return h


def _reduced_indefinite_forms(D: int) -> list[tuple[int, int, int]]:
    # (a, b, c) is reduced iff |sqrt(D) - 2|a|| < b < sqrt(D).
    forms = []
    r = isqrt(D)
    for b in range(D % 2 or 2, r + 1, 2):
        if b * b >= D:
            break
        N = (D - b * b) // 4
        # r < sqrt(D) < r + 1, so the strict inequalities become integer ones
        for a in range((r + 2 - b) // 2, (r + b) // 2 + 1):
            if N % a == 0:
                forms.append((a, b, -N // a))
                forms.append((-a, b, N // a))
    return forms


def _rho(form: tuple[int, int, int], D: int, r: int) -> tuple[int, int, int]:
    a, b, c = form
    m = 2 * abs(c)
    b2 = r - ((r + b) % m)
    return (c, b2, (b2 * b2 - D) // (4 * c))


def _class_number_real(D: int) -> int:
    r = isqrt(D)
    seen = set()
    cycles = 0
    for f in _reduced_indefinite_forms(D):
        if f in seen:
            continue
        cycles += 1
        g = f
        while g not in seen:
            seen.add(g)
            g = _rho(g, D, r)
    _, _, norm = fundamental_unit(D)
    # cycles count proper (narrow) classes
    return cycles if norm == -1 else cycles // 2


def class_number(D: int) -> int:
    _require_fundamental(D)
    if abs(D) > CLASS_NUMBER_LIMIT:
        raise ValueError(f"|D| = {abs(D)} exceeds the class number limit {CLASS_NUMBER_LIMIT}")
    return _class_number_imaginary(D) if D < 0 else _class_number_real(D)


def class_numbers_imaginary(lo: int, hi: int) -> np.ndarray:
    """Reduced-form counts for every discriminant -d with lo <= d <= hi.

    Entry i corresponds to D = -(lo + i).  The value equals the class number
    whenever -(lo + i) is fundamental; other entries also count non-primitive
    forms and are meaningless.  Each (a, b) pair contributes along the
    arithmetic progression d = 4ac - b^2 in c, so the whole range is filled
    with one strided update per pair.
    """
    counts = np.zeros(hi - lo + 1, dtype=np.int64)
    amax = isqrt(hi // 3)
    for a in range(1, amax + 1):
        step = 4 * a
        for b in range(0, a + 1):
            d = 4 * a * a - b * b
            if lo <= d <= hi:
                counts[d - lo] += 1
            d0 = d + step
            if d0 < lo:
                d0 += -(-(lo - d0) // step) * step
            if d0 <= hi:
                counts[d0 - lo :: step] += 2 if 0 < b < a else 1
    return counts


def fundamental_unit(D: int) -> tuple[int, int, int]:
    """(x, y, norm) with eps = (x + y sqrt(D))/2 the fundamental unit, x^2 - D y^2 = 4*norm."""
    if D <= 0:
        raise ValueError("fundamental unit requires D > 0")
    if D % 4 == 1:
        d, P, Q = D, 1, 2
    else:
        d, P, Q = D // 4, 0, 1
    P0, Q0 = P, Q
    s = isqrt(d)
    A2, A1 = 0, 1
    B2, B1 = 1, 0
    G2, G1 = -P0, Q0
    while True:
        a = (P + s) // Q
        A2, A1 = A1, a * A1 + A2
        B2, B1 = B1, a * B1 + B2
        G2, G1 = G1, a * G1 + G2
        P = a * Q - P
        Q = (d - P * P) // Q
        if Q == Q0:
            break
    G, B = G1, B1
    if Q0 == 2:
        x, y = G, B
    else:
        x, y = 2 * G, B
    norm = (x * x - D * y * y) // 4
    if norm not in (1, -1):
        raise ArithmeticError(f"unit search for D={D} produced norm {norm}")
    return x, y, norm


def regulator(D: int, prec: int = DEFAULT_PRECISION) -> mpmath.mpf:
    _require_fundamental(D)
    with mpmath.workdps(prec):
        if D < 0:
            return mpmath.mpf(1)
        x, y, _ = fundamental_unit(D)
        return +mpmath.log((x + y * mpmath.sqrt(D)) / 2)


def roots_of_unity(D: int) -> int:
    return {-3: 6, -4: 4}.get(D, 2)


def mpf_str(x, prec: int) -> str:
    return mpmath.nstr(x, prec, min_fixed=-mpmath.inf, max_fixed=mpmath.inf) if x != 0 else "0"


@dataclass(frozen=True)
class FieldInvariants:
    D: int
    h: int
    R: mpmath.mpf
    mu: int
    r1: int
    r2: int
    g: mpmath.mpf
    rho: mpmath.mpf
    precision: int = DEFAULT_PRECISION
    n_K: int = 2
    # set when read back from storage, so the stored digits survive a round trip
    stored_ratio: mpmath.mpf | None = field(default=None, compare=False, repr=False)

    @property
    def ratio(self) -> mpmath.mpf:
        return self.stored_ratio if self.stored_ratio is not None else bs_ratio(self)

    def to_json_dict(self) -> dict:
        p = self.precision
        return {
            "D": self.D,
            "h": self.h,
            "R": mpf_str(self.R, p),
            "mu": self.mu,
            "r1": self.r1,
            "r2": self.r2,
            "g": mpf_str(self.g, p),
            "rho": mpf_str(self.rho, p),
            "ratio": mpf_str(self.ratio, p),
            "precision": p,
        }

    @classmethod
    def from_json_dict(cls, obj: dict) -> "FieldInvariants":
        p = int(obj["precision"])
        with mpmath.workdps(p):
            return cls(
                D=int(obj["D"]),
                h=int(obj["h"]),
                R=mpmath.mpf(obj["R"]),
                mu=int(obj["mu"]),
                r1=int(obj["r1"]),
                r2=int(obj["r2"]),
                g=mpmath.mpf(obj["g"]),
                rho=mpmath.mpf(obj["rho"]),
                precision=p,
                stored_ratio=mpmath.mpf(obj["ratio"]),
            )


def residue_from_invariants(h, R, mu: int, r1: int, r2: int, disc: int, prec: int = DEFAULT_PRECISION):
    """Class number formula, with sqrt(d_K) in the denominator."""
    with mpmath.workdps(prec):
        return 2**r1 * (2 * mpmath.pi) ** r2 * h * R / (mu * mpmath.sqrt(abs(disc)))


def field_invariants(D: int, prec: int = DEFAULT_PRECISION, h: int | None = None) -> FieldInvariants:
    """All invariants of Q(sqrt(D)); pass h to reuse a class number computed elsewhere."""
    _require_fundamental(D)
    if h is None:
        h = class_number(D)
    r1, r2 = (0, 1) if D < 0 else (2, 0)
    mu = roots_of_unity(D)
    with mpmath.workdps(prec):
        R = regulator(D, prec)
        g = mpmath.log(abs(D)) / 2
        rho = residue_from_invariants(h, R, mu, r1, r2, D, prec)
    return FieldInvariants(D=D, h=h, R=R, mu=mu, r1=r1, r2=r2, g=g, rho=rho, precision=prec)


def bs_ratio(inv: FieldInvariants) -> mpmath.mpf:
    """log(h R) / g."""
    with mpmath.workdps(inv.precision):
        return mpmath.log(inv.h * inv.R) / inv.g


@dataclass(frozen=True)
class BiquadraticInvariants:
    D1: int
    D2: int
    D3: int
    disc: int
    r1: int
    r2: int
    rho: mpmath.mpf
    g: mpmath.mpf
    precision: int = DEFAULT_PRECISION

    @property
    def discriminants(self) -> tuple[int, int, int]:
        return (self.D1, self.D2, self.D3)


def third_discriminant(D1: int, D2: int) -> int:
    return fundamental_discriminant(squarefree_kernel(D1) * squarefree_kernel(D2))


def biquadratic_invariants(D1: int, D2: int, prec: int = DEFAULT_PRECISION) -> BiquadraticInvariants:
    from .lfunc import L1_exact

    _require_fundamental(D1)
    _require_fundamental(D2)
    if D1 == D2:
        raise ValueError("biquadratic field needs two distinct quadratic subfields")
    D3 = third_discriminant(D1, D2)
    disc = abs(D1 * D2 * D3)
    r1, r2 = (4, 0) if min(D1, D2, D3) > 0 else (0, 2)
    with mpmath.workdps(prec):
        rho = L1_exact(D1, prec) * L1_exact(D2, prec) * L1_exact(D3, prec)
        g = mpmath.log(disc) / 2
    return BiquadraticInvariants(D1, D2, D3, disc, r1, r2, rho, g, prec)


def fundamental_discriminants(sign: str, lo: int, hi: int) -> list[int]:
    """Fundamental discriminants with lo <= |D| <= hi, ordered by |D|."""
    if sign not in ("imaginary", "real"):
        raise ValueError("sign must be 'imaginary' or 'real'")
    if lo > hi:
        return []
    sf = np.ones(hi + 1, dtype=bool)
    sf[0] = False
    for p in range(2, isqrt(hi) + 1):
        sf[p * p :: p * p] = False
    d = np.arange(hi + 1)
    quarter = np.zeros(hi + 1, dtype=bool)
    k = d[::4] // 4
    neg = sign == "imaginary"
    if neg:
        odd_ok = sf & (d % 4 == 3)
        quarter[::4] = sf[k] & np.isin(k % 4, (1, 2))
    else:
        odd_ok = sf & (d % 4 == 1) & (d > 1)
        quarter[::4] = sf[k] & np.isin(k % 4, (2, 3))
    ok = odd_ok | quarter
    ok[: max(lo, 0)] = False
    vals = np.nonzero(ok)[0]
    return [int(-v) if neg else int(v) for v in vals]


__all__ = [
    "BiquadraticInvariants",
    "FieldInvariants",
    "bs_ratio",
    "biquadratic_invariants",
    "character_period",
    "character_values",
    "class_number",
    "class_numbers_imaginary",
    "field_invariants",
    "fundamental_discriminant",
    "fundamental_discriminants",
    "fundamental_unit",
    "is_fundamental",
    "kronecker",
    "regulator",
    "squarefree_kernel",
]
