"""Exact character theory of S_n and S_n x Z/2.

Characters are integer-valued class functions keyed by cycle type.  Induction
from Young subgroups is done by distributing the cycles of each class across
the factors, so nothing here ever enumerates the group itself.
"""
from __future__ import annotations

import csv
import io
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Sequence

DEGREE_CAP = 14


class NotVirtualCharacterError(ValueError):
    """Raised when a class function has a non-integral inner product with an irreducible."""


@dataclass(frozen=True)
class Partition:
    parts: tuple[int, ...]

    def __post_init__(self):
        parts = tuple(int(p) for p in self.parts)
        object.__setattr__(self, "parts", parts)
        if any(p <= 0 for p in parts):
            raise ValueError(f"partition parts must be positive: {parts}")
        if any(a < b for a, b in zip(parts, parts[1:])):
            raise ValueError(f"partition parts must be weakly decreasing: {parts}")

    @property
    def n(self) -> int:
        return sum(self.parts)

    def __len__(self) -> int:
        return len(self.parts)

    def __iter__(self) -> Iterator[int]:
        return iter(self.parts)

    def __str__(self) -> str:
        return ",".join(map(str, self.parts))

    def __repr__(self) -> str:
        return f"Partition({list(self.parts)})"

    @classmethod
    def parse(cls, text: str) -> "Partition":
        text = text.strip().strip("[]()")
        return cls(tuple(int(t) for t in text.split(",") if t.strip()))

    def conjugate(self) -> "Partition":
        if not self.parts:
            return self
        return Partition(tuple(sum(1 for p in self.parts if p > j) for j in range(self.parts[0])))

    def is_hook(self) -> bool:
        return len(self.parts) <= 1 or all(p == 1 for p in self.parts[1:])


def hook(m: int, i: int) -> Partition:
    """Label of the i-th hook character of S_m, with i=1 trivial and i=m sign."""
    if not 1 <= i <= m:
        raise ValueError(f"hook index {i} out of range for S_{m}")
    return Partition((m - i + 1,) + (1,) * (i - 1))


@dataclass(frozen=True)
class Composition:
    """Ordered block sizes of a Young subgroup; signs[k] puts the sign character on block k."""

    parts: tuple[int, ...]
    signs: tuple[bool, ...] = ()

    def __post_init__(self):
        parts = tuple(int(p) for p in self.parts)
        signs = tuple(bool(s) for s in self.signs) if self.signs else (False,) * len(parts)
        object.__setattr__(self, "parts", parts)
        object.__setattr__(self, "signs", signs)
        if any(p <= 0 for p in parts):
            raise ValueError(f"composition parts must be positive: {parts}")
        if len(signs) != len(parts):
            raise ValueError("signs and parts must have the same length")

    @property
    def n(self) -> int:
        return sum(self.parts)


def _check_degree(n: int, cap: int = DEGREE_CAP) -> None:
    if not 1 <= n <= cap:
        raise ValueError(f"degree {n} outside supported range 1..{cap}")


def _partitions_desc(n: int, largest: int) -> Iterator[tuple[int, ...]]:
    if n == 0:
        yield ()
        return
    for first in range(min(n, largest), 0, -1):
        for rest in _partitions_desc(n - first, first):
            yield (first,) + rest


@lru_cache(maxsize=None)
def _partition_tuples(n: int) -> tuple[tuple[int, ...], ...]:
    return tuple(_partitions_desc(n, n))


def enumerate_partitions(n: int, cap: int = DEGREE_CAP) -> list[Partition]:
    """All partitions of n in reverse lexicographic order: [n] first, [1^n] last."""
    _check_degree(n, cap)
    return [Partition(p) for p in _partition_tuples(n)]


def centralizer_order(mu: Sequence[int]) -> int:
    z = 1
    for k, m in Counter(mu).items():
        z *= k**m * math.factorial(m)
    return z


def class_size(mu: Partition) -> int:
    return math.factorial(mu.n) // centralizer_order(mu.parts)


def _beta_set(parts: Sequence[int]) -> tuple[int, ...]:
    ell = len(parts)
    return tuple(sorted(p + ell - 1 - i for i, p in enumerate(parts)))


@lru_cache(maxsize=None)
def _mn(beta: tuple[int, ...], mu: tuple[int, ...]) -> int:
    # Murnaghan-Nakayama on an abacus: removing a rim hook of length r moves a
    # bead from b to b - r; the sign counts beads jumped over.
    if not mu:
        return 1
    r, rest = mu[0], mu[1:]
    beads = set(beta)
    total = 0
    for b in beta:
        target = b - r
        if target < 0 or target in beads:
            continue
        jumped = sum(1 for x in beta if target < x < b)
        new_beta = tuple(sorted((beads - {b}) | {target}))
        total += (-1) ** jumped * _mn(new_beta, rest)
    return total


def character_value(label: Partition, cls: Partition) -> int:
    """Irreducible character chi^label evaluated on the class of cycle type cls."""
    if label.n != cls.n:
        raise ValueError(f"label {label} and class {cls} partition different integers")
    return _mn(_beta_set(label.parts), tuple(sorted(cls.parts, reverse=True)))


def hook_dimension(label: Partition) -> int:
    """Dimension of the Specht module via the hook length formula."""
    conj = label.conjugate().parts
    prod = 1
    for i, row in enumerate(label.parts):
        for j in range(row):
            prod *= (row - j - 1) + (conj[j] - i - 1) + 1
    return math.factorial(label.n) // prod


@dataclass(frozen=True)
class ClassFunction:
    n: int
    values: dict[Partition, int] = field(hash=False)

    def __call__(self, mu: Partition) -> int:
        return self.values[mu]

    @property
    def degree(self) -> int:
        return self.values[Partition((1,) * self.n)]

    def __add__(self, other: "ClassFunction") -> "ClassFunction":
        if self.n != other.n:
            raise ValueError("class functions on different groups")
        return ClassFunction(self.n, {mu: v + other.values[mu] for mu, v in self.values.items()})

    def __eq__(self, other) -> bool:
        return isinstance(other, ClassFunction) and self.n == other.n and self.values == other.values


@dataclass(frozen=True)
class ProductClassFunction:
    """Class function on S_n x Z/2, keyed by (cycle type, parity of the Z/2 component)."""

    n: int
    values: dict[tuple[Partition, int], int] = field(hash=False)

    def __call__(self, mu: Partition, eps: int) -> int:
        return self.values[(mu, eps)]

    def __eq__(self, other) -> bool:
        return isinstance(other, ProductClassFunction) and self.n == other.n and self.values == other.values


@dataclass(frozen=True)
class CharacterTable:
    n: int
    partitions: tuple[Partition, ...]
    rows: tuple[tuple[int, ...], ...]
    class_sizes: tuple[int, ...]

    def row(self, label: Partition) -> ClassFunction:
        i = self.partitions.index(label)
        return ClassFunction(self.n, dict(zip(self.partitions, self.rows[i])))

    def irreducibles(self) -> list[ClassFunction]:
        return [self.row(lam) for lam in self.partitions]


@lru_cache(maxsize=None)
def character_table(n: int, cap: int = DEGREE_CAP) -> CharacterTable:
    parts = tuple(enumerate_partitions(n, cap))
    rows = tuple(tuple(character_value(lam, mu) for mu in parts) for lam in parts)
    return CharacterTable(n, parts, rows, tuple(class_size(mu) for mu in parts))


def trivial_character(n: int) -> ClassFunction:
    return ClassFunction(n, {mu: 1 for mu in enumerate_partitions(n)})


def _splits(m: int, slots: int) -> Iterator[tuple[int, ...]]:
    if slots == 1:
        yield (m,)
        return
    for first in range(m, -1, -1):
        for rest in _splits(m - first, slots - 1):
            yield (first,) + rest


def _multinomial(m: int, split: Sequence[int]) -> int:
    out = math.factorial(m)
    for s in split:
        out //= math.factorial(s)
    return out


def _induced_value(mu: Partition, comp: Composition) -> int:
    # Sum over ways of handing the cycles of mu to the blocks of the Young
    # subgroup; each way is one subgroup class inside the class of mu and is
    # weighted by z_mu / prod z_nu, which reduces to a product of multinomials.
    by_length = sorted(Counter(mu.parts).items(), reverse=True)
    blocks = len(comp.parts)

    @lru_cache(maxsize=None)
    def go(idx: int, remaining: tuple[int, ...]) -> int:
        if idx == len(by_length):
            return 1 if not any(remaining) else 0
        k, m = by_length[idx]
        odd = (k - 1) % 2
        total = 0
        for split in _splits(m, blocks):
            if any(k * s > r for s, r in zip(split, remaining)):
                continue
            sign = 1
            for s, signed in zip(split, comp.signs):
                if signed and odd and s % 2:
                    sign = -sign
            total += sign * _multinomial(m, split) * go(
                idx + 1, tuple(r - k * s for r, s in zip(remaining, split))
            )
        return total

    return go(0, comp.parts)


def induce_from_young(comp: Composition, cap: int = DEGREE_CAP) -> ClassFunction:
    """Character of S_n induced from a product of trivial/sign characters on a Young subgroup."""
    _check_degree(comp.n, cap)
    return ClassFunction(comp.n, {mu: _induced_value(mu, comp) for mu in enumerate_partitions(comp.n, cap)})


def inner_product(f: ClassFunction, g: ClassFunction) -> Fraction:
    if f.n != g.n:
        raise ValueError("class functions on different groups")
    total = sum(class_size(mu) * f.values[mu] * g.values[mu] for mu in f.values)
    return Fraction(total, math.factorial(f.n))


def _as_integer(x: Fraction, what: str) -> int:
    if x.denominator != 1:
        raise NotVirtualCharacterError(f"not a virtual character combination: <f, {what}> = {x}")
    return x.numerator


def decompose(f: ClassFunction) -> list[tuple[Partition, int]]:
    """Nonzero multiplicities of the irreducibles in f, in table order."""
    table = character_table(f.n)
    out = []
    for lam, row in zip(table.partitions, table.rows):
        total = sum(size * f.values[mu] * v for mu, size, v in zip(table.partitions, table.class_sizes, row))
        mult = _as_integer(Fraction(total, math.factorial(f.n)), f"chi^{lam}")
        if mult:
            out.append((lam, mult))
    return out


def tensor_theta(f: ClassFunction, twist: bool) -> ProductClassFunction:
    """f (x) theta on S_n x Z/2, or f (x) 1 when twist is False."""
    sgn = -1 if twist else 1
    values = {}
    for mu, v in f.values.items():
        values[(mu, 0)] = v
        values[(mu, 1)] = sgn * v
    return ProductClassFunction(f.n, values)


def induce_product(comp: Composition, twist: bool, cap: int = DEGREE_CAP) -> ProductClassFunction:
    """Induce (trivial/sign on the Young blocks) (x) theta^twist from Young x Z/2 to S_n x Z/2.

    Z/2 is central and contained in both groups, so its classes never split;
    the distribution sum runs over the S_n factor only.
    """
    _check_degree(comp.n, cap)
    sgn = -1 if twist else 1
    values = {}
    for mu in enumerate_partitions(comp.n, cap):
        v = _induced_value(mu, comp)
        values[(mu, 0)] = v
        values[(mu, 1)] = sgn * v
    return ProductClassFunction(comp.n, values)


def product_inner_product(f: ProductClassFunction, g: ProductClassFunction) -> Fraction:
    if f.n != g.n:
        raise ValueError("class functions on different groups")
    total = sum(class_size(mu) * v * g.values[(mu, eps)] for (mu, eps), v in f.values.items())
    return Fraction(total, 2 * math.factorial(f.n))


def decompose_product(f: ProductClassFunction) -> list[tuple[Partition, bool, int]]:
    """Multiplicities of chi^lam (x) theta^twist in f, as (lam, twist, multiplicity)."""
    out = []
    for lam in enumerate_partitions(f.n):
        row = character_table(f.n).row(lam)
        for twist in (False, True):
            mult = _as_integer(product_inner_product(f, tensor_theta(row, twist)), f"chi^{lam} x theta^{int(twist)}")
            if mult:
                out.append((lam, twist, mult))
    return out


def _horizontal_strips(lam: tuple[int, ...], size: int, bound: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
    # nu/lam is a horizontal strip iff lam_j <= nu_j <= lam_{j-1}; this is the
    # column-strictness condition on the new entries.
    rows = len(bound)
    lam = lam + (0,) * (rows - len(lam))

    def go(j: int, left: int, prev: int) -> Iterator[tuple[int, ...]]:
        if j == rows:
            if left == 0:
                yield ()
            return
        hi = min(bound[j], prev, lam[j] + left)
        for v in range(hi, lam[j] - 1, -1):
            for rest in go(j + 1, left - (v - lam[j]), lam[j]):
                yield (v,) + rest

    for nu in go(0, size, bound[0] if bound else 0):
        yield tuple(p for p in nu if p)


def kostka(shape: Partition, content: Sequence[int]) -> int:
    """Number of semistandard tableaux of the given shape and content."""
    content = tuple(int(c) for c in content)
    if shape.n != sum(content):
        raise ValueError(f"shape {shape} and content {content} have different sizes")
    target = shape.parts

    @lru_cache(maxsize=None)
    def count(lam: tuple[int, ...], i: int) -> int:
        if i == len(content):
            return 1 if lam == target else 0
        return sum(count(nu, i + 1) for nu in _horizontal_strips(lam, content[i], target))

    return count((), 0)


def decomposition_to_csv(rows: Sequence[tuple[Partition, int]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["partition_label", "multiplicity"])
    for lam, mult in rows:
        writer.writerow([str(lam), mult])
    return buf.getvalue()
