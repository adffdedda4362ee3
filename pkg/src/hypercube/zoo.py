"""Canonical Boolean functions and their closed-form spectra."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Iterator, Sequence

import numpy as np

from .cube import BooleanFunction, RealFunction, check_arity, popcounts, subset_mask
from .fourier import Spectrum


def _points(n: int) -> np.ndarray:
    return np.arange(1 << n, dtype=np.int64)


def _coord_bits(n: int) -> np.ndarray:
    """bits[k, j] = 1 iff x_{j+1} = -1 at point k."""
    return (_points(n)[:, None] >> np.arange(n)) & 1


def dictator(n: int, i: int) -> BooleanFunction:
    check_arity(n)
    if not 1 <= i <= n:
        raise IndexError(f"coordinate {i} out of range for n={n}")
    return BooleanFunction.from_bits((_points(n) >> (i - 1)) & 1)


def parity(n: int, S: Sequence[int]) -> BooleanFunction:
    """chi_S(x) = prod_{i in S} x_i."""
    check_arity(n)
    mask = subset_mask(S, n)
    return BooleanFunction.from_bits(popcounts(n)[_points(n) & mask] & 1)


def indicator(n: int, a: int) -> RealFunction:
    """The 0/1 function 1_{a} for a point index a."""
    check_arity(n)
    if not 0 <= a < (1 << n):
        raise IndexError(f"point index {a} out of range for n={n}")
    table = np.zeros(1 << n)
    table[a] = 1.0
    return RealFunction(table)


def dictator_spectrum(n: int, i: int) -> Spectrum:
    c = np.zeros(1 << n)
    c[1 << (i - 1)] = 1.0
    return Spectrum(c, exact=True)


def parity_spectrum(n: int, S: Sequence[int]) -> Spectrum:
    c = np.zeros(1 << n)
    c[subset_mask(S, n)] = 1.0
    return Spectrum(c, exact=True)


def indicator_spectrum(n: int, a: int) -> Spectrum:
    """2^-n chi_S(a) for every S."""
    chi = 1 - 2 * (popcounts(n)[_points(n) & a] & 1)
    return Spectrum(chi / float(1 << n), exact=True)


# ---------------------------------------------------------------------------
# majority

def majority(n: int) -> BooleanFunction:
    """Maj_n(x) = sgn(x_1 + ... + x_n) for odd n."""
    check_arity(n)
    if n % 2 == 0:
        raise ValueError("majority is only defined here for odd n; ties have no canonical value")
    minus = popcounts(n)
    return BooleanFunction.from_bits((2 * minus > n).astype(np.uint8))


def majority_coefficient(n: int, size: int) -> Fraction:
    """Exact f^(S) of Maj_n for any S with |S| = size."""
    if size % 2 == 0:
        return Fraction(0)
    k = (size - 1) // 2
    m = (n - 1) // 2
    return ((-1) ** k * Fraction(comb(m, k), comb(n - 1, 2 * k))
            * Fraction(2, 1 << n) * comb(n - 1, m))


def majority_spectrum(n: int) -> Spectrum:
    check_arity(n)
    if n % 2 == 0:
        raise ValueError("majority is only defined here for odd n")
    by_level = np.array([float(majority_coefficient(n, k)) for k in range(n + 1)])
    return Spectrum(by_level[popcounts(n)])


# ---------------------------------------------------------------------------
# OR / AND

def or_fn(n: int) -> BooleanFunction:
    """+1 unless every coordinate is -1."""
    check_arity(n)
    bits = np.zeros(1 << n, dtype=np.uint8)
    bits[-1] = 1
    return BooleanFunction.from_bits(bits)


def and_fn(n: int) -> BooleanFunction:
    """+1 only at the all-(+1) point."""
    check_arity(n)
    bits = np.ones(1 << n, dtype=np.uint8)
    bits[0] = 0
    return BooleanFunction.from_bits(bits)


def or_spectrum(n: int) -> Spectrum:
    scale = 1.0 / (1 << (n - 1))
    pc = popcounts(n)
    c = np.where(pc % 2 == 1, scale, -scale)  # (-1)^{|S|+1} / 2^{n-1}
    c[0] = 1.0 - scale
    return Spectrum(c, exact=True)


def and_spectrum(n: int) -> Spectrum:
    scale = 1.0 / (1 << (n - 1))
    c = np.full(1 << n, scale)
    c[0] = -1.0 + scale
    return Spectrum(c, exact=True)


# ---------------------------------------------------------------------------
# juntas and tribes

def junta(n: int, coords: Sequence[int], g: BooleanFunction) -> BooleanFunction:
    """f(x) = g(x_{coords[0]}, ..., x_{coords[k-1]})."""
    check_arity(n)
    coords = list(coords)
    if len(coords) != g.n:
        raise ValueError(f"{len(coords)} coordinates given for a {g.n}-ary g")
    if len(set(coords)) != len(coords):
        raise ValueError("junta coordinates must be distinct")
    if any(not 1 <= c <= n for c in coords):
        raise IndexError(f"junta coordinate out of range for n={n}")
    pts = _points(n)
    sub = np.zeros_like(pts)
    for t, c in enumerate(coords):
        sub |= ((pts >> (c - 1)) & 1) << t
    return BooleanFunction.from_bits(g.bits[sub])


@dataclass(frozen=True)
class Partition:
    """Ordered disjoint nonempty blocks of coordinates covering [n]."""

    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        blocks = tuple(tuple(int(i) for i in b) for b in self.blocks)
        if not blocks or any(len(b) == 0 for b in blocks):
            raise ValueError("partition blocks must be nonempty")
        flat = [i for b in blocks for i in b]
        n = len(flat)
        if sorted(flat) != list(range(1, n + 1)):
            raise ValueError("blocks must be disjoint and cover 1..n")
        object.__setattr__(self, "blocks", blocks)

    @property
    def n(self) -> int:
        return sum(len(b) for b in self.blocks)

    @classmethod
    def uniform(cls, width: int, count: int) -> "Partition":
        """``count`` consecutive blocks of ``width`` coordinates each."""
        return cls(tuple(tuple(range(k * width + 1, (k + 1) * width + 1)) for k in range(count)))


def tribes(partition: Partition) -> BooleanFunction:
    """OR over blocks of AND within the block: +1 iff some block is unanimously +1."""
    n = check_arity(partition.n)
    bits = _coord_bits(n)
    wins = np.zeros(1 << n, dtype=bool)
    for block in partition.blocks:
        cols = [i - 1 for i in block]
        wins |= bits[:, cols].sum(axis=1) == 0
    return BooleanFunction.from_bits((~wins).astype(np.uint8))


@dataclass(frozen=True)
class TribesParams:
    """Tribes of width w, s of them, n = s * w.

    s is the largest integer with 1 - (1 - 2^-w)^s <= 1/2, which puts
    Prob{Tribes = -1} = (1 - 2^-w)^s as close to 1/2 from above as possible.
    """

    w: int
    s: int

    @property
    def n(self) -> int:
        return self.s * self.w

    def partition(self) -> Partition:
        return Partition.uniform(self.w, self.s)


def bl_params(w: int) -> TribesParams:
    if w < 1:
        raise ValueError("tribe width must be >= 1")
    q = 1 - Fraction(1, 1 << w)
    s = 0
    while q ** (s + 1) >= Fraction(1, 2):
        s += 1
    return TribesParams(w, max(s, 1))


def bl_tribes(w: int) -> BooleanFunction:
    return tribes(bl_params(w).partition())


def tribes_minus_probability(params: TribesParams) -> Fraction:
    """Prob{Tribes = -1}: no tribe is unanimous."""
    return (1 - Fraction(1, 1 << params.w)) ** params.s


# ---------------------------------------------------------------------------
# catalogue used by sweeps and the ``survey --mode family`` path

def catalog(max_n: int, min_n: int = 1) -> Iterator[tuple[str, BooleanFunction]]:
    """Named zoo functions with min_n <= arity <= max_n."""
    for n in range(min_n, max_n + 1):
        yield f"dictator({n},1)", dictator(n, 1)
        if n > 1:
            yield f"dictator({n},{n})", dictator(n, n)
        yield f"parity({n},all)", parity(n, range(1, n + 1))
        if n >= 3:
            yield f"parity({n},{{1,{n}}})", parity(n, [1, n])
        if n % 2:
            yield f"maj({n})", majority(n)
        yield f"or({n})", or_fn(n)
        yield f"and({n})", and_fn(n)
        if n >= 3:
            yield f"junta({n},[2,3],or2)", junta(n, [2, 3], or_fn(2))
            yield f"junta({n},[1,{n}],xor2)", junta(n, [1, n], parity(2, [1, 2]))
        if n >= 4 and n % 2 == 0:
            yield f"tribes(w=2,s={n // 2})", tribes(Partition.uniform(2, n // 2))
        if n >= 5 and n % 2 == 1:
            yield f"tribes(n={n},blocks=2+3..)", tribes(Partition(((1, 2),) + tuple(
                tuple(range(k, min(k + 3, n + 1))) for k in range(3, n + 1, 3))))
    for w in range(1, 5):
        p = bl_params(w)
        if min_n <= p.n <= max_n:
            yield f"bl_tribes(w={w},s={p.s})", bl_tribes(w)
