"""Points, subsets and truth tables on the Hamming cube {-1,1}^n.

A point x is stored as an integer index whose bit j-1 is set iff x_j = -1,
and a subset S of [n] as a mask whose bit j-1 is set iff j is in S. With this
encoding chi_S(point i) = (-1)^popcount(S & i), so every spectral kernel in
the package reduces to sign flips on the last axis of a numpy array.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

DEFAULT_MAX_N = 24
MAX_N_ENV = "HYPERCUBE_MAX_N"


class ArityError(ValueError):
    """Raised when an arity is outside the supported dense-table range."""


def max_arity() -> int:
    raw = os.environ.get(MAX_N_ENV)
    if raw is None:
        return DEFAULT_MAX_N
    try:
        return int(raw)
    except ValueError as exc:
        raise ArityError(f"{MAX_N_ENV} must be an integer, got {raw!r}") from exc


def check_arity(n: int, allow_zero: bool = False) -> int:
    n = int(n)
    lo = 0 if allow_zero else 1
    cap = max_arity()
    if n < lo or n > cap:
        raise ArityError(f"arity {n} outside supported range [{lo}, {cap}]")
    return n


def arity_of_length(size: int) -> int:
    """Return n such that ``size == 2**n``."""
    if size < 1 or size & (size - 1):
        raise ArityError(f"table length {size} is not a power of two")
    return size.bit_length() - 1


# ---------------------------------------------------------------------------
# encodings

def point_index(x: Sequence[int]) -> int:
    """Encode a +-1 vector (x_1, ..., x_n) as a point index."""
    idx = 0
    for j, xj in enumerate(x):
        if xj == -1:
            idx |= 1 << j
        elif xj != 1:
            raise ValueError(f"coordinate {j + 1} is {xj}, expected +1 or -1")
    return idx


def point_vector(index: int, n: int) -> tuple[int, ...]:
    """Decode a point index into the +-1 vector (x_1, ..., x_n)."""
    if not 0 <= index < (1 << n):
        raise IndexError(f"point index {index} out of range for n={n}")
    return tuple(-1 if (index >> j) & 1 else 1 for j in range(n))


def subset_mask(S: Iterable[int], n: int | None = None) -> int:
    """Encode a subset of {1, ..., n} (1-based coordinates) as a mask."""
    mask = 0
    for i in S:
        if i < 1 or (n is not None and i > n):
            raise ValueError(f"coordinate {i} out of range for n={n}")
        mask |= 1 << (i - 1)
    return mask


def mask_subset(mask: int) -> tuple[int, ...]:
    return tuple(j + 1 for j in range(mask.bit_length()) if (mask >> j) & 1)


def popcounts(n: int) -> np.ndarray:
    """popcount of every index in [0, 2^n), as int64."""
    pc = np.zeros(1 << n, dtype=np.int64)
    for j in range(n):
        pc[1 << j: 2 << j] = pc[: 1 << j] + 1
    return pc


def flip(p: int, i: int, n: int) -> int:
    """Index of the point equal to ``p`` except for a sign change at coordinate i."""
    if not 1 <= i <= n:
        raise IndexError(f"coordinate {i} out of range for n={n}")
    if not 0 <= p < (1 << n):
        raise IndexError(f"point index {p} out of range for n={n}")
    return p ^ (1 << (i - 1))


def coordinate_pairs(table: np.ndarray, i: int) -> tuple[np.ndarray, np.ndarray]:
    """Split the last axis into the x_i = +1 and x_i = -1 halves.

    Both returned views have shape ``(..., 2^(n-1-j), 2^j)`` with j = i-1 and
    are aligned so that entry k of each half is the same point up to x_i.
    """
    size = table.shape[-1]
    n = arity_of_length(size)
    j = i - 1
    if not 0 <= j < n:
        raise IndexError(f"coordinate {i} out of range for n={n}")
    blocks = table.reshape(table.shape[:-1] + (size >> (j + 1), 2, 1 << j))
    return blocks[..., 0, :], blocks[..., 1, :]


# ---------------------------------------------------------------------------
# function tables

def _pack(bits: np.ndarray) -> np.ndarray:
    raw = np.packbits(bits.astype(np.uint8), bitorder="little")
    pad = (-raw.size) % 8
    if pad:
        raw = np.concatenate([raw, np.zeros(pad, dtype=np.uint8)])
    return raw.view("<u8").copy()


def _unpack(words: np.ndarray, count: int) -> np.ndarray:
    return np.unpackbits(words.view(np.uint8), bitorder="little", count=count)


@dataclass(frozen=True, eq=False)
class BooleanFunction:
    """f: {-1,1}^n -> {-1,1} as a bit-packed truth table.

    Bit i of the table holds c_i = (1 - f(point i)) / 2, so a set bit means
    the value -1. ``n == 0`` is the degenerate constant used when a chain of
    restrictions exhausts every coordinate.
    """

    n: int
    words: np.ndarray = field(repr=False)

    def __post_init__(self):
        check_arity(self.n, allow_zero=True)
        words = np.asarray(self.words, dtype=np.uint64)
        if words.ndim != 1 or words.size != max(1, ((1 << self.n) + 63) // 64):
            raise ValueError("word count does not match arity")
        size = 1 << self.n
        if size % 64:
            tail = np.uint64(~((1 << (size % 64)) - 1) & 0xFFFFFFFFFFFFFFFF)
            if int(words[-1] & tail):
                raise ValueError("trailing bits of the last word must be zero")
        words.setflags(write=False)
        object.__setattr__(self, "words", words)

    @classmethod
    def from_bits(cls, bits) -> "BooleanFunction":
        bits = np.asarray(bits)
        if bits.ndim != 1:
            raise ValueError("truth table must be one-dimensional")
        if not np.isin(bits, (0, 1)).all():
            raise ValueError("truth-table bits must be 0 or 1")
        n = arity_of_length(bits.size)
        return cls(n, _pack(bits))

    @classmethod
    def from_values(cls, values) -> "BooleanFunction":
        values = np.asarray(values)
        if not np.isin(values, (-1, 1)).all():
            raise ValueError("Boolean function values must be +1 or -1")
        return cls.from_bits((values == -1).astype(np.uint8))

    @classmethod
    def from_index(cls, n: int, index: int) -> "BooleanFunction":
        """Function number ``index`` in the enumeration of all 2^(2^n) tables."""
        size = 1 << n
        if not 0 <= index < (1 << size):
            raise IndexError(f"function index {index} out of range for n={n}")
        bits = np.array([(index >> k) & 1 for k in range(size)], dtype=np.uint8)
        return cls.from_bits(bits)

    @classmethod
    def constant(cls, n: int, value: int) -> "BooleanFunction":
        return cls.from_values(np.full(1 << n, value, dtype=np.int8))

    @property
    def size(self) -> int:
        return 1 << self.n

    @property
    def bits(self) -> np.ndarray:
        return _unpack(self.words, self.size)

    @property
    def values(self) -> np.ndarray:
        """The +-1 table as int64."""
        return 1 - 2 * self.bits.astype(np.int64)

    def to_real(self) -> "RealFunction":
        return RealFunction(self.values.astype(np.float64))

    def __call__(self, p: int) -> int:
        return evaluate(self, p)

    def __neg__(self) -> "BooleanFunction":
        return BooleanFunction.from_bits(1 - self.bits)

    def __eq__(self, other):
        if not isinstance(other, BooleanFunction):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.words, other.words)

    def __hash__(self):
        return hash((self.n, self.words.tobytes()))

    def to_bfn(self) -> str:
        return f"n {self.n}\n" + "".join("1" if b else "0" for b in self.bits) + "\n"

    def table_string(self) -> str:
        return "".join("1" if b else "0" for b in self.bits)


class RealFunction:
    """f: {-1,1}^n -> R stored as a dense float64 table indexed by point."""

    __slots__ = ("table",)

    def __init__(self, table):
        table = np.array(table, dtype=np.float64)
        if table.ndim != 1:
            raise ValueError("table must be one-dimensional")
        check_arity(arity_of_length(table.size), allow_zero=True)
        if not np.isfinite(table).all():
            raise ValueError("table entries must be finite")
        table.setflags(write=False)
        self.table = table

    @property
    def n(self) -> int:
        return arity_of_length(self.table.size)

    @property
    def values(self) -> np.ndarray:
        return self.table

    def __repr__(self):
        return f"RealFunction(n={self.n})"

    def __eq__(self, other):
        if not isinstance(other, RealFunction):
            return NotImplemented
        return np.array_equal(self.table, other.table)

    def __hash__(self):
        return hash(self.table.tobytes())

    def __add__(self, other: "RealFunction") -> "RealFunction":
        return RealFunction(self.table + as_table(other))

    def __mul__(self, scalar: float) -> "RealFunction":
        return RealFunction(self.table * scalar)

    __rmul__ = __mul__


def as_table(f) -> np.ndarray:
    """Value table of a BooleanFunction, RealFunction or raw array, as float64."""
    if isinstance(f, BooleanFunction):
        return f.values.astype(np.float64)
    if isinstance(f, RealFunction):
        return f.table
    table = np.asarray(f, dtype=np.float64)
    arity_of_length(table.shape[-1])
    return table


def variable(n: int, i: int) -> RealFunction:
    """The coordinate function x_i as a real table."""
    check_arity(n)
    if not 1 <= i <= n:
        raise IndexError(f"coordinate {i} out of range for n={n}")
    idx = np.arange(1 << n)
    return RealFunction(1.0 - 2.0 * ((idx >> (i - 1)) & 1))


# ---------------------------------------------------------------------------
# operations

def evaluate(f: BooleanFunction, p: int) -> int:
    if not 0 <= p < f.size:
        raise IndexError(f"point index {p} out of range for n={f.n}")
    word = int(f.words[p >> 6])
    return -1 if (word >> (p & 63)) & 1 else 1


def restrict(f: BooleanFunction, i: int, b: int) -> BooleanFunction:
    """Fix coordinate i to b; the remaining coordinates keep their order.

    Restricting a 1-variable function yields the 0-arity constant.
    """
    if f.n < 1:
        raise ArityError("cannot restrict a 0-arity function")
    if not 1 <= i <= f.n:
        raise IndexError(f"coordinate {i} out of range for n={f.n}")
    if b not in (1, -1):
        raise ValueError(f"restriction value must be +1 or -1, got {b}")
    plus, minus = coordinate_pairs(f.bits, i)
    half = plus if b == 1 else minus
    return BooleanFunction.from_bits(half.reshape(-1))


def monotone_violations(values: np.ndarray) -> np.ndarray:
    """Per-row count of (point, coordinate) pairs violating monotonicity.

    ``values`` has shape (..., 2^n); a violation is f(x^{i->-1}) > f(x^{i->1}).
    """
    n = arity_of_length(values.shape[-1])
    out = np.zeros(values.shape[:-1], dtype=np.int64)
    for i in range(1, n + 1):
        plus, minus = coordinate_pairs(values, i)
        out += (minus > plus).sum(axis=(-2, -1))
    return out


def find_monotone_violation(f: BooleanFunction) -> tuple[int, int] | None:
    """Return (point index with x_i = -1, coordinate i) of a violation, or None."""
    vals = f.values
    for i in range(1, f.n + 1):
        plus, minus = coordinate_pairs(vals, i)
        bad = np.argwhere(minus > plus)
        if bad.size:
            hi, lo = bad[0]
            j = i - 1
            p = (int(hi) << (j + 1)) | (1 << j) | int(lo)
            return p, i
    return None


def is_monotone(f: BooleanFunction) -> bool:
    return f.n == 0 or int(monotone_violations(f.values)) == 0


def all_tables(n: int, start: int = 0, stop: int | None = None) -> np.ndarray:
    """+-1 tables of Boolean functions ``start..stop-1`` of arity n.

    Row k is the function whose index has bit i equal to c_i, matching
    ``BooleanFunction.from_index``. Shape (stop-start, 2^n), dtype int64.
    """
    size = 1 << n
    if size > 62:
        raise ArityError("exhaustive enumeration is limited to n <= 5")
    total = 1 << size
    stop = total if stop is None else stop
    idx = np.arange(start, stop, dtype=np.int64)
    bits = (idx[:, None] >> np.arange(size, dtype=np.int64)) & 1
    return 1 - 2 * bits


def table_index(values: np.ndarray) -> int:
    """Inverse of ``all_tables`` for a single +-1 row (n <= 5)."""
    bits = (np.asarray(values) == -1).astype(np.int64)
    return int(sum(int(b) << k for k, b in enumerate(bits)))


# ---------------------------------------------------------------------------
# .bfn text format

class FormatError(ValueError):
    """Malformed input file; the message names the offending line."""


def parse_bfn(text: str) -> BooleanFunction:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if len(lines) != 2:
        raise FormatError(f"expected 2 lines, found {len(lines)}")
    head = lines[0].split(" ")
    if len(head) != 2 or head[0] != "n" or not head[1].isdigit():
        raise FormatError(f"line 1: expected 'n <arity>', got {lines[0]!r}")
    n = int(head[1])
    try:
        check_arity(n, allow_zero=True)
    except ArityError as exc:
        raise FormatError(f"line 1: {exc}") from exc
    body = lines[1]
    if len(body) != 1 << n:
        raise FormatError(f"line 2: expected {1 << n} characters, got {len(body)}")
    bad = set(body) - {"0", "1"}
    if bad:
        raise FormatError(f"line 2: invalid characters {sorted(bad)}")
    return BooleanFunction.from_bits(np.frombuffer(body.encode(), dtype=np.uint8) - ord("0"))


def read_bfn(path) -> BooleanFunction:
    with open(path) as fh:
        return parse_bfn(fh.read())


def write_bfn(f: BooleanFunction, path) -> None:
    with open(path, "w") as fh:
        fh.write(f.to_bfn())
