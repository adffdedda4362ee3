"""Walsh-Hadamard transform between value tables and spectra.

Coefficients are normalised on the forward side,

    f^(S) = 2^-n * sum_x f(x) chi_S(x),

so Boolean spectra are dyadic rationals and come out exact in float64.
All kernels here act on the last axis and accept any leading batch shape.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .cube import (
    BooleanFunction,
    FormatError,
    RealFunction,
    arity_of_length,
    as_table,
    check_arity,
    popcounts,
)

REAL_ZERO = 1e-12


BLOCK_BITS = 6


@lru_cache(maxsize=None)
def _hadamard(k: int, dtype: str) -> np.ndarray:
    """Sylvester matrix H_k with H[m, i] = (-1)^popcount(m & i)."""
    h = np.ones((1, 1), dtype=dtype)
    for _ in range(k):
        h = np.block([[h, h], [h, -h]])
    h.setflags(write=False)
    return h


def fwht(a: np.ndarray) -> np.ndarray:
    """Unnormalised fast Walsh-Hadamard transform along the last axis.

    out[..., m] = sum_i a[..., i] * (-1)^popcount(m & i). The n coordinate
    bits are handled in blocks of up to BLOCK_BITS at a time, each block as a
    product with a small Hadamard matrix. Integer input stays integer, so
    Boolean tables are transformed exactly.
    """
    a = np.asarray(a)
    size = a.shape[-1]
    n = arity_of_length(size)
    lead = a.shape[:-1]
    out = a.copy()
    j = 0
    while j < n:
        k = min(BLOCK_BITS, n - j)
        h = _hadamard(k, out.dtype.str)
        if j == 0:
            out = out.reshape(lead + (size >> k, 1 << k)) @ h
        else:
            out = h @ out.reshape(lead + (size >> (j + k), 1 << k, 1 << j))
        out = out.reshape(lead + (size,))
        j += k
    return out


def direct_transform(table: np.ndarray) -> np.ndarray:
    """Quadratic-work reference: explicit character sums, one mask at a time."""
    table = np.asarray(table, dtype=np.float64)
    size = table.shape[-1]
    n = arity_of_length(size)
    idx = np.arange(size)
    pc = popcounts(n)
    out = np.empty_like(table)
    for m in range(size):
        chi = 1.0 - 2.0 * (pc[m & idx] & 1)
        out[..., m] = (table * chi).sum(axis=-1) / size
    return out


def spectrum_table(values: np.ndarray) -> np.ndarray:
    """Batched forward transform of raw value tables.

    Integer input (e.g. +-1 tables) is transformed in exact integer arithmetic
    and divided by 2^n at the end.
    """
    values = np.asarray(values)
    size = values.shape[-1]
    if np.issubdtype(values.dtype, np.integer):
        return fwht(values.astype(np.int64)) / float(size)
    return fwht(values.astype(np.float64)) / float(size)


def values_table(coeffs: np.ndarray) -> np.ndarray:
    """Batched inverse transform: f(x) = sum_S f^(S) chi_S(x)."""
    return fwht(np.asarray(coeffs, dtype=np.float64))


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Fourier coefficients of f indexed by subset mask."""

    coeffs: np.ndarray
    exact: bool = False  # true when obtained from a Boolean table

    def __post_init__(self):
        coeffs = np.array(self.coeffs, dtype=np.float64)
        if coeffs.ndim != 1:
            raise ValueError("spectrum must be one-dimensional")
        check_arity(arity_of_length(coeffs.size), allow_zero=True)
        if not np.isfinite(coeffs).all():
            raise ValueError("spectrum entries must be finite")
        coeffs.setflags(write=False)
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def n(self) -> int:
        return arity_of_length(self.coeffs.size)

    def __getitem__(self, mask: int) -> float:
        return float(self.coeffs[mask])

    def __eq__(self, other):
        if not isinstance(other, Spectrum):
            return NotImplemented
        return np.array_equal(self.coeffs, other.coeffs)

    def __hash__(self):
        return hash(self.coeffs.tobytes())

    @property
    def zero_threshold(self) -> float:
        return 0.0 if self.exact else REAL_ZERO

    def to_spec(self) -> str:
        lines = [f"n {self.n}"]
        lines += [f"{m} {float(c)!r}" for m, c in enumerate(self.coeffs)]
        return "\n".join(lines) + "\n"


def transform(f) -> Spectrum:
    """Spectrum of a BooleanFunction, RealFunction or raw table."""
    if isinstance(f, Spectrum):
        return f
    if isinstance(f, BooleanFunction):
        return Spectrum(spectrum_table(f.values), exact=True)
    return Spectrum(spectrum_table(as_table(f)))


def inverse_transform(s: Spectrum) -> RealFunction:
    return RealFunction(values_table(s.coeffs))


def spectrum_of(f) -> Spectrum:
    return f if isinstance(f, Spectrum) else transform(f)


def _same_arity(a, b):
    if a.n != b.n:
        raise ValueError(f"arity mismatch: {a.n} vs {b.n}")


def plancherel(f, g) -> float:
    """<f, g> = sum_S f^(S) g^(S)."""
    sf, sg = spectrum_of(f), spectrum_of(g)
    _same_arity(sf, sg)
    return float(np.dot(sf.coeffs, sg.coeffs))


def mean(f) -> float:
    return float(spectrum_of(f).coeffs[0])


def variance(f) -> float:
    c = spectrum_of(f).coeffs
    return float(np.dot(c[1:], c[1:]))


def covariance(f, g) -> float:
    sf, sg = spectrum_of(f), spectrum_of(g)
    _same_arity(sf, sg)
    return float(np.dot(sf.coeffs[1:], sg.coeffs[1:]))


def degree_table(coeffs: np.ndarray, threshold: float = 0.0) -> np.ndarray:
    """Batched degree: the largest |S| with |f^(S)| > threshold (-1 for f = 0)."""
    coeffs = np.asarray(coeffs)
    pc = popcounts(arity_of_length(coeffs.shape[-1]))
    levels = np.where(np.abs(coeffs) > threshold, pc, -1)
    return levels.max(axis=-1)


def degree(s) -> int:
    s = spectrum_of(s)
    return int(degree_table(s.coeffs, s.zero_threshold))


def _check_level(k: int, n: int) -> None:
    if not 0 <= k <= n:
        raise ValueError(f"level {k} outside [0, {n}]")


def truncate(s, d: int) -> Spectrum:
    """f^{<=d}: zero every coefficient above level d."""
    s = spectrum_of(s)
    _check_level(d, s.n)
    pc = popcounts(s.n)
    return Spectrum(np.where(pc <= d, s.coeffs, 0.0), exact=s.exact)


def level_weights_table(coeffs: np.ndarray) -> np.ndarray:
    """Batched W^k for k = 0..n along a new last axis of length n+1."""
    coeffs = np.asarray(coeffs, dtype=np.float64)
    n = arity_of_length(coeffs.shape[-1])
    pc = popcounts(n)
    sq = coeffs * coeffs
    onehot = (pc[:, None] == np.arange(n + 1)[None, :]).astype(np.float64)
    return sq @ onehot


def level_weight(s, k: int) -> float:
    s = spectrum_of(s)
    _check_level(k, s.n)
    pc = popcounts(s.n)
    c = s.coeffs[pc == k]
    return float(np.dot(c, c))


def level_weights(s) -> np.ndarray:
    return level_weights_table(spectrum_of(s).coeffs)


def parseval_check(f, tol: float = 1e-9):
    """Compare sum_S f^(S)^2 with E[f^2] computed pointwise."""
    from .report import Report

    table = as_table(f)
    s = spectrum_of(f)
    lhs = float(np.dot(s.coeffs, s.coeffs))
    rhs = float(np.mean(table * table))
    rep = Report("parseval", {"n": s.n}, tol=tol)
    rep.quantities["spectral_energy"] = lhs
    rep.quantities["mean_square"] = rhs
    rep.check("parseval", lhs, rhs, "==", witness=f)
    if isinstance(f, BooleanFunction):
        rep.check("boolean_unit_energy", lhs, 1.0, "==", witness=f)
    return rep


# ---------------------------------------------------------------------------
# .spec text format

def parse_spec(text: str) -> Spectrum:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise FormatError("empty file")
    head = lines[0].split()
    if len(head) != 2 or head[0] != "n" or not head[1].isdigit():
        raise FormatError(f"line 1: expected 'n <arity>', got {lines[0]!r}")
    n = int(head[1])
    try:
        check_arity(n, allow_zero=True)
    except ValueError as exc:
        raise FormatError(f"line 1: {exc}") from exc
    size = 1 << n
    if len(lines) - 1 != size:
        raise FormatError(f"expected {size} coefficient lines, found {len(lines) - 1}")
    coeffs = np.empty(size)
    for m, line in enumerate(lines[1:]):
        parts = line.split()
        lineno = m + 2
        if len(parts) != 2:
            raise FormatError(f"line {lineno}: expected 'mask value', got {line!r}")
        if parts[0] != str(m):
            raise FormatError(f"line {lineno}: expected mask {m}, got {parts[0]!r}")
        try:
            coeffs[m] = float(parts[1])
        except ValueError as exc:
            raise FormatError(f"line {lineno}: bad value {parts[1]!r}") from exc
        if not np.isfinite(coeffs[m]):
            raise FormatError(f"line {lineno}: value must be finite")
    return Spectrum(coeffs)


def read_spec(path) -> Spectrum:
    with open(path) as fh:
        return parse_spec(fh.read())


def write_spec(s: Spectrum, path) -> None:
    with open(path, "w") as fh:
        fh.write(s.to_spec())


def boolean_from_spectrum(s: Spectrum) -> BooleanFunction:
    """Rebuild a Boolean function from its spectrum; values must be +-1."""
    vals = values_table(s.coeffs)
    rounded = np.rint(vals)
    if not (np.isin(rounded, (-1.0, 1.0)).all() and np.abs(vals - rounded).max() <= 1e-9):
        raise ValueError("spectrum does not describe a Boolean function")
    return BooleanFunction.from_values(rounded.astype(np.int64))
