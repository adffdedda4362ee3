"""Discrete derivatives, pivots and influences.

Two routes to I_i(f): counting pivot edges of a Boolean table (exact integer
arithmetic), and summing f^(S)^2 over S containing i. The spectral route is
the definition for real-valued f; pivot counting only makes sense for
Boolean f, where the two coincide.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cube import (
    BooleanFunction,
    RealFunction,
    arity_of_length,
    as_table,
    coordinate_pairs,
    find_monotone_violation,
    point_vector,
    popcounts,
)
from .fourier import spectrum_of, transform
from .report import DEFAULT_TOL, Report


class NotMonotoneError(ValueError):
    """A monotone-only routine received a non-monotone function."""

    def __init__(self, f: BooleanFunction, witness: tuple[int, int]):
        p, i = witness
        q = p ^ (1 << (i - 1))
        super().__init__(
            f"function is not monotone: raising coordinate {i} from "
            f"{point_vector(p, f.n)} to {point_vector(q, f.n)} decreases f"
        )
        self.point = p
        self.coordinate = i


def require_monotone(f: BooleanFunction) -> None:
    bad = find_monotone_violation(f)
    if bad is not None:
        raise NotMonotoneError(f, bad)


def derivative_table(values: np.ndarray, i: int) -> np.ndarray:
    """D_i on the last axis: (f(x^{i->1}) - f(x^{i->-1})) / 2 at every x."""
    values = np.asarray(values, dtype=np.float64)
    out = np.empty_like(values)
    plus, minus = coordinate_pairs(values, i)
    d_plus, d_minus = coordinate_pairs(out, i)
    d_plus[...] = (plus - minus) / 2
    d_minus[...] = d_plus
    return out


def derivative(f, i: int) -> RealFunction:
    return RealFunction(derivative_table(as_table(f), i))


def pivot_counts(values: np.ndarray) -> np.ndarray:
    """Number of pivot edges per coordinate, shape (..., n), int64.

    Each unordered edge {x, x^(i)} with f(x) != f(x^(i)) is counted once.
    """
    values = np.asarray(values)
    n = arity_of_length(values.shape[-1])
    out = np.empty(values.shape[:-1] + (n,), dtype=np.int64)
    for i in range(1, n + 1):
        plus, minus = coordinate_pairs(values, i)
        out[..., i - 1] = (plus != minus).sum(axis=(-2, -1))
    return out


def pivot_influences_table(values: np.ndarray) -> np.ndarray:
    """I_i = Prob{f(x) != f(x^(i))} = 2 * edges / 2^n, batched."""
    size = np.asarray(values).shape[-1]
    return pivot_counts(values) / float(max(1, size // 2))


def spectral_influences_table(coeffs: np.ndarray) -> np.ndarray:
    """I_i = sum over S containing i of f^(S)^2, batched, shape (..., n)."""
    coeffs = np.asarray(coeffs, dtype=np.float64)
    size = coeffs.shape[-1]
    n = arity_of_length(size)
    member = ((np.arange(size)[:, None] >> np.arange(n)[None, :]) & 1).astype(np.float64)
    return (coeffs * coeffs) @ member


def total_influence_table(coeffs: np.ndarray) -> np.ndarray:
    coeffs = np.asarray(coeffs, dtype=np.float64)
    pc = popcounts(arity_of_length(coeffs.shape[-1])).astype(np.float64)
    return (coeffs * coeffs) @ pc


def influence_pivot(f: BooleanFunction, i: int) -> float:
    if not isinstance(f, BooleanFunction):
        raise TypeError("pivot counting is defined for Boolean functions only")
    if not 1 <= i <= f.n:
        raise IndexError(f"coordinate {i} out of range for n={f.n}")
    return float(pivot_influences_table(f.values)[i - 1])


def influences_pivot(f: BooleanFunction) -> np.ndarray:
    if not isinstance(f, BooleanFunction):
        raise TypeError("pivot counting is defined for Boolean functions only")
    return pivot_influences_table(f.values)


def influence_spectral(s, i: int) -> float:
    s = spectrum_of(s)
    if not 1 <= i <= s.n:
        raise IndexError(f"coordinate {i} out of range for n={s.n}")
    return float(spectral_influences_table(s.coeffs)[i - 1])


def influences_spectral(s) -> np.ndarray:
    return spectral_influences_table(spectrum_of(s).coeffs)


def total_influence(s) -> float:
    """I(f) = sum_S |S| f^(S)^2."""
    return float(total_influence_table(spectrum_of(s).coeffs))


@dataclass(frozen=True)
class InfluenceProfile:
    per_coordinate: np.ndarray
    total: float
    method: str  # "pivot-count" or "spectral"


def influence_profile(f, method: str = "spectral") -> InfluenceProfile:
    if method == "pivot-count":
        per = influences_pivot(f)
    elif method == "spectral":
        per = influences_spectral(f)
    else:
        raise ValueError(f"unknown influence method {method!r}")
    return InfluenceProfile(per, float(per.sum()), method)


def monotone_influence_check(f: BooleanFunction, tol: float = 0.0) -> Report:
    """For monotone f: I_i(f) = f^({i}) for each i, and I(f) = sum_i f^({i}).

    Exact comparison by default since both sides are dyadic.
    """
    require_monotone(f)
    s = transform(f)
    infl = influences_pivot(f)
    singles = np.array([s.coeffs[1 << j] for j in range(f.n)])
    dev = float(np.abs(infl - singles).max()) if f.n else 0.0
    rep = Report("monotone-influence", {"n": f.n}, tol=tol)
    rep.quantities["influences"] = infl
    rep.quantities["level1_coefficients"] = singles
    rep.quantities["max_deviation"] = dev
    for j in range(f.n):
        rep.check(f"I_{j + 1}=fhat({{{j + 1}}})", infl[j], singles[j], "==", witness=f)
    rep.check("I=sum_fhat_singletons", infl.sum(), singles.sum(), "==", witness=f)
    return rep


def poincare_sides(coeffs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Batched (Var f, I f)."""
    coeffs = np.asarray(coeffs, dtype=np.float64)
    var = (coeffs[..., 1:] ** 2).sum(axis=-1)
    return var, total_influence_table(coeffs)


def poincare_check(f, tol: float = DEFAULT_TOL) -> Report:
    s = spectrum_of(f)
    var, infl = (float(x) for x in poincare_sides(s.coeffs))
    high = float((s.coeffs[popcounts(s.n) >= 2] ** 2).sum())
    rep = Report("poincare", {"n": s.n}, tol=tol)
    rep.quantities["variance"] = var
    rep.quantities["total_influence"] = infl
    rep.quantities["slack"] = infl - var
    rep.quantities["equality"] = high <= s.zero_threshold
    rep.check("Var<=I", var, infl, "<=", witness=f)
    return rep
