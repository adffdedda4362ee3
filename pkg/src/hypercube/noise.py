"""Noise operator, L^p norms and the Bonami / hypercontractivity verifiers.

Every verifier evaluates both sides of its inequality numerically; nothing
is assumed. The ``*_sides`` helpers are batched over leading axes so the
exhaustive and random sweeps share the code path of the single-function
checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .cube import BooleanFunction, RealFunction, as_table, check_arity, popcounts
from .fourier import (
    REAL_ZERO,
    Spectrum,
    degree_table,
    spectrum_of,
    values_table,
)
from .report import DEFAULT_TOL, Report

SQRT3 = math.sqrt(3.0)


def lp_norm_table(values: np.ndarray, p: float) -> np.ndarray:
    """Batched ||f||_p = E[|f|^p]^(1/p) under the uniform measure."""
    if not p >= 1:
        raise ValueError(f"p must be >= 1, got {p}")
    a = np.abs(np.asarray(values, dtype=np.float64))
    if math.isinf(p):
        return a.max(axis=-1)
    if p == 1:
        return a.mean(axis=-1)
    # scale by the max so a ** p neither underflows nor overflows
    top = a.max(axis=-1, keepdims=True)
    scale = np.where(top > 0, top, 1.0)
    r = a / scale
    if p == 2:
        inner = np.sqrt((r * r).mean(axis=-1))
    else:
        inner = np.mean(_power(r, p), axis=-1) ** (1.0 / p)
    return scale[..., 0] * inner


def _power(r: np.ndarray, p: float) -> np.ndarray:
    """r ** p, by repeated squaring when p is a small integer."""
    if p != int(p) or p > 64:
        return r ** p
    k, out, base = int(p), None, r
    while k:
        if k & 1:
            out = base.copy() if out is None else out * base
        k >>= 1
        if k:
            base = base * base
    return out


def lp_norm(f, p: float) -> float:
    return float(lp_norm_table(as_table(f), p))


def noise_table(coeffs: np.ndarray, rho: float) -> np.ndarray:
    """Multiply level-k coefficients by rho^k (batched)."""
    coeffs = np.asarray(coeffs, dtype=np.float64)
    n = coeffs.shape[-1].bit_length() - 1
    mult = float(rho) ** np.arange(n + 1, dtype=np.float64)
    return coeffs * mult[popcounts(n)]


def apply_noise(s, rho: float) -> Spectrum:
    """Spectrum of T_rho f. T_{1/rho} inverts T_rho for rho != 0."""
    s = spectrum_of(s)
    return Spectrum(noise_table(s.coeffs, rho))


def riesz_product(rho: float, n: int) -> RealFunction:
    """R(x) = prod_i (1 + rho x_i), built pointwise."""
    check_arity(n, allow_zero=True)
    idx = np.arange(1 << n)
    table = np.ones(1 << n)
    for j in range(n):
        xj = 1.0 - 2.0 * ((idx >> j) & 1)
        table *= 1.0 + rho * xj
    return RealFunction(table)


@dataclass(frozen=True)
class NoiseParams:
    rho: float
    p: float
    q: float

    def __post_init__(self):
        if self.p < 1 or self.q < 1:
            raise ValueError("p and q must be >= 1")
        if self.q < self.p:
            raise ValueError(f"need p <= q, got p={self.p}, q={self.q}")

    @property
    def admissible(self) -> bool:
        return admissible(self.rho, self.p, self.q)


PRESETS = {
    "4,2": NoiseParams(1 / SQRT3, 2.0, 4.0),
    "2,4/3": NoiseParams(1 / SQRT3, 4.0 / 3.0, 2.0),
}


def admissible(rho: float, p: float, q: float) -> bool:
    """rho^2 <= (p-1)/(q-1). For q = inf the bound is 0 unless p = q."""
    if p == q:
        return rho * rho <= 1.0
    if math.isinf(q):
        return rho == 0.0
    return rho * rho <= (p - 1.0) / (q - 1.0) + 1e-15


def _threshold(f) -> float:
    if isinstance(f, Spectrum):
        return f.zero_threshold
    return 0.0 if isinstance(f, BooleanFunction) else REAL_ZERO


# ---------------------------------------------------------------------------
# batched sides

def bonami_sides(values, coeffs, threshold=REAL_ZERO):
    """(E[f^4], 9^d E[f^2]^2, d)."""
    values = np.asarray(values, dtype=np.float64)
    d = degree_table(coeffs, threshold)
    sq = values * values
    e2 = sq.mean(axis=-1)
    e4 = (sq * sq).mean(axis=-1)
    return e4, 9.0 ** np.maximum(d, 0) * e2 * e2, d


def one_norm_sides(values, coeffs, threshold=REAL_ZERO):
    """(||f||_2, 3^d ||f||_1, d)."""
    d = degree_table(coeffs, threshold)
    return lp_norm_table(values, 2), 3.0 ** np.maximum(d, 0) * lp_norm_table(values, 1), d


def hypercontractivity_sides(values, coeffs, rho, p, q):
    """(||T_rho f||_q, ||f||_p)."""
    noisy = values_table(noise_table(coeffs, rho))
    return lp_norm_table(noisy, q), lp_norm_table(values, p)


def truncation_sides(values, coeffs, d):
    """(||f^{<=d}||_2^2, sqrt(3)^d ||f||_2 ||f||_{4/3})."""
    coeffs = np.asarray(coeffs, dtype=np.float64)
    n = coeffs.shape[-1].bit_length() - 1
    low = popcounts(n) <= d
    lhs = (coeffs[..., low] ** 2).sum(axis=-1)
    rhs = SQRT3 ** d * lp_norm_table(values, 2) * lp_norm_table(values, 4.0 / 3.0)
    return lhs, rhs


# ---------------------------------------------------------------------------
# single-function reports

def _prepare(f):
    if isinstance(f, Spectrum):
        return values_table(f.coeffs), f.coeffs
    return as_table(f), spectrum_of(f).coeffs


def bonami_check(f, tol: float = DEFAULT_TOL) -> Report:
    """E[f^4] <= 9^deg(f) E[f^2]^2; for n = 1 also the base-case moment identities."""
    values, coeffs = _prepare(f)
    e4, rhs, d = (float(x) for x in bonami_sides(values, coeffs, _threshold(f)))
    n = values.size.bit_length() - 1
    rep = Report("verify bonami", {"n": n}, tol=tol)
    rep.quantities["degree"] = int(d)
    rep.quantities["E[f^4]"] = e4
    rep.quantities["E[f^2]"] = float(np.mean(values ** 2))
    rep.quantities["norm4"] = e4 ** 0.25
    rep.quantities["norm2"] = math.sqrt(rep.quantities["E[f^2]"])
    rep.check("E[f^4]<=9^d*E[f^2]^2", e4, rhs, "<=", witness=f)
    if n == 1:
        a0, a1 = float(coeffs[0]), float(coeffs[1])
        rep.check("E[f^4]=a0^4+a1^4+6a0^2a1^2", e4, a0**4 + a1**4 + 6 * a0**2 * a1**2, "==",
                  witness=f)
        rep.check("E[f^2]=a0^2+a1^2", rep.quantities["E[f^2]"], a0**2 + a1**2, "==", witness=f)
    return rep


def one_norm_trick_check(f, tol: float = DEFAULT_TOL) -> Report:
    values, coeffs = _prepare(f)
    lhs, rhs, d = (float(x) for x in one_norm_sides(values, coeffs, _threshold(f)))
    rep = Report("verify norm1", {"n": values.size.bit_length() - 1}, tol=tol)
    rep.quantities["degree"] = int(d)
    rep.quantities["norm2"] = lhs
    rep.quantities["norm1"] = float(lp_norm_table(values, 1))
    rep.check("||f||_2<=3^d*||f||_1", lhs, rhs, "<=", witness=f)
    return rep


def hypercontractivity_check(f, params: NoiseParams | str = "4,2",
                             tol: float = DEFAULT_TOL) -> Report:
    """||T_rho f||_q <= ||f||_p, asserted only when rho^2 <= (p-1)/(q-1)."""
    if isinstance(params, str):
        params = PRESETS[params]
    values, coeffs = _prepare(f)
    lhs, rhs = (float(x) for x in
                hypercontractivity_sides(values, coeffs, params.rho, params.p, params.q))
    rep = Report("verify hyper",
                 {"n": values.size.bit_length() - 1, "rho": params.rho, "p": params.p,
                  "q": params.q}, tol=tol)
    rep.quantities["noisy_norm_q"] = lhs
    rep.quantities["norm_p"] = rhs
    rep.quantities["admissible"] = params.admissible
    if params.admissible:
        rep.check("||T_rho f||_q<=||f||_p", lhs, rhs, "<=", witness=f)
    return rep


def truncation_lemma_check(f, d: int, tol: float = DEFAULT_TOL) -> Report:
    values, coeffs = _prepare(f)
    n = values.size.bit_length() - 1
    if not 0 <= d <= n:
        raise ValueError(f"truncation level {d} outside [0, {n}]")
    lhs, rhs = (float(x) for x in truncation_sides(values, coeffs, d))
    rep = Report("verify trunc", {"n": n, "d": d}, tol=tol)
    rep.quantities["truncated_energy"] = lhs
    rep.quantities["bound"] = rhs
    rep.check("||f^<=d||_2^2<=sqrt3^d*||f||_2*||f||_4/3", lhs, rhs, "<=", witness=f)
    return rep
