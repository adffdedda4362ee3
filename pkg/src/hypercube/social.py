"""Dictator closeness (FKN), the KKL influence bound and greedy coalitions."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .cube import BooleanFunction, is_monotone, popcounts, restrict
from .fourier import spectrum_of, spectrum_table
from .influence import (
    influences_pivot,
    require_monotone,
    spectral_influences_table,
    total_influence_table,
)
from .report import DEFAULT_TOL, Report

FKN_C = 2 + 3 ** 6  # 731
KKL_C1 = (2 * math.e) ** -4
KKL_C2 = 12.0
KKL_C = 0.05
DEFAULT_TARGET = 0.99


def affine_classify(f: BooleanFunction) -> tuple[str, int | None]:
    """('constant', None), ('dictator', i), ('anti-dictator', i) or ('not-affine', None)."""
    c = spectrum_of(f).coeffs
    pc = popcounts(f.n)
    if np.any(c[pc >= 2] != 0):
        return "not-affine", None
    singles = [j for j in range(f.n) if c[1 << j] != 0]
    if not singles:
        return "constant", None
    if len(singles) != 1 or c[0] != 0:
        # unreachable for Boolean input
        raise AssertionError("Boolean affine function with more than one linear term")
    j = singles[0]
    return ("dictator" if c[1 << j] > 0 else "anti-dictator"), j + 1


# ---------------------------------------------------------------------------
# FKN

@dataclass(frozen=True)
class FknResult:
    W1: float
    best_i: int
    distance: float
    bound: float
    observed_constant: float | None
    report: Report = field(repr=False, compare=False)


def fkn_sides(coeffs):
    """(distance to the best a_i x_i, 731 (1 - W^1), W^1, best i as 0-based int).

    distance = ||f - a_i x_i||_2^2 = E[f^2] - a_i^2 by Parseval.
    """
    coeffs = np.asarray(coeffs, dtype=np.float64)
    n = coeffs.shape[-1].bit_length() - 1
    singles = coeffs[..., [1 << j for j in range(n)]]
    sq = singles * singles
    W1 = sq.sum(axis=-1)
    best = np.argmax(np.abs(singles), axis=-1)  # first maximum: lowest coordinate
    a = np.take_along_axis(singles, best[..., None], axis=-1)[..., 0]
    energy = (coeffs * coeffs).sum(axis=-1)
    return energy - a * a, FKN_C * (1.0 - W1), W1, best


def fkn_check(f: BooleanFunction, tol: float = DEFAULT_TOL) -> FknResult:
    s = spectrum_of(f)
    dist, bound, W1, best = (x.item() for x in fkn_sides(s.coeffs))
    i = int(best) + 1
    # direct pointwise distance as a cross-check of the Parseval shortcut
    xi = 1.0 - 2.0 * ((np.arange(f.size) >> (i - 1)) & 1)
    direct = float(np.mean((f.values - s.coeffs[1 << (i - 1)] * xi) ** 2))
    observed = dist / (1.0 - W1) if W1 < 1.0 else None
    rep = Report("fkn", {"n": f.n}, tol=tol)
    rep.quantities.update({"W1": W1, "best_i": i, "a_i": s[1 << (i - 1)],
                           "distance": dist, "bound": bound, "C": FKN_C,
                           "observed_constant": observed})
    rep.check("distance=pointwise", dist, direct, "==", witness=f)
    rep.check("||f-a_i x_i||^2<=C(1-W1)", dist, bound, "<=", witness=f)
    return FknResult(W1, i, dist, bound, observed, rep)


# ---------------------------------------------------------------------------
# KKL

def kkl_sides(coeffs):
    """(max_i I_i, c1 exp(-c2 I / Var)); rows with Var = 0 give rhs = nan."""
    coeffs = np.asarray(coeffs, dtype=np.float64)
    per = spectral_influences_table(coeffs)
    total = total_influence_table(coeffs)
    var = (coeffs[..., 1:] ** 2).sum(axis=-1)
    with np.errstate(divide="ignore", invalid="ignore"):
        rhs = np.where(var > 0, KKL_C1 * np.exp(-KKL_C2 * total / np.where(var > 0, var, 1.0)),
                       np.nan)
    return per.max(axis=-1), rhs


def _require_nonconstant(f: BooleanFunction, what: str):
    c = spectrum_of(f).coeffs
    if f.n == 0 or not np.any(c[1:] != 0):
        raise ValueError(f"{what} is undefined for constant functions")


def kkl_intermediate_check(f: BooleanFunction, tol: float = DEFAULT_TOL) -> Report:
    """max_i I_i(f) >= (2e)^-4 exp(-12 I(f) / Var(f)), natural exponential."""
    _require_nonconstant(f, "the KKL bound")
    s = spectrum_of(f)
    lhs, rhs = (float(x) for x in kkl_sides(s.coeffs))
    rep = Report("kkl", {"n": f.n}, tol=tol)
    rep.config["log_base"] = "e"
    infl = influences_pivot(f)
    rep.quantities.update({
        "influences": infl,
        "max_influence": lhs,
        "total_influence": float(infl.sum()),
        "variance": float(np.dot(s.coeffs[1:], s.coeffs[1:])),
        "c1": KKL_C1, "c2": KKL_C2, "bound": rhs,
    })
    if f.n >= 2:
        rep.quantities["kkl_ratio"] = kkl_ratio(f)
    rep.check("max I_i>=c1*exp(-c2*I/Var)", lhs, rhs, ">=", witness=f)
    return rep


def kkl_ratio(f: BooleanFunction) -> float:
    """max_i I_i(f) * n / (ln n * Var f): the empirical KKL constant."""
    _require_nonconstant(f, "the KKL ratio")
    if f.n < 2:
        raise ValueError("the KKL ratio needs n >= 2")
    c = spectrum_of(f).coeffs
    var = float(np.dot(c[1:], c[1:]))
    return float(influences_pivot(f).max()) * f.n / (math.log(f.n) * var)


# ---------------------------------------------------------------------------
# Ben-Or-Linial greedy coalition

@dataclass(frozen=True)
class CoalitionStep:
    coordinate: int  # original numbering
    max_influence: float
    expectation: float


@dataclass
class CoalitionTrace:
    direction: int
    target: float
    initial_expectation: float
    steps: list[CoalitionStep]
    coalition: list[int]
    final_expectation: float
    n: int

    @property
    def size_bound(self) -> int:
        """ceil(1.98 n / (c c0 ln n)) with c = 0.05 and c0 = 1 - target^2."""
        if self.n < 2:
            return self.n
        c0 = 1.0 - self.target ** 2
        return math.ceil(1.98 * self.n / (KKL_C * c0 * math.log(self.n)))

    def to_report(self) -> Report:
        rep = Report("coalition", {"n": self.n, "target": self.target,
                                   "direction": self.direction}, tol=0.0)
        rep.quantities["initial_expectation"] = self.initial_expectation
        rep.quantities["steps"] = [
            {"coordinate": s.coordinate, "max_influence": s.max_influence,
             "expectation": s.expectation} for s in self.steps
        ]
        rep.quantities["coalition"] = list(self.coalition)
        rep.quantities["coalition_size"] = len(self.coalition)
        rep.quantities["size_bound_formula"] = self.size_bound
        rep.quantities["final_expectation"] = self.final_expectation
        prev = self.initial_expectation
        for k, s in enumerate(self.steps):
            rep.check(f"step{k + 1}:E[f_k+1]=E[f_k]+max I_i",
                      self.direction * s.expectation,
                      self.direction * prev + s.max_influence, "==")
            prev = s.expectation
        rep.check("target_reached", self.direction * self.final_expectation, self.target, ">=")
        return rep


def _mirror(f: BooleanFunction) -> BooleanFunction:
    """g(x) = -f(-x); monotone iff f is."""
    return BooleanFunction.from_bits(1 - f.bits[::-1])


def greedy_coalition(f: BooleanFunction, target: float = DEFAULT_TARGET,
                     direction: int = 1) -> CoalitionTrace:
    """Repeatedly fix the most influential remaining voter to ``direction``.

    Ties go to the lowest original coordinate. Each step checks
    E[f_{k+1}] = E[f_k] + max_i I_i(f_k) exactly and that the restriction
    is still monotone.
    """
    if direction not in (1, -1):
        raise ValueError("direction must be +1 or -1")
    if not 0 < target < 1:
        raise ValueError("target must lie in (0, 1)")
    require_monotone(f)
    g = f if direction == 1 else _mirror(f)
    start = float(spectrum_of(g).coeffs[0])
    if start < -target:
        raise ValueError(
            f"E[f] = {direction * start} is beyond the reachable range for direction "
            f"{direction:+d} (need {'>=' if direction == 1 else '<='} {-direction * target})")

    remaining = list(range(1, f.n + 1))
    steps: list[CoalitionStep] = []
    expect = start
    while expect < target:
        if g.n == 0:
            raise AssertionError("restrictions exhausted below target")
        infl = influences_pivot(g)
        pos = int(np.argmax(infl))
        best = float(infl[pos])
        g = restrict(g, pos + 1, 1)
        new = float(spectrum_table(g.values)[0])
        if new != expect + best:
            raise AssertionError(f"expectation update {expect} + {best} != {new}")
        if not is_monotone(g):
            raise AssertionError("restriction lost monotonicity")
        steps.append(CoalitionStep(remaining.pop(pos), best, direction * new))
        expect = new
    return CoalitionTrace(direction, target, direction * start, steps,
                          [s.coordinate for s in steps], direction * expect, f.n)
