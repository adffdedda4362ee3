"""Batched inequality sweeps over many functions at once.

``inequality_rows`` maps a check name to the (name, lhs, relation, rhs)
arrays of every inequality that check asserts, for a whole batch of value
tables. ``exhaustive_sweep`` runs a check over every Boolean function of
arity 1..N in fixed-size chunks, so its report is independent of the
number of worker threads.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import entropy, noise, social
from .cube import BooleanFunction, all_tables
from .fourier import REAL_ZERO, spectrum_table, values_table
from .influence import (
    pivot_influences_table,
    poincare_sides,
    spectral_influences_table,
)
from .report import DEFAULT_TOL, Report, holds_array

CHUNK = 4096

CHECKS = ("poincare", "bonami", "norm1", "trunc", "hyper", "owz", "edge", "shannon",
          "fkn", "kkl", "influence")


def inequality_rows(check: str, values, coeffs=None, boolean: bool = True, **params):
    """Return a list of (name, lhs, relation, rhs) with batched lhs/rhs arrays."""
    values = np.asarray(values)
    if coeffs is None:
        coeffs = spectrum_table(values)
    thr = 0.0 if boolean else REAL_ZERO
    n = values.shape[-1].bit_length() - 1
    if check == "poincare":
        var, infl = poincare_sides(coeffs)
        return [("Var<=I", var, "<=", infl)]
    if check == "bonami":
        lhs, rhs, _ = noise.bonami_sides(values, coeffs, thr)
        return [("E[f^4]<=9^d*E[f^2]^2", lhs, "<=", rhs)]
    if check == "norm1":
        lhs, rhs, _ = noise.one_norm_sides(values, coeffs, thr)
        return [("||f||_2<=3^d*||f||_1", lhs, "<=", rhs)]
    if check == "trunc":
        levels = [params["d"]] if params.get("d") is not None else range(n + 1)
        rows = []
        for d in levels:
            lhs, rhs = noise.truncation_sides(values, coeffs, d)
            rows.append((f"trunc(d={d})", lhs, "<=", rhs))
        return rows
    if check == "hyper":
        grid = params.get("grid")
        if grid is None:
            p = params.get("preset") or "4,2"
            grid = [noise.PRESETS[p]] if isinstance(p, str) else [p]
        rows = []
        noisy, norms = {}, {}  # shared across cells with equal rho or p
        for cell in grid:
            if not cell.admissible:
                continue
            if cell.rho not in noisy:
                noisy[cell.rho] = values_table(noise.noise_table(coeffs, cell.rho))
            if cell.p not in norms:
                norms[cell.p] = noise.lp_norm_table(values, cell.p)
            lhs = noise.lp_norm_table(noisy[cell.rho], cell.q)
            rows.append((f"hyper(rho={cell.rho:.6g},p={cell.p:.6g},q={cell.q:.6g})",
                         lhs, "<=", norms[cell.p]))
        return rows
    if check == "owz":
        lhs, rhs = entropy.owz_sides(coeffs)
        return [("level_entropy<=3I", lhs, "<=", rhs)]
    if check == "edge":
        bound, infl = entropy.edge_isoperimetric_sides(coeffs)
        return [("I>=2p*log2(1/p)", infl, ">=", bound)]
    if check == "shannon":
        H, bound = entropy.shannon_sides(coeffs)
        return [("H<=log2(3)*E|C(S)|", H, "<=", bound)]
    if check == "fkn":
        dist, bound, _, _ = social.fkn_sides(coeffs)
        return [("||f-a_i x_i||^2<=C(1-W1)", dist, "<=", bound)]
    if check == "kkl":
        lhs, rhs = social.kkl_sides(coeffs)
        live = ~np.isnan(rhs)
        # constants are outside the theorem; compare them as 0 >= 0
        return [("max I_i>=c1*exp(-c2*I/Var)", np.where(live, lhs, 0.0), ">=",
                 np.where(live, rhs, 0.0))]
    if check == "influence":
        piv = pivot_influences_table(values)
        spec = spectral_influences_table(coeffs)
        return [("pivot=spectral", piv, "==", spec)]
    raise ValueError(f"unknown check {check!r}; choose from {', '.join(CHECKS)}")


def _violations(rows, tol):
    """Per-row-name (violations, worst slack, first failing row index)."""
    out = []
    for name, lhs, rel, rhs in rows:
        ok = holds_array(lhs, rhs, rel, tol)
        # flatten any per-coordinate axis into the function axis
        ok_f = ok.reshape(ok.shape[0], -1).all(axis=1) if ok.ndim > 1 else ok
        lhs_a, rhs_a = np.broadcast_arrays(np.asarray(lhs, float), np.asarray(rhs, float))
        if rel == "<=":
            slack = rhs_a - lhs_a
        elif rel == ">=":
            slack = lhs_a - rhs_a
        else:
            slack = -np.abs(lhs_a - rhs_a)
        bad = np.flatnonzero(~ok_f)
        out.append((name, int(bad.size), float(slack.min()) if slack.size else 0.0,
                    int(bad[0]) if bad.size else -1))
    return out


def exhaustive_sweep(check: str, max_n: int, threads: int = 1, tol: float = DEFAULT_TOL,
                     min_n: int = 1, **params) -> Report:
    """Run ``check`` on every Boolean function with min_n <= n <= max_n."""
    if max_n > 4:
        raise ValueError("exhaustive sweeps are limited to n <= 4")
    rep = Report(f"verify {check} --all-n {max_n}", {"check": check, "min_n": min_n,
                                                     "max_n": max_n}, tol=tol)
    for n in range(min_n, max_n + 1):
        total = 1 << (1 << n)
        chunks = range((total + CHUNK - 1) // CHUNK)

        def work(k, n=n, total=total):
            lo = k * CHUNK
            tables = all_tables(n, lo, min(total, lo + CHUNK))
            return lo, _violations(inequality_rows(check, tables, **params), tol)

        if threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                parts = list(pool.map(work, chunks))
        else:
            parts = [work(k) for k in chunks]

        merged: dict[str, list] = {}
        for lo, rows in parts:
            for name, count, slack, first in rows:
                m = merged.setdefault(name, [0, np.inf, -1])
                m[0] += count
                m[1] = min(m[1], slack)
                if first >= 0 and m[2] < 0:
                    m[2] = lo + first
        rep.quantities[f"n={n}:functions"] = total
        for name, (count, slack, first) in merged.items():
            rep.quantities[f"n={n}:{name}:min_slack"] = slack
            witness = BooleanFunction.from_index(n, first) if first >= 0 else None
            rep.check(f"n={n}:{name}:violations", count, 0, "==", witness=witness, tol=0.0)
    return rep
