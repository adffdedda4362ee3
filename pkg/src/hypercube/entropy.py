"""Fourier entropy, min-entropy, level entropy and the EFI/MEFI quantities.

All logarithms in this module are base 2 and 0 log 0 = 0.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from .cube import BooleanFunction, all_tables, arity_of_length, popcounts
from .fourier import level_weights_table, spectrum_of, spectrum_table
from .influence import total_influence_table
from .report import DEFAULT_TOL, Report

LOG_BASE = 2
LOG2_3 = math.log2(3.0)
NORM_TOL = 1e-9
SURVEY_CHUNK = 4096
EXHAUSTIVE_MAX_N = 4


class NormError(ValueError):
    """Entropy of a function whose 2-norm is not 1."""


def xlog_inv(p: np.ndarray) -> np.ndarray:
    """p * log2(1/p) elementwise, with 0 at p = 0."""
    p = np.asarray(p, dtype=np.float64)
    out = np.zeros_like(p)
    pos = p > 0
    out[pos] = -p[pos] * np.log2(p[pos])
    return out


def entropy_table(coeffs: np.ndarray) -> np.ndarray:
    """Batched H(f) = sum_S f^(S)^2 log2(1 / f^(S)^2)."""
    coeffs = np.asarray(coeffs, dtype=np.float64)
    return xlog_inv(coeffs * coeffs).sum(axis=-1)


def min_entropy_table(coeffs: np.ndarray) -> np.ndarray:
    coeffs = np.asarray(coeffs, dtype=np.float64)
    return np.log2(1.0 / (coeffs * coeffs).max(axis=-1))


def level_entropy_table(coeffs: np.ndarray) -> np.ndarray:
    """Batched sum_k W^k log2(1 / W^k)."""
    return xlog_inv(level_weights_table(coeffs)).sum(axis=-1)


def _unit_spectrum(s):
    s = spectrum_of(s)
    energy = float(np.dot(s.coeffs, s.coeffs))
    if abs(energy - 1.0) > NORM_TOL:
        raise NormError(f"Fourier entropy needs ||f||_2 = 1, got ||f||_2^2 = {energy!r}")
    return s


def fourier_entropy(s) -> float:
    return float(entropy_table(_unit_spectrum(s).coeffs))


def min_entropy(s) -> float:
    """-log2 of the largest squared coefficient."""
    return float(min_entropy_table(_unit_spectrum(s).coeffs))


def level_entropy(s) -> float:
    return float(level_entropy_table(spectrum_of(s).coeffs))


@dataclass(frozen=True)
class EntropyReport:
    H: float
    H_inf: float
    I: float
    efi_ratio: float
    mefi_ratio: float
    level_entropy: float


def _ratios(H, Hinf, I):
    H, Hinf, I = (np.asarray(x, dtype=np.float64) for x in (H, Hinf, I))
    live = I > 0
    safe = np.where(live, I, 1.0)
    return np.where(live, H / safe, 0.0), np.where(live, Hinf / safe, 0.0)


def efi_ratios(f) -> EntropyReport:
    """H/I and H_inf/I; constants report all zeros."""
    s = _unit_spectrum(f)
    H = float(entropy_table(s.coeffs))
    Hinf = float(min_entropy_table(s.coeffs))
    I = float(total_influence_table(s.coeffs))
    if I == 0.0:
        H = Hinf = 0.0
    efi, mefi = (float(x) for x in _ratios(H, Hinf, I))
    return EntropyReport(H, Hinf, I, efi, mefi, float(level_entropy_table(s.coeffs)))


def entropy_report(f, tol: float = DEFAULT_TOL) -> Report:
    """Everything the ``entropy`` command prints, plus the three entropy bounds."""
    s = _unit_spectrum(f)
    er = efi_ratios(s)
    rep = Report("entropy", {"n": s.n}, tol=tol)
    rep.quantities.update(asdict(er))
    rep.config["log_base"] = LOG_BASE
    rep.check("H>=H_inf", er.H, er.H_inf, ">=", witness=f)
    rep.check("level_entropy<=H", er.level_entropy, er.H, "<=", witness=f)
    _shannon_rows(rep, s, f)
    if isinstance(f, BooleanFunction):
        rep.check("H<=n", er.H, s.n, "<=", witness=f)
        rep.check("I<=n", er.I, s.n, "<=", witness=f)
        rep.check("level_entropy<=3I", er.level_entropy, 3 * er.I, "<=", witness=f)
        lhs, rhs = edge_isoperimetric_sides(s.coeffs)
        rep.check("I>=2p*log2(1/p)", float(rhs), float(lhs), ">=", witness=f)
    return rep


# ---------------------------------------------------------------------------
# level and isoperimetric bounds

def owz_sides(coeffs):
    """(sum_k W^k log2(1/W^k), 3 I(f))."""
    return level_entropy_table(coeffs), 3.0 * total_influence_table(coeffs)


def owz_level_bound_check(f: BooleanFunction, tol: float = DEFAULT_TOL) -> Report:
    s = spectrum_of(f)
    lhs, rhs = (float(x) for x in owz_sides(s.coeffs))
    rep = Report("owz-level-bound", {"n": s.n}, tol=tol)
    rep.config["log_base"] = LOG_BASE
    rep.quantities["level_weights"] = level_weights_table(s.coeffs)
    rep.quantities["level_entropy"] = lhs
    rep.quantities["total_influence"] = rhs / 3
    rep.check("level_entropy<=3I", lhs, rhs, "<=", witness=f)
    return rep


def edge_isoperimetric_sides(coeffs):
    """(2p log2(1/p), I(f)) with p = Prob{f = 1} = (1 + E f) / 2."""
    coeffs = np.asarray(coeffs, dtype=np.float64)
    p = (1.0 + coeffs[..., 0]) / 2.0
    return 2.0 * xlog_inv(p), total_influence_table(coeffs)


def edge_isoperimetric_check(f: BooleanFunction, tol: float = DEFAULT_TOL) -> Report:
    s = spectrum_of(f)
    bound, infl = (float(x) for x in edge_isoperimetric_sides(s.coeffs))
    rep = Report("edge-isoperimetric", {"n": s.n}, tol=tol)
    rep.config["log_base"] = LOG_BASE
    rep.quantities["p"] = (1.0 + s.coeffs[0]) / 2.0
    rep.quantities["bound"] = bound
    rep.quantities["total_influence"] = infl
    rep.check("I>=2p*log2(1/p)", infl, bound, ">=", witness=f)
    return rep


# ---------------------------------------------------------------------------
# prefix-free code over {0, 1, !}

def index_width(n: int) -> int:
    """Bits per coordinate label: ceil(log2 n), at least 1."""
    return max(1, math.ceil(math.log2(n))) if n > 1 else 1


def shannon_code(mask: int, n: int) -> str:
    """Codeword of the subset ``mask``: fixed-width binary of i-1 for each i in S
    in increasing order, terminated by '!'."""
    width = index_width(n)
    parts = [format(j, f"0{width}b") for j in range(n) if (mask >> j) & 1]
    return "".join(parts) + "!"


def code_lengths(n: int) -> np.ndarray:
    return index_width(n) * popcounts(n) + 1


def shannon_sides(coeffs):
    """(H(f), log2(3) * E[|C(S)|]) under S ~ f^(S)^2."""
    coeffs = np.asarray(coeffs, dtype=np.float64)
    n = arity_of_length(coeffs.shape[-1])
    expected = (coeffs * coeffs) @ code_lengths(n).astype(np.float64)
    return entropy_table(coeffs), LOG2_3 * expected


def _shannon_rows(rep: Report, s, witness) -> None:
    H, bound = (float(x) for x in shannon_sides(s.coeffs))
    I = float(total_influence_table(s.coeffs))
    rep.quantities["code_index_width"] = index_width(s.n)
    rep.quantities["expected_code_length"] = bound / LOG2_3
    rep.check("H<=log2(3)*E|C(S)|", H, bound, "<=", witness=witness)
    rep.check("H<=log2(3)*(w*I+1)", H, LOG2_3 * (index_width(s.n) * I + 1), "<=",
              witness=witness)


def shannon_code_bound_check(f, tol: float = DEFAULT_TOL) -> Report:
    """H(f) <= log2(3) (ceil(log2 n) I(f) + 1) for any f with ||f||_2 = 1.

    For Boolean f also checks the level-decomposition form
    H <= sum_k W^k log2(1/W^k) + sum_k W^k log2 C(n, k) <= 3 I + sum_k W^k log2 C(n, k).
    """
    s = _unit_spectrum(f)
    rep = Report("shannon-code-bound", {"n": s.n}, tol=tol)
    rep.config["log_base"] = LOG_BASE
    rep.quantities["H"] = float(entropy_table(s.coeffs))
    rep.quantities["total_influence"] = float(total_influence_table(s.coeffs))
    _shannon_rows(rep, s, f)
    if isinstance(f, BooleanFunction):
        H, jensen, owz = (float(x) for x in logn_sides(s.coeffs))
        rep.quantities["level_bound"] = jensen
        rep.check("H<=level_entropy+sum_k W^k log2 C(n,k)", H, jensen, "<=", witness=f)
        rep.check("H<=3I+sum_k W^k log2 C(n,k)", H, owz, "<=", witness=f)
    return rep


def logn_sides(coeffs):
    """(H, level entropy + sum W^k log2 C(n,k), 3I + sum W^k log2 C(n,k))."""
    coeffs = np.asarray(coeffs, dtype=np.float64)
    n = arity_of_length(coeffs.shape[-1])
    W = level_weights_table(coeffs)
    log_binom = np.array([math.log2(math.comb(n, k)) for k in range(n + 1)])
    spread = W @ log_binom
    return (entropy_table(coeffs), xlog_inv(W).sum(axis=-1) + spread,
            3.0 * total_influence_table(coeffs) + spread)


# ---------------------------------------------------------------------------
# survey

@dataclass(frozen=True)
class SurveyEntry:
    rank: int
    board: str
    index: int
    ratio: float
    H: float
    H_inf: float
    I: float
    table: str
    name: str | None = None

    def to_json(self) -> str:
        d = {"rank": self.rank, "board": self.board, "index": self.index,
             "ratio": self.ratio, "H": self.H, "H_inf": self.H_inf, "I": self.I,
             "table": self.table}
        if self.name is not None:
            d["name"] = self.name
        return json.dumps(d)

    def function(self) -> BooleanFunction:
        return BooleanFunction.from_bits(np.frombuffer(self.table.encode(), np.uint8) - 48)


@dataclass
class Leaderboard:
    n: int
    mode: str
    count: int
    efi: list[SurveyEntry]
    mefi: list[SurveyEntry]
    max_efi: float
    max_mefi: float

    def to_jsonl(self) -> str:
        return "".join(e.to_json() + "\n" for e in self.efi + self.mefi)


def _score(tables: np.ndarray):
    coeffs = spectrum_table(tables)
    H = entropy_table(coeffs)
    Hinf = min_entropy_table(coeffs)
    I = total_influence_table(coeffs)
    efi, mefi = _ratios(H, Hinf, I)
    return H, Hinf, I, efi, mefi


def _chunk_top(tables, index, top_k):
    H, Hinf, I, efi, mefi = _score(tables)
    live = I > 0
    out = {}
    for board, ratio in (("efi", efi), ("mefi", mefi)):
        r, idx = ratio[live], index[live]
        order = np.lexsort((idx, -r))[:top_k]
        rows = np.flatnonzero(live)[order]
        out[board] = [(float(ratio[k]), int(index[k]), float(H[k]), float(Hinf[k]),
                       float(I[k]), tables[k]) for k in rows]
    return out


def efi_survey(n: int, mode: str = "exhaustive", count: int = 1000, seed: int = 0,
               top_k: int = 10, threads: int = 1, allow_large: bool = False) -> Leaderboard:
    """Rank Boolean functions of arity n by H/I and H_inf/I.

    Work is split into fixed chunks of SURVEY_CHUNK functions, so the result
    does not depend on ``threads``. Ties are broken by function index.
    """
    names: dict[int, str] = {}
    if mode == "exhaustive":
        if n > EXHAUSTIVE_MAX_N and not allow_large:
            raise ValueError(f"exhaustive survey is limited to n <= {EXHAUSTIVE_MAX_N}")
        total = 1 << (1 << n)

        def load(k):
            lo, hi = k * SURVEY_CHUNK, min(total, (k + 1) * SURVEY_CHUNK)
            return all_tables(n, lo, hi), np.arange(lo, hi)
    elif mode == "random":
        total = int(count)

        def load(k):
            lo, hi = k * SURVEY_CHUNK, min(total, (k + 1) * SURVEY_CHUNK)
            rng = np.random.default_rng([seed, k])
            bits = rng.integers(0, 2, size=(hi - lo, 1 << n), dtype=np.int64)
            return 1 - 2 * bits, np.arange(lo, hi)
    elif mode == "family":
        from .zoo import catalog

        fam = [(name, f) for name, f in catalog(n, n)]
        names = {k: name for k, (name, _) in enumerate(fam)}
        total = len(fam)
        fam_tables = np.array([f.values for _, f in fam]).reshape(total, 1 << n)

        def load(k):
            lo, hi = k * SURVEY_CHUNK, min(total, (k + 1) * SURVEY_CHUNK)
            return fam_tables[lo:hi], np.arange(lo, hi)
    else:
        raise ValueError(f"unknown survey mode {mode!r}")

    chunks = range((total + SURVEY_CHUNK - 1) // SURVEY_CHUNK)

    def work(k):
        tables, index = load(k)
        return _chunk_top(tables, index, top_k)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(work, chunks))
    else:
        parts = [work(k) for k in chunks]

    boards = {}
    best = {}
    for board in ("efi", "mefi"):
        rows = [row for part in parts for row in part[board]]
        rows.sort(key=lambda r: (-r[0], r[1]))
        best[board] = rows[0][0] if rows else 0.0
        boards[board] = [
            SurveyEntry(rank + 1, board, idx, ratio, H, Hinf, I,
                        "".join("1" if v == -1 else "0" for v in table), names.get(idx))
            for rank, (ratio, idx, H, Hinf, I, table) in enumerate(rows[:top_k])
        ]
    return Leaderboard(n, mode, total, boards["efi"], boards["mefi"], best["efi"], best["mefi"])
