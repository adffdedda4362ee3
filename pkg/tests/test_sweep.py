import numpy as np
import pytest

from hypercube.cube import all_tables
from hypercube.noise import NoiseParams
from hypercube import sweep
from hypercube.sweep import CHECKS, exhaustive_sweep, inequality_rows


@pytest.mark.parametrize("check", CHECKS)
def test_exhaustive_up_to_3(check):
    rep = exhaustive_sweep(check, 3)
    assert rep.passed, rep.failures()
    assert rep.quantities["n=3:functions"] == 256


def test_trunc_rows_cover_every_level():
    rows = inequality_rows("trunc", all_tables(3))
    assert [r[0] for r in rows] == [f"trunc(d={d})" for d in range(4)]
    assert [r[0] for r in inequality_rows("trunc", all_tables(3), d=2)] == ["trunc(d=2)"]


def test_hyper_grid_skips_inadmissible():
    grid = [NoiseParams(0.5, 2, 4), NoiseParams(0.9, 2, 4)]
    rows = inequality_rows("hyper", all_tables(2), grid=grid)
    assert len(rows) == 1


def test_unknown_check():
    with pytest.raises(ValueError, match="unknown check"):
        inequality_rows("nope", all_tables(1))
    with pytest.raises(ValueError):
        exhaustive_sweep("bonami", 5)


def test_witness_on_failure(monkeypatch):
    # a false relation (E f <= -1/2) shows the witness path end to end
    def rows(check, values, **params):
        return [("mean<=-1/2", values.mean(axis=-1), "<=", np.full(len(values), -0.5))]

    monkeypatch.setattr(sweep, "inequality_rows", rows)
    rep = exhaustive_sweep("fake", 2)
    assert not rep.passed
    bad = rep.failures()[0]
    assert bad.name == "n=1:mean<=-1/2:violations"
    assert bad.lhs == 3  # only the constant -1 has mean <= -1/2 at n = 1
    assert bad.witness == "n 1\n00\n"
    assert rep.quantities["n=2:mean<=-1/2:min_slack"] == -1.5


def test_threads_do_not_change_report():
    a = exhaustive_sweep("bonami", 4, threads=1).to_json()
    b = exhaustive_sweep("bonami", 4, threads=4).to_json()
    assert a == b
