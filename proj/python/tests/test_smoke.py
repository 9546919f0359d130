import pytest

import ledgerlens as ll


@pytest.fixture(scope="module")
def ledger():
    return ll.synth(seed=3, days=12, txs_per_day=80, regime="preferential")


def test_ledger_roundtrip(ledger, tmp_path):
    assert ledger.days == 12
    again = ll.Ledger.from_jsonl(ledger.to_jsonl())
    assert again.to_jsonl() == ledger.to_jsonl()
    ledger.save(tmp_path / "store")
    assert ll.Ledger.load(tmp_path / "store").to_jsonl() == ledger.to_jsonl()


def test_series_lengths(ledger):
    assert len(ll.proportions(ledger, 50)) == 12
    assert len(ll.d_static_series(ledger, 50)) == 12
    assert len(ll.hhi_series(ledger, "a3")) == 12
    assert len(ll.dispersion_series(ledger, 20)) == 11
    s = ll.stability(ledger, 20, 1, "retention")
    assert all(0 <= v <= 1 for v in s.values() if v is not None)


def test_top_n_is_descending(ledger):
    top = ll.top_n(ledger, 11, 10)
    balances = [b for _, b in top]
    assert balances == sorted(balances, reverse=True)


def test_metric_reference_values():
    assert ll.spearman([50, 40, 30, 20, 10], [40, 50, 20, 30, 10]) == pytest.approx(0.8, abs=1e-15)
    assert ll.spearman([1, 0, 0], [0, 1, 0]) is None
    assert ll.retention([5, 4, 3, 0, 0], [5, 0, 3, 9, 0], 3) == pytest.approx(2 / 3)
    assert ll.d_static([7] * 10) == 1.0
    assert ll.d_static([3, 1]) == 0.75
    assert ll.dispersion([1] + [0] * 99) == 100
    assert ll.hhi([5, 5]) == 5000
    assert ll.classify(1000) == "competitive"
    assert ll.d_hhi([2000, 3000, 4000]) == [1, 0.5, 0]
    pr = ll.pagerank([(1, 2), (2, 3), (3, 1)])
    assert all(v == pytest.approx(1 / 3, abs=1e-12) for v in pr.values())


def test_errors():
    with pytest.raises(ll.DataError):
        ll.Ledger.from_jsonl("{broken\n")
    with pytest.raises(ValueError):
        ll.synth(regime="pareto")


def test_cli_entry(tmp_path):
    code, out, err = ll.run(["synth", "--days", "3", "-o", str(tmp_path / "l.jsonl")])
    assert code == 0
    code, out, err = ll.run(["hhi", "--in", str(tmp_path / "l.jsonl")])
    assert code == 0
    assert out.startswith("# ledgerlens")
    assert ll.run(["nope"])[0] == 1
