import pytest

from hcourant.structures import builtin_model
from hcourant.suites import (
    SuiteConfig,
    all_passed,
    check_rng,
    run_suite,
    suite_tasks,
    thread_count,
)


def strip_seconds(records):
    return [{k: v for k, v in r.items() if k != "seconds"} for r in records]


def test_check_rng_depends_on_name_and_seed():
    a = [check_rng(1, "x").next() for _ in range(2)]
    assert a == [check_rng(1, "x").next() for _ in range(2)]
    assert check_rng(1, "x").next() != check_rng(1, "y").next()
    assert check_rng(1, "x").next() != check_rng(2, "x").next()


def test_thread_count_respects_cap(monkeypatch):
    monkeypatch.setenv("HC_THREADS", "1")
    assert thread_count() == 1
    monkeypatch.setenv("HC_THREADS", "junk")
    assert thread_count() >= 1


def test_tables_suite_values():
    recs = run_suite("tables")
    assert all_passed(recs)
    by = {r["name"]: r for r in recs}
    assert by["tables/bernoulli"]["values"][10] == "5/66"
    assert by["tables/gauge-coefficients"]["values"][-1] == "-1/467775"


def test_records_have_the_report_fields():
    for r in run_suite("pentagon"):
        assert {"name", "anchor", "status", "tuples", "nonzero", "seconds", "counterexample"} <= set(r)
        assert r["status"] in ("pass", "fail")


def test_appendixb_suite_subset():
    cfg = SuiteConfig(n_values=[5, 7])
    recs = run_suite("appendixb", cfg)
    assert [r["name"] for r in recs] == ["appendixb/n=05", "appendixb/n=07"]
    assert recs[0]["solution"] == {"a_21": "3/4", "a_11": "3/8"}
    assert all_passed(recs)


def test_zero_tuples_is_a_vacuous_pass():
    cfg = SuiteConfig(tuples=0, models=[builtin_model("R3")])
    recs = run_suite("structures", cfg, threads=1)
    assert recs and all_passed(recs)
    assert all(r["tuples"] == 0 for r in recs)


def test_serial_and_parallel_runs_agree():
    cfg = SuiteConfig(tuples=2, models=[builtin_model("R3")], max_arity=3)
    serial = run_suite("embedding", cfg, threads=1)
    parallel = run_suite("embedding", cfg, threads=2)
    assert strip_seconds(serial) == strip_seconds(parallel)
    assert all_passed(serial)


def test_seed_changes_samples_but_not_verdicts():
    base = dict(tuples=3, models=[builtin_model("R3")], max_arity=2)
    a = run_suite("structures", SuiteConfig(seed=1, **base), threads=1)
    b = run_suite("structures", SuiteConfig(seed=2, **base), threads=1)
    assert all_passed(a) and all_passed(b)
    assert strip_seconds(a) == strip_seconds(run_suite("structures", SuiteConfig(seed=1, **base), threads=1))


def test_identities_suite_on_small_budget():
    cfg = SuiteConfig(tuples=2, models=[builtin_model("R3")])
    recs = run_suite("identities", cfg, threads=1)
    names = {r["name"] for r in recs}
    assert {"cartan/R3/d-squared", "cartan/R3/magic-formula", "bernoulli/euler"} <= names
    assert "identities/R3/b-slot-pairing/m=3" in names
    assert all_passed(recs)


def test_unknown_suite():
    with pytest.raises(KeyError):
        suite_tasks("nope", SuiteConfig())


def test_all_passed_detects_failure():
    assert not all_passed([{"status": "pass"}, {"status": "fail"}])
    assert all_passed([])
