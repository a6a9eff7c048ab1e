import pytest

from qrelkit import SUITE_NAMES, ValidationError, run_all, run_suite
from qrelkit import serialize


def test_known_suite_names():
    assert set(SUITE_NAMES) == {
        "gns",
        "relation_algebra",
        "hom_relation",
        "functoriality",
        "pullback",
        "schur",
        "image_links",
        "adjacency_of_hom",
        "constructions",
        "fixtures",
        "transport",
    }


def test_unknown_suite_rejected():
    with pytest.raises(ValidationError):
        run_suite("bogus")


def test_zero_trials_is_an_empty_pass():
    report = run_suite("gns", seed=1, trials=0)
    assert report["passed"] and report["checks"] == {} and report["failures"] == []


def test_report_structure_and_determinism():
    r1 = run_suite("relation_algebra", seed=9, trials=4)
    r2 = run_suite("relation_algebra", seed=9, trials=4)
    assert serialize.dumps(r1) == serialize.dumps(r2)
    assert r1["kind"] == "report" and r1["suite"] == "relation_algebra"
    assert r1["trials"] == 4 and r1["passed"]
    for check in r1["checks"].values():
        assert check["worst"] <= check["bound"]
        assert check["ok"]


def test_absurd_tolerance_fails_checks():
    report = run_suite("gns", seed=5, trials=3, tol=1e-300)
    assert not report["passed"]
    assert any(not c["ok"] for c in report["checks"].values())


def test_failures_carry_reproducer_seeds(monkeypatch):
    from qrelkit import suites as suites_mod

    def boom(rng, rec, tol, i):
        raise RuntimeError("boom")

    monkeypatch.setitem(suites_mod._SUITES, "boom", (boom, 3, 1e-9))
    report = suites_mod.run_suite("boom", seed=5, trials=3)
    assert not report["passed"] and len(report["failures"]) == 3
    for f in report["failures"]:
        assert {"trial", "seed", "error"} <= set(f)


@pytest.mark.parametrize("name", SUITE_NAMES)
def test_each_suite_smoke(name):
    report = run_suite(name, seed=3, trials=2)
    assert report["passed"], report["failures"][:1]


def test_run_all_aggregates():
    report = run_all(seed=2, trials=1)
    assert report["suite"] == "all" and report["passed"]
    assert len(report["suites"]) == len(SUITE_NAMES)
