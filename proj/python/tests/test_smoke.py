from fractions import Fraction

import pytest

import bstretch


def test_constants():
    c = bstretch.constants("1/31")
    assert Fraction(c["online_capacity"]) == Fraction(556, 31)
    assert Fraction(c["online_capacity"]) / 12 == Fraction(139, 93)
    assert bstretch.m_threshold("1/31") == 58380


def test_all_twelve():
    r = bstretch.run(3300, "1/62", pattern="AllTwelve")
    assert r["outcome"] == "AllPacked"
    assert bstretch.exact(r["max_load"]) == 12
    assert r["audit"]["violations"] == 0


def test_mixed_run_within_bound():
    r = bstretch.run(3300, "1/62", seed=7, profile="mixed", audit="sampled")
    assert r["outcome"] == "AllPacked"
    assert bstretch.exact(r["factor"]) <= Fraction(557, 372)


def test_warning_below_threshold():
    r = bstretch.run(100, "1/31")
    assert "experimental: below m >= 58380 threshold" in r["warnings"]


def test_instance_round_trip():
    text = bstretch.generate(200, "1/62", seed=3, profile="quarter-mix", order="interleave")
    assert text == bstretch.generate(200, "1/62", seed=3, profile="quarter-mix", order="interleave")
    ok, _ = bstretch.audit_certificate(text)
    assert ok
    r = bstretch.run_instance(text)
    assert r["items"] == len(text.splitlines()) - 1


def test_replay_is_identical():
    report, text = bstretch.trace(400, "1/62", seed=4, profile="mixed")
    assert bstretch.replay(text) == report


def test_lps():
    lps = bstretch.verify_lps()
    assert len(lps) == 5
    assert all(not lp["feasible"] and lp["certificate_ok"] for lp in lps)
    assert all(row[-1] for row in bstretch.coefficient_provenance())


def test_oracle():
    assert bstretch.oracle(["7", "6"], 2, "top") == (0, 1)
    assert bstretch.oracle([], 3, "top")[0] == 3
    with pytest.raises(ValueError):
        bstretch.oracle(["1"], 2, "huge")


def test_bad_config():
    with pytest.raises(ValueError):
        bstretch.run(10, "1/5")
