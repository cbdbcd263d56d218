import json
import os

import pytest

from pencilcount import (
    InputError,
    InvariantRecord,
    ResultCache,
    congruence_check,
    conjecture_report,
    cp3_congruence_check,
    gw_cp3,
    gw_quadric,
    sign_pattern_report,
    w_quadric,
    w_rp3,
)
from pencilcount import invariants


@pytest.fixture()
def cache():
    return ResultCache()


def test_gw_quadric_values(cache):
    assert gw_quadric(0, 1, cache=cache) == 1
    assert gw_quadric(0, 4, cache=cache) == 0
    assert gw_quadric(2, 2, cache=cache) == 12
    assert gw_quadric(2, 3, cache=cache) == 96
    assert gw_quadric(3, 2, cache=cache) == 96  # ruling swap
    for b in range(1, 7):
        assert gw_quadric(1, b, cache=cache) == 1
    assert gw_quadric(2, 3, engine="explicit", cache=ResultCache()) == 96


def test_w_quadric_values(cache):
    for l in range(5):
        assert w_quadric(1, 4, l, cache=cache) == 1
    assert [w_quadric(2, 3, l, cache=cache) for l in range(5)] == [48, 32, 20, 12, 8]
    assert w_quadric(2, 2, 0, cache=cache) == 8
    assert w_quadric(2, 3, 1, engine="explicit", cache=ResultCache()) == 32
    with pytest.raises(InputError):
        w_quadric(2, 3, 5, cache=cache)
    with pytest.raises(InputError):
        w_quadric(2, 3, -1, cache=cache)


def test_w_rp3_published_values(cache):
    assert w_rp3(1, 0, cache=cache) == 1
    assert w_rp3(3, 2, cache=cache) == -1
    assert w_rp3(5, 0, cache=cache) == 45
    assert w_rp3(5, 4, cache=cache) == 5
    assert w_rp3(7, 3, cache=cache) == -1269
    assert w_rp3(9, 8, cache=cache) == 1993


def test_w_rp3_even_degree(cache):
    for d in (2, 4):
        for l in range(d):
            assert w_rp3(d, l, cache=cache) == 0
        assert w_rp3(d, 0, force_compute=True, cache=cache) == 0


def test_w_rp3_validation(cache):
    with pytest.raises(InputError):
        w_rp3(0, 0, cache=cache)
    with pytest.raises(InputError) as err:
        w_rp3(5, 5, cache=cache)
    assert "fixture" in str(err.value)
    with pytest.raises(InputError):
        w_rp3(5, 6, cache=cache)
    with pytest.raises(InputError):
        w_rp3(5, -1, cache=cache)


def test_gw_cp3_classical_counts(cache):
    assert [gw_cp3(d, cache=cache) for d in range(1, 6)] == [1, 0, 1, 4, 105]


def test_congruence_checks(cache):
    rec = congruence_check(2, 3, 1, cache=cache)
    assert rec.ok and rec.gw == 96 and rec.w == 32
    rec = congruence_check(1, 2, 0, cache=cache)
    assert rec.ok and rec.gw == 1 and rec.w == 1
    rec = congruence_check(2, 2, 0, cache=cache)
    assert rec.ok and rec.gw == 12 and rec.w == 8


def test_cp3_congruence_checks(cache):
    rec = cp3_congruence_check(5, 0, cache=cache)
    assert rec.ok and rec.gw == 105 and rec.w == 45 and rec.sign == 1
    rec = cp3_congruence_check(1, 0, cache=cache)
    assert rec.ok
    rec = cp3_congruence_check(3, 1, cache=cache)
    assert rec.ok and rec.sign == -1 and rec.w == -1


def test_sign_pattern_report(cache):
    rep = sign_pattern_report(5, cache=cache)
    assert rep.values == (45, 29, 17, 9, 5)
    assert all(s == 1 for s in rep.signs)
    assert rep.alternation_start is None
    rep1 = sign_pattern_report(1, cache=cache)
    assert rep1.signs == (1,)
    with pytest.raises(InputError):
        sign_pattern_report(4, cache=cache)


def test_conjecture_report(cache, monkeypatch):
    rep = conjecture_report(5, cache=cache)
    assert rep.testable and rep.equal and rep.computed == 5 and rep.fixture == 5
    rep = conjecture_report(7, cache=cache)
    assert rep.equal and rep.computed == -85
    monkeypatch.setattr(invariants.fixtures, "has_fixture", lambda d, l: False)
    rep = conjecture_report(5, cache=cache)
    assert not rep.testable and rep.equal is None


def test_record_round_trip_and_field_order():
    rec = InvariantRecord("w2", 2, 3, None, 1, "32", "ALT/INCIDENT/BAL/BAL")
    line = rec.to_json_line()
    assert list(json.loads(line).keys()) == \
        ["kind", "a", "b", "d", "l", "value", "convention", "version"]
    assert InvariantRecord.from_json_line(line) == rec


def test_cache_file_round_trip(tmp_path):
    path = str(tmp_path / "cache.jsonl")
    cache = ResultCache(path)
    first = w_quadric(2, 3, 1, cache=cache)
    assert os.path.exists(path)
    reloaded = ResultCache(path)
    assert reloaded.get("w2", a=2, b=3, l=1,
                        convention=invariants.resolve_convention()[0].ident) == first
    # eviction coherence: recomputation reproduces the identical value
    cache.clear()
    assert not os.path.exists(path)
    again = w_quadric(2, 3, 1, cache=ResultCache(path))
    assert again == first


def test_resolve_convention(tmp_path, monkeypatch):
    conv, fitted = invariants.resolve_convention("ALT/INCIDENT")
    assert fitted and conv.ident == "ALT/INCIDENT/W/W"
    path = str(tmp_path / "conv.json")
    invariants.save_fitted_convention(invariants.DEFAULT_CONVENTION, path, max_d=9)
    conv, fitted = invariants.resolve_convention(None, convention_path=path)
    assert fitted and conv == invariants.DEFAULT_CONVENTION
    conv, fitted = invariants.resolve_convention(
        None, convention_path=str(tmp_path / "absent.json"))
    assert conv == invariants.DEFAULT_CONVENTION and not fitted
