from modeguide.records import RunRecord, cache_dir, cache_get, cache_put


def test_cache_disabled_without_env(monkeypatch):
    monkeypatch.delenv("MODEGUIDE_CACHE", raising=False)
    assert cache_dir() is None
    cache_put({"k": 1}, {"v": 2})
    assert cache_get({"k": 1}) is None


def test_cache_roundtrip(tmp_path, monkeypatch):
    monkeypatch.setenv("MODEGUIDE_CACHE", str(tmp_path))
    key = {"what": "unit", "a": 1.5}
    assert cache_get(key) is None
    cache_put(key, {"values": [1.25, 2.5]})
    assert cache_get(key) == {"values": [1.25, 2.5]}
    assert cache_get({"what": "unit", "a": 2.0}) is None


def test_run_record_roundtrip_preserves_timestamp():
    rec = RunRecord("single", {"a": 1.0}, {"eigenvalues": [0.85]}, {"modes": 40})
    clone = RunRecord.from_json(rec.to_json())
    assert clone == rec
    assert clone.created == rec.created


def test_replay_argv_handles_flag_kinds():
    rec = RunRecord("verify", {"quick": True, "modes": 40, "out": None}, {}, {})
    argv = rec.replay_argv()
    assert argv[0] == "verify"
    assert "--quick" in argv
    assert "--modes" in argv and "40" in argv
    assert "--out" not in argv
