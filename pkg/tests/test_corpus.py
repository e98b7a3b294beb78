import json
import shutil

import pytest

from ludelab.corpus import (
    GameMetadata,
    classify_period,
    corpus_entry,
    load_corpus,
    math_profile,
    packaged_corpus_dir,
)
from ludelab.errors import DuplicateName, MetadataMismatch


# --- period classification ---------------------------------------------------------


def test_classify_periods():
    assert classify_period(-3500) == "Ancient"   # Senet
    assert classify_period(1750) == "Modern"     # Mu Torere
    assert classify_period(500) == "Early"       # boundary owned by later period
    assert classify_period(1500) == "Modern"
    assert classify_period(499) == "Ancient"
    assert classify_period(375) == "Ancient"     # Poprad


def test_classify_total_and_monotone():
    order = {"Ancient": 0, "Early": 1, "Modern": 2}
    prev = 0
    for year in range(-4000, 2100, 7):
        cur = order[classify_period(year)]
        assert cur >= prev
        prev = cur


# --- math profiles ------------------------------------------------------------------


def test_ttt_profile_tags():
    profile = math_profile(corpus_entry("Tic-Tac-Toe").description)
    assert "grid" in profile
    assert "collinearity" in profile
    assert "placement" in profile


def test_hex_profile_connectivity():
    profile = math_profile(corpus_entry("Hex-5").description)
    assert "connectivity" in profile
    assert "hexagonal" in profile


def test_stub_profile_board_tags_only():
    profile = math_profile(corpus_entry("Senet-Stub").description)
    assert "grid" in profile
    assert "collinearity" not in profile and "connectivity" not in profile


def test_profiles_deterministic():
    gd = corpus_entry("Mu-Torere").description
    assert math_profile(gd) == math_profile(gd)
    counts = math_profile(gd).as_counter()
    assert counts["adjacency"] == 1 and counts["locomotion"] == 1


# --- corpus loading -----------------------------------------------------------------


def test_shipped_corpus_loads():
    entries = load_corpus()
    assert len(entries) >= 10
    names = {e.name for e in entries}
    assert {"Tic-Tac-Toe", "Mu-Torere", "Hex-5", "Round-Merels"} <= names
    stubs = {e.name for e in entries if e.is_partial}
    assert stubs == {"Senet-Stub", "Ur-Stub", "Poprad-Stub"}


def test_metadata_fields():
    entry = corpus_entry("Mu-Torere")
    assert entry.metadata.region == "New Zealand"
    assert entry.metadata.earliest_date == 1750
    assert entry.metadata.period == "Modern"
    assert entry.metadata.sources


def test_missing_sidecar(tmp_path):
    src = packaged_corpus_dir()
    shutil.copy(src / "tictactoe.lud", tmp_path / "tictactoe.lud")
    with pytest.raises(MetadataMismatch):
        load_corpus(tmp_path)


def test_name_mismatch(tmp_path):
    src = packaged_corpus_dir()
    shutil.copy(src / "tictactoe.lud", tmp_path / "tictactoe.lud")
    meta = json.loads((src / "tictactoe.meta.json").read_text())
    meta["name"] = "Wrong-Name"
    (tmp_path / "tictactoe.meta.json").write_text(json.dumps(meta))
    with pytest.raises(MetadataMismatch):
        load_corpus(tmp_path)


def test_duplicate_names(tmp_path):
    src = packaged_corpus_dir()
    for stem in ("tictactoe", "copy"):
        shutil.copy(src / "tictactoe.lud", tmp_path / f"{stem}.lud")
        shutil.copy(src / "tictactoe.meta.json", tmp_path / f"{stem}.meta.json")
    with pytest.raises(DuplicateName):
        load_corpus(tmp_path)


def test_metadata_json_round_trip():
    meta = GameMetadata("X", "Nowhere", -42, ("a", "b"))
    doc = meta.to_dict()
    assert doc["period"] == "Ancient"
    again = GameMetadata.from_json(json.dumps(doc))
    assert again == meta
