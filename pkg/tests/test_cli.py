import json
from pathlib import Path

from dixit.cli import main

DATA = Path(__file__).resolve().parent.parent / "data"


def write_config(path, games=2):
    config = {
        "games": games,
        "master_seed": 11,
        "deck": str(DATA / "deck.jsonl"),
        "lexicon": str(DATA / "lexicon.jsonl"),
        "game": {"n_players": 4, "phrase_limit": 4, "target_score": 6},
        "agents": [
            {"model": "tag_jaccard", "strategy": "strategy1", "samples": 50, "candidate_limit": 2, "seed": i}
            for i in range(4)
        ],
    }
    path.write_text(json.dumps(config), encoding="utf-8")
    return path


def test_simulate_and_replay(tmp_path, capsys):
    config = write_config(tmp_path / "tournament.json")
    out_dir = tmp_path / "out"
    code = main(["simulate", "--config", str(config), "--out", str(out_dir)])
    assert code == 0
    shown = capsys.readouterr().out
    assert "games: 2" in shown

    transcripts = sorted(out_dir.glob("game_*.jsonl"))
    assert len(transcripts) == 2
    assert (out_dir / "report.json").exists()
    assert (out_dir / "report.txt").exists()

    code = main(["replay", str(transcripts[0])])
    assert code == 0
    assert "replay OK" in capsys.readouterr().out


def test_simulate_flag_overrides(tmp_path, capsys):
    config = write_config(tmp_path / "tournament.json", games=5)
    out_dir = tmp_path / "out"
    code = main(["simulate", "--config", str(config), "--games", "1", "--seed", "99", "--out", str(out_dir)])
    assert code == 0
    assert len(list(out_dir.glob("game_*.jsonl"))) == 1


def test_simulate_missing_deck_reports_error(tmp_path, capsys):
    config = {
        "games": 1,
        "deck": "nowhere/deck.jsonl",
        "lexicon": str(DATA / "lexicon.jsonl"),
        "game": {"n_players": 4},
        "agents": [{"model": "tag_jaccard"}] * 4,
    }
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(config), encoding="utf-8")
    code = main(["simulate", "--config", str(path), "--out", str(tmp_path / "o")])
    assert code == 1
    assert "error:" in capsys.readouterr().err


def test_replay_corrupt_transcript(tmp_path, capsys):
    bad = tmp_path / "bad.jsonl"
    bad.write_text('{"type": "phrase"}\n', encoding="utf-8")
    code = main(["replay", str(bad)])
    assert code == 1
    assert "error:" in capsys.readouterr().err


def test_bad_deck_line_number_surfaces(tmp_path, capsys):
    deck = tmp_path / "deck.jsonl"
    deck.write_text('{"id": "c1", "tags": []}\n{oops}\n', encoding="utf-8")
    config = {
        "games": 1,
        "deck": str(deck),
        "lexicon": str(DATA / "lexicon.jsonl"),
        "game": {"n_players": 4},
        "agents": [{"model": "tag_jaccard"}] * 4,
    }
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(config), encoding="utf-8")
    code = main(["simulate", "--config", str(path), "--out", str(tmp_path / "o")])
    assert code == 1
    err = capsys.readouterr().err
    assert ":2:" in err  # the offending line number
