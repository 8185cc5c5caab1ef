import json

import pytest
from click.testing import CliRunner

from arsg import jsonio
from arsg.cli import main
from arsg.grammar import Artr, load_grammar, save_artr, save_grammar
from arsg.learner import learn, save_log
from conftest import (
    CUE_LEXICON,
    EXAMPLE2_LINES,
    WET_DKB_DOC,
    run_example2_session,
    synthetic_corpus,
)


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def workdir(tmp_path, wet_dkb, cue_lexicon):
    paths = {}
    paths["dkb"] = tmp_path / "dkb.json"
    jsonio.write(paths["dkb"], WET_DKB_DOC)
    paths["cues"] = tmp_path / "cues.txt"
    paths["cues"].write_text("\n".join(CUE_LEXICON) + "\n", encoding="utf-8")
    paths["text"] = tmp_path / "text.edus"
    paths["text"].write_text("\n".join(EXAMPLE2_LINES) + "\n", encoding="utf-8")

    artr, log = run_example2_session(wet_dkb, cue_lexicon)
    logs_dir = tmp_path / "logs"
    logs_dir.mkdir()
    save_log(log, logs_dir / "wet-sample.json")
    paths["logs"] = logs_dir
    paths["grammar"] = tmp_path / "grammar.json"
    save_grammar(learn([log]), paths["grammar"])
    paths["artr"] = tmp_path / "tree.json"
    save_artr(artr, paths["artr"])
    paths["tmp"] = tmp_path
    return paths


def test_dkb_validate_ok(runner, workdir):
    result = runner.invoke(main, ["dkb", "validate", str(workdir["dkb"])])
    assert result.exit_code == 0
    assert "green 1, red 6, blue 7" in result.output


def test_dkb_validate_data_error(runner, tmp_path):
    bad = tmp_path / "bad.json"
    jsonio.write(
        bad,
        {
            "domain": "d",
            "concepts": [
                {"id": "a", "color": "green", "forms": ["a"], "level": 2, "parent": "b"},
                {"id": "b", "color": "green", "forms": ["b"], "level": 3, "parent": "a"},
            ],
        },
    )
    result = runner.invoke(main, ["dkb", "validate", str(bad)])
    assert result.exit_code == 3
    assert "CycleDetected" in result.output


def test_dkb_merge(runner, workdir, tmp_path):
    additions = tmp_path / "add.json"
    jsonio.write(
        additions,
        {
            "domain": "d",
            "concepts": [{"id": "india", "color": "green", "forms": ["India"], "level": 1}],
        },
    )
    out = tmp_path / "merged.json"
    result = runner.invoke(
        main,
        ["dkb", "merge", str(workdir["dkb"]), str(additions), "-o", str(out)],
    )
    assert result.exit_code == 0
    assert "green 1" in result.output
    assert out.exists()


def test_learn_command(runner, workdir, tmp_path):
    out = tmp_path / "learned.json"
    result = runner.invoke(main, ["learn", str(workdir["logs"]), "-o", str(out)])
    assert result.exit_code == 0, result.output
    grammar = load_grammar(out)
    assert len(grammar.productions) == 7


def test_parse_single_text_stdout(runner, workdir):
    result = runner.invoke(
        main,
        [
            "parse",
            str(workdir["text"]),
            "--grammar", str(workdir["grammar"]),
            "--dkb", str(workdir["dkb"]),
            "--cues", str(workdir["cues"]),
        ],
    )
    assert result.exit_code == 0, result.output
    artr = Artr.from_json(json.loads(result.output))
    assert artr.root.dre == "overall"


def test_parse_is_deterministic(runner, workdir, tmp_path):
    args = [
        "parse",
        str(workdir["text"]),
        "--grammar", str(workdir["grammar"]),
        "--dkb", str(workdir["dkb"]),
        "--cues", str(workdir["cues"]),
    ]
    out1 = tmp_path / "a.json"
    out2 = tmp_path / "b.json"
    assert runner.invoke(main, args + ["-o", str(out1)]).exit_code == 0
    assert runner.invoke(main, args + ["-o", str(out2)]).exit_code == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_parse_corpus_directory(runner, workdir, tmp_path):
    corpus = tmp_path / "corpus.edus"
    text = "\n".join(EXAMPLE2_LINES)
    corpus.write_text(text + "\n\n" + text + "\n", encoding="utf-8")
    out_dir = tmp_path / "parsed"
    result = runner.invoke(
        main,
        [
            "parse", str(corpus),
            "--grammar", str(workdir["grammar"]),
            "--dkb", str(workdir["dkb"]),
            "--cues", str(workdir["cues"]),
            "-o", str(out_dir),
        ],
    )
    assert result.exit_code == 0, result.output
    assert len(list(out_dir.glob("*.json"))) == 2


def test_parse_failure_exit_code(runner, workdir, tmp_path):
    flipped = tmp_path / "flipped.edus"
    flipped.write_text(
        EXAMPLE2_LINES[2] + "\n" + EXAMPLE2_LINES[0] + "\n", encoding="utf-8"
    )
    result = runner.invoke(
        main,
        [
            "parse", str(flipped),
            "--grammar", str(workdir["grammar"]),
            "--dkb", str(workdir["dkb"]),
            "--cues", str(workdir["cues"]),
            "--backoff", "FAIL",
        ],
    )
    assert result.exit_code == 4


def test_summarize_by_count(runner, workdir):
    result = runner.invoke(
        main, ["summarize", "--artr", str(workdir["artr"]), "--edus", "3"]
    )
    assert result.exit_code == 0, result.output
    lines = [l for l in result.output.splitlines() if l.strip()]
    assert len(lines) == 3
    rank, edu_id, text = lines[0].split("\t")
    assert rank == "1" and edu_id.isdigit() and text


def test_summarize_mutually_exclusive_flags(runner, workdir):
    result = runner.invoke(
        main,
        ["summarize", "--artr", str(workdir["artr"]), "--edus", "3", "--ratio", "0.25"],
    )
    assert result.exit_code == 2


def test_eval_trees_with_figures(runner, workdir, tmp_path):
    pred = tmp_path / "pred"
    gold = tmp_path / "gold"
    pred.mkdir()
    gold.mkdir()
    for d in (pred, gold):
        (d / "t1.json").write_bytes(workdir["artr"].read_bytes())
    figs = tmp_path / "figs"
    out = tmp_path / "scores.tsv"
    result = runner.invoke(
        main,
        ["eval", "trees", str(pred), str(gold), "-o", str(out), "--figures", str(figs)],
    )
    assert result.exit_code == 0, result.output
    assert "structure\t1.0000\t1.0000\t1.0000" in out.read_text(encoding="utf-8")
    assert (figs / "tree_scores.png").stat().st_size > 0


def test_eval_rouge_with_figures(runner, tmp_path):
    cand = tmp_path / "cand.txt"
    ref = tmp_path / "ref.txt"
    cand.write_text("china trade grows\n", encoding="utf-8")
    ref.write_text("china trade grows fast\n", encoding="utf-8")
    figs = tmp_path / "figs"
    result = runner.invoke(
        main, ["eval", "rouge", str(cand), str(ref), "--figures", str(figs)]
    )
    assert result.exit_code == 0, result.output
    assert "ROUGE-2" in result.output and "ROUGE-S4" in result.output
    assert (figs / "rouge_scores.png").stat().st_size > 0


def test_transfer_command(runner, workdir, tmp_path):
    mapping = tmp_path / "map.json"
    jsonio.write(
        mapping,
        {"pairs": [{"source": "dev_rap", "target": "grows_fast", "class": "dre"}]},
    )
    out = tmp_path / "transferred.json"
    result = runner.invoke(
        main,
        [
            "transfer",
            "--grammar", str(workdir["grammar"]),
            "--map", str(mapping),
            "-o", str(out),
        ],
    )
    assert result.exit_code == 0, result.output
    moved = load_grammar(out)
    assert "grows_fast" in moved.dre and "dev_rap" not in moved.dre
