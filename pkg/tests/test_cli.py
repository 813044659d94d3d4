import json
import subprocess
import sys

import numpy as np
import pytest

from hidden_topics.cli import main
from hidden_topics.corpus_io import LabeledPair, RankingCategory, write_categories, write_corpus, write_pairs
from hidden_topics.embeddings import load_embeddings, save_embeddings
from hidden_topics.evaluation import cross_validate
from hidden_topics.preprocess import default_stoplist, text_to_matrix
from hidden_topics.topics import extract_topics, topic_words

from tests.synth import sample_text, two_cluster_store


@pytest.fixture
def world(tmp_path):
    rng = np.random.default_rng(7)
    store, a, b = two_cluster_store(rng)
    emb = tmp_path / "vectors.txt"
    save_embeddings(store, emb)
    doc = tmp_path / "doc.txt"
    doc.write_text("The " + sample_text(rng, a, 80) + ".", encoding="utf-8")
    summary = tmp_path / "summary.txt"
    summary.write_text(sample_text(rng, a, 8), encoding="utf-8")
    corpus = {f"a{i}": sample_text(rng, a, 50) for i in range(3)}
    corpus.update({f"b{i}": sample_text(rng, b, 50) for i in range(3)})
    write_corpus(corpus, tmp_path / "docs.jsonl")
    return {"dir": tmp_path, "emb": str(emb), "doc": str(doc), "summary": str(summary),
            "docs": str(tmp_path / "docs.jsonl"), "a": a, "b": b, "rng": rng}


def run(capsys, *argv):
    code = main([str(x) for x in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_match_json(world, capsys):
    code, out, _ = run(capsys, "match", world["doc"], world["summary"], "--embeddings", world["emb"])
    assert code == 0
    report = json.loads(out)
    assert 0 <= report["score"] <= 1
    assert report["effective_k"] == 15
    assert len(report["per_topic"]) == len(report["importance"]) == 15
    assert report["oov"] == {"document": 0, "summary": 0}


def test_match_text_format(world, capsys):
    code, out, _ = run(capsys, "match", world["doc"], world["summary"], "--embeddings", world["emb"],
                       "--format", "text", "-K", "3")
    assert code == 0
    assert out.startswith("score")
    assert "topics         3 (requested 3)" in out


def test_match_missing_file(world, capsys):
    missing = world["dir"] / "nope.txt"
    code, _, err = run(capsys, "match", missing, world["summary"], "--embeddings", world["emb"])
    assert code == 2
    assert str(missing) in err


def test_match_zero_content_names_side(world, capsys):
    empty = world["dir"] / "empty.txt"
    empty.write_text("the of and", encoding="utf-8")
    code, _, err = run(capsys, "match", world["doc"], empty, "--embeddings", world["emb"])
    assert code == 2 and str(empty) in err and "summary" in err


def test_bad_embeddings_file(world, capsys):
    bad = world["dir"] / "bad.txt"
    bad.write_text("1 3\na 1 0\n", encoding="utf-8")
    code, _, err = run(capsys, "match", world["doc"], world["summary"], "--embeddings", bad)
    assert code == 2 and "line 2" in err and str(bad) in err


def test_match_byte_identical(world, capsys):
    argv = ("match", world["doc"], world["summary"], "--embeddings", world["emb"])
    assert run(capsys, *argv)[1] == run(capsys, *argv)[1]


def test_stoplist_env_fallback(world, capsys, monkeypatch):
    stop = world["dir"] / "stop.txt"
    stop.write_text("\n".join(world["a"]) + "\n", encoding="utf-8")
    monkeypatch.setenv("HIDDEN_TOPICS_STOPLIST", str(stop))
    code, _, err = run(capsys, "match", world["doc"], world["summary"], "--embeddings", world["emb"])
    assert code == 2 and "no in-vocabulary" in err


def test_rank(world, capsys):
    code, out, _ = run(capsys, "rank", world["summary"], world["docs"], "--embeddings", world["emb"], "--top", "4")
    assert code == 0
    results = json.loads(out)["results"]
    assert len(results) == 4
    assert {r["doc_id"] for r in results[:3]} == {"a0", "a1", "a2"}
    scores = [r["score"] for r in results]
    assert scores == sorted(scores, reverse=True)


def test_rank_malformed_corpus(world, capsys):
    bad = world["dir"] / "bad.jsonl"
    bad.write_text('{"doc_id": "x"}\n', encoding="utf-8")
    code, _, err = run(capsys, "rank", world["summary"], bad, "--embeddings", world["emb"])
    assert code == 2 and "text" in err


def test_topics_matches_library(world, capsys):
    code, out, _ = run(capsys, "topics", world["doc"], "--embeddings", world["emb"], "--words", "5", "-K", "4")
    assert code == 0
    report = json.loads(out)
    store = load_embeddings(world["emb"])
    doc = text_to_matrix(open(world["doc"]).read(), store, default_stoplist())
    expected = topic_words(extract_topics(doc, 4), doc, 5)
    assert [(w["token"], w["error"]) for w in report["topic_words"]] == expected


def test_topics_one_word(world, capsys):
    one = world["dir"] / "one.txt"
    one.write_text(world["a"][3], encoding="utf-8")
    code, out, _ = run(capsys, "topics", one, "--embeddings", world["emb"])
    report = json.loads(out)
    assert code == 0 and report["effective_k"] == 1
    assert report["topic_words"][0]["token"] == world["a"][3]
    assert report["topic_words"][0]["error"] == pytest.approx(0.0, abs=1e-12)


def test_topics_zero_content(world, capsys):
    empty = world["dir"] / "empty.txt"
    empty.write_text("12 34", encoding="utf-8")
    assert run(capsys, "topics", empty, "--embeddings", world["emb"])[0] == 2


def test_topics_dump(world, capsys):
    dump = world["dir"] / "model.txt"
    assert run(capsys, "topics", world["doc"], "--embeddings", world["emb"], "--dump", dump)[0] == 0
    header = dump.read_text().splitlines()[0]
    assert header == "48 15 15"


def make_pairs(world, n_docs=10):
    rng, a, b = world["rng"], world["a"], world["b"]
    pairs = []
    for i in range(n_docs):
        own, other = (a, b) if i % 2 else (b, a)
        text = sample_text(rng, own, 60)
        pairs.append(LabeledPair(f"s{i}+", f"d{i}", sample_text(rng, own, 6), text, True))
        pairs.append(LabeledPair(f"s{i}-", f"d{i}", sample_text(rng, other, 6), text, False))
    path = world["dir"] / "pairs.jsonl"
    write_pairs(pairs, path)
    return path


def test_eval_classify(world, capsys):
    pairs = make_pairs(world, 20)
    scores = world["dir"] / "scores.jsonl"
    argv = ("eval-classify", pairs, "--embeddings", world["emb"], "--seed", "4", "--scores-out", scores)
    code, out, _ = run(capsys, *argv)
    assert code == 0
    report = json.loads(out)
    assert report["f1"]["mean"] == 1.0
    assert run(capsys, *argv)[1] == out
    # out-of-band recomputation from the dumped scores
    dumped = [json.loads(line) for line in scores.read_text().splitlines()]
    stats = cross_validate([(r["score"], r["label"]) for r in dumped], folds=10, seed=4)
    assert stats.to_dict()["per_fold"] == report["per_fold"]


def test_eval_classify_degenerate(world, capsys):
    path = world["dir"] / "pos.jsonl"
    write_pairs([LabeledPair(f"s{i}", f"d{i}", world["a"][0], world["a"][1], True) for i in range(12)], path)
    assert run(capsys, "eval-classify", path, "--embeddings", world["emb"])[0] == 3


def test_eval_classify_bad_data(world, capsys):
    path = world["dir"] / "bad.jsonl"
    path.write_text("{not json}\n", encoding="utf-8")
    code, _, err = run(capsys, "eval-classify", path, "--embeddings", world["emb"])
    assert code == 2 and str(path) in err


def test_eval_rank(world, capsys):
    rng, a = world["rng"], world["a"]
    cats = world["dir"] / "cats.jsonl"
    write_categories([RankingCategory("ca", sample_text(rng, a, 8), frozenset({"a0", "a1", "a2"}))], cats)
    code, out, _ = run(capsys, "eval-rank", cats, world["docs"], "--embeddings", world["emb"], "--k", "1,3,6")
    assert code == 0
    results = {r["k"]: r for r in json.loads(out)["results"]}
    assert results[1]["mean_precision"] == 1.0
    assert results[3]["mean_precision"] == 1.0
    assert results[6]["mean_precision"] == 0.5
    for r in results.values():
        assert abs(sum(r["histogram"].values()) - 1) <= 1e-10


def test_eval_rank_k_too_large(world, capsys):
    cats = world["dir"] / "cats.jsonl"
    write_categories([RankingCategory("ca", "alpha1", frozenset({"a0"}))], cats)
    code, _, err = run(capsys, "eval-rank", cats, world["docs"], "--embeddings", world["emb"], "--k", "7")
    assert code == 2 and "corpus size" in err


def test_eval_rank_dangling(world, capsys):
    cats = world["dir"] / "cats.jsonl"
    write_categories([RankingCategory("ca", "alpha1", frozenset({"zz"}))], cats)
    assert run(capsys, "eval-rank", cats, world["docs"], "--embeddings", world["emb"])[0] == 2


def test_console_entry_point(world):
    proc = subprocess.run(
        [sys.executable, "-m", "hidden_topics", "match", world["doc"], world["summary"],
         "--embeddings", world["emb"], "-K", "5"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0, proc.stderr
    assert json.loads(proc.stdout)["effective_k"] == 5
