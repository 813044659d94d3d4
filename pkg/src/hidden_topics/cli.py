"""Command-line interface: match, rank, topics, eval-classify, eval-rank.

Exit codes: 0 success, 1 numerical failure, 2 input/data error,
3 degenerate label distribution.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from hidden_topics import corpus_io, evaluation
from hidden_topics.embeddings import EmbeddingStore, load_embeddings
from hidden_topics.errors import (
    ConvergenceError,
    DatasetError,
    DegenerateLabelsError,
    EmbeddingFormatError,
    EmptyContentError,
)
from hidden_topics.linalg.svd import ORTHONORMALITY_TOL, RESIDUAL_TOL
from hidden_topics.preprocess import default_stoplist, load_stoplist, text_to_matrix
from hidden_topics.relevance import match
from hidden_topics.topics import DEFAULT_K, dump_model, extract_topics, topic_words

STOPLIST_ENV = "HIDDEN_TOPICS_STOPLIST"

EXIT_OK, EXIT_NUMERIC, EXIT_INPUT, EXIT_DEGENERATE = 0, 1, 2, 3


class InputError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    embeddings_path: Path
    stoplist_path: Path | None
    K: int = DEFAULT_K
    orthonormality_tol: float = ORTHONORMALITY_TOL
    residual_tol: float = RESIDUAL_TOL
    seed: int = 0
    format: str = "json"
    workers: int = 1

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        if args.K < 1:
            raise InputError(f"-K must be at least 1, got {args.K}")
        stoplist = args.stoplist or os.environ.get(STOPLIST_ENV) or None
        cfg = cls(
            embeddings_path=Path(args.embeddings),
            stoplist_path=Path(stoplist) if stoplist else None,
            K=args.K,
            orthonormality_tol=args.orth_tol,
            residual_tol=args.residual_tol,
            seed=args.seed,
            format=args.format,
            workers=args.workers,
        )
        for p in (cfg.embeddings_path, cfg.stoplist_path):
            if p is not None and not p.is_file():
                raise InputError(f"{p}: no such file")
        return cfg

    @property
    def extract_options(self) -> dict:
        return {"orthonormality_tol": self.orthonormality_tol, "residual_tol": self.residual_tol}

    def load_store(self) -> EmbeddingStore:
        try:
            return load_embeddings(self.embeddings_path)
        except (OSError, EmbeddingFormatError, UnicodeDecodeError) as exc:
            raise InputError(f"{self.embeddings_path}: {exc}") from None

    def load_stoplist(self) -> frozenset[str]:
        if self.stoplist_path is None:
            return default_stoplist()
        try:
            return load_stoplist(self.stoplist_path)
        except (OSError, UnicodeDecodeError) as exc:
            raise InputError(f"{self.stoplist_path}: {exc}") from None


def read_text(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise InputError(f"{path}: {exc.strerror if isinstance(exc, OSError) else exc}") from None


def fmt(x: float) -> str:
    return f"{x:.6g}"


def emit(obj: dict, cfg: RunConfig, text_lines: list[str]) -> None:
    if cfg.format == "json":
        sys.stdout.write(json.dumps(obj, indent=2, ensure_ascii=False) + "\n")
    else:
        sys.stdout.write("\n".join(text_lines) + "\n")


def cmd_match(args, cfg: RunConfig) -> int:
    doc_text = read_text(args.document)
    summary_text = read_text(args.summary)
    store, stop = cfg.load_store(), cfg.load_stoplist()
    try:
        report, doc, summary, model = match(
            doc_text, summary_text, store, cfg.K, stop, cfg.extract_options
        )
    except EmptyContentError as exc:
        path = args.summary if exc.side == "summary" else args.document
        raise InputError(f"{path}: {exc}") from None
    out = {
        "document": args.document,
        "summary": args.summary,
        "score": report.score,
        "requested_k": cfg.K,
        "effective_k": report.effective_k,
        "per_topic": [float(x) for x in report.per_topic],
        "importance": [float(x) for x in model.norm_importance],
        "raw_importance": [float(x) for x in model.raw_importance],
        "oov": {"document": doc.oov, "summary": summary.oov},
        "words": {"document": doc.n, "summary": summary.n},
    }
    lines = [
        f"score          {fmt(report.score)}",
        f"topics         {report.effective_k} (requested {cfg.K})",
        f"words          document {doc.n}, summary {summary.n}",
        f"oov            document {doc.oov}, summary {summary.oov}",
        "",
        f"{'topic':>5}  {'importance':>12}  {'relevance':>12}",
    ]
    for k, (imp, rel) in enumerate(zip(model.norm_importance, report.per_topic), start=1):
        lines.append(f"{k:>5}  {fmt(imp):>12}  {fmt(rel):>12}")
    emit(out, cfg, lines)
    return EXIT_OK


def cmd_rank(args, cfg: RunConfig) -> int:
    summary_text = read_text(args.summary)
    try:
        corpus = corpus_io.load_corpus(args.corpus)
    except OSError as exc:
        raise InputError(f"{args.corpus}: {exc.strerror}") from None
    if not corpus:
        raise InputError(f"{args.corpus}: corpus is empty")
    store, stop = cfg.load_store(), cfg.load_stoplist()
    try:
        ranking = evaluation.rank_documents(
            summary_text, corpus, store, cfg.K, stop, cfg.workers, cfg.extract_options
        )
    except EmptyContentError as exc:
        raise InputError(f"{args.summary}: {exc}") from None
    top = ranking[: args.top]
    out = {
        "summary": args.summary,
        "corpus_size": len(corpus),
        "results": [
            {"rank": i, "doc_id": r.doc_id, "score": r.score, "flagged": r.flagged}
            for i, r in enumerate(top, start=1)
        ],
    }
    width = max(len(r.doc_id) for r in top)
    lines = [f"{'rank':>4}  {'doc_id':<{width}}  {'score':>10}"]
    for i, r in enumerate(top, start=1):
        flag = "  (no content)" if r.flagged else ""
        lines.append(f"{i:>4}  {r.doc_id:<{width}}  {fmt(r.score):>10}{flag}")
    emit(out, cfg, lines)
    return EXIT_OK


def cmd_topics(args, cfg: RunConfig) -> int:
    if args.words < 1:
        raise InputError("--words must be at least 1")
    text = read_text(args.document)
    store, stop = cfg.load_store(), cfg.load_stoplist()
    try:
        doc = text_to_matrix(text, store, stop)
    except EmptyContentError as exc:
        raise InputError(f"{args.document}: {exc}") from None
    model = extract_topics(doc, cfg.K, **cfg.extract_options)
    words = topic_words(model, doc, args.words)
    if args.dump:
        dump_model(model, args.dump)
    out = {
        "document": args.document,
        "requested_k": cfg.K,
        "effective_k": model.effective_k,
        "importance": [float(x) for x in model.norm_importance],
        "raw_importance": [float(x) for x in model.raw_importance],
        "topic_words": [{"token": t, "error": e} for t, e in words],
        "oov": doc.oov,
    }
    lines = [f"topics {model.effective_k} (requested {cfg.K})", "importance"]
    lines += [f"  {k:>3}  {fmt(x)}" for k, x in enumerate(model.norm_importance, start=1)]
    lines.append("topic words")
    lines += [f"  {t:<20} {fmt(e)}" for t, e in words]
    emit(out, cfg, lines)
    return EXIT_OK


def cmd_eval_classify(args, cfg: RunConfig) -> int:
    try:
        pairs = corpus_io.load_pairs(args.pairs)
    except OSError as exc:
        raise InputError(f"{args.pairs}: {exc.strerror}") from None
    store, stop = cfg.load_store(), cfg.load_stoplist()
    scored = []
    for i, p in enumerate(pairs, start=1):
        try:
            report = match(p.doc_text, p.summary_text, store, cfg.K, stop, cfg.extract_options)[0]
        except EmptyContentError as exc:
            raise InputError(f"{args.pairs}: record {i} ({p.summary_id}/{p.doc_id}): {exc}") from None
        scored.append((p, report.score))
    if args.scores_out:
        with open(args.scores_out, "w", encoding="utf-8") as fh:
            for p, s in scored:
                rec = {"summary_id": p.summary_id, "doc_id": p.doc_id, "score": s, "label": p.label}
                fh.write(json.dumps(rec) + "\n")
    try:
        stats = evaluation.cross_validate(
            [(s, p.label) for p, s in scored], folds=args.folds, seed=cfg.seed
        )
    except ValueError as exc:
        if isinstance(exc, DegenerateLabelsError):
            raise
        raise InputError(f"{args.pairs}: {exc}") from None
    out = {"pairs": len(pairs), "K": cfg.K, **stats.to_dict()}
    lines = [f"pairs {len(pairs)}  folds {len(stats.folds)}  seed {cfg.seed}"]
    for name in ("precision", "recall", "f1"):
        lines.append(f"{name:<10} {fmt(stats.mean(name))} +/- {fmt(stats.std(name))}")
    emit(out, cfg, lines)
    return EXIT_OK


def parse_k_list(text: str) -> list[int]:
    try:
        ks = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid k list {text!r}") from None
    if not ks or any(k < 1 for k in ks):
        raise argparse.ArgumentTypeError("k values must be positive integers")
    return ks


def cmd_eval_rank(args, cfg: RunConfig) -> int:
    try:
        cats, corpus = corpus_io.load_ranking_dataset(args.categories, args.docs)
    except OSError as exc:
        raise InputError(f"{exc.filename}: {exc.strerror}") from None
    for k in args.k:
        if k > len(corpus):
            raise InputError(f"--k {k} exceeds corpus size {len(corpus)} ({args.docs})")
    if not cats:
        raise InputError(f"{args.categories}: no categories")
    store, stop = cfg.load_store(), cfg.load_stoplist()
    try:
        stats = evaluation.evaluate_ranking(
            cats, corpus, store, args.k, cfg.K, stop, cfg.workers, cfg.extract_options
        )
    except EmptyContentError as exc:
        raise InputError(f"{args.categories}: {exc}") from None
    out = {
        "categories": len(cats),
        "corpus_size": len(corpus),
        "K": cfg.K,
        "results": [stats[k].to_dict() for k in args.k],
    }
    lines = [f"categories {len(cats)}  corpus {len(corpus)}"]
    for k in args.k:
        st = stats[k]
        lines.append(f"precision@{k}  mean {fmt(st.mean_precision)}")
        for b, frac in enumerate(st.histogram):
            lines.append(f"  {b}/{k:<4} {fmt(frac)}")
    emit(out, cfg, lines)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--embeddings", required=True, metavar="PATH", help="word-vector text file")
    common.add_argument(
        "--stoplist", metavar="PATH", help=f"stopword file (default: ${STOPLIST_ENV} or bundled list)"
    )
    common.add_argument("-K", type=int, default=DEFAULT_K, help="number of hidden topics (default 15)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--workers", type=int, default=1, help="threads for per-document scoring")
    common.add_argument("--orth-tol", type=float, default=ORTHONORMALITY_TOL)
    common.add_argument("--residual-tol", type=float, default=RESIDUAL_TOL)

    parser = argparse.ArgumentParser(
        prog="hidden-topics", description="Match long documents to short summaries via hidden topics."
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("match", parents=[common], help="score one summary against one document")
    p.add_argument("document")
    p.add_argument("summary")
    p.set_defaults(func=cmd_match)

    p = sub.add_parser("rank", parents=[common], help="rank a corpus against a summary")
    p.add_argument("summary")
    p.add_argument("corpus", help="JSON-lines {doc_id, text}")
    p.add_argument("--top", type=int, default=10)
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("topics", parents=[common], help="show topic importances and topic words")
    p.add_argument("document")
    p.add_argument("--words", type=int, default=10)
    p.add_argument("--dump", metavar="PATH", help="write the topic model as text")
    p.set_defaults(func=cmd_topics)

    p = sub.add_parser("eval-classify", parents=[common], help="thresholded classification with CV")
    p.add_argument("pairs", help="JSON-lines labeled pairs")
    p.add_argument("--folds", type=int, default=10)
    p.add_argument("--scores-out", metavar="PATH", help="write per-pair scores as JSON lines")
    p.set_defaults(func=cmd_eval_classify)

    p = sub.add_parser("eval-rank", parents=[common], help="precision@k over ranking categories")
    p.add_argument("categories", help="JSON-lines {category_id, summary_text, relevant_doc_ids}")
    p.add_argument("docs", help="JSON-lines {doc_id, text}")
    p.add_argument("--k", type=parse_k_list, default=[1, 3, 6], help="comma-separated, e.g. 1,3,6")
    p.set_defaults(func=cmd_eval_rank)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.ERROR,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        cfg = RunConfig.from_args(args)
        return args.func(args, cfg)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except DatasetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except DegenerateLabelsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
