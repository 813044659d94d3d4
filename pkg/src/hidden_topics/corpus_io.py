"""JSON-lines datasets: labeled summary-document pairs and ranking tasks.

Pairs file, one object per line::

    {"summary_id": ..., "doc_id": ..., "summary_text": ..., "doc_text": ..., "label": true}

Ranking tasks use a documents file of ``{"doc_id", "text"}`` objects and a
categories file of ``{"category_id", "summary_text", "relevant_doc_ids"}``.
"""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Any, Iterable, Iterator

from hidden_topics.errors import DanglingReferenceError, DatasetError


@dataclass(frozen=True)
class LabeledPair:
    summary_id: str
    doc_id: str
    summary_text: str
    doc_text: str
    label: bool


@dataclass(frozen=True)
class RankingCategory:
    category_id: str
    summary_text: str
    relevant_doc_ids: frozenset[str]


def _records(path: str | Path) -> Iterator[tuple[int, dict[str, Any]]]:
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise DatasetError(f"malformed JSON ({exc.msg})", lineno, str(path)) from None
            if not isinstance(obj, dict):
                raise DatasetError("expected a JSON object", lineno, str(path))
            yield lineno, obj


def _field(obj: dict, name: str, kind: type, lineno: int, path) -> Any:
    if name not in obj:
        raise DatasetError(f"missing field {name!r}", lineno, str(path))
    value = obj[name]
    if kind is str:
        if isinstance(value, (int, float)) and not isinstance(value, bool):
            value = str(value)
        if not isinstance(value, str) or not value.strip():
            raise DatasetError(f"field {name!r} must be a non-empty string", lineno, str(path))
    elif kind is bool:
        if not isinstance(value, bool):
            if value in (0, 1):
                value = bool(value)
            else:
                raise DatasetError(f"field {name!r} must be a boolean", lineno, str(path))
    return value


def load_pairs(path: str | Path) -> list[LabeledPair]:
    pairs = []
    for lineno, obj in _records(path):
        pairs.append(
            LabeledPair(
                summary_id=_field(obj, "summary_id", str, lineno, path),
                doc_id=_field(obj, "doc_id", str, lineno, path),
                summary_text=_field(obj, "summary_text", str, lineno, path),
                doc_text=_field(obj, "doc_text", str, lineno, path),
                label=_field(obj, "label", bool, lineno, path),
            )
        )
    return pairs


def write_pairs(pairs: Iterable[LabeledPair], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for p in pairs:
            fh.write(json.dumps(asdict(p), ensure_ascii=False) + "\n")


def load_corpus(path: str | Path) -> dict[str, str]:
    """doc_id -> text, in file order. Duplicate ids are an error."""
    corpus: dict[str, str] = {}
    for lineno, obj in _records(path):
        doc_id = _field(obj, "doc_id", str, lineno, path)
        if doc_id in corpus:
            raise DatasetError(f"duplicate doc_id {doc_id!r}", lineno, str(path))
        corpus[doc_id] = _field(obj, "text", str, lineno, path)
    return corpus


def load_categories(path: str | Path) -> list[RankingCategory]:
    cats = []
    for lineno, obj in _records(path):
        ids = obj.get("relevant_doc_ids")
        if not isinstance(ids, list) or not ids or not all(isinstance(i, str) and i for i in ids):
            raise DatasetError(
                "field 'relevant_doc_ids' must be a non-empty list of ids", lineno, str(path)
            )
        cats.append(
            RankingCategory(
                category_id=_field(obj, "category_id", str, lineno, path),
                summary_text=_field(obj, "summary_text", str, lineno, path),
                relevant_doc_ids=frozenset(ids),
            )
        )
    return cats


def load_ranking_dataset(
    pairs_path: str | Path, docs_path: str | Path
) -> tuple[list[RankingCategory], dict[str, str]]:
    """Categories plus the document pool they are ranked against.

    Every relevant id must name a document in the pool.
    """
    corpus = load_corpus(docs_path)
    cats = load_categories(pairs_path)
    for cat in cats:
        missing = sorted(cat.relevant_doc_ids - corpus.keys())
        if missing:
            raise DanglingReferenceError(
                f"category {cat.category_id!r} references unknown documents {missing}",
                path=str(pairs_path),
            )
    return cats, corpus


def write_corpus(corpus: dict[str, str], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for doc_id, text in corpus.items():
            fh.write(json.dumps({"doc_id": doc_id, "text": text}, ensure_ascii=False) + "\n")


def write_categories(cats: Iterable[RankingCategory], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for c in cats:
            rec = {
                "category_id": c.category_id,
                "summary_text": c.summary_text,
                "relevant_doc_ids": sorted(c.relevant_doc_ids),
            }
            fh.write(json.dumps(rec, ensure_ascii=False) + "\n")
