"""Ranked related-document lists from a pair-count index."""

from __future__ import annotations

from dataclasses import dataclass
from typing import IO, Iterable

from .coindex import CoOccurrenceIndex

DEFAULT_CAP = 100


@dataclass(frozen=True)
class RecommendationList:
    query_doc: str
    items: tuple[tuple[str, int], ...]

    @property
    def docs(self) -> list[str]:
        return [doc for doc, _ in self.items]

    def __len__(self):
        return len(self.items)


def _rank_key(item):
    doc, strength = item
    return (-strength, doc)


def recommend(index: CoOccurrenceIndex, doc: str, cap: int | None = DEFAULT_CAP) -> RecommendationList:
    """Partners of ``doc`` by descending count, ties by ascending id.

    ``cap=None`` returns every partner. An unknown document yields an empty
    list.
    """
    if cap is not None and cap < 1:
        raise ValueError(f"cap must be >= 1, got {cap}")
    ranked = sorted(index.partners(doc).items(), key=_rank_key)
    if cap is not None:
        ranked = ranked[:cap]
    return RecommendationList(doc, tuple(ranked))


def max_strength(index: CoOccurrenceIndex, doc: str) -> int:
    return max(index.partners(doc).values(), default=0)


def write_recommendations(lists: Iterable[RecommendationList], sink: IO[str]) -> None:
    """Rows of ``query_doc<TAB>rank<TAB>doc<TAB>strength``, rank starting at 1."""
    for rl in lists:
        for rank, (doc, strength) in enumerate(rl.items, 1):
            sink.write(f"{rl.query_doc}\t{rank}\t{doc}\t{strength}\n")
