"""scikit-learn style wrappers around the pipeline.

The transformers and recommenders follow the usual ``fit``/``transform``/
``predict`` protocol and expose their settings through ``get_params`` so
they can be cloned, grid-searched and chained with
:class:`sklearn.pipeline.Pipeline`::

    pipe = Pipeline([
        ("filter", AccessLogFilter()),
        ("sessions", Sessionizer(gap_seconds=1800)),
        ("rec", CoDownloadRecommender(k=100)),
    ])
    pipe.fit(events, rec__meta=meta)
    pipe[-1].recommend("paperA")
"""

from __future__ import annotations

from datetime import date

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from . import _validation as val
from ._dates import date_to_epoch
from .coindex import CoOccurrenceIndex, DebiasConfig, count_cocitations, count_codownloads
from .evaluator import average_precision, coverage_distribution
from .logmodel import DEFAULT_MAX_EVENTS_PER_DAY, FilterConfig, filter_events, sort_events
from .recommender import DEFAULT_CAP, RecommendationList, max_strength, recommend
from .sessionizer import DEFAULT_GAP_SECONDS, sessionize


class AccessLogFilter(TransformerMixin, BaseEstimator):
    """Remove blocklisted clients and clients exceeding a daily request cap.

    Input events need not be sorted; output is ordered by
    ``(client_id, timestamp)``.
    """

    def __init__(self, blocked_clients=(), max_events_per_client_per_day=DEFAULT_MAX_EVENTS_PER_DAY):
        self.blocked_clients = blocked_clients
        self.max_events_per_client_per_day = max_events_per_client_per_day

    def fit(self, X, y=None):
        val.check_positive_int(self.max_events_per_client_per_day, "max_events_per_client_per_day")
        self.config_ = FilterConfig(frozenset(self.blocked_clients), self.max_events_per_client_per_day)
        return self

    def transform(self, X):
        check_is_fitted(self, "config_")
        return filter_events(sort_events(val.check_events(X)), self.config_)


class Sessionizer(TransformerMixin, BaseEstimator):
    """Turn access events into inactivity-gap sessions."""

    def __init__(self, gap_seconds=DEFAULT_GAP_SECONDS):
        self.gap_seconds = gap_seconds

    def fit(self, X, y=None):
        if not self.gap_seconds >= 0:
            raise ValueError(f"gap_seconds must be non-negative, got {self.gap_seconds!r}")
        self.n_features_in_ = 1
        return self

    def transform(self, X):
        check_is_fitted(self, "n_features_in_")
        return sessionize(sort_events(val.check_events(X)), self.gap_seconds)


class _IndexRecommender(BaseEstimator):
    """Shared predict/score logic over a fitted ``index_``."""

    def _check_k(self):
        return val.check_positive_int(self.k, "k")

    def recommend(self, doc) -> RecommendationList:
        check_is_fitted(self, "index_")
        return recommend(self.index_, doc, self._check_k())

    def predict(self, X) -> list[RecommendationList]:
        """One ranked list per query document in ``X``."""
        check_is_fitted(self, "index_")
        k = self._check_k()
        return [recommend(self.index_, d, k) for d in val.check_doc_ids(X)]

    def max_strength(self, doc) -> int:
        check_is_fitted(self, "index_")
        return max_strength(self.index_, doc)

    def coverage(self, corpus) -> list[int]:
        check_is_fitted(self, "index_")
        return coverage_distribution(self.index_, corpus)

    def score(self, X, y) -> float:
        """Mean average precision of the lists for ``X`` against relevant sets ``y``."""
        docs = val.check_doc_ids(X)
        y = list(y)
        if len(docs) != len(y):
            raise ValueError(f"got {len(docs)} queries but {len(y)} relevant sets")
        if not docs:
            raise ValueError("cannot score an empty query set")
        lists = self.predict(docs)
        return float(np.mean([average_precision(rl.docs, rel) for rl, rel in zip(lists, y)]))


class CoDownloadRecommender(_IndexRecommender):
    """Related documents ranked by debiased co-download counts.

    ``fit`` takes sessions (e.g. the output of :class:`Sessionizer`) and the
    document metadata needed for debiasing. Sessions starting on or after
    ``cutoff`` are ignored.
    """

    def __init__(self, k=DEFAULT_CAP, debias=True, debias_days=30, cutoff=None):
        self.k = k
        self.debias = debias
        self.debias_days = debias_days
        self.cutoff = cutoff

    def fit(self, X, y=None, meta=None):
        self._check_k()
        days = val.check_non_negative_int(self.debias_days, "debias_days")
        sessions = val.check_sessions(X)
        if self.cutoff is not None:
            limit = date_to_epoch(_as_date(self.cutoff))
            sessions = [s for s in sessions if s.start_ts < limit]
        self.index_ = count_codownloads(sessions, meta, DebiasConfig(days, bool(self.debias)))
        self.n_sessions_ = len(sessions)
        return self


class CoCitationRecommender(_IndexRecommender):
    """Related documents ranked by co-citation counts from citation records."""

    def __init__(self, k=DEFAULT_CAP, cutoff=None):
        self.k = k
        self.cutoff = cutoff

    def fit(self, X, y=None):
        self._check_k()
        cutoff = None if self.cutoff is None else _as_date(self.cutoff)
        self.index_ = count_cocitations(val.check_citations(X), cutoff)
        return self


class PrecomputedIndexRecommender(_IndexRecommender):
    """Serve recommendations from an index built elsewhere (e.g. read from disk)."""

    def __init__(self, index: CoOccurrenceIndex | None = None, k=DEFAULT_CAP):
        self.index = index
        self.k = k

    def fit(self, X=None, y=None):
        if not isinstance(self.index, CoOccurrenceIndex):
            raise TypeError("index must be a CoOccurrenceIndex")
        self._check_k()
        self.index_ = self.index
        return self


def _as_date(value) -> date:
    if isinstance(value, date):
        return value
    return date.fromisoformat(str(value))
