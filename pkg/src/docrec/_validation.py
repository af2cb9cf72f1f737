"""Input checks used by the estimator wrappers."""

from __future__ import annotations

import numbers
from collections.abc import Iterable

from .logmodel import AccessEvent, CitationRecord
from .sessionizer import Session


def check_positive_int(value, name):
    if isinstance(value, bool) or not isinstance(value, numbers.Integral) or value < 1:
        raise ValueError(f"{name} must be a positive integer, got {value!r}")
    return int(value)


def check_non_negative_int(value, name):
    if isinstance(value, bool) or not isinstance(value, numbers.Integral) or value < 0:
        raise ValueError(f"{name} must be a non-negative integer, got {value!r}")
    return int(value)


def _check_items(X, kind, name):
    if isinstance(X, (str, bytes)) or not isinstance(X, Iterable):
        raise TypeError(f"{name} must be an iterable of {kind.__name__}, got {type(X).__name__}")
    items = list(X)
    for i, item in enumerate(items):
        if not isinstance(item, kind):
            raise TypeError(f"{name}[{i}] is {type(item).__name__}, expected {kind.__name__}")
    return items


def check_events(X):
    """Accept AccessEvents or plain ``(timestamp, client_id, doc_id)`` tuples."""
    if isinstance(X, (str, bytes)) or not isinstance(X, Iterable):
        raise TypeError(f"events must be an iterable of AccessEvent, got {type(X).__name__}")
    out = []
    for i, ev in enumerate(X):
        if not isinstance(ev, AccessEvent):
            try:
                ts, client, doc = ev
            except (TypeError, ValueError):
                raise TypeError(f"events[{i}] is not a (timestamp, client_id, doc_id) triple") from None
            ev = AccessEvent(ts, client, doc)
        if isinstance(ev.timestamp, bool) or not isinstance(ev.timestamp, numbers.Integral) or ev.timestamp < 0:
            raise ValueError(f"events[{i}] has invalid timestamp {ev.timestamp!r}")
        if not ev.client_id or not ev.doc_id:
            raise ValueError(f"events[{i}] has an empty id")
        out.append(ev)
    return out


def check_sessions(X):
    return _check_items(X, Session, "sessions")


def check_citations(X):
    return _check_items(X, CitationRecord, "citations")


def check_doc_ids(X):
    if isinstance(X, str):
        return [X]
    docs = list(X)
    for i, d in enumerate(docs):
        if not isinstance(d, str) or not d:
            raise ValueError(f"doc ids must be non-empty strings, got {d!r} at position {i}")
    return docs
