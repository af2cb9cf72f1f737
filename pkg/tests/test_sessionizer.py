import math
from collections import Counter

import pytest
from hypothesis import given
from hypothesis import strategies as st

from docrec.exceptions import ContractError
from docrec.logmodel import AccessEvent, sort_events
from docrec.sessionizer import Session, format_session_line, parse_session_line, sessionize

events_st = st.lists(
    st.builds(AccessEvent, st.integers(0, 20000), st.sampled_from(["c1", "c2", "c3"]), st.sampled_from("ABCDE")),
    max_size=80,
).map(sort_events)


def test_singleton():
    assert sessionize([AccessEvent(0, "c1", "A")]) == [Session("c1", 0, 0, frozenset("A"))]


def test_within_gap():
    out = sessionize([AccessEvent(0, "c1", "A"), AccessEvent(600, "c1", "B")], 1800)
    assert out == [Session("c1", 0, 600, frozenset("AB"))]


def test_gap_exceeded():
    out = sessionize([AccessEvent(0, "c1", "A"), AccessEvent(1801, "c1", "B")], 1800)
    assert [s.docs for s in out] == [frozenset("A"), frozenset("B")]


def test_gap_boundary_is_inclusive():
    out = sessionize([AccessEvent(0, "c1", "A"), AccessEvent(1800, "c1", "B")], 1800)
    assert len(out) == 1


def test_repeated_download_counts_once():
    out = sessionize([AccessEvent(0, "c1", "A"), AccessEvent(10, "c1", "A")])
    assert out == [Session("c1", 0, 10, frozenset("A"))]


def test_gap_is_measured_between_consecutive_events():
    # a long session made of short hops stays one session
    evs = [AccessEvent(i * 1000, "c1", "A") for i in range(10)]
    assert len(sessionize(evs, 1800)) == 1


def test_sessions_never_span_clients():
    out = sessionize([AccessEvent(0, "a", "A"), AccessEvent(1, "b", "B")])
    assert [(s.client_id, s.docs) for s in out] == [("a", frozenset("A")), ("b", frozenset("B"))]


def test_unsorted_is_contract_error():
    with pytest.raises(ContractError):
        sessionize([AccessEvent(10, "c1", "A"), AccessEvent(0, "c1", "B")])
    with pytest.raises(ContractError):
        sessionize([AccessEvent(0, "c2", "A"), AccessEvent(0, "c1", "B")])


def test_session_invariants():
    with pytest.raises(ValueError):
        Session("c", 5, 4, frozenset("A"))
    with pytest.raises(ValueError):
        Session("c", 0, 0, frozenset())


def test_dump_round_trip_sorts_docs():
    s = Session("c1", 3, 9, frozenset({"z", "a", "m"}))
    line = format_session_line(s)
    assert line == "c1\t3\t9\ta,m,z\n"
    assert parse_session_line(line) == s


@given(events_st, st.integers(0, 5000))
def test_partition(events, gap):
    sessions = sessionize(events, gap)
    # rebuild each session's event multiset from the input by time range
    per_session = Counter()
    for ev in events:
        owners = [i for i, s in enumerate(sessions) if s.client_id == ev.client_id and s.start_ts <= ev.timestamp <= s.end_ts]
        assert len(owners) == 1
        assert ev.doc_id in sessions[owners[0]].docs
        per_session[owners[0]] += 1
    assert sum(per_session.values()) == len(events)
    assert set(per_session) == set(range(len(sessions)))


@given(events_st, st.integers(0, 5000))
def test_disjoint_ordered_ranges(events, gap):
    sessions = sessionize(events, gap)
    for a, b in zip(sessions, sessions[1:]):
        if a.client_id == b.client_id:
            assert a.end_ts < b.start_ts
            assert b.start_ts - a.end_ts > gap
        else:
            assert a.client_id < b.client_id


@given(events_st)
def test_infinite_gap_one_session_per_client(events):
    sessions = sessionize(events, math.inf)
    assert [s.client_id for s in sessions] == sorted({e.client_id for e in events})


@given(events_st)
def test_zero_gap_one_session_per_timestamp_run(events):
    sessions = sessionize(events, 0)
    assert len(sessions) == len({(e.client_id, e.timestamp) for e in events})
    assert all(s.start_ts == s.end_ts for s in sessions)
