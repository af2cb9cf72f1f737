"""UTC calendar helpers. All timestamps are integer epoch seconds."""

import calendar
from datetime import date, datetime, timezone

SECONDS_PER_DAY = 86400


def date_to_epoch(d: date) -> int:
    """Epoch seconds at 00:00 UTC of ``d``."""
    return calendar.timegm((d.year, d.month, d.day, 0, 0, 0))


def epoch_to_date(ts: int) -> date:
    return datetime.fromtimestamp(ts, tz=timezone.utc).date()


def parse_date(text: str) -> date:
    """Strict ``YYYY-MM-DD`` parser."""
    if len(text) != 10 or text[4] != "-" or text[7] != "-":
        raise ValueError(f"bad date {text!r}, expected YYYY-MM-DD")
    return date.fromisoformat(text)


def add_months(d: date, months: int) -> date:
    """Shift ``d`` by whole calendar months, clamping the day to month end."""
    idx = d.year * 12 + (d.month - 1) + months
    year, month0 = divmod(idx, 12)
    last = calendar.monthrange(year, month0 + 1)[1]
    return date(year, month0 + 1, min(d.day, last))


def whole_months_between(start: date, end: date) -> int:
    """Largest ``m`` with ``add_months(start, m) <= end``.

    This is the floor of the calendar-month difference, so it is negative
    exactly when ``end`` precedes ``start``.
    """
    months = (end.year - start.year) * 12 + (end.month - start.month)
    while add_months(start, months) > end:
        months -= 1
    while add_months(start, months + 1) <= end:
        months += 1
    return months
