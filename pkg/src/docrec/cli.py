"""Command line entry point: ``docrec {gen,ingest,count,recommend,evaluate}``.

Exit status is 0 on success, 1 on input or format errors (one diagnostic
line on stderr) and 2 on usage errors. Output files are written to a
temporary sibling and renamed into place, so a failed run leaves no partial
files behind.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
import tempfile
from datetime import date
from pathlib import Path

from ._dates import date_to_epoch, parse_date
from .coindex import CODOWNLOAD, COCITATION, DebiasConfig, count_cocitations, count_codownloads, read_index, write_index
from .evaluator import (
    build_eval_queries,
    coverage_distribution,
    map_over_age,
    recs_over_age,
    subsample_queries,
    write_coverage,
    write_curve,
)
from .exceptions import DocrecError
from .logmodel import FilterConfig, filter_events, load_citations, load_metadata, read_access_log, sort_events
from .recommender import recommend, write_recommendations
from .sessionizer import format_session_line, sessionize
from .synthcorpus import GenConfig, generate

logger = logging.getLogger("docrec")

DEFAULT_CUTOFF = "2005-01-01"


def _cutoff(text: str) -> date | None:
    if text.lower() == "none":
        return None
    try:
        return parse_date(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {v}")
    return v


def _non_negative_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {v}")
    return v


def _probability(text: str) -> float:
    v = float(text)
    if not 0.0 <= v <= 1.0:
        raise argparse.ArgumentTypeError(f"expected a probability in [0, 1], got {v}")
    return v


def _add_ingest_options(p):
    p.add_argument("--gap-seconds", type=_non_negative_int, default=1800,
                   help="inactivity gap that ends a session (default: 1800)")
    p.add_argument("--max-per-day", type=_positive_int, default=500,
                   help="drop clients with more requests than this on any UTC day (default: 500)")
    p.add_argument("--block", action="append", default=[], metavar="CLIENT",
                   help="drop all events of CLIENT (repeatable)")


def _add_debias_options(p):
    p.add_argument("--debias-days", type=_non_negative_int, default=30,
                   help="ignore co-downloads while both papers are this many days old (default: 30)")
    p.add_argument("--no-debias", action="store_true", help="disable the first-month filter")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="docrec", description="Related-paper recommendations from access logs.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a synthetic corpus")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n-topics", type=_positive_int, default=20)
    p.add_argument("--n-docs", type=_positive_int, default=200)
    p.add_argument("--n-users", type=_positive_int, default=500)
    p.add_argument("--n-sessions", type=_positive_int, default=5000)
    p.add_argument("--docs-per-session", type=_positive_int, default=4)
    p.add_argument("--p-intra-topic", type=_probability, default=0.9)
    p.add_argument("--citation-rate", type=float, default=3.0)
    p.add_argument("--burst", action="store_true", help="inject announcement co-access bursts")
    p.add_argument("--span-months", type=_positive_int, default=48)
    p.add_argument("--cutoff-month", type=_positive_int, default=36)
    p.add_argument("--start-date", type=_cutoff, default=date(2002, 1, 1))
    p.add_argument("--n-crawlers", type=_non_negative_int, default=0)

    p = sub.add_parser("ingest", help="filter and sessionize an access log")
    p.add_argument("--log", required=True)
    p.add_argument("--out", required=True, help="session dump path ('-' for stdout)")
    _add_ingest_options(p)

    p = sub.add_parser("count", help="build a co-download or co-citation index")
    p.add_argument("--mode", choices=(CODOWNLOAD, COCITATION), default=CODOWNLOAD)
    p.add_argument("--log", help="access log (codownload)")
    p.add_argument("--meta", help="document metadata (codownload with debiasing)")
    p.add_argument("--cite", help="citation file (cocitation)")
    p.add_argument("--out", required=True, help="index path")
    p.add_argument("--cutoff", type=_cutoff, default=_cutoff(DEFAULT_CUTOFF),
                   help="only count data dated before this day, or 'none' (default: %(default)s)")
    _add_ingest_options(p)
    _add_debias_options(p)

    p = sub.add_parser("recommend", help="print ranked related documents")
    p.add_argument("--index", required=True)
    p.add_argument("--doc", action="append", required=True, help="query document (repeatable)")
    p.add_argument("--k", type=_positive_int, default=100)
    p.add_argument("--out", default="-")

    p = sub.add_parser("evaluate", help="coverage, recommendation growth and MAP curves")
    p.add_argument("--index", required=True)
    p.add_argument("--meta", required=True)
    p.add_argument("--cite", help="citation file (MAP ground truth; co-citation growth)")
    p.add_argument("--log", help="access log (co-download growth)")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--mode", choices=(CODOWNLOAD, COCITATION), help="must match the index kind if given")
    p.add_argument("--k", type=_positive_int, default=100)
    p.add_argument("--cutoff", type=_cutoff, default=_cutoff(DEFAULT_CUTOFF))
    p.add_argument("--bin-months", type=_positive_int, default=1)
    p.add_argument("--sample", type=_positive_int, help="evaluate a seeded subsample of this many queries")
    p.add_argument("--seed", type=int, default=0)
    _add_ingest_options(p)
    _add_debias_options(p)
    return parser


def _open(path):
    return open(path, encoding="utf-8")


def _write_atomic(path, render) -> None:
    """Stream into a temporary sibling of ``path``, then rename it into place."""
    if str(path) == "-":
        render(sys.stdout)
        return
    path = Path(path)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent if str(path.parent) else ".")
    try:
        os.chmod(tmp, 0o644)
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            render(fh)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _sessions_from_log(path, args):
    with _open(path) as fh:
        events = sort_events(read_access_log(fh))
    cfg = FilterConfig(frozenset(args.block), args.max_per_day)
    return sessionize(filter_events(events, cfg), args.gap_seconds)


def _debias(args) -> DebiasConfig:
    return DebiasConfig(args.debias_days, not args.no_debias)


def cmd_gen(args) -> None:
    cfg = GenConfig(
        seed=args.seed, n_topics=args.n_topics, n_docs=args.n_docs, n_users=args.n_users,
        n_sessions=args.n_sessions, docs_per_session=args.docs_per_session,
        p_intra_topic=args.p_intra_topic, citation_rate=args.citation_rate,
        announcement_burst=args.burst, time_span_months=args.span_months,
        cutoff_month=args.cutoff_month, start_date=args.start_date, n_crawlers=args.n_crawlers,
    )
    corpus = generate(cfg)
    corpus.write(args.out)
    logger.info("wrote %d events, %d docs, %d citation records to %s",
                len(corpus.events), len(corpus.meta), len(corpus.citations), args.out)


def cmd_ingest(args) -> None:
    sessions = _sessions_from_log(args.log, args)
    _write_atomic(args.out, lambda fh: fh.writelines(format_session_line(s) for s in sessions))
    logger.info("wrote %d sessions", len(sessions))


def cmd_count(args) -> None:
    if args.mode == CODOWNLOAD:
        if not args.log:
            raise UsageError("count --mode codownload requires --log")
        debias = _debias(args)
        if debias.enabled and not args.meta:
            raise UsageError("debiasing requires --meta (or pass --no-debias)")
        meta = None
        if args.meta:
            with _open(args.meta) as fh:
                meta = load_metadata(fh)
        sessions = _sessions_from_log(args.log, args)
        if args.cutoff is not None:
            limit = date_to_epoch(args.cutoff)
            sessions = [s for s in sessions if s.start_ts < limit]
        index = count_codownloads(sessions, meta, debias)
    else:
        if not args.cite:
            raise UsageError("count --mode cocitation requires --cite")
        with _open(args.cite) as fh:
            citations = load_citations(fh)
        index = count_cocitations(citations, args.cutoff)
    _write_atomic(args.out, lambda fh: write_index(index, fh))
    logger.info("wrote %s index with %d pairs", index.kind, len(index))


def cmd_recommend(args) -> None:
    with _open(args.index) as fh:
        index = read_index(fh)
    lists = [recommend(index, d, args.k) for d in args.doc]
    _write_atomic(args.out, lambda fh: write_recommendations(lists, fh))


def cmd_evaluate(args) -> None:
    with _open(args.index) as fh:
        index = read_index(fh)
    if args.mode and args.mode != index.kind:
        raise DocrecError(f"--mode {args.mode} does not match {index.kind} index")
    with _open(args.meta) as fh:
        meta = load_metadata(fh)
    citations = None
    if args.cite:
        with _open(args.cite) as fh:
            citations = load_citations(fh)

    outputs = {"coverage.csv": lambda fh: write_coverage(coverage_distribution(index, sorted(meta)), fh)}

    if citations is not None:
        if args.cutoff is None:
            raise UsageError("MAP evaluation needs a --cutoff date")
        queries = subsample_queries(build_eval_queries(citations, meta, args.cutoff), args.sample, args.seed)
        curve = map_over_age(index, queries, args.k)
        outputs["map_over_age.csv"] = lambda fh: write_curve(curve, fh)
        logger.info("evaluated %d queries", len(queries))

    growth = None
    if index.kind == CODOWNLOAD and args.log:
        sessions = _sessions_from_log(args.log, args)
        growth = recs_over_age(meta, CODOWNLOAD, sessions=sessions, cap=args.k,
                               bin_months=args.bin_months, debias=_debias(args))
    elif index.kind == COCITATION and citations is not None:
        growth = recs_over_age(meta, COCITATION, citations=citations, cap=args.k, bin_months=args.bin_months)
    if growth is not None:
        outputs["recs_over_age.csv"] = lambda fh: write_curve(growth, fh)

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for name, render in outputs.items():
        _write_atomic(out / name, render)


class UsageError(Exception):
    pass


COMMANDS = {
    "gen": cmd_gen,
    "ingest": cmd_ingest,
    "count": cmd_count,
    "recommend": cmd_recommend,
    "evaluate": cmd_evaluate,
}


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        COMMANDS[args.command](args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"docrec {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except (DocrecError, ValueError, KeyError, OSError) as exc:
        msg = str(exc).splitlines()[0] if str(exc) else type(exc).__name__
        print(f"docrec {args.command}: error: {msg}", file=sys.stderr)
        return 1
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
