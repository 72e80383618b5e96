"""Command-line interface for QCIRS."""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional

from pydantic import ValidationError

from src.config import settings
from src.models.corpus import CorpusParseError, CorpusRepo, CorpusSerializer
from src.models.report_models import (
    COUNTEREXAMPLE_N,
    BoundReport,
    CensusReport,
    census_table,
    estimate_text,
    outcome_summary,
    sieve_stats_table,
    tracking_table,
)
from src.pipelines.search_pipeline import SearchPipeline, effort_vector, expectation_estimates
from src.pipelines.verification_pipeline import VerificationPipeline
from src.schemas import IrsCandidate, IrsMatrixSpec, IrsType, SearchConfig
from src.tools.cycles import lower_bound_girth10, tracking_matrix
from src.tools.expmat import expand, export_alist, toy_counterexample
from src.tools.irs import (
    DEFAULT_SIEVE_CONFIGS,
    build_matrix,
    render_pgm,
    render_ppm,
    save_png,
    sieve_map,
    sieve_stats,
    two_column_qualifies,
)
from src.tools.zring import find_generators

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


def _configure_logging(level: str) -> None:
    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.INFO),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        handlers=[logging.StreamHandler(sys.stderr)],
    )


def _irs_type(value: Optional[str]) -> Optional[IrsType]:
    return IrsType(value) if value else None


def _int_list(value: str) -> List[int]:
    return [int(v) for v in value.split(",") if v.strip()]


def cmd_sieve(args: argparse.Namespace) -> int:
    candidates = find_generators(args.N, args.m, _irs_type(args.type)) if args.N >= 2 else []
    if not candidates:
        print(f"N={args.N}: no subgroup for m={args.m}")
        return EXIT_FAIL
    qualified = 0
    for candidate in candidates:
        ok = two_column_qualifies(candidate, args.m, args.girth)
        qualified += ok
        verdict = "qualified" if ok else f"girth < {args.girth}"
        print(f"N={args.N} a={candidate.a} type={candidate.irs_type.value} {verdict}")
    print(f"{qualified}/{len(candidates)} subgroup(s) qualify at girth {args.girth}")
    return EXIT_OK if qualified else EXIT_FAIL


def _emit_outcome(outcome, out: Optional[str]) -> int:
    print(json.dumps(outcome_summary(outcome)))
    if outcome.record is None:
        return EXIT_FAIL
    print(CorpusSerializer().to_line(outcome.record))
    if out:
        CorpusRepo(out).append([outcome.record])
    return EXIT_OK


def cmd_search(args: argparse.Namespace) -> int:
    config = SearchConfig(
        m=args.m, n=args.n, N=args.N, g=args.girth, G=effort_vector(args.G, args.n, args.N)
    )
    pipeline = SearchPipeline(workers=args.workers, budget_seconds=args.budget)
    outcome = pipeline.search(config, _irs_type(args.type), args.a)
    return _emit_outcome(outcome, args.out)


def cmd_scan(args: argparse.Namespace) -> int:
    pipeline = SearchPipeline(workers=args.workers, budget_seconds=args.budget)
    best, visited = pipeline.scan(
        args.m, args.n, args.girth, args.G, args.n_from, args.n_to, _irs_type(args.type)
    )
    for outcome in (visited[:-1] if best else visited):
        print(json.dumps(outcome_summary(outcome)))
    if best is None:
        print(f"no code found for N in [{args.n_from}, {args.n_to}]")
        return EXIT_FAIL
    return _emit_outcome(best, args.out)


def cmd_verify(args: argparse.Namespace) -> int:
    repo = CorpusRepo(args.corpus)
    records = repo.filter(m=args.m, n=args.n, g=args.girth, max_N=args.max_N)
    oracle = True if args.oracle else None
    report = VerificationPipeline(workers=args.workers).verify_all(records, oracle=oracle)
    for result in report.results:
        status = "PASS" if result.passed else "FAIL"
        tanner = f" tanner={result.tanner_girth}" if result.tanner_girth else ""
        print(f"{status} {result.record.label()} girth={result.fossorier_girth}{tanner}")
    print(f"{report.passed} passed, {report.failed} failed")
    return EXIT_OK if report.all_passed else EXIT_FAIL


def cmd_census(args: argparse.Namespace) -> int:
    if args.tracking:
        for k in range(2, 6):
            print(f"T(C{2 * k}):")
            print(tracking_table(tracking_matrix(k)).to_string())
    if args.table:
        print(census_table(range(2, 6), range(2, 11)).to_string())
    if args.m is not None:
        if args.n is None or args.g is None:
            raise ValueError("census needs m, n and g together")
        print(CensusReport.compute(args.m, args.n, args.g).to_text())
    return EXIT_OK


def cmd_bound(args: argparse.Namespace) -> int:
    record_N = None
    try:
        shipped = CorpusRepo(args.corpus).filter(m=args.m, n=args.n, g=10)
        if shipped:
            record_N = min(r.N for r in shipped)
    except FileNotFoundError:
        logger.warning(f"⚠ Corpus not found at {args.corpus}; skipping record comparison")
    report = BoundReport(bounds=lower_bound_girth10(args.m, args.n), record_N=record_N)
    print(report.to_text())
    if (args.m, args.n) == (4, 7) and record_N == COUNTEREXAMPLE_N:
        logger.info(f"✓ N={COUNTEREXAMPLE_N} record undercuts the classic bound")
    return EXIT_OK


def cmd_estimate(args: argparse.Namespace) -> int:
    print(estimate_text(expectation_estimates(args.m, args.n, args.g, args.N)))
    return EXIT_OK


def cmd_export(args: argparse.Namespace) -> int:
    if args.toy:
        P = toy_counterexample(args.toy[0], args.toy[1], args.N)
    else:
        if args.a is None or args.gamma is None:
            raise ValueError("export needs --a and --gamma (or --toy A B)")
        irs_type = _irs_type(args.type) or (IrsType.TYPE_II if args.m == 3 else IrsType.TYPE_I)
        candidate = IrsCandidate(N=args.N, a=args.a, irs_type=irs_type, m=args.m)
        spec = IrsMatrixSpec(candidate=candidate, gammas=args.gamma)
        P = build_matrix(spec.canonical(), args.m)
    data = export_alist(expand(P))
    if args.out:
        Path(args.out).write_bytes(data)
        logger.info(f"✓ alist written to {args.out}")
    else:
        sys.stdout.write(data.decode("ascii"))
    return EXIT_OK


def cmd_sievemap(args: argparse.Namespace) -> int:
    if args.stats:
        stats = sieve_stats(args.n_from, args.n_to, DEFAULT_SIEVE_CONFIGS, workers=args.workers)
        print(sieve_stats_table(stats).to_string())
        return EXIT_OK
    irs_type = _irs_type(args.type) or (IrsType.TYPE_II if args.m == 3 else IrsType.TYPE_I)
    classes = sieve_map(args.n_from, args.n_to, args.m, irs_type, workers=args.workers)
    out = Path(args.out)
    text = render_ppm(classes) if out.suffix.lower() == ".ppm" else render_pgm(classes)
    out.write_text(text, encoding="ascii")
    logger.info(f"✓ Sieve map written to {out}")
    if args.png:
        save_png(classes, Path(args.png))
    return EXIT_OK


def _add_code_args(parser: argparse.ArgumentParser, need_N: bool = True) -> None:
    parser.add_argument("--m", type=int, required=True, help="Number of rows")
    parser.add_argument("--n", type=int, required=True, help="Number of columns")
    if need_N:
        parser.add_argument("--N", type=int, required=True, help="Lifting degree")
    parser.add_argument("--girth", type=int, required=True, choices=(8, 10, 12))
    parser.add_argument("--type", choices=("I", "II"), help="Force the IRS type")
    parser.add_argument("--G", default="exhaustive", help="exhaustive, paper, or CSV of n ints")
    parser.add_argument("--budget", type=float, help="Seconds per (N, candidate); 0 = off")
    parser.add_argument("--out", help="Append found records to this corpus file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qcirs", description="Integer Ring Sieve construction of QC-LDPC codes"
    )
    parser.add_argument("--corpus", default=settings.corpus_path, help="Corpus file (jsonl)")
    parser.add_argument("--log-level", default=settings.log_level)
    parser.add_argument("--workers", type=int, default=settings.workers)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sieve", help="List IRS candidates for one N")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--type", choices=("I", "II"))
    p.add_argument("--girth", type=int, default=12, choices=(6, 8, 10, 12))
    p.set_defaults(func=cmd_sieve)

    p = sub.add_parser("search", help="Greedy search at one lifting degree")
    _add_code_args(p)
    p.add_argument("--a", type=int, help="Restrict to this generator")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("scan", help="Smallest N in a range with a code")
    _add_code_args(p, need_N=False)
    p.add_argument("--from", dest="n_from", type=int, default=4)
    p.add_argument("--to", dest="n_to", type=int, required=True)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("verify", help="Re-verify corpus records")
    p.add_argument("--m", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--girth", type=int)
    p.add_argument("--max-N", dest="max_N", type=int)
    p.add_argument("--oracle", action="store_true", help="Always run the Tanner BFS oracle")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("census", help="Cycle-class counts and tracking matrices")
    p.add_argument("m", type=int, nargs="?")
    p.add_argument("n", type=int, nargs="?")
    p.add_argument("g", type=int, nargs="?")
    p.add_argument("--tracking", action="store_true", help="Print tracking matrices")
    p.add_argument("--table", action="store_true", help="Print the m=2..5, n=2..10 census")
    p.set_defaults(func=cmd_census)

    p = sub.add_parser("bound", help="Girth-10 lower bounds on N")
    p.add_argument("m", type=int)
    p.add_argument("n", type=int)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("estimate", help="Expected number of girth-g matrices")
    p.add_argument("m", type=int)
    p.add_argument("n", type=int)
    p.add_argument("g", type=int)
    p.add_argument("N", type=int)
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("export", help="Write the expanded parity-check matrix as alist")
    p.add_argument("--m", type=int, default=3)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--a", type=int)
    p.add_argument("--type", choices=("I", "II"))
    p.add_argument("--gamma", type=_int_list, help="Multipliers, e.g. 0,1,3,24")
    p.add_argument("--toy", type=int, nargs=2, metavar=("A", "B"), help="Masked 4x4 toy matrix")
    p.add_argument("--out", help="Output path (default: stdout)")
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("sievemap", help="Render the sieve map as PGM/PPM")
    p.add_argument("--m", type=int, default=4)
    p.add_argument("--type", choices=("I", "II"))
    p.add_argument("--from", dest="n_from", type=int, default=1)
    p.add_argument("--to", dest="n_to", type=int, default=10_000)
    p.add_argument("--out", default="sieve.pgm", help=".pgm or .ppm")
    p.add_argument("--png", help="Also write a PNG rendering")
    p.add_argument("--stats", action="store_true", help="Print qualified fractions instead")
    p.set_defaults(func=cmd_sievemap)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _configure_logging(args.log_level)
    try:
        return args.func(args)
    except CorpusParseError as e:
        logger.error(f"Corpus parse error in {args.corpus}: {e}")
        print(f"error: {args.corpus}: {e}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as e:
        logger.error(f"I/O error: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (ValidationError, ValueError) as e:
        logger.error(f"Invalid input: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
