"""Command line front end.

Subcommands: ``analyze`` one year, ``series`` a directory of years,
``export-net`` the journal-factor graph of one year, ``synth`` a synthetic
citation series.  Exit codes: 0 success, 1 input error, 2 partial series
failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .corpus import load_year_dir, parse_citation_csv, serialize_citation_csv
from .graphs import factor_graph, write_pajek
from .pipeline import AnalysisConfig, SynthParams, analyze_series, analyze_year, synth_series

__all__ = ["main"]


def _add_analysis_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed-journal", help="seed of the citation impact environment")
    parser.add_argument("--env-fraction", type=float,
                        help="fraction of the seed's citations a journal must contribute")
    parser.add_argument("--direction", choices=["citing", "cited"], default="citing")
    parser.add_argument("--factors", type=int, default=3)
    parser.add_argument("--bins", type=int, default=10)
    parser.add_argument("--zero-diagonal", action="store_true",
                        help="drop journal self-citations")
    parser.add_argument("--use-factors", default="1,2,3",
                        help="1-based loading columns used for Q/I/R (default 1,2,3)")


def _config(args: argparse.Namespace, threshold: float = 0.0) -> AnalysisConfig:
    use = tuple(int(c) for c in args.use_factors.split(","))
    return AnalysisConfig(
        factors=args.factors,
        bins=args.bins,
        direction=args.direction,
        seed_journal=args.seed_journal,
        env_fraction=args.env_fraction,
        diag_zeroed=args.zero_diagonal,
        use_factors=use,  # type: ignore[arg-type]
        graph_threshold=threshold,
    )


def _read_matrix(path: str):
    p = Path(path)
    year = int(p.stem) if p.stem.isdigit() else None
    return parse_citation_csv(p.read_text(encoding="utf-8"), year)


def _cmd_analyze(args: argparse.Namespace) -> int:
    config = _config(args)
    matrix = _read_matrix(args.input)
    info, _, corr = analyze_year(matrix, config)
    lines = [f"# {line}" for line in config.echo_lines()]
    block = "\n".join(lines) + "\n" + info.to_text()
    for key in ("r12", "r13", "r23", "pr12_3", "pr13_2", "pr23_1"):
        value = getattr(corr, key)
        block += f"{key}={'undefined' if value is None else f'{value:.6f}'}\n"
    Path(args.out).write_text(block, encoding="utf-8")
    return 0


def _cmd_series(args: argparse.Namespace) -> int:
    config = _config(args)
    series = load_year_dir(args.dir)
    report = analyze_series(series, config)
    Path(args.out).write_text(report.to_csv(), encoding="utf-8")
    if report.partial:
        for year, message in report.failures:
            print(f"year {year} failed: {message}", file=sys.stderr)
        return 2
    return 0


def _cmd_export_net(args: argparse.Namespace) -> int:
    config = _config(args, threshold=args.threshold)
    matrix = _read_matrix(args.input)
    _, sol, _ = analyze_year(matrix, config)
    graph = factor_graph(sol, config.graph_threshold)
    for path in write_pajek(graph, args.prefix, matrix.year):
        print(path)
    return 0


def _cmd_synth(args: argparse.Namespace) -> int:
    sizes = tuple(int(s) for s in args.blocks.split(","))
    if len(sizes) != 3:
        raise ValueError(f"--blocks wants three sizes, got {args.blocks!r}")
    y0, _, y1 = args.years.partition(":")
    params = SynthParams(
        block_sizes=sizes,  # type: ignore[arg-type]
        within_rate=args.within,
        between_rate=args.between,
        merger_year=args.merger_year,
        merger_strength=args.merger_strength,
        noise_rate=args.noise,
        random_seed=args.rng_seed,
        years=(int(y0), int(y1)),
        bridge_rate=args.bridge,
    )
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for year, matrix in synth_series(params).entries:
        path = out_dir / f"{year}.csv"
        path.write_text(serialize_citation_csv(matrix), encoding="utf-8")
        print(path)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="citestruct",
        description="Structural-change indicators for journal citation networks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="analyze one year's citation matrix")
    p.add_argument("--input", required=True)
    _add_analysis_flags(p)
    p.add_argument("--out", required=True, help="report path (key=value block)")
    p.set_defaults(run=_cmd_analyze)

    p = sub.add_parser("series", help="analyze a directory of <year>.csv files")
    p.add_argument("--dir", required=True)
    _add_analysis_flags(p)
    p.add_argument("--out", required=True, help="indicator CSV path")
    p.set_defaults(run=_cmd_series)

    p = sub.add_parser("export-net", help="export the journal-factor graph as Pajek files")
    p.add_argument("--input", required=True)
    _add_analysis_flags(p)
    p.add_argument("--threshold", type=float, default=0.0,
                   help="keep loadings strictly above this value")
    p.add_argument("--prefix", required=True, help="output path prefix")
    p.set_defaults(run=_cmd_export_net)

    p = sub.add_parser("synth", help="generate a synthetic citation series")
    p.add_argument("--blocks", required=True, help="three block sizes, e.g. 20,20,20")
    p.add_argument("--within", type=float, required=True)
    p.add_argument("--between", type=float, required=True)
    p.add_argument("--merger-year", type=int, default=None)
    p.add_argument("--merger-strength", type=float, default=0.5)
    p.add_argument("--noise", type=float, default=1.0)
    p.add_argument("--bridge", type=float, default=None,
                   help="turn the third block into bridging general journals")
    p.add_argument("--years", required=True, help="span as <first>:<last>")
    p.add_argument("--rng-seed", type=int, default=0)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(run=_cmd_synth)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.run(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
