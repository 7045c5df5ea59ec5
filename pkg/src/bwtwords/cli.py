"""Command-line front end: ``analyze``, ``verify``, ``stats`` and ``lookup``."""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from dataclasses import dataclass

from . import oracle
from .engine import analyze
from .kernel import analyze_fast
from .report import order_rows, rows_from, write_tsv
from .scoring import MODES, ThresholdError, Thresholds, default_max_len, estimate_model
from .text_index import InputError, Text, build_index, ingest
from .traversal import frame_bound
from .verify import verify_text

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_VERIFY = 0, 1, 2, 3
DEFAULT_Z = 3.0

log = logging.getLogger("bwtwords")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass
class RunConfig:
    input: str
    format: str = "auto"
    mode: str = "both"
    model: str = "empirical"
    model_file: str | None = None
    z_min: float | None = None
    z_max: float | None = None
    max_len: int | None = None
    len_slack: int = 2
    precision: int = 6
    verify: bool = False
    stats: str | None = None
    output: str | None = None
    economy: bool = False
    engine: str = "kernel"
    sample_every: int = 1000

    def thresholds(self, text: Text) -> Thresholds:
        zmin, zmax = self.z_min, self.z_max
        if self.mode in ("over", "both") and zmin is None:
            zmin = DEFAULT_Z
        if self.mode in ("under", "both") and zmax is None:
            zmax = -DEFAULT_Z
        max_len = self.max_len
        if max_len is None:
            max_len = default_max_len(text.sigma, text.n - 1, self.len_slack)
        return Thresholds(self.mode, zmin=zmin, zmax=zmax, max_len=max_len)


def _read(path: str) -> bytes:
    if path == "-":
        return sys.stdin.buffer.read()
    with open(path, "rb") as fh:
        return fh.read()


def _load(cfg: RunConfig):
    text = ingest(_read(cfg.input), cfg.format)
    source = "file" if cfg.model_file else cfg.model
    model = estimate_model(text, source, cfg.model_file)
    return text, model


def run_analysis(cfg: RunConfig, text: Text, model, thresholds: Thresholds):
    index = build_index(text)
    run = analyze_fast if cfg.engine == "kernel" else analyze
    return index, run(index, model, thresholds, economy=cfg.economy, sample_every=cfg.sample_every)


def stats_lines(result, text: Text) -> list[dict]:
    st = result.stats
    n = text.n
    budget = n * math.log2(max(text.sigma, 2))
    lines = [{"type": "sample", **s} for s in st.samples]
    lines += [{"type": "depth_reads", "depth": d, "reads": k} for d, k in sorted(st.depth_reads.items())]
    lines.append({
        "type": "summary",
        "n": n,
        "sigma": text.sigma,
        "nodes": st.nodes,
        "max_frames": st.max_frames,
        "frame_bound": frame_bound(text.sigma, n),
        "max_stack_bits": st.max_stack_bits,
        "avg_stack_bits": st.avg_stack_bits,
        "n_log_sigma_bits": budget,
        "avg_stack_fraction": st.avg_stack_bits / budget,
        "left_extensions": st.left_extensions,
        "weiner_links": st.weiner_links,
        **result.counters.as_dict(),
    })
    return lines


def _write_stats(path: str, lines: list[dict]) -> None:
    out = sys.stdout if path == "-" else open(path, "w")
    try:
        for line in lines:
            out.write(json.dumps(line) + "\n")
    finally:
        if out is not sys.stdout:
            out.close()


def _verify(text: Text, model) -> int:
    if text.n > oracle.MAX_ORACLE_N:
        raise UsageError(f"verify needs n <= {oracle.MAX_ORACLE_N}, got {text.n}")
    report = verify_text(text, build_index(text), model)
    for msg in report.mismatches:
        print(f"MISMATCH {msg}", file=sys.stderr)
    print(f"verify: {report.checked_strings} strings, {report.checked_borders} borders, "
          f"{report.checked_moments} moments, {len(report.mismatches)} mismatches", file=sys.stderr)
    return EXIT_OK if report.ok else EXIT_VERIFY


def cmd_analyze(cfg: RunConfig) -> int:
    text, model = _load(cfg)
    th = cfg.thresholds(text)
    if cfg.verify:
        status = _verify(text, model)
        if status != EXIT_OK:
            return status
    log.info("scoring length N=%d, sigma=%d, model=%s, max_len=%s", model.N, text.sigma, model.source, th.max_len)
    _, result = run_analysis(cfg, text, model, th)
    rows = order_rows(rows_from(result.records), cfg.mode)
    out = sys.stdout if cfg.output in (None, "-") else open(cfg.output, "w")
    try:
        write_tsv(out, rows, text, cfg.precision)
    finally:
        if out is not sys.stdout:
            out.close()
    if result.counters.unscored:
        log.info("%d records left unscored", result.counters.unscored)
    if cfg.stats:
        _write_stats(cfg.stats, stats_lines(result, text))
    return EXIT_OK


def cmd_verify(cfg: RunConfig) -> int:
    text, model = _load(cfg)
    return _verify(text, model)


def cmd_stats(cfg: RunConfig) -> int:
    text, model = _load(cfg)
    _, result = run_analysis(cfg, text, model, cfg.thresholds(text))
    _write_stats(cfg.stats or "-", stats_lines(result, text))
    return EXIT_OK


def cmd_lookup(cfg: RunConfig, pattern: str) -> int:
    text = ingest(_read(cfg.input), cfg.format)
    index = build_index(text)
    codes = text.encode(pattern)
    hit = None if codes is None else index.backward_search(codes)
    if hit is None:
        print(f"{pattern}\tabsent\t0")
    else:
        sp, ep = hit
        print(f"{pattern}\t{sp}\t{ep}\t{ep - sp + 1}")
    return EXIT_OK


def _precision(s: str) -> int:
    p = int(s)
    if not 1 <= p <= 17:
        raise argparse.ArgumentTypeError("precision must be in 1..17")
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="bwtwords", description="Over- and under-represented substrings via BWT traversal.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, scoring=True):
        p.add_argument("input", help="text file, or - for stdin")
        p.add_argument("--format", choices=("auto", "plain", "fasta"), default="auto")
        if not scoring:
            return
        p.add_argument("--mode", choices=MODES, default="both")
        p.add_argument("--model", choices=("empirical", "uniform"), default="empirical")
        p.add_argument("--model-file", help="JSON object mapping characters to probabilities")
        p.add_argument("--z-min", type=float, help=f"over-representation cutoff (default {DEFAULT_Z})")
        p.add_argument("--z-max", type=float, help=f"under-representation cutoff (default -{DEFAULT_Z})")
        p.add_argument("--max-len", type=int, help="longest reported word (default ceil(log_sigma N) + slack)")
        p.add_argument("--len-slack", type=int, default=2)
        p.add_argument("--economy", "--fast-path", dest="economy", action="store_true",
                       help="keep border payloads only around maximal repeats")
        p.add_argument("--engine", choices=("kernel", "python"), default="kernel")
        p.add_argument("--sample-every", type=int, default=1000, help="telemetry sampling period in nodes")

    p = sub.add_parser("analyze", help="score and report substrings as TSV")
    common(p)
    p.add_argument("--precision", type=_precision, default=6)
    p.add_argument("--verify", action="store_true", help="check against brute-force oracles first")
    p.add_argument("--stats", metavar="PATH", help="also write JSON-lines telemetry (- for stdout)")
    p.add_argument("--output", "-o", metavar="PATH")

    p = sub.add_parser("verify", help="compare against brute-force oracles (small inputs)")
    common(p)

    p = sub.add_parser("stats", help="JSON-lines telemetry of one traversal")
    common(p)
    p.add_argument("--stats", metavar="PATH", help="output path (default stdout)")

    p = sub.add_parser("lookup", help="suffix-array interval of a literal pattern")
    common(p, scoring=False)
    p.add_argument("pattern")
    return parser


def _config(args) -> RunConfig:
    fields = RunConfig.__dataclass_fields__
    return RunConfig(**{k: v for k, v in vars(args).items() if k in fields})


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    cfg = _config(args)
    try:
        if args.command == "analyze":
            return cmd_analyze(cfg)
        if args.command == "verify":
            return cmd_verify(cfg)
        if args.command == "stats":
            return cmd_stats(cfg)
        return cmd_lookup(cfg, args.pattern)
    except (ThresholdError, UsageError) as exc:
        print(f"bwtwords: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, InputError) as exc:
        print(f"bwtwords: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        # bad model files and economy+all land here
        print(f"bwtwords: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
