"""Command line entry point: ``g2fk build|verify|census|iso|report``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from pathlib import Path

from . import __version__
from .runner import MODELS, SUITES, RunConfig, Runner, UsageError, write_report

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def _suites(text: str) -> list[str]:
    return [s.strip() for s in text.split(",") if s.strip()]


def _common(sub: argparse.ArgumentParser, *, suites: bool = True) -> None:
    sub.add_argument("--p", type=int, required=True, help="odd prime")
    sub.add_argument("--model", choices=MODELS, help="default: chevalley at p = 3, poly otherwise")
    sub.add_argument("--cache-dir", type=Path, help="group-table cache (default $G2FK_CACHE_DIR or ~/.cache/g2fk)")
    sub.add_argument("--seed", type=int, default=0)
    if suites:
        sub.add_argument("--suite", type=_suites, default=["all"],
                         help=f"comma separated, from all,{','.join(SUITES)}")
        sub.add_argument("--jobs", type=int, default=1, help="worker threads")
        sub.add_argument("--pair-sample", type=int, default=10_000, help="literal closures in the pair-count audit")
        sub.add_argument("--timings", action="store_true", help="also write <out>.timings.json")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="g2fk", description="Exact checks on the Sylow p-subgroup of G2(p).")
    ap.add_argument("--version", action="version", version=__version__)
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="build group tables and store them in the cache")
    _common(b, suites=False)

    v = sub.add_parser("verify", help="run check suites and write a JSON report")
    _common(v)
    v.add_argument("--out", type=Path, help="report path (default: stdout)")

    c = sub.add_parser("census", help="print orbit or element-order tables as TSV")
    c.add_argument("--subsets", action="store_true", help="orbits of F_7^x on nonempty subsets of {1..6} (default)")
    c.add_argument("--orders", action="store_true", help="element-order census of S (needs --p)")
    c.add_argument("--p", type=int)
    c.add_argument("--model", choices=("poly", "chevalley"))
    c.add_argument("--cache-dir", type=Path)
    c.add_argument("--out", type=Path, help="TSV path (default: stdout)")

    i = sub.add_parser("iso", help="check the root map between the two models")
    _common(i, suites=False)
    i.add_argument("--out", type=Path)

    r = sub.add_parser("report", help="run suites (or load a report) and render TSV tables and figures")
    _common(r)
    r.add_argument("--out", type=Path, required=True, help="output directory")
    r.add_argument("--from", dest="source", type=Path, help="render an existing JSON report instead of running")
    return ap


def _config(args, suites=None, output=None) -> RunConfig:
    return RunConfig(
        p=args.p, model=args.model, suites=suites or getattr(args, "suite", ["all"]),
        jobs=getattr(args, "jobs", 1), cache_dir=args.cache_dir, output=output, seed=args.seed,
        pair_sample=getattr(args, "pair_sample", 10_000),
    )


def _emit(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(text, encoding="utf-8")


def _summary_line(report) -> str:
    s = report.summary
    return f"p={report.config.p} model={report.config.model}: " + " ".join(f"{k}={v}" for k, v in s.items())


def cmd_build(args) -> int:
    from .cache import cache_path
    from .tables import TableStore, default_cache_dir

    cfg = _config(args, suites=["chevalley"])
    cache = cfg.cache_dir or default_cache_dir()
    store = TableStore(cache, seed=cfg.seed)
    for tag in cfg.model_tags:
        start = time.perf_counter()
        table = store.get(cfg.p, tag)
        path = cache_path(cache, cfg.p, tag)
        secs = time.perf_counter() - start
        print(f"{cfg.p}\t{tag}\t{table.n}\t{path}\t{path.stat().st_size}\t{secs:.2f}s")
    return EXIT_OK


def cmd_verify(args) -> int:
    cfg = _config(args, output=args.out)
    report = Runner(cfg).run()
    text = write_report(report, args.out, timings=args.timings)
    if args.out is None:
        sys.stdout.write(text)
    print(_summary_line(report), file=sys.stderr)
    return report.exit_code


def cmd_census(args) -> int:
    from . import groups as G
    from .structure import labelled_census

    lines = []
    if args.orders:
        if args.p is None:
            raise UsageError("--orders needs --p")
        cfg = RunConfig(p=args.p, model=args.model, suites=["chevalley"], cache_dir=args.cache_dir)
        table = Runner(cfg).table(cfg.model_tags[0])
        lines.append("order\tcount")
        lines += [f"{o}\t{n}" for o, n in sorted(G.order_census(table.whole()).items())]
    if args.subsets or not args.orders:
        if lines:
            lines.append("")
        lines.append("orbit\tprinted\tleast\tlength")
        for name, rep, least, length in labelled_census():
            lines.append(f"{name}\t{_subset(rep)}\t{_subset(least)}\t{length}")
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def _subset(s) -> str:
    return "{" + ",".join(map(str, s)) + "}" if s else ""


def cmd_iso(args) -> int:
    cfg = _config(args, suites=["iso"], output=args.out)
    report = Runner(cfg).run()
    _emit(report.to_json(), args.out)
    print(_summary_line(report), file=sys.stderr)
    return report.exit_code


def cmd_report(args) -> int:
    from . import groups as G
    from . import report as R
    from .structure import labelled_census

    out = args.out
    out.mkdir(parents=True, exist_ok=True)
    if args.source is not None:
        data = json.loads(args.source.read_text(encoding="utf-8"))
        code = EXIT_FAIL if data["summary"]["fail"] else EXIT_OK
        runner = None
    else:
        cfg = _config(args, output=out / "report.json")
        runner = Runner(cfg)
        report = runner.run()
        write_report(report, out / "report.json", timings=args.timings)
        data = report.to_dict()
        code = report.exit_code
        print(_summary_line(report), file=sys.stderr)
    R.checks_tsv(data, out / "checks.tsv")
    R.status_figure(data, out / "status.png")
    rows = labelled_census()
    R.write_tsv(out / "subset_orbits.tsv", ["orbit", "printed", "least", "length"],
                [(n, _subset(a), _subset(b), k) for n, a, b, k in rows])
    R.subset_orbit_figure(rows, out / "subset_orbits.png")
    if runner is None:
        runner = Runner(RunConfig(p=data["p"], model=data["model"], suites=["chevalley"], cache_dir=args.cache_dir))
    tag = runner.config.model_tags[0]
    census = G.order_census(runner.table(tag).whole())
    R.write_tsv(out / "element_orders.tsv", ["order", "count"], R.order_census_rows(census))
    R.order_figure(census, runner.config.p, tag, out / "element_orders.png")
    return code


COMMANDS = {"build": cmd_build, "verify": cmd_verify, "census": cmd_census, "iso": cmd_iso, "report": cmd_report}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"g2fk: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
