"""Command-line driver: ``sicvectors generate|check|replay``."""

from __future__ import annotations

import argparse
import logging
import os
import sys
import tempfile
from pathlib import Path

from . import __version__
from .dcpw import WalkError, format_walk
from .pipeline import expansion_notes, generate
from .sicstg import POLICIES, STRICT, ConnectivityError, build_graph, format_dot, format_edge_list, scc
from .state_table import StateTableError, expand, parse, validate_complete
from .vectors import VectorFormatError, check_pins, format_replay, format_report, read_csv, replay, write_csv

log = logging.getLogger("sicvectors")

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_CONNECTIVITY = 2
EXIT_MISMATCH = 3


def write_atomic(path, text: str) -> None:
    path = Path(path)
    if path.exists() and not path.is_file() or path.is_symlink():
        # devices, pipes and symlinks are written in place, never replaced
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        return
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _read_table(path):
    return parse(Path(path).read_text(encoding="utf-8"))


def cmd_generate(args) -> int:
    try:
        st = _read_table(args.input)
    except (OSError, StateTableError) as exc:
        log.error("%s: %s", args.input, exc)
        return EXIT_INPUT
    try:
        gen = generate(st, args.scc_policy)
    except ConnectivityError as exc:
        log.error("%s", exc)
        for i, comp in enumerate(exc.components):
            log.error("  component %d (%d vertices): %s", i, len(comp), " ".join(comp))
        return EXIT_CONNECTIVITY
    except WalkError as exc:
        log.error("internal error: %s", exc)
        return EXIT_MISMATCH

    if args.dump_graph:
        write_atomic(args.dump_graph, format_edge_list(gen.graph))
    if args.dot:
        write_atomic(args.dot, format_dot(gen.graph, name=gen.table.cell_name))
    if args.dump_walk:
        write_atomic(args.dump_walk, format_walk(gen.graph, gen.walk))

    csv_text = write_csv(gen.vectors)
    if args.out:
        write_atomic(args.out, csv_text)
    else:
        sys.stdout.write(csv_text)
    report = format_report(gen.coverage, gen.vectors)
    if not gen.replay.ok:
        report += "\n[self-check]\n" + format_replay(gen.replay)
    if args.report:
        write_atomic(args.report, report)
    if args.plot:
        from .plotting import plot_run
        plot_run(gen.vectors, gen.coverage, args.plot)

    log.info("%d vertices, %d edges, %d vectors (%d repeated traversals)",
             gen.coverage.vertex_count, gen.coverage.edge_count,
             gen.coverage.walk_length, gen.coverage.repetitions)
    if not gen.replay.ok or not gen.coverage.complete:
        log.error("self-check failed: %d replay mismatches, coverage complete=%s",
                  len(gen.replay.mismatches), gen.coverage.complete)
        return EXIT_MISMATCH
    return EXIT_OK


def cmd_check(args) -> int:
    try:
        st = _read_table(args.input)
    except (OSError, StateTableError) as exc:
        log.error("%s: %s", args.input, exc)
        return EXIT_INPUT
    full = expand(st)
    rep = validate_complete(full)
    g = build_graph(full)
    comps = scc(g)
    out = sys.stdout
    for note in expansion_notes(st, full):
        print(note, file=out)
    print(f"missing keys after expansion: {len(rep.missing_keys)}", file=out)
    print(f"pins: N={st.n_level} level, M={st.n_edge} edge, K={st.n_state} state", file=out)
    print(f"graph: {g.n} vertices, {len(g.edges)} edges, strong components: {comps.component_count}",
          file=out)
    return EXIT_OK if rep.complete else EXIT_INPUT


def cmd_replay(args) -> int:
    try:
        st = expand(_read_table(args.input))
        seq = read_csv(Path(args.vectors).read_text(encoding="utf-8"))
        check_pins(st, seq)
        rr = replay(st, seq)
    except (OSError, StateTableError, VectorFormatError) as exc:
        log.error("%s", exc)
        return EXIT_INPUT
    text = format_replay(rr)
    if args.report:
        write_atomic(args.report, text)
    else:
        sys.stdout.write(text)
    if not rr.ok:
        log.error("%d mismatches", len(rr.mismatches))
        return EXIT_MISMATCH
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sicvectors",
                                description="SIC test-vector generation for sequential cells from a State Table.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="count", default=0, help="more diagnostics on stderr")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="build the graph, compute the postman walk, emit vectors")
    g.add_argument("input", help="State Table file (.st)")
    g.add_argument("--out", help="vector CSV (default: stdout)")
    g.add_argument("--report", help="coverage report file")
    g.add_argument("--scc-policy", choices=POLICIES, default=STRICT)
    g.add_argument("--dump-graph", metavar="FILE", help="edge list, one 'src -> dst' per line")
    g.add_argument("--dot", metavar="FILE", help="Graphviz DOT export")
    g.add_argument("--dump-walk", metavar="FILE", help="walk as edge ids plus summary")
    g.add_argument("--plot", metavar="FILE", help="render waveform and traversal histogram (png/pdf/svg)")
    g.set_defaults(func=cmd_generate)

    c = sub.add_parser("check", help="parse, expand and report completeness")
    c.add_argument("input")
    c.set_defaults(func=cmd_check)

    r = sub.add_parser("replay", help="replay a vector CSV against a State Table")
    r.add_argument("input")
    r.add_argument("vectors")
    r.add_argument("--report", help="mismatch report file (default: stdout)")
    r.set_defaults(func=cmd_replay)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    level = logging.WARNING - 10 * min(args.verbose, 2)
    logging.basicConfig(level=level, format="%(levelname)s: %(message)s", stream=sys.stderr, force=True)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
