"""Command-line interface.

Subcommands: validate, play, presets, stats, cards, serve. Exit codes are
distinct by failure class: 1 usage, 2 document parse, 3 validation,
4 runtime (IO, lookup, transport).

play runs the wire path against the virtual controller and prints one
telemetry line per tick: "<t_ms> <16 space-separated angles, 1 decimal>".
With --loss/--corrupt the link injects seeded faults and delivery runs
stop-and-wait with retries; stdout stays deterministic for a given seed.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from mojikit import __version__, kernels
from mojikit.executor import VirtualClock
from mojikit.knowledge import compute_stats, load_cards, load_patterns
from mojikit.presets import PRESET_NAMES, load_preset
from mojikit.protocol import Frame, LinkConfig, send_reliable
from mojikit.sequence import (
    DocumentParseError,
    Sequence,
    import_sequence,
    validate_sequence,
)
from mojikit.simulator import (
    FaultProfile,
    SimLink,
    VirtualController,
    format_telemetry_line,
    run_wire_playback,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PARSE = 2
EXIT_VALIDATION = 3
EXIT_RUNTIME = 4


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on bad usage; this project reserves 2 for document
    parse errors, so usage problems exit 1 instead."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _load_source(source: str) -> Sequence:
    """A preset name or a document path; parse errors propagate."""
    if source in PRESET_NAMES:
        return load_preset(source)
    path = Path(source)
    if not path.exists():
        raise FileNotFoundError(
            f"'{source}' is neither a preset name nor an existing file")
    return import_sequence(path.read_text(encoding="utf-8"))


def _cmd_validate(args: argparse.Namespace) -> int:
    text = Path(args.path).read_text(encoding="utf-8")
    try:
        seq_doc = import_sequence(text)
    except DocumentParseError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return EXIT_PARSE
    report = validate_sequence(seq_doc)
    if report.ok:
        print(f"valid: {seq_doc.name} "
              f"({seq_doc.block_count} blocks, {seq_doc.total_duration_ms} ms)")
        return EXIT_OK
    for v in report.violations:
        print(f"invalid: {v.message}", file=sys.stderr)
    return EXIT_VALIDATION


def _play_lossy(seq_doc: Sequence, tick_ms: int, n_ticks: int,
                faults: FaultProfile) -> tuple[list[str], str]:
    """Live dispatch through a faulty link; telemetry reconstructed after."""
    from mojikit.protocol import compile_sequence_to_commands

    ctrl = VirtualController()
    clock = VirtualClock()
    config = LinkConfig()
    link = SimLink(ctrl, clock, faults, config)
    delivered = 0
    commands = compile_sequence_to_commands(seq_doc)
    for i, tc in enumerate(commands):
        if clock.now_ms < tc.at_ms:
            clock.advance(tc.at_ms - clock.now_ms)
        result = send_reliable(link, Frame(i % 256, tc.command), config)
        if result.delivered:
            delivered += 1
    lines = [
        format_telemetry_line(k * tick_ms, ctrl.pose_vector_at(k * tick_ms))
        for k in range(1, n_ticks + 1)
    ]
    summary = (f"delivered {delivered}/{len(commands)} commands "
               f"(sent {link.sent}, dropped {link.dropped}, corrupted {link.corrupted})")
    return lines, summary


def _cmd_play(args: argparse.Namespace) -> int:
    seq_doc = _load_source(args.source)
    report = validate_sequence(seq_doc)
    if not report.ok:
        for v in report.violations:
            print(f"invalid: {v.message}", file=sys.stderr)
        return EXIT_VALIDATION
    if args.target != "simulator":
        if args.target.startswith("serial:"):
            from mojikit.protocol import SerialLink

            # no hardware transport; this raises with a clear message
            SerialLink(args.target.split(":", 1)[1]).exchange(b"")
        raise RuntimeError(f"unknown target {args.target!r}")

    tick_ms = args.tick_ms
    n_ticks = args.ticks
    if n_ticks is None:
        n_ticks = -(-seq_doc.total_duration_ms // tick_ms) + 1

    if args.loss > 0 or args.corrupt > 0:
        faults = FaultProfile(drop_rate=args.loss, corrupt_rate=args.corrupt,
                              rng_seed=args.seed)
        lines, summary = _play_lossy(seq_doc, tick_ms, n_ticks, faults)
        for line in lines:
            print(line)
        print(summary, file=sys.stderr)
        return EXIT_OK

    samples = run_wire_playback(seq_doc, tick_ms=tick_ms, n_ticks=n_ticks)
    for t, pose in samples[1:]:
        print(format_telemetry_line(t, pose))
    return EXIT_OK


def _cmd_presets(_args: argparse.Namespace) -> int:
    from mojikit.presets import load_presets

    for name, seq_doc in load_presets().items():
        structures = ",".join(t.structure.value for t in seq_doc.tracks)
        print(f"{name:<16} {seq_doc.block_count:>3} blocks "
              f"{seq_doc.total_duration_ms:>5} ms  [{structures}]")
    return EXIT_OK


def _cmd_stats(_args: argparse.Namespace) -> int:
    patterns = load_patterns()
    stats = compute_stats(patterns)
    titles = {
        "intent": "Interaction intent",
        "trigger": "Trigger type",
        "behavior": "Primary behavior",
        "affect": "Affect tone",
    }
    print(f"patterns: {len(patterns)}")
    for dim in ("intent", "trigger", "behavior", "affect"):
        print(f"\n{titles[dim]}")
        for row in stats[dim]:
            print(f"  {row.category:<24} {row.count:>3}  {row.percent:>5.1f}%")
    return EXIT_OK


def _cmd_cards(args: argparse.Namespace) -> int:
    cards = load_cards()
    if args.id is None:
        for c in cards:
            species = f" ({c.species})" if c.species else ""
            print(f"{c.id:<30} {c.module}{species}  {c.title}")
        return EXIT_OK
    for c in cards:
        if c.id == args.id:
            print(f"{c.title}  [{c.module}]")
            for sec in c.sections:
                print(f"\n  {sec.heading}")
                for item in sec.items:
                    print(f"    - {item}")
            return EXIT_OK
    raise KeyError(f"no card {args.id!r}")


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from mojikit.service import create_app

    app = create_app(clock=args.clock, tick_ms=args.tick_ms)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mojikit",
                     description="Author, validate and play companion-robot motion sequences.")
    parser.add_argument("--version", action="version", version=f"mojikit {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a sequence document")
    p.add_argument("path", help="document file")
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("play", help="play a preset or document against the simulator")
    p.add_argument("source", help="preset name or document file")
    p.add_argument("--ticks", type=int, default=None, help="number of telemetry lines")
    p.add_argument("--tick-ms", type=int, default=20, help="tick interval (default 20)")
    p.add_argument("--loss", type=float, default=0.0, help="frame drop probability")
    p.add_argument("--corrupt", type=float, default=0.0, help="byte corruption probability")
    p.add_argument("--seed", type=int, default=0, help="fault injection seed")
    p.add_argument("--target", default="simulator",
                   help="simulator (default) or serial:<port>")
    p.set_defaults(func=_cmd_play)

    p = sub.add_parser("presets", help="list bundled presets")
    p.set_defaults(func=_cmd_presets)

    p = sub.add_parser("stats", help="interaction pattern statistics")
    p.set_defaults(func=_cmd_stats)

    p = sub.add_parser("cards", help="list reference cards")
    p.add_argument("--id", default=None, help="print one card in full")
    p.set_defaults(func=_cmd_cards)

    p = sub.add_parser("serve", help="run the HTTP/WebSocket service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8800)
    p.add_argument("--clock", choices=("wall", "virtual"), default="wall")
    p.add_argument("--tick-ms", type=int, default=20)
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DocumentParseError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except (OSError, KeyError, RuntimeError, NotImplementedError) as e:
        message = e.args[0] if e.args else e
        print(f"error: {message}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    raise SystemExit(main())
