"""Command-line front end: parse, simulate, check, enumerate.

Exit codes: 0 success (and verification pass where requested), 1 a
verification ran and failed, 2 bad input (language, lexicon, config,
scene or file format), 3 the search gave out (no successful run, or
enumeration hit its node cap).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .config import SceneConfig, load_config
from .programs import compile_event, enumerate_traces, execute
from .errors import ExplosionGuard, MosimError, NoSuccessfulRun
from .lexicon import Lexicon, builtin_lexicon, load_lexicon
from .parser import parse_text
from .progtext import parse_program
from .rng import stream_for
from .scene import build_scene, probe_scene
from .tracefile import FORMATS, read_trace, write_trace
from .verify import VerificationReport, trace_metrics, verify_trace

ENV_LEXICON = "MOSIM_LEXICON"
ENV_CONFIG = "MOSIM_CONFIG"

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_INPUT = 2
EXIT_SEARCH = 3


def _err(message: str) -> None:
    print(message, file=sys.stderr)


def _load_lexicon(path: str | None) -> Lexicon:
    path = path or os.environ.get(ENV_LEXICON)
    if not path:
        return builtin_lexicon()
    return load_lexicon(Path(path).read_text(encoding="utf-8"))


def _load_config(args) -> SceneConfig:
    path = getattr(args, "config", None) or os.environ.get(ENV_CONFIG)
    cfg = SceneConfig()
    if path:
        cfg = load_config(Path(path).read_text(encoding="utf-8"), cfg)
    overrides = {}
    for flag, field in (
        ("seed", "seed"),
        ("dt", "dt"),
        ("speed", "speed"),
        ("max_frames", "max_frames"),
    ):
        value = getattr(args, flag, None)
        if value is not None:
            overrides[field] = value
    if overrides:
        cfg = cfg.replace(**overrides)
    return cfg


def _print_report(report: VerificationReport) -> None:
    print(json.dumps(report.to_dict(), indent=2))


def cmd_simulate(args) -> int:
    try:
        lex = _load_lexicon(args.lexicon)
        cfg = _load_config(args)
        frame = parse_text(args.sentence, lex)
        program = compile_event(frame, lex, cfg)
        scene = build_scene(frame, lex, cfg)
    except OSError as exc:
        _err(f"IOError: {exc}")
        return EXIT_INPUT
    except MosimError as exc:
        _err(f"{type(exc).__name__}: {exc}")
        return EXIT_INPUT

    try:
        trace = execute(program, scene.initial, stream_for(cfg.seed, "choice"), cfg.max_frames)
    except NoSuccessfulRun as exc:
        _err(f"NoSuccessfulRun: {exc}")
        return EXIT_SEARCH

    out_path = args.out or f"trace.{args.format}"
    try:
        write_trace(out_path, args.format, args.sentence, trace, scene, cfg)
    except OSError as exc:
        _err(f"IOError: {exc}")
        return EXIT_INPUT

    metrics = trace_metrics(trace, scene.theme_id)
    theme = trace.final.body(scene.theme_id)
    contacts = " ".join(f"{other}={rel.value}" for other, rel in sorted(theme.contacts.items()))
    print(f"frames: {trace.tick_count}")
    print(f"path_length: {metrics.path_length:.6g}")
    print(f"net_rotation: {metrics.net_rotation:.6g}")
    print(f"final_contacts: {contacts}")
    print(f"trace: {out_path}")

    if args.verify:
        report = verify_trace(trace, frame, scene, cfg)
        _print_report(report)
        return EXIT_OK if report.overall else EXIT_FAIL
    return EXIT_OK


def cmd_parse(args) -> int:
    try:
        lex = _load_lexicon(args.lexicon)
        frame = parse_text(args.sentence, lex)
    except OSError as exc:
        _err(f"IOError: {exc}")
        return EXIT_INPUT
    except MosimError as exc:
        _err(f"{type(exc).__name__}: {exc}")
        return EXIT_INPUT
    print(json.dumps(frame.to_dict(), indent=2))
    return EXIT_OK


def cmd_check(args) -> int:
    try:
        doc = read_trace(args.trace)
        lex = _load_lexicon(args.lexicon)
        frame = parse_text(args.sentence, lex)
        report = verify_trace(doc.trace, frame, doc.scene, doc.cfg)
    except OSError as exc:
        _err(f"IOError: {exc}")
        return EXIT_INPUT
    except MosimError as exc:
        _err(f"{type(exc).__name__}: {exc}")
        return EXIT_INPUT
    _print_report(report)
    return EXIT_OK if report.overall else EXIT_FAIL


def cmd_enumerate(args) -> int:
    try:
        text = Path(args.program).read_text(encoding="utf-8")
        program = parse_program(text)
        lex = _load_lexicon(args.lexicon)
        cfg = SceneConfig()
        scene = probe_scene(cfg, lex, args.theme)
    except OSError as exc:
        _err(f"IOError: {exc}")
        return EXIT_INPUT
    except MosimError as exc:
        _err(f"{type(exc).__name__}: {exc}")
        return EXIT_INPUT
    try:
        traces = enumerate_traces(program, scene.initial, args.bound, node_cap=args.cap)
    except ExplosionGuard as exc:
        _err(f"ExplosionGuard: {exc}")
        return EXIT_SEARCH
    except MosimError as exc:
        _err(f"{type(exc).__name__}: {exc}")
        return EXIT_INPUT
    print(f"traces: {len(traces)}")
    for i, trace in enumerate(traces, start=1):
        labels = " ".join(trace.labels) if trace.labels else "(empty)"
        print(f"trace {i}: {trace.tick_count} tick(s): {labels}")
    return EXIT_OK


def build_arg_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="mosim",
        description="Simulate controlled-English motion sentences and model-check the traces.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="parse, compile, simulate and serialize a sentence")
    sim.add_argument("sentence")
    sim.add_argument("--seed", type=int, default=None, help="base seed (default 0)")
    sim.add_argument("--dt", type=float, default=None)
    sim.add_argument("--speed", type=float, default=None)
    sim.add_argument("--out", default=None, help="trace file path (default trace.<format>)")
    sim.add_argument("--format", choices=FORMATS, default="jsonl")
    sim.add_argument("--max-frames", dest="max_frames", type=int, default=None)
    sim.add_argument("--lexicon", default=None)
    sim.add_argument("--config", default=None)
    sim.add_argument("--verify", action="store_true")
    sim.set_defaults(func=cmd_simulate)

    par = sub.add_parser("parse", help="print the event frame for a sentence")
    par.add_argument("sentence")
    par.add_argument("--lexicon", default=None)
    par.set_defaults(func=cmd_parse)

    chk = sub.add_parser("check", help="verify a stored trace against a sentence")
    chk.add_argument("--trace", required=True)
    chk.add_argument("--sentence", required=True)
    chk.add_argument("--lexicon", default=None)
    chk.set_defaults(func=cmd_check)

    enum = sub.add_parser("enumerate", help="list all runs of a textual program")
    enum.add_argument("--program", required=True, help="path to a program in the text form")
    enum.add_argument("--bound", type=int, default=100, help="tick budget per run")
    enum.add_argument("--cap", type=int, default=10**6, help="search node cap")
    enum.add_argument("--theme", default="ball", help="mobile body of the probe scene")
    enum.add_argument("--lexicon", default=None)
    enum.set_defaults(func=cmd_enumerate)
    return ap


def run(argv: list[str]) -> int:
    # seed defaults to 0 through SceneConfig; flags override config-file values
    args = build_arg_parser().parse_args(argv)
    return args.func(args)


def main() -> None:
    sys.exit(run(sys.argv[1:]))
