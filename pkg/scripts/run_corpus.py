#!/usr/bin/env python3
"""Simulate and verify the whole sentence corpus across seeds.

Usage: python scripts/run_corpus.py [seed ...]   (default seeds: 0 1 42)
"""

import sys

from mosim import SceneConfig, build_scene, builtin_lexicon, compile_event, execute, parse_text, verify_trace
from mosim.rng import stream_for

CORPUS = [
    "the ball rolled",
    "the ball rolled to the wall",
    "the ball rolled from the wall",
    "the ball slid",
    "the ball slid to the wall",
    "the ball bounced",
    "the bird flew",
    "the bird flew to the wall",
    "the ball moved",
    "the ball moved to the wall",
    "the ball arrived at the wall",
    "the ball left",
]


def main(argv):
    seeds = [int(a) for a in argv] or [0, 1, 42]
    lex = builtin_lexicon()
    failures = 0
    print(f"{'seed':>5}  {'sentence':<32} {'ticks':>6} {'path m':>8} {'rot rad':>8}  verdict")
    for seed in seeds:
        for sentence in CORPUS:
            cfg = SceneConfig(seed=seed)
            frame = parse_text(sentence, lex)
            scene = build_scene(frame, lex, cfg)
            program = compile_event(frame, lex, cfg)
            trace = execute(program, scene.initial, stream_for(seed, "choice"), cfg.max_frames)
            report = verify_trace(trace, frame, scene, cfg)
            verdict = "pass" if report.overall else "FAIL " + ",".join(report.failed_checks())
            m = report.metrics
            print(f"{seed:>5}  {sentence:<32} {trace.tick_count:>6} "
                  f"{m.path_length:>8.3f} {m.net_rotation:>8.3f}  {verdict}")
            failures += 0 if report.overall else 1
    print(f"\n{len(seeds) * len(CORPUS)} runs, {failures} failures")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
