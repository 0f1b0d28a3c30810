#!/usr/bin/env python3
"""Recompute the verb acceptance matrix from live simulations.

Prints which checks fail when verb v's trace is verified against verb
w's constraints; compare with docs/acceptance_matrix.md.
"""

import sys

from mosim import SceneConfig, build_scene, builtin_lexicon, compile_event, execute, parse_text, verify_trace
from mosim.parser import EventFrame
from mosim.rng import stream_for

SENTENCES = {
    "roll": "the ball rolled",
    "slide": "the ball slid",
    "bounce": "the ball bounced",
    "fly": "the ball flew",
    "move": "the ball moved",
}

SHORT = {"contact_profile": "contact", "rotation_coupling": "rotation"}


def main(argv):
    seed = int(argv[0]) if argv else 0
    lex = builtin_lexicon()
    cfg = SceneConfig(seed=seed)
    verbs = list(SENTENCES)
    traces, scenes = {}, {}
    for verb, sentence in SENTENCES.items():
        frame = parse_text(sentence, lex)
        scene = build_scene(frame, lex, cfg)
        program = compile_event(frame, lex, cfg)
        traces[verb] = execute(program, scene.initial, stream_for(seed, "choice"), cfg.max_frames)
        scenes[verb] = scene

    width = 20
    corner = "trace v / frame w"
    print(f"{corner:>18} | " + " | ".join(f"{w:^{width}}" for w in verbs))
    for v in verbs:
        cells = []
        for w in verbs:
            frame_w = EventFrame(lex.lookup_verb(w), "ball", None)
            report = verify_trace(traces[v], frame_w, scenes[v], cfg)
            if report.overall:
                cells.append("PASS")
            else:
                cells.append(",".join(SHORT.get(c, c) for c in report.failed_checks()))
        print(f"{v:>18} | " + " | ".join(f"{c:^{width}}" for c in cells))
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
