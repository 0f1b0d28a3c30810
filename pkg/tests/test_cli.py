import json

from mosim.cli import run


def simulate(tmp_path, *extra, sentence="the ball rolled to the wall"):
    out = tmp_path / "trace.jsonl"
    code = run(["simulate", sentence, "--out", str(out), *extra])
    return code, out


def test_simulate_verify_running_example(tmp_path, capsys):
    code, out = simulate(tmp_path, "--seed", "42", "--verify")
    assert code == 0
    assert out.exists()
    stdout = capsys.readouterr().out
    assert "frames: 264" in stdout
    report = json.loads(stdout[stdout.index("{"):])
    assert report["overall"] == "pass"


def test_simulate_reruns_byte_identical(tmp_path):
    _, a = simulate(tmp_path, "--seed", "42")
    b = tmp_path / "again.jsonl"
    run(["simulate", "the ball rolled to the wall", "--seed", "42", "--out", str(b)])
    assert a.read_bytes() == b.read_bytes()


def test_simulate_jsonl_and_csv_agree(tmp_path):
    _, a = simulate(tmp_path, "--seed", "7")
    c = tmp_path / "trace.csv"
    run(["simulate", "the ball rolled to the wall", "--seed", "7",
         "--format", "csv", "--out", str(c)])
    from mosim import read_trace

    da, dc = read_trace(a), read_trace(c)
    for sa, sc in zip(da.trace.states, dc.trace.states):
        assert sa.time == sc.time
        for bid in sa.bodies:
            assert sa.body(bid).position == sc.body(bid).position
            assert sa.body(bid).rotation == sc.body(bid).rotation


def test_simulate_immobile_theme_exits_2(tmp_path, capsys):
    code, _ = simulate(tmp_path, sentence="the wall rolled")
    assert code == 2
    assert "ImmobileThemeError" in capsys.readouterr().err


def test_simulate_unknown_word_exits_2(tmp_path, capsys):
    code, _ = simulate(tmp_path, sentence="the zorp rolled")
    assert code == 2
    assert "UnknownWordError" in capsys.readouterr().err


def test_simulate_grammar_error_exits_2(tmp_path, capsys):
    code, _ = simulate(tmp_path, sentence="the ball rolled the wall")
    assert code == 2
    assert "GrammarError" in capsys.readouterr().err


def test_simulate_verify_failure_exits_1(tmp_path):
    # a custom slide lexicon whose profile demands rotation it cannot have
    lexfile = tmp_path / "lex.json"
    lexfile.write_text(json.dumps({
        "verbs": [{"lemma": "slide", "past_forms": ["slid"], "class": "manner",
                   "tick_action": "slide",
                   "profile": {"floor_contact": "always_EC",
                               "rotation_coupling": "arc_length"},
                   "allowed_preps": ["to"]}]
    }))
    out = tmp_path / "t.jsonl"
    code = run(["simulate", "the ball slid to the wall", "--out", str(out),
                "--lexicon", str(lexfile), "--verify"])
    assert code == 1


def test_parse_dumps_frame(capsys):
    assert run(["parse", "the ball slid"]) == 0
    frame = json.loads(capsys.readouterr().out)
    assert frame == {"verb": "slide", "theme": "ball"}
    assert run(["parse", "the bird flew to the wall"]) == 0
    frame = json.loads(capsys.readouterr().out)
    assert frame["path"] == {"prep": "to", "ground": "wall"}


def test_parse_error_exit_2(capsys):
    assert run(["parse", "ball the rolled"]) == 2
    assert "GrammarError" in capsys.readouterr().err


def test_check_own_sentence_passes(tmp_path):
    _, out = simulate(tmp_path, "--seed", "42")
    assert run(["check", "--trace", str(out),
                "--sentence", "the ball rolled to the wall"]) == 0


def test_check_wrong_manner_fails(tmp_path):
    _, out = simulate(tmp_path, "--seed", "42")
    assert run(["check", "--trace", str(out),
                "--sentence", "the ball slid to the wall"]) == 1


def test_check_truncated_file_exit_2(tmp_path, capsys):
    _, out = simulate(tmp_path, "--seed", "42")
    lines = out.read_text().splitlines()
    out.write_text("\n".join(lines[:50]))
    assert run(["check", "--trace", str(out),
                "--sentence", "the ball rolled to the wall"]) == 2
    assert "TraceFormatError" in capsys.readouterr().err


def test_enumerate_choice(tmp_path, capsys):
    prog = tmp_path / "p.txt"
    prog.write_text("(choice (tick roll) (tick slide))")
    assert run(["enumerate", "--program", str(prog), "--bound", "10"]) == 0
    out = capsys.readouterr().out
    assert "traces: 2" in out


def test_enumerate_star(tmp_path, capsys):
    prog = tmp_path / "p.txt"
    prog.write_text("(star (tick roll) 2)")
    assert run(["enumerate", "--program", str(prog), "--bound", "10"]) == 0
    assert "traces: 3" in capsys.readouterr().out


def test_enumerate_explosion_exit_3(tmp_path, capsys):
    prog = tmp_path / "p.txt"
    prog.write_text("(star (choice (tick roll) (tick slide)) 30)")
    assert run(["enumerate", "--program", str(prog), "--bound", "30",
                "--cap", "5000"]) == 3
    assert "ExplosionGuard" in capsys.readouterr().err


def test_enumerate_parse_error_exit_2(tmp_path, capsys):
    prog = tmp_path / "p.txt"
    prog.write_text("(warp (tick roll))")
    assert run(["enumerate", "--program", str(prog)]) == 2
    assert "ProgramTextError" in capsys.readouterr().err


def test_config_file_and_flag_precedence(tmp_path):
    cfgfile = tmp_path / "cfg.json"
    cfgfile.write_text(json.dumps({"seed": 5, "min_bare_frames": 10, "max_bare_frames": 10}))
    out = tmp_path / "a.jsonl"
    assert run(["simulate", "the ball rolled", "--config", str(cfgfile),
                "--out", str(out)]) == 0
    header = json.loads(out.read_text().splitlines()[0])
    assert header["cfg"]["seed"] == 5
    assert header["cfg"]["min_bare_frames"] == 10
    # explicit flag wins over the file
    assert run(["simulate", "the ball rolled", "--config", str(cfgfile),
                "--seed", "9", "--out", str(out)]) == 0
    header = json.loads(out.read_text().splitlines()[0])
    assert header["cfg"]["seed"] == 9


def test_env_var_config(tmp_path, monkeypatch):
    cfgfile = tmp_path / "cfg.json"
    cfgfile.write_text(json.dumps({"seed": 11}))
    monkeypatch.setenv("MOSIM_CONFIG", str(cfgfile))
    out = tmp_path / "t.jsonl"
    assert run(["simulate", "the ball rolled", "--out", str(out)]) == 0
    header = json.loads(out.read_text().splitlines()[0])
    assert header["cfg"]["seed"] == 11


def test_env_var_lexicon(tmp_path, monkeypatch, capsys):
    lexfile = tmp_path / "lex.json"
    lexfile.write_text(json.dumps({
        "nouns": [{"lemma": "puck", "shape": "sphere",
                   "dimensions": {"radius": 0.05}, "mobile": True}]
    }))
    monkeypatch.setenv("MOSIM_LEXICON", str(lexfile))
    assert run(["parse", "the puck slid"]) == 0
    assert json.loads(capsys.readouterr().out)["theme"] == "puck"


def test_dt_and_speed_flags_change_the_kinematics(tmp_path):
    out = tmp_path / "fast.jsonl"
    # 2 m/s at 10 Hz: the 4.4 m gap closes in 22 ticks instead of 264
    assert run(["simulate", "the ball rolled to the wall", "--dt", "0.1",
                "--speed", "2.0", "--out", str(out)]) == 0
    header = json.loads(out.read_text().splitlines()[0])
    assert header["cfg"]["dt"] == 0.1
    assert header["cfg"]["speed"] == 2.0
    assert header["frames"] == 23  # 22 ticks + initial state


def test_check_mismatched_scene_exits_2(tmp_path, capsys):
    _, out = simulate(tmp_path, "--seed", "42")
    assert run(["check", "--trace", str(out), "--sentence", "the bird flew"]) == 2
    assert "TraceSceneMismatch" in capsys.readouterr().err


def test_no_successful_run_exits_3(tmp_path, capsys):
    # goal too far for the frame budget: the while-loop exhausts and fails
    assert run(["simulate", "the ball rolled to the wall", "--max-frames", "50",
                "--out", str(tmp_path / "x.jsonl")]) == 3
    assert "NoSuccessfulRun" in capsys.readouterr().err
