import json

import pytest

from prostd.atlas import extension_from_json
from prostd.cli import main
from prostd.fgl import builtin, law_from_json
from prostd.rings import padic
from prostd.stdgrp import StandardGroup


@pytest.fixture()
def samples(tmp_path):
    assert main(["sample-data", str(tmp_path)]) == 0
    return tmp_path


def run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


# -- exit codes -----------------------------------------------------------------------


def test_check_pass_and_fail(samples, capsys):
    code, out, err = run(capsys, ["fgl", "check", "additive"])
    assert code == 0 and "law: PASS" in out and err == ""
    code, out, err = run(capsys, ["fgl", "check", str(samples / "broken.json")])
    assert code == 1 and "law: FAIL" in out
    assert "unit-right: FAIL (component 1: X1^2)" in out


def test_missing_file_is_usage_error(capsys):
    code, out, err = run(capsys, ["fgl", "check", "no_such_law.json"])
    assert code == 2 and "FileNotFoundError" in err and out == ""


def test_invalid_json_is_usage_error(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, out, err = run(capsys, ["fgl", "check", str(bad)])
    assert code == 2 and "JSONDecodeError" in err


def test_flag_conflicts_are_usage_errors(samples, capsys):
    code, out, err = run(capsys, ["fgl", "transport", "multiplicative"])
    assert code == 2 and "usage:" in err
    code, out, err = run(capsys, ["group", "mul", "--x", "2", "--y", "2",
                                  "--law", "additive", "--m", "1"])
    assert code == 2 and "--Dt" in err
    # --level picks exhaustive mode and --samples picks sampled mode; giving
    # both must be rejected up front, not resolved by silently dropping one
    with pytest.raises(SystemExit) as ei:
        main(["atlas", "validate", "--extension", str(samples / "dirprod.json"),
              "--level", "2", "--samples", "10"])
    assert ei.value.code == 2
    assert "not allowed with" in capsys.readouterr().err


def test_domain_errors_exit_one(samples, capsys):
    code, out, err = run(capsys, ["word", "eval", "--word", "x1]", "--law",
                                  "additive", "--args", "2"])
    assert code == 1 and "WordSyntaxError" in err
    code, out, err = run(capsys, ["group", "inv", "--x", "1", "--law", "additive"])
    assert code == 1 and "MaximalIdealError" in err


def test_unknown_command_exits_two(capsys):
    with pytest.raises(SystemExit) as ei:
        main(["fgl", "frobenius"])
    assert ei.value.code == 2


# -- determinism -----------------------------------------------------------------------


def test_json_output_is_deterministic(samples, capsys):
    argv = ["fgl", "inverse", "multiplicative", "--K", "6", "--D", "6",
            "--format", "json"]
    first = run(capsys, argv)
    second = run(capsys, argv)
    assert first == second and first[0] == 0
    payload = json.loads(first[1])
    assert law_from_json(payload).F == builtin("multiplicative", padic(2, 6), 6).F


def test_sample_data_is_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(["sample-data", str(a)]) == 0
    assert main(["sample-data", str(b)]) == 0
    capsys.readouterr()
    names = sorted(p.name for p in a.iterdir())
    assert names == ["additive.json", "broken.json", "dirprod.json",
                     "heisenberg.json", "heisenberg_group.json",
                     "inversion_p2.json", "inversion_p3.json",
                     "mult_deformed.json"]
    for name in names:
        assert (a / name).read_bytes() == (b / name).read_bytes()


def test_sample_files_reload(samples):
    for name in ["additive.json", "heisenberg.json", "mult_deformed.json"]:
        law_from_json(json.loads((samples / name).read_text()))
    for name in ["inversion_p2.json", "inversion_p3.json", "dirprod.json"]:
        extension_from_json(json.loads((samples / name).read_text()))
    with pytest.raises(ValueError):
        law_from_json(json.loads((samples / "broken.json").read_text()))


# -- command output -----------------------------------------------------------------------


def test_group_arithmetic_matches_library(samples, capsys):
    base = ["--group", str(samples / "heisenberg_group.json")]
    code, out, err = run(capsys, ["group", "mul", "--x", "2,4,8",
                                  "--y", "6,2,4"] + base)
    G = StandardGroup(builtin("heisenberg", padic(2, 5), 5), 1)
    expect = G.mul(G.element(["2", "4", "8"]), G.element(["6", "2", "4"]))
    assert code == 0 and out.strip() == str(expect)
    code, out, err = run(capsys, ["group", "pow", "--x", "2,4,8", "--n", "-3"] + base)
    assert code == 0
    assert out.strip() == str(G.power(G.element(["2", "4", "8"]), -3))


def test_group_quotient_listing(capsys):
    code, out, err = run(capsys, ["group", "quotient", "--M", "2", "--law",
                                  "additive", "--p", "3", "--K", "3"])
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "size: 3"
    assert lines[1:] == ["(0)", "(3)", "(6)"]


def test_word_commands(samples, capsys):
    code, out, err = run(capsys, ["word", "series", "--word", "[x1, x2]",
                                  "--law", "heisenberg", "--K", "5", "--D", "5"])
    assert code == 0
    assert out.splitlines()[0] == "W1 = 0"
    assert "X1*X5" in out and "X2*X4" in out
    code, out, err = run(capsys, ["word", "image", "--word", "x1^2", "--M", "3",
                                  "--law", "heisenberg", "--K", "5", "--D", "5",
                                  "--closure", "verbal", "--format", "json"])
    assert code == 0
    payload = json.loads(out)
    assert payload["size"] == 8 and payload["closure"] == "verbal"


def test_atlas_commands(samples, capsys):
    ext = str(samples / "dirprod.json")
    code, out, err = run(capsys, ["atlas", "validate", "--extension", ext,
                                  "--samples", "25"])
    assert code == 0 and "ok: true" in out and "mode: sampled 25" in out
    code, out, err = run(capsys, ["atlas", "marginal", "--word", "[x1, x2]",
                                  "--extension", ext])
    assert code == 0 and "all-constant: true" in out
    p3 = str(samples / "inversion_p3.json")
    code, out, err = run(capsys, ["atlas", "marginal", "--word", "x1^2",
                                  "--extension", p3])
    assert code == 0 and "all-constant: false" in out
    assert "witness: component 1: X1" in out
    code, out, err = run(capsys, ["atlas", "wordmap", "--word", "x1^2",
                                  "--extension", p3, "--cosets", "s"])
    assert code == 0 and out.splitlines()[0] == "target: 1"


def test_probe_commands(samples, capsys):
    code, out, err = run(capsys, ["probe", "--word", "x1",
                                  "--extension", str(samples / "inversion_p2.json"),
                                  "--lmax", "2", "--grid-depth", "3"])
    assert code == 0 and out.splitlines()[-1] == "min_l: 2"
    assert "l=1: witness" in out and "l=2: constant, trivial" in out
    code, out, err = run(capsys, ["probe", "--word", "x1^2",
                                  "--extension", str(samples / "inversion_p3.json"),
                                  "--lmax", "2", "--grid-depth", "2"])
    assert code == 0 and out.splitlines()[-1] == "min_l: none"


def test_text_and_json_agree(samples, capsys):
    argv = ["atlas", "marginal", "--word", "[x1, x2]",
            "--extension", str(samples / "dirprod.json")]
    code, text_out, _ = run(capsys, argv)
    code2, json_out, _ = run(capsys, argv + ["--format", "json"])
    assert code == code2 == 0
    payload = json.loads(json_out)
    assert payload["all_constant"] is True
    assert f"image-bound: {payload['image_bound']}" in text_out
