import io
import json

import pytest

from setmatrix.cli import main
from setmatrix.encode import encode_zfm
from setmatrix.textio import parse, to_text


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize(
    "argv, code, out",
    [
        (["norm", "[[{},{}]]"], 0, "[{},{}]\n"),
        (["norm", "{{},{}}"], 0, "{{}}\n"),
        (["eq", "[{},{}]", "[{};{}]"], 1, "false\n"),
        (["eq", "[{},{}]", "[[{},{}]]"], 0, "true\n"),
        (["mem", "{}", "{{}}"], 0, "true\n"),
        (["mem", "{}", "[{},{}]"], 1, "false\n"),
        (["encode", "{}"], 0, "{}\n"),
        (["transitive", "--def", "i", "{[{},{}],{[{},{}]}}"], 0, "true\n"),
        (["transitive", "--def", "ii", "{[{},{}],{[{},{}]}}"], 1, "false\n"),
        (["transitive", "--def", "iii", "{[{},{}],{[{},{}]}}"], 1, "false\n"),
        (["ordinal", "{{},{{}}}"], 0, "true\n"),
        (["ordinal", "{{{}}}"], 1, "false\n"),
        (["enum", "--rank", "1", "--depth", "0"], 0, "{}\n{{}}\ncount 2\n"),
        (["matrices-over", "{}", "--shape", "2x2"], 0, "count 0\n"),
    ],
)
def test_simple_commands(capsys, argv, code, out):
    assert run(capsys, *argv)[:2] == (code, out)


def test_encode_matches_library(capsys):
    for term in ("[{},{}]", "[[{},{}],{}]"):
        code, out, _ = run(capsys, "encode", term)
        assert code == 0 and out == to_text(encode_zfm(parse(term))) + "\n"
    code, out, _ = run(capsys, "encode", "--expand", "[{},{}]")
    assert "elements: 2" in out and "depth:" in out


def test_matrices_over(capsys):
    code, out, _ = run(capsys, "matrices-over", "{{},{{}}}", "--shape", "1x2")
    lines = out.splitlines()
    assert code == 0 and len(lines) == 5 and lines[-1] == "count 4"


def test_stdin(capsys, monkeypatch):
    monkeypatch.setattr("sys.stdin", io.StringIO("[ {} ]\n"))
    assert run(capsys, "norm", "-")[:2] == (0, "{}\n")


@pytest.mark.parametrize(
    "argv, code",
    [
        (["norm", "[{}"], 2),
        (["norm", "[{},{};{}]"], 2),
        (["frobnicate"], 2),
        (["matrices-over", "{}", "--shape", "0x2"], 2),
        (["matrices-over", "[{},{}]", "--shape", "1x2"], 3),
        (["enum", "--rank", "2", "--depth", "1"], 4),
        (["enum", "--rank", "2", "--depth", "1", "--shapes", "1x2", "--cap", "300"], 0),
        (["check", "--schema", "epsilon", "--suite", "smt"], 2),
        (["check", "--schema", "nope"], 2),
        (["check", "--schema", "separation", "--params", "1x2"], 2),
        (["check", "--schema", "reduction", "--rank", "2"], 4),
    ],
)
def test_exit_codes(capsys, argv, code):
    assert run(capsys, *argv)[0] == code


def test_parse_error_position(capsys):
    code, _, err = run(capsys, "norm", "{x}")
    assert code == 2 and "1:2" in err


def test_check_epsilon(capsys):
    base = ["check", "--schema", "epsilon", "--shapes", "1x2", "--rank", "1", "--depth", "1"]
    code, out, _ = run(capsys, *base, "--model", "native")
    assert code == 0 and out.splitlines()[-1] == "1/1 hold"
    code, out, _ = run(capsys, *base, "--model", "zfm")
    first = out.splitlines()[0].split("\t")
    assert code == 1 and first[:3] == ["epsilon(1x2)", "zfm-image", "fails"]
    assert "β=" in first[3]


def test_check_json_agrees_with_text(capsys):
    base = ["check", "--schema", "division-sets", "--rank", "0", "--model", "zfm"]
    code_t, text, _ = run(capsys, *base)
    code_j, js, _ = run(capsys, *base, "--json")
    verdicts = json.loads(js)
    assert code_t == code_j == 1
    assert len(verdicts) == 3
    text_holds = [line.split("\t")[2] == "holds" for line in text.splitlines()[:-1]]
    assert text_holds == [v["holds"] for v in verdicts]
    assert verdicts[0]["witness"] == {"x": to_text(encode_zfm(parse("[{},{}]"))), "α11": "{}", "α12": "{}"}


def test_check_library_flags(capsys):
    code, out, _ = run(capsys, "check", "--schema", "replacement", "--map", "wrap-1x2", "--rank", "0")
    assert code == 0 and out.splitlines()[-1] == "1/1 hold"
    code, out, _ = run(capsys, "check", "--schema", "separation", "--rank", "0")
    assert code == 0 and out.splitlines()[-1] == "3/3 hold"


def test_suite_smt_minus_encoded(capsys):
    argv = ["check", "--suite", "smt-minus", "--model", "zfm", "--rank", "1",
            "--shapes", "1x2,2x1,2x2", "--depth", "1"]
    code, out, _ = run(capsys, *argv)
    assert code == 0 and out.splitlines()[-1] == "36/36 hold"


def test_schemas_listing(capsys):
    code, out, _ = run(capsys, "schemas")
    assert code == 0 and out.startswith("set-matrix\t") and "maps: wrap-1x2" in out


def test_help_mentions_library(capsys):
    with pytest.raises(SystemExit):
        from setmatrix.cli import build_parser

        build_parser().parse_args(["check", "--help"])
    out = capsys.readouterr().out
    assert "is-empty" in out and "singleton" in out
