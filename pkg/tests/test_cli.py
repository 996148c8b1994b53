import json

import pytest

from capos.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_rank_table(capsys):
    code, out, _ = run(capsys, "rank", "fixture:watermelon")
    assert code == 0
    lines = out.splitlines()[1:]
    assert [line.split()[0] for line in lines] == ["clear", "concave", "black", "curled", "turbid", "hard"]
    assert lines[0].split()[1:] == ["0.141", "1.962", "0.877"]
    assert lines[-1].split()[2:] == ["1.200", "0.182", "0.545"]


def test_rank_json(capsys):
    code, out, _ = run(capsys, "rank", "fixture:watermelon", "--format", "json")
    assert code == 0
    rows = json.loads(out)
    assert rows[0]["attribute"] == "clear" and rows[0]["defined"]


def test_binarize(capsys, tmp_path):
    target = tmp_path / "ctx.csv"
    code, out, _ = run(capsys, "binarize", "fixture:balloons", "--output", str(target))
    assert code == 0
    assert "color_YELLOW" in out and "12" in out
    header = target.read_text().splitlines()[0].split(",")
    assert header[0] == "object" and header[-1] == "inflated" and len(header) == 10


def test_build_exports(capsys, tmp_path):
    dot, js = tmp_path / "w.dot", tmp_path / "w.json"
    code, out, _ = run(capsys, "build", "fixture:watermelon", "--dot", str(dot), "--json", str(js))
    assert code == 0
    assert "hard slippery" in out and "min-samples" in out
    assert dot.read_text().startswith("digraph")
    assert json.loads(js.read_text())["nodes"][0]["split_attribute"] == "clear"


def test_build_cart_and_strict(capsys):
    code, out, _ = run(capsys, "build", "fixture:watermelon", "--baseline", "cart", "--strict-purity")
    assert code == 0
    assert "majority=" in out


def test_evaluate(capsys, tmp_path):
    report = tmp_path / "r.json"
    code, out, _ = run(capsys, "evaluate", "fixture:balloons", "--loocv", "--baseline", "cart",
                       "--json", str(report))
    assert code == 0
    rows = [line.split() for line in out.splitlines()[1:]]
    assert rows == [["3WCAPOS", "1.000", "1.000", "0.000", "1.000", "1.000"],
                    ["CART", "1.000", "1.000", "0.000", "1.000", "1.000"]]
    doc = json.loads(report.read_text())
    assert len(doc["3wcapos"]["per_fold"]) == 20


def test_predict(capsys, tmp_path):
    model = tmp_path / "m.json"
    run(capsys, "build", "fixture:balloons", "--json", str(model))
    rows = tmp_path / "rows.csv"
    rows.write_text("color,size,act,age\nYELLOW,SMALL,DIP,ADULT\nPURPLE,LARGE,DIP,CHILD\n")
    code, out, _ = run(capsys, "predict", "--model", str(model), "--input", str(rows),
                       "--format", "json")
    assert code == 0
    assert [p["label"] for p in json.loads(out)] == [1, 0]


def test_predict_binary_rows(capsys, tmp_path):
    model = tmp_path / "m.json"
    run(capsys, "build", "fixture:watermelon", "--json", str(model))
    rows = tmp_path / "rows.csv"
    rows.write_text("black,curled,turbid,clear,concave,hard slippery\n1,1,1,1,1,1\n0,0,0,0,0,0\n")
    code, out, _ = run(capsys, "predict", "--model", str(model), "--input", str(rows))
    assert code == 0
    assert [line.split("\t")[1] for line in out.splitlines()] == ["1", "0"]


def test_user_file_with_flags(capsys, tmp_path):
    data = tmp_path / "d.tsv"
    data.write_text("x\tcolor\tlabel\n1\tred\tyes\n2\tred\tno\n3\tblue\tyes\n4\tblue\tyes\n")
    code, out, _ = run(capsys, "binarize", str(data), "--delimiter", "\t", "--decision", "label",
                       "--positive-label", "yes", "--discrete", "x")
    assert code == 0
    assert "x_1" in out and "color_red" in out


@pytest.mark.parametrize("argv", [
    ["rank", "/nonexistent/file.csv"],
    ["rank", "fixture:nope"],
    ["build", "fixture:watermelon", "--alpha", "0.1", "--beta", "0.2"],
    ["evaluate", "fixture:balloons"],
    ["predict", "--model", "/nonexistent.json", "--input", "/nonexistent.csv"],
])
def test_input_errors_exit_1(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 1
    assert err.startswith("error:")


@pytest.mark.parametrize("argv", [["frobnicate"], ["build", "fixture:watermelon", "--min-split", "x"]])
def test_usage_errors_exit_1(capsys, argv):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 1


def test_degenerate_exit_2(capsys, tmp_path):
    data = tmp_path / "one.csv"
    data.write_text("a,d\n1,1\n0,1\n")
    code, _, err = run(capsys, "rank", str(data), "--positive-label", "1")
    assert code == 2
    assert "error" in err
