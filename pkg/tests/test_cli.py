import json

import pytest

from binquartic.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_eligible_listing(capsys):
    code, out, _ = run(capsys, "eligible", "--height-max", "30", "--disc-sign", "-")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "I,J"
    assert set(lines[1:4]) == {"-3,0", "-2,-7", "-2,7"}
    assert lines[-1].startswith("-,30,3,")


def test_eligible_count_only_json(capsys):
    code, out, _ = run(capsys, "eligible", "--height-max", "30", "--disc-sign", "+",
                       "--count-only", "--format", "json-lines")
    assert code == 0
    row = json.loads(out.strip())
    assert row["count"] == "1" and row["target"] == "8/135"


def test_usage_error_exit_code(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["eligible", "--height-max", "30", "--disc-sign", "0"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["densities", "--prime", "4", "--family", "quartic"])
    assert exc.value.code == 2


def test_densities(capsys):
    code, out, _ = run(capsys, "densities", "--prime", "5", "--family", "monic-cubic")
    assert code == 0
    row = next(r for r in out.splitlines() if r.startswith("monic-cubic,(111),"))
    assert row == "monic-cubic,(111),10,125,2/25,2/25,OK"
    assert "MISMATCH" not in out


def test_selmer(capsys):
    code, out, _ = run(capsys, "selmer", "--curve", "1,1", "--format", "json-lines")
    assert code == 0
    rows = [json.loads(r) for r in out.splitlines()]
    assert rows[-1]["selmer_size"] == "2"
    assert "x=1/4" in rows[-1]["infinite_order_point"]


def test_non_minimal_curve_is_computational_error(capsys):
    code, _, err = run(capsys, "selmer", "--curve", "16,64")
    assert code == 1 and "p^4" in err


def test_count_classes_warm_cache(capsys, tmp_path):
    argv = ["count-classes", "--height-max", "20000", "--cache", str(tmp_path)]
    first = run(capsys, *argv)
    second = run(capsys, *argv)
    assert first[0] == 0 and first == second


def test_classgroup_and_nmono(capsys):
    code, out, _ = run(capsys, "classgroup", "--height-max", "3000", "--signature", "complex")
    assert code == 0 and out.splitlines()[1].startswith("3000,complex,false,")
    code, out, _ = run(capsys, "classgroup", "--height-max", "3000", "--signature", "complex",
                       "--narrow", "on")
    assert code == 1
    code, out, _ = run(capsys, "nmono", "--height-max", "1500", "--delta", "1/4")
    assert code == 0 and len(out.splitlines()) == 3


def test_selmer_average(capsys):
    code, out, _ = run(capsys, "selmer-average", "--height-max", "1000", "--ladder", "2")
    assert code == 0
    assert len(out.splitlines()) == 3
