import csv
import io
import json

import pytest

from poisson_approx.cli import main
from poisson_approx.report import BoundReport, from_json, to_json


def _run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def _by_name(text):
    return {r.name: r for r in from_json(text)}


def test_tv_bounds_with_oracle(capsys):
    code, out, _ = _run(capsys, "--json", "tv-bounds", "--p", "0.1,0.2,0.3")
    assert code == 0
    r = _by_name(out)
    assert r["tv_exact"].value == pytest.approx(0.06871301834358414, rel=1e-10)
    assert r["tv_lower_improved"].value <= r["tv_exact"].value <= r["tv_upper_barbour_hall"].value
    assert all(rep.provenance for rep in r.values())


def test_profile_input(capsys):
    code, out, _ = _run(capsys, "--json", "kl-bounds", "--profile", "linear",
                        "--n", "100", "--lambda", "10")
    assert code == 0
    r = _by_name(out)
    assert r["kl_lower_loosened"].value == pytest.approx(3.44e-5, rel=5e-3)
    assert "kl_exact" not in r


def test_k1_certificate(capsys):
    code, out, _ = _run(capsys, "--json", "k1", "--lambda", "1")
    r = _by_name(out)
    assert code == 0
    assert r["k1"].value >= r["k1_tilde"].value
    assert {"alpha1", "alpha2", "theta"} <= set(r["k1"].context)


def test_schedule_file(tmp_path, capsys):
    path = tmp_path / "sched.json"
    path.write_text(json.dumps({"iterations": 1, "grid_size": 5}))
    code, out, _ = _run(capsys, "--json", "k1", "--lambda", "2", "--schedule", str(path))
    assert code == 0 and _by_name(out)["k1"].context["iterations"] == 1
    path.write_text("{not json")
    assert _run(capsys, "k1", "--lambda", "2", "--schedule", str(path))[0] == 2


def test_plan_example(capsys):
    code, out, _ = _run(capsys, "--json", "plan", "--mode", "stein", "--epsilon", "1e-10",
                        "--d-lower", "2.47e-4")
    assert code == 0
    assert _by_name(out)["samples_required"].value == 93223


def test_usage_errors(capsys):
    assert _run(capsys, "tv-bounds", "--p", "1.5")[0] == 2
    assert _run(capsys, "tv-bounds")[0] == 2
    assert _run(capsys, "plan", "--mode", "stein", "--epsilon", "2", "--d-lower", "1")[0] == 2
    assert _run(capsys, "entropy-bounds", "--model", "/nonexistent.json")[0] == 2
    with pytest.raises(SystemExit) as exc:
        main(["--json", "--csv", "k1", "--lambda", "1"])
    assert exc.value.code == 2


def test_inapplicable_exit_code(tmp_path, capsys):
    model = {"p": [0.5, 0.5], "neighborhoods": [[0, 1], [0, 1]],
             "pair_moments": [[0, 1, 0.5], [1, 0, 0.5]]}
    path = tmp_path / "m.json"
    path.write_text(json.dumps(model))
    code, _, err = _run(capsys, "entropy-bounds", "--model", str(path))
    assert code == 3 and "not applicable" in err


def test_model_file(tmp_path, capsys):
    model = {"p": [0.1, 0.2, 0.05], "neighborhoods": [[0, 1], [0, 1], [2]],
             "pair_moments": [[0, 1, 0.03], [1, 0, 0.03]], "s": [0, 0, 0]}
    path = tmp_path / "m.json"
    path.write_text(json.dumps(model))
    code, out, _ = _run(capsys, "--json", "entropy-bounds", "--model", str(path))
    assert code == 0
    assert _by_name(out)["entropy_error"].value > 0


def test_json_round_trip_is_exact(capsys):
    _, out, _ = _run(capsys, "--json", "tv-bounds", "--p", "0.1,0.2,0.3")
    reports = from_json(out)
    assert to_json(reports) == out.rstrip("\n")
    assert [r.quantized() for r in reports] == reports


def test_output_is_deterministic(capsys):
    first = _run(capsys, "--csv", "kl-bounds", "--p", "0.3,0.1")[1]
    assert _run(capsys, "--csv", "kl-bounds", "--p", "0.3,0.1")[1] == first


def test_csv_shape(capsys):
    _, out, _ = _run(capsys, "--csv", "example", "random-graph", "--n", "50", "--k", "48")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 3
    h = next(r for r in rows if r["name"] == "random_graph_entropy")
    assert float(h["value"]) == pytest.approx(4.974, abs=1e-3)


@pytest.mark.parametrize("which,rows", [("1", 14), ("2", 15)])
def test_tables_row_counts(capsys, which, rows):
    code, out, _ = _run(capsys, "--csv", "tables", "--which", which)
    assert code == 0
    data = list(csv.DictReader(io.StringIO(out)))
    assert len({(r.get("n"), r.get("k"), r.get("theta"), r.get("t")) for r in data}) == rows


def test_fig1_table(capsys):
    _, out, _ = _run(capsys, "--json", "tables", "--which", "fig1")
    ratios = [r for r in from_json(out) if r.name == "ratio_improved"]
    assert len(ratios) == 61
    assert max(r.value for r in ratios) <= 12.91 * 1.02


def test_report_rejects_empty_provenance():
    with pytest.raises(ValueError):
        BoundReport("x", 1.0, "upper", "")


def test_text_output(capsys):
    code, out, _ = _run(capsys, "k1", "--lambda", "1", "--closed-form")
    assert code == 0 and "k1_tilde" in out and "0.03206" in out
