import csv
import io
import json
import subprocess
import sys

import pytest

from pideals.cli import ConfigError, dispatch, emit, main, parse_config, reproduction_suite


def run(capsys, tmp_path, config, *argv):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(config))
    code = main([*argv, "--config", str(path)])
    out, err = capsys.readouterr()
    return code, out, err


def records(out):
    return [json.loads(line) for line in out.splitlines() if line.strip()]


FARAH = {"op": "eval", "submeasure": {"preset": "farah"},
         "set": {"kind": "explicit", "elements": [8, 9]}}


def test_eval_record(capsys, tmp_path):
    code, out, _ = run(capsys, tmp_path, FARAH)
    assert code == 0
    (rec,) = records(out)
    assert rec["value"] == "2/9" and rec["op"] == "eval" and rec["seed"] == 0
    assert rec["inputs"]["submeasure"] == {"preset": "farah"}
    assert "elapsed" not in rec


def test_timing_flag_adds_elapsed(capsys, tmp_path):
    code, out, _ = run(capsys, tmp_path, FARAH, "--timing")
    assert "elapsed" in records(out)[0]


def test_unknown_key_is_config_error(capsys, tmp_path):
    code, _, err = run(capsys, tmp_path, {**FARAH, "bogus": 1})
    assert code == 2 and "bogus" in err


def test_error_path_is_reported(capsys, tmp_path):
    cfg = {**FARAH, "params": {"epsilon": {"numerator": 1, "denominator": 0}}}
    code, _, err = run(capsys, tmp_path, cfg)
    assert code == 2 and "params.epsilon.denominator" in err


def test_unknown_family_kind_lists_catalog(capsys, tmp_path):
    cfg = {"op": "phi-family", "params": {"f": {"rule": "harmonic"},
                                          "family": {"kind": "chains"}},
           "set": {"kind": "explicit", "elements": [1]}}
    code, _, err = run(capsys, tmp_path, cfg)
    assert code == 2 and "all-finite" in err


def test_float_rational_rejected(capsys, tmp_path):
    cfg = {"op": "member", "submeasure": {"preset": "farah"},
           "set": {"kind": "geometric", "base": 2}, "params": {"epsilon": 0.5}}
    code, _, err = run(capsys, tmp_path, cfg)
    assert code == 2


def test_violation_exit_code(capsys, tmp_path):
    cfg = {"op": "witness", "submeasure": {"preset": "summable"},
           "sets": [{"kind": "explicit", "elements": [n]} for n in (100, 101, 102)],
           "params": {"target": "summable-like", "epsilon": "1/2", "delta": "1/50", "k": 2}}
    code, out, _ = run(capsys, tmp_path, cfg)
    assert code == 4
    assert records(out)[0]["status"] == "violation"


def test_budget_exit_code(capsys, tmp_path):
    cfg = {"op": "tails", "submeasure": {"preset": "farah"},
           "set": {"kind": "arithmetic", "start": 0, "step": 1}}
    code, out, _ = run(capsys, tmp_path, cfg, "--budget", "5")
    assert code == 3 and records(out)[0]["complete"] is False


def test_missing_m_and_delta(capsys, tmp_path):
    code, _, err = run(capsys, tmp_path, {"op": "witness", "params": {"target": "summable-like"}})
    assert code == 2 and "give m or delta" in err


def test_positional_op_overrides_config(capsys, tmp_path):
    cfg = {"params": {"m": 2, "T": 3}}
    code, out, _ = run(capsys, tmp_path, cfg, "witness", "trace-family")
    assert code == 0
    rec = records(out)[0]
    assert rec["op"] == "witness.trace-family" and rec["agree"] is True


def test_csv_has_header(capsys, tmp_path):
    code, out, _ = run(capsys, tmp_path, FARAH, "--format", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0][0] == "value" and rows[1][0] == "2/9"


def test_table_format(capsys, tmp_path):
    cfg = {"op": "tails", "submeasure": {"preset": "farah"},
           "set": {"kind": "arithmetic", "start": 0, "step": 1}}
    code, out, _ = run(capsys, tmp_path, cfg, "--format", "table", "--horizon", "64")
    assert code == 0 and "(~" in out and out.splitlines()[0].startswith("cutoff")


def test_print_schema(capsys):
    assert main(["--print-schema"]) == 0
    schema = json.loads(capsys.readouterr().out)
    assert schema["additionalProperties"] is False


def test_config_round_trip():
    for doc in reproduction_suite(0) + [FARAH]:
        cfg = parse_config(doc)
        assert parse_config(cfg.to_dict()) == cfg


def test_parse_config_raises_with_path():
    with pytest.raises(ConfigError) as info:
        parse_config({"op": "eval", "submeasure": {"preset": "nope"},
                      "set": {"kind": "explicit", "elements": [1]}})
    assert "submeasure" in str(info.value)


def test_dispatch_is_deterministic():
    cfg = parse_config({"op": "sweep", "params": {"target": "absval", "count": 50, "seed": 7}})
    a = emit(dispatch(cfg))
    b = emit(dispatch(cfg))
    assert a == b


def test_seed_changes_random_sweeps():
    a = emit(dispatch(parse_config({"op": "sweep", "params": {"target": "absval",
                                                              "count": 30, "seed": 1}})))
    b = emit(dispatch(parse_config({"op": "sweep", "params": {"target": "absval",
                                                              "count": 30, "seed": 2}})))
    assert a != b


@pytest.mark.parametrize("config", [
    {"op": "represent", "submeasure": {"preset": "sup-of-measures",
                                       "measures": [{"atoms": {"0": "1", "3": "1/2"}}]},
     "params": {"target": "ellinf", "count": 4}},
    {"op": "represent", "sequence": {"rule": "dense-tail", "width": 3},
     "params": {"target": "c0-normal", "count": 4}},
    {"op": "rademacher", "params": {"target": "vectors", "count": 9}},
    {"op": "rademacher", "params": {"target": "phi"}, "set": {"kind": "explicit",
                                                              "elements": [1, 2]}},
    {"op": "series-sum", "sequence": {"rule": "zinc0"},
     "set": {"kind": "explicit", "elements": [2, 3]}},
    {"op": "modulus", "sequence": {"rule": "zinc0"},
     "set": {"kind": "arithmetic", "start": 0, "step": 1}, "params": {"window": [2, 8]}},
    {"op": "metric", "submeasure": {"preset": "farah"},
     "sets": [{"kind": "explicit", "elements": [8]}, {"kind": "explicit", "elements": [9]}]},
    {"op": "tallness", "submeasure": {"preset": "farah"}, "params": {"horizon": 256}},
    {"op": "member", "submeasure": {"preset": "trace-null"},
     "set": {"kind": "tree-rule", "rule": "spine"}, "params": {"epsilon": "1/100"}},
    {"op": "witness", "params": {"target": "heavy-branch", "depth": 8,
                                 "tree_mass": {"kind": "level", "weight": {"rule": "geometric",
                                                                        "ratio": "1/2"}}}},
    {"op": "witness", "params": {"target": "bm", "m": 1, "horizon": 64,
                                 "a": {"rule": "harmonic"}, "b": {"rule": "harmonic",
                                                                  "scale": "2"}}},
])
def test_ops_run_clean(capsys, tmp_path, config):
    code, out, err = run(capsys, tmp_path, config)
    assert code == 0, err
    assert all(r["status"] in ("ok", "tail-below") for r in records(out))


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "pideals", "eval", "--config", "-"],
                          input=json.dumps(FARAH), capture_output=True, text=True)
    assert proc.returncode == 0 and '"2/9"' in proc.stdout
