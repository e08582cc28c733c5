import json
import os
import subprocess
import sys

from msslab.config import parse_config
from msslab.report import replay_failures, render_text, to_json

FIXTURE = "examples/paper-example.json"


def run_cli(repo_root, *args, env_extra=None):
    env = dict(os.environ)
    env.pop("MSSLAB_SEED", None)
    if env_extra:
        env.update(env_extra)
    return subprocess.run(
        [sys.executable, "-m", "msslab", *args],
        cwd=repo_root,
        capture_output=True,
        text=True,
        env=env,
    )


def write_config(tmp_path, data, name="config.json"):
    path = tmp_path / name
    path.write_text(json.dumps(data), encoding="utf-8")
    return path


def test_validate_reproduces_the_worked_example(repo_root):
    result = run_cli(repo_root, "validate", FIXTURE, "--seed", "7")
    assert result.returncode == 0, result.stderr
    report = json.loads(result.stdout)
    rows = {tuple(r["cluster"]): r for r in report["validation"]["clusters"]}
    assert rows[("x2", "x4")]["lower_deficit"] == ["x1", "x2", "x3"]
    assert rows[("x2", "x4")]["upper_deficit"] == ["x1", "x2", "x3"]
    compat = {
        (r["delta"], r["mode"]): r["compatible"]
        for r in report["validation"]["compatibility"]
    }
    assert compat[("E0", "overlap-closer")] is True
    assert compat[("E1", "overlap-closer")] is True
    assert compat[("E2", "overlap-closer")] is False
    assert compat[("uE1", "overlap-closer")] is True


def test_check_axioms_report(repo_root):
    result = run_cli(repo_root, "check-axioms", FIXTURE, "--seed", "7")
    assert result.returncode == 0
    report = json.loads(result.stdout)
    structural = {v["axiom"]: v["status"] for v in report["axioms"]["structural"]}
    for axiom in ("PT1", "PT2", "G1", "G5", "UL1", "UL3", "TB"):
        assert structural[axiom] == "holds"
    assert structural["clos1"] == "unspecified"
    per_delta = report["axioms"]["per_delta"]
    e1 = {v["axiom"]: v for v in per_delta["E1"]}
    assert e1["i-coh-2"]["status"] == "holds"
    assert e1["trans-1"]["status"] == "fails" and e1["trans-1"]["witnesses"]
    e0 = {v["axiom"]: v["status"] for v in per_delta["E0"]}
    assert e0["i-coh"] == "holds" and e0["i-coh-2"] == "fails"
    assert report["axioms"]["classification"]["E1"]["is_mss"] is False


def test_strict_exit_flags_failures(repo_root):
    result = run_cli(repo_root, "check-axioms", FIXTURE, "--strict-exit")
    assert result.returncode == 2


def test_byte_identical_reports(repo_root):
    first = run_cli(repo_root, "validate", FIXTURE, "--seed", "7", "--jobs", "1")
    second = run_cli(repo_root, "validate", FIXTURE, "--seed", "7", "--jobs", "1")
    assert first.stdout == second.stdout and first.returncode == 0
    parallel = run_cli(repo_root, "validate", FIXTURE, "--seed", "7", "--jobs", "4")
    assert json.loads(parallel.stdout) == json.loads(first.stdout)


def test_failing_witnesses_replay_from_the_report(repo_root):
    result = run_cli(repo_root, "check-axioms", FIXTURE, "--seed", "7")
    report = json.loads(result.stdout)
    with open(repo_root / FIXTURE, encoding="utf-8") as handle:
        cfg = parse_config(json.load(handle))
    assert replay_failures(cfg, report) == []
    validate = json.loads(run_cli(repo_root, "validate", FIXTURE).stdout)
    assert replay_failures(cfg, validate) == []


def test_text_format_is_a_projection(repo_root):
    as_json = run_cli(repo_root, "validate", FIXTURE, "--seed", "7")
    as_text = run_cli(repo_root, "validate", FIXTURE, "--seed", "7", "--format", "text")
    assert as_text.returncode == 0
    rendered = render_text(json.loads(as_json.stdout))
    assert as_text.stdout == rendered
    assert "lower-deficit" in as_text.stdout


def test_parse_error_exit_codes(repo_root, tmp_path):
    missing_relation = write_config(
        tmp_path, {"universe": ["x1"], "granulation": "predecessor"}
    )
    result = run_cli(repo_root, "check-axioms", str(missing_relation))
    assert result.returncode == 1
    assert "parse error" in result.stderr

    undeclared = write_config(
        tmp_path,
        {"universe": ["x1"], "clustering": [["x9"]]},
        name="undeclared.json",
    )
    result = run_cli(repo_root, "validate", str(undeclared))
    assert result.returncode == 1
    assert "x9" in result.stderr

    unknown_field = write_config(
        tmp_path, {"universe": ["x1"], "flavour": "sour"}, name="unknown.json"
    )
    result = run_cli(repo_root, "check-axioms", str(unknown_field))
    assert result.returncode == 1


def test_usage_error_exit_code(repo_root):
    result = run_cli(repo_root, "frobnicate")
    assert result.returncode == 1


def test_config_without_delta_defers_coherence(repo_root, tmp_path):
    config = write_config(
        tmp_path,
        {
            "universe": ["x1", "x2"],
            "relation": {"pairs": [["x1", "x1"], ["x2", "x2"]]},
            "granulation": "predecessor",
        },
    )
    result = run_cli(repo_root, "check-axioms", str(config))
    assert result.returncode == 0
    report = json.loads(result.stdout)
    assert report["axioms"]["per_delta"] == {}
    assert "deferred" in report["axioms"]["note"]


def test_pipeline_command(repo_root):
    result = run_cli(repo_root, "pipeline", FIXTURE, "--seed", "7")
    assert result.returncode == 0
    report = json.loads(result.stdout)
    steps = report["steps"]
    assert steps["step3_clustering"]["source"] == "external clustering ingested"
    assert "delta" in steps["step1_assemble"]["deferred_slots"]
    assert steps["step5_investigate"]["validation"]["compatibility"]


def test_pipeline_with_parthood_reduct(repo_root, tmp_path):
    config = write_config(
        tmp_path,
        {
            "universe": ["x1", "x2"],
            "relation": {"pairs": [["x1", "x1"], ["x2", "x2"]]},
            "granulation": "predecessor",
            "clustering": [["x1"]],
            "reduct": ["P"],
        },
    )
    result = run_cli(repo_root, "pipeline", str(config))
    assert result.returncode == 0
    report = json.loads(result.stdout)
    validation = report["steps"]["step5_investigate"]["validation"]
    assert validation["clusters"][0]["status"] == "deferred"


def test_search_command_reports_none_within_budget(repo_root, tmp_path):
    spec = write_config(
        tmp_path,
        {
            "n": 2,
            "family": "extensional-deltas",
            "required": ["strict-n-coh"],
            "forbidden": ["i-coh-2"],
            "budget": 200,
            "seed": 7,
        },
        name="spec.json",
    )
    result = run_cli(repo_root, "search", str(spec))
    assert result.returncode == 0
    report = json.loads(result.stdout)
    assert report["search"]["found"] is False
    assert report["search"]["note"] == "none within budget"
    assert report["search"]["examined"] == 200


def test_search_budget_exceeded_exit_code(repo_root, tmp_path):
    spec = write_config(
        tmp_path, {"n": 4, "family": "relations", "budget": 100}, name="big.json"
    )
    result = run_cli(repo_root, "search", str(spec))
    assert result.returncode == 3
    assert "budget" in result.stderr


def test_search_finds_and_serializes_a_witness(repo_root, tmp_path):
    spec = write_config(
        tmp_path,
        {"n": 2, "delta": "E0", "required": ["i-coh"], "budget": 50},
        name="found.json",
    )
    result = run_cli(repo_root, "search", str(spec))
    report = json.loads(result.stdout)
    assert report["search"]["found"] is True
    assert report["search"]["structure"]["delta_kind"] == "E0"


def test_env_seed_is_honoured(repo_root):
    result = run_cli(repo_root, "validate", FIXTURE, env_extra={"MSSLAB_SEED": "99"})
    assert json.loads(result.stdout)["provenance"]["seed"] == 99


def test_output_file_matches_stdout(repo_root, tmp_path):
    out = tmp_path / "report.json"
    to_stdout = run_cli(repo_root, "validate", FIXTURE, "--seed", "7")
    to_file = run_cli(
        repo_root, "validate", FIXTURE, "--seed", "7", "--output", str(out)
    )
    assert to_file.returncode == 0 and to_file.stdout == ""
    assert out.read_text(encoding="utf-8") == to_stdout.stdout


def test_schemas_are_valid_json(repo_root):
    for name in ("config.schema.json", "report.schema.json"):
        with open(repo_root / "schemas" / name, encoding="utf-8") as handle:
            schema = json.load(handle)
        assert schema["type"] == "object"


def test_report_round_trip_through_json(repo_root):
    raw = run_cli(repo_root, "check-axioms", FIXTURE, "--seed", "7").stdout
    assert to_json(json.loads(raw)) == raw
