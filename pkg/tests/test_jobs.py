"""Job parsing and validation."""

import json

import pytest

from l1heaviside import JobSpecError
from l1heaviside.jobs import function_from_description, load_job, parse_job

GOOD = {
    "function": {"domain": [-1.0, 1.0], "jump": 0.0, "left": "0", "right": "1"},
    "space": {"type": "polynomial", "degree": 3},
    "actions": ["approximate"],
}


def test_parse_minimal_job():
    job = parse_job(dict(GOOD))
    assert job.wants("approximate")
    assert not job.wants("sample")
    assert job.sample_resolution == 400
    assert job.function(0.5) == 1.0


def test_constant_branches_get_exact_antiderivatives():
    f = function_from_description(GOOD["function"])
    assert f.left_branch.antiderivative is not None
    assert f.right_branch.antiderivative is not None


def test_expression_branches():
    f = function_from_description(
        {"domain": [-1.0, 1.0], "jump": 0.0, "left": "x**2", "right": "1 + x"}
    )
    assert f(-0.5) == pytest.approx(0.25)
    assert f(0.5) == pytest.approx(1.5)


def test_missing_sections_rejected():
    with pytest.raises(JobSpecError):
        parse_job({"space": GOOD["space"], "actions": ["canonical"]})
    with pytest.raises(JobSpecError):
        parse_job({"function": GOOD["function"], "actions": ["canonical"]})


def test_actions_validation():
    bad = dict(GOOD)
    bad["actions"] = []
    with pytest.raises(JobSpecError):
        parse_job(bad)
    bad["actions"] = ["transmogrify"]
    with pytest.raises(JobSpecError):
        parse_job(bad)


def test_bad_expression_rejected():
    bad = dict(GOOD)
    bad["function"] = dict(GOOD["function"], right="__import__('os')")
    with pytest.raises(JobSpecError):
        parse_job(bad)


def test_resolution_validation():
    bad = dict(GOOD, sample_resolution=1)
    with pytest.raises(JobSpecError):
        parse_job(bad)


def test_output_must_be_mapping():
    bad = dict(GOOD, output="samples.csv")
    with pytest.raises(JobSpecError):
        parse_job(bad)


def test_result_files_are_reloadable():
    # an approximate result embeds its job under "job"; feeding the whole
    # result back must parse to the same job
    wrapped = {"job": dict(GOOD), "coefficients": [0.5, 1.2, 0.0, -0.8]}
    job = parse_job(wrapped)
    assert job.space_description == GOOD["space"]
    assert job.raw == GOOD


def test_load_job_errors(tmp_path):
    with pytest.raises(JobSpecError):
        load_job(str(tmp_path / "missing.json"))
    bad = tmp_path / "bad.json"
    bad.write_text("{not json", encoding="utf-8")
    with pytest.raises(JobSpecError):
        load_job(str(bad))
    good = tmp_path / "good.json"
    good.write_text(json.dumps(GOOD), encoding="utf-8")
    assert load_job(str(good)).wants("approximate")
