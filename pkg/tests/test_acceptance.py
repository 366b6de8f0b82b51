"""Acceptance suite: every criterion at its stated tolerance.

Run with ``pytest -s tests/test_acceptance.py`` to see one pass/fail line per
criterion; the same checks back the ``pqharmonic verify`` command.
"""

import time

from pqharmonic import verify

SEED = 42

_RESULTS: dict = {}


def _run(name: str) -> verify.CriterionResult:
    if name not in _RESULTS:
        fn = dict(verify.ALL_CRITERIA)[name]
        start = time.perf_counter()
        passed, details = fn(SEED, False)
        result = verify.CriterionResult(name, bool(passed), details, time.perf_counter() - start)
        _RESULTS[name] = result
    result = _RESULTS[name]
    print(f"{'PASS' if result.passed else 'FAIL'}  {result.name}  "
          f"({result.seconds:.2f}s)  {result.details}")
    return result


def test_criterion_01_exact_conformal_solutions_and_perturbations():
    result = _run("conformal-solutions")
    assert result.passed, result.details
    assert result.details["max_sup_at_solutions"] < 1e-10
    assert result.details["min_sup_perturbed"] > 1e-4
    assert result.seconds < 15.0  # < 5 s per sphere dimension


def test_criterion_02_scaled_hopf_family():
    result = _run("scaled-hopf")
    assert result.passed, result.details
    assert result.details["max_sup_at_solutions"] < 1e-10
    assert result.details["min_sup_p_off"] > 1e-4
    assert result.seconds < 5.0


def test_criterion_03_jet_identities():
    result = _run("jet-identities")
    assert result.passed, result.details
    assert result.details["conformal_trace_gap"] <= 1e-8
    assert result.details["hopf_trace_gap"] <= 1e-8
    assert result.details["linear_trace_gap"] <= 1e-5
    for name in ("conformal", "hopf", "linear"):
        assert result.details[f"{name}_divergence_gap"] <= 1e-5


def test_criterion_04_first_variation_gradient_check():
    result = _run("first-variation")
    assert result.passed, result.details
    for key, value in result.details.items():
        assert value <= 1e-6, (key, value)
    assert result.seconds < 10.0


def test_criterion_05_kato_margin_and_classification():
    result = _run("kato-margin")
    assert result.passed, result.details
    assert result.details["min_margin"] >= -1e-12
    assert result.details["zero_on_equator"] is True
    assert result.details["class_at_solution"] in ("strict", "boundary")
    assert result.details["class_below"] == "not"


def test_criterion_06_energy_closed_forms():
    result = _run("energy-closed-forms")
    assert result.passed, result.details
    assert result.details["hopf_gap"] < 1e-12
    assert result.details["conformal_mc_rel"] < 0.02
    assert result.details["oracle_gap"] < 1e-6


def test_criterion_07_constant_length_scaling_law():
    result = _run("constant-length-scaling")
    assert result.passed, result.details
    assert result.details["max_gap"] <= 1e-12


def test_criterion_08_unique_q_along_sweep():
    result = _run("unique-q")
    assert result.passed, result.details
    assert result.details["n_roots"] == 1
    assert abs(result.details["root"] + 3.0) <= result.details["grid_spacing"]
    assert result.details["max_multiplier_diff_gap"] <= 1e-10


def test_criterion_09_region_suite():
    result = _run("regions")
    assert result.passed, result.details
    assert result.details["grid_cells"] == 200 * 200


def test_criterion_10_hopf_functional_rescaling():
    result = _run("hopf-rescaling")
    assert result.passed, result.details
    assert result.details["sup_const_p2.0"] < 1e-10
    assert result.details["sup_const_p5.0"] < 1e-10
    assert result.details["sup_const_off"] > 1e-4
    assert result.details["height_factor_floor"] > 1e-6


def test_criterion_11_parallel_section_criticality():
    result = _run("parallel-criticality")
    assert result.passed, result.details
    assert result.details["max_defect"] <= 1e-12


def test_criterion_12_determinism_and_budget():
    result = _run("determinism")
    assert result.passed, result.details
    total = sum(r.seconds for r in _RESULTS.values())
    assert total < 60.0, f"suite took {total:.1f}s"


def test_full_runner_agrees_with_individual_criteria():
    results = verify.run_all(seed=SEED, fast=True)
    assert [r.name for r in results] == [name for name, _ in verify.ALL_CRITERIA]
    assert all(r.passed for r in results), [r.name for r in results if not r.passed]
