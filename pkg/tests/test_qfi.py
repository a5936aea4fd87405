import math

import numpy as np
import pytest

from dephase_qfi.models import DephasingModel, ProbeState, dephased_state
from dephase_qfi.purify import UnsupportedCaseError, purify_max_correlated, purify_uncorrelated
from dephase_qfi.qfi import (
    collective_xyz_basis,
    complete_env_basis,
    evaluate_scenario,
    minimize_ansatz,
    optimal_h,
    phase_drho,
    purify_scenario,
    qfi_pure,
    qfi_sld,
    single_qubit_xyz_basis,
    symmetric_pair_basis,
    variational_cq,
)

from conftest import random_density, random_state


def ghz_pure_family(n, t, phi):
    probe = ProbeState.ghz(n)
    model = DephasingModel.uncorrelated(0.0, 1.0, n)
    pur = purify_uncorrelated(probe, model, t, phi)
    return pur


def test_qfi_pure_ghz_heisenberg():
    for n in (1, 2, 4):
        t = 0.9
        pur = ghz_pure_family(n, t, 0.2)
        value = qfi_pure(pur.state, pur.phase_derivative())
        assert value == pytest.approx(n**2 * t**2, rel=1e-12)


def test_qfi_pure_product_standard_scaling():
    for n in (1, 3):
        t = 1.1
        probe = ProbeState.product_plus(n)
        model = DephasingModel.uncorrelated(0.0, 1.0, n)
        pur = purify_uncorrelated(probe, model, t, 0.0)
        value = qfi_pure(pur.state, pur.phase_derivative())
        assert value == pytest.approx(n * t**2, rel=1e-12)


def test_qfi_pure_generator_eigenstate_carries_nothing():
    n, t = 2, 0.7
    amps = np.zeros(4)
    amps[0] = 1.0
    probe = ProbeState.custom(amps)
    model = DephasingModel.uncorrelated(0.0, 1.0, n)
    pur = purify_uncorrelated(probe, model, t, 0.3)
    assert qfi_pure(pur.state, pur.phase_derivative()) == pytest.approx(0.0, abs=1e-12)


def test_qfi_pure_rejects_unnormalized():
    with pytest.raises(ValueError):
        qfi_pure(np.array([1.0, 1.0]), np.array([0.0, 1.0]))


def test_qfi_sld_agrees_with_pure(rng):
    state = random_state(rng, 8)
    probe = ProbeState.custom(state)
    model = DephasingModel.uncorrelated(0.0, 1.0, 3)
    t = 0.8
    pur = purify_uncorrelated(probe, model, t, 0.4)
    rho = pur.reduced_system()
    f_mixed = qfi_sld(rho, phase_drho(rho, 3, t))
    f_pure = qfi_pure(pur.state, pur.phase_derivative())
    assert abs(f_mixed - f_pure) <= 1e-9 * max(1.0, f_pure)


def test_qfi_sld_single_qubit_closed_form():
    # independent 2x2 evaluation: coherence c = e**(-gamma t), F = t**2 c**2
    gamma, t = 0.8, 1.1
    model = DephasingModel.uncorrelated(gamma, 1.0, 1)
    probe = ProbeState.product_plus(1)
    rho = dephased_state(probe, model, t, 0.5)
    value = qfi_sld(rho, phase_drho(rho, 1, t))
    assert value == pytest.approx(t**2 * math.exp(-2 * gamma * t), rel=1e-12)


def test_qfi_sld_maximally_mixed_is_zero(rng):
    for n in (1, 2):
        rho = np.eye(2**n, dtype=complex) / 2**n
        assert qfi_sld(rho, phase_drho(rho, n, 1.0)) == 0.0


def test_qfi_sld_rejects_non_hermitian(rng):
    rho = random_density(rng, 4)
    bad = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    with pytest.raises(ValueError):
        qfi_sld(bad, phase_drho(rho, 2, 1.0))
    with pytest.raises(ValueError):
        qfi_sld(rho, bad)


def test_qfi_sld_finite_difference_cross_check():
    gamma, nu, n, t = 0.7, 1.4, 2, 0.9
    model = DephasingModel.uncorrelated(gamma, nu, n)
    probe = ProbeState.ghz(n)
    phi = 0.3
    rho = dephased_state(probe, model, t, phi)
    analytic = qfi_sld(rho, phase_drho(rho, n, t))
    step = 1e-5
    drho_fd = (dephased_state(probe, model, t, phi + step) - dephased_state(probe, model, t, phi - step)) / (2 * step)
    numeric = qfi_sld(rho, drho_fd)
    assert abs(numeric / analytic - 1) <= 1e-5


def test_qfi_sld_independent_of_phi():
    gamma, n, t = 0.6, 2, 0.8
    model = DephasingModel.uncorrelated(gamma, 1.0, n)
    probe = ProbeState.ghz(n)
    values = []
    for phi in (0.0, 0.9, 2.4):
        rho = dephased_state(probe, model, t, phi)
        values.append(qfi_sld(rho, phase_drho(rho, n, t)))
    assert max(values) - min(values) <= 1e-12 * max(values)


def test_qfi_sld_monotone_in_gamma_for_channels():
    # pure dephasing never adds information for the physical channels; the
    # collective-coupling purification family is exempt, since its cosine
    # coherences revive at strong decay (the parity effect tested below)
    for correlation in ("uncorrelated", "max"):
        previous = None
        for gamma in (0.0, 0.2, 0.5, 1.0, 2.0):
            if correlation == "uncorrelated":
                model = DephasingModel.uncorrelated(gamma, 1.0, 2)
            else:
                model = DephasingModel.max_correlated(gamma, 1.0, 2)
            probe = ProbeState.ghz(2)
            rho = dephased_state(probe, model, 0.8, 0.0)
            value = qfi_sld(rho, phase_drho(rho, 2, 0.8))
            if previous is not None:
                assert value <= previous + 1e-12
            previous = value


def test_variational_cq_zero_correction_is_variance():
    n, t = 2, 0.9
    pur = ghz_pure_family(n, t, 0.1)
    h0 = np.zeros((pur.dim_env, pur.dim_env), dtype=complex)
    assert variational_cq(pur, h0) == pytest.approx(n**2 * t**2, rel=1e-12)


def test_variational_cq_single_qubit_plus():
    model = DephasingModel.uncorrelated(0.0, 1.0, 1)
    pur = purify_uncorrelated(ProbeState.product_plus(1), model, 1.0, 0.0)
    assert variational_cq(pur, np.zeros((2, 2), dtype=complex)) == pytest.approx(1.0, rel=1e-12)


def test_variational_cq_bounds_oracle(rng):
    model = DephasingModel.uncorrelated(0.8, 1.0, 2)
    probe = ProbeState.ghz(2)
    t = 0.7
    pur = purify_uncorrelated(probe, model, t, 0.0)
    rho = pur.reduced_system()
    oracle = qfi_sld(rho, phase_drho(rho, 2, t))
    for _ in range(5):
        h = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        h = (h + h.conj().T) / 2
        assert variational_cq(pur, h) >= oracle - 1e-9


def test_variational_cq_dimension_mismatch():
    pur = ghz_pure_family(2, 0.9, 0.0)
    with pytest.raises(ValueError):
        variational_cq(pur, np.zeros((2, 2), dtype=complex))


def test_minimize_ansatz_empty_basis():
    pur = ghz_pure_family(2, 0.9, 0.0)
    value, coeffs = minimize_ansatz(pur, [])
    assert coeffs == []
    assert value == pytest.approx(4 * 0.81, rel=1e-12)


def test_minimize_ansatz_rejects_non_hermitian():
    pur = ghz_pure_family(2, 0.9, 0.0)
    bad = np.zeros((4, 4), dtype=complex)
    bad[0, 1] = 1.0
    with pytest.raises(ValueError):
        minimize_ansatz(pur, [bad])


def test_minimize_ansatz_complete_basis_saturates():
    gamma, t = 0.9, 0.8
    for n in (1, 2):
        model = DephasingModel.uncorrelated(gamma, 1.0, n)
        probe = ProbeState.ghz(n)
        pur = purify_uncorrelated(probe, model, t, 0.0)
        rho = pur.reduced_system()
        oracle = qfi_sld(rho, phase_drho(rho, n, t))
        value, _ = minimize_ansatz(pur, complete_env_basis(n))
        assert abs(value - oracle) <= 1e-8 * max(1.0, oracle)
    model = DephasingModel.partial(gamma, 1.0, 0.6)
    pur = purify_scenario(ProbeState.ghz(2), model, t, 0.0)
    rho = pur.reduced_system()
    oracle = qfi_sld(rho, phase_drho(rho, 2, t))
    value, _ = minimize_ansatz(pur, complete_env_basis(2))
    assert abs(value - oracle) <= 1e-8 * max(1.0, oracle)


def test_minimize_ansatz_reproduces_uncorrelated_closed_form():
    # the collective XYZ ansatz attains n**2 t**2 c**2 / (n - (n-1) c**2)
    # for the GHZ probe and n t**2 c**2 for the product probe
    t = 0.8
    for n in (1, 2, 3, 4, 5):
        for gt in (0.1, 0.5, 1.0):
            gamma = gt / t
            c2 = math.exp(-2 * gamma * t)
            model = DephasingModel.uncorrelated(gamma, 1.0, n)
            pur = purify_uncorrelated(ProbeState.ghz(n), model, t, 0.0)
            value, _ = minimize_ansatz(pur, collective_xyz_basis(n))
            expected = n**2 * t**2 * c2 / (n - (n - 1) * c2)
            assert value == pytest.approx(expected, rel=1e-9)
            pur = purify_uncorrelated(ProbeState.product_plus(n), model, t, 0.0)
            value, _ = minimize_ansatz(pur, collective_xyz_basis(n))
            assert value == pytest.approx(n * t**2 * c2, rel=1e-9)


def test_optimal_h_pure_case_equals_qfi_pure():
    pur = ghz_pure_family(3, 0.7, 0.2)
    value, _ = optimal_h(pur)
    assert value == pytest.approx(qfi_pure(pur.state, pur.phase_derivative()), rel=1e-10)


def test_optimal_h_equals_oracle_uncorrelated():
    model = DephasingModel.uncorrelated(0.5 / 1.0, 1.0, 2)
    probe = ProbeState.ghz(2)
    t = 1.0
    pur = purify_uncorrelated(probe, model, t, 0.0)
    rho = pur.reduced_system()
    oracle = qfi_sld(rho, phase_drho(rho, 2, t))
    value, h = optimal_h(pur)
    assert abs(value - oracle) <= 1e-8 * max(1.0, oracle)
    assert np.abs(h - h.conj().T).max() <= 1e-12


def test_optimal_h_equals_oracle_collective_family():
    model = DephasingModel.max_correlated(0.5, 1.0, 2)
    probe = ProbeState.ghz(2)
    t = 1.0
    pur = purify_max_correlated(probe, model, t, 0.0)
    rho = pur.reduced_system()
    oracle = qfi_sld(rho, phase_drho(rho, 2, t))
    value, _ = optimal_h(pur)
    assert abs(value - oracle) <= 1e-8 * max(1.0, oracle)


def test_ordering_chain_all_families(rng):
    scenarios = [
        (DephasingModel.uncorrelated(0.7, 1.0, 3), ProbeState.ghz(3), collective_xyz_basis(3)),
        (DephasingModel.uncorrelated(0.7, 2.0, 2), ProbeState.product_plus(2), collective_xyz_basis(2)),
        (DephasingModel.max_correlated(0.7, 1.0, 3), ProbeState.ghz(3), single_qubit_xyz_basis()),
        (DephasingModel.partial(0.7, 1.0, 0.5), ProbeState.ghz(2), symmetric_pair_basis()),
    ]
    t = 0.9
    for model, probe, basis in scenarios:
        pur = purify_scenario(probe, model, t, 0.1)
        rho = pur.reduced_system()
        oracle = qfi_sld(rho, phase_drho(rho, model.n, t))
        c_opt, _ = optimal_h(pur)
        c_ansatz, _ = minimize_ansatz(pur, basis)
        # a non-optimal correction from the ansatz span cannot beat its minimum
        coeffs = rng.normal(size=len(basis))
        c_any = variational_cq(pur, sum(c * op for c, op in zip(coeffs, basis)))
        slack = 1e-8 * max(1.0, oracle)
        assert c_any >= c_ansatz - slack
        assert c_ansatz >= c_opt - slack
        assert abs(c_opt - oracle) <= slack
        assert oracle >= -slack


def test_collective_parity_trend():
    # even sector power: information grows with t deep in the decay regime;
    # odd sector power: information dies
    ghz2 = ProbeState.ghz(2)
    model2 = DephasingModel.max_correlated(1.0, 1.0, 2)
    values2 = []
    for t in (3.0, 6.0):
        pur = purify_max_correlated(ghz2, model2, t, 0.0)
        rho = pur.reduced_system()
        values2.append(qfi_sld(rho, phase_drho(rho, 2, t)))
    assert values2[1] > values2[0]

    ghz3 = ProbeState.ghz(3)
    model3 = DephasingModel.max_correlated(1.0, 1.0, 3)
    pur = purify_max_correlated(ghz3, model3, 6.0, 0.0)
    rho = pur.reduced_system()
    late = qfi_sld(rho, phase_drho(rho, 3, 6.0))
    assert late < 0.05 * (9 * 36.0)


def test_evaluate_scenario_report_fields():
    model = DephasingModel.uncorrelated(0.25, 1.0, 2)
    report = evaluate_scenario(ProbeState.ghz(2), model, t=1.0, phi=0.0, total_time=2.0)
    assert report.cq_ansatz >= report.cq_exact_opt - 1e-8
    assert report.cq_exact_opt >= report.qfi_oracle - 1e-8 * max(1.0, report.qfi_oracle)
    expected_resolution = 1.0 / math.sqrt(2 * 2.0 / 1.0 * report.qfi_oracle)
    assert report.resolution == pytest.approx(expected_resolution, rel=1e-12)
    assert report.scenario["correlation"] == "uncorrelated"
    assert len(report.coefficients) == 3
    payload = report.to_dict()
    assert set(payload) == {"qfi_oracle", "cq_ansatz", "cq_exact_opt", "coefficients", "resolution", "scenario"}


def test_evaluate_scenario_parity_metadata():
    model = DephasingModel.max_correlated(1.0, 1.0, 2)
    report = evaluate_scenario(ProbeState.ghz(2), model, t=6.0)
    assert report.scenario["parity_class"] == "even/unbounded"
    assert report.scenario["parity_m"] == pytest.approx(2.0)


def test_evaluate_scenario_self_consistency():
    model = DephasingModel.uncorrelated(0.25, 1.0, 2)
    report = evaluate_scenario(ProbeState.ghz(2), model, t=1.0)
    assert abs(report.cq_exact_opt - report.qfi_oracle) <= 1e-8 * max(1.0, report.qfi_oracle)


def test_evaluate_scenario_rejects_mixed():
    model = DephasingModel.mixed(1.0, 1.0, 2, 0.4)
    with pytest.raises(UnsupportedCaseError):
        evaluate_scenario(ProbeState.ghz(2), model, t=1.0)


def test_evaluate_scenario_ansatz_variants():
    model = DephasingModel.uncorrelated(0.4, 1.0, 2)
    probe = ProbeState.ghz(2)
    family = evaluate_scenario(probe, model, t=0.9, ansatz="family")
    complete = evaluate_scenario(probe, model, t=0.9, ansatz="complete")
    none = evaluate_scenario(probe, model, t=0.9, ansatz="none")
    # complete basis closes the gap to the oracle; the empty basis is the
    # raw generator variance, the loosest of the three
    assert complete.cq_ansatz == pytest.approx(complete.qfi_oracle, rel=1e-8)
    assert none.coefficients == []
    assert none.cq_ansatz >= family.cq_ansatz >= complete.cq_ansatz - 1e-10
    with pytest.raises(ValueError):
        evaluate_scenario(probe, model, t=0.9, ansatz="bogus")
