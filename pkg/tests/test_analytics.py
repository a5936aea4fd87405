import math

import numpy as np
import pytest

from dephase_qfi.analytics import (
    FlatFunctionError,
    ResolutionQuery,
    UndefinedResolutionError,
    closed_form_uncorrelated,
    collective_family_qfi,
    correlated_closed_form,
    golden_minimize,
    improvement_closed_form,
    improvement_factor,
    optimal_resolution_uncorrelated,
    optimal_time_closed,
    optimal_time_numeric,
    parity_limit,
    partial_corr_argument,
    partial_corr_asymptote,
    partial_env_amplitude_b,
    ramsey_max_correlated,
    ramsey_uncorrelated,
)
from dephase_qfi.models import DephasingModel, ProbeKind, ProbeState
from dephase_qfi.purify import purify_max_correlated, purify_partial, purify_uncorrelated
from dephase_qfi.qfi import (
    collective_xyz_basis,
    minimize_ansatz,
    phase_drho,
    qfi_sld,
    symmetric_pair_basis,
)


def test_ramsey_uncorrelated_markovian_equivalence():
    for n in (1, 3, 7):
        for gamma in (0.3, 1.0, 2.5):
            for total in (0.5, 1.0, 4.0):
                model = DephasingModel.uncorrelated(gamma, 1.0, n)
                expected = math.sqrt(2 * math.e * gamma / (n * total))
                u = ramsey_uncorrelated(model, ProbeKind.PRODUCT_PLUS, total)
                e = ramsey_uncorrelated(model, ProbeKind.GHZ, total)
                assert abs(u - expected) <= 1e-12
                assert abs(e - expected) <= 1e-12


def test_ramsey_uncorrelated_powerlaw_values():
    model = DephasingModel.uncorrelated(1.0, 2.0, 4)
    value = ramsey_uncorrelated(model, ProbeKind.GHZ, 1.0)
    assert value == pytest.approx(math.sqrt(math.sqrt(4 * math.e) / 8), rel=1e-12)
    # probe ratio is n**((1 - 1/nu)/2)
    u = ramsey_uncorrelated(model, ProbeKind.PRODUCT_PLUS, 1.0)
    assert u / value == pytest.approx(4 ** ((1 - 0.5) / 2), rel=1e-12)


def test_ramsey_max_correlated_n1_probes_coincide():
    model = DephasingModel.max_correlated(0.8, 1.6, 1)
    for t in (0.4, 1.0):
        a = ramsey_max_correlated(model, ProbeKind.GHZ, t, 1.0)
        b = ramsey_max_correlated(model, ProbeKind.PRODUCT_PLUS, t, 1.0)
        assert a == pytest.approx(b, rel=1e-12)


def test_ramsey_max_correlated_heisenberg_gain_at_gamma_zero():
    model = DephasingModel.max_correlated(0.0, 1.0, 4)
    t = 0.7
    u = ramsey_max_correlated(model, ProbeKind.PRODUCT_PLUS, t, 1.0)
    e = ramsey_max_correlated(model, ProbeKind.GHZ, t, 1.0)
    assert u / e == pytest.approx(2.0, rel=1e-12)


def test_optimal_time_closed_values():
    model = DephasingModel.max_correlated(1.0, 1.0, 2)
    assert optimal_time_closed(model, ProbeKind.GHZ) == pytest.approx(0.25, abs=1e-15)
    assert optimal_time_closed(model, ProbeKind.PRODUCT_PLUS) == pytest.approx(0.5, abs=1e-15)


def test_optimal_time_closed_matches_numeric_minimum():
    for n in (1, 2, 3, 4, 5):
        for nu in (1.0, 2.0, 3.0):
            for gamma in (0.25, 1.0, 4.0):
                model = DephasingModel.max_correlated(gamma, nu, n)
                for probe in (ProbeKind.GHZ, ProbeKind.PRODUCT_PLUS):
                    closed = optimal_time_closed(model, probe)
                    numeric = optimal_time_numeric(
                        lambda t: ramsey_max_correlated(model, probe, t, 1.0),
                        (closed * 1e-3, closed * 10),
                    )
                    assert abs(numeric / closed - 1) <= 1e-6


def test_probes_equivalent_at_optimal_times():
    for n in (2, 3, 4):
        for nu in (1.0, 2.0):
            for gamma in (0.5, 1.0):
                model = DephasingModel.max_correlated(gamma, nu, n)
                te = optimal_time_closed(model, ProbeKind.GHZ)
                tu = optimal_time_closed(model, ProbeKind.PRODUCT_PLUS)
                r = ramsey_max_correlated(model, ProbeKind.PRODUCT_PLUS, tu, 1.0) / ramsey_max_correlated(
                    model, ProbeKind.GHZ, te, 1.0
                )
                assert abs(r - 1) <= 1e-10


def test_closed_form_uncorrelated_markovian_best():
    # q = 1, zbar = 0, nu = 1, minimized over t: sqrt(2 gamma / (n T))
    gamma, n = 0.8, 12
    model = DephasingModel.uncorrelated(gamma, 1.0, n)

    def res(t):
        return closed_form_uncorrelated(ResolutionQuery(model=model, t=t, total_time=1e9, q=1.0, zbar=0.0))

    t_best = optimal_time_numeric(res, (1e-4, 50.0))
    best = res(t_best)
    target = math.sqrt(2 * gamma / (n * 1e9))
    # n = 12 is midway to the asymptotic regime; agreement is loose by design
    assert best >= target
    assert best / target < 1.25


def test_closed_form_uncorrelated_heisenberg_at_gamma_zero():
    model = DephasingModel.uncorrelated(0.0, 1.0, 3)
    q = ResolutionQuery(model=model, t=0.7, total_time=1.0, q=1.0, zbar=0.0)
    assert closed_form_uncorrelated(q) == pytest.approx(math.sqrt(1.0 / (9 * 0.7)), rel=1e-12)


def test_closed_form_uncorrelated_matches_oracle_at_n1():
    gamma, t = 0.9, 0.8
    model = DephasingModel.uncorrelated(gamma, 1.0, 1)
    probe = ProbeState.product_plus(1)
    query = ResolutionQuery.from_probe(model, probe, t, 1.0)
    dw = closed_form_uncorrelated(query)
    pur = purify_uncorrelated(probe, model, t, 0.0)
    rho = pur.reduced_system()
    f = qfi_sld(rho, phase_drho(rho, 1, t))
    assert dw == pytest.approx(1.0 / math.sqrt((1.0 / t) * f), rel=1e-9)


def test_closed_form_uncorrelated_rejects_degenerate_weight():
    model = DephasingModel.uncorrelated(1.0, 1.0, 2)
    with pytest.raises(UndefinedResolutionError):
        closed_form_uncorrelated(ResolutionQuery(model=model, t=0.5, total_time=1.0, q=1.0, zbar=1.0))


def test_closed_form_matches_ansatz_for_both_probes():
    t = 0.8
    for n in (1, 2, 3, 4, 5):
        for nu in (1.0, 2.0):
            for gt in (0.1, 0.5, 1.0):
                gamma = gt / t**nu
                model = DephasingModel.uncorrelated(gamma, nu, n)
                for probe in (ProbeState.ghz(n), ProbeState.product_plus(n)):
                    pur = purify_uncorrelated(probe, model, t, 0.0)
                    c_ansatz, _ = minimize_ansatz(pur, collective_xyz_basis(n))
                    query = ResolutionQuery.from_probe(model, probe, t, 1.0)
                    dw = closed_form_uncorrelated(query)
                    assert abs(dw - 1.0 / math.sqrt((1.0 / t) * c_ansatz)) <= 1e-6 * dw


def test_optimal_resolution_uncorrelated_values():
    model = DephasingModel.uncorrelated(1.0, 1.0, 1)
    assert optimal_resolution_uncorrelated(model, 50, 1.0) == pytest.approx(math.sqrt(2.0 / 50), rel=1e-12)
    model2 = DephasingModel.uncorrelated(1.0, 2.0, 1)
    expected = math.sqrt(2.0 / (math.sqrt(0.75) * 1000))
    assert optimal_resolution_uncorrelated(model2, 100, 1.0) == pytest.approx(expected, rel=1e-12)
    assert optimal_resolution_uncorrelated(model2, 100, 1.0) == pytest.approx(0.048056, abs=1e-6)


def test_optimal_resolution_uncorrelated_audit_gap():
    # the large-n closed form undershoots the exact numeric optimum of the
    # variational expression by about 10.8 percent at n = 100, nu = 2; the
    # gap is frozen here and reported by the verify command
    model = DephasingModel.uncorrelated(1.0, 2.0, 100)

    def res(t):
        return closed_form_uncorrelated(ResolutionQuery(model=model, t=t, total_time=1.0, q=1.0, zbar=0.0))

    t_star = optimal_time_numeric(res, (1e-4, 1.0))
    gap = res(t_star) / optimal_resolution_uncorrelated(model, 100, 1.0) - 1.0
    assert t_star == pytest.approx(math.sqrt(1.0 / 200.0), rel=1e-2)
    assert gap == pytest.approx(0.1081, abs=2e-3)


def test_improvement_factor_markovian():
    model = DephasingModel.uncorrelated(1.0, 1.0, 1)
    assert improvement_factor(model) == pytest.approx(math.sqrt(math.e), abs=1e-9)


def test_improvement_factor_quadratic():
    model = DephasingModel.uncorrelated(1.0, 2.0, 1)
    value = improvement_factor(model)
    assert value == pytest.approx((math.e * 0.75) ** 0.25, rel=1e-12)
    assert 1.19 <= value <= 1.20


def test_improvement_factor_subunit_power_numeric():
    model = DephasingModel.uncorrelated(0.5, 0.25, 1)
    assert improvement_factor(model, n=100) == pytest.approx(1.0, abs=0.05)


def test_improvement_factor_numeric_branch_stays_finite():
    # grid edges drive exp() past the double range for powers close below 1;
    # the saturating exponential keeps the scan usable across (0.05, 1)
    values = []
    for nu in (0.05, 0.5, 0.75, 0.9, 0.99):
        model = DephasingModel.uncorrelated(1.0, nu, 1)
        value = improvement_factor(model, n=100)
        assert math.isfinite(value) and value >= 0.99
        values.append(value)
    # order-one throughout, approaching the closed form from below at nu -> 1
    assert all(a <= b + 1e-9 for a, b in zip(values, values[1:]))
    assert values[-1] < improvement_closed_form(1.0)


def test_improvement_closed_form_decreases_to_one():
    grid = np.linspace(1.0, 10.0, 91)
    values = [improvement_closed_form(float(nu)) for nu in grid]
    assert values[0] == pytest.approx(math.sqrt(math.e), abs=1e-9)
    assert all(a >= b - 1e-12 for a, b in zip(values, values[1:]))
    assert min(values) >= 1.0 - 1e-9
    assert improvement_closed_form(200.0) < 1.01


def test_correlated_closed_form_gamma_zero_limits():
    for n in (2, 3, 5):
        t = 0.9
        ghz = correlated_closed_form(n, 1.0, 0.0, t, ProbeKind.GHZ)
        assert ghz == pytest.approx(1.0 / math.sqrt(t * n * n), rel=1e-12)
        prod = correlated_closed_form(n, 1.0, 0.0, t, ProbeKind.PRODUCT_PLUS)
        assert prod == pytest.approx(1.0 / math.sqrt(t * n), rel=1e-12)


def test_correlated_closed_form_ghz_matches_family_oracle():
    for n in (2, 3, 4):
        for nu in (1.0, 2.0):
            for gt in (0.2, 0.5, 1.0, 3.0):
                t = 0.7
                gamma = gt / t**nu
                model = DephasingModel.max_correlated(gamma, nu, n)
                probe = ProbeState.ghz(n)
                pur = purify_max_correlated(probe, model, t, 0.0)
                rho = pur.reduced_system()
                oracle = qfi_sld(rho, phase_drho(rho, n, t))
                closed = collective_family_qfi(n, nu, gamma, t, ProbeKind.GHZ)
                assert abs(closed / oracle - 1) <= 1e-6


def test_correlated_closed_form_product_branch_divergence():
    # the product-branch closed form happens to agree with the family oracle at
    # n = 2 but loses all connection to it at n = 3, where its root argument
    # even turns negative; frozen here, reported by the verify command
    t = 0.7
    gamma = 1.0 / t
    model = DephasingModel.max_correlated(gamma, 1.0, 3)
    probe = ProbeState.product_plus(3)
    pur = purify_max_correlated(probe, model, t, 0.0)
    rho = pur.reduced_system()
    oracle = qfi_sld(rho, phase_drho(rho, 3, t))
    closed = collective_family_qfi(3, 1.0, gamma, t, ProbeKind.PRODUCT_PLUS)
    assert closed < 0 < oracle
    with pytest.raises(UndefinedResolutionError):
        correlated_closed_form(3, 1.0, gamma, t, ProbeKind.PRODUCT_PLUS)


def test_correlated_closed_form_n2_product_matches_family_oracle():
    t = 0.7
    for gt in (0.2, 1.0, 3.0):
        gamma = gt / t
        model = DephasingModel.max_correlated(gamma, 1.0, 2)
        probe = ProbeState.product_plus(2)
        pur = purify_max_correlated(probe, model, t, 0.0)
        rho = pur.reduced_system()
        oracle = qfi_sld(rho, phase_drho(rho, 2, t))
        closed = collective_family_qfi(2, 1.0, gamma, t, ProbeKind.PRODUCT_PLUS)
        assert closed == pytest.approx(oracle, rel=1e-9)


def test_partial_env_amplitude_limits():
    assert partial_env_amplitude_b(1.0) == pytest.approx(0.0, abs=1e-15)
    assert partial_env_amplitude_b(0.0) == pytest.approx(1.0, abs=1e-15)


def test_partial_corr_asymptote_trivial_cases():
    t = 3.0
    assert partial_corr_asymptote(1.0, 0.3, t) == pytest.approx(1.0 / math.sqrt(2 * t), rel=1e-12)
    for a in (0.2, 0.6, 0.9):
        assert partial_corr_asymptote(a, -1.0, t) == pytest.approx(1.0 / math.sqrt(2 * t), rel=1e-12)


def test_partial_corr_asymptote_product_probe_matches_ansatz():
    # probe correlation q = <Z1 Z2> = 0 for the product-plus probe; the
    # nine-generator minimum then reproduces the long-time form at gamma*t=8
    t, gamma = 8.0, 1.0
    probe = ProbeState.product_plus(2)
    for a in (0.25, 0.5, 0.75):
        model = DephasingModel.partial(gamma, 1.0, a)
        pur = purify_partial(probe, a, model, t, 0.0)
        value, _ = minimize_ansatz(pur, symmetric_pair_basis())
        dw_var = math.sqrt(t / value)
        dw_closed = partial_corr_asymptote(a, 0.0, t)
        assert abs(dw_var / dw_closed - 1) <= 0.05


def test_partial_corr_literal_unit_q_is_undefined():
    # with q = 1 the root argument is negative for small entangled
    # amplitudes, so the form has no value there; frozen as documentation
    assert partial_corr_argument(0.25, 1.0) < 0
    assert partial_corr_argument(0.5, 1.0) < 0
    with pytest.raises(UndefinedResolutionError):
        partial_corr_asymptote(0.25, 1.0, 8.0)


def test_golden_minimize_quadratic():
    x, fx = golden_minimize(lambda t: (t - 3.0) ** 2, 0.0, 10.0)
    assert x == pytest.approx(3.0, abs=1e-7)
    assert fx <= 1e-12


def test_optimal_time_numeric_matches_closed_example():
    model = DephasingModel.max_correlated(1.0, 1.0, 2)
    t = optimal_time_numeric(lambda t: ramsey_max_correlated(model, ProbeKind.GHZ, t, 1.0), (1e-3, 2.0))
    assert t == pytest.approx(0.25, abs=1e-6)


def test_optimal_time_numeric_flat_function():
    with pytest.raises(FlatFunctionError):
        optimal_time_numeric(lambda t: 1.0, (0.1, 2.0))
    with pytest.raises(FlatFunctionError):
        optimal_time_numeric(lambda t: 1.0 / math.sqrt(t), (0.1, 2.0))


def test_parity_limit_classes():
    m, limit, cls = parity_limit(2, 1.0)
    assert (m, limit, cls) == (pytest.approx(2.0), 0.0, "even/unbounded")
    m, limit, cls = parity_limit(3, 1.0)
    assert (m, limit, cls) == (pytest.approx(3.0), 1.0, "odd/bounded")
    nu = math.log(2) / math.log(9)
    m, limit, cls = parity_limit(9, nu)
    assert cls == "even/unbounded"
    assert m == pytest.approx(2.0, abs=1e-12)
    m, limit, cls = parity_limit(2, 1.3)
    assert cls == "nonconvergent"
    assert limit == pytest.approx(math.sin(m * math.pi / 2) ** 2, rel=1e-12)
