"""Quantum Fisher information three ways.

* ``qfi_sld`` is the exact mixed-state oracle: eigendecompose rho and sum
  2 |drho_ij|**2 / (w_i + w_j) over the support.
* ``qfi_pure`` is the pure-state special case 4 (<d|d> - |<d|psi>|**2).
* ``variational_cq`` evaluates the purification upper bound
  4 Var(H - h_env) on a purified state; ``minimize_ansatz`` minimizes it
  over real combinations of a basis of environment operators by solving the
  symmetrized-covariance normal equations, and ``optimal_h`` solves the
  stationarity condition exactly through the anticommutator equation, which
  closes the gap to the oracle.

The minimum of the purification bound over all environment corrections
equals the oracle; ansatz values sit between the two.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import analytics
from .linalg import build_pauli_string, eigh, hermitize, is_hermitian, solve_anticommutator
from .models import Correlation, DephasingModel, ProbeState, sector_charges
from .purify import (
    PurifiedState,
    UnsupportedCaseError,
    purify_max_correlated,
    purify_partial,
    purify_uncorrelated,
)


def qfi_pure(state: np.ndarray, dstate: np.ndarray) -> float:
    """4 [ <dpsi|dpsi> - |<dpsi|psi>|**2 ] for a normalized pure state."""
    state = np.asarray(state, dtype=complex).ravel()
    dstate = np.asarray(dstate, dtype=complex).ravel()
    if state.shape != dstate.shape:
        raise ValueError("state and derivative must share a dimension")
    if abs(np.linalg.norm(state) - 1.0) > 1e-10:
        raise ValueError("state must be normalized")
    dd = float(np.vdot(dstate, dstate).real)
    overlap = complex(np.vdot(dstate, state))
    return 4.0 * (dd - abs(overlap) ** 2)


def qfi_sld(rho: np.ndarray, drho: np.ndarray, tol: float = 1e-12) -> float:
    """Exact mixed-state quantum Fisher information.

    2 sum |<i|drho|j>|**2 / (w_i + w_j) over eigenvalue pairs of rho with
    w_i + w_j > tol.  For trace-one states the absolute cutoff doubles as a
    support detector.
    """
    rho = np.asarray(rho, dtype=complex)
    drho = np.asarray(drho, dtype=complex)
    if not is_hermitian(rho, 1e-10):
        raise ValueError("rho must be Hermitian")
    if not is_hermitian(drho, 1e-10):
        raise ValueError("drho must be Hermitian")
    spec = eigh(rho)
    w = spec.eigenvalues
    u = spec.eigenvectors
    d = u.conj().T @ drho @ u
    pair = w[:, None] + w[None, :]
    mask = pair > tol
    terms = np.zeros_like(pair)
    np.divide(np.abs(d) ** 2, pair, out=terms, where=mask)
    return float(2.0 * terms[mask].sum())


def phase_drho(rho: np.ndarray, n: int, t: float) -> np.ndarray:
    """Analytic -i [(t/2) sum_i Z_i, rho] for an n-qubit state."""
    rho = np.asarray(rho, dtype=complex)
    g = sector_charges(n).astype(float) * (t / 2.0)
    return -1j * (g[:, None] - g[None, :]) * rho


def variational_cq(purified: PurifiedState, h_env: np.ndarray) -> float:
    """Purification bound 4 [<M**2> - <M>**2] with M = generator - 1 (x) h_env."""
    h_env = np.asarray(h_env, dtype=complex)
    if h_env.shape != (purified.dim_env, purified.dim_env):
        raise ValueError("h_env must act on the environment register")
    if not is_hermitian(h_env, 1e-10):
        raise ValueError("h_env must be Hermitian")
    m = purified.as_matrix()
    gm = purified.generator_diag.reshape(m.shape)
    x = gm * m - m @ h_env.T
    mean = float(np.vdot(m, x).real)
    second = float(np.vdot(x, x).real)
    return 4.0 * (second - mean**2)


def minimize_ansatz(purified: PurifiedState, basis) -> tuple[float, list[float]]:
    """Minimize the purification bound over real coefficients on ``basis``.

    Solves G c = v with G_kl = Re<B_k B_l> - <B_k><B_l> and
    v_k = Re<H B_k> - <H><B_k>, expectations on the purified state; a
    singular G falls back to the minimum-norm least-squares solution.
    Returns the achieved bound and the minimizer.
    """
    basis = list(basis)
    m = purified.as_matrix()
    gm = purified.generator_diag.reshape(m.shape)
    h_vec = gm * m
    h_mean = float(np.vdot(m, h_vec).real)
    if not basis:
        value = 4.0 * (float(np.vdot(h_vec, h_vec).real) - h_mean**2)
        return value, []

    dim_e = purified.dim_env
    b_vecs = []
    b_means = []
    for op in basis:
        op = np.asarray(op, dtype=complex)
        if op.shape != (dim_e, dim_e):
            raise ValueError("basis elements must act on the environment register")
        if not is_hermitian(op, 1e-12):
            raise ValueError("basis elements must be Hermitian")
        vec = m @ op.T
        b_vecs.append(vec)
        b_means.append(float(np.vdot(m, vec).real))

    k = len(basis)
    gram = np.empty((k, k))
    rhs = np.empty(k)
    for i in range(k):
        rhs[i] = float(np.vdot(h_vec, b_vecs[i]).real) - h_mean * b_means[i]
        for j in range(i, k):
            gram[i, j] = gram[j, i] = float(np.vdot(b_vecs[i], b_vecs[j]).real) - b_means[i] * b_means[j]

    coeffs, *_ = np.linalg.lstsq(gram, rhs, rcond=None)
    h_opt = sum(c * np.asarray(op, dtype=complex) for c, op in zip(coeffs, basis))
    value = variational_cq(purified, hermitize(h_opt))
    return value, [float(c) for c in coeffs]


def optimal_h(purified: PurifiedState) -> tuple[float, np.ndarray]:
    """Exact optimum of the purification bound.

    Builds the stationarity right-hand side Tr_S[H rho_SE + rho_SE H]
    directly from the generator action on the state and solves the
    anticommutator equation against the reduced environment state.  The
    achieved bound equals the oracle value of the reduced system state.
    """
    m = purified.as_matrix()
    gm = purified.generator_diag.reshape(m.shape)
    h_vec = gm * m
    rho_env = hermitize(np.einsum("se,sf->ef", m, m.conj()))
    # generator is real-diagonal, so both ordered terms give the same array
    rhs = hermitize(2.0 * np.einsum("se,sf->ef", h_vec, m.conj()))
    h = solve_anticommutator(rho_env, rhs, tol=None)
    return variational_cq(purified, h), h


def collective_xyz_basis(n_env: int) -> list[np.ndarray]:
    """[sum_i X_i, sum_i Y_i, sum_i Z_i] on an n_env-qubit environment."""
    ops = []
    for label in "XYZ":
        total = np.zeros((2**n_env, 2**n_env), dtype=complex)
        for site in range(n_env):
            labels = ["I"] * n_env
            labels[site] = label
            total += build_pauli_string(labels)
        ops.append(total)
    return ops


def single_qubit_xyz_basis() -> list[np.ndarray]:
    """[X, Y, Z] on one environment qubit."""
    return [build_pauli_string([label]) for label in "XYZ"]


def symmetric_pair_basis() -> list[np.ndarray]:
    """The nine exchange-symmetric generators on a two-qubit environment:
    three collective singles, three equal pairs and three symmetrized cross
    pairs.  Together with the identity they span every swap-invariant
    Hermitian operator on the pair."""
    def ps(a: str, b: str) -> np.ndarray:
        return build_pauli_string([a, b])

    return [
        ps("X", "I") + ps("I", "X"),
        ps("Y", "I") + ps("I", "Y"),
        ps("Z", "I") + ps("I", "Z"),
        ps("X", "X"),
        ps("Y", "Y"),
        ps("Z", "Z"),
        ps("X", "Y") + ps("Y", "X"),
        ps("X", "Z") + ps("Z", "X"),
        ps("Y", "Z") + ps("Z", "Y"),
    ]


def complete_env_basis(n_env: int) -> list[np.ndarray]:
    """Every non-identity Pauli string on the environment register.

    Saturates the oracle for any scenario; exponential in size, so capped at
    three environment qubits.
    """
    if n_env > 3:
        raise ValueError("complete basis is limited to three environment qubits")
    labels = ["I", "X", "Y", "Z"]
    ops = []
    for idx in range(1, 4**n_env):
        word = []
        rem = idx
        for _ in range(n_env):
            word.append(labels[rem % 4])
            rem //= 4
        ops.append(build_pauli_string(word))
    return ops


def family_basis(purified: PurifiedState, correlation: Correlation) -> list[np.ndarray]:
    """The variational basis paired with each purification family."""
    if correlation is Correlation.UNCORRELATED:
        return collective_xyz_basis(purified.n_env)
    if correlation is Correlation.MAX_CORRELATED:
        return single_qubit_xyz_basis()
    if correlation is Correlation.PARTIAL:
        return symmetric_pair_basis()
    raise UnsupportedCaseError("no variational basis is defined for mixed correlation")


@dataclass(frozen=True)
class QfiReport:
    """Oracle value, variational values and derived resolution for a scenario.

    The ordering cq_ansatz >= cq_exact_opt >= qfi_oracle (within 1e-8 slack)
    is enforced at construction; a violation means a broken computation.
    """

    qfi_oracle: float
    cq_ansatz: float
    cq_exact_opt: float
    coefficients: list[float]
    resolution: float
    scenario: dict = field(default_factory=dict)

    def __post_init__(self):
        slack = 1e-8 * max(1.0, abs(self.qfi_oracle))
        if self.cq_ansatz < self.cq_exact_opt - slack:
            raise ValueError("ansatz bound fell below the exact optimum")
        if self.cq_exact_opt < self.qfi_oracle - slack:
            raise ValueError("exact optimum fell below the oracle value")

    def to_dict(self) -> dict:
        return {
            "qfi_oracle": self.qfi_oracle,
            "cq_ansatz": self.cq_ansatz,
            "cq_exact_opt": self.cq_exact_opt,
            "coefficients": list(self.coefficients),
            "resolution": self.resolution,
            "scenario": dict(self.scenario),
        }


def purify_scenario(probe: ProbeState, model: DephasingModel, t: float, phi: float) -> PurifiedState:
    """Family dispatch: the purification matching the model's correlation tag."""
    if model.correlation is Correlation.UNCORRELATED:
        return purify_uncorrelated(probe, model, t, phi)
    if model.correlation is Correlation.MAX_CORRELATED:
        return purify_max_correlated(probe, model, t, phi)
    if model.correlation is Correlation.PARTIAL:
        return purify_partial(probe, model.partial_amplitude, model, t, phi)
    raise UnsupportedCaseError("no purification family is defined for mixed correlation")


def evaluate_scenario(
    probe: ProbeState,
    model: DephasingModel,
    t: float,
    phi: float = 0.0,
    total_time: float = 1.0,
    ansatz: str = "family",
) -> QfiReport:
    """Run one scenario end to end: purify, bound, solve, compare to oracle.

    ``ansatz`` picks the variational basis: "family" uses the family basis
    (collective XYZ per environment qubit, single-qubit XYZ, or the nine
    symmetric pair generators), "complete" the full Pauli basis on the
    environment, "none" the empty basis.
    """
    if t <= 0:
        raise ValueError("interrogation time must be positive")
    purified = purify_scenario(probe, model, t, phi)

    rho = purified.reduced_system()
    drho = phase_drho(rho, model.n, t)
    oracle = qfi_sld(rho, drho)

    if ansatz == "family":
        basis = family_basis(purified, model.correlation)
    elif ansatz == "complete":
        basis = complete_env_basis(purified.n_env)
    elif ansatz == "none":
        basis = []
    else:
        raise ValueError(f"unknown ansatz choice {ansatz!r}")

    cq_ansatz, coeffs = minimize_ansatz(purified, basis)
    cq_exact, _ = optimal_h(purified)

    repetitions = model.n * total_time / t
    resolution = float("inf") if oracle <= 0 else 1.0 / np.sqrt(repetitions * oracle)

    scenario = {
        "correlation": model.correlation.value,
        "probe": probe.kind.value,
        "n": model.n,
        "gamma": model.gamma,
        "nu": model.nu,
        "t": t,
        "phi": phi,
        "total_time": total_time,
        "ansatz": ansatz,
    }
    if model.correlation is Correlation.PARTIAL:
        scenario["partial_amplitude"] = model.partial_amplitude
    if model.correlation is Correlation.MAX_CORRELATED:
        m_value, limit_value, classification = analytics.parity_limit(model.n, model.nu)
        scenario["parity_m"] = m_value
        scenario["parity_limit"] = limit_value
        scenario["parity_class"] = classification

    return QfiReport(
        qfi_oracle=oracle,
        cq_ansatz=cq_ansatz,
        cq_exact_opt=cq_exact,
        coefficients=coeffs,
        resolution=resolution,
        scenario=scenario,
    )
