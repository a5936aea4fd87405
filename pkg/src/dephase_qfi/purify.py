"""Purifications of the dephased probe on an enlarged register.

Three families are built, all sharing the phase generator (t/2) sum_i Z_i on
the system sites:

* one environment qubit per particle, coupled through Z_i Y_i, which traces
  back exactly to the uncorrelated channel;
* a single shared environment qubit coupled through |Z|**(nu-1) Z Y with
  Z = sum_i Z_i, the collective-coupling family (its reduced state is a model
  in its own right and is audited against the power-law collective channel);
* one environment qubit per particle coupled through Z_i Z_i, starting from a
  partially entangled environment state, for n = 2.

Each purified state is produced directly in the computational basis: every
system basis string carries a conditional environment vector and the detuning
phase exp(-i phi t m/2) of its sum-Z sector m.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .linalg import MAX_QUBITS, partial_trace_env, partial_trace_sys
from .models import Correlation, DephasingModel, ProbeState, sector_charges


class UnsupportedCaseError(ValueError):
    """Raised when a construction is requested outside its defined domain."""


@dataclass(frozen=True)
class PurifiedState:
    """Pure state on system (x) environment plus its phase generator.

    The generator is diagonal in the computational basis, so only its
    diagonal is stored; ``generator`` materializes the dense matrix.
    """

    state: np.ndarray
    n_system: int
    n_env: int
    generator_diag: np.ndarray

    def __post_init__(self):
        vec = np.asarray(self.state, dtype=complex).ravel()
        if vec.size != self.dim_system * self.dim_env:
            raise ValueError("state dimension must equal 2**(n_system + n_env)")
        norm = float(np.linalg.norm(vec))
        if abs(norm - 1.0) > 1e-12:
            raise ValueError("purified state must be normalized to 1e-12")
        diag = np.asarray(self.generator_diag, dtype=float)
        if diag.shape != vec.shape:
            raise ValueError("generator diagonal must match the state dimension")
        vec.setflags(write=False)
        diag.setflags(write=False)
        object.__setattr__(self, "state", vec)
        object.__setattr__(self, "generator_diag", diag)

    @property
    def dim_system(self) -> int:
        return 2**self.n_system

    @property
    def dim_env(self) -> int:
        return 2**self.n_env

    @property
    def generator(self) -> np.ndarray:
        return np.diag(self.generator_diag.astype(complex))

    def as_matrix(self) -> np.ndarray:
        """State reshaped to (dim_system, dim_env)."""
        return self.state.reshape(self.dim_system, self.dim_env)

    def reduced_system(self) -> np.ndarray:
        return partial_trace_env(self.state, self.dim_system, self.dim_env)

    def reduced_env(self) -> np.ndarray:
        return partial_trace_sys(self.state, self.dim_system, self.dim_env)

    def phase_derivative(self) -> np.ndarray:
        """d|state>/dphi = -i G |state> with G the phase generator."""
        return -1j * self.generator_diag * self.state


def rotation_angle(model: DephasingModel, t: float) -> float:
    """Conditional environment rotation angle arccos(sqrt(P)) with
    P = (1 + exp(-gamma t**nu))/2; cos of twice the angle equals the
    single-site coherence exp(-gamma t**nu)."""
    if t < 0:
        raise ValueError("time must be nonnegative")
    p = (1.0 + math.exp(-model.gamma * t**model.nu)) / 2.0
    return math.acos(math.sqrt(p))


def signed_sector_power(m: float, nu: float) -> float:
    """Spectral value |m|**(nu-1) * m of the collective coupling, with 0 at m=0."""
    if m == 0:
        return 0.0
    return math.copysign(abs(m) ** nu, m)


def phase_generator(n: int, t: float, n_env: int = 0) -> np.ndarray:
    """Dense (t/2) sum_i Z_i on n system qubits, identity on n_env qubits."""
    return np.diag(_generator_diag(n, t, n_env).astype(complex))


def _generator_diag(n: int, t: float, n_env: int) -> np.ndarray:
    m = sector_charges(n).astype(float)
    return np.repeat(m * (t / 2.0), 2**n_env)


def _check_register(n_total: int):
    if n_total > MAX_QUBITS:
        raise ValueError(f"register of {n_total} qubits exceeds the cap of {MAX_QUBITS}")


def _detuning_phases(n: int, t: float, phi: float) -> np.ndarray:
    m = sector_charges(n).astype(float)
    return np.exp(-1j * phi * t * m / 2.0)


def purify_uncorrelated(probe: ProbeState, model: DephasingModel, t: float, phi: float) -> PurifiedState:
    """Per-particle environment purification of the uncorrelated channel.

    System string x leaves environment qubit i rotated by z_i(x) times the
    rotation angle, so differing sites overlap by cos(2 angle), reproducing
    the uncorrelated decay exp(-gamma t**nu * Hamming distance) exactly.
    """
    if model.correlation is not Correlation.UNCORRELATED:
        raise ValueError("expected an uncorrelated model")
    if probe.n != model.n:
        raise ValueError("probe and model disagree on the particle count")
    n = model.n
    _check_register(2 * n)
    theta = rotation_angle(model, t)
    c, s = math.cos(theta), math.sin(theta)

    dim = 2**n
    x = np.arange(dim, dtype=np.uint64)
    e = np.arange(dim, dtype=np.uint64)
    weight = np.bitwise_count(e).astype(np.int64)
    # env[x, e] = c**(n-|e|) s**|e| * (-1)**popcount(x & e)
    magnitude = c ** (n - weight) * s**weight
    sign = 1.0 - 2.0 * (np.bitwise_count(x[:, None] & e[None, :]) % 2).astype(float)
    env = magnitude[None, :] * sign

    amps = probe.amplitudes * _detuning_phases(n, t, phi)
    block = amps[:, None] * env
    return PurifiedState(block.ravel(), n, n, _generator_diag(n, t, n))


def purify_max_correlated(probe: ProbeState, model: DephasingModel, t: float, phi: float) -> PurifiedState:
    """Single shared environment qubit coupled to the collective operator.

    The environment conditioned on sum-Z sector m is a Y rotation of |0> by
    angle * s(m) with s(m) = |m|**(nu-1) m, so sector pairs (m, m') keep
    coherence cos(angle * (s(m) - s(m'))).  For one particle this coincides
    with the per-particle family.
    """
    if model.correlation is not Correlation.MAX_CORRELATED:
        raise ValueError("expected a max-correlated model")
    if probe.n != model.n:
        raise ValueError("probe and model disagree on the particle count")
    n = model.n
    _check_register(n + 1)
    theta = rotation_angle(model, t)
    m = sector_charges(n)
    angles = np.array([theta * signed_sector_power(float(mm), model.nu) for mm in m])

    amps = probe.amplitudes * _detuning_phases(n, t, phi)
    block = np.stack([amps * np.cos(angles), amps * np.sin(angles)], axis=1)
    return PurifiedState(block.ravel(), n, 1, _generator_diag(n, t, 1))


def ghz_plus_overlap(n: int) -> float:
    """Inner product of the n-qubit GHZ state with the plus product state."""
    return 2.0 ** ((1.0 - n) / 2.0)


@dataclass(frozen=True)
class EnvInitState:
    """Environment start state A * GHZ + B * plus**n, normalized numerically.

    The cross term in the squared norm is 2 A B <GHZ|plus**n> =
    2**((3-n)/2) A B; given A, the amplitude B solves the resulting
    quadratic and the state is renormalized explicitly.  A = 1 gives the GHZ
    environment (B = 0), A = 0 the product-plus environment.
    """

    a: float
    b: float
    n: int
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.size != 2**self.n:
            raise ValueError("environment amplitudes must have dimension 2**n")
        if abs(float(np.linalg.norm(amps)) - 1.0) > 1e-12:
            raise ValueError("environment state must be normalized")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def cross_term(self) -> float:
        """Coefficient of A*B in the squared norm."""
        return 2.0 * ghz_plus_overlap(self.n)

    @classmethod
    def from_amplitude(cls, a: float, n: int = 2) -> "EnvInitState":
        if not 0.0 <= a <= 1.0:
            raise ValueError("amplitude A must lie in [0, 1]")
        k = 2.0 * ghz_plus_overlap(n)
        disc = (k * a) ** 2 - 4.0 * (a * a - 1.0)
        b = (-k * a + math.sqrt(disc)) / 2.0
        ghz = np.zeros(2**n, dtype=complex)
        ghz[0] = ghz[-1] = 1.0 / math.sqrt(2.0)
        plus = np.full(2**n, 2.0 ** (-n / 2.0), dtype=complex)
        amps = a * ghz + b * plus
        amps = amps / np.linalg.norm(amps)
        return cls(a, b, n, amps)


def purify_partial(probe: ProbeState, a: float, model: DephasingModel, t: float, phi: float) -> PurifiedState:
    """Per-particle Z_i Z_i coupling into a partially entangled environment.

    Defined for n = 2.  With A = 0 the plus-state environment dephases in its
    X basis and the reduced state equals the uncorrelated channel; with A = 1
    the GHZ environment responds only to the collective sector charge.
    """
    if model.n != 2 or probe.n != 2:
        raise UnsupportedCaseError("partial correlation purification is defined for n = 2")
    if model.correlation is not Correlation.PARTIAL:
        raise ValueError("expected a partial-correlation model")
    n = model.n
    _check_register(2 * n)
    theta = rotation_angle(model, t)
    env0 = EnvInitState.from_amplitude(a, n)

    dim = 2**n
    x = np.arange(dim, dtype=np.uint64)
    e = np.arange(dim, dtype=np.uint64)
    # sum_i z_i(x) zeta_i(e) = n - 2 * popcount(x ^ e)
    agree = n - 2.0 * np.bitwise_count(x[:, None] ^ e[None, :]).astype(float)
    coupling = np.exp(-1j * theta * agree)

    amps = probe.amplitudes * _detuning_phases(n, t, phi)
    block = amps[:, None] * env0.amplitudes[None, :] * coupling
    return PurifiedState(block.ravel(), n, n, _generator_diag(n, t, n))
