"""Dephasing channels for n qubits and the spectral picture behind them.

A single qubit coupled to its environment through its Z operator keeps its
populations and loses coherence as exp(-gamma * t**nu); nu = 1 is the
Markovian case, other powers are non-Markovian.  When all qubits share one
environment the coherence between the extremal Z sectors decays with the
collective exponent gamma * (n*t)**nu instead.

The same decay laws arise from a normalized frequency density F(w) via
coherence(t) = integral F(w) exp(-i w t) dw; Lorentzian and Gaussian test
densities reproduce the nu = 1 and nu = 2 laws and are used as quadrature
oracles.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .linalg import MAX_QUBITS


class Correlation(enum.Enum):
    """How the per-particle environments relate to each other."""

    UNCORRELATED = "uncorrelated"
    MAX_CORRELATED = "max-correlated"
    PARTIAL = "partial"
    MIXED = "mixed"


@dataclass(frozen=True)
class DephasingModel:
    """Decay constant, power law and correlation structure for n qubits.

    ``partial_amplitude`` is the entangled-environment amplitude A in [0, 1]
    (partial correlation, defined for n = 2 only).  ``mixing_angle`` is the
    correlation mixing angle theta in [0, pi/2]; theta = 0 is maximally
    correlated, theta = pi/2 uncorrelated.
    """

    gamma: float
    nu: float
    n: int
    correlation: Correlation
    partial_amplitude: float | None = None
    mixing_angle: float | None = None

    def __post_init__(self):
        if not (math.isfinite(self.gamma) and self.gamma >= 0.0):
            raise ValueError("gamma must be finite and >= 0")
        if not (math.isfinite(self.nu) and self.nu > 0.0):
            raise ValueError("nu must be finite and > 0")
        if self.n < 1:
            raise ValueError("need at least one particle")
        if self.correlation is Correlation.PARTIAL:
            a = self.partial_amplitude
            if a is None or not (0.0 <= a <= 1.0):
                raise ValueError("partial correlation needs an amplitude A in [0, 1]")
            if self.n != 2:
                raise ValueError("partial correlation is supported for n = 2 only")
        if self.correlation is Correlation.MIXED:
            th = self.mixing_angle
            if th is None or not (0.0 <= th <= math.pi / 2):
                raise ValueError("mixed correlation needs an angle theta in [0, pi/2]")

    @classmethod
    def uncorrelated(cls, gamma: float, nu: float, n: int) -> "DephasingModel":
        return cls(gamma, nu, n, Correlation.UNCORRELATED)

    @classmethod
    def max_correlated(cls, gamma: float, nu: float, n: int) -> "DephasingModel":
        return cls(gamma, nu, n, Correlation.MAX_CORRELATED)

    @classmethod
    def partial(cls, gamma: float, nu: float, amplitude: float) -> "DephasingModel":
        return cls(gamma, nu, 2, Correlation.PARTIAL, partial_amplitude=amplitude)

    @classmethod
    def mixed(cls, gamma: float, nu: float, n: int, theta: float) -> "DephasingModel":
        return cls(gamma, nu, n, Correlation.MIXED, mixing_angle=theta)


class ProbeKind(enum.Enum):
    PRODUCT_PLUS = "product-plus"
    GHZ = "ghz"
    CUSTOM = "custom"


def sector_charges(n: int) -> np.ndarray:
    """Eigenvalue of sum_i Z_i on each computational basis state of n qubits
    (number of 0 bits minus number of 1 bits)."""
    idx = np.arange(2**n, dtype=np.uint64)
    ones = np.bitwise_count(idx).astype(np.int64)
    return n - 2 * ones


@dataclass(frozen=True)
class ProbeState:
    """Pure n-qubit probe.  Amplitudes are kept unit norm."""

    n: int
    amplitudes: np.ndarray
    kind: ProbeKind = ProbeKind.CUSTOM

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.ndim != 1 or amps.size != 2**self.n:
            raise ValueError(f"amplitude vector must have dimension 2**{self.n}")
        norm = float(np.linalg.norm(amps))
        if abs(norm - 1.0) > 1e-12:
            raise ValueError("probe state must be normalized to 1e-12")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def product_plus(cls, n: int) -> "ProbeState":
        amps = np.full(2**n, 2.0 ** (-n / 2.0), dtype=complex)
        return cls(n, amps, ProbeKind.PRODUCT_PLUS)

    @classmethod
    def ghz(cls, n: int) -> "ProbeState":
        amps = np.zeros(2**n, dtype=complex)
        amps[0] = amps[-1] = 1.0 / math.sqrt(2.0)
        return cls(n, amps, ProbeKind.GHZ)

    @classmethod
    def custom(cls, amplitudes) -> "ProbeState":
        amps = np.asarray(amplitudes, dtype=complex)
        n = int(round(math.log2(amps.size)))
        if 2**n != amps.size:
            raise ValueError("amplitude vector length must be a power of two")
        amps = amps / np.linalg.norm(amps)
        return cls(n, amps, ProbeKind.CUSTOM)

    def density_matrix(self) -> np.ndarray:
        return np.outer(self.amplitudes, self.amplitudes.conj())

    def mean_z(self) -> float:
        """<sum_i Z_i / n> on the probe."""
        m = sector_charges(self.n)
        return float(np.sum(np.abs(self.amplitudes) ** 2 * m) / self.n)

    def variance_ratio(self) -> float:
        """q = Var(sum_i Z_i / n) / (1 - <sum_i Z_i / n>**2).

        Equals 1 for the GHZ state and 1/n for the product-plus state.
        """
        m = sector_charges(self.n) / self.n
        p = np.abs(self.amplitudes) ** 2
        mean = float(np.sum(p * m))
        var = float(np.sum(p * m**2)) - mean**2
        denom = 1.0 - mean**2
        if denom <= 0.0:
            raise ValueError("variance ratio undefined when <sum Z/n>**2 = 1")
        return var / denom


def local_exponent(model: DephasingModel, t: float) -> float:
    """Single-particle dephasing exponent gamma * t**nu."""
    if t < 0:
        raise ValueError("time must be nonnegative")
    return model.gamma * t**model.nu


def collective_exponent(model: DephasingModel, t: float) -> float:
    """Extreme-coherence exponent gamma * (n*t)**nu of the shared environment."""
    if model.correlation is not Correlation.MAX_CORRELATED:
        raise ValueError("collective exponent is defined for max-correlated models")
    if t < 0:
        raise ValueError("time must be nonnegative")
    return model.gamma * (model.n * t) ** model.nu


def mixed_collective_coherence(model: DephasingModel, t: float) -> float:
    """GHZ extreme-coherence survival factor under a mixed correlation angle:
    sin(theta)**2 * exp(-n gamma t**nu) + cos(theta)**2 * exp(-gamma (n t)**nu)."""
    if model.correlation is not Correlation.MIXED:
        raise ValueError("mixed coherence is defined for mixed-correlation models")
    th = model.mixing_angle
    local = math.exp(-model.n * model.gamma * t**model.nu)
    collective = math.exp(-model.gamma * (model.n * t) ** model.nu)
    return math.sin(th) ** 2 * local + math.cos(th) ** 2 * collective


def dephased_state(probe: ProbeState, model: DephasingModel, t: float, phi: float) -> np.ndarray:
    """Density matrix of the probe after detuning phase phi and dephasing time t.

    The element between basis strings x and y picks up the phase
    exp(-i phi t (m_x - m_y)/2), with m the sum-Z sector charge, and a decay
    factor that depends on the correlation structure:

    * uncorrelated: exp(-gamma t**nu * d) with d the Hamming distance x^y,
    * max-correlated: exp(-gamma (|m_x - m_y| t / 2)**nu).

    Populations are untouched; for n = 1 the two structures coincide.
    """
    if probe.n != model.n:
        raise ValueError("probe and model disagree on the particle count")
    if t < 0:
        raise ValueError("time must be nonnegative")
    if model.n > MAX_QUBITS - 2:
        raise ValueError("register too large for a dense channel matrix")
    n = model.n
    dim = 2**n
    idx = np.arange(dim, dtype=np.uint64)
    m = sector_charges(n).astype(float)

    if model.correlation is Correlation.UNCORRELATED:
        hamming = np.bitwise_count(idx[:, None] ^ idx[None, :]).astype(float)
        decay = np.exp(-model.gamma * t**model.nu * hamming)
    elif model.correlation is Correlation.MAX_CORRELATED:
        dm = np.abs(m[:, None] - m[None, :])
        decay = np.exp(-model.gamma * (dm * t / 2.0) ** model.nu)
    else:
        raise ValueError("dephased_state handles uncorrelated and max-correlated models only")

    phase = np.exp(-1j * phi * t * (m[:, None] - m[None, :]) / 2.0)
    return probe.density_matrix() * decay * phase


@dataclass(frozen=True)
class SpectralSamples:
    """Uniform samples (w, F(w)) of a normalized frequency density.

    The trapezoid-rule integral over the grid must be 1 within 1e-6; the
    constructors renormalize, the CSV loader validates.
    """

    frequencies: np.ndarray
    density: np.ndarray
    _integral: float = field(init=False, default=0.0)

    def __post_init__(self):
        w = np.asarray(self.frequencies, dtype=float)
        f = np.asarray(self.density, dtype=float)
        if w.ndim != 1 or w.shape != f.shape or w.size < 3:
            raise ValueError("need matching 1-D frequency and density arrays of length >= 3")
        steps = np.diff(w)
        if steps.min() <= 0:
            raise ValueError("frequency grid must increase")
        if (steps.max() - steps.min()) > 1e-9 * steps.mean():
            raise ValueError("frequency grid must be uniformly spaced")
        if f.min() < 0:
            raise ValueError("density must be nonnegative")
        w.setflags(write=False)
        f.setflags(write=False)
        object.__setattr__(self, "frequencies", w)
        object.__setattr__(self, "density", f)
        object.__setattr__(self, "_integral", float(np.trapezoid(f, w)))

    @property
    def integral(self) -> float:
        return self._integral

    @classmethod
    def lorentzian(cls, gamma: float, cutoff_factor: float = 2.0e4, points: int = 400001) -> "SpectralSamples":
        """F(w) = (gamma/pi)/(w**2 + gamma**2), renormalized on the grid.

        The heavy tail needs a wide window; the default window and spacing
        keep both the renormalization shift and the alias terms of the
        Fourier evaluation below 1e-4 for |t| <= 50/gamma.
        """
        if gamma <= 0:
            raise ValueError("gamma must be positive")
        w = np.linspace(-cutoff_factor * gamma, cutoff_factor * gamma, points)
        f = (gamma / math.pi) / (w**2 + gamma**2)
        f = f / np.trapezoid(f, w)
        return cls(w, f)

    @classmethod
    def gaussian(cls, sigma: float, cutoff_factor: float = 8.0, points: int = 4001) -> "SpectralSamples":
        """F(w) = exp(-w**2/(2 sigma**2)) / (sigma sqrt(2 pi)), renormalized."""
        if sigma <= 0:
            raise ValueError("sigma must be positive")
        w = np.linspace(-cutoff_factor * sigma, cutoff_factor * sigma, points)
        f = np.exp(-(w**2) / (2.0 * sigma**2)) / (sigma * math.sqrt(2.0 * math.pi))
        f = f / np.trapezoid(f, w)
        return cls(w, f)

    @classmethod
    def from_csv(cls, path, renormalize: bool = False) -> "SpectralSamples":
        """Load a two-column CSV (w, F) with a one-line header."""
        data = np.loadtxt(path, delimiter=",", skiprows=1, dtype=float)
        if data.ndim != 2 or data.shape[1] != 2:
            raise ValueError("expected two columns: frequency, density")
        w, f = data[:, 0], data[:, 1]
        if renormalize:
            f = f / np.trapezoid(f, w)
        return cls(w, f)


def coherence_from_spectrum(samples: SpectralSamples, t: float) -> complex:
    """Trapezoid-rule value of integral F(w) exp(-i w t) dw."""
    if abs(samples.integral - 1.0) > 1e-6:
        raise ValueError("spectral samples are not normalized to 1e-6")
    w = samples.frequencies
    phases = np.exp(-1j * w * t)
    return complex(np.trapezoid(samples.density * phases, w))
