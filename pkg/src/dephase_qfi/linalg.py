"""Dense complex linear algebra on small qubit registers.

State vectors are 1-D complex ndarrays of length 2**k, operators are square
complex ndarrays in the computational basis.  Everything is dense and
immutable by convention: no function mutates its arguments, so values can be
shared freely across threads.

The register cap of 14 qubits (dimension 16384) is enforced where registers
are built; it covers six particles with one environment qubit each and
thirteen particles sharing a single environment qubit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

MAX_QUBITS = 14

PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex),
    "Y": np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex),
    "Z": np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex),
}


def build_pauli_string(labels) -> np.ndarray:
    """Tensor product of single-site Pauli operators, one label per site.

    ``labels`` is a sequence over {"I", "X", "Y", "Z"}; the first label acts
    on the most significant qubit.  The result is Hermitian and unitary with
    dimension 2**len(labels).
    """
    labels = list(labels)
    if not labels:
        raise ValueError("pauli string needs at least one site label")
    if len(labels) > MAX_QUBITS:
        raise ValueError(f"register of {len(labels)} qubits exceeds the cap of {MAX_QUBITS}")
    out = np.array([[1.0 + 0.0j]])
    for lab in labels:
        try:
            factor = PAULI[lab]
        except (KeyError, TypeError):
            raise ValueError(f"unknown Pauli label {lab!r}; expected one of I, X, Y, Z") from None
        out = np.kron(out, factor)
    return out


def tensor(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product of two vectors or two matrices."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.ndim != b.ndim or a.ndim not in (1, 2):
        raise ValueError("tensor expects two vectors or two square matrices")
    return np.kron(a, b)


def is_hermitian(a: np.ndarray, tol: float = 1e-10) -> bool:
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        return False
    scale = max(1.0, float(np.abs(a).max()) if a.size else 1.0)
    return bool(np.abs(a - a.conj().T).max() <= tol * scale)


def hermitize(a: np.ndarray) -> np.ndarray:
    """Return the Hermitian part (a + a^dagger)/2."""
    return (a + a.conj().T) / 2.0


@dataclass(frozen=True)
class Spectrum:
    """Eigendecomposition of a Hermitian matrix.

    ``eigenvalues`` ascend; ``eigenvectors[:, k]`` is the unit eigenvector for
    ``eigenvalues[k]``, so U diag(w) U^dagger reconstructs the input.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return (self.eigenvectors * self.eigenvalues) @ self.eigenvectors.conj().T


def eigh(h: np.ndarray, herm_tol: float = 1e-10) -> Spectrum:
    """Hermitian eigendecomposition with an explicit Hermiticity gate."""
    h = np.asarray(h, dtype=complex)
    if not is_hermitian(h, herm_tol):
        raise ValueError("eigh requires a Hermitian matrix")
    w, v = np.linalg.eigh(h)
    return Spectrum(eigenvalues=w, eigenvectors=v)


def _as_state_matrix(state: np.ndarray, dim_s: int, dim_e: int) -> np.ndarray:
    state = np.asarray(state)
    if state.ndim == 1:
        if state.size != dim_s * dim_e:
            raise ValueError(f"state of dimension {state.size} != dim_s*dim_e = {dim_s * dim_e}")
        return state.reshape(dim_s, dim_e)
    raise ValueError("expected a state vector")


def partial_trace_env(state: np.ndarray, dim_s: int, dim_e: int) -> np.ndarray:
    """Reduced system operator: trace the environment factor out of a pure
    state vector or a density matrix on the system (x) environment register."""
    state = np.asarray(state, dtype=complex)
    if state.ndim == 1:
        m = _as_state_matrix(state, dim_s, dim_e)
        rho = m @ m.conj().T
    elif state.ndim == 2:
        if state.shape != (dim_s * dim_e, dim_s * dim_e):
            raise ValueError("density matrix dimension does not match dim_s*dim_e")
        rho = np.einsum("aebe->ab", state.reshape(dim_s, dim_e, dim_s, dim_e))
    else:
        raise ValueError("expected a vector or a square matrix")
    return hermitize(rho)


def partial_trace_sys(state: np.ndarray, dim_s: int, dim_e: int) -> np.ndarray:
    """Reduced environment operator: trace the system factor out."""
    state = np.asarray(state, dtype=complex)
    if state.ndim == 1:
        m = _as_state_matrix(state, dim_s, dim_e)
        rho = np.einsum("se,sf->ef", m, m.conj())
    elif state.ndim == 2:
        if state.shape != (dim_s * dim_e, dim_s * dim_e):
            raise ValueError("density matrix dimension does not match dim_s*dim_e")
        rho = np.einsum("aeaf->ef", state.reshape(dim_s, dim_e, dim_s, dim_e))
    else:
        raise ValueError("expected a vector or a square matrix")
    return hermitize(rho)


def solve_anticommutator(rho: np.ndarray, rhs: np.ndarray, tol: float | None = None) -> np.ndarray:
    """Solve h rho + rho h = rhs for Hermitian h on the support of rho.

    In the eigenbasis of rho the solution is elementwise,
    h_ij = rhs_ij / (w_i + w_j), kept only where w_i + w_j exceeds ``tol``
    and zeroed elsewhere.  ``tol`` defaults to 1e-10 times the largest
    eigenvalue of rho, a scale-invariant support cutoff.
    """
    rho = np.asarray(rho, dtype=complex)
    rhs = np.asarray(rhs, dtype=complex)
    if not is_hermitian(rho, 1e-10):
        raise ValueError("rho must be Hermitian")
    if not is_hermitian(rhs, 1e-10):
        raise ValueError("rhs must be Hermitian")
    if rho.shape != rhs.shape:
        raise ValueError("rho and rhs must share a dimension")
    spec = eigh(rho)
    w = spec.eigenvalues
    u = spec.eigenvectors
    if tol is None:
        tol = 1e-10 * max(float(w.max()), 0.0)
    pair = w[:, None] + w[None, :]
    rhs_eig = u.conj().T @ rhs @ u
    h_eig = np.where(pair > tol, rhs_eig / np.where(pair > tol, pair, 1.0), 0.0)
    return hermitize(u @ h_eig @ u.conj().T)
