"""Dense complex linear algebra for 2x2 and 4x4 operators.

Everything a two-qubit problem needs and nothing more: Kronecker products,
partial trace and partial transpose, Hermitian eigendecompositions with a
deterministic eigenvector convention, and fractional powers of positive
semi-definite matrices.  All functions are pure and never mutate their
arguments.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, NotHermitian, SingularMatrix

HERMITIAN_TOL = 1e-10
DM_TOL = 1e-12
#: eigenvalues closer to zero than this are treated as exact zeros
SUPPORT_TOL = 1e-12


def as_matrix(m, dim=None) -> np.ndarray:
    """Coerce to a square complex array of dimension 2 or 4."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] not in (2, 4):
        raise DimensionError(f"expected a 2x2 or 4x4 matrix, got shape {a.shape}")
    if dim is not None and a.shape[0] != dim:
        raise DimensionError(f"expected a {dim}x{dim} matrix, got {a.shape[0]}x{a.shape[0]}")
    return a


def is_hermitian(m, tol=HERMITIAN_TOL) -> bool:
    a = np.asarray(m, dtype=complex)
    return bool(np.max(np.abs(a - a.conj().T)) <= tol)


def validate_density_matrix(rho) -> np.ndarray:
    """Check the density-matrix contract: Hermitian, unit trace, PSD.

    Tolerances are 1e-12 for hermiticity and trace and -1e-12 for the
    smallest eigenvalue.  Returns the coerced array unchanged.
    """
    a = as_matrix(rho)
    if np.max(np.abs(a - a.conj().T)) > DM_TOL:
        raise NotHermitian("density matrix is not Hermitian to 1e-12")
    tr = np.trace(a)
    if abs(tr - 1.0) > DM_TOL:
        raise ValueError(f"density matrix trace {tr} is not 1 to 1e-12")
    if np.linalg.eigvalsh(0.5 * (a + a.conj().T)).min() < -DM_TOL:
        raise ValueError("density matrix has an eigenvalue below -1e-12")
    return a


@dataclass(frozen=True)
class Spectrum:
    """Full spectral decomposition, eigenvalues ascending, eigenvectors as columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return v @ np.diag(self.eigenvalues) @ v.conj().T


def kron(a, b) -> np.ndarray:
    """Kronecker product of two 2x2 operators, left factor acting on qubit A.

    Basis order of the product space is |00>, |01>, |10>, |11> with the
    first index belonging to A.
    """
    return np.kron(as_matrix(a, dim=2), as_matrix(b, dim=2))


def partial_trace(m, subsystem: str) -> np.ndarray:
    """Trace out one qubit of a 4x4 operator.

    ``subsystem`` names the qubit that is removed: ``"B"`` returns the
    reduced operator of A and vice versa.  The trace is preserved.
    """
    a = as_matrix(m, dim=4).reshape(2, 2, 2, 2)
    if subsystem == "B":
        return np.einsum("ibjb->ij", a)
    if subsystem == "A":
        return np.einsum("aiaj->ij", a)
    raise ValueError(f"subsystem must be 'A' or 'B', got {subsystem!r}")


def partial_transpose(m, subsystem: str = "B") -> np.ndarray:
    """Transpose the indices of one qubit only.  Involutive."""
    a = as_matrix(m, dim=4).reshape(2, 2, 2, 2)
    if subsystem == "B":
        return a.transpose(0, 3, 2, 1).reshape(4, 4)
    if subsystem == "A":
        return a.transpose(2, 1, 0, 3).reshape(4, 4)
    raise ValueError(f"subsystem must be 'A' or 'B', got {subsystem!r}")


def _fix_phases(vectors: np.ndarray) -> np.ndarray:
    """Make the first significant component of every column real positive."""
    out = vectors.copy()
    for k in range(out.shape[1]):
        col = out[:, k]
        idx = np.flatnonzero(np.abs(col) > 1e-12)
        if idx.size:
            pivot = col[idx[0]]
            out[:, k] = col * (pivot.conjugate() / abs(pivot))
    return out


def _sort_degenerate(values: np.ndarray, vectors: np.ndarray):
    """Lexicographically order eigenvector columns inside degenerate groups."""
    order = list(range(values.size))
    start = 0
    while start < values.size:
        stop = start + 1
        while stop < values.size and values[stop] - values[start] <= 1e-10:
            stop += 1
        if stop - start > 1:
            block = sorted(
                order[start:stop],
                key=lambda k: tuple(np.round(np.concatenate(
                    [vectors[:, k].real, vectors[:, k].imag]), 10)),
            )
            order[start:stop] = block
        start = stop
    return values, vectors[:, order]


def hermitian_eigen(m) -> Spectrum:
    """Eigendecomposition of a Hermitian matrix with deterministic output.

    Eigenvalues ascend; eigenvector phases are fixed and degenerate columns
    are ordered lexicographically so that equal inputs give equal outputs.
    Raises :class:`NotHermitian` when the input deviates from Hermiticity
    by more than 1e-10; smaller deviations are symmetrized away.
    """
    a = as_matrix(m)
    if not is_hermitian(a):
        raise NotHermitian("matrix is not Hermitian to 1e-10")
    sym = 0.5 * (a + a.conj().T)
    values, vectors = np.linalg.eigh(sym)
    values, vectors = _sort_degenerate(values, _fix_phases(vectors))
    return Spectrum(eigenvalues=values, eigenvectors=vectors)


def psd_power(m, r: float) -> np.ndarray:
    """Fractional power of a Hermitian PSD matrix via its spectrum.

    Zero eigenvalues map to zero for r >= 0 (support convention), so e.g.
    any positive power of a projector is the projector itself.  Negative
    powers require the matrix to be nonsingular.
    """
    spec = hermitian_eigen(m)
    lam = spec.eigenvalues.copy()
    if lam.min() < -SUPPORT_TOL:
        raise ValueError(f"matrix is not PSD: smallest eigenvalue {lam.min()}")
    lam[np.abs(lam) <= SUPPORT_TOL] = 0.0
    if r < 0 and np.any(lam == 0.0):
        raise SingularMatrix("negative power of a singular matrix")
    powered = np.zeros_like(lam)
    pos = lam > 0.0
    powered[pos] = lam[pos] ** r
    v = spec.eigenvectors
    return v @ np.diag(powered) @ v.conj().T
