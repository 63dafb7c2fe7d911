"""Entropic functionals: Tsallis entropy, escort expectations, divergences.

The divergence order q_prime of the generalized Kullback-Leibler entropy is
deliberately independent of the entropic index q used for inference; when a
caller leaves it unspecified the CLI defaults it to q.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NotHermitian, QOutOfDomain, SingularReference, SupportMismatch
from .inference import InferredState, Q_ONE_SEAM
from .smallmat import (
    SUPPORT_TOL,
    as_matrix,
    is_hermitian,
    partial_trace,
    validate_density_matrix,
)


def _spectrum_clamped(rho):
    lam, vec = np.linalg.eigh(0.5 * (rho + rho.conj().T))
    return np.clip(lam, 0.0, None), vec


def tsallis_entropy(rho, q: float) -> float:
    """(Tr rho**q - 1)/(1 - q); the von Neumann entropy for |q - 1| < 1e-6.

    Zero eigenvalues contribute nothing in either branch (0*log 0 = 0 and
    0**q = 0 for q > 0).
    """
    if not q > 0.0:
        raise QOutOfDomain(f"entropic index must satisfy q > 0, got q={q}")
    lam, _ = _spectrum_clamped(validate_density_matrix(rho))
    if abs(q - 1.0) < Q_ONE_SEAM:
        pos = lam[lam > 0.0]
        return float(-(pos * np.log(pos)).sum())
    return float(((lam ** q).sum() - 1.0) / (1.0 - q))


def q_expectation(rho, obs, q: float) -> float:
    """Escort expectation Tr(rho**q obs) / Tr(rho**q) of a Hermitian observable."""
    if not q > 0.0:
        raise QOutOfDomain(f"entropic index must satisfy q > 0, got q={q}")
    o = as_matrix(obs)
    if not is_hermitian(o):
        raise NotHermitian("observable is not Hermitian to 1e-10")
    lam, vec = _spectrum_clamped(validate_density_matrix(rho))
    lam_q = lam ** q
    diag = np.real(np.einsum("ij,jk,ki->i", vec.conj().T, o, vec))
    return float((lam_q * diag).sum() / lam_q.sum())


def _support_leak(rho, ref_vecs, ref_lam) -> float:
    """Probability mass of rho outside the support of the reference."""
    null = ref_vecs[:, ref_lam <= SUPPORT_TOL]
    if null.shape[1] == 0:
        return 0.0
    return float(np.real(np.einsum("ij,jk,ki->", null.conj().T, rho, null)))


def generalized_kl(rho, ref, q_prime: float) -> float:
    """Generalized Kullback-Leibler entropy of rho relative to ref.

    K = 1/(1-q') Tr[rho**q' (rho**(1-q') - ref**(1-q'))], which is
    nonnegative and vanishes iff the states coincide.  Matrix powers of the
    two (generally non-commuting) states are taken through two independent
    eigendecompositions.  For |q' - 1| < 1e-6 the ordinary relative entropy
    Tr[rho (log rho - log ref)] is returned.

    Domain restrictions: for q' > 1 the reference must be full rank
    (:class:`SingularReference` otherwise); for q' <= 1 the support of rho
    must lie inside the support of ref (:class:`SupportMismatch`).
    """
    if not q_prime > 0.0:
        raise QOutOfDomain(f"divergence order must satisfy q' > 0, got {q_prime}")
    rho = validate_density_matrix(rho)
    ref = validate_density_matrix(ref)
    lam, vec = _spectrum_clamped(rho)
    mu, wec = _spectrum_clamped(ref)
    seam = abs(q_prime - 1.0) < Q_ONE_SEAM
    if not seam and q_prime > 1.0:
        if mu.min() <= SUPPORT_TOL:
            raise SingularReference(
                f"reference state is singular (min eigenvalue {mu.min():.3g}) "
                f"but q'={q_prime} > 1 needs a negative power of it"
            )
    elif _support_leak(rho, wec, mu) > SUPPORT_TOL:
        raise SupportMismatch("state support is not contained in the reference support")
    if seam:
        pos = lam > SUPPORT_TOL
        own = float((lam[pos] * np.log(lam[pos])).sum())
        log_mu = np.where(mu > SUPPORT_TOL, np.log(np.maximum(mu, SUPPORT_TOL)), 0.0)
        log_ref = wec @ np.diag(log_mu) @ wec.conj().T
        cross = float(np.real(np.trace(rho @ log_ref)))
        return own - cross
    # Tr[rho**q' rho**(1-q')] collapses to Tr rho on the support of rho
    own = float(lam[lam > SUPPORT_TOL].sum())
    mu_pow = np.where(mu > SUPPORT_TOL, np.maximum(mu, SUPPORT_TOL) ** (1.0 - q_prime), 0.0)
    ref_pow = wec @ np.diag(mu_pow) @ wec.conj().T
    rho_pow = vec @ np.diag(lam ** q_prime) @ vec.conj().T
    cross = float(np.real(np.trace(rho_pow @ ref_pow)))
    return (own - cross) / (1.0 - q_prime)


def marginals(rho_ab):
    """Single-qubit reductions (Tr_B rho, Tr_A rho) of a two-qubit state."""
    rho = validate_density_matrix(as_matrix(rho_ab, dim=4))
    return partial_trace(rho, "B"), partial_trace(rho, "A")


@dataclass(frozen=True)
class MutualEntropyResult:
    value: float
    q_prime: float


def mutual_entropy(rho_ab, q_prime: float) -> MutualEntropyResult:
    """Generalized mutual entropy: divergence from the product of marginals."""
    rho_a, rho_b = marginals(rho_ab)
    ref = np.kron(rho_a, rho_b)
    return MutualEntropyResult(value=generalized_kl(rho_ab, ref, q_prime), q_prime=q_prime)


def mutual_entropy_closed_form(state: InferredState, q_prime: float | None = None) -> float:
    """Mutual entropy of an inferred state without materializing matrices.

    Both marginals of every inferred state are maximally mixed, so the
    reference is I/4 and commutes with the state:

        K = 1/(1-q') * (1 - 4**(q'-1) * Y**(-q') * sum_i w_i**(q'/q))

    with Y = sum_i w_i**(1/q) recovered from c_q = Y**(-q).  The divergence
    order defaults to the state's own entropic index.
    """
    if q_prime is None:
        q_prime = state.q
    if not q_prime > 0.0:
        raise QOutOfDomain(f"divergence order must satisfy q' > 0, got {q_prime}")
    q = state.q
    w = state.weights.as_tuple()
    if abs(q_prime - 1.0) < Q_ONE_SEAM:
        lam = np.asarray(state.eigenvalues())
        pos = lam[lam > 0.0]
        return float(np.log(4.0) + (pos * np.log(pos)).sum())
    if abs(q - 1.0) < Q_ONE_SEAM:
        escort_sum = sum(x ** q_prime for x in w if x > 0.0)
        y_factor = 1.0
    else:
        escort_sum = sum(math.exp(q_prime / q * math.log(x)) for x in w if x > 0.0)
        y_factor = state.c_q ** (q_prime / q)  # Y**(-q') since c_q = Y**(-q)
    return (1.0 - 4.0 ** (q_prime - 1.0) * y_factor * escort_sum) / (1.0 - q_prime)
