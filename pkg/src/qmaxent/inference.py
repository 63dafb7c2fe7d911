"""Closed-form maximum-Tsallis-entropy state from two-qubit correlation data.

The data are the escort expectation b_q of the observable B and the escort
expectation sigma2_q of B**2, taken with respect to the entropic index q.
Under these two constraints plus normalization, the entropy maximizer is
diagonal in the Bell basis and its spectrum has a closed form: writing

    w_plus  = (sigma2_q + 2*sqrt(2)*b_q) / 16      (phi_plus slot)
    w_minus = (sigma2_q - 2*sqrt(2)*b_q) / 16      (psi_minus slot)
    w_zero  = (8 - sigma2_q) / 16                  (each of phi_minus, psi_plus)

the eigenvalues are lambda_i = w_i**(1/q) / Y with Y = sum_i w_i**(1/q)
counted with multiplicity.  The w_i are exactly the escort weights
lambda_i**q / sum_j lambda_j**q of the optimal state, so the constraints
are reproduced identically.  The partition normalizer satisfies
Y = Z**((q-1)/q), and c_q = Tr rho**q = Z**(1-q) = Y**(-q).

Everything here is evaluated through logarithms of the weights, which is
stable for q near 1 where the exponents 1/(1-q) blow up.  The Gibbs /
von Neumann limit gets a dedicated branch for |q - 1| < 1e-6.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bell import B_MAX, bell_projectors
from .errors import (
    BOutOfRange,
    BoundaryDivergence,
    NegativeBracket,
    QOutOfDomain,
    SigmaOutOfRange,
    UncertaintyViolated,
)

#: width of the Gibbs-limit branch around q = 1
Q_ONE_SEAM = 1e-6
#: closed inequalities in the data domain are enforced with this slack
VALIDATION_TOL = 1e-12
#: floating-point dust from boundary data smaller than this is clamped away
CLAMP_TOL = 1e-13
SIGMA_MAX = 8.0


@dataclass(frozen=True)
class ConstraintSet:
    """Validated problem input (q, b_q, sigma2_q).

    Construction enforces the data domain: q > 0, 0 <= b_q <= 2*sqrt(2),
    sigma2_q <= 8 and the uncertainty relation sigma2_q >= 2*sqrt(2)*b_q,
    all with slack 1e-12.
    """

    q: float
    b_q: float
    sigma2_q: float

    def __post_init__(self):
        q, b, s2 = self.q, self.b_q, self.sigma2_q
        if not (q > 0.0) or not math.isfinite(q):
            raise QOutOfDomain(f"entropic index must satisfy q > 0, got q={q}")
        if not math.isfinite(b) or b < -VALIDATION_TOL or b > B_MAX + VALIDATION_TOL:
            raise BOutOfRange(f"b_q={b} outside [0, 2*sqrt(2)={B_MAX:.7f}]")
        if not math.isfinite(s2) or s2 > SIGMA_MAX + VALIDATION_TOL:
            raise SigmaOutOfRange(f"sigma2_q={s2} exceeds the maximum 8")
        if s2 - B_MAX * b < -VALIDATION_TOL:
            raise UncertaintyViolated(
                f"uncertainty relation sigma2_q >= 2*sqrt(2)*b_q violated: "
                f"{s2} < {B_MAX * b:.7g}"
            )


def validate_constraints(q: float, b: float, s2: float) -> ConstraintSet:
    """Validate raw data, raising a typed error naming the violated inequality."""
    return ConstraintSet(q=float(q), b_q=float(b), sigma2_q=float(s2))


@dataclass(frozen=True)
class EscortWeights:
    """Escort distribution of the optimal spectrum; w_zero is doubly occupied."""

    w_plus: float
    w_minus: float
    w_zero: float

    def as_tuple(self):
        return (self.w_plus, self.w_minus, self.w_zero, self.w_zero)


def _clamp01(w: float) -> float:
    if -CLAMP_TOL < w < 0.0:
        return 0.0
    if 1.0 < w < 1.0 + CLAMP_TOL:
        return 1.0
    return w


def escort_weights(c: ConstraintSet) -> EscortWeights:
    """Escort weights of the optimal state, linear in the data.

    Sub-1e-13 negative dust from boundary data (sigma2_q = 2*sqrt(2)*b_q
    or sigma2_q = 8 hit in floating point) is clamped to exact zero.
    """
    t = B_MAX * c.b_q
    return EscortWeights(
        w_plus=_clamp01((c.sigma2_q + t) / 16.0),
        w_minus=_clamp01((c.sigma2_q - t) / 16.0),
        w_zero=_clamp01((8.0 - c.sigma2_q) / 16.0),
    )


@dataclass(frozen=True)
class InferredState:
    """Bell-diagonal maximum-entropy state.

    eig_phi_plus, eig_psi_minus and the doubly degenerate eig_deg are the
    eigenvalues on the phi_plus, psi_minus and {phi_minus, psi_plus} slots.
    Z_q is the partition normalizer and c_q = Z_q**(1-q) = Tr rho**q.
    """

    constraints: ConstraintSet
    weights: EscortWeights
    eig_phi_plus: float
    eig_psi_minus: float
    eig_deg: float
    Z_q: float
    c_q: float

    @property
    def q(self) -> float:
        return self.constraints.q

    def eigenvalues(self):
        """Spectrum as (phi_plus, psi_minus, deg, deg)."""
        return (self.eig_phi_plus, self.eig_psi_minus, self.eig_deg, self.eig_deg)

    @property
    def lambda_max(self) -> float:
        return max(self.eig_phi_plus, self.eig_deg)


def _root_q(w: float, q: float) -> float:
    """w**(1/q) with the support convention 0**(1/q) = 0."""
    return 0.0 if w <= 0.0 else math.exp(math.log(w) / q)


def infer_state(c: ConstraintSet) -> InferredState:
    """Evaluate the closed-form spectrum, normalizer and c_q for the data.

    For |q - 1| < 1e-6 the Gibbs branch is used: the eigenvalues equal the
    escort weights, Z_q = exp(S) with S the von Neumann entropy of the
    weights, and c_q = 1.
    """
    w = escort_weights(c)
    q = c.q
    if abs(q - 1.0) < Q_ONE_SEAM:
        s1 = -sum(x * math.log(x) for x in w.as_tuple() if x > 0.0)
        return InferredState(
            constraints=c, weights=w,
            eig_phi_plus=w.w_plus, eig_psi_minus=w.w_minus, eig_deg=w.w_zero,
            Z_q=math.exp(s1), c_q=1.0,
        )
    yp = _root_q(w.w_plus, q)
    ym = _root_q(w.w_minus, q)
    y0 = _root_q(w.w_zero, q)
    y_norm = yp + ym + 2.0 * y0
    ln_y = math.log(y_norm)
    return InferredState(
        constraints=c, weights=w,
        eig_phi_plus=yp / y_norm, eig_psi_minus=ym / y_norm, eig_deg=y0 / y_norm,
        Z_q=math.exp(q / (q - 1.0) * ln_y),
        c_q=math.exp(-q * ln_y),
    )


@dataclass(frozen=True)
class MuFactors:
    """Bracket values of the fixed-point form on the three distinct slots.

    They satisfy mu_pm**(1/(1-q)) = (w_mp * Z_q)**(1/q) with the slot
    swap: mu_plus pairs with w_minus and mu_minus with w_plus.
    """

    mu_zero: float
    mu_plus: float
    mu_minus: float


def mu_factors(s: InferredState) -> MuFactors:
    q = s.q
    if abs(q - 1.0) < Q_ONE_SEAM:
        return MuFactors(mu_zero=1.0, mu_plus=1.0, mu_minus=1.0)
    w = s.weights
    e = (1.0 - q) / q

    def mu(weight):
        if weight > 0.0:
            return math.exp(e * math.log(weight * s.Z_q))
        return 0.0 if e > 0.0 else math.inf

    return MuFactors(mu_zero=mu(w.w_zero), mu_plus=mu(w.w_minus), mu_minus=mu(w.w_plus))


@dataclass(frozen=True)
class Multipliers:
    lambda_1: float
    lambda_2: float


#: weights at or below this are treated as sitting on the domain boundary
BOUNDARY_TOL = 1e-12


def lagrange_multipliers(s: InferredState) -> Multipliers:
    """Multipliers conjugate to (b_q, sigma2_q), finite at interior points.

    The generic expressions are

        lambda_1 = c_q / (4*sqrt(2)*(1-q)) * (mu_plus - mu_minus)
        lambda_2 = c_q / ((sigma2_q-8)*(1-q))
                   * ( (1-beta)/2 * mu_plus + (1+beta)/2 * mu_minus - 1 )

    with beta = b_q / (2*sqrt(2)).  Both are evaluated through expm1 so the
    1/(1-q) pole cancels exactly against the O(1-q) numerators; the q -> 1
    limit branch writes the same quantities with logarithms.  They satisfy
    lambda_1 = dS/db_q and lambda_2 = dS/dsigma2_q at fixed q.
    """
    c = s.constraints
    w = s.weights
    if (min(w.w_plus, w.w_minus, w.w_zero) <= BOUNDARY_TOL
            or c.sigma2_q >= SIGMA_MAX - BOUNDARY_TOL):
        raise BoundaryDivergence(
            "Lagrange multipliers diverge: data sit on the boundary of the domain "
            f"(weights {w.as_tuple()[:3]}, sigma2_q={c.sigma2_q})"
        )
    q, b, s2 = c.q, c.b_q, c.sigma2_q
    beta = b / B_MAX
    ln_z = math.log(s.Z_q)
    a_plus = math.log(w.w_minus) + ln_z   # exponent argument of mu_plus
    a_minus = math.log(w.w_plus) + ln_z   # exponent argument of mu_minus
    if abs(q - 1.0) < Q_ONE_SEAM:
        lam1 = (a_plus - a_minus) / (2.0 * B_MAX)
        lam2 = (0.5 * (1.0 - beta) * a_plus + 0.5 * (1.0 + beta) * a_minus) / (s2 - 8.0)
        return Multipliers(lambda_1=lam1, lambda_2=lam2)
    e = (1.0 - q) / q
    mu_minus = math.exp(e * a_minus)
    # mu_plus - mu_minus = mu_minus * expm1(e*(a_plus - a_minus)), no cancellation
    lam1 = s.c_q / (2.0 * B_MAX * (1.0 - q)) * mu_minus * math.expm1(e * (a_plus - a_minus))
    bracket = (0.5 * (1.0 - beta) * math.expm1(e * a_plus)
               + 0.5 * (1.0 + beta) * math.expm1(e * a_minus))
    lam2 = s.c_q / ((s2 - 8.0) * (1.0 - q)) * bracket
    return Multipliers(lambda_1=lam1, lambda_2=lam2)


def fixed_point_residual(s: InferredState, m: Multipliers) -> float:
    """Rebuild the state from its fixed-point form and report the mismatch.

    The state must solve rho = Z**-1 * [ (1 + (1-q)/c_q * (l1*b + l2*s2)) I
    - (1-q)/c_q * (l1*B + l2*B**2) ]**(1/(1-q)).  On each Bell slot the
    bracket is scalar; this evaluates those scalars from (lambda_1,
    lambda_2, c_q), renormalizes, and returns the largest absolute
    eigenvalue discrepancy against the stored spectrum.  The trace of the
    rebuilt operator is the partition normalizer, so a small residual also
    certifies Z_q.
    """
    c = s.constraints
    q, b, s2 = c.q, c.b_q, c.sigma2_q
    l1, l2 = m.lambda_1, m.lambda_2
    if not (math.isfinite(l1) and math.isfinite(l2)):
        raise BoundaryDivergence("multipliers are not finite")
    # bracket increments on the phi_plus / psi_minus / degenerate slots;
    # the observable eigenvalues there are (+2sqrt2, -2sqrt2, 0) for B and
    # (8, 8, 0) for B**2
    if abs(q - 1.0) < Q_ONE_SEAM:
        base = l1 * b + l2 * s2
        exps = [base - (l1 * B_MAX + l2 * 8.0),
                base - (-l1 * B_MAX + l2 * 8.0),
                base]
        vals = [math.exp(x) for x in exps]
    else:
        scale = (1.0 - q) / s.c_q
        deltas = [scale * (l1 * (b - B_MAX) + l2 * (s2 - 8.0)),
                  scale * (l1 * (b + B_MAX) + l2 * (s2 - 8.0)),
                  scale * (l1 * b + l2 * s2)]
        vals = []
        for d in deltas:
            bracket = 1.0 + d
            # reconstruction of a vanishing bracket carries O(eps) sign dust;
            # genuine negativity still raises
            if bracket < -1e-12 or (bracket <= 0.0 and q > 1.0):
                raise NegativeBracket(
                    f"bracket argument {bracket} is not admissible for q={q}"
                )
            vals.append(math.exp(math.log1p(d) / (1.0 - q)) if bracket > 0.0 else 0.0)
    z_rebuilt = vals[0] + vals[1] + 2.0 * vals[2]
    rebuilt = [v / z_rebuilt for v in vals]
    stored = (s.eig_phi_plus, s.eig_psi_minus, s.eig_deg)
    return max(abs(r - t) for r, t in zip(rebuilt, stored))


def to_density_matrix(s: InferredState) -> np.ndarray:
    """Materialize the 4x4 density matrix in the computational basis."""
    projs = bell_projectors()
    rho = (s.eig_phi_plus * projs["phi_plus"]
           + s.eig_psi_minus * projs["psi_minus"]
           + s.eig_deg * (projs["phi_minus"] + projs["psi_plus"]))
    return 0.5 * (rho + rho.conj().T)
