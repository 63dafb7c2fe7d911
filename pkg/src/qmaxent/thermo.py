"""Thermodynamic layer over the inferred states.

The entropy of an inferred state is S_q = (Z_q**(1-q) - 1)/(1-q), the
multipliers are its gradient with respect to the data, and
F_q = lambda_1 * b_q + lambda_2 * sigma2_q - S_q plays the role of a free
energy.  The Legendre structure is checked numerically: central differences
of S_q against the analytic multipliers, and the differential identity
dF = b_q dlambda_1 + sigma2_q dlambda_2 along a short feasible path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConstraintError, QOutOfDomain, StencilOutOfDomain
from .bell import B_MAX
from .inference import (
    ConstraintSet,
    InferredState,
    Multipliers,
    Q_ONE_SEAM,
    infer_state,
    lagrange_multipliers,
    validate_constraints,
)


def entropy_of_state(s: InferredState) -> float:
    """Entropy from the stored normalizer: (c_q - 1)/(1 - q), c_q = Z_q**(1-q).

    On the pure boundary c_q = 1 and the entropy vanishes identically.
    Agrees with the direct spectral evaluation on the materialized matrix.
    """
    q = s.q
    if abs(q - 1.0) < Q_ONE_SEAM:
        return -sum(x * math.log(x) for x in s.eigenvalues() if x > 0.0)
    return (s.c_q - 1.0) / (1.0 - q)


@dataclass(frozen=True)
class ThermoPoint:
    S_q: float
    F_q: float
    multipliers: Multipliers


def free_energy(s: InferredState) -> ThermoPoint:
    """Free energy at an interior point; diverging multipliers propagate."""
    m = lagrange_multipliers(s)
    entropy = entropy_of_state(s)
    value = m.lambda_1 * s.constraints.b_q + m.lambda_2 * s.constraints.sigma2_q - entropy
    return ThermoPoint(S_q=entropy, F_q=value, multipliers=m)


@dataclass(frozen=True)
class LegendreReport:
    dS_db_fd: float
    dS_dsigma2_fd: float
    lambda_1: float
    lambda_2: float
    rel_err_1: float
    rel_err_2: float
    path_residual: float


def _entropy_at(q, b, s2):
    return entropy_of_state(infer_state(validate_constraints(q, b, s2)))


def _point(q, b, s2):
    try:
        return infer_state(validate_constraints(q, b, s2))
    except ConstraintError as exc:
        raise StencilOutOfDomain(f"stencil point (b={b}, sigma2={s2}) infeasible: {exc}") from exc


def legendre_report(c: ConstraintSet, h: float = 1e-5) -> LegendreReport:
    """Finite-difference audit of the multiplier relations and of dF.

    Central differences of S_q(b_q, sigma2_q) with step h are compared
    against the analytic multipliers.  The path residual discretizes
    dF = b_q dlambda_1 + sigma2_q dlambda_2 over ten steps of a straight
    feasible segment (midpoint rule), reporting the worst relative defect.

    Note the multiplier-stationarity identity dS/dlambda = 0 at fixed data
    needs no numerics: in this closed form S_q is a function of the data
    alone, so the derivative vanishes by representation.
    """
    if not 1e-8 <= h <= 1e-3:
        raise ValueError(f"finite-difference step must lie in [1e-8, 1e-3], got {h}")
    q, b, s2 = c.q, c.b_q, c.sigma2_q
    center = _point(q, b, s2)
    m = lagrange_multipliers(center)
    for db, ds in ((h, 0.0), (-h, 0.0), (0.0, h), (0.0, -h)):
        _point(q, b + db, s2 + ds)
    d_s_db = (_entropy_at(q, b + h, s2) - _entropy_at(q, b - h, s2)) / (2.0 * h)
    d_s_ds2 = (_entropy_at(q, b, s2 + h) - _entropy_at(q, b, s2 - h)) / (2.0 * h)
    rel_1 = abs(d_s_db - m.lambda_1) / max(abs(m.lambda_1), 1e-12)
    rel_2 = abs(d_s_ds2 - m.lambda_2) / max(abs(m.lambda_2), 1e-12)

    steps = 10
    points = []
    for k in range(steps + 1):
        state = _point(q, b + k * h, s2 + k * h)
        points.append((free_energy(state), b + k * h, s2 + k * h))
    residual = 0.0
    for k in range(steps):
        t0, b0, s0 = points[k]
        t1, b1, s1 = points[k + 1]
        df = t1.F_q - t0.F_q
        predicted = (0.5 * (b0 + b1) * (t1.multipliers.lambda_1 - t0.multipliers.lambda_1)
                     + 0.5 * (s0 + s1) * (t1.multipliers.lambda_2 - t0.multipliers.lambda_2))
        residual = max(residual, abs(df - predicted) / (abs(df) + 1e-15))
    return LegendreReport(
        dS_db_fd=d_s_db, dS_dsigma2_fd=d_s_ds2,
        lambda_1=m.lambda_1, lambda_2=m.lambda_2,
        rel_err_1=rel_1, rel_err_2=rel_2,
        path_residual=residual,
    )


@dataclass(frozen=True)
class PurificationPath:
    """Samples along the minimum-uncertainty line toward the pure corner."""

    t: np.ndarray
    Z_q: np.ndarray
    S_q: np.ndarray
    fidelity: np.ndarray


def purification_path_check(q: float, steps: int) -> PurificationPath:
    """Walk the line sigma2_q = 2*sqrt(2)*b_q with b_q = 2*sqrt(2)*t, t in (0, 1].

    At t = 1 the data force the pure maximally entangled state: Z_q = 1 and
    S_q = 0 exactly.  The fidelity recorded is the overlap with that target
    state, which is simply the phi_plus eigenvalue.
    """
    if not q > 0.0:
        raise QOutOfDomain(f"entropic index must satisfy q > 0, got q={q}")
    if steps < 2:
        raise ValueError(f"need at least 2 path steps, got {steps}")
    ts = np.linspace(1.0 / steps, 1.0, steps)
    z_vals, s_vals, fid = [], [], []
    for t in ts:
        state = infer_state(validate_constraints(q, B_MAX * t, 8.0 * t))
        z_vals.append(state.Z_q)
        s_vals.append(entropy_of_state(state))
        fid.append(state.eig_phi_plus)
    return PurificationPath(
        t=ts, Z_q=np.array(z_vals), S_q=np.array(s_vals), fidelity=np.array(fid)
    )
