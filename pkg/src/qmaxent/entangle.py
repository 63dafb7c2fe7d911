"""Entanglement verdicts and the (b_q, sigma2_q) region scanner.

The primary criterion: an inferred state is entangled when its largest
eigenvalue exceeds 1/2 (a sufficient condition; the boundary value 1/2 is
classified as not entangled).  The partial-transpose test provides an
independent cross-check for arbitrary two-qubit states.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
import os

import numpy as np

from .errors import EmptyGrid, QOutOfDomain, UncertaintyViolated
from .bell import B_MAX
from .inference import InferredState, infer_state, validate_constraints
from .smallmat import as_matrix, hermitian_eigen, partial_transpose

#: verdict margins smaller than this count as a boundary tie
MARGIN_TOL = 1e-12


@dataclass(frozen=True)
class Verdict:
    entangled: bool
    margin: float


def criterion_verdict(s: InferredState) -> Verdict:
    """Largest-eigenvalue criterion: entangled iff lambda_max > 1/2 (strict)."""
    margin = s.lambda_max - 0.5
    return Verdict(entangled=margin > MARGIN_TOL, margin=margin)


def ppt_verdict(rho) -> Verdict:
    """Peres criterion: entangled iff the partial transpose is not PSD.

    The margin is the smallest eigenvalue of the partial transpose, so a
    negative margin signals entanglement here (opposite sign convention
    from the eigenvalue criterion).
    """
    pt = partial_transpose(as_matrix(rho, dim=4), "B")
    margin = float(hermitian_eigen(pt).eigenvalues[0])
    return Verdict(entangled=margin < -MARGIN_TOL, margin=margin)


@dataclass(frozen=True)
class RegionGrid:
    """Rasterized scan of the data domain, row-major with b varying fastest.

    Infeasible cells (uncertainty relation violated) carry lambda_max = nan
    and entangled = False.
    """

    q: float
    n: int
    b_q: np.ndarray
    sigma2_q: np.ndarray
    feasible: np.ndarray
    lambda_max: np.ndarray
    entangled: np.ndarray


def _scan_cell(q, b, s2):
    try:
        state = infer_state(validate_constraints(q, b, s2))
    except UncertaintyViolated:
        return False, float("nan"), False
    v = criterion_verdict(state)
    return True, state.lambda_max, v.entangled


def scan_region(q: float, n: int, workers: int | None = None) -> RegionGrid:
    """Uniform n x n scan of b in [0, 2*sqrt(2)] by sigma2 in [0, 8].

    Rows are assembled in deterministic cell order whatever the worker
    count, so repeated scans are byte-identical.
    """
    if not q > 0.0:
        raise QOutOfDomain(f"entropic index must satisfy q > 0, got q={q}")
    if n < 2:
        raise ValueError(f"grid resolution must be at least 2, got {n}")
    b_axis = np.linspace(0.0, B_MAX, n)
    s2_axis = np.linspace(0.0, 8.0, n)
    s2_grid, b_grid = np.meshgrid(s2_axis, b_axis, indexing="ij")
    b_flat = b_grid.ravel()
    s2_flat = s2_grid.ravel()

    def scan_row(j):
        return [_scan_cell(q, b_axis[i], s2_axis[j]) for i in range(n)]

    if workers is None:
        workers = os.cpu_count() or 1
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(scan_row, range(n)))
    else:
        rows = [scan_row(j) for j in range(n)]
    cells = [cell for row in rows for cell in row]
    feasible = np.array([c[0] for c in cells], dtype=bool)
    lam = np.array([c[1] for c in cells], dtype=float)
    ent = np.array([c[2] for c in cells], dtype=bool)
    return RegionGrid(q=q, n=n, b_q=b_flat, sigma2_q=s2_flat,
                      feasible=feasible, lambda_max=lam, entangled=ent)


def area_fraction(g: RegionGrid) -> float:
    """Entangled fraction of the feasible cells."""
    feasible = int(g.feasible.sum())
    if feasible == 0:
        raise EmptyGrid("region grid has no feasible cells")
    return float(g.entangled.sum()) / feasible
