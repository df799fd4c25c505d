"""Correlation measures of the 4x4 pair state, in bits.

Negativity is computed from the eigenvalues of the partial transpose taken
on the HO side, with the trace-norm form kept as a live internal
cross-check.  Discord minimizes over projective measurements of the HO
part: a coarse Bloch-angle grid followed by derivative-free (Nelder-Mead)
refinement of the measured conditional entropy.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from ._format import fmt
from ._kernels import conditional_entropy_grid
from .errors import ConfigError, NumericalInvariantError
from .matops import partial_trace, partial_transpose_second

log = logging.getLogger(__name__)

DEFAULT_GRID = 64
REFINE_TOL = 1e-7
_P_FLOOR = 1e-12


def negativity(rho: np.ndarray) -> float:
    """Absolute sum of negative partial-transpose eigenvalues.

    Equals ``(||rho^T_HO||_1 - 1)/2``; both forms are evaluated and must
    agree to 1e-10.  Zero exactly for states with positive partial transpose.
    """
    pt = partial_transpose_second(rho)
    eigs = np.linalg.eigvalsh((pt + pt.conj().T) / 2)
    from_eigs = float(((np.abs(eigs) - eigs) / 2.0).sum())
    singular = float(np.linalg.svd(pt, compute_uv=False).sum())
    from_norm = (singular - np.trace(rho).real) / 2.0
    if abs(from_eigs - from_norm) >= 1e-10:
        raise NumericalInvariantError(
            f"negativity routes disagree: {from_eigs:.3e} vs {from_norm:.3e}"
        )
    return from_eigs


def von_neumann_entropy(rho: np.ndarray, trace_tol: float = 1e-6) -> float:
    """``-Tr(rho log2 rho)`` with eigenvalues below zero clipped to zero."""
    rho = np.asarray(rho, dtype=complex)
    tr = np.trace(rho).real
    if abs(tr - 1.0) > trace_tol:
        raise ConfigError(f"entropy input has trace {tr:.9g}, expected 1")
    eigs = np.linalg.eigvalsh((rho + rho.conj().T) / 2)
    eigs = np.clip(eigs, 0.0, None)
    nonzero = eigs[eigs > 0.0]
    return max(float(-(nonzero * np.log2(nonzero)).sum()), 0.0)


def mutual_information(rho: np.ndarray) -> float:
    """``S(rho_Q) + S(rho_HO) - S(rho)`` total correlations (bits)."""
    sq = von_neumann_entropy(partial_trace(rho, "first"))
    sho = von_neumann_entropy(partial_trace(rho, "second"))
    return sq + sho - von_neumann_entropy(rho)


@dataclass(frozen=True)
class MeasurementAngles:
    """Bloch angles of the measured axis on the HO side (radians)."""

    theta: float
    phi: float

    def __post_init__(self):
        if not 0.0 <= self.theta <= math.pi:
            raise ConfigError(f"theta must lie in [0, pi], got {self.theta}")
        if not 0.0 <= self.phi < 2.0 * math.pi:
            raise ConfigError(f"phi must lie in [0, 2*pi), got {self.phi}")


def measurement_projectors(angles: MeasurementAngles) -> tuple[np.ndarray, np.ndarray]:
    """The two rank-1 projectors of the measured axis (sum to identity)."""
    c = math.cos(angles.theta / 2.0)
    s = math.sin(angles.theta / 2.0)
    e = complex(math.cos(angles.phi), math.sin(angles.phi))
    n0 = np.array([c, s * e], dtype=complex)
    n1 = np.array([s, -c * e], dtype=complex)
    return np.outer(n0, n0.conj()), np.outer(n1, n1.conj())


def conditional_entropy(rho: np.ndarray, angles: MeasurementAngles) -> float:
    """``sum_i p_i S(rho_Q | outcome i)`` after measuring HO along the axis.

    Outcomes with probability below 1e-12 contribute zero.
    """
    rho = np.asarray(rho, dtype=complex)
    eye = np.eye(2, dtype=complex)
    total = 0.0
    for proj in measurement_projectors(angles):
        lifted = np.kron(eye, proj)
        m = lifted @ rho @ lifted
        p = np.trace(m).real
        if p <= _P_FLOOR:
            continue
        total += p * von_neumann_entropy(partial_trace(m, "first") / p)
    return total


@dataclass(frozen=True)
class CorrelationSample:
    """All correlation measures of one state (entropies in bits).

    ``mutual_info = classical_corr + discord`` holds by construction.
    """

    negativity: float
    mutual_info: float
    discord: float
    classical_corr: float
    optimal_angles: MeasurementAngles

    def csv_row(self, t: float) -> str:
        return ",".join(
            fmt(x)
            for x in (
                t,
                self.negativity,
                self.mutual_info,
                self.discord,
                self.classical_corr,
                self.optimal_angles.theta,
                self.optimal_angles.phi,
            )
        )

    @staticmethod
    def csv_header() -> str:
        return "t,negativity,mutual_info,discord,classical_corr,theta_opt,phi_opt"


def _canonical_angles(theta: float, phi: float) -> MeasurementAngles:
    """Map arbitrary real angles onto theta in [0, pi], phi in [0, 2*pi)."""
    theta = theta % (2.0 * math.pi)
    if theta > math.pi:
        theta = 2.0 * math.pi - theta
        phi = phi + math.pi
    phi = phi % (2.0 * math.pi)
    return MeasurementAngles(theta=min(theta, math.pi), phi=phi)


def discord(
    rho: np.ndarray, grid_size: int = DEFAULT_GRID, refine_tol: float = REFINE_TOL
) -> CorrelationSample:
    """Quantum discord with respect to projective measurements on HO.

    The classical correlation ``J = S(rho_Q) - min S(rho_Q|{measurement})``
    is maximized over a ``grid_size x grid_size`` Bloch-angle grid and then
    refined with Nelder-Mead to ``refine_tol``; discord is ``I - J_max``.
    If refinement fails to improve on the grid the grid optimum is kept and
    a warning is logged.
    """
    rho = np.asarray(rho, dtype=complex)
    s_q = von_neumann_entropy(partial_trace(rho, "first"))
    total = mutual_information(rho)
    thetas = np.linspace(0.0, math.pi, grid_size)
    phis = np.linspace(0.0, 2.0 * math.pi, grid_size, endpoint=False)
    grid = conditional_entropy_grid(rho, thetas, phis)
    it, ip = np.unravel_index(int(np.argmin(grid)), grid.shape)
    grid_best = float(grid[it, ip])

    def objective(x):
        return float(
            conditional_entropy_grid(rho, np.array([x[0]]), np.array([x[1]]))[0, 0]
        )

    res = minimize(
        objective,
        x0=np.array([thetas[it], phis[ip]]),
        method="Nelder-Mead",
        options={"xatol": 1e-8, "fatol": refine_tol * 1e-2, "maxiter": 600},
    )
    if res.fun <= grid_best:
        best = float(res.fun)
        angles = _canonical_angles(float(res.x[0]), float(res.x[1]))
    else:
        log.warning(
            "discord refinement did not improve on the grid (%.3e > %.3e); "
            "keeping the grid optimum",
            res.fun, grid_best,
        )
        best = grid_best
        angles = _canonical_angles(float(thetas[it]), float(phis[ip]))
    classical = s_q - best
    return CorrelationSample(
        negativity=negativity(rho),
        mutual_info=total,
        discord=total - classical,
        classical_corr=classical,
        optimal_angles=angles,
    )
