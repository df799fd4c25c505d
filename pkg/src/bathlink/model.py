"""Physical parameters and the GKSL generator of the common-bath pair model.

The system is a qubit (Q) and a harmonic oscillator truncated to its first
excitation (HO), both at frequency ``omega``, damped only through a shared
thermal bath.  Tracing out the bath leaves a Markovian master equation

    d rho / dt = -i [H, rho] + L_Q[rho] + L_HO[rho] + L_QHO[rho],

with ``H = (omega/2) sigma_z (x) 1 + omega 1 (x) sigma_+ sigma_-`` and a
dissipator whose coefficient (Kossakowski) matrix is rank two: the bath
couples only to the collective operators ``sigma_-^Q + eta sigma_-^HO`` and
``sigma_+^Q + eta sigma_+^HO``.  Rates per unit dimensionless time (zeta*t):

    gamma_1 = zeta e^(1/T) / (e^(1/T) - 1)      (emission)
    gamma_2 = zeta / (e^(1/T) - 1)              (absorption)

so ``gamma_1 - gamma_2 = zeta`` and ``gamma_1/gamma_2 = e^(1/T)``.  The
temperature T is dimensionless (measured in units of the system frequency);
it enters only through ``exp(1/T)``.

A consequence of the rank-two (fully collective) dissipator worth knowing:
at ``eta = 1`` the antisymmetric single-excitation state
``(|01> - |10>)/sqrt(2)`` is annihilated by both collective operators and is
an eigenstate of H, so it is decoherence-free.  Its population is conserved,
the generator's kernel is then two-dimensional, and the diagonal steady
state below is not the unique fixed point.  :func:`steady_state_numeric`
reports the kernel dimension instead of assuming uniqueness.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import eig as _eig

from .errors import ConfigError, DegenerateSteadyStateError, NumericalInvariantError
from .matops import (
    ID2,
    SIGMA_M,
    SIGMA_P,
    SIGMA_Z,
    hermitize,
    kron,
    unvec,
    vec,
)

# Lifted single-site operators in the pair basis.
SP_Q = kron(SIGMA_P, ID2)
SM_Q = kron(SIGMA_M, ID2)
SP_HO = kron(ID2, SIGMA_P)
SM_HO = kron(ID2, SIGMA_M)

#: Dissipator operator basis ordering (G1, G2, G3, G4).
LINDBLAD_BASIS = (SP_Q, SM_Q, SM_HO, SP_HO)

_RATE_CONSISTENCY_TOL = 1e-9


def rates_from_temperature(zeta: float, temperature: float) -> tuple[float, float]:
    """Thermal emission/absorption rates (gamma1, gamma2) from (zeta, T).

    ``gamma1 - gamma2 = zeta`` holds exactly up to rounding, and
    ``gamma1/gamma2 = exp(1/T)`` (detailed balance).
    """
    if zeta <= 0:
        raise ConfigError(f"zeta must be > 0, got {zeta}")
    if temperature <= 0:
        raise ConfigError(f"temperature must be > 0, got {temperature}")
    denom = math.expm1(1.0 / temperature)  # e^(1/T) - 1
    gamma2 = zeta / denom
    gamma1 = gamma2 + zeta
    return gamma1, gamma2


@dataclass(frozen=True)
class ModelParams:
    """Parameters of the generator.

    Either construct from explicit rates (:meth:`from_rates`) or from a bath
    temperature (:meth:`from_temperature`).  When ``temperature`` is present
    the stored rates must be consistent with it; supplying an inconsistent
    combination is a configuration error.
    """

    omega: float
    zeta: float
    gamma1: float
    gamma2: float
    eta: float
    temperature: float | None = None

    def __post_init__(self):
        if self.omega <= 0:
            raise ConfigError(f"omega must be > 0, got {self.omega}")
        if self.zeta <= 0:
            raise ConfigError(f"zeta must be > 0, got {self.zeta}")
        if self.gamma1 < 0 or self.gamma2 < 0:
            raise ConfigError(
                f"rates must be >= 0, got gamma1={self.gamma1}, gamma2={self.gamma2}"
            )
        if self.eta < 0:
            raise ConfigError(f"eta must be >= 0, got {self.eta}")
        if self.temperature is not None:
            g1, g2 = rates_from_temperature(self.zeta, self.temperature)
            if abs(g1 - self.gamma1) > _RATE_CONSISTENCY_TOL or abs(g2 - self.gamma2) > _RATE_CONSISTENCY_TOL:
                raise ConfigError(
                    "gamma1/gamma2 are inconsistent with temperature "
                    f"(expected {g1:.12g}, {g2:.12g})"
                )

    @classmethod
    def from_rates(
        cls, gamma1: float, gamma2: float, eta: float, omega: float, zeta: float = 1.0
    ) -> "ModelParams":
        return cls(omega=omega, zeta=zeta, gamma1=gamma1, gamma2=gamma2, eta=eta)

    @classmethod
    def from_temperature(
        cls, zeta: float, temperature: float, eta: float, omega: float
    ) -> "ModelParams":
        g1, g2 = rates_from_temperature(zeta, temperature)
        return cls(
            omega=omega, zeta=zeta, gamma1=g1, gamma2=g2, eta=eta, temperature=temperature
        )

    def to_dict(self) -> dict:
        d = {
            "omega": self.omega,
            "zeta": self.zeta,
            "gamma1": self.gamma1,
            "gamma2": self.gamma2,
            "eta": self.eta,
        }
        if self.temperature is not None:
            d["temperature"] = self.temperature
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ModelParams":
        return cls(
            omega=float(d["omega"]),
            zeta=float(d["zeta"]),
            gamma1=float(d["gamma1"]),
            gamma2=float(d["gamma2"]),
            eta=float(d["eta"]),
            temperature=float(d["temperature"]) if "temperature" in d else None,
        )


def hamiltonian(params: ModelParams) -> np.ndarray:
    """``(omega/2) sigma_z (x) 1 + omega 1 (x) sigma_+ sigma_-`` (4x4, diagonal)."""
    return 0.5 * params.omega * kron(SIGMA_Z, ID2) + params.omega * kron(
        ID2, SIGMA_P @ SIGMA_M
    )


def kossakowski_matrix(params: ModelParams) -> np.ndarray:
    """Dissipator coefficient matrix over (G1, G2, G3, G4).

    Hermitian and positive semidefinite with eigenvalues
    ``{2 gamma1 (1 + eta^2), 2 gamma2 (1 + eta^2), 0, 0}``; the two nonzero
    eigenvectors are the collective lowering/raising combinations.
    """
    g1, g2, eta = params.gamma1, params.gamma2, params.eta
    return np.array(
        [
            [2 * g2, 0, 0, 2 * eta * g2],
            [0, 2 * g1, 2 * eta * g1, 0],
            [0, 2 * eta * g1, 2 * eta**2 * g1, 0],
            [2 * eta * g2, 0, 0, 2 * eta**2 * g2],
        ],
        dtype=complex,
    )


def _dissipator_pair(rate: float, a: np.ndarray, rho: np.ndarray) -> np.ndarray:
    """``rate * (2 A rho A^dag - {A^dag A, rho})`` building block."""
    ad = a.conj().T
    ada = ad @ a
    return rate * (2.0 * (a @ rho @ ad) - (ada @ rho + rho @ ada))


def _rhs(params: ModelParams, rho: np.ndarray) -> np.ndarray:
    """Master-equation right-hand side, written term by term.

    This is deliberately independent of the superoperator construction in
    :func:`build_liouvillian`; the two are cross-checked in the test suite.
    """
    g1, g2, eta = params.gamma1, params.gamma2, params.eta
    h = hamiltonian(params)
    out = -1j * (h @ rho - rho @ h)
    # local qubit channel
    out += _dissipator_pair(g1, SM_Q, rho)
    out += _dissipator_pair(g2, SP_Q, rho)
    # local oscillator channel, scaled by eta^2
    out += _dissipator_pair(g1 * eta**2, SM_HO, rho)
    out += _dissipator_pair(g2 * eta**2, SP_HO, rho)
    # bath-induced cross coupling, scaled by eta
    def cross(rate, a, b, acc):
        # rate * (2 a rho b^dag - {b^dag a, rho}) and the (a <-> b) partner
        bd = b.conj().T
        bda = bd @ a
        acc += rate * (2.0 * (a @ rho @ bd) - (bda @ rho + rho @ bda))
        ad = a.conj().T
        adb = ad @ b
        acc += rate * (2.0 * (b @ rho @ ad) - (adb @ rho + rho @ adb))
        return acc

    out = cross(g1 * eta, SM_Q, SM_HO, out)
    out = cross(g2 * eta, SP_Q, SP_HO, out)
    return out


def apply_liouvillian(
    params: ModelParams, rho: np.ndarray, herm_tol: float = 1e-9
) -> np.ndarray:
    """Right-hand side of the master equation for a Hermitian ``rho``.

    The output is traceless and Hermitian to machine precision.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise ValueError(f"expected a 4x4 state, got {rho.shape}")
    dev = float(np.abs(rho - rho.conj().T).max())
    if dev >= herm_tol:
        raise ConfigError(f"state is not Hermitian within {herm_tol:g} (deviation {dev:.3e})")
    return _rhs(params, rho)


@dataclass(frozen=True)
class Liouvillian:
    """The full generator, both as a callable form and a 16x16 matrix.

    ``superop`` uses column-stacking vectorization, so
    ``unvec(superop @ vec(rho))`` equals the master-equation right-hand side.
    ``eigenvalues`` are the 16 generator eigenvalues (real parts <= 0);
    ``spectral_radius`` is ``max |eigenvalue|`` and bounds stable step sizes.
    """

    params: ModelParams
    hamiltonian: np.ndarray
    superop: np.ndarray
    eigenvalues: np.ndarray = field(repr=False)
    spectral_radius: float

    def apply(self, rho: np.ndarray) -> np.ndarray:
        return unvec(self.superop @ vec(rho))


def build_liouvillian(params: ModelParams, validate: bool = True) -> Liouvillian:
    """Assemble the 16x16 superoperator from the Kossakowski form.

    Each dissipator term ``K_ij (G_i rho G_j^dag - {G_j^dag G_i, rho}/2)``
    lifts to ``K_ij (conj(G_j) kron G_i - (1 kron G_j^dag G_i)/2
    - ((G_j^dag G_i)^T kron 1)/2)`` under column stacking.
    """
    h = hamiltonian(params)
    eye = np.eye(4, dtype=complex)
    s = -1j * (np.kron(eye, h) - np.kron(h.T, eye))
    kmat = kossakowski_matrix(params)
    for i in range(4):
        for j in range(4):
            kij = kmat[i, j]
            if kij == 0:
                continue
            gi, gj = LINDBLAD_BASIS[i], LINDBLAD_BASIS[j]
            gjd_gi = gj.conj().T @ gi
            s += kij * (
                np.kron(gj.conj(), gi)
                - 0.5 * np.kron(eye, gjd_gi)
                - 0.5 * np.kron(gjd_gi.T, eye)
            )
    eigvals = np.linalg.eigvals(s)
    radius = float(np.abs(eigvals).max())
    if validate:
        trace_row = vec(np.eye(4)).conj() @ s
        worst = float(np.abs(trace_row).max())
        if worst >= 1e-12:
            raise NumericalInvariantError(
                f"generator does not annihilate the trace (max {worst:.3e})"
            )
        max_re = float(eigvals.real.max())
        if max_re > 1e-10:
            raise NumericalInvariantError(
                f"generator eigenvalue with positive real part {max_re:.3e}"
            )
    return Liouvillian(
        params=params,
        hamiltonian=h,
        superop=s,
        eigenvalues=eigvals,
        spectral_radius=radius,
    )


def steady_state_analytic(params: ModelParams) -> np.ndarray:
    """Diagonal thermal fixed point ``diag(r^2, r, r, 1) / (1+r)^2``, r = gamma1/gamma2.

    Requires ``gamma2 > 0``; at gamma2 = 0 the ratio diverges and the
    zero-temperature kernel needs the degenerate analysis instead.
    """
    if params.gamma2 <= 0:
        raise ConfigError(
            "gamma2 = 0: the thermal-ratio steady state is undefined "
            "(gamma1/gamma2 diverges); use steady_state_numeric and inspect "
            "the kernel dimension"
        )
    r = params.gamma1 / params.gamma2
    return np.diag([r**2, r, r, 1.0]).astype(complex) / (1.0 + r) ** 2


@dataclass(frozen=True)
class SteadyStateResult:
    """Kernel eigenvector promoted to a state, plus kernel diagnostics."""

    state: np.ndarray
    null_space_dim: int
    eigenvalue: complex
    residual_max: float


def steady_state_numeric(
    liouvillian: Liouvillian,
    null_tol: float = 1e-8,
    require_unique: bool = True,
) -> SteadyStateResult:
    """Steady state from the eigenvector of the eigenvalue nearest zero.

    ``null_space_dim`` counts generator eigenvalues with ``|lambda| < null_tol``.
    When it differs from one the steady manifold is degenerate and the
    returned state is an arbitrary element of it; with ``require_unique``
    (the default) that situation raises instead of silently picking one.
    """
    w, v = _eig(liouvillian.superop)
    order = np.argsort(np.abs(w))
    dim = int(np.sum(np.abs(w) < null_tol))
    if require_unique and dim != 1:
        raise DegenerateSteadyStateError(
            f"steady manifold has dimension {dim} (eigenvalues within {null_tol:g} "
            "of zero); pass require_unique=False to inspect it"
        )
    candidate = unvec(v[:, order[0]])
    candidate = hermitize(candidate)
    tr = np.trace(candidate).real
    if abs(tr) < 1e-14:
        raise DegenerateSteadyStateError(
            "kernel eigenvector is traceless; the steady manifold is degenerate"
        )
    state = candidate / tr
    residual = float(np.abs(unvec(liouvillian.superop @ vec(state))).max())
    return SteadyStateResult(
        state=state,
        null_space_dim=dim,
        eigenvalue=complex(w[order[0]]),
        residual_max=residual,
    )
