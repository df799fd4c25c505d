import math

import numpy as np
import pytest

from bathlink.errors import ConfigError, DegenerateSteadyStateError
from bathlink.matops import max_abs_diff, trace_norm, unvec, vec
from bathlink.model import (
    ModelParams,
    apply_liouvillian,
    build_liouvillian,
    hamiltonian,
    kossakowski_matrix,
    rates_from_temperature,
    steady_state_analytic,
    steady_state_numeric,
)
from oracles import random_hermitian


def ket(index):
    v = np.zeros(4, dtype=complex)
    v[index] = 1.0
    return v


def proj(i, j):
    return np.outer(ket(i), ket(j).conj())


# ------------------------------------------------------------------- rates

def test_rates_canonical_pair():
    g1, g2 = rates_from_temperature(1.0, 1.0 / math.log(101.0))
    assert abs(g1 - 1.01) < 1e-12
    assert abs(g2 - 0.01) < 1e-12


def test_rates_low_temperature_limit():
    g1, g2 = rates_from_temperature(1.0, 0.05)
    assert abs(g2 - 1.0 / math.expm1(20.0)) < 1e-22
    assert g2 == pytest.approx(2.061e-9, rel=1e-3)
    assert abs(g1 - 1.0 - g2) < 1e-15


def test_rates_doubling_example():
    g1, g2 = rates_from_temperature(2.0, 1.0 / math.log(2.0))
    assert abs(g1 - 4.0) < 1e-12
    assert abs(g2 - 2.0) < 1e-12


@pytest.mark.parametrize("seed", range(6))
def test_rates_difference_identity(seed):
    rng = np.random.default_rng(seed)
    zeta = rng.uniform(0.1, 3.0)
    temp = rng.uniform(0.05, 5.0)
    g1, g2 = rates_from_temperature(zeta, temp)
    assert g1 > g2 > 0
    assert abs((g1 - g2) - zeta) < 1e-12 * max(1.0, g1)
    assert abs(g1 / g2 - math.exp(1.0 / temp)) < 1e-9 * math.exp(1.0 / temp)


def test_rates_reject_non_positive():
    with pytest.raises(ConfigError):
        rates_from_temperature(0.0, 1.0)
    with pytest.raises(ConfigError):
        rates_from_temperature(1.0, -0.5)


# ------------------------------------------------------------------ params

def test_params_reject_inconsistent_temperature():
    with pytest.raises(ConfigError):
        ModelParams(omega=1.0, zeta=1.0, gamma1=5.0, gamma2=1.0, eta=1.0, temperature=1.0)


def test_params_roundtrip_with_temperature():
    p = ModelParams.from_temperature(zeta=1.0, temperature=0.5, eta=0.7, omega=0.001)
    q = ModelParams.from_dict(p.to_dict())
    assert q == p
    assert "temperature" in p.to_dict()


def test_params_roundtrip_without_temperature():
    p = ModelParams.from_rates(1.01, 0.01, 1.0, 0.001)
    d = p.to_dict()
    assert "temperature" not in d
    assert ModelParams.from_dict(d) == p


def test_params_validation():
    with pytest.raises(ConfigError):
        ModelParams.from_rates(-1.0, 0.01, 1.0, 0.001)
    with pytest.raises(ConfigError):
        ModelParams.from_rates(1.0, 0.01, -0.2, 0.001)
    with pytest.raises(ConfigError):
        ModelParams.from_rates(1.0, 0.01, 1.0, 0.0)


# ------------------------------------------------------------- kossakowski

def test_kossakowski_canonical_matrix(canonical_params):
    expected = np.array(
        [
            [0.02, 0, 0, 0.02],
            [0, 2.02, 2.02, 0],
            [0, 2.02, 2.02, 0],
            [0.02, 0, 0, 0.02],
        ]
    )
    assert max_abs_diff(kossakowski_matrix(canonical_params), expected) < 1e-14


@pytest.mark.parametrize("seed", range(10))
def test_kossakowski_spectrum_formula(seed):
    rng = np.random.default_rng(400 + seed)
    g1, g2 = rng.uniform(0.0, 3.0, size=2)
    eta = rng.uniform(0.0, 2.0)
    p = ModelParams.from_rates(g1, g2, eta, 0.001)
    k = kossakowski_matrix(p)
    assert max_abs_diff(k, k.conj().T) == 0.0
    eigs = np.sort(np.linalg.eigvalsh(k))
    expected = np.sort([2 * g1 * (1 + eta**2), 2 * g2 * (1 + eta**2), 0.0, 0.0])
    assert np.allclose(eigs, expected, atol=1e-10)
    assert eigs.min() > -1e-12  # PSD: completely positive dynamics


def test_kossakowski_decoupled_limit():
    p = ModelParams.from_rates(1.3, 0.4, 0.0, 0.001)
    assert max_abs_diff(kossakowski_matrix(p), np.diag([0.8, 2.6, 0.0, 0.0])) < 1e-14


# --------------------------------------------------------------- generator

def test_hamiltonian_is_diagonal_with_expected_levels(canonical_params):
    h = hamiltonian(canonical_params)
    om = canonical_params.omega
    assert np.allclose(np.diag(h), [-om / 2, om / 2, om / 2, 3 * om / 2])
    assert max_abs_diff(h, np.diag(np.diag(h))) == 0.0


def test_build_and_apply_agree_on_random_hermitian(canonical_params, canonical_liouvillian):
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(100):
        rho = random_hermitian(rng)
        direct = apply_liouvillian(canonical_params, rho)
        via_superop = canonical_liouvillian.apply(rho)
        worst = max(worst, max_abs_diff(direct, via_superop))
    assert worst < 1e-12


@pytest.mark.parametrize("seed", range(4))
def test_generator_adjoint_and_trace_properties(seed, canonical_liouvillian):
    rng = np.random.default_rng(500 + seed)
    a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))  # general, non-Hermitian
    s = canonical_liouvillian.superop
    l_a = unvec(s @ vec(a))
    l_a_dag = unvec(s @ vec(a.conj().T))
    assert max_abs_diff(l_a.conj().T, l_a_dag) < 1e-12
    assert abs(np.trace(l_a)) < 1e-13


def test_apply_preserves_trace_and_hermiticity(canonical_params):
    rng = np.random.default_rng(8)
    for _ in range(100):
        rho = random_hermitian(rng)
        out = apply_liouvillian(canonical_params, rho)
        assert abs(np.trace(out)) < 1e-12
        assert max_abs_diff(out, out.conj().T) < 1e-12


def test_apply_rejects_non_hermitian(canonical_params):
    with pytest.raises(ConfigError):
        apply_liouvillian(canonical_params, proj(0, 1))


def test_apply_linearity(canonical_params):
    rng = np.random.default_rng(9)
    r1, r2 = random_hermitian(rng), random_hermitian(rng)
    a, b = 0.3, -1.7
    lhs = apply_liouvillian(canonical_params, a * r1 + b * r2)
    rhs = a * apply_liouvillian(canonical_params, r1) + b * apply_liouvillian(canonical_params, r2)
    assert max_abs_diff(lhs, rhs) < 1e-12


def test_apply_on_doubly_excited_state(canonical_params):
    # both parts excited, eta = 1: pure loss into the symmetric channel
    rho = proj(3, 3)
    g1 = canonical_params.gamma1
    expected = 2 * g1 * (
        proj(1, 1) + proj(2, 2) - 2 * proj(3, 3) + proj(1, 2) + proj(2, 1)
    )
    assert max_abs_diff(apply_liouvillian(canonical_params, rho), expected) < 1e-12


def test_apply_decoupled_oscillator():
    p = ModelParams.from_rates(1.01, 0.01, 0.0, 0.001)
    rho = proj(1, 1)  # |01><01|: qubit ground, oscillator excited
    expected = 2 * p.gamma2 * (proj(3, 3) - proj(1, 1))
    assert max_abs_diff(apply_liouvillian(p, rho), expected) < 1e-14


def test_superop_trace_annihilation_and_spectrum(canonical_liouvillian):
    s = canonical_liouvillian.superop
    trace_row = vec(np.eye(4)).conj() @ s
    assert np.abs(trace_row).max() < 1e-12
    assert canonical_liouvillian.eigenvalues.real.max() <= 1e-10


# ------------------------------------------------------------ steady state

def test_steady_state_analytic_canonical(canonical_params, canonical_liouvillian):
    ss = steady_state_analytic(canonical_params)
    expected = np.diag([10201.0, 101.0, 101.0, 1.0]) / 10404.0
    assert max_abs_diff(ss, expected) < 1e-15
    assert abs(np.trace(ss) - 1.0) < 1e-14
    assert np.abs(canonical_liouvillian.apply(ss)).max() < 1e-10


def test_steady_state_analytic_equal_rates():
    p = ModelParams.from_rates(0.7, 0.7, 1.0, 0.001)
    assert max_abs_diff(steady_state_analytic(p), np.eye(4) / 4) < 1e-15


def test_steady_state_analytic_rejects_zero_gamma2():
    p = ModelParams.from_rates(1.0, 0.0, 1.0, 0.001)
    with pytest.raises(ConfigError):
        steady_state_analytic(p)


def test_steady_state_numeric_generic_coupling():
    # eta != 1 keeps the kernel one-dimensional
    p = ModelParams.from_rates(1.01, 0.01, 0.7, 0.001)
    result = steady_state_numeric(build_liouvillian(p))
    assert result.null_space_dim == 1
    assert trace_norm(result.state - steady_state_analytic(p)) < 1e-8
    assert result.residual_max < 1e-10


def test_steady_state_numeric_equal_couplings_is_degenerate(canonical_liouvillian):
    # at eta = 1 both collective jump operators annihilate the antisymmetric
    # single-excitation state, so the kernel is two-dimensional
    with pytest.raises(DegenerateSteadyStateError):
        steady_state_numeric(canonical_liouvillian)
    result = steady_state_numeric(canonical_liouvillian, require_unique=False)
    assert result.null_space_dim == 2
    assert result.residual_max < 1e-10


def test_steady_state_numeric_zero_temperature_dark_state():
    p = ModelParams.from_rates(1.0, 0.0, 1.0, 0.001)
    result = steady_state_numeric(build_liouvillian(p), require_unique=False)
    assert result.null_space_dim > 1


def test_steady_state_numeric_decoupled_oscillator_is_degenerate():
    # eta = 0 freezes the oscillator entirely: any diagonal oscillator state
    # tensored with the thermal qubit is stationary
    p = ModelParams.from_rates(1.01, 0.01, 0.0, 0.001)
    result = steady_state_numeric(build_liouvillian(p), require_unique=False)
    assert result.null_space_dim == 2
    assert result.residual_max < 1e-10
