import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import constants

from elliptic_alignment.angular import BasisBlock, build_cos2_theta_y, build_cos2_theta_z
from elliptic_alignment.constants import get_molecule
from elliptic_alignment.dynamics import (
    TAU_ROT,
    PhysicalPulse,
    PulseParams,
    WavePacket,
    apply_kick,
    free_evolve,
    integrate_timedependent,
    interaction_operator,
    kick_strength_from_pulse,
    polarizability_volume_to_si,
    prepare_kick,
)
from elliptic_alignment.errors import ConvergenceError, ValidationError
from elliptic_alignment.observables import state_trace

from .oracles import kicked_on_grid

a2s = st.floats(0.0, 1.0)
xis = st.floats(0.0, 15.0)


def random_state(block, seed):
    rng = np.random.default_rng(seed)
    c = rng.normal(size=block.dim) + 1j * rng.normal(size=block.dim)
    return WavePacket(block, c / np.linalg.norm(c))


# -- pulse parameters and calibration ---------------------------------------------


@pytest.mark.parametrize("a2,xi", [(-0.1, 1.0), (1.2, 1.0), (0.5, -1.0), (0.5, math.nan)])
def test_pulse_params_validation(a2, xi):
    with pytest.raises(ValidationError):
        PulseParams(a2, xi)


def test_b2_complements_a2():
    assert PulseParams(0.3, 1.0).b2 == pytest.approx(0.7, abs=1e-15)


def test_co2_calibration_anchor():
    # 25 TW/cm^2, 100 fs Gaussian on CO2 should give a kick strength of about 11.1
    xi = kick_strength_from_pulse(get_molecule("CO2").pulse(25.0, 100.0))
    assert abs(xi - 11.1) <= 0.1 * 11.1


def test_calibration_by_hand():
    # xi = d_alpha / (4 hbar) * 2 I_peak fwhm sqrt(pi / 4 ln 2) / (c eps0)
    d_alpha = 4 * math.pi * constants.epsilon_0 * 2.0e-30
    pulse = PhysicalPulse(1e13, 50e-15, d_alpha)
    fluence = 1e17 * 50e-15 * math.sqrt(math.pi / (4 * math.log(2)))
    expected = d_alpha / (4 * constants.hbar) * 2 * fluence / (constants.c * constants.epsilon_0)
    assert kick_strength_from_pulse(pulse) == pytest.approx(expected, rel=1e-14)
    assert polarizability_volume_to_si(2.0) == pytest.approx(d_alpha, rel=1e-15)


@given(st.floats(1e9, 1e15), st.floats(1e-15, 1e-12))
def test_kick_strength_is_linear_in_intensity_and_duration(intensity, fwhm):
    d_alpha = polarizability_volume_to_si(2.1)
    base = kick_strength_from_pulse(PhysicalPulse(intensity, fwhm, d_alpha))
    assert kick_strength_from_pulse(PhysicalPulse(2 * intensity, fwhm, d_alpha)) == pytest.approx(2 * base, rel=1e-12)
    assert kick_strength_from_pulse(PhysicalPulse(intensity, 2 * fwhm, d_alpha)) == pytest.approx(2 * base, rel=1e-12)


def test_zero_intensity_gives_zero_kick():
    assert kick_strength_from_pulse(PhysicalPulse(0.0, 1e-13, 1e-40)) == 0.0


@pytest.mark.parametrize(
    "pulse",
    [
        PhysicalPulse(-1.0, 1e-13, 1e-40),
        PhysicalPulse(1e12, 0.0, 1e-40),
        PhysicalPulse(1e12, 1e-13, 0.0),
        PhysicalPulse(1e12, 1e-13, 1e-40, envelope="sech2"),
    ],
)
def test_kick_strength_rejects_bad_pulses(pulse):
    with pytest.raises(ValidationError):
        kick_strength_from_pulse(pulse)


def test_from_physical_carries_the_pulse():
    physical = get_molecule("CO2").pulse(25.0, 100.0)
    pulse = PulseParams.from_physical(0.25, physical)
    assert pulse.physical is physical
    assert pulse.xi == kick_strength_from_pulse(physical)


# -- kick operator ---------------------------------------------------------------


@given(a2s, st.sampled_from([(0, 0), (0, 1), (1, 0), (1, 1)]))
def test_kick_operator_reconstruction_and_orthogonality(a2, parities):
    block = BasisBlock(*parities, 16)
    kick = prepare_kick(block, a2)
    v = kick.eigenvectors
    assert np.max(np.abs(v.T @ v - np.eye(block.dim))) <= 1e-10
    assert np.max(np.abs(kick.matrix() - interaction_operator(block, a2).entries)) <= 1e-10


def test_circular_kick_spectrum():
    block = BasisBlock(0, 0, 12)
    kick = prepare_kick(block, 0.5)
    mz = np.linalg.eigvalsh(build_cos2_theta_z(block).entries)
    np.testing.assert_allclose(np.sort(kick.eigenvalues), np.sort(0.5 * (1 - mz)), atol=1e-12)


def test_optimum_kick_operator_form():
    block = BasisBlock(0, 0, 12)
    eye = np.eye(block.dim)
    expected = (build_cos2_theta_y(block).entries + eye - build_cos2_theta_z(block).entries) / 3
    assert np.max(np.abs(interaction_operator(block, 1 / 3).entries - expected)) <= 1e-12


@given(a2s)
def test_one_by_one_kick(a2):
    kick = prepare_kick(BasisBlock(0, 0, 0), a2)
    b2 = 1 - a2
    assert kick.eigenvalues[0] == pytest.approx((a2 - b2) / 3 + b2 * 2 / 3, abs=1e-15)


def test_prepare_kick_rejects_bad_ellipticity():
    with pytest.raises(ValidationError):
        prepare_kick(BasisBlock(0, 0, 4), 1.5)


@pytest.mark.parametrize("j0,m0,a2", [(0, 0, 1 / 3), (1, 1, 0.2), (2, -2, 0.8), (3, 0, 0.0)])
def test_kick_matches_angle_space_oracle(j0, m0, a2):
    # the kick multiplies the wavefunction by exp(i xi O(theta, phi)); project it back
    xi, j_max = 6.0, 30
    state = WavePacket.basis_state(j0, m0, j_max)
    kicked = apply_kick(state, prepare_kick(state.block, a2), xi)
    oracle = kicked_on_grid(j0, m0, a2, xi, state.block.states)
    assert np.max(np.abs(kicked.coeffs - oracle)) <= 1e-9


def test_zero_kick_is_identity():
    state = random_state(BasisBlock(1, 0, 10), 0)
    out = apply_kick(state, prepare_kick(state.block, 0.3), 0.0)
    np.testing.assert_allclose(out.coeffs, state.coeffs, atol=1e-14)


@given(a2s, xis, st.integers(0, 2**31))
def test_kick_then_inverse_kick(a2, xi, seed):
    state = random_state(BasisBlock(0, 1, 12), seed)
    kick = prepare_kick(state.block, a2)
    back = apply_kick(apply_kick(state, kick, xi), kick, -xi)
    assert np.max(np.abs(back.coeffs - state.coeffs)) <= 1e-10


def test_kicked_ground_state_populates_even_shells():
    state = WavePacket.basis_state(0, 0, 30)
    kicked = apply_kick(state, prepare_kick(state.block, 1 / 3), 11.1)
    assert kicked.block == BasisBlock(0, 0, 30)
    assert abs(kicked.norm() - 1) <= 1e-12
    populations = np.abs(kicked.coeffs) ** 2
    assert populations[kicked.block.j >= 4].sum() > 0.1
    assert kicked.t == state.t


def test_kick_block_mismatch():
    state = WavePacket.basis_state(0, 0, 8)
    with pytest.raises(ValidationError):
        apply_kick(state, prepare_kick(BasisBlock(0, 0, 10), 0.3), 1.0)


# -- free evolution ---------------------------------------------------------------


def test_free_evolution_full_period_is_identity():
    state = random_state(BasisBlock(1, 1, 20), 3)
    out = free_evolve(state, TAU_ROT)
    np.testing.assert_allclose(out.coeffs, state.coeffs, atol=1e-12)
    assert out.t == pytest.approx(TAU_ROT)


@given(st.floats(-50, 50), st.integers(0, 2**31))
def test_free_evolution_is_reversible(dt, seed):
    state = random_state(BasisBlock(0, 0, 16), seed)
    back = free_evolve(free_evolve(state, dt), -dt)
    assert np.max(np.abs(back.coeffs - state.coeffs)) <= 1e-12
    assert np.array_equal(free_evolve(state, 0.0).coeffs, state.coeffs)


@given(st.lists(st.tuples(a2s, xis, st.floats(-5, 5)), min_size=1, max_size=6))
def test_norm_preserved_over_sequences(steps):
    state = WavePacket.basis_state(2, 0, 24)
    for a2, xi, dt in steps:
        state = free_evolve(apply_kick(state, prepare_kick(state.block, a2), xi), dt)
    assert abs(state.norm() - 1) <= 1e-10


def test_wave_packet_shape_checked():
    with pytest.raises(ValidationError):
        WavePacket(BasisBlock(0, 0, 4), np.ones(3))


# -- single-state traces -------------------------------------------------------------


@given(a2s, st.floats(0.5, 12.0))
def test_single_state_trace_is_periodic(a2, xi):
    state = WavePacket.basis_state(1, 1, 24)
    kicked = apply_kick(state, prepare_kick(state.block, a2), xi)
    t = np.linspace(0, TAU_ROT, 64)
    a = state_trace(kicked, t)
    b = state_trace(kicked, t + TAU_ROT)
    for axis in "xyz":
        assert np.max(np.abs(a.axis(axis) - b.axis(axis))) <= 1e-10


@given(a2s, st.floats(0.5, 12.0))
def test_relabeling_single_state(a2, xi):
    t = np.linspace(0, TAU_ROT, 64)
    traces = []
    for value in (a2, 1 - a2):
        state = WavePacket.basis_state(0, 0, 28)
        traces.append(state_trace(apply_kick(state, prepare_kick(state.block, value), xi), t))
    assert np.max(np.abs(traces[0].cos2z - traces[1].cos2z)) <= 1e-10
    assert np.max(np.abs(traces[0].cos2x - traces[1].cos2y)) <= 1e-10


# -- time-dependent integrator --------------------------------------------------------


def test_integrator_without_field_is_free_evolution():
    state = random_state(BasisBlock(0, 0, 12), 5)
    state = WavePacket(state.block, state.coeffs, t=-0.2)
    out = integrate_timedependent(state, PulseParams(0.3, 0.0), fwhm=0.02)
    ref = free_evolve(state, out.t - state.t)
    assert np.max(np.abs(out.coeffs - ref.coeffs)) <= 1e-10


def test_integrator_preserves_norm_and_converges_in_step():
    state = WavePacket.basis_state(0, 0, 24, t=-1.0)
    pulse = PulseParams(1 / 3, 11.1)
    coarse = integrate_timedependent(state, pulse, fwhm=0.01, steps_per_fwhm=100)
    fine = integrate_timedependent(state, pulse, fwhm=0.01, steps_per_fwhm=400)
    assert abs(coarse.norm() - 1) <= 1e-8
    assert coarse.t == pytest.approx(0.05)
    assert np.max(np.abs(coarse.coeffs - fine.coeffs)) <= 1e-8


def test_short_pulse_approaches_kick():
    state = WavePacket.basis_state(0, 0, 24, t=-0.01)
    pulse = PulseParams(1 / 3, 11.1)
    finite = integrate_timedependent(state, pulse, fwhm=1e-4 * TAU_ROT)
    sudden = apply_kick(free_evolve(state, 0.01), prepare_kick(state.block, pulse.a2), pulse.xi)
    sudden = free_evolve(sudden, finite.t - sudden.t)
    assert abs(abs(np.vdot(sudden.coeffs, finite.coeffs)) - 1) <= 1e-5


def test_integrator_input_checks():
    pulse = PulseParams(0.3, 1.0)
    with pytest.raises(ValidationError):
        integrate_timedependent(WavePacket.basis_state(0, 0, 4, t=-1.0), pulse, 0.01, steps_per_fwhm=50)
    with pytest.raises(ValidationError):
        integrate_timedependent(WavePacket.basis_state(0, 0, 4, t=0.0), pulse, 0.01)
    with pytest.raises(ValidationError):
        integrate_timedependent(WavePacket.basis_state(0, 0, 4, t=-1.0), pulse, 0.0)


def test_integrator_reports_norm_drift():
    with pytest.raises(ConvergenceError):
        integrate_timedependent(
            WavePacket.basis_state(0, 0, 20, t=-1.0), PulseParams(0.3, 11.1), 0.01, norm_tol=0.0
        )
