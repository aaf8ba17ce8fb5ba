import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from virtspin.catalog import GateId, gate
from virtspin.pulses import (
    Angle, Delay, Gradient, GradientInUnitaryError, PhysicalPulse, PulseSequence, PulseSpec, X, Y,
    ancillary_L, ancillary_M, angle_from_physical, free_evolution, general_propagator,
    operator_product, pair_propagator, propagator, sequence_operator,
)
from virtspin.su4 import E, PreconditionError, expand, is_unitary, max_norm, phase_distance
from virtspin.system import SystemSpec

S = 1 / math.sqrt(2)
transitions = st.sampled_from([(m, n) for m in range(4) for n in range(m + 1, 4)])
angles = st.floats(-4 * math.pi, 4 * math.pi, allow_nan=False)


def rest(m, n):
    return expand({(k, k): 1 for k in range(4) if k not in (m, n)})


def test_x_pi_frozen():
    want = rest(2, 3) - 1j * expand({(2, 3): 1, (3, 2): 1})
    assert np.array_equal(propagator(X(2, 3, 1)), want)


def test_x_half_pi_frozen():
    want = rest(0, 1) + S * (expand({(0, 0): 1, (1, 1): 1}) - 1j * expand({(0, 1): 1, (1, 0): 1}))
    assert max_norm(propagator(X(0, 1, Fraction(1, 2))) - want) <= 1e-15


def test_y_two_pi_flips_pair():
    assert np.array_equal(propagator(Y(1, 3, 2)), rest(1, 3) - expand({(1, 1): 1, (3, 3): 1}))


def test_y_half_pi_signs():
    u = propagator(Y(0, 2, Fraction(1, 2)))
    assert u[2, 0] == pytest.approx(S) and u[0, 2] == pytest.approx(-S)


def test_exact_entries_for_pi_multiples():
    u = propagator(Y(0, 1, 1))
    assert u[0, 0] == 0 and u[1, 0] == 1 and u[0, 1] == -1


@settings(max_examples=100, deadline=None)
@given(transitions, angles, angles)
def test_general_form_matches_y(t, phi, f):
    m, n = t
    p = PulseSpec("Y", m, n, Angle(phi), Angle(f))
    assert max_norm(general_propagator(m, n, phi, f) - propagator(p)) <= 1e-12


@settings(max_examples=100, deadline=None)
@given(transitions, angles, angles)
def test_phase_shift_law(t, phi, f):
    # An X pulse is a Y pulse with the phase moved by a quarter turn:
    # X(phi, f) = Y(phi, -f - pi/2).
    m, n = t
    x = propagator(PulseSpec("X", m, n, Angle(phi), Angle(f)))
    y = propagator(PulseSpec("Y", m, n, Angle(phi), Angle(-f - math.pi / 2)))
    assert max_norm(x - y) <= 1e-12


def test_phase_shift_same_sign_form_is_not_an_identity():
    x = propagator(PulseSpec("X", 0, 1, Angle(1.0), Angle(0.3)))
    y = propagator(PulseSpec("Y", 0, 1, Angle(1.0), Angle(0.3 + math.pi / 2)))
    assert max_norm(x - y) > 0.1


@settings(max_examples=100, deadline=None)
@given(st.sampled_from("XY"), transitions, angles, angles)
def test_propagators_unitary_and_selective(axis, t, phi, f):
    m, n = t
    u = propagator(PulseSpec(axis, m, n, Angle(phi), Angle(f)))
    assert max_norm(u.conj().T @ u - E) <= 1e-12
    for k in range(4):
        if k not in t:
            assert u[k, k] == 1
            assert np.count_nonzero(u[k]) == 1


def test_pulse_spec_validation():
    with pytest.raises(PreconditionError):
        X(3, 1, 1)
    with pytest.raises(PreconditionError):
        X(1, 1, 1)
    with pytest.raises(PreconditionError):
        PulseSpec("Z", 0, 1, Angle(1.0))
    with pytest.raises(PreconditionError):
        PulseSpec("X", 0, 1, Angle(float("inf")))


def test_pulse_str_and_delta_m():
    p = X(2, 3, Fraction(1, 3))
    assert str(p) == "X23(pi/3)"
    assert p.delta_m == 1
    assert Y(0, 3, -1).delta_m == 3
    assert str(Y(0, 2, Fraction(-1, 2))) == "Y02(-pi/2)"


def test_angle_helpers():
    a = Angle.pi(Fraction(3, 4))
    assert float(a) == pytest.approx(0.75 * math.pi)
    assert (-a).pi_multiple == Fraction(-3, 4)
    assert abs(-a) == a
    assert Angle.of(1.5).pi_multiple is None


def test_pair_propagator_requires_disjoint():
    u = pair_propagator(X(0, 2, 1), X(1, 3, 1))
    assert max_norm(u + 1j * gate(GateId.NOT1)) <= 1e-12
    with pytest.raises(PreconditionError):
        pair_propagator(X(0, 1, 1), X(1, 2, 1))


def test_equal_pair_rotation_acts_on_r_only():
    # Y02 and Y13 with equal angles rotate the first virtual spin.
    phi = 0.7
    u = pair_propagator(PulseSpec("Y", 0, 2, Angle(phi)), PulseSpec("Y", 1, 3, Angle(phi)))
    r = np.array([[math.cos(phi / 2), -math.sin(phi / 2)], [math.sin(phi / 2), math.cos(phi / 2)]])
    assert max_norm(u - np.kron(r, np.eye(2))) <= 1e-12


def test_sequence_order_is_chronological():
    a, b = X(0, 1, Fraction(1, 2)), Y(1, 2, Fraction(1, 3))
    seq = PulseSequence.of(a, b)
    assert max_norm(sequence_operator(seq) - propagator(b) @ propagator(a)) <= 1e-15
    assert operator_product(b, a) == seq


def test_empty_sequence_and_inverse():
    assert np.array_equal(sequence_operator(PulseSequence()), E)
    assert max_norm(sequence_operator([X(1, 2, 1), X(1, 2, -1)]) - E) <= 1e-15
    seq = PulseSequence.of(X(0, 1, Fraction(1, 3)), Y(2, 3, Fraction(2, 5)))
    assert max_norm(sequence_operator(seq + seq.inverse()) - E) <= 1e-12


def test_h1r_sequence():
    seq = operator_product(Y(0, 1, Fraction(1, 2)), Y(2, 3, Fraction(1, 2)))
    assert max_norm(sequence_operator(seq) - gate(GateId.h1R)) <= 1e-12


def test_ancillary_operators_unitary():
    for a in (-1, 1):
        for b in (-1, 1):
            assert is_unitary(ancillary_L((0, 2), (1, 3), a, b))
        assert is_unitary(ancillary_M((0, 1), a))
    with pytest.raises(PreconditionError):
        ancillary_L((0, 1), (1, 2), 1, 1)
    with pytest.raises(PreconditionError):
        ancillary_M((0, 1), 2)


def test_ancillary_m_is_diagonal():
    for a in (-1, 1):
        m = ancillary_M((2, 3), a)
        assert max_norm(m - np.diag(np.diag(m))) <= 1e-15


def test_free_evolution():
    sys = SystemSpec()
    assert np.array_equal(free_evolution(0.0, sys), E)
    u = free_evolution(0.3, sys)
    assert u[3, 3] == pytest.approx(np.exp(-1j * 1.5 * 0.3))
    with pytest.raises(PreconditionError):
        free_evolution(-1.0, sys)


def test_delay_needs_system_and_gradient_is_rejected():
    with pytest.raises(PreconditionError):
        sequence_operator([Delay(1.0)])
    with pytest.raises(GradientInUnitaryError):
        sequence_operator([Gradient()])
    with pytest.raises(PreconditionError):
        Delay(-1.0)


def test_angle_from_physical():
    assert angle_from_physical(PhysicalPulse(1.0, 1.0, math.pi), 1.0) == pytest.approx(math.pi)
    assert angle_from_physical(PhysicalPulse(0.0, 1.0, 1.0), 1.0) == 0
    with pytest.raises(PreconditionError):
        angle_from_physical(PhysicalPulse(-1.0, 1.0, 1.0), 1.0)


def test_sequence_rejects_foreign_events():
    with pytest.raises(TypeError):
        PulseSequence.of("X23")


def test_phase_distance_of_selective_pulse_to_identity():
    assert phase_distance(propagator(X(0, 1, 2)), E) == pytest.approx(1.0)
    assert phase_distance(propagator(X(0, 1, 1)), E) == pytest.approx(0.5)
