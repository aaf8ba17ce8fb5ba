"""Selective RF pulse propagators and pulse sequences.

A pulse on transition ``(m, n)`` with ``m < n`` rotates only that pair of
levels; the other two levels are left untouched.  Y pulses carry the
``+sin(phi/2) exp(if)`` coefficient on ``I_nm``; X pulses carry
``-i sin(phi/2)`` on both off-diagonal entries.

Sequences are stored chronologically (earliest event first).  The operator
of a sequence is therefore the product of event operators taken in reverse
order.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Union

import numpy as np

from .su4 import DIM, E, PreconditionError, projector
from .system import SystemSpec


@dataclass(frozen=True)
class Angle:
    """An angle in radians, optionally held exactly as a rational multiple of pi."""

    radians: float
    pi_multiple: Fraction | None = None

    @classmethod
    def pi(cls, multiple) -> Angle:
        q = Fraction(multiple)
        return cls(float(q) * math.pi, q)

    @classmethod
    def of(cls, value) -> Angle:
        """Coerce: Angle passes through, numbers are radians."""
        if isinstance(value, Angle):
            return value
        return cls(float(value))

    def __float__(self) -> float:
        return self.radians

    def __neg__(self) -> Angle:
        if self.pi_multiple is not None:
            return Angle.pi(-self.pi_multiple)
        return Angle(-self.radians)

    def __abs__(self) -> Angle:
        return -self if self.radians < 0 else self

    @property
    def is_zero(self) -> bool:
        return self.radians == 0.0


ZERO = Angle.pi(0)


@dataclass(frozen=True)
class PulseSpec:
    axis: str
    m: int
    n: int
    angle: Angle
    phase: Angle = ZERO

    def __post_init__(self):
        axis = str(self.axis).upper()
        if axis not in ("X", "Y"):
            raise PreconditionError(f"axis must be X or Y, got {self.axis!r}")
        object.__setattr__(self, "axis", axis)
        if not (0 <= self.m < self.n < DIM):
            raise PreconditionError(f"transition must satisfy 0 <= m < n <= 3, got ({self.m}, {self.n})")
        object.__setattr__(self, "angle", Angle.of(self.angle))
        object.__setattr__(self, "phase", Angle.of(self.phase))
        if not (math.isfinite(self.angle.radians) and math.isfinite(self.phase.radians)):
            raise PreconditionError("pulse angle and phase must be finite")

    @property
    def transition(self) -> tuple[int, int]:
        return (self.m, self.n)

    @property
    def delta_m(self) -> int:
        return self.n - self.m

    def inverse(self) -> PulseSpec:
        return PulseSpec(self.axis, self.m, self.n, -self.angle, self.phase)

    def __str__(self) -> str:
        s = f"{self.axis}{self.m}{self.n}({_fmt_angle(self.angle)}"
        if not self.phase.is_zero:
            s += f", {_fmt_angle(self.phase)}"
        return s + ")"


def _fmt_angle(a: Angle) -> str:
    if a.pi_multiple is None:
        return f"{a.radians:g}"
    q = a.pi_multiple
    if q == 0:
        return "0"
    num = {1: "", -1: "-"}.get(q.numerator, str(q.numerator))
    return f"{num}pi" + (f"/{q.denominator}" if q.denominator != 1 else "")


def X(m: int, n: int, angle, phase=0) -> PulseSpec:
    """X pulse; plain numbers are read as multiples of pi (``X(2, 3, 1)`` is X23(pi))."""
    return PulseSpec("X", m, n, _pi_angle(angle), _pi_angle(phase))


def Y(m: int, n: int, angle, phase=0) -> PulseSpec:
    """Y pulse; plain numbers are read as multiples of pi."""
    return PulseSpec("Y", m, n, _pi_angle(angle), _pi_angle(phase))


def _pi_angle(value) -> Angle:
    if isinstance(value, Angle):
        return value
    return Angle.pi(Fraction(value))


@dataclass(frozen=True)
class Gradient:
    """Pulsed field gradient: destroys all coherences."""


@dataclass(frozen=True)
class Delay:
    duration: float

    def __post_init__(self):
        if not self.duration >= 0:
            raise PreconditionError("delay duration must be non-negative")


SequenceEvent = Union[PulseSpec, Gradient, Delay]


@dataclass(frozen=True)
class PulseSequence:
    events: tuple = ()

    def __post_init__(self):
        evs = tuple(self.events)
        for ev in evs:
            if not isinstance(ev, (PulseSpec, Gradient, Delay)):
                raise TypeError(f"not a sequence event: {ev!r}")
        object.__setattr__(self, "events", evs)

    @classmethod
    def of(cls, *events) -> PulseSequence:
        return cls(tuple(events))

    def __iter__(self):
        return iter(self.events)

    def __len__(self) -> int:
        return len(self.events)

    def __getitem__(self, i):
        return self.events[i]

    def __add__(self, other: PulseSequence) -> PulseSequence:
        return PulseSequence(self.events + tuple(other))

    @property
    def pulses(self) -> list[PulseSpec]:
        return [e for e in self.events if isinstance(e, PulseSpec)]

    @property
    def has_gradient(self) -> bool:
        return any(isinstance(e, Gradient) for e in self.events)

    def inverse(self) -> PulseSequence:
        """Reversed sequence of inverted pulses (delays and gradients are rejected)."""
        if any(not isinstance(e, PulseSpec) for e in self.events):
            raise PreconditionError("only pure pulse sequences can be inverted")
        return PulseSequence(tuple(p.inverse() for p in reversed(self.events)))

    def __str__(self) -> str:
        return "[" + ", ".join(str(e) if isinstance(e, PulseSpec) else type(e).__name__ for e in self.events) + "]"


def operator_product(*events) -> PulseSequence:
    """Chronological sequence for an operator product written left to right.

    ``operator_product(A, B, C)`` is the sequence whose operator is ``A B C``:
    C is applied first.  Arguments may be pulses or whole sequences.
    """
    out: list = []
    for ev in reversed(events):
        if isinstance(ev, PulseSequence):
            out.extend(ev.events)
        else:
            out.append(ev)
    return PulseSequence(tuple(out))


def _idle(m: int, n: int) -> np.ndarray:
    return sum((projector(k, k) for k in range(DIM) if k not in (m, n)), np.zeros((DIM, DIM), complex))


def general_propagator(m: int, n: int, phi: float, f: float = 0.0) -> np.ndarray:
    """Propagator in the form ``E - (I_nn + I_mm) 2 sin^2(phi/4) + off-diagonal``."""
    return (
        E
        - (projector(n, n) + projector(m, m)) * 2 * math.sin(phi / 4) ** 2
        + (projector(n, m) * np.exp(1j * f) - projector(m, n) * np.exp(-1j * f)) * math.sin(phi / 2)
    )


def _pulse_matrix(p: PulseSpec) -> np.ndarray:
    trig = _exact_half_trig(p.angle.pi_multiple)
    if trig is None:
        trig = math.cos(p.angle.radians / 2), math.sin(p.angle.radians / 2)
    c, s = trig
    m, n = p.m, p.n
    ef = np.exp(1j * p.phase.radians) if not p.phase.is_zero else 1.0
    u = _idle(m, n) + c * (projector(m, m) + projector(n, n))
    if p.axis == "Y":
        u = u + s * (projector(n, m) * ef - projector(m, n) * np.conj(ef))
    else:
        u = u - 1j * s * (projector(m, n) * ef + projector(n, m) * np.conj(ef))
    return u


def _exact_half_trig(q: Fraction | None):
    # cos/sin of q*pi/2 without rounding for the multiples used by the compiler.
    if q is None:
        return None
    r = (q / 2) % 2
    table = {
        Fraction(0): (1.0, 0.0),
        Fraction(1, 2): (0.0, 1.0),
        Fraction(1): (-1.0, 0.0),
        Fraction(3, 2): (0.0, -1.0),
        Fraction(1, 4): (math.sqrt(0.5), math.sqrt(0.5)),
        Fraction(3, 4): (-math.sqrt(0.5), math.sqrt(0.5)),
        Fraction(5, 4): (-math.sqrt(0.5), -math.sqrt(0.5)),
        Fraction(7, 4): (math.sqrt(0.5), -math.sqrt(0.5)),
    }
    return table.get(r)


def propagator(p: PulseSpec) -> np.ndarray:
    """Evolution operator of a single selective pulse."""
    return _pulse_matrix(p)


def _disjoint(p1: PulseSpec, p2: PulseSpec) -> None:
    if set(p1.transition) & set(p2.transition):
        raise PreconditionError(f"transitions {p1.transition} and {p2.transition} share a level")


def pair_propagator(p1: PulseSpec, p2: PulseSpec) -> np.ndarray:
    """Two simultaneous pulses on transitions with no common level."""
    _disjoint(p1, p2)
    return propagator(p1) @ propagator(p2)


def _check_sign(v: int, name: str) -> None:
    if v not in (-1, 1):
        raise PreconditionError(f"{name} must be +1 or -1, got {v!r}")


def ancillary_L_sequence(first: tuple[int, int], second: tuple[int, int], alpha: int, beta: int) -> PulseSequence:
    """Pulses of ``Y(pi/2, pi/2) X(alpha pi/2, beta pi/2) Y(-pi/2, -pi/2)`` on two transitions."""
    _check_sign(alpha, "alpha")
    _check_sign(beta, "beta")
    (a, b), (c, d) = first, second
    _disjoint(Y(a, b, 1), Y(c, d, 1))
    half = Fraction(1, 2)
    return operator_product(
        Y(a, b, half), Y(c, d, half),
        X(a, b, alpha * half), X(c, d, beta * half),
        Y(a, b, -half), Y(c, d, -half),
    )


def ancillary_M_sequence(transition: tuple[int, int], alpha: int) -> PulseSequence:
    """Pulses of ``Y(alpha pi) X(pi)`` on one transition."""
    _check_sign(alpha, "alpha")
    m, n = transition
    return operator_product(Y(m, n, alpha), X(m, n, 1))


def ancillary_L(first, second, alpha: int, beta: int) -> np.ndarray:
    return sequence_operator(ancillary_L_sequence(first, second, alpha, beta))


def ancillary_M(transition, alpha: int) -> np.ndarray:
    return sequence_operator(ancillary_M_sequence(transition, alpha))


def free_evolution(t: float, sys: SystemSpec) -> np.ndarray:
    """``exp(-i H t)`` for the diagonal level Hamiltonian (energies in rad/s)."""
    if not t >= 0:
        raise PreconditionError("evolution time must be non-negative")
    return np.diag(np.exp(-1j * np.asarray(sys.energies) * t))


@dataclass(frozen=True)
class PhysicalPulse:
    gamma: float
    amplitude: float
    duration: float
    carrier: float = 0.0
    phase: float = 0.0


def angle_from_physical(p: PhysicalPulse, matrix_element: float) -> float:
    """Rotation angle ``gamma * H1 * t * |<m|I_x|n>|``."""
    vals = (p.gamma, p.amplitude, p.duration, matrix_element)
    if any(v < 0 for v in vals):
        raise PreconditionError("physical pulse parameters must be non-negative")
    return p.gamma * p.amplitude * p.duration * abs(matrix_element)


class GradientInUnitaryError(PreconditionError):
    pass


def event_operator(ev, sys: SystemSpec | None = None) -> np.ndarray:
    if isinstance(ev, PulseSpec):
        return propagator(ev)
    if isinstance(ev, Delay):
        if sys is None:
            raise PreconditionError("a SystemSpec is needed to evaluate delays")
        return free_evolution(ev.duration, sys)
    raise GradientInUnitaryError(
        "gradient events are not unitary; evolve the density matrix with virtspin.density.evolve"
    )


def sequence_operator(seq: Iterable, sys: SystemSpec | None = None) -> np.ndarray:
    """Unitary of a chronological event list (last event leftmost)."""
    u = E.copy()
    for ev in seq:
        u = event_operator(ev, sys) @ u
    return u
