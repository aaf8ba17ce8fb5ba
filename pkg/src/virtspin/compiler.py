"""Lowering of catalog gates to selective pulse sequences.

Each realization is stored as the operator product it is usually written
as (rightmost factor acts first) together with the scalar prefactor printed
next to it.  ``compile`` turns the product into a chronological sequence and
checks it against the target before handing it out.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import catalog
from .catalog import GateId, UnsupportedError, gate_id
from .pulses import (
    Angle,
    Delay,
    Gradient,
    GradientInUnitaryError,
    PulseSequence,
    PulseSpec,
    X,
    Y,
    ancillary_L_sequence,
    ancillary_M_sequence,
    operator_product,
    sequence_operator,
)
from .su4 import PreconditionError, as_matrix, is_unitary, phase_distance
from .system import SystemSpec

VERIFY_TOL = 1e-10

I = 1j
MINUS_I = -1j  # exp(-i pi/2)


class CompilationError(RuntimeError):
    pass


@dataclass(frozen=True)
class Realization:
    product: tuple
    prefactor: complex = 1.0
    target: np.ndarray | None = field(default=None, compare=False)

    @property
    def sequence(self) -> PulseSequence:
        return operator_product(*self.product)


def _L(first, second, a, b):
    return ancillary_L_sequence(first, second, a, b)


def _M(t, a):
    return ancillary_M_sequence(t, a)


_H = Fraction(1, 2)
_h1R = operator_product(Y(0, 1, _H), Y(2, 3, _H))
_h1S = operator_product(Y(0, 2, _H), Y(1, 3, _H))


def _realizations() -> dict[GateId, Realization]:
    r = {
        GateId.E: Realization(()),
        GateId.NOT1: Realization((X(0, 2, 1), X(1, 3, 1)), I),
        GateId.NOT2: Realization((X(0, 1, 1), X(2, 3, 1)), I),
        GateId.NOT: Realization((X(0, 3, 1), X(1, 2, 1)), I),
        GateId.SWAP: Realization((_L((0, 1), (2, 3), -1, 1), X(1, 2, 1)), MINUS_I),
        GateId.CNOT12: Realization((_L((0, 2), (1, 3), -1, -1), X(2, 3, 1)), MINUS_I),
        GateId.CNOT21: Realization((_L((0, 1), (2, 3), -1, -1), X(1, 3, 1)), MINUS_I),
        GateId.ICNOT12: Realization((_L((0, 2), (1, 3), 1, 1), X(0, 1, 1)), MINUS_I),
        GateId.ICNOT21: Realization((_L((0, 1), (2, 3), 1, 1), X(0, 2, 1)), MINUS_I),
        GateId.PI0: Realization((_L((0, 2), (1, 3), 1, 1), _M((0, 1), 1)), MINUS_I),
        GateId.PI1: Realization((_L((0, 2), (1, 3), 1, 1), _M((0, 1), -1)), MINUS_I),
        GateId.PI2: Realization((_L((0, 2), (1, 3), -1, -1), _M((2, 3), 1)), MINUS_I),
        GateId.PI3: Realization((_L((0, 2), (1, 3), -1, -1), _M((2, 3), -1)), MINUS_I),
        GateId.h1R: Realization((Y(0, 1, _H), Y(2, 3, _H))),
        GateId.h1S: Realization((Y(0, 2, _H), Y(1, 3, _H))),
        GateId.h2: Realization((Y(0, 1, _H), Y(2, 3, _H), Y(0, 2, _H), Y(1, 3, _H))),
        GateId.H2: Realization((_h1R, Y(1, 3, 2), _h1S, Y(2, 3, 2))),
        GateId.STAR_P5: Realization((X(1, 2, 1),)),
        GateId.STAR_P6: Realization((X(2, 3, 1),)),
        GateId.STAR_P7: Realization((X(1, 3, 1),)),
        GateId.STAR_P8: Realization((X(0, 1, 1),)),
        GateId.STAR_P9: Realization((X(0, 2, 1),)),
    }
    for d, p in ((GateId.D00, GateId.E), (GateId.D01, GateId.CNOT12),
                 (GateId.D10, GateId.ICNOT12), (GateId.D11, GateId.NOT2)):
        r[d] = r[p]
    # Single-operator Deutsch-Jozsa realizations; the pulses reproduce the
    # B operators only with imaginary off-diagonals, so they are checked
    # against that realized form.
    for f, pulses in (((0, 0), ()), ((1, 1), (X(1, 3, 2),)),
                      ((0, 1), (X(1, 3, 1),)), ((1, 0), (X(1, 3, -1),))):
        f = catalog.BoolFn2(*f)
        r[catalog.b_id(f)] = Realization(pulses, 1.0, catalog.realized_b(f))
    return r


REALIZATIONS = _realizations()

_NEAREST = {GateId.H1R: GateId.H2, GateId.H1S: GateId.H2}


def supported_gates() -> list[GateId]:
    return [g for g in GateId if g in REALIZATIONS]


def realization(gid) -> Realization:
    gid = gate_id(gid)
    try:
        return REALIZATIONS[gid]
    except KeyError:
        hint = _NEAREST.get(gid)
        msg = f"{gid} has no pulse realization"
        if hint is not None:
            msg += f"; the nearest supported composite is {hint}"
        raise UnsupportedError(msg) from None


def compilation_target(gid) -> np.ndarray:
    """Matrix a compiled sequence is checked against."""
    gid = gate_id(gid)
    rz = realization(gid)
    return rz.target if rz.target is not None else catalog.gate(gid)


def printed_prefactor(gid) -> complex:
    return complex(realization(gid).prefactor)


@dataclass(frozen=True)
class CompilationResult:
    sequence: PulseSequence
    target: GateId | None
    measured_distance: float
    measured_phase: complex | None
    tol: float = VERIFY_TOL

    @property
    def success(self) -> bool:
        return bool(self.measured_distance <= self.tol)


def verify(seq, target, tol: float = VERIFY_TOL, sys: SystemSpec | None = None,
           target_id: GateId | None = None) -> CompilationResult:
    """Compare a pulse sequence with a target unitary up to global phase.

    ``measured_phase`` is the scalar ``c`` with ``target ~= c * U_seq``; it is
    ``None`` when the overlap vanishes.
    """
    seq = PulseSequence(tuple(seq))
    if seq.has_gradient:
        raise GradientInUnitaryError("verification needs a unitary sequence; remove gradient events")
    target = as_matrix(target)
    if not is_unitary(target, 1e-9):
        raise PreconditionError("verification target is not unitary")
    u = sequence_operator(seq, sys)
    dist = phase_distance(u, target)
    t = np.trace(u.conj().T @ target)
    phase = complex(t / abs(t)) if abs(t) > 1e-12 else None
    return CompilationResult(seq, target_id, dist, phase, tol)


def compile_gate(gid, max_delta_m: int | None = None, strategy: str = "x") -> CompilationResult:
    """Compile and verify; raises CompilationError if the check fails."""
    gid = gate_id(gid)
    seq = realization(gid).sequence
    if max_delta_m is not None:
        seq = rewrite_delta_m(seq, max_delta_m, strategy)
    res = verify(seq, compilation_target(gid), target_id=gid)
    if not res.success:
        raise CompilationError(f"{gid}: compiled sequence misses target (distance {res.measured_distance:.3e})")
    return res


def compile(gid, max_delta_m: int | None = None, strategy: str = "x") -> PulseSequence:  # noqa: A001
    """Chronological pulse sequence realizing a catalog gate."""
    return compile_gate(gid, max_delta_m, strategy).sequence


# ---------------------------------------------------------------------------
# Delta-m rewriting.
#
# A pulse on a transition that skips levels is conjugated by pi pulses on
# neighbouring transitions: U_mn = W^-1 U'_m'n' W, where W (applied first)
# carries the pair (m, n) onto (m', n').

_CONJUGATORS = {
    # (transition, max_delta_m, strategy) -> conjugating pulses, chronological
    ((0, 3), 2, "x"): (Y(0, 2, 1),),
    ((0, 3), 2, "y"): (Y(0, 2, 1),),
    ((0, 3), 1, "x"): (X(0, 1, 1), X(1, 2, 1)),
    ((0, 3), 1, "y"): (Y(0, 1, 1), Y(1, 2, 1)),
    ((0, 2), 1, "x"): (X(0, 1, 1),),
    ((0, 2), 1, "y"): (Y(0, 1, 1),),
    ((1, 3), 1, "x"): (X(1, 2, 1),),
    ((1, 3), 1, "y"): (Y(1, 2, 1),),
}

STRATEGIES = ("x", "y")


def _image(w: np.ndarray, k: int) -> tuple[int, complex]:
    col = w[:, k]
    j = int(np.argmax(np.abs(col)))
    return j, complex(col[j])


def _arg_pi(c: complex) -> Fraction:
    # Argument of a unit entry in {1, i, -1, -i}, as a multiple of pi.
    return Fraction(round(cmath.phase(c) / math.pi * 2), 2)


def _y_phase(p: PulseSpec) -> Angle:
    # X(phi, f) equals Y(phi, -f - pi/2).
    if p.axis == "Y":
        return p.phase
    return _shift(-p.phase, Fraction(-1, 2))


def _shift(a: Angle, pi_mult: Fraction) -> Angle:
    if a.pi_multiple is not None:
        return Angle.pi(a.pi_multiple + pi_mult)
    return Angle(a.radians + float(pi_mult) * math.pi)


def _normalize(axis: str, m: int, n: int, angle: Angle, phase: Angle) -> PulseSpec:
    if phase.pi_multiple is not None:
        q = phase.pi_multiple % 2
        if q == 0:
            return PulseSpec(axis, m, n, angle, Angle.pi(0))
        if q == 1:
            return PulseSpec(axis, m, n, -angle, Angle.pi(0))
        if q > 1:
            q -= 2
        return PulseSpec(axis, m, n, angle, Angle.pi(q))
    r = math.remainder(phase.radians, 2 * math.pi)
    return PulseSpec(axis, m, n, angle, Angle(r))


def _conjugate(p: PulseSpec, w_pulses: tuple) -> PulseSequence:
    w = sequence_operator(w_pulses)
    mp, cm = _image(w, p.m)
    np_, cn = _image(w, p.n)
    g = _shift(_y_phase(p), _arg_pi(cn) - _arg_pi(cm))
    lo, hi = min(mp, np_), max(mp, np_)
    if mp > np_:
        g = _shift(-g, Fraction(1))
    phase = g if p.axis == "Y" else _shift(-g, Fraction(-1, 2))
    inner = _normalize(p.axis, lo, hi, p.angle, phase)
    w_seq = PulseSequence(w_pulses)
    return w_seq + PulseSequence((inner,)) + w_seq.inverse()


def rewrite_pulse(p: PulseSpec, max_delta_m: int, strategy: str = "x") -> PulseSequence:
    if max_delta_m not in (1, 2):
        raise PreconditionError("max_delta_m must be 1 or 2")
    if strategy not in STRATEGIES:
        raise PreconditionError(f"strategy must be one of {STRATEGIES}")
    if p.delta_m <= max_delta_m:
        return PulseSequence((p,))
    return _conjugate(p, _CONJUGATORS[(p.transition, max_delta_m, strategy)])


def rewrite_delta_m(seq, max_delta_m: int, strategy: str = "x") -> PulseSequence:
    """Replace pulses skipping more than ``max_delta_m`` levels by equivalent chains.

    With ``max_delta_m=2`` a 0-3 pulse becomes the Y02(pi) bridge; with
    ``max_delta_m=1`` every pulse is expressed through neighbouring
    transitions, using X or Y pi pulses as conjugators per ``strategy``.
    """
    out: list = []
    for ev in seq:
        if isinstance(ev, PulseSpec):
            out.extend(rewrite_pulse(ev, max_delta_m, strategy))
        else:
            out.append(ev)
    return PulseSequence(tuple(out))


def x03_forms(angle) -> dict[str, PulseSequence]:
    """The three listed decompositions of X03(angle), chronological."""
    a = angle if isinstance(angle, Angle) else Angle.pi(Fraction(angle))
    return {
        "x_chain": operator_product(X(0, 1, -1), X(1, 2, -1), X(2, 3, -a), X(1, 2, 1), X(0, 1, 1)),
        "y_bridge": operator_product(Y(0, 2, -1), X(2, 3, a), Y(0, 2, 1)),
        "y_chain": operator_product(Y(0, 1, -1), Y(1, 2, -1), X(2, 3, a), Y(1, 2, 1), Y(0, 1, 1)),
    }


def y03_forms(angle) -> dict[str, PulseSequence]:
    a = angle if isinstance(angle, Angle) else Angle.pi(Fraction(angle))
    return {
        "x_chain": operator_product(X(0, 1, -1), X(1, 2, -1), Y(2, 3, -a), X(1, 2, 1), X(0, 1, 1)),
        "y_bridge": operator_product(Y(0, 2, -1), Y(2, 3, a), Y(0, 2, 1)),
        "y_chain": operator_product(Y(0, 1, -1), Y(1, 2, -1), Y(2, 3, a), Y(1, 2, 1), Y(0, 1, 1)),
    }


# ---------------------------------------------------------------------------
# Cost model: each pulse costs |angle| scaled by the inverse of its relative
# excitation probability (omega_q/omega0)^(2 dm - 2).


def transition_weight(delta_m: int, sys: SystemSpec, use_eta: bool = False) -> float:
    if not sys.omega0 > 0 or not sys.omega_q > 0:
        raise PreconditionError("omega0 and omega_q must be positive")
    ratio = sys.omega0 / sys.omega_q
    if use_eta:
        if not sys.eta > 0:
            raise PreconditionError("eta must be positive when the asymmetry variant is used")
        ratio /= sys.eta
    return ratio ** (2 * delta_m - 2)


def cost(seq, sys: SystemSpec, use_eta: bool = False) -> float:
    transition_weight(1, sys, use_eta)
    total = 0.0
    for ev in seq:
        if isinstance(ev, PulseSpec):
            total += abs(ev.angle.radians) * transition_weight(ev.delta_m, sys, use_eta)
        elif not isinstance(ev, (Gradient, Delay)):
            raise TypeError(f"not a sequence event: {ev!r}")
    return total
