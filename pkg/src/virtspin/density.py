"""Mixed-state simulation of the four-level system."""
from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .pulses import Delay, Gradient, PulseSequence, PulseSpec, X, free_evolution, propagator
from .su4 import DIM, E, PreconditionError, as_matrix, basis_ket, frozen, is_hermitian
from .system import SystemSpec

log = logging.getLogger(__name__)

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
EIG_FLOOR = -1e-10
EQUAL_TOL = 1e-10


class InvalidStateError(ValueError):
    pass


class PreparationError(RuntimeError):
    def __init__(self, message: str, diagonal):
        self.diagonal = np.real(np.asarray(diagonal))
        super().__init__(f"{message}; diagonal = {np.array2string(self.diagonal, precision=12)}")


class ThermalOverflowError(OverflowError):
    pass


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, unit-trace, positive semidefinite 4x4 state."""

    rho: np.ndarray

    def __post_init__(self):
        r = as_matrix(self.rho)
        if not is_hermitian(r, HERMITIAN_TOL):
            raise InvalidStateError("density matrix is not Hermitian")
        if abs(np.trace(r) - 1) > TRACE_TOL:
            raise InvalidStateError(f"density matrix trace is {np.trace(r).real:.15g}, not 1")
        if np.min(np.linalg.eigvalsh((r + r.conj().T) / 2)) < EIG_FLOOR:
            raise InvalidStateError("density matrix has a negative eigenvalue")
        object.__setattr__(self, "rho", frozen(r))

    @classmethod
    def from_ket(cls, ket) -> DensityMatrix:
        v = np.asarray(ket, dtype=complex)
        v = v / np.linalg.norm(v)
        return cls(np.outer(v, v.conj()))

    @classmethod
    def basis(cls, k: int) -> DensityMatrix:
        return cls.from_ket(basis_ket(k))

    @classmethod
    def maximally_mixed(cls) -> DensityMatrix:
        return cls(E / DIM)

    @classmethod
    def pseudo_pure(cls, level: int, alpha: float) -> DensityMatrix:
        """``(1 - alpha)/4 * E + alpha * I_kk``."""
        if not abs(alpha) <= 1:
            raise PreconditionError("|alpha| must not exceed 1")
        r = (1 - alpha) / DIM * E.copy()
        r[level, level] += alpha
        return cls(r)

    @property
    def deviation(self) -> np.ndarray:
        """Traceless part ``rho - E/4``."""
        return self.rho - E / DIM

    @property
    def populations(self) -> np.ndarray:
        return np.real(np.diag(self.rho)).copy()

    def max_coherence(self) -> float:
        off = self.rho - np.diag(np.diag(self.rho))
        return float(np.max(np.abs(off)))

    def conjugate_by(self, u) -> DensityMatrix:
        u = as_matrix(u)
        r = u @ self.rho @ u.conj().T
        return DensityMatrix((r + r.conj().T) / 2)

    def allclose(self, other: DensityMatrix, atol: float = 1e-10) -> bool:
        return bool(np.allclose(self.rho, other.rho, atol=atol, rtol=0))


def thermal_state(sys: SystemSpec, beta: float, linearize: bool = True) -> DensityMatrix:
    """Equilibrium state at inverse temperature ``beta`` (units of s/rad)."""
    if not beta >= 0:
        raise PreconditionError("beta must be non-negative")
    eps = np.asarray(sys.energies, dtype=float)
    if linearize:
        return DensityMatrix(np.diag((1 - beta * (eps - eps.mean())) / DIM).astype(complex))
    with np.errstate(over="ignore", under="ignore"):
        w = np.exp(-beta * eps)
        z = w.sum()
    if not np.isfinite(z) or z == 0 or np.any(w == 0):
        raise ThermalOverflowError(
            f"Boltzmann factors overflow at beta={beta:g}; use the linearized high-temperature form"
        )
    return DensityMatrix(np.diag(w / z).astype(complex))


def crush(rho: DensityMatrix) -> DensityMatrix:
    """Gradient pulse: keep populations, drop every coherence."""
    return DensityMatrix(np.diag(np.diag(rho.rho)))


def evolve(rho: DensityMatrix, seq, sys: SystemSpec | None = None) -> DensityMatrix:
    """Apply events in chronological order."""
    for ev in seq:
        if isinstance(ev, PulseSpec):
            rho = rho.conjugate_by(propagator(ev))
        elif isinstance(ev, Gradient):
            rho = crush(rho)
        elif isinstance(ev, Delay):
            if sys is None:
                raise PreconditionError("a SystemSpec is needed to evaluate delays")
            rho = rho.conjugate_by(free_evolution(ev.duration, sys))
        else:
            raise TypeError(f"not a sequence event: {ev!r}")
    return rho


def preparation_sequence(gradient_last: bool = True) -> PulseSequence:
    """X02(pi/2), X23(pi) and a gradient, chronologically.

    ``gradient_last=True`` plays the pulses in the order they are written and
    crushes at the end; ``False`` reads the product right to left, so the
    gradient comes first.
    """
    pulses = (X(0, 2, Fraction(1, 2)), X(2, 3, 1))
    if gradient_last:
        return PulseSequence(pulses + (Gradient(),))
    return PulseSequence((Gradient(),) + pulses[::-1])


@dataclass(frozen=True)
class PseudoPureState:
    state: DensityMatrix
    level: int
    alpha: float
    common: float
    sequence: PulseSequence


def distinguished_level(rho: DensityMatrix, tol: float = EQUAL_TOL) -> tuple[int, float, float]:
    """Return ``(level, alpha, common)`` for a diagonal 3-equal/1-distinct state."""
    if rho.max_coherence() > HERMITIAN_TOL:
        raise PreparationError("state is not diagonal", np.diag(rho.rho))
    p = rho.populations
    hits = []
    for k in range(DIM):
        rest = np.delete(p, k)
        if np.ptp(rest) <= tol and abs(p[k] - rest.mean()) > tol:
            hits.append((k, float(p[k] - rest.mean()), float(rest.mean())))
    if len(hits) != 1:
        raise PreparationError("no single distinguished level", p)
    return hits[0]


def prepare_pseudo_pure(sys: SystemSpec, beta: float, linearize: bool = True,
                        gradient_last: bool = True) -> PseudoPureState:
    if not beta > 0:
        raise PreconditionError("beta must be positive")
    seq = preparation_sequence(gradient_last)
    rho = evolve(thermal_state(sys, beta, linearize), seq, sys)
    level, alpha, common = distinguished_level(rho)
    log.debug("pseudo-pure preparation: level %d, alpha %.3e, gradient_last=%s", level, alpha, gradient_last)
    return PseudoPureState(rho, level, alpha, common, seq)


def fid_amplitude(rho: DensityMatrix, transition: tuple[int, int] = (1, 2)) -> float:
    """Coherence modulus on ``transition`` right after a selective X(pi/2) pulse."""
    m, n = transition
    if not 0 <= m < n < DIM:
        raise PreconditionError("transition must satisfy 0 <= m < n <= 3")
    after = rho.conjugate_by(propagator(X(m, n, Fraction(1, 2))))
    return float(abs(after.rho[m, n]))
