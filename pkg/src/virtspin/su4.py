"""Fixed-size 4x4 complex linear algebra for a four-level system.

Matrices are plain ``numpy`` arrays of shape (4, 4) and dtype complex128.
Functions here never mutate their arguments; cached values handed out by the
library are marked read-only.
"""
from __future__ import annotations

import numpy as np

DIM = 4
ATOL = 1e-12

E = np.eye(DIM, dtype=complex)
E.flags.writeable = False


class PreconditionError(ValueError):
    """An operation was called with arguments outside its domain."""


class NotEquivalentError(ValueError):
    """Two unitaries are not equal up to a global phase."""

    def __init__(self, distance: float, message: str | None = None):
        self.distance = distance
        super().__init__(message or f"operators differ beyond global phase (distance {distance:.3e})")


def frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex)
    a.flags.writeable = False
    return a


def as_matrix(a) -> np.ndarray:
    m = np.asarray(a, dtype=complex)
    if m.shape != (DIM, DIM):
        raise PreconditionError(f"expected a 4x4 matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise PreconditionError("matrix has non-finite entries")
    return m


def _check_level(k: int) -> None:
    if not (isinstance(k, (int, np.integer)) and 0 <= k < DIM):
        raise PreconditionError(f"level index must be in 0..3, got {k!r}")


def projector(m: int, n: int) -> np.ndarray:
    """Matrix unit ``I_mn``: a single 1 at row ``m``, column ``n``."""
    _check_level(m)
    _check_level(n)
    a = np.zeros((DIM, DIM), dtype=complex)
    a[m, n] = 1.0
    return a


def expand(coeffs: dict[tuple[int, int], complex], scale: complex = 1.0) -> np.ndarray:
    """Build ``scale * sum(c * I_mn)`` from a ``{(m, n): c}`` mapping."""
    a = np.zeros((DIM, DIM), dtype=complex)
    for (m, n), c in coeffs.items():
        _check_level(m)
        _check_level(n)
        a[m, n] += c
    return scale * a


def multiply(*factors) -> np.ndarray:
    """Ordinary matrix product, leftmost factor outermost."""
    out = E.copy()
    for f in factors:
        out = out @ as_matrix(f)
    return out


def adjoint(a) -> np.ndarray:
    return as_matrix(a).conj().T.copy()


def max_norm(a) -> float:
    return float(np.max(np.abs(a)))


def is_unitary(a, atol: float = ATOL) -> bool:
    m = as_matrix(a)
    return max_norm(m.conj().T @ m - E) <= atol


def is_hermitian(a, atol: float = ATOL) -> bool:
    m = as_matrix(a)
    return max_norm(m - m.conj().T) <= atol


def basis_ket(k: int) -> np.ndarray:
    _check_level(k)
    v = np.zeros(DIM, dtype=complex)
    v[k] = 1.0
    return v


def _require_unitary(*mats, atol: float = 1e-9) -> None:
    for m in mats:
        if not is_unitary(m, atol):
            raise PreconditionError("operator is not unitary")


def phase_distance(u, v) -> float:
    """``1 - |tr(u^H v)| / 4``; zero exactly when ``v = exp(i a) u``."""
    u, v = as_matrix(u), as_matrix(v)
    _require_unitary(u, v)
    d = 1.0 - abs(np.trace(u.conj().T @ v)) / DIM
    return min(max(d, 0.0), 1.0)


def global_phase(u, v, tol: float = 1e-10) -> complex:
    """Unit scalar ``c`` with ``v ~= c * u``.

    Raises NotEquivalentError when the two operators are further apart than
    ``tol`` in :func:`phase_distance`.
    """
    d = phase_distance(u, v)
    if d > tol:
        raise NotEquivalentError(d)
    t = np.trace(as_matrix(u).conj().T @ as_matrix(v))
    return complex(t / abs(t))


def equal_up_to_phase(u, v, tol: float = 1e-10) -> bool:
    return phase_distance(u, v) <= tol
