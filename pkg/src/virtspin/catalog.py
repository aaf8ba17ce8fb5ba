"""Logical operators of the two virtual qubits embedded in a spin-3/2.

Level ``k`` of the four-level system is the virtual ket ``|xi zeta>`` with
``k = 2*xi + zeta``: ``xi`` belongs to virtual spin R, ``zeta`` to virtual
spin S.  Every gate is written out as a projector expansion; the Kronecker
factorizations over (R, S) are kept separately so the two can be checked
against each other.
"""
from __future__ import annotations

import enum
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from .su4 import DIM, E, PreconditionError, expand, frozen


class GateId(str, enum.Enum):
    E = "E"
    NOT1 = "NOT1"
    NOT2 = "NOT2"
    NOT = "NOT"
    SWAP = "SWAP"
    CNOT12 = "CNOT12"
    CNOT21 = "CNOT21"
    ICNOT12 = "ICNOT12"
    ICNOT21 = "ICNOT21"
    H1R = "H1R"
    H1S = "H1S"
    h1R = "h1R"
    h1S = "h1S"
    H2 = "H2"
    h2 = "h2"
    PI0 = "PI0"
    PI1 = "PI1"
    PI2 = "PI2"
    PI3 = "PI3"
    D00 = "D00"
    D01 = "D01"
    D10 = "D10"
    D11 = "D11"
    B00 = "B00"
    B01 = "B01"
    B10 = "B10"
    B11 = "B11"
    STAR_P5 = "STAR_P5"
    STAR_P6 = "STAR_P6"
    STAR_P7 = "STAR_P7"
    STAR_P8 = "STAR_P8"
    STAR_P9 = "STAR_P9"

    def __str__(self) -> str:
        return self.value


class UnknownGateError(KeyError):
    pass


class UnsupportedError(ValueError):
    pass


def gate_id(name) -> GateId:
    """Look up a gate id by name (exact match first, then case-insensitive)."""
    if isinstance(name, GateId):
        return name
    try:
        return GateId(name)
    except ValueError:
        pass
    matches = [g for g in GateId if g.value.lower() == str(name).lower()]
    if len(matches) == 1:
        return matches[0]
    if len(matches) > 1:
        raise UnknownGateError(f"gate name {name!r} is ambiguous: {[m.value for m in matches]}")
    raise UnknownGateError(f"unknown gate {name!r}")


class VirtualLabel(NamedTuple):
    xi: int
    zeta: int


def encode(label: VirtualLabel | tuple[int, int]) -> int:
    xi, zeta = label
    if xi not in (0, 1) or zeta not in (0, 1):
        raise PreconditionError(f"virtual labels are bits, got {label!r}")
    return 2 * xi + zeta


def decode(level: int) -> VirtualLabel:
    if level not in range(DIM):
        raise PreconditionError(f"level index must be in 0..3, got {level!r}")
    return VirtualLabel(level >> 1, level & 1)


class BoolFn2(NamedTuple):
    """A Boolean function on one bit, given by its table ``(f(0), f(1))``."""

    f0: int
    f1: int

    @property
    def is_balanced(self) -> bool:
        return bool(self.f0 ^ self.f1)

    @property
    def is_constant(self) -> bool:
        return not self.is_balanced

    @property
    def tag(self) -> str:
        return f"{self.f0}{self.f1}"

    @classmethod
    def parse(cls, text: str) -> BoolFn2:
        s = text.lower().removeprefix("f")
        if len(s) != 2 or any(c not in "01" for c in s):
            raise ValueError(f"oracle must look like f00, f01, f10 or f11; got {text!r}")
        return cls(int(s[0]), int(s[1]))


ALL_FUNCTIONS = tuple(BoolFn2(a, b) for a in (0, 1) for b in (0, 1))

_S2 = 1 / np.sqrt(2)

# Projector expansions, written term by term.
_EXPANSIONS: dict[GateId, tuple[dict, complex]] = {
    GateId.E: ({(0, 0): 1, (1, 1): 1, (2, 2): 1, (3, 3): 1}, 1),
    GateId.NOT1: ({(0, 2): 1, (1, 3): 1, (2, 0): 1, (3, 1): 1}, 1),
    GateId.NOT2: ({(0, 1): 1, (1, 0): 1, (2, 3): 1, (3, 2): 1}, 1),
    GateId.NOT: ({(0, 3): 1, (1, 2): 1, (2, 1): 1, (3, 0): 1}, 1),
    GateId.SWAP: ({(0, 0): 1, (1, 2): 1, (2, 1): 1, (3, 3): 1}, 1),
    GateId.CNOT12: ({(0, 0): 1, (1, 1): 1, (2, 3): 1, (3, 2): 1}, 1),
    GateId.CNOT21: ({(0, 0): 1, (1, 3): 1, (2, 2): 1, (3, 1): 1}, 1),
    GateId.ICNOT12: ({(0, 1): 1, (1, 0): 1, (2, 2): 1, (3, 3): 1}, 1),
    GateId.ICNOT21: ({(0, 2): 1, (1, 1): 1, (2, 0): 1, (3, 3): 1}, 1),
    # Single-qubit Hadamards in the level basis.  Note that these act on the
    # level pairs (0,1) and (2,3) for the R-labelled operators.
    GateId.H1R: ({(0, 0): 1, (0, 1): 1, (1, 0): 1, (1, 1): -1,
                  (2, 2): 1, (2, 3): 1, (3, 2): 1, (3, 3): -1}, _S2),
    GateId.H1S: ({(0, 0): 1, (0, 2): 1, (1, 1): 1, (1, 3): 1,
                  (2, 0): 1, (2, 2): -1, (3, 1): 1, (3, 3): -1}, _S2),
    GateId.h1R: ({(0, 0): 1, (0, 1): -1, (1, 0): 1, (1, 1): 1,
                  (2, 2): 1, (2, 3): -1, (3, 2): 1, (3, 3): 1}, _S2),
    GateId.h1S: ({(0, 0): 1, (0, 2): -1, (1, 1): 1, (1, 3): -1,
                  (2, 0): 1, (2, 2): 1, (3, 1): 1, (3, 3): 1}, _S2),
    GateId.H2: ({(0, 0): 1, (0, 1): 1, (0, 2): 1, (0, 3): 1,
                 (1, 0): 1, (1, 1): -1, (1, 2): 1, (1, 3): -1,
                 (2, 0): 1, (2, 1): 1, (2, 2): -1, (2, 3): -1,
                 (3, 0): 1, (3, 1): -1, (3, 2): -1, (3, 3): 1}, 0.5),
    GateId.h2: ({(0, 0): 1, (0, 1): -1, (0, 2): -1, (0, 3): 1,
                 (1, 0): 1, (1, 1): 1, (1, 2): -1, (1, 3): -1,
                 (2, 0): 1, (2, 1): -1, (2, 2): 1, (2, 3): -1,
                 (3, 0): 1, (3, 1): 1, (3, 2): 1, (3, 3): 1}, 0.5),
    GateId.D00: ({(0, 0): 1, (1, 1): 1, (2, 2): 1, (3, 3): 1}, 1),
    GateId.D01: ({(0, 0): 1, (1, 1): 1, (2, 3): 1, (3, 2): 1}, 1),
    GateId.D10: ({(1, 0): 1, (0, 1): 1, (2, 2): 1, (3, 3): 1}, 1),
    GateId.D11: ({(0, 1): 1, (1, 0): 1, (2, 3): 1, (3, 2): 1}, 1),
}

# B operators as printed next to the single-operator scheme, and the
# matrices of the pulses that realize them.  Kept for comparison only; the
# catalog value of B_f is computed by conjugation.
PRINTED_B: dict[BoolFn2, dict] = {
    BoolFn2(0, 0): {(0, 0): 1, (1, 1): 1, (2, 2): 1, (3, 3): 1},
    BoolFn2(1, 1): {(0, 0): 1, (2, 2): 1, (1, 1): -1, (3, 3): -1},
    BoolFn2(0, 1): {(0, 0): 1, (2, 2): 1, (1, 3): 1, (3, 1): 1},
    BoolFn2(1, 0): {(0, 0): 1, (2, 2): 1, (1, 3): -1, (3, 1): -1},
}
REALIZED_B: dict[BoolFn2, dict] = {
    BoolFn2(0, 0): {(0, 0): 1, (1, 1): 1, (2, 2): 1, (3, 3): 1},
    BoolFn2(1, 1): {(0, 0): 1, (2, 2): 1, (1, 1): -1, (3, 3): -1},
    BoolFn2(0, 1): {(0, 0): 1, (2, 2): 1, (1, 3): -1j, (3, 1): -1j},
    BoolFn2(1, 0): {(0, 0): 1, (2, 2): 1, (1, 3): 1j, (3, 1): 1j},
}

_ORACLES = {
    BoolFn2(0, 0): GateId.D00,
    BoolFn2(0, 1): GateId.D01,
    BoolFn2(1, 0): GateId.D10,
    BoolFn2(1, 1): GateId.D11,
}
_B_IDS = {
    BoolFn2(0, 0): GateId.B00,
    BoolFn2(0, 1): GateId.B01,
    BoolFn2(1, 0): GateId.B10,
    BoolFn2(1, 1): GateId.B11,
}
# *P_m: P_m with every off-diagonal element multiplied by -i, i.e. the
# matrix of a bare X(pi) pulse on the swapped pair.
_STAR_OF = {
    GateId.STAR_P5: GateId.SWAP,
    GateId.STAR_P6: GateId.CNOT12,
    GateId.STAR_P7: GateId.CNOT21,
    GateId.STAR_P8: GateId.ICNOT12,
    GateId.STAR_P9: GateId.ICNOT21,
}

DESCRIPTIONS = {
    GateId.E: "identity (P1)",
    GateId.NOT1: "negation of virtual spin R (P2)",
    GateId.NOT2: "negation of virtual spin S (P3)",
    GateId.NOT: "negation of both virtual spins (P4)",
    GateId.SWAP: "exchange of virtual spin states (P5)",
    GateId.CNOT12: "S negated when R is 1 (P6)",
    GateId.CNOT21: "R negated when S is 1 (P7)",
    GateId.ICNOT12: "S negated when R is 0 (P8)",
    GateId.ICNOT21: "R negated when S is 0 (P9)",
    GateId.H1R: "one-qubit Hadamard, R label",
    GateId.H1S: "one-qubit Hadamard, S label",
    GateId.h1R: "one-qubit pseudo-Hadamard, R label",
    GateId.h1S: "one-qubit pseudo-Hadamard, S label",
    GateId.H2: "two-qubit Hadamard",
    GateId.h2: "two-qubit pseudo-Hadamard",
    GateId.PI0: "sign flip of level 0",
    GateId.PI1: "sign flip of level 1",
    GateId.PI2: "sign flip of level 2",
    GateId.PI3: "sign flip of level 3",
    GateId.D00: "Deutsch-Jozsa oracle, f = 00",
    GateId.D01: "Deutsch-Jozsa oracle, f = 01",
    GateId.D10: "Deutsch-Jozsa oracle, f = 10",
    GateId.D11: "Deutsch-Jozsa oracle, f = 11",
    GateId.B00: "h2^-1 D00 h2",
    GateId.B01: "h2^-1 D01 h2",
    GateId.B10: "h2^-1 D10 h2",
    GateId.B11: "h2^-1 D11 h2",
    GateId.STAR_P5: "SWAP with off-diagonals times -i",
    GateId.STAR_P6: "CNOT12 with off-diagonals times -i",
    GateId.STAR_P7: "CNOT21 with off-diagonals times -i",
    GateId.STAR_P8: "ICNOT12 with off-diagonals times -i",
    GateId.STAR_P9: "ICNOT21 with off-diagonals times -i",
}


def star(matrix, factor: complex = -1j) -> np.ndarray:
    """Copy of ``matrix`` with its off-diagonal entries multiplied by ``factor``."""
    m = np.array(matrix, dtype=complex)
    off = ~np.eye(DIM, dtype=bool)
    m[off] *= factor
    return m


@lru_cache(maxsize=None)
def _gate(gid: GateId) -> np.ndarray:
    if gid in _EXPANSIONS:
        coeffs, scale = _EXPANSIONS[gid]
        return frozen(expand(coeffs, scale))
    if gid.name.startswith("PI"):
        k = int(gid.name[2:])
        m = E.copy()
        m[k, k] = -1
        return frozen(m)
    if gid in _STAR_OF:
        return frozen(star(_gate(_STAR_OF[gid]), -1j))
    if gid.name.startswith("B"):
        return frozen(b_operator(BoolFn2(int(gid.name[1]), int(gid.name[2]))))
    raise UnknownGateError(gid)  # pragma: no cover - enum is exhaustive


def gate(gid) -> np.ndarray:
    """Read-only matrix of a catalog gate."""
    return _gate(gate_id(gid))


def oracle(f: BoolFn2) -> tuple[GateId, np.ndarray]:
    f = BoolFn2(*f)
    gid = _ORACLES[f]
    return gid, gate(gid)


def b_id(f: BoolFn2) -> GateId:
    return _B_IDS[BoolFn2(*f)]


def function_of(gid) -> BoolFn2:
    """Inverse of :func:`oracle` / :func:`b_id` for D and B gate ids."""
    gid = gate_id(gid)
    if gid.name[0] not in "DB" or len(gid.name) != 3:
        raise UnsupportedError(f"{gid} is not a Deutsch-Jozsa gate")
    return BoolFn2(int(gid.name[1]), int(gid.name[2]))


def b_operator(f: BoolFn2) -> np.ndarray:
    """``h2^-1 D_f h2``: pseudo-Hadamard first in time, oracle, then its inverse."""
    h = gate(GateId.h2)
    _, d = oracle(f)
    return np.linalg.inv(h) @ d @ h


def printed_b(f: BoolFn2) -> np.ndarray:
    return expand(PRINTED_B[BoolFn2(*f)])


def realized_b(f: BoolFn2) -> np.ndarray:
    return expand(REALIZED_B[BoolFn2(*f)])


def b_report(f: BoolFn2) -> dict:
    """Computed B_f next to the printed matrix and their element-wise difference."""
    f = BoolFn2(*f)
    computed = b_operator(f)
    printed = printed_b(f)
    diff = computed - printed
    return {
        "function": f.tag,
        "computed": computed,
        "printed": printed,
        "difference": diff,
        "max_abs_difference": float(np.max(np.abs(diff))),
    }


# ---------------------------------------------------------------------------
# Kronecker factorizations over R (x) S.

_S2x2 = {
    "e": np.eye(2),
    "x": np.array([[0, 1], [1, 0]]),
    "y": np.array([[0, -1j], [1j, 0]]),
    "z": np.array([[1, 0], [0, -1]]),
    "00": np.array([[1, 0], [0, 0]]),
    "01": np.array([[0, 1], [0, 0]]),
    "10": np.array([[0, 0], [1, 0]]),
    "11": np.array([[0, 0], [0, 1]]),
}


class Term(NamedTuple):
    coeff: complex
    r: str
    s: str

    def __str__(self) -> str:
        c = self.coeff
        cs = "" if c == 1 else ("-" if c == -1 else f"({c:g})*")
        return f"{cs}r_{self.r} (x) s_{self.s}"


def _h_terms(kind: str) -> list[tuple[float, str]]:
    # Single-qubit (pseudo-)Hadamard as a combination of 2x2 projectors.
    if kind == "H":
        return [(_S2, "00"), (_S2, "01"), (_S2, "10"), (-_S2, "11")]
    return [(_S2, "00"), (-_S2, "01"), (_S2, "10"), (_S2, "11")]


def _factorizations() -> dict[GateId, tuple[Term, ...]]:
    t = Term
    f = {
        GateId.E: (t(1, "e", "e"),),
        GateId.NOT1: (t(1, "x", "e"),),
        GateId.NOT2: (t(1, "e", "x"),),
        GateId.NOT: (t(1, "x", "x"),),
        GateId.SWAP: (t(0.5, "e", "e"), t(0.5, "x", "x"), t(0.5, "y", "y"), t(0.5, "z", "z")),
        GateId.CNOT12: (t(1, "00", "e"), t(1, "11", "x")),
        GateId.CNOT21: (t(1, "e", "00"), t(1, "x", "11")),
        GateId.ICNOT12: (t(1, "00", "x"), t(1, "11", "e")),
        GateId.ICNOT21: (t(1, "x", "00"), t(1, "e", "11")),
    }
    # The level-basis matrices above put the R-labelled Hadamards on the
    # second tensor factor.
    for gid, kind in ((GateId.H1R, "H"), (GateId.h1R, "h")):
        f[gid] = tuple(t(c, "e", p) for c, p in _h_terms(kind))
    for gid, kind in ((GateId.H1S, "H"), (GateId.h1S, "h")):
        f[gid] = tuple(t(c, p, "e") for c, p in _h_terms(kind))
    for gid, kind in ((GateId.H2, "H"), (GateId.h2, "h")):
        f[gid] = tuple(t(cr * cs, pr, ps) for cr, pr in _h_terms(kind) for cs, ps in _h_terms(kind))
    f[GateId.D00] = f[GateId.E]
    f[GateId.D01] = f[GateId.CNOT12]
    f[GateId.D10] = f[GateId.ICNOT12]
    f[GateId.D11] = f[GateId.NOT2]
    return f


FACTORIZATIONS = _factorizations()


def virtual_factorization(gid) -> tuple[Term, ...]:
    gid = gate_id(gid)
    try:
        return FACTORIZATIONS[gid]
    except KeyError:
        raise UnsupportedError(f"no virtual-spin factorization is listed for {gid}") from None


def evaluate_factorization(terms) -> np.ndarray:
    out = np.zeros((DIM, DIM), dtype=complex)
    for term in terms:
        out += term.coeff * np.kron(_S2x2[term.r], _S2x2[term.s])
    return out


def format_factorization(terms) -> str:
    return " + ".join(str(t) for t in terms)
