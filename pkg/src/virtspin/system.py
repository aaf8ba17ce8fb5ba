"""Physical parameters of the four-level system."""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

DEFAULT_OMEGA0 = 1.0
DEFAULT_OMEGA_Q = 0.1
DEFAULT_ETA = 0.0
DEFAULT_BETA = 1e-3


def zeeman_energies(omega0: float = DEFAULT_OMEGA0) -> tuple[float, ...]:
    """Equally spaced levels at m = -3/2 .. 3/2 in units of ``omega0``."""
    return tuple(omega0 * m for m in (-1.5, -0.5, 0.5, 1.5))


@dataclass(frozen=True)
class SystemSpec:
    """Level energies (rad/s) plus the parameters of the transition cost model.

    The defaults are arbitrary desk-scale values.
    """

    energies: tuple[float, float, float, float] = field(default_factory=zeeman_energies)
    omega0: float = DEFAULT_OMEGA0
    omega_q: float = DEFAULT_OMEGA_Q
    eta: float = DEFAULT_ETA

    def __post_init__(self):
        eps = tuple(float(e) for e in self.energies)
        if len(eps) != 4:
            raise ValueError("exactly four level energies are required")
        if any(b <= a for a, b in zip(eps, eps[1:])):
            raise ValueError(f"level energies must be strictly increasing, got {eps}")
        if not self.omega0 > 0:
            raise ValueError("omega0 must be positive")
        if not 0.0 <= self.eta <= 1.0:
            raise ValueError("eta must lie in [0, 1]")
        object.__setattr__(self, "energies", eps)


def read_config(path: str | Path) -> dict[str, str]:
    """Parse a ``key=value`` file; ``#`` starts a comment."""
    out = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key=value")
        key, value = line.split("=", 1)
        out[key.strip().lower()] = value.strip()
    return out


def system_from_config(cfg: dict[str, str]) -> tuple[SystemSpec, float]:
    """Build a SystemSpec and inverse temperature from config entries.

    Recognized keys: ``energies`` (comma separated), ``omega0``, ``omegaq``,
    ``eta``, ``beta``.
    """
    omega0 = float(cfg.get("omega0", DEFAULT_OMEGA0))
    energies = (
        tuple(float(x) for x in cfg["energies"].split(","))
        if "energies" in cfg
        else zeeman_energies(omega0)
    )
    sys_ = SystemSpec(
        energies=energies,
        omega0=omega0,
        omega_q=float(cfg.get("omegaq", cfg.get("omega_q", DEFAULT_OMEGA_Q))),
        eta=float(cfg.get("eta", DEFAULT_ETA)),
    )
    return sys_, float(cfg.get("beta", DEFAULT_BETA))
