"""Closed-form blockade conditions and the weak-drive amplitude model."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .model import SystemParams

SQRT2 = math.sqrt(2.0)


class Regime(str, enum.Enum):
    SINGLE_PHOTON_BLOCKADE = "single_photon_blockade"
    TWO_PHOTON_BLOCKADE = "two_photon_blockade"
    NONE = "none"


class NoInterferencePathError(ValueError):
    """g = 0 leaves no |011> <-> |200> path to interfere with."""


class SingularAmplitudeSystem(ArithmeticError):
    pass


def two_photon_manifold_matrix(delta_a: float, g: float, delta_bc: Optional[float] = None) -> np.ndarray:
    """Hamiltonian on span{|200>, |011>} without drives.

    ``delta_bc`` is delta_b + delta_c and defaults to 2 * delta_a.
    """
    if delta_bc is None:
        delta_bc = 2.0 * delta_a
    return np.array([[2.0 * delta_a, SQRT2 * g], [SQRT2 * g, delta_bc]], dtype=float)


def cpb_eigenfrequencies(delta_a: float, g: float) -> tuple[float, float]:
    """(omega_plus, omega_minus) = 2 delta_a +/- sqrt(2) g."""
    return 2.0 * delta_a + SQRT2 * g, 2.0 * delta_a - SQRT2 * g


def cpb_eigenfrequencies_numeric(delta_a: float, g: float) -> tuple[float, float]:
    """Same quantity from diagonalizing the two-photon manifold matrix.

    Ordered to line up with :func:`cpb_eigenfrequencies` (the + branch
    first when g >= 0).
    """
    lo, hi = np.linalg.eigvalsh(two_photon_manifold_matrix(delta_a, g))
    return (float(hi), float(lo)) if g >= 0 else (float(lo), float(hi))


def upb_optimal_E(F_a: float, g: float) -> complex:
    """Pump amplitude cancelling |200> for equal decay rates and matched detunings."""
    if g == 0:
        raise NoInterferencePathError("g = 0: no interference path, UPB optimum undefined")
    return -2.0 * F_a ** 2 / g


def upb_optimal_g(F_a: float, E: complex) -> float:
    """Inverse use of :func:`upb_optimal_E`: coupling for a given pump."""
    if E == 0:
        raise NoInterferencePathError("E = 0: no pump path, UPB optimum undefined")
    return float(np.real(-2.0 * F_a ** 2 / E))


def upb_optimal_drive(E: float, g: float) -> float:
    """|F_a| satisfying the optimum for given real E, g with E * g < 0."""
    if g == 0:
        raise NoInterferencePathError("g = 0: no interference path, UPB optimum undefined")
    if E * g > 0:
        raise ValueError("E * g > 0: no real drive amplitude satisfies the UPB optimum")
    return math.sqrt(-E * g / 2.0)


def upb_optimal_E_general(params: SystemParams) -> complex:
    """Optimal pump for arbitrary decay rates and detunings."""
    p = params
    if p.g == 0:
        raise NoInterferencePathError("g = 0: no interference path, UPB optimum undefined")
    bc = p.delta_b + p.delta_c - 0.5j * (p.kappa_b + p.kappa_c)
    a = p.delta_a - 0.5j * p.kappa_a
    return complex(-bc * p.F_a ** 2 / (p.g * a))


@dataclass(frozen=True)
class AmplitudeState:
    c000: complex
    c100: complex
    c200: complex
    c011: complex

    def as_array(self) -> np.ndarray:
        return np.array([self.c000, self.c100, self.c200, self.c011], dtype=complex)


def amplitude_equations(params: SystemParams) -> tuple[np.ndarray, np.ndarray]:
    """Linear system M @ (c100, c200, c011) = rhs with c000 = 1."""
    p = params
    za = p.delta_a - 0.5j * p.kappa_a
    zbc = p.delta_b + p.delta_c - 0.5j * (p.kappa_b + p.kappa_c)
    F = p.F_a
    M = np.array(
        [
            [za, SQRT2 * F, 0.0],
            [SQRT2 * F, 2.0 * za, SQRT2 * p.g],
            [0.0, SQRT2 * p.g, zbc],
        ],
        dtype=complex,
    )
    rhs = -np.array([F, 0.0, complex(p.E)], dtype=complex)
    return M, rhs


def amplitude_model(params: SystemParams) -> AmplitudeState:
    M, rhs = amplitude_equations(params)
    if not np.isfinite(np.linalg.cond(M)) or np.linalg.cond(M) > 1e14:
        raise SingularAmplitudeSystem(f"amplitude equations singular for {params}")
    c100, c200, c011 = np.linalg.solve(M, rhs)
    return AmplitudeState(1.0 + 0j, complex(c100), complex(c200), complex(c011))


def amplitude_model_g2(params: SystemParams, floor: float = 1e-300) -> float:
    """Weak-drive estimate 2 |c200|^2 / |c100|^4."""
    amp = amplitude_model(params)
    n1 = abs(amp.c100) ** 2
    if n1 ** 2 <= floor:
        raise ValueError(f"|c100|^2 = {n1:.3e} too small for a g2 estimate")
    return 2.0 * abs(amp.c200) ** 2 / n1 ** 2


@dataclass(frozen=True)
class BlockadeVerdict:
    regime: Regime
    cpb_condition_met: bool
    upb_condition_met: bool

    @property
    def composite(self) -> bool:
        return self.cpb_condition_met and self.upb_condition_met

    def to_dict(self) -> dict:
        return {
            "regime": self.regime.value,
            "cpb_condition_met": self.cpb_condition_met,
            "upb_condition_met": self.upb_condition_met,
            "composite": self.composite,
        }

    @classmethod
    def from_dict(cls, d: dict) -> BlockadeVerdict:
        return cls(Regime(d["regime"]), d["cpb_condition_met"], d["upb_condition_met"])


def regime_of(g2: Optional[float], g3: Optional[float]) -> Regime:
    if g2 is None:
        return Regime.NONE
    if g2 < 1.0:
        return Regime.SINGLE_PHOTON_BLOCKADE
    if g3 is not None and g3 < 1.0:
        return Regime.TWO_PHOTON_BLOCKADE
    return Regime.NONE


def classify(obs, params: SystemParams, tol_delta: float = 0.01, tol_E: Optional[float] = None) -> BlockadeVerdict:
    """Blockade regime from g2/g3 plus which analytic conditions hold.

    The UPB window defaults to max(5% of |E_opt|, 1e-4).
    """
    cpb = abs(params.delta_a) < tol_delta
    try:
        e_opt = upb_optimal_E(params.F_a, params.g)
    except NoInterferencePathError:
        upb = False
    else:
        window = tol_E if tol_E is not None else max(0.05 * abs(e_opt), 1e-4)
        upb = abs(complex(params.E) - e_opt) < window
    return BlockadeVerdict(regime_of(obs.g2, obs.g3), cpb, upb)
