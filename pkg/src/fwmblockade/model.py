"""Parameters, Hamiltonian and collapse channels of the four-wave-mixing cavity.

All rates and detunings are in units of a reference decay rate kappa = 1.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, fields, replace

import numpy as np
from scipy import constants

from .fock import FockOperator, HilbertSpace, annihilation, creation, zero


@dataclass(frozen=True)
class SystemParams:
    delta_a: float = 0.0
    delta_b: float = 0.0
    delta_c: float = 0.0
    g: float = 0.0
    F_a: float = 0.0
    E: complex = 0.0
    kappa_a: float = 1.0
    kappa_b: float = 1.0
    kappa_c: float = 1.0
    n_th_a: float = 0.0
    n_th_b: float = 0.0
    n_th_c: float = 0.0

    def __post_init__(self):
        for name in ("kappa_a", "kappa_b", "kappa_c"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)}")
        for name in ("n_th_a", "n_th_b", "n_th_c"):
            if not getattr(self, name) >= 0:
                raise ValueError(f"{name} must be non-negative, got {getattr(self, name)}")
        # keep E real-typed when it has no imaginary part so echoes stay readable
        e = complex(self.E)
        object.__setattr__(self, "E", e.real if e.imag == 0 else e)

    @classmethod
    def field_names(cls) -> tuple[str, ...]:
        return tuple(f.name for f in fields(cls))

    def with_(self, **changes) -> SystemParams:
        return replace(self, **changes)

    def with_n_th(self, n_th: float) -> SystemParams:
        """Same thermal occupation on all three reservoirs."""
        return replace(self, n_th_a=n_th, n_th_b=n_th, n_th_c=n_th)

    def to_dict(self) -> dict:
        d = asdict(self)
        e = complex(self.E)
        d["E"] = e.real if e.imag == 0 else [e.real, e.imag]
        return d

    @classmethod
    def from_dict(cls, d: dict) -> SystemParams:
        d = dict(d)
        if isinstance(d.get("E"), (list, tuple)):
            d["E"] = complex(*d["E"])
        unknown = set(d) - set(cls.field_names())
        if unknown:
            raise ValueError(f"unknown SystemParams fields: {sorted(unknown)}")
        return cls(**d)


def detuning_relation_holds(params: SystemParams, tol: float = 1e-9) -> bool:
    """Whether delta_b + delta_c = 2 delta_a (validated, never enforced)."""
    return abs(params.delta_b + params.delta_c - 2 * params.delta_a) <= tol


@dataclass(frozen=True)
class CollapseChannel:
    rate: float
    op: FockOperator
    label: str = ""

    def __post_init__(self):
        if self.rate < 0:
            raise ValueError(f"collapse rate must be non-negative, got {self.rate}")


def build_hamiltonian(params: SystemParams, space: HilbertSpace) -> FockOperator:
    """Rotating-frame Hamiltonian

        H = da a+a + db b+b + dc c+c + g (a^2 b+ c+ + a+^2 b c)
            + F (a+ + a) + E b+ c+ + E* b c

    The pump term creates b-c pairs, the only form that feeds |011> from
    the vacuum and so opens the second path to |200> via g.
    """
    a, b, c = (annihilation(space, k) for k in range(3))
    ad, bd, cd = (creation(space, k) for k in range(3))
    E = complex(params.E)

    H = zero(space)
    H = H + params.delta_a * (ad @ a) + params.delta_b * (bd @ b) + params.delta_c * (cd @ c)
    if params.g:
        H = H + params.g * (a @ a @ bd @ cd + ad @ ad @ b @ c)
    if params.F_a:
        H = H + params.F_a * (ad + a)
    if E:
        # non-degenerate parametric pump: creates and destroys b-c pairs
        H = H + E * (bd @ cd) + E.conjugate() * (b @ c)
    return H


def build_collapse_channels(params: SystemParams, space: HilbertSpace) -> list[CollapseChannel]:
    channels = []
    for k, name in enumerate("abc"):
        kappa = getattr(params, f"kappa_{name}")
        n_th = getattr(params, f"n_th_{name}")
        down = kappa * (n_th + 1.0)
        if down < 0 or kappa * n_th < 0:
            raise ValueError(f"negative collapse rate on mode {name}")
        channels.append(CollapseChannel(down, annihilation(space, k), f"{name}-"))
        if n_th > 0:
            channels.append(CollapseChannel(kappa * n_th, creation(space, k), f"{name}+"))
    return [ch for ch in channels if ch.rate > 0]


def bose_einstein_occupation(omega: float, temperature: float) -> float:
    """Mean thermal occupation of a mode at angular frequency ``omega`` (rad/s)."""
    if not omega > 0:
        raise ValueError(f"omega must be positive, got {omega}")
    if temperature < 0:
        raise ValueError(f"temperature must be non-negative, got {temperature}")
    if temperature == 0:
        return 0.0
    x = constants.hbar * omega / (constants.k * temperature)
    return 1.0 / math.expm1(x)


def occupation_from_ratio(x: float) -> float:
    """Bose-Einstein occupation for a given hbar*omega/(k_B*T)."""
    if x <= 0:
        raise ValueError("energy ratio must be positive")
    return 1.0 / math.expm1(x)
