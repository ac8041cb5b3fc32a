"""Bosonic ladder operators on a truncated three-mode Fock space.

Modes are ordered (a, b, c) and embedded as a (x) b (x) c, so the mode-a
occupation is the slowest-varying index of the flattened basis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

MODE_NAMES = ("a", "b", "c")


@dataclass(frozen=True)
class HilbertSpace:
    dims: tuple[int, int, int]

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if len(dims) != 3:
            raise ValueError(f"expected three mode dimensions, got {dims}")
        if any(d < 1 for d in dims):
            raise ValueError(f"mode dimensions must be positive, got {dims}")
        object.__setattr__(self, "dims", dims)

    @property
    def total_dim(self) -> int:
        return math.prod(self.dims)

    def index(self, m: int, n: int, p: int) -> int:
        """Flat basis index of |m, n, p>."""
        da, db, dc = self.dims
        if not (0 <= m < da and 0 <= n < db and 0 <= p < dc):
            raise IndexError(f"|{m},{n},{p}> outside truncation {self.dims}")
        return (m * db + n) * dc + p

    def occupations(self, k: int) -> tuple[int, int, int]:
        return tuple(int(x) for x in np.unravel_index(k, self.dims))

    def basis(self, m: int, n: int, p: int) -> np.ndarray:
        v = np.zeros(self.total_dim, dtype=complex)
        v[self.index(m, n, p)] = 1.0
        return v


def _check_mode(mode: int) -> int:
    if mode not in (0, 1, 2):
        raise ValueError(f"mode index must be 0, 1 or 2, got {mode!r}")
    return mode


@dataclass(frozen=True, eq=False)
class FockOperator:
    """Dense complex matrix on ``space`` with arithmetic overloads.

    Supports ``+``, ``-``, scalar ``*``, operator product ``@`` (also ``*``
    between two operators) and ``.dag()``.
    """

    space: HilbertSpace
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        d = self.space.total_dim
        if m.shape != (d, d):
            raise ValueError(f"matrix shape {m.shape} does not match space dimension {d}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    def _same_space(self, other: FockOperator) -> None:
        if other.space != self.space:
            raise ValueError(f"dimension mismatch: {self.space.dims} vs {other.space.dims}")

    def dag(self) -> FockOperator:
        return FockOperator(self.space, self.matrix.conj().T)

    def __add__(self, other):
        if isinstance(other, FockOperator):
            self._same_space(other)
            return FockOperator(self.space, self.matrix + other.matrix)
        return NotImplemented

    def __sub__(self, other):
        if isinstance(other, FockOperator):
            self._same_space(other)
            return FockOperator(self.space, self.matrix - other.matrix)
        return NotImplemented

    def __neg__(self):
        return FockOperator(self.space, -self.matrix)

    def __matmul__(self, other):
        if isinstance(other, FockOperator):
            self._same_space(other)
            return FockOperator(self.space, self.matrix @ other.matrix)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, FockOperator):
            return self @ other
        if np.isscalar(other):
            return FockOperator(self.space, complex(other) * self.matrix)
        return NotImplemented

    def __rmul__(self, other):
        if np.isscalar(other):
            return FockOperator(self.space, complex(other) * self.matrix)
        return NotImplemented

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only non-negative integer powers are supported")
        return FockOperator(self.space, np.linalg.matrix_power(self.matrix, k))

    def allclose(self, other: FockOperator, atol: float = 1e-12) -> bool:
        self._same_space(other)
        return bool(np.allclose(self.matrix, other.matrix, rtol=0.0, atol=atol))

    def is_hermitian(self, atol: float = 1e-12) -> bool:
        return bool(np.max(np.abs(self.matrix - self.matrix.conj().T), initial=0.0) < atol)


def single_mode_lowering(dim: int) -> np.ndarray:
    """Truncated lowering matrix with <n-1|a|n> = sqrt(n)."""
    return np.diag(np.sqrt(np.arange(1, dim, dtype=float)), k=1).astype(complex)


def embed(space: HilbertSpace, mode: int, single: np.ndarray) -> FockOperator:
    """Kronecker-embed a single-mode matrix, identities on the other modes."""
    _check_mode(mode)
    factors = [np.eye(d, dtype=complex) for d in space.dims]
    if single.shape != (space.dims[mode],) * 2:
        raise ValueError(f"single-mode matrix shape {single.shape} does not match dim {space.dims[mode]}")
    factors[mode] = single
    out = factors[0]
    for f in factors[1:]:
        out = np.kron(out, f)
    return FockOperator(space, out)


def annihilation(space: HilbertSpace, mode: int) -> FockOperator:
    _check_mode(mode)
    return embed(space, mode, single_mode_lowering(space.dims[mode]))


def creation(space: HilbertSpace, mode: int) -> FockOperator:
    # hard truncation: the top level is mapped to zero
    return annihilation(space, mode).dag()


def number(space: HilbertSpace, mode: int) -> FockOperator:
    return creation(space, mode) @ annihilation(space, mode)


def identity(space: HilbertSpace) -> FockOperator:
    return FockOperator(space, np.eye(space.total_dim, dtype=complex))


def zero(space: HilbertSpace) -> FockOperator:
    return FockOperator(space, np.zeros((space.total_dim,) * 2, dtype=complex))


def compose(terms: Sequence[tuple[complex, Sequence[FockOperator]]], space: HilbertSpace | None = None) -> FockOperator:
    """Sum of ``scalar * product(ops)`` terms.

    ``terms`` is a sequence of ``(coefficient, [op1, op2, ...])``; an empty
    product stands for the identity, which needs ``space`` if no operator
    fixes it.
    """
    spaces = {op.space for _, ops in terms for op in ops}
    if space is not None:
        spaces.add(space)
    if len(spaces) != 1:
        raise ValueError(f"operands must share one HilbertSpace, got {sorted(s.dims for s in spaces)}")
    (sp,) = spaces
    total = zero(sp)
    for coeff, ops in terms:
        prod = identity(sp)
        for op in ops:
            prod = prod @ op
        total = total + complex(coeff) * prod
    return total


def commutator(x: FockOperator, y: FockOperator) -> FockOperator:
    return x @ y - y @ x


def expectation(rho, op: FockOperator) -> complex:
    """Tr(rho @ op). ``rho`` may be a DensityMatrix or a FockOperator."""
    if rho.space != op.space:
        raise ValueError(f"dimension mismatch: {rho.space.dims} vs {op.space.dims}")
    # Tr(AB) = sum_ij A_ij B_ji
    return complex(np.sum(rho.matrix * op.matrix.T))
