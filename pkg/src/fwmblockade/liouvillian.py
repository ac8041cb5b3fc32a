"""Vectorized Lindblad generator, steady-state solve and photon statistics.

Vectorization stacks the columns of rho (Fortran order), so that
vec(A X B) = (B^T kron A) vec(X).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
import scipy.linalg
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .fock import FockOperator, HilbertSpace, annihilation, creation, number

log = logging.getLogger(__name__)


class SolverError(RuntimeError):
    """Steady-state or time-evolution failure."""

    def __init__(self, message: str, residual: float = math.nan):
        super().__init__(message)
        self.residual = residual


class NonUniqueSteadyState(SolverError):
    pass


class ConvergenceError(SolverError):
    pass


class InstabilityError(SolverError):
    pass


class UndefinedCorrelationError(ValueError):
    """Raised when the mean photon number is too small for g^(n) to be defined."""


def vec(m: np.ndarray) -> np.ndarray:
    return np.asarray(m).reshape(-1, order="F")


def unvec(v: np.ndarray, dim: int | None = None) -> np.ndarray:
    if dim is None:
        dim = math.isqrt(v.size)
    return np.asarray(v).reshape((dim, dim), order="F")


@dataclass(frozen=True, eq=False)
class Superoperator:
    space: HilbertSpace
    matrix: sp.csr_matrix = field(repr=False)
    # generator pieces, kept for the iterative solver's preconditioner
    hamiltonian: Optional[FockOperator] = field(default=None, repr=False)
    channels: tuple = field(default=(), repr=False)

    def __post_init__(self):
        d2 = self.space.total_dim ** 2
        if self.matrix.shape != (d2, d2):
            raise ValueError(f"superoperator shape {self.matrix.shape} != ({d2}, {d2})")

    def apply(self, rho: np.ndarray) -> np.ndarray:
        """L acting on a D x D matrix, returned as a D x D matrix."""
        return unvec(self.matrix @ vec(rho), self.space.total_dim)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    space: HilbertSpace
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        d = self.space.total_dim
        if m.shape != (d, d):
            raise ValueError(f"density matrix shape {m.shape} != ({d}, {d})")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @classmethod
    def pure(cls, space: HilbertSpace, m: int, n: int, p: int) -> DensityMatrix:
        v = space.basis(m, n, p)
        return cls(space, np.outer(v, v.conj()))

    @classmethod
    def vacuum(cls, space: HilbertSpace) -> DensityMatrix:
        return cls.pure(space, 0, 0, 0)

    @classmethod
    def maximally_mixed(cls, space: HilbertSpace) -> DensityMatrix:
        d = space.total_dim
        return cls(space, np.eye(d) / d)

    @property
    def trace(self) -> complex:
        return complex(np.trace(self.matrix))

    def hermiticity_error(self) -> float:
        return float(np.max(np.abs(self.matrix - self.matrix.conj().T)))

    def min_eigenvalue(self) -> float:
        h = 0.5 * (self.matrix + self.matrix.conj().T)
        return float(np.linalg.eigvalsh(h)[0])

    def check(self, herm_tol: float = 1e-9, trace_tol: float = 1e-9, psd_tol: float = 1e-8) -> None:
        if self.hermiticity_error() >= herm_tol:
            raise ValueError(f"density matrix not Hermitian: {self.hermiticity_error():.3e}")
        if abs(self.trace - 1) >= trace_tol:
            raise ValueError(f"density matrix trace {self.trace} != 1")
        if self.min_eigenvalue() < -psd_tol:
            raise ValueError(f"density matrix not positive: min eigenvalue {self.min_eigenvalue():.3e}")

    def mode_distribution(self, mode: int = 0) -> np.ndarray:
        """Occupation probabilities of one mode (diagonal of its reduced state)."""
        diag = np.real(np.diag(self.matrix)).reshape(self.space.dims)
        other = tuple(k for k in range(3) if k != mode)
        return diag.sum(axis=other)


@dataclass(frozen=True)
class SolverOptions:
    tolerance: float = 1e-10
    max_iterations: int = 2000
    method: str = "auto"  # auto | direct | gmres
    direct_max_dim: int = 64


@dataclass(frozen=True)
class Observables:
    mean_n_a: float
    g2: Optional[float]
    g3: Optional[float]
    residual: float
    photon_distribution_a: tuple[float, ...]

    @property
    def correlation_defined(self) -> bool:
        return self.g2 is not None

    def to_dict(self) -> dict:
        return {
            "mean_n_a": self.mean_n_a,
            "g2": self.g2,
            "g3": self.g3,
            "residual": self.residual,
            "photon_distribution_a": list(self.photon_distribution_a),
        }

    @classmethod
    def from_dict(cls, d: dict) -> Observables:
        return cls(
            mean_n_a=d["mean_n_a"],
            g2=d["g2"],
            g3=d["g3"],
            residual=d["residual"],
            photon_distribution_a=tuple(d["photon_distribution_a"]),
        )


def _sparse(op: FockOperator) -> sp.csr_matrix:
    return sp.csr_matrix(op.matrix)


def build_liouvillian(H: FockOperator, channels: Sequence) -> Superoperator:
    space = H.space
    d = space.total_dim
    eye = sp.identity(d, dtype=complex, format="csr")
    h = _sparse(H)
    L = -1j * (sp.kron(eye, h) - sp.kron(h.T, eye))
    for ch in channels:
        if ch.op.space != space:
            raise ValueError(f"dimension mismatch: channel on {ch.op.space.dims}, H on {space.dims}")
        if ch.rate == 0:
            continue
        o = _sparse(ch.op)
        odo = (o.conj().T @ o).tocsr()
        L = L + ch.rate * (sp.kron(o.conj(), o) - 0.5 * sp.kron(eye, odo) - 0.5 * sp.kron(odo.T, eye))
    L = sp.csr_matrix(L)
    L.eliminate_zeros()
    return Superoperator(space, L, H, tuple(ch for ch in channels if ch.rate > 0))


def residual_norm(L: Superoperator, rho: DensityMatrix) -> float:
    return float(np.linalg.norm(L.matrix @ vec(rho.matrix)))


def _trace_row_system(L: Superoperator) -> tuple[sp.csc_matrix, np.ndarray]:
    d = L.space.total_dim
    # replace the equation for rho_00 by Tr(rho) = 1
    keep = np.ones(d * d)
    keep[0] = 0.0
    trace_row = sp.csr_matrix((np.ones(d, dtype=complex), (np.zeros(d, dtype=int), np.arange(d) * (d + 1))),
                              shape=(d * d, d * d))
    A = sp.diags(keep) @ L.matrix + trace_row
    b = np.zeros(d * d, dtype=complex)
    b[0] = 1.0
    return sp.csc_matrix(A), b


def _finish(L: Superoperator, x: np.ndarray) -> DensityMatrix:
    d = L.space.total_dim
    rho = unvec(x, d)
    rho = 0.5 * (rho + rho.conj().T)
    rho = rho / np.real(np.trace(rho))
    return DensityMatrix(L.space, rho)


class ExcitationBlockPreconditioner:
    """Exact inverse of the photon-number-conserving part of the generator.

    Elements rho_ij are grouped into blocks (N_i, N_j) by the total photon
    numbers of the two basis states.  Number-conserving Hamiltonian terms
    act inside a block and lowering jumps move (N_i, N_j) -> (N_i - 1, N_j - 1),
    so the system restricted to those couplings is solved exactly by sweeping
    levels N_i + N_j from the top down, one Sylvester equation per block in
    the eigenbasis of H_eff = H - i/2 sum_k rate_k o_k^dag o_k.  Couplings
    that change N_i or N_j alone (coherent drive) or raise both (thermal
    pumping) are left to the Krylov iteration.
    """

    def __init__(self, H: FockOperator, channels: Sequence):
        space = H.space
        d = space.total_dim
        self.dim = d
        n_tot = np.array([sum(space.occupations(k)) for k in range(d)])
        self.levels = [np.flatnonzero(n_tot == n) for n in range(n_tot.max() + 1)]

        K = np.zeros((d, d), dtype=complex)
        self.jumps = []
        for ch in channels:
            o = ch.op.matrix
            K += ch.rate * (o.conj().T @ o)
            r, c = np.nonzero(o)
            if r.size and np.all(n_tot[r] == n_tot[c] - 1):
                o_sp = sp.csr_matrix(o)
                self.jumps.append((ch.rate, o_sp, o_sp.conj().T.tocsr()))
        h_eff = H.matrix - 0.5j * K

        self.eig = []
        for idx in self.levels:
            lam, V = np.linalg.eig(h_eff[np.ix_(idx, idx)])
            if np.linalg.cond(V) > 1e10:
                raise np.linalg.LinAlgError("defective effective Hamiltonian block")
            self.eig.append((lam, V, np.linalg.inv(V)))

    def solve(self, b: np.ndarray) -> np.ndarray:
        d = self.dim
        B = unvec(b, d)
        X = np.zeros((d, d), dtype=complex)
        top = len(self.levels) - 1
        for s in range(2 * top, -1, -1):
            J = None
            if s + 2 <= 2 * top and self.jumps:
                J = sum(rate * (o @ (o @ X).conj().T).conj().T for rate, o, _ in self.jumps)
            for nl in range(max(0, s - top), min(s, top) + 1):
                nr = s - nl
                il, ir = self.levels[nl], self.levels[nr]
                if nl == 0 and nr == 0:
                    # row 0 carries the trace constraint
                    X[0, 0] = B[0, 0] - (np.trace(X) - X[0, 0])
                    continue
                C = B[np.ix_(il, ir)]
                if J is not None:
                    C = C - J[np.ix_(il, ir)]
                lam_l, V_l, Vi_l = self.eig[nl]
                lam_r, V_r, Vi_r = self.eig[nr]
                # -i (H_l X - X H_r^dag) = C with X = V_l Y V_r^dag
                Y = (Vi_l @ C @ Vi_r.conj().T) / (-1j * (lam_l[:, None] - lam_r.conj()[None, :]))
                X[np.ix_(il, ir)] = V_l @ Y @ V_r.conj().T
        return vec(X)

    def as_linear_operator(self) -> spla.LinearOperator:
        return spla.LinearOperator((self.dim ** 2,) * 2, self.solve, dtype=complex)


def _refine(A, b, x, P, max_steps: int = 30) -> np.ndarray:
    """Defect correction x += P^-1 (b - A x) after GMRES.

    GMRES spreads its rounding error evenly over vec(rho), which swamps the
    tiny multi-photon populations at weak drive. The block preconditioner
    works level by level, so its corrections keep each level's error
    relative to that level's own scale. Stops once corrections stop shrinking.
    """
    last = np.inf
    for _ in range(max_steps):
        dx = P.solve(b - A @ x)
        size = np.linalg.norm(dx)
        if not np.isfinite(size) or size >= last:
            break
        x = x + dx
        last = size
        if size <= 1e-17 * np.linalg.norm(x):
            break
    return x


def steady_state(L: Superoperator, options: SolverOptions | None = None) -> DensityMatrix:
    """Stationary state from the trace-constrained linear system.

    Direct sparse LU for small spaces (or ``method="direct"``); above that,
    restarted GMRES preconditioned with :class:`ExcitationBlockPreconditioner`.
    Raises :class:`NonUniqueSteadyState` if the system is singular and
    :class:`ConvergenceError` if the residual contract is not met.
    """
    options = options or SolverOptions()
    A, b = _trace_row_system(L)
    method = options.method
    if method == "auto":
        method = "direct" if L.space.total_dim <= options.direct_max_dim else "gmres"

    if method == "direct":
        try:
            x = spla.splu(A).solve(b)
        except RuntimeError as exc:
            raise NonUniqueSteadyState(f"singular steady-state system ({exc}); steady state is not unique") from exc
    elif method == "gmres":
        if L.hamiltonian is None:
            raise ValueError("iterative solve needs a Superoperator built by build_liouvillian")
        try:
            P = ExcitationBlockPreconditioner(L.hamiltonian, L.channels)
            M = P.as_linear_operator()
        except np.linalg.LinAlgError as exc:
            raise NonUniqueSteadyState(f"singular preconditioner block ({exc}); steady state is not unique") from exc
        x, info = spla.gmres(A, b, M=M, rtol=options.tolerance * 1e-3, atol=0.0,
                             restart=60, maxiter=options.max_iterations)
        if info != 0:
            res = float(np.linalg.norm(A @ x - b))
            raise ConvergenceError(f"GMRES did not converge after {options.max_iterations} iterations "
                                   f"(info={info}, residual={res:.3e})", residual=res)
        x = _refine(A, b, x, P)
    else:
        raise ValueError(f"unknown solver method {options.method!r}")

    if not np.all(np.isfinite(x)):
        raise NonUniqueSteadyState("steady-state solve produced non-finite values")
    rho = _finish(L, x)
    res = residual_norm(L, rho)
    scale = spla.norm(L.matrix) * np.linalg.norm(rho.matrix)
    if scale > 0 and res > options.tolerance * scale:
        raise ConvergenceError(f"steady-state residual {res:.3e} exceeds tolerance", residual=res)
    return rho


def stable_step(L: Superoperator, safety: float = 2.5) -> float:
    """RK4 step bounded by the 1-norm of L (an upper bound on its spectral radius)."""
    bound = spla.norm(L.matrix, 1)
    return safety / bound if bound > 0 else 1.0


def evolve(rho0: DensityMatrix, L: Superoperator, t_final: float, dt: float) -> DensityMatrix:
    """Fixed-step RK4 integration of d vec(rho)/dt = L vec(rho)."""
    if not dt > 0:
        raise ValueError("dt must be positive")
    if t_final < 0:
        raise ValueError("t_final must be non-negative")
    if rho0.space != L.space:
        raise ValueError("dimension mismatch between rho0 and L")
    d = L.space.total_dim
    steps = int(math.ceil(t_final / dt - 1e-12))
    if steps == 0:
        return rho0
    h = t_final / steps
    M = L.matrix
    trace_idx = np.arange(d) * (d + 1)
    x = vec(rho0.matrix).astype(complex)
    tr0 = x[trace_idx].sum()
    norm0 = max(np.linalg.norm(x), 1.0)
    for step in range(steps):
        k1 = M @ x
        k2 = M @ (x + 0.5 * h * k1)
        k3 = M @ (x + 0.5 * h * k2)
        k4 = M @ (x + h * k3)
        x = x + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        if step % 100 == 0 or step == steps - 1:
            n = np.linalg.norm(x)
            drift = abs(x[trace_idx].sum() - tr0)
            if not np.isfinite(n) or n > 1e3 * norm0 or drift > 1e-6:
                raise InstabilityError(
                    f"integration unstable at t={(step + 1) * h:.4g} (norm {n:.3e}, trace drift {drift:.3e}); "
                    "try a smaller dt")
    rho = unvec(x, d)
    return DensityMatrix(L.space, 0.5 * (rho + rho.conj().T))


def correlation_g_n(rho: DensityMatrix, mode: int = 0, n: int = 2, floor: float = 1e-12) -> float:
    """Zero-delay n-th order correlation <a^dag^n a^n> / <a^dag a>^n."""
    if n not in (2, 3):
        raise ValueError(f"only orders 2 and 3 are supported, got {n}")
    a = annihilation(rho.space, mode)
    ad = creation(rho.space, mode)
    mean = np.sum(rho.matrix * number(rho.space, mode).matrix.T)
    if abs(mean) <= floor:
        raise UndefinedCorrelationError(f"mean photon number {mean.real:.3e} below floor {floor:g}")
    an = a ** n
    num = np.sum(rho.matrix * (ad ** n @ an).matrix.T)
    value = num / mean ** n
    if abs(value.imag) >= 1e-9 * max(1.0, abs(value.real)):
        raise ValueError(f"correlation has imaginary part {value.imag:.3e}")
    return float(value.real)


def observables(rho: DensityMatrix, L: Superoperator | None = None, floor: float = 1e-12) -> Observables:
    mean = float(np.real(np.sum(rho.matrix * number(rho.space, 0).matrix.T)))
    try:
        g2 = correlation_g_n(rho, 0, 2, floor)
        g3 = correlation_g_n(rho, 0, 3, floor)
    except UndefinedCorrelationError:
        g2 = g3 = None
    res = residual_norm(L, rho) if L is not None else math.nan
    dist = tuple(float(p) for p in rho.mode_distribution(0))
    return Observables(mean, g2, g3, res, dist)
