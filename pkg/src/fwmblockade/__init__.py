from .fock import (
    FockOperator,
    HilbertSpace,
    annihilation,
    commutator,
    compose,
    creation,
    expectation,
    identity,
    number,
)
from .model import (
    CollapseChannel,
    SystemParams,
    bose_einstein_occupation,
    build_collapse_channels,
    build_hamiltonian,
    detuning_relation_holds,
)
from .liouvillian import (
    ConvergenceError,
    DensityMatrix,
    InstabilityError,
    NonUniqueSteadyState,
    Observables,
    SolverError,
    SolverOptions,
    Superoperator,
    UndefinedCorrelationError,
    build_liouvillian,
    correlation_g_n,
    evolve,
    observables,
    steady_state,
)

__version__ = "0.1.0"


def solve(params: SystemParams, dims=(5, 5, 5), options: SolverOptions | None = None) -> tuple[DensityMatrix, Observables]:
    """Steady state and observables for one parameter point."""
    space = HilbertSpace(tuple(dims))
    L = build_liouvillian(build_hamiltonian(params, space), build_collapse_channels(params, space))
    rho = steady_state(L, options)
    return rho, observables(rho, L)
