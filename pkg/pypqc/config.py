from typing import TypedDict

HERMITIAN_TOL = 1e-10
CONVERGENCE_TOL = 1e-12
MAX_SWEEPS = 100
STATE_TOL = 1e-10
PROBABILITY_FLOOR = 1e-15
DEFAULT_TOL = 1e-9
MAX_QUBITS = 12


class NumericsConfig(TypedDict):
    """
    Numerical tolerances and limits shared by all modules.
    """

    """Max absolute entry deviation of a matrix from its conjugate transpose."""
    hermitian_tol: float

    """Off-diagonal Frobenius norm at which the Jacobi sweeps stop."""
    convergence_tol: float

    """Number of Jacobi sweeps before giving up."""
    max_sweeps: int

    """Tolerance for norms, traces, probability sums and unitarity."""
    state_tol: float

    """Channel terms with probability below this are dropped."""
    probability_floor: float

    """Default tolerance of the verifier and certifiers."""
    default_tol: float

    """Largest register, in qubits, any matrix may act on."""
    max_qubits: int

    """Angles per qubit in the real-product verification grid."""
    grid_angles: int

    """Maximum number of grid products checked."""
    grid_cap: int

    """Seeded random angle tuples checked after the grid."""
    random_tuples: int

    """Seed of the random tuples."""
    verify_seed: int


DefaultNumericsConfig: NumericsConfig = {
    "hermitian_tol": HERMITIAN_TOL,
    "convergence_tol": CONVERGENCE_TOL,
    "max_sweeps": MAX_SWEEPS,
    "state_tol": STATE_TOL,
    "probability_floor": PROBABILITY_FLOOR,
    "default_tol": DEFAULT_TOL,
    "max_qubits": MAX_QUBITS,
    "grid_angles": 16,
    "grid_cap": 4096,
    "random_tuples": 100,
    "verify_seed": 20000101,
}


def withOverrides(config: NumericsConfig = DefaultNumericsConfig, **overrides):
    """Return a copy of `config` with some fields replaced."""
    unknown = set(overrides) - set(DefaultNumericsConfig)
    if unknown:
        raise KeyError(f"Unknown configuration keys: {sorted(unknown)}")
    result: NumericsConfig = {**config, **overrides}  # type: ignore
    return result
