"""Multi-agent occupation-flux dynamics under non-self-adjoint ladder Hamiltonians.

Build registers of fermionic or truncated-bosonic agents, assemble
Hamiltonians from ladder monomials, and evolve occupation observables under
three candidate dynamics (unnormalized, naive Heisenberg, normalized).
Built-in presets come with exact closed-form reference solutions, and a CLI
turns configurations into CSV time series, strategy-comparison reports, and
figures.
"""

from .evolution import (
    EvolutionRequest,
    Strategy,
    TimeSeries,
    default_observables,
    evolve_state,
    mean_value,
    propagator,
    run,
    time_grid,
)
from .hamiltonian import (
    HamiltonianSpec,
    HamiltonianTerm,
    LadderFactor,
    adjoint_spec,
    annihilate,
    compile_hamiltonian,
    conserves_total_number,
    create,
    is_self_adjoint,
    nilpotency_index,
)
from .linalg import adjoint, expm, frobenius, inner, kron, matmul, matvec, norm
from .models import (
    SCENARIOS,
    AsymptoteResult,
    ModelPreset,
    Scenario,
    asymptote,
    closed_form,
    closed_form_pairs,
    closed_norm_squared,
    preset,
)
from .modes import (
    ModeKind,
    ModeSystem,
    annihilator,
    basis_vector,
    creator,
    fermion,
    number_operator,
    parse_occupations,
    total_number_operator,
    truncated_boson,
    vacuum,
)

__version__ = "0.1.0"

__all__ = [
    "AsymptoteResult",
    "EvolutionRequest",
    "HamiltonianSpec",
    "HamiltonianTerm",
    "LadderFactor",
    "ModeKind",
    "ModeSystem",
    "ModelPreset",
    "SCENARIOS",
    "Scenario",
    "Strategy",
    "TimeSeries",
    "adjoint",
    "adjoint_spec",
    "annihilate",
    "annihilator",
    "asymptote",
    "basis_vector",
    "closed_form",
    "closed_form_pairs",
    "closed_norm_squared",
    "compile_hamiltonian",
    "conserves_total_number",
    "create",
    "creator",
    "default_observables",
    "evolve_state",
    "expm",
    "fermion",
    "frobenius",
    "inner",
    "is_self_adjoint",
    "kron",
    "matmul",
    "matvec",
    "mean_value",
    "nilpotency_index",
    "norm",
    "number_operator",
    "parse_occupations",
    "preset",
    "propagator",
    "run",
    "time_grid",
    "total_number_operator",
    "truncated_boson",
    "vacuum",
]
