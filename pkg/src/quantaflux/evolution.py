"""Time evolution under (generally) non-self-adjoint Hamiltonians.

Three candidate dynamics are implemented for the mean value of a
self-adjoint observable ``X`` on an initial unit state ``psi0`` evolved by
``H``:

``UNNORMALIZED``
    Evolve the state by ``U(t) = exp(-iHt)`` and take ``<psi(t), X psi(t)>``
    as-is.  When ``H`` is not self-adjoint ``U(t)`` is not unitary, the
    state norm drifts, and these means can leave the observable's spectrum.

``HEISENBERG``
    Conjugate the observable instead: ``<psi0, exp(iHt) X exp(-iHt) psi0>``.
    This map is multiplicative (an automorphism of the observable algebra)
    but for non-self-adjoint ``H`` it is *not* the dual of the state
    picture, and it can freeze dynamics that physically should flow.

``NORMALIZED``
    Evolve the state and renormalise before taking the mean:
    ``<psi(t)/|psi(t)|, X psi(t)/|psi(t)|>``.  Means stay inside the
    observable's spectral range, and for self-adjoint ``H`` all three
    strategies coincide.

All three are kept available so their behaviour can be compared on any
model; the normalized strategy is the package default.

Propagators are computed independently per time point (no step chaining),
so nilpotent Hamiltonians - every built-in interaction except the cyclic
ring models - get bit-exact polynomial propagators.  ``run`` evaluates the
grid sequentially; outputs are deterministic functions of the request.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import IO, Sequence

import numpy as np

from .hamiltonian import HamiltonianSpec, compile_hamiltonian, is_self_adjoint
from .linalg import as_matrix, as_vector, expm, norm
from .modes import basis_vector, number_operator, parse_occupations

__all__ = [
    "Strategy",
    "EvolutionRequest",
    "TimeSeries",
    "propagator",
    "evolve_state",
    "mean_value",
    "run",
    "time_grid",
    "default_observables",
]

#: Largest imaginary residue tolerated in an observable mean, relative to
#: ``max(1, |mean|)``: absolute for order-one means, relative for the
#: astronomically scaled unnormalized means on growing trajectories.
IMAG_TOL = 1e-10

#: How close to 1 the initial state norm must be.
STATE_NORM_TOL = 1e-12

#: Evolved-state norms below this abort the normalized mean (guards rounding;
#: exact arithmetic cannot reach zero because U(t) is invertible).
MIN_STATE_NORM = 1e-13

DEFAULT_T_MAX = 10.0
DEFAULT_STEPS = 401


class Strategy(enum.Enum):
    """Which of the three candidate dynamics to evaluate."""

    UNNORMALIZED = "unnormalized"
    HEISENBERG = "heisenberg"
    NORMALIZED = "normalized"


def time_grid(t_max: float = DEFAULT_T_MAX, steps: int = DEFAULT_STEPS) -> np.ndarray:
    """Uniform grid of ``steps`` points on ``[0, t_max]``."""
    if t_max <= 0:
        raise ValueError(f"t_max must be positive, got {t_max}")
    if steps < 2:
        raise ValueError(f"steps must be at least 2, got {steps}")
    return np.linspace(0.0, t_max, steps)


def propagator(h: np.ndarray, t: float) -> np.ndarray:
    """``exp(-i h t)``."""
    h = as_matrix(h)
    return expm(-1j * t * h)


def evolve_state(h: np.ndarray, psi0: np.ndarray, t: float) -> np.ndarray:
    """Apply the propagator at time ``t`` to ``psi0``."""
    h = as_matrix(h)
    psi0 = as_vector(psi0)
    if h.shape[1] != psi0.shape[0]:
        raise ValueError(
            f"state dimension {psi0.shape[0]} does not match operator {h.shape}"
        )
    return propagator(h, t) @ psi0


def _check_observable(x: np.ndarray) -> np.ndarray:
    x = as_matrix(x)
    if not is_self_adjoint(x, IMAG_TOL):
        raise ValueError("observable is not self-adjoint within 1e-10")
    return x


def _check_state(psi0: np.ndarray) -> np.ndarray:
    psi0 = as_vector(psi0)
    if abs(norm(psi0) - 1.0) > STATE_NORM_TOL:
        raise ValueError(f"initial state norm {norm(psi0)} is not 1 within 1e-12")
    return psi0


def _real_mean(value: complex) -> float:
    if abs(value.imag) > IMAG_TOL * max(1.0, abs(value.real)):
        raise ArithmeticError(
            f"observable mean has imaginary residue {value.imag:.3e} beyond 1e-10"
        )
    return value.real


def mean_value(
    strategy: Strategy,
    h: np.ndarray,
    psi0: np.ndarray,
    x: np.ndarray,
    t: float,
) -> float:
    """Mean value of observable ``x`` at time ``t`` under the chosen strategy."""
    h = as_matrix(h)
    psi0 = _check_state(psi0)
    x = _check_observable(x)
    if strategy is Strategy.HEISENBERG:
        evolved_x = propagator(h, -t) @ x @ propagator(h, t)
        return _real_mean(complex(np.vdot(psi0, evolved_x @ psi0)))
    psi_t = propagator(h, t) @ psi0
    if strategy is Strategy.NORMALIZED:
        nrm = norm(psi_t)
        if nrm < MIN_STATE_NORM:
            raise ArithmeticError(
                f"evolved state norm {nrm:.3e} below {MIN_STATE_NORM}; "
                "cannot renormalise"
            )
        psi_t = psi_t / nrm
    return _real_mean(complex(np.vdot(psi_t, x @ psi_t)))


def default_observables(spec: HamiltonianSpec) -> list[tuple[str, np.ndarray]]:
    """Per-mode number operators labelled ``n_1 .. n_M``."""
    return [
        (f"n_{j}", number_operator(spec.system, j))
        for j in range(1, spec.system.size + 1)
    ]


@dataclass(frozen=True)
class EvolutionRequest:
    """One simulation: Hamiltonian, initial state, strategy, grid, observables.

    ``initial`` may be an occupation tuple/string (resolved against the
    spec's mode system) or an explicit unit-norm state vector.  When
    ``observables`` is ``None`` the per-mode number operators are used.
    """

    hamiltonian: HamiltonianSpec
    initial: object
    strategy: Strategy = Strategy.NORMALIZED
    times: np.ndarray | None = None
    observables: Sequence[tuple[str, np.ndarray]] | None = None

    def initial_state(self) -> np.ndarray:
        if isinstance(self.initial, str):
            occ = parse_occupations(self.initial, self.hamiltonian.system)
            return basis_vector(self.hamiltonian.system, occ)
        if isinstance(self.initial, (tuple, list)):
            return basis_vector(self.hamiltonian.system, self.initial)
        return _check_state(self.initial)

    def grid(self) -> np.ndarray:
        if self.times is None:
            return time_grid()
        times = np.asarray(self.times, dtype=float)
        if times.ndim != 1 or times.size < 1:
            raise ValueError("times must be a non-empty 1-d array")
        if times[0] < 0 or np.any(np.diff(times) <= 0):
            raise ValueError("times must be non-negative and strictly increasing")
        return times


@dataclass(frozen=True)
class TimeSeries:
    """Observable means over a time grid, plus the evolved-state norms.

    ``values`` maps an observable label to its per-time-point means;
    ``norms`` holds ``|U(t) psi0|`` (reported for every strategy, including
    the Heisenberg one, where the state itself is never renormalised).
    """

    times: np.ndarray
    values: dict[str, np.ndarray]
    norms: np.ndarray

    @property
    def labels(self) -> list[str]:
        return list(self.values.keys())

    def column(self, label: str) -> np.ndarray:
        return self.values[label]

    def write_csv(self, out: IO[str], digits: int = 12) -> None:
        """Write ``t,<labels...>,norm`` rows with fixed significant digits."""
        fmt = f"{{:.{digits - 1}e}}"
        out.write("t," + ",".join(self.labels) + ",norm\n")
        columns = [self.times, *self.values.values(), self.norms]
        for row in zip(*columns):
            out.write(",".join(fmt.format(v) for v in row) + "\n")


def run(request: EvolutionRequest) -> TimeSeries:
    """Evaluate the request over its grid; one propagator per time point."""
    h = compile_hamiltonian(request.hamiltonian)
    psi0 = _check_state(request.initial_state())
    times = request.grid()
    observables = request.observables
    if observables is None:
        observables = default_observables(request.hamiltonian)
    checked = [(label, _check_observable(x)) for label, x in observables]

    values: dict[str, list[float]] = {label: [] for label, _ in checked}
    norms: list[float] = []
    for t in times:
        u = propagator(h, float(t))
        psi_t = u @ psi0
        nrm = norm(psi_t)
        norms.append(nrm)
        if request.strategy is Strategy.HEISENBERG:
            v = propagator(h, -float(t))
            for label, x in checked:
                values[label].append(
                    _real_mean(complex(np.vdot(psi0, v @ (x @ (u @ psi0)))))
                )
        else:
            w = psi_t
            if request.strategy is Strategy.NORMALIZED:
                if nrm < MIN_STATE_NORM:
                    raise ArithmeticError(
                        f"evolved state norm {nrm:.3e} below {MIN_STATE_NORM} "
                        f"at t={t}; cannot renormalise"
                    )
                w = psi_t / nrm
            for label, x in checked:
                values[label].append(_real_mean(complex(np.vdot(w, x @ w))))

    return TimeSeries(
        times=times,
        values={label: np.asarray(col) for label, col in values.items()},
        norms=np.asarray(norms),
    )
