"""Built-in model presets and their closed-form reference solutions.

Six presets cover the systems the package was written around, all driven
by dagger-unbalanced couplings that push quanta in one direction only:

``model1``
    Two fermionic agents, ``H = lambda * a2' a1`` (primes denote daggers):
    mode 1 drains into mode 2.
``model2``
    Two three-level bosonic agents with the same coupling shape.
``model3-h1``
    Three fermionic agents, ``H = b1'(lambda b2 + mu b3)``: modes 2 and 3
    both feed mode 1.
``model3-h2``
    Three fermionic agents, ``H = lambda b1' b2 + mu b2' b3``: a chain
    3 -> 2 -> 1 with a transient build-up in the middle.
``info-ha``
    Three fermionic agents on a uniform directed ring
    ``b2' b1 + b3' b2 + b1' b3``; occupation homogenises across agents.
``info-hb``
    The same ring with per-edge strengths ``lambda1, lambda2, lambda3``;
    unequal strengths break homogenisation.

For every (preset, initial-basis-state) pair listed in
:func:`closed_form_pairs` the exact normalized-strategy occupations are
available through :func:`closed_form`, evaluated from hand-derived
formulas rather than from the evolution engine, so they can serve as an
independent check of it.  The ring forms come from diagonalising the
3 x 3 single-occupancy block (eigenvalues ``1, exp(2i pi/3), exp(-2i pi/3)``
of the cyclic shift), whose exponentials carry the ``cosh``/``cos`` mix
visible in the formulas.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

import numpy as np

from .evolution import EvolutionRequest, Strategy, mean_value, run
from .hamiltonian import (
    HamiltonianSpec,
    HamiltonianTerm,
    annihilate,
    compile_hamiltonian,
    create,
)
from .modes import ModeSystem, basis_vector, fermion, number_operator, truncated_boson

__all__ = [
    "ModelPreset",
    "Scenario",
    "AsymptoteResult",
    "PRESET_NAMES",
    "SCENARIOS",
    "preset",
    "closed_form",
    "closed_norm_squared",
    "closed_form_pairs",
    "asymptote",
]

PRESET_NAMES = ("model1", "model2", "model3-h1", "model3-h2", "info-ha", "info-hb")

_PRESET_DEFAULTS: dict[str, dict[str, float]] = {
    "model1": {"lambda": 1.0},
    "model2": {"lambda": 1.0},
    "model3-h1": {"lambda": 1.0, "mu": 1.0},
    "model3-h2": {"lambda": 1.0, "mu": 1.0},
    "info-ha": {},
    "info-hb": {"lambda1": 1.0, "lambda2": 2.0, "lambda3": 3.0},
}

_DEFAULT_INITIAL: dict[str, tuple[int, ...]] = {
    "model1": (1, 0),
    "model2": (1, 1),
    "model3-h1": (0, 1, 1),
    "model3-h2": (0, 0, 1),
    "info-ha": (1, 0, 0),
    "info-hb": (1, 0, 1),
}


@dataclass(frozen=True)
class ModelPreset:
    """A ready-to-run model: register, Hamiltonian, parameters, start state."""

    name: str
    system: ModeSystem
    hamiltonian: HamiltonianSpec
    parameters: dict[str, float]
    default_initial: tuple[int, ...]


@dataclass(frozen=True)
class Scenario:
    """A named (preset, parameters, initial state) fixture."""

    preset: str
    parameters: dict[str, float]
    initial: str


#: Named scenario fixtures; the CLI accepts these wherever a preset name goes.
SCENARIOS: dict[str, Scenario] = {
    "homogenization": Scenario("info-ha", {}, "100"),
    "anisotropic-mild": Scenario(
        "info-hb", {"lambda1": 1.0, "lambda2": 2.0, "lambda3": 3.0}, "101"
    ),
    "anisotropic-skewed": Scenario(
        "info-hb", {"lambda1": 1.0, "lambda2": 2.0, "lambda3": 30.0}, "101"
    ),
    "anisotropic-strong": Scenario(
        "info-hb", {"lambda1": 1.0, "lambda2": 28.0, "lambda3": 30.0}, "101"
    ),
}


def _resolve_params(name: str, params: Mapping[str, float] | None) -> dict[str, float]:
    defaults = _PRESET_DEFAULTS[name]
    resolved = dict(defaults)
    for key, value in (params or {}).items():
        if key not in defaults:
            raise ValueError(
                f"preset {name!r} takes parameters {sorted(defaults) or 'none'}, "
                f"got {key!r}"
            )
        resolved[key] = float(value)
    for key, value in resolved.items():
        if value <= 0:
            warnings.warn(
                f"parameter {key}={value} of preset {name!r} is not positive",
                stacklevel=3,
            )
    return resolved


def preset(name: str, params: Mapping[str, float] | None = None) -> ModelPreset:
    """Assemble a named preset, overriding default parameters with ``params``."""
    if name not in PRESET_NAMES:
        raise ValueError(f"unknown preset {name!r}; choose from {PRESET_NAMES}")
    p = _resolve_params(name, params)

    if name == "model1":
        system = ModeSystem([fermion(), fermion()])
        terms = [HamiltonianTerm(p["lambda"], [create(2), annihilate(1)])]
    elif name == "model2":
        system = ModeSystem([truncated_boson(3), truncated_boson(3)])
        terms = [HamiltonianTerm(p["lambda"], [create(2), annihilate(1)])]
    elif name == "model3-h1":
        system = ModeSystem([fermion(), fermion(), fermion()])
        terms = [
            HamiltonianTerm(p["lambda"], [create(1), annihilate(2)]),
            HamiltonianTerm(p["mu"], [create(1), annihilate(3)]),
        ]
    elif name == "model3-h2":
        system = ModeSystem([fermion(), fermion(), fermion()])
        terms = [
            HamiltonianTerm(p["lambda"], [create(1), annihilate(2)]),
            HamiltonianTerm(p["mu"], [create(2), annihilate(3)]),
        ]
    elif name == "info-ha":
        system = ModeSystem([fermion(), fermion(), fermion()])
        terms = [
            HamiltonianTerm(1.0, [create(2), annihilate(1)]),
            HamiltonianTerm(1.0, [create(3), annihilate(2)]),
            HamiltonianTerm(1.0, [create(1), annihilate(3)]),
        ]
    else:  # info-hb
        system = ModeSystem([fermion(), fermion(), fermion()])
        terms = [
            HamiltonianTerm(p["lambda1"], [create(2), annihilate(1)]),
            HamiltonianTerm(p["lambda2"], [create(3), annihilate(2)]),
            HamiltonianTerm(p["lambda3"], [create(1), annihilate(3)]),
        ]

    return ModelPreset(
        name=name,
        system=system,
        hamiltonian=HamiltonianSpec(system, terms),
        parameters=p,
        default_initial=_DEFAULT_INITIAL[name],
    )


# ---------------------------------------------------------------------------
# closed forms (normalized strategy)
#
# Each entry maps (preset name, occupation string) to a pair of callables
# (params, t) -> occupations of shape (modes,) + t.shape, and
# (params, t) -> squared state norm of shape t.shape.
# ---------------------------------------------------------------------------

_Form = Callable[[Mapping[str, float], np.ndarray], np.ndarray]


def _constant_form(occupations: Sequence[int]) -> tuple[_Form, _Form]:
    occ = np.asarray(occupations, dtype=float)

    def values(params, t):
        return occ[:, None] * np.ones_like(t)

    def norm_sq(params, t):
        return np.ones_like(t)

    return values, norm_sq


def _model1_10(params, t):
    x = (params["lambda"] * t) ** 2
    d = 1.0 + x
    return np.stack([1.0 / d, x / d])


def _model1_10_norm(params, t):
    return 1.0 + (params["lambda"] * t) ** 2


def _model2_11(params, t):
    x = (params["lambda"] * t) ** 2
    d = 1.0 + 2.0 * x
    return np.stack([1.0 / d, (1.0 + 4.0 * x) / d])


def _model2_11_norm(params, t):
    return 1.0 + 2.0 * (params["lambda"] * t) ** 2


def _model2_21(params, t):
    x = (params["lambda"] * t) ** 2
    d = 1.0 + 4.0 * x
    return np.stack([(2.0 + 4.0 * x) / d, (1.0 + 8.0 * x) / d])


def _model2_21_norm(params, t):
    return 1.0 + 4.0 * (params["lambda"] * t) ** 2


def _model3_h1_011(params, t):
    lam2, mu2 = params["lambda"] ** 2, params["mu"] ** 2
    s = (lam2 + mu2) * t**2
    d = 1.0 + s
    return np.stack([s / d, (1.0 + mu2 * t**2) / d, (1.0 + lam2 * t**2) / d])


def _model3_h1_011_norm(params, t):
    return 1.0 + (params["lambda"] ** 2 + params["mu"] ** 2) * t**2


def _chain_from_middle(params, t):
    x = (params["lambda"] * t) ** 2
    d = 1.0 + x
    return np.stack([x / d, 1.0 / d, np.zeros_like(t)])


def _chain_from_middle_norm(params, t):
    return 1.0 + (params["lambda"] * t) ** 2


def _model3_h2_001(params, t):
    lam2, mu2 = params["lambda"] ** 2, params["mu"] ** 2
    quartic = lam2 * mu2 * t**4 / 4.0
    d = 1.0 + mu2 * t**2 + quartic
    return np.stack([quartic / d, mu2 * t**2 / d, 1.0 / d])


def _model3_h2_001_norm(params, t):
    lam2, mu2 = params["lambda"] ** 2, params["mu"] ** 2
    return 1.0 + mu2 * t**2 + lam2 * mu2 * t**4 / 4.0


def _ring_single_occupancy(params, t):
    """Ring occupations from one quantum on agent 1.

    From the eigendecomposition of the single-occupancy cyclic block: the
    three propagated amplitudes mix one oscillatory mode (unit eigenvalue)
    with a growing/decaying pair (eigenvalues ``exp(-+ 2i pi/3)``), giving
    hyperbolic-times-trigonometric occupation fractions.
    """
    r3 = np.sqrt(3.0)
    ch = np.cosh(r3 * t)
    ch_half = np.cosh(r3 * t / 2.0)
    sh_half = np.sinh(r3 * t / 2.0)
    cos_t = np.cos(1.5 * t)
    sin_t = np.sin(1.5 * t)
    den = 3.0 * (1.0 + 2.0 * ch)
    n1 = (3.0 + 4.0 * ch_half * cos_t + 2.0 * ch) / den
    n2 = (2.0 * ch - 2.0 * ch_half * cos_t + 2.0 * r3 * sh_half * sin_t) / den
    n3 = (2.0 * ch - 2.0 * ch_half * cos_t - 2.0 * r3 * sh_half * sin_t) / den
    return np.stack([n1, n2, n3])


def _ring_norm(params, t):
    return (1.0 + 2.0 * np.cosh(np.sqrt(3.0) * t)) / 3.0


def _ring_shifted(shift: int) -> _Form:
    """Start the single quantum on agent ``1 + shift`` instead of agent 1.

    The uniform ring is invariant under the cyclic relabelling of agents,
    so the occupation curves just permute.
    """

    def values(params, t):
        base = _ring_single_occupancy(params, t)
        return np.stack([base[(j - shift) % 3] for j in range(3)])

    return values


_CLOSED_FORMS: dict[tuple[str, str], tuple[_Form, _Form]] = {
    ("model1", "10"): (_model1_10, _model1_10_norm),
    ("model1", "00"): _constant_form((0, 0)),
    ("model1", "01"): _constant_form((0, 1)),
    ("model1", "11"): _constant_form((1, 1)),
    ("model2", "11"): (_model2_11, _model2_11_norm),
    ("model2", "21"): (_model2_21, _model2_21_norm),
    ("model3-h1", "011"): (_model3_h1_011, _model3_h1_011_norm),
    ("model3-h1", "010"): (_chain_from_middle, _chain_from_middle_norm),
    ("model3-h2", "010"): (_chain_from_middle, _chain_from_middle_norm),
    ("model3-h2", "001"): (_model3_h2_001, _model3_h2_001_norm),
    ("info-ha", "100"): (_ring_shifted(0), _ring_norm),
    ("info-ha", "010"): (_ring_shifted(1), _ring_norm),
    ("info-ha", "001"): (_ring_shifted(2), _ring_norm),
    ("info-ha", "000"): _constant_form((0, 0, 0)),
    ("info-ha", "111"): _constant_form((1, 1, 1)),
}


def closed_form_pairs() -> list[tuple[str, str]]:
    """Every (preset, initial) pair with an exact reference solution."""
    return sorted(_CLOSED_FORMS.keys())


def _normalise_initial(initial) -> str:
    if isinstance(initial, str):
        return initial
    return "".join(str(int(n)) for n in initial)


def closed_form(
    name: str,
    initial,
    params: Mapping[str, float] | None = None,
    t=0.0,
) -> np.ndarray:
    """Exact per-mode occupations at time(s) ``t`` for a catalogued pair.

    ``initial`` is an occupation string or tuple.  Returns an array of
    shape ``(modes,)`` for scalar ``t`` and ``(modes, len(t))`` otherwise.
    """
    key = (name, _normalise_initial(initial))
    if name not in PRESET_NAMES:
        raise ValueError(f"unknown preset {name!r}; choose from {PRESET_NAMES}")
    if key not in _CLOSED_FORMS:
        raise ValueError(
            f"no closed form for preset {name!r} from state {key[1]!r}; "
            f"covered pairs: {closed_form_pairs()}"
        )
    p = _resolve_params(name, params)
    t_arr = np.asarray(t, dtype=float)
    values = _CLOSED_FORMS[key][0](p, np.atleast_1d(t_arr))
    return values[:, 0] if t_arr.ndim == 0 else values


def closed_norm_squared(
    name: str,
    initial,
    params: Mapping[str, float] | None = None,
    t=0.0,
) -> np.ndarray:
    """Exact squared evolved-state norm for a catalogued pair."""
    key = (name, _normalise_initial(initial))
    if key not in _CLOSED_FORMS:
        raise ValueError(f"no closed form for preset {name!r} from state {key[1]!r}")
    p = _resolve_params(name, params)
    t_arr = np.asarray(t, dtype=float)
    values = _CLOSED_FORMS[key][1](p, np.atleast_1d(t_arr))
    return values[0] if t_arr.ndim == 0 else values


# ---------------------------------------------------------------------------
# long-time limits
# ---------------------------------------------------------------------------

_ANALYTIC_LIMITS: dict[tuple[str, str], Callable[[Mapping[str, float]], np.ndarray]] = {
    ("model1", "10"): lambda p: np.array([0.0, 1.0]),
    ("model1", "00"): lambda p: np.array([0.0, 0.0]),
    ("model1", "01"): lambda p: np.array([0.0, 1.0]),
    ("model1", "11"): lambda p: np.array([1.0, 1.0]),
    ("model2", "11"): lambda p: np.array([0.0, 2.0]),
    ("model2", "21"): lambda p: np.array([1.0, 2.0]),
    ("model3-h1", "011"): lambda p: np.array(
        [
            1.0,
            p["mu"] ** 2 / (p["mu"] ** 2 + p["lambda"] ** 2),
            p["lambda"] ** 2 / (p["mu"] ** 2 + p["lambda"] ** 2),
        ]
    ),
    ("model3-h1", "010"): lambda p: np.array([1.0, 0.0, 0.0]),
    ("model3-h2", "010"): lambda p: np.array([1.0, 0.0, 0.0]),
    ("model3-h2", "001"): lambda p: np.array([1.0, 0.0, 0.0]),
    ("info-ha", "100"): lambda p: np.full(3, 1.0 / 3.0),
    ("info-ha", "010"): lambda p: np.full(3, 1.0 / 3.0),
    ("info-ha", "001"): lambda p: np.full(3, 1.0 / 3.0),
    ("info-ha", "000"): lambda p: np.zeros(3),
    ("info-ha", "111"): lambda p: np.ones(3),
}


@dataclass(frozen=True)
class AsymptoteResult:
    """Long-time occupation estimate with its provenance and plateau status."""

    values: np.ndarray
    method: str  # "analytic" or "plateau"
    converged: bool
    residual: float


def asymptote(
    name: str,
    initial,
    params: Mapping[str, float] | None = None,
    *,
    t_max: float = 20.0,
    plateau_tol: float = 1e-6,
    window: float = 0.9,
) -> AsymptoteResult:
    """Long-time limit of the normalized occupations.

    Uses the analytic limit when the pair has one; otherwise evaluates the
    engine at ``t_max`` and flags convergence only if no occupation moved
    by more than ``plateau_tol`` since ``window * t_max``.
    """
    key = (name, _normalise_initial(initial))
    p = _resolve_params(name, params)
    if key in _ANALYTIC_LIMITS:
        return AsymptoteResult(
            values=_ANALYTIC_LIMITS[key](p),
            method="analytic",
            converged=True,
            residual=0.0,
        )

    model = preset(name, p)
    h = compile_hamiltonian(model.hamiltonian)
    psi0 = basis_vector(model.system, _parse_initial(model.system, initial))
    observables = [
        number_operator(model.system, j) for j in range(1, model.system.size + 1)
    ]
    late = np.array(
        [mean_value(Strategy.NORMALIZED, h, psi0, x, t_max) for x in observables]
    )
    earlier = np.array(
        [
            mean_value(Strategy.NORMALIZED, h, psi0, x, window * t_max)
            for x in observables
        ]
    )
    residual = float(np.max(np.abs(late - earlier)))
    return AsymptoteResult(
        values=late,
        method="plateau",
        converged=residual < plateau_tol,
        residual=residual,
    )


def _parse_initial(system: ModeSystem, initial) -> tuple[int, ...]:
    if isinstance(initial, str):
        return system.check_occupations(tuple(int(c) for c in initial))
    return system.check_occupations(initial)


def reference_run(
    name: str,
    initial,
    params: Mapping[str, float] | None = None,
    times: np.ndarray | None = None,
):
    """Normalized-strategy engine run for a preset; convenience for checks."""
    model = preset(name, params)
    request = EvolutionRequest(
        hamiltonian=model.hamiltonian,
        initial=_parse_initial(model.system, initial),
        strategy=Strategy.NORMALIZED,
        times=times,
    )
    return run(request)
