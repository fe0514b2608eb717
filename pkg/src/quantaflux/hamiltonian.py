"""Declarative Hamiltonian assembly from scaled ladder monomials.

A Hamiltonian is a sum of terms, each a complex coefficient times an
ordered product of ladder factors.  Factors are listed in operator order:
the leftmost factor is the leftmost matrix in the product.  Coefficients
are complex in the data model; a warning is emitted for non-real ones since
every built-in model uses positive real couplings.

Besides compilation to a dense matrix, this module answers the structural
questions the dynamics cares about: is the operator self-adjoint, is it
nilpotent (and of what index), and does it commute with the total number
operator.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .linalg import adjoint, frobenius, nilpotency_index
from .modes import ModeSystem, annihilator, creator, total_number_operator

__all__ = [
    "LadderFactor",
    "HamiltonianTerm",
    "HamiltonianSpec",
    "create",
    "annihilate",
    "compile_hamiltonian",
    "adjoint_spec",
    "is_self_adjoint",
    "nilpotency_index",
    "conserves_total_number",
]

SELF_ADJOINT_TOL = 1e-10

#: Commutator residue allowed when cross-checking dagger balance numerically.
_CONSERVATION_RESIDUE = 1e-10


@dataclass(frozen=True)
class LadderFactor:
    """One ladder operator in a product: mode index (1-based) and daggered flag."""

    mode: int
    dagger: bool


def create(mode: int) -> LadderFactor:
    """Raising factor on ``mode``."""
    return LadderFactor(mode=mode, dagger=True)


def annihilate(mode: int) -> LadderFactor:
    """Lowering factor on ``mode``."""
    return LadderFactor(mode=mode, dagger=False)


@dataclass(frozen=True)
class HamiltonianTerm:
    """A scaled ladder monomial; ``factors`` are in matrix-product order."""

    coefficient: complex
    factors: tuple[LadderFactor, ...]

    def __init__(self, coefficient: complex, factors: Sequence[LadderFactor]):
        object.__setattr__(self, "coefficient", complex(coefficient))
        object.__setattr__(self, "factors", tuple(factors))
        if not self.factors:
            raise ValueError("a Hamiltonian term needs at least one factor")


@dataclass(frozen=True)
class HamiltonianSpec:
    """A mode system together with the terms acting on it."""

    system: ModeSystem
    terms: tuple[HamiltonianTerm, ...]

    def __init__(self, system: ModeSystem, terms: Sequence[HamiltonianTerm]):
        object.__setattr__(self, "system", system)
        object.__setattr__(self, "terms", tuple(terms))


def compile_hamiltonian(spec: HamiltonianSpec) -> np.ndarray:
    """Sum of ``coefficient * product(factors)`` as a dense matrix.

    Factor mode indices are validated against the spec's system; unknown
    modes raise ``ValueError``.
    """
    dim = spec.system.dim
    result = np.zeros((dim, dim), dtype=np.complex128)
    for term in spec.terms:
        if term.coefficient.imag != 0.0:
            warnings.warn(
                f"non-real coefficient {term.coefficient} in Hamiltonian term",
                stacklevel=2,
            )
        product = np.eye(dim, dtype=np.complex128)
        for factor in term.factors:
            spec.system.check_mode_index(factor.mode)
            op = (
                creator(spec.system, factor.mode)
                if factor.dagger
                else annihilator(spec.system, factor.mode)
            )
            product = product @ op
        result += term.coefficient * product
    return result


def adjoint_spec(spec: HamiltonianSpec) -> HamiltonianSpec:
    """Term-wise adjoint: reversed factors, flipped daggers, conjugated coefficients."""
    terms = [
        HamiltonianTerm(
            complex(term.coefficient).conjugate(),
            tuple(
                LadderFactor(mode=f.mode, dagger=not f.dagger)
                for f in reversed(term.factors)
            ),
        )
        for term in spec.terms
    ]
    return HamiltonianSpec(spec.system, terms)


def is_self_adjoint(m: np.ndarray, tol: float = SELF_ADJOINT_TOL) -> bool:
    """Whether ``m`` equals its adjoint within Frobenius-norm tolerance ``tol``."""
    m = np.asarray(m, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"self-adjointness needs a square matrix, got {m.shape}")
    return frobenius(m - adjoint(m)) <= tol


def conserves_total_number(spec: HamiltonianSpec) -> bool:
    """Whether every term raises exactly as often as it lowers.

    Balanced terms commute with the total number operator, so the summed
    occupation is a constant of motion on its eigenspaces.  When the
    structural answer is positive the commutator is also checked
    numerically; a disagreement would mean a compilation bug and raises.
    """
    balanced = all(
        sum(1 for f in term.factors if f.dagger) * 2 == len(term.factors)
        for term in spec.terms
    )
    if balanced:
        h = compile_hamiltonian(spec)
        n_total = total_number_operator(spec.system)
        residue = frobenius(h @ n_total - n_total @ h)
        scale = max(1.0, frobenius(h))
        if residue > _CONSERVATION_RESIDUE * scale:
            raise RuntimeError(
                f"dagger-balanced Hamiltonian fails to commute with the total "
                f"number operator (residue {residue:.3e}); compilation bug"
            )
    return balanced
