"""Agent registers: modes, ladder operators, and occupation basis states.

A register is an ordered list of modes, each either a two-level fermionic
mode or a truncated L-level bosonic mode.  Mode 1 is the *fastest-varying*
tensor factor: the basis state with occupations ``(n1, n2, ..., nM)`` sits
at linear index ``n1 + n2*L1 + n3*L1*L2 + ...`` (0-based).

Lowering operators are built as Kronecker chains with the single-mode
lowering matrix in the target slot.  Fermionic operators additionally carry
``diag(1, -1)`` parity factors on every fermionic mode of lower index, which
is what makes distinct-mode operators anticommute instead of commute.  With
this convention the two-fermion lowering operators are, explicitly (1-based
positions),

    mode 1: ones at (1,2) and (3,4)
    mode 2: +1 at (1,3) and -1 at (2,4)

and creation products applied to the vacuum in increasing mode order carry
coefficient +1.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from math import sqrt
from typing import Iterable, Sequence

import numpy as np

from .linalg import MAX_DIMENSION, ShapeError, adjoint, kron


@dataclass(frozen=True)
class ModeKind:
    """A single agent's level structure.

    ``levels`` is the local dimension; ``fermionic`` modes are always
    two-level and acquire parity strings in multi-mode operators.
    """

    levels: int
    fermionic: bool = False

    def __post_init__(self):
        if self.levels < 2:
            raise ValueError(f"a mode needs at least 2 levels, got {self.levels}")
        if self.fermionic and self.levels != 2:
            raise ValueError("fermionic modes have exactly 2 levels")


def fermion() -> ModeKind:
    """Two-level mode obeying canonical anti-commutation relations."""
    return ModeKind(levels=2, fermionic=True)


def truncated_boson(levels: int) -> ModeKind:
    """L-level mode whose lowering matrix has entries sqrt(n); L-th power vanishes."""
    return ModeKind(levels=levels, fermionic=False)


@dataclass(frozen=True)
class ModeSystem:
    """An ordered register of modes defining the tensor-product space."""

    modes: tuple[ModeKind, ...]

    def __init__(self, modes: Iterable[ModeKind]):
        object.__setattr__(self, "modes", tuple(modes))
        if not self.modes:
            raise ValueError("a mode system needs at least one mode")
        if self.dim > MAX_DIMENSION:
            raise ShapeError(
                f"total dimension {self.dim} exceeds the maximum {MAX_DIMENSION}"
            )

    @property
    def size(self) -> int:
        """Number of modes."""
        return len(self.modes)

    @property
    def dim(self) -> int:
        """Total Hilbert-space dimension (product of level counts)."""
        d = 1
        for mode in self.modes:
            d *= mode.levels
        return d

    def check_mode_index(self, j: int) -> None:
        """Validate a 1-based mode index."""
        if not 1 <= j <= self.size:
            raise ValueError(f"mode index {j} out of range 1..{self.size}")

    def check_occupations(self, occupations: Sequence[int]) -> tuple[int, ...]:
        """Validate per-mode occupation numbers; returns them as a tuple."""
        occ = tuple(int(n) for n in occupations)
        if len(occ) != self.size:
            raise ValueError(
                f"expected {self.size} occupation numbers, got {len(occ)}"
            )
        for j, (n, mode) in enumerate(zip(occ, self.modes), start=1):
            if not 0 <= n < mode.levels:
                raise ValueError(
                    f"occupation {n} of mode {j} outside 0..{mode.levels - 1}"
                )
        return occ

    def index_of(self, occupations: Sequence[int]) -> int:
        """0-based linear index of a basis state; mode 1 varies fastest."""
        occ = self.check_occupations(occupations)
        index = 0
        stride = 1
        for n, mode in zip(occ, self.modes):
            index += n * stride
            stride *= mode.levels
        return index

    def occupations_of(self, index: int) -> tuple[int, ...]:
        """Inverse of :meth:`index_of`."""
        if not 0 <= index < self.dim:
            raise ValueError(f"basis index {index} out of range 0..{self.dim - 1}")
        occ = []
        for mode in self.modes:
            occ.append(index % mode.levels)
            index //= mode.levels
        return tuple(occ)


def parse_occupations(text: str, system: ModeSystem) -> tuple[int, ...]:
    """Parse an occupation string such as ``"101"`` (one digit per mode)."""
    if len(text) != system.size or not text.isdigit():
        raise ValueError(
            f"occupation string {text!r} must be {system.size} digits, one per mode"
        )
    return system.check_occupations(tuple(int(c) for c in text))


def _single_mode_lowering(levels: int) -> np.ndarray:
    m = np.zeros((levels, levels), dtype=np.complex128)
    for n in range(1, levels):
        m[n - 1, n] = sqrt(n)
    return m


def annihilator(system: ModeSystem, j: int) -> np.ndarray:
    """Lowering operator of mode ``j`` on the full register.

    The Kronecker chain is assembled slowest-to-fastest (mode ``M`` is the
    leftmost factor), so mode 1 ends up as the fastest-varying index.
    Fermionic target modes put ``diag(1, -1)`` on fermionic modes of index
    below ``j``; bosonic factors never carry parity.
    """
    system.check_mode_index(j)
    target = system.modes[j - 1]
    factors = []
    for k in range(system.size, 0, -1):
        mode = system.modes[k - 1]
        if k > j:
            factors.append(np.eye(mode.levels, dtype=np.complex128))
        elif k == j:
            factors.append(_single_mode_lowering(mode.levels))
        elif target.fermionic and mode.fermionic:
            factors.append(np.diag([1.0, -1.0]).astype(np.complex128))
        else:
            factors.append(np.eye(mode.levels, dtype=np.complex128))
    return reduce(kron, factors)


def creator(system: ModeSystem, j: int) -> np.ndarray:
    """Raising operator of mode ``j`` (adjoint of :func:`annihilator`)."""
    return adjoint(annihilator(system, j))


def number_operator(system: ModeSystem, j: int) -> np.ndarray:
    """Occupation-number operator of mode ``j``: diagonal, eigenvalue = occupation.

    Equals ``adjoint(annihilator) @ annihilator``; the parity factors square
    to the identity, so the operator is assembled directly as the Kronecker
    chain with ``diag(0..L-1)`` in slot ``j``, which keeps the integer
    eigenvalues exact even when the lowering matrix carries square roots.
    """
    system.check_mode_index(j)
    factors = []
    for k in range(system.size, 0, -1):
        mode = system.modes[k - 1]
        if k == j:
            factors.append(np.diag(np.arange(mode.levels)).astype(np.complex128))
        else:
            factors.append(np.eye(mode.levels, dtype=np.complex128))
    return reduce(kron, factors)


def total_number_operator(system: ModeSystem) -> np.ndarray:
    """Sum of all per-mode number operators."""
    total = np.zeros((system.dim, system.dim), dtype=np.complex128)
    for j in range(1, system.size + 1):
        total += number_operator(system, j)
    return total


def basis_vector(system: ModeSystem, occupations: Sequence[int]) -> np.ndarray:
    """Unit coordinate vector of the basis state with the given occupations.

    Equals the normalised creation-operator product on the vacuum, the
    creators written in increasing mode order (coefficient +1; bosonic
    repetitions are divided by sqrt(n!)).
    """
    index = system.index_of(occupations)
    v = np.zeros(system.dim, dtype=np.complex128)
    v[index] = 1.0
    return v


def vacuum(system: ModeSystem) -> np.ndarray:
    """The all-modes-empty basis state."""
    return basis_vector(system, (0,) * system.size)
