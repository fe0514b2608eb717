"""Dense complex linear algebra kernels.

All operators and states in this package are plain ``numpy`` arrays of
``complex128``: matrices are 2-d row-major arrays, state vectors are 1-d
arrays.  The functions here add the validation and the exponential fast
path the rest of the package relies on:

- ``kron`` guards against blowing past the configured dense-size budget,
- ``expm`` detects nilpotent inputs and returns the exact finite Taylor
  polynomial for them (all the built-in interaction operators are
  nilpotent, so propagators come out exact up to rounding),
- ``inner`` is conjugate-linear in its *first* argument.

Matrix indices are 0-based internally.  Documentation and error messages
that quote operator entries use 1-based (row, column) positions, matching
the convention used for the built-in models; subtract one from each to
index the arrays.
"""

from __future__ import annotations

import math

import numpy as np

#: Hard cap on the linear dimension of any dense operator built here.
#: 4096 = twelve two-level modes; keeps O(n^3) kernels tractable.
MAX_DIMENSION = 4096

#: An entry counts as zero if its magnitude is below this factor times the
#: largest magnitude of the *original* matrix.  Guards nilpotency checks on
#: matrices assembled from inexact inputs such as sqrt(2).
ZERO_THRESHOLD_FACTOR = 1e-14

_EXPM_THETA = 0.5  # scaled norm target for the Taylor core
_EXPM_MAX_ORDER = 40  # Taylor order cap before declaring non-convergence
_EXPM_MAX_SQUARINGS = 64


class ShapeError(ValueError):
    """Operands have incompatible or invalid dimensions."""


class ConvergenceError(RuntimeError):
    """An iterative kernel failed to reach its tolerance within its cap."""


def as_matrix(a) -> np.ndarray:
    """Coerce ``a`` to a 2-d complex128 array (no copy when possible)."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2:
        raise ShapeError(f"expected a matrix, got array of ndim {m.ndim}")
    return m


def as_vector(v) -> np.ndarray:
    """Coerce ``v`` to a 1-d complex128 array (no copy when possible)."""
    w = np.asarray(v, dtype=np.complex128)
    if w.ndim != 1:
        raise ShapeError(f"expected a vector, got array of ndim {w.ndim}")
    return w


def _require_square(m: np.ndarray, what: str = "matrix") -> None:
    if m.shape[0] != m.shape[1]:
        raise ShapeError(f"{what} must be square, got shape {m.shape}")


def _require_finite(m: np.ndarray, what: str) -> None:
    if not np.isfinite(m).all():
        raise ArithmeticError(f"{what} contains non-finite entries")


def kron(a, b, *, max_dim: int = MAX_DIMENSION) -> np.ndarray:
    """Kronecker product ``a (x) b``.

    Entry ``((i*br + k), (j*bc + l))`` of the result is ``a[i, j] * b[k, l]``.
    Raises :class:`ShapeError` if the result would exceed ``max_dim`` rows
    or columns.
    """
    a = as_matrix(a)
    b = as_matrix(b)
    rows = a.shape[0] * b.shape[0]
    cols = a.shape[1] * b.shape[1]
    if rows > max_dim or cols > max_dim:
        raise ShapeError(
            f"kron result {rows}x{cols} exceeds the maximum dimension {max_dim}"
        )
    return np.kron(a, b)


def adjoint(a) -> np.ndarray:
    """Conjugate transpose."""
    return as_matrix(a).conj().T.copy()


def matmul(a, b) -> np.ndarray:
    """Matrix product with shape validation."""
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape[1] != b.shape[0]:
        raise ShapeError(f"cannot multiply {a.shape} by {b.shape}")
    return a @ b


def matvec(a, v) -> np.ndarray:
    """Matrix-vector product with shape validation."""
    a = as_matrix(a)
    v = as_vector(v)
    if a.shape[1] != v.shape[0]:
        raise ShapeError(f"cannot apply {a.shape} to vector of dim {v.shape[0]}")
    return a @ v


def inner(u, v) -> complex:
    """Inner product, conjugate-linear in the first argument."""
    u = as_vector(u)
    v = as_vector(v)
    if u.shape != v.shape:
        raise ShapeError(f"inner product of dims {u.shape[0]} and {v.shape[0]}")
    return complex(np.vdot(u, v))


def norm(v) -> float:
    """Euclidean norm of a vector."""
    return float(np.linalg.norm(as_vector(v)))


def frobenius(m) -> float:
    """Frobenius norm of a matrix."""
    return float(np.linalg.norm(as_matrix(m)))


def _zero_threshold(m: np.ndarray) -> float:
    peak = float(np.max(np.abs(m))) if m.size else 0.0
    return ZERO_THRESHOLD_FACTOR * peak


def _is_zero(m: np.ndarray, threshold: float) -> bool:
    if m.size == 0:
        return True
    return bool(np.max(np.abs(m)) <= threshold)


def _nilpotent_bound(m: np.ndarray, threshold: float) -> int | None:
    """Smallest power of two ``2**j <= 2*dim`` with ``m**(2**j) == 0``.

    Returns ``None`` when no such power exists, i.e. ``m`` is not nilpotent
    (a nilpotent n x n matrix satisfies ``m**n == 0``).
    """
    dim = m.shape[0]
    if _is_zero(m, threshold):
        return 1
    power = m
    exponent = 1
    while exponent < dim:
        power = power @ power
        exponent *= 2
        if _is_zero(power, threshold):
            return exponent
    return None


def _matrix_power(m: np.ndarray, k: int) -> np.ndarray:
    """``m**k`` by binary powering, k >= 1."""
    result = None
    base = m
    while k:
        if k & 1:
            result = base if result is None else result @ base
        k >>= 1
        if k:
            base = base @ base
    return result


def nilpotency_index(m) -> int | None:
    """Smallest ``k`` with ``m**k == 0``, or ``None`` if ``m`` is not nilpotent.

    Zero detection is relative to the largest entry of ``m`` itself (see
    :data:`ZERO_THRESHOLD_FACTOR`), so operators assembled from irrational
    couplings are classified correctly.
    """
    m = as_matrix(m)
    _require_square(m)
    threshold = _zero_threshold(m)
    bound = _nilpotent_bound(m, threshold)
    if bound is None:
        return None
    if bound == 1:
        return 1
    # smallest k lies in (bound/2, bound]; bisect with direct power probes
    lo, hi = bound // 2, bound  # m**lo != 0, m**hi == 0
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if _is_zero(_matrix_power(m, mid), threshold):
            hi = mid
        else:
            lo = mid
    return hi


def _expm_nilpotent(m: np.ndarray, threshold: float) -> np.ndarray:
    """Exact exponential of a nilpotent matrix: the finite Taylor sum."""
    dim = m.shape[0]
    result = np.eye(dim, dtype=np.complex128)
    power = np.eye(dim, dtype=np.complex128)
    for p in range(1, dim + 1):
        power = power @ m
        if _is_zero(power, threshold):
            break
        result = result + power / math.factorial(p)
    return result


def _taylor_order(scaled_norm: float, tol: float) -> int:
    """Smallest Taylor order whose a priori remainder bound is below ``tol``.

    For ``||A|| <= theta < 1`` the order-q truncation error is at most
    ``theta**(q+1) / ((q+1)! (1-theta))``.
    """
    bound = scaled_norm
    for q in range(1, _EXPM_MAX_ORDER + 1):
        bound = bound * scaled_norm / (q + 1)
        if bound / (1.0 - scaled_norm) <= tol:
            return q
    raise ConvergenceError(
        f"matrix exponential did not converge within order {_EXPM_MAX_ORDER} "
        f"(residual bound {bound:.3e}, tol {tol:.3e})"
    )


def expm(m, tol: float = 1e-12) -> np.ndarray:
    """Matrix exponential ``e**m``.

    Nilpotent inputs (detected by repeated squaring against the relative
    zero threshold) take an exact path: the finite Taylor polynomial, with
    no scaling error at all.  Everything else goes through scaling and
    squaring with a Taylor core whose order is chosen from an a priori
    remainder bound, targeting relative accuracy ``tol``.
    """
    m = as_matrix(m)
    _require_square(m)
    if tol <= 0:
        raise ValueError(f"tol must be positive, got {tol}")
    _require_finite(m, "expm input")

    threshold = _zero_threshold(m)
    if _nilpotent_bound(m, threshold) is not None:
        return _expm_nilpotent(m, threshold)

    dim = m.shape[0]
    norm1 = float(np.linalg.norm(m, 1))
    squarings = 0
    if norm1 > _EXPM_THETA:
        squarings = int(math.ceil(math.log2(norm1 / _EXPM_THETA)))
        if squarings > _EXPM_MAX_SQUARINGS:
            raise ConvergenceError(
                f"matrix norm {norm1:.3e} needs {squarings} squarings, "
                f"cap is {_EXPM_MAX_SQUARINGS}"
            )
    scaled = m / (2.0**squarings)
    scaled_norm = min(float(np.linalg.norm(scaled, 1)), _EXPM_THETA)
    order = _taylor_order(scaled_norm, tol / 2.0**squarings)

    result = np.eye(dim, dtype=np.complex128)
    term = np.eye(dim, dtype=np.complex128)
    for p in range(1, order + 1):
        term = term @ scaled / p
        result = result + term
    for _ in range(squarings):
        result = result @ result
    _require_finite(result, "expm result")
    return result
