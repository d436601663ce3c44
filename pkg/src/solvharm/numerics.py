"""Dense linear-algebra kernels used by every other module.

Thin, contract-enforcing wrappers around LAPACK via numpy/scipy: we need
eigenvalues, matrix exponentials, guarded linear solves and an ordered
real Schur form.  All functions are pure and accept/return plain
``numpy`` arrays.
"""

import warnings

import numpy as np
import scipy.linalg
import scipy.optimize

from .config import DEFAULT_TOLS, Tolerances
from .errors import DimensionError, NumericalError, SingularMatrixError

__all__ = [
    "as_square",
    "eigenvalues",
    "matrix_exponential",
    "solve_linear",
    "ordered_real_schur",
    "sorted_spectrum",
    "spectra_match",
]


def as_square(m, name: str = "matrix") -> np.ndarray:
    """Validate and return ``m`` as a finite square 2-d float array."""
    a = np.asarray(m, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError(f"{name} must be square, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise NumericalError(f"{name} contains non-finite entries")
    return a


def sorted_spectrum(values) -> np.ndarray:
    """Canonical ordering of a spectrum: by real part, then imaginary."""
    v = np.asarray(values, dtype=complex)
    return v[np.lexsort((v.imag, v.real))]


def eigenvalues(m, tols: Tolerances = DEFAULT_TOLS) -> np.ndarray:
    """All eigenvalues of a square matrix, with multiplicity.

    Returns a complex array in canonical order; complex eigenvalues of a
    real matrix come in conjugate pairs.
    """
    a = as_square(m)
    try:
        vals = np.linalg.eigvals(a)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise NumericalError(f"eigenvalue iteration failed: {exc}") from exc
    return sorted_spectrum(vals)


def spectra_match(a, b, tol: float = 1e-9) -> bool:
    """Multiset comparison of two spectra, via optimal pairing."""
    sa, sb = sorted_spectrum(a), sorted_spectrum(b)
    if sa.shape != sb.shape:
        return False
    cost = np.abs(sa[:, None] - sb[None, :])
    rows, cols = scipy.optimize.linear_sum_assignment(cost)
    return bool(cost[rows, cols].max() <= tol * max(1.0, np.abs(sa).max()))


def matrix_exponential(m) -> np.ndarray:
    """exp(m) by scaling-and-squaring (scipy's Pade implementation)."""
    a = as_square(m)
    with warnings.catch_warnings():
        # overflow is turned into an explicit error below
        warnings.simplefilter("ignore", RuntimeWarning)
        e = scipy.linalg.expm(a)
    if not np.all(np.isfinite(e)):
        raise NumericalError("matrix exponential overflowed")
    return e


def solve_linear(a, b, tols: Tolerances = DEFAULT_TOLS) -> np.ndarray:
    """Solve a x = b with an explicit pivot guard.

    Raises :class:`SingularMatrixError` when any LU pivot falls below
    ``tols.pivot_rel * ||a||``.
    """
    a = as_square(a, "coefficient matrix")
    b_arr = np.asarray(b, dtype=float)
    if b_arr.shape[0] != a.shape[0]:
        raise DimensionError(
            f"right-hand side has {b_arr.shape[0]} rows, expected {a.shape[0]}"
        )
    norm_a = np.linalg.norm(a)
    with warnings.catch_warnings():
        # singularity is handled by the pivot check below
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(a, check_finite=False)
    pivots = np.abs(np.diag(lu))
    if norm_a == 0.0 or pivots.min() <= tols.pivot_rel * norm_a:
        raise SingularMatrixError(
            f"pivot {pivots.min():.3e} below {tols.pivot_rel:.0e} * ||a|| = "
            f"{tols.pivot_rel * norm_a:.3e}"
        )
    return scipy.linalg.lu_solve((lu, piv), b_arr, check_finite=False)


def ordered_real_schur(m, select):
    """Real Schur form with the eigenvalues chosen by ``select`` leading.

    ``select(re, im)`` is applied to each eigenvalue; the corresponding
    invariant subspace is moved to the front.  Returns ``(T, Z, sdim)``
    with ``m = Z T Z^T`` and ``sdim`` the dimension of the selected
    subspace (the span of the first ``sdim`` columns of ``Z``).
    """
    a = as_square(m)
    try:
        t, z, sdim = scipy.linalg.schur(a, output="real", sort=select)
    except scipy.linalg.LinAlgError as exc:  # pragma: no cover
        raise NumericalError(f"Schur decomposition failed: {exc}") from exc
    return t, z, int(sdim)
