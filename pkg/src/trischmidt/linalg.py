"""Dense complex linear-algebra kernels with deterministic output conventions.

Matrices are plain numpy arrays with ``complex128`` entries.  The kernels
wrap LAPACK (via ``numpy.linalg``) and then impose the package-wide
conventions on the result:

* eigenvalues and singular values sorted descending;
* every returned vector rotated so its largest-magnitude entry is real
  and positive (magnitude ties broken by lowest index);
* exactly tied eigenvalues / singular values ordered by descending
  lexicographic key of the phase-fixed vectors, so identical inputs can
  never produce permuted outputs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import NoConvergence, NotHermitian


@dataclass(frozen=True)
class Tolerances:
    """Numerical thresholds shared across the package.

    rank_rel
        Relative cutoff: a singular value or eigenvalue counts as zero
        when it is <= ``rank_rel`` times the largest one.
    degen_rel
        Relative gap below which two eigenvalues count as equal.
    recon_abs
        Absolute bound for symmetry, orthonormality, normalization and
        reconstruction checks.
    """

    rank_rel: float = 1e-10
    degen_rel: float = 1e-8
    recon_abs: float = 1e-10

    def __post_init__(self):
        for name in ("rank_rel", "degen_rel", "recon_abs"):
            value = getattr(self, name)
            if not 0.0 < value < 1.0:
                raise ValueError(f"{name} must lie strictly in (0, 1), got {value!r}")


DEFAULT_TOL = Tolerances()


@dataclass(frozen=True, eq=False)
class HermitianEigenResult:
    """Eigenpairs of a Hermitian matrix, eigenvalues descending.

    ``eigenvectors[:, k]`` belongs to ``eigenvalues[k]``; the column set
    is unitary.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


@dataclass(frozen=True, eq=False)
class SvdResult:
    """Full singular value decomposition ``A = U diag(s) V^H``.

    ``left_vectors`` (m x m) and ``right_vectors`` (n x n) are unitary;
    ``singular_values`` has length min(m, n), sorted descending.
    """

    singular_values: np.ndarray
    left_vectors: np.ndarray
    right_vectors: np.ndarray


def as_complex_matrix(a) -> np.ndarray:
    """Coerce ``a`` to a nonempty 2-D complex128 array with finite entries."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2 or m.size == 0:
        raise ValueError(f"expected a nonempty 2-D matrix, got shape {m.shape}")
    if not np.isfinite(m).all():
        raise ValueError("matrix entries must be finite")
    return m


def _phase_fix(v: np.ndarray) -> complex:
    """Phase factor that makes v's largest-magnitude entry real positive."""
    k = int(np.argmax(np.abs(v)))
    a = complex(v[k])
    r = abs(a)
    if r == 0.0:
        return 1.0 + 0.0j
    return r / a


def _lex_key(v: np.ndarray) -> tuple:
    return tuple(np.stack([v.real, v.imag], axis=1).ravel().tolist())


def _order_ties(values: np.ndarray, column_blocks: list[np.ndarray]) -> None:
    """Reorder columns inside runs of exactly equal values, in place.

    The primary block (first entry) supplies the lexicographic key;
    every block is permuted identically so pairings survive.
    """
    n = len(values)
    primary = column_blocks[0]
    start = 0
    while start < n:
        stop = start + 1
        while stop < n and values[stop] == values[start]:
            stop += 1
        if stop - start > 1:
            order = sorted(range(start, stop), key=lambda k: _lex_key(primary[:, k]), reverse=True)
            for block in column_blocks:
                block[:, start:stop] = block[:, order]
        start = stop


def hermitian_eigendecompose(a, tol: Tolerances = DEFAULT_TOL) -> HermitianEigenResult:
    """Eigendecompose a (numerically) Hermitian matrix.

    Raises NotHermitian when ``a`` is not square or ``max|A - A^H|``
    exceeds ``tol.recon_abs``; NoConvergence when LAPACK gives up.
    """
    m = as_complex_matrix(a)
    rows, cols = m.shape
    if rows != cols:
        raise NotHermitian(f"matrix is {rows}x{cols}, not square")
    deviation = float(np.max(np.abs(m - m.conj().T)))
    if deviation > tol.recon_abs:
        raise NotHermitian(
            f"max |A - A^H| = {deviation:.3e} exceeds recon_abs = {tol.recon_abs:.3e}"
        )
    try:
        w, v = np.linalg.eigh((m + m.conj().T) / 2.0)
    except np.linalg.LinAlgError as exc:
        raise NoConvergence(str(exc)) from exc
    w = np.ascontiguousarray(w[::-1])
    v = np.ascontiguousarray(v[:, ::-1])
    for k in range(cols):
        v[:, k] *= _phase_fix(v[:, k])
    _order_ties(w, [v])
    return HermitianEigenResult(eigenvalues=w, eigenvectors=v)


def svd(a, tol: Tolerances = DEFAULT_TOL) -> SvdResult:
    """Full SVD with canonical phases and deterministic tie order.

    Paired left/right columns are rotated by a common phase so each left
    vector has its largest-magnitude entry real positive; the unpaired
    padding columns are phase-fixed on their own.
    """
    m = as_complex_matrix(a)
    try:
        u, s, vh = np.linalg.svd(m, full_matrices=True)
    except np.linalg.LinAlgError as exc:
        raise NoConvergence(str(exc)) from exc
    u = np.ascontiguousarray(u)
    v = np.ascontiguousarray(vh.conj().T)
    k = s.shape[0]
    for i in range(k):
        ph = _phase_fix(u[:, i])
        u[:, i] *= ph
        v[:, i] *= ph
    for i in range(k, u.shape[1]):
        u[:, i] *= _phase_fix(u[:, i])
    for i in range(k, v.shape[1]):
        v[:, i] *= _phase_fix(v[:, i])
    _order_ties(s, [u, v])
    return SvdResult(singular_values=s, left_vectors=u, right_vectors=v)


def numerical_rank(values, tol: Tolerances = DEFAULT_TOL) -> int:
    """Count entries strictly above ``rank_rel`` times the largest value.

    ``values`` must be nonnegative and sorted descending.  Returns 0 for
    an empty or all-zero list.
    """
    vals = np.asarray(values, dtype=float)
    if vals.size == 0:
        return 0
    top = float(vals[0])
    if top <= 0.0:
        return 0
    return int(np.count_nonzero(vals > tol.rank_rel * top))


def is_unitary(u, tol: Tolerances = DEFAULT_TOL) -> bool:
    """True iff ``u`` is square and ``max|U^H U - I| <= recon_abs``."""
    m = np.asarray(u, dtype=np.complex128)
    if m.ndim != 2 or m.size == 0 or m.shape[0] != m.shape[1]:
        return False
    gram = m.conj().T @ m
    return float(np.max(np.abs(gram - np.eye(m.shape[0])))) <= tol.recon_abs
