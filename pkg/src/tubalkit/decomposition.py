"""t-SVD factorization, singular values, tubal/average rank, best rank-k.

The factorization decomposes Fourier slices 0..floor(n3/2) only and fills the
remaining slices by conjugate mirroring. Decomposing every slice independently
would break realness of the inverse transform, because the matrix SVD is not
unique: the mirrored construction is what guarantees real factors.

The module keeps a running count of per-slice matrix SVDs in
``slice_svd_count`` as a workload diagnostic for tests; it is not part of the
numerical contract.
"""

from dataclasses import dataclass

import numpy as np

from .core import IMAG_TOL, as_tensor3, imag_ratio, mirror_spectrum
from .errors import NumericalFailure, RankOutOfRange, SymmetryViolation

DEFAULT_RANK_TOL = 1e-10

_svd_calls = 0


def slice_svd_count():
    """Total per-slice matrix SVDs executed so far in this process."""
    return _svd_calls


def _count(n):
    global _svd_calls
    _svd_calls += n


def _half_weights(n3):
    """Multiplicity of each retained Fourier slice in the full spectrum."""
    h = n3 // 2 + 1
    w = np.full(h, 2.0)
    w[0] = 1.0
    if n3 % 2 == 0:
        w[-1] = 1.0
    return w


def _half_spectrum(a):
    """Fourier slices 0..floor(n3/2) as an (h, n1, n2) complex stack.

    Slice 0, and the Nyquist slice when n3 is even, are forced real; they are
    self-paired under conjugation so any imaginary mass there is an error.
    """
    a = as_tensor3(a)
    n3 = a.shape[2]
    h = n3 // 2 + 1
    half = np.ascontiguousarray(np.moveaxis(np.fft.fft(a, axis=2)[:, :, :h], 2, 0))
    for idx in _real_slice_indices(n3):
        ratio = imag_ratio(half[idx])
        if ratio > IMAG_TOL:
            raise SymmetryViolation(
                f"self-conjugate Fourier slice {idx} has imaginary residual {ratio:.3e}"
            )
        half[idx] = half[idx].real
    return half


def _real_slice_indices(n3):
    if n3 % 2 == 0 and n3 > 1:
        return (0, n3 // 2)
    return (0,)


def _svd_half(half, n3, full_matrices):
    """SVD each retained slice; real slices use the real path so their factors
    stay exactly real."""
    h, n1, n2 = half.shape
    k = min(n1, n2)
    ku = n1 if full_matrices else k
    kv = n2 if full_matrices else k
    u = np.empty((h, n1, ku), dtype=np.complex128)
    s = np.empty((h, k))
    vh = np.empty((h, kv, n2), dtype=np.complex128)

    real_idx = list(_real_slice_indices(n3))
    complex_idx = [i for i in range(h) if i not in real_idx]
    try:
        for i in real_idx:
            u[i], s[i], vh[i] = np.linalg.svd(half[i].real, full_matrices=full_matrices)
        if complex_idx:
            u[complex_idx], s[complex_idx], vh[complex_idx] = np.linalg.svd(
                half[complex_idx], full_matrices=full_matrices
            )
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(f"per-slice SVD did not converge: {exc}") from exc
    _count(h)
    return u, s, vh


def _half_singvals(a):
    """Per-slice singular values of the retained Fourier slices.

    Returns (s, weights) where s has shape (h, min(n1, n2)) with rows sorted
    descending, and weights are the slice multiplicities summing to n3.
    """
    a = as_tensor3(a)
    n3 = a.shape[2]
    half = _half_spectrum(a)
    try:
        s = np.linalg.svd(half, compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(f"per-slice SVD did not converge: {exc}") from exc
    _count(half.shape[0])
    return s, _half_weights(n3)


@dataclass(frozen=True)
class TSvdFactors:
    """Orthogonal u, f-diagonal s, orthogonal v with source = u * s * v^T.

    ``imag_residual`` records the largest relative imaginary mass seen across
    the three factors before the real parts were taken; for a valid mirrored
    construction it sits at rounding level.
    """

    u: np.ndarray
    s: np.ndarray
    v: np.ndarray
    kind: str  # "full" or "skinny"
    imag_residual: float = 0.0


def _ifft_factor(half_stack, n3):
    """Mirror an (h, n, k) Fourier stack to n3 slices and invert to a real
    tensor, returning (tensor, relative imaginary residual)."""
    full = mirror_spectrum(np.moveaxis(half_stack, 0, 2), n3)
    z = np.fft.ifft(full, axis=2)
    return np.ascontiguousarray(z.real), imag_ratio(z)


def _embed_fdiag(s, n1, n2):
    """(h, k) singular values -> (h, n1, n2) f-diagonal complex slices."""
    h, k = s.shape
    out = np.zeros((h, n1, n2), dtype=np.complex128)
    out[:, np.arange(k), np.arange(k)] = s
    return out


def tsvd(a):
    """Full t-SVD: a = u * s * v^T with real orthogonal u, v and f-diagonal s."""
    a = as_tensor3(a)
    n1, n2, n3 = a.shape
    half = _half_spectrum(a)
    ubar, sbar, vhbar = _svd_half(half, n3, full_matrices=True)
    u, ru = _ifft_factor(ubar, n3)
    s, rs = _ifft_factor(_embed_fdiag(sbar, n1, n2), n3)
    v, rv = _ifft_factor(np.conj(np.swapaxes(vhbar, 1, 2)), n3)
    return TSvdFactors(u=u, s=s, v=v, kind="full", imag_residual=max(ru, rs, rv))


def _avg_singvals(sbar, weights, n3):
    return (weights @ sbar) / n3


def _rank_from_avg(avg, rank_tol):
    if avg.size == 0 or avg[0] <= 0.0:
        return 0
    return int(np.count_nonzero(avg > rank_tol * avg[0]))


def skinny_tsvd(a, rank_tol=DEFAULT_RANK_TOL):
    """Rank-truncated t-SVD with u: (n1, r, n3), s: (r, r, n3), v: (n2, r, n3)."""
    if rank_tol <= 0:
        raise ValueError(f"rank_tol must be positive, got {rank_tol}")
    a = as_tensor3(a)
    n3 = a.shape[2]
    half = _half_spectrum(a)
    ubar, sbar, vhbar = _svd_half(half, n3, full_matrices=False)
    r = _rank_from_avg(_avg_singvals(sbar, _half_weights(n3), n3), rank_tol)
    u, ru = _ifft_factor(ubar[:, :, :r], n3)
    s, rs = _ifft_factor(_embed_fdiag(sbar[:, :r], r, r), n3)
    v, rv = _ifft_factor(np.conj(np.swapaxes(vhbar[:, :r, :], 1, 2)), n3)
    return TSvdFactors(u=u, s=s, v=v, kind="skinny", imag_residual=max(ru, rs, rv))


def singular_values(a):
    """Nonincreasing singular values: the diagonal of s slice 0, equal to the
    average of the per-slice Fourier singular values."""
    sbar, weights = _half_singvals(a)
    return _avg_singvals(sbar, weights, as_tensor3(a).shape[2])


def tubal_rank(a, rank_tol=DEFAULT_RANK_TOL):
    """Number of singular values above rank_tol relative to the largest."""
    if rank_tol <= 0:
        raise ValueError(f"rank_tol must be positive, got {rank_tol}")
    return _rank_from_avg(singular_values(a), rank_tol)


def average_rank(a, rank_tol=DEFAULT_RANK_TOL):
    """Mean matrix rank of the Fourier slices, a lower bound on tubal rank."""
    if rank_tol <= 0:
        raise ValueError(f"rank_tol must be positive, got {rank_tol}")
    a = as_tensor3(a)
    sbar, weights = _half_singvals(a)
    smax = float(sbar.max(initial=0.0))
    if smax <= 0.0:
        return 0.0
    counts = (sbar > rank_tol * smax).sum(axis=1)
    return float(weights @ counts) / a.shape[2]


def best_rank_k(a, k):
    """Best approximation of tubal rank at most k: keep the k leading Fourier
    singular triplets of every slice."""
    a = as_tensor3(a)
    n1, n2, n3 = a.shape
    if not 0 <= k <= min(n1, n2):
        raise RankOutOfRange(f"rank {k} outside [0, {min(n1, n2)}]")
    if k == 0:
        return np.zeros_like(a)
    half = _half_spectrum(a)
    ubar, sbar, vhbar = _svd_half(half, n3, full_matrices=False)
    trunc = np.matmul(ubar[:, :, :k] * sbar[:, None, :k], vhbar[:, :k, :])
    out, _ = _ifft_factor(trunc, n3)
    return out
