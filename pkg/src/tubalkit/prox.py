"""Proximal operators: tensor singular value thresholding and elementwise
soft-thresholding.

The shrinkage inside ``tsvt`` acts on the Fourier-domain singular values, not
on the averaged ones; applying it after averaging would not solve the nuclear
norm proximal problem.
"""

import numpy as np

from .core import as_tensor3, imag_ratio, mirror_spectrum
from .decomposition import _count, _half_spectrum, _svd_half

_last_imag_residual = 0.0


def last_imag_residual():
    """Relative imaginary mass discarded by the most recent tsvt call."""
    return _last_imag_residual


def soft_threshold(x, kappa):
    """Elementwise sign(x) * max(|x| - kappa, 0)."""
    if kappa < 0:
        raise ValueError(f"threshold must be nonnegative, got {kappa}")
    x = np.asarray(x, dtype=np.float64)
    return np.sign(x) * np.maximum(np.abs(x) - kappa, 0.0)


def tsvt(y, tau):
    """Proximal operator of the tensor nuclear norm at threshold tau.

    Minimizes tau * ||x||_tnn + 0.5 * ||x - y||_F^2 by soft-thresholding the
    singular values of each retained Fourier slice and mirroring the rest.
    """
    global _last_imag_residual
    if tau < 0:
        raise ValueError(f"threshold must be nonnegative, got {tau}")
    y = as_tensor3(y)
    n3 = y.shape[2]
    if n3 == 1:
        # Matrix singular value thresholding, bit-for-bit.
        u, s, vh = np.linalg.svd(y[:, :, 0], full_matrices=False)
        _count(1)
        shrunk = np.maximum(s - tau, 0.0)
        _last_imag_residual = 0.0
        return np.ascontiguousarray(((u * shrunk) @ vh)[:, :, None])
    half = _half_spectrum(y)
    u, s, vh = _svd_half(half, n3, full_matrices=False)
    shrunk = np.maximum(s - tau, 0.0)
    whalf = np.matmul(u * shrunk[:, None, :], vh)
    full = mirror_spectrum(np.moveaxis(whalf, 0, 2), n3)
    z = np.fft.ifft(full, axis=2)
    _last_imag_residual = imag_ratio(z)
    return np.ascontiguousarray(z.real)
