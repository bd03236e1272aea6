"""Deterministic eigen/singular vector helpers."""

import numpy as np

__all__ = ["fix_phase", "dominant_right_singular", "smallest_eigvecs"]


def fix_phase(vecs):
    """Rotate each column so its largest-magnitude entry is real nonnegative.

    Ties in magnitude resolve to the lowest row index.
    """
    vecs = np.array(vecs, dtype=np.complex128, copy=True)
    if vecs.size == 0:
        return vecs
    idx = np.argmax(np.abs(vecs), axis=0)
    pivot = vecs[idx, np.arange(vecs.shape[1])]
    mag = np.abs(pivot)
    phase = np.where(mag > 0, np.conj(pivot) / np.where(mag > 0, mag, 1.0), 1.0)
    return vecs * phase


def dominant_right_singular(G, d):
    """The ``d`` right singular vectors of ``G`` with largest singular values."""
    _, _, vh = np.linalg.svd(G, full_matrices=True)
    return fix_phase(vh[:d].conj().T)


def smallest_eigvecs(M, d):
    """Eigenvectors of Hermitian ``M`` for its ``d`` smallest eigenvalues."""
    _, vecs = np.linalg.eigh(M)
    return fix_phase(vecs[:, :d])

