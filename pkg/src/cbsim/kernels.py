"""Hot numeric kernels with a numba path and a pure-numpy fallback.

Every link quantity is stored zero-padded to the largest antenna count in
the cluster, so a stack of ragged matrices becomes a regular 3-D/4-D array.
Zero padding is exact for the products computed here: padded columns of a
channel only ever meet padded (zero) rows of a precoder.

The backend is chosen once at import time from ``CBSIM_BACKEND``
(``numba`` or ``numpy``).  ``numba`` is the default whenever it imports.
"""

import os

import numpy as np

__all__ = ["BACKEND", "gram_sum", "link_rates", "numpy_gram_sum",
           "numpy_link_rates", "pad_stack"]


def _select_backend():
    requested = os.environ.get("CBSIM_BACKEND", "numba").strip().lower()
    if requested not in ("numba", "numpy"):
        raise ValueError(f"CBSIM_BACKEND must be 'numba' or 'numpy', got {requested!r}")
    if requested == "numba":
        try:
            import numba  # noqa: F401
        except ImportError:  # pragma: no cover - numba is a declared dependency
            return "numpy"
    return requested


BACKEND = _select_backend()


def pad_stack(mats, rows=None, cols=None):
    """Stack 2-D complex arrays of possibly different shapes, zero-padded.

    Parameters
    ----------
    mats : sequence of 2-D arrays
    rows, cols : int, optional
        Padded sizes; default to the largest dimension present.

    Returns
    -------
    ndarray, shape (len(mats), rows, cols), complex128, C-contiguous
    """
    rows = max(m.shape[0] for m in mats) if rows is None else rows
    cols = max(m.shape[1] for m in mats) if cols is None else cols
    out = np.zeros((len(mats), rows, cols), dtype=np.complex128)
    for j, m in enumerate(mats):
        out[j, :m.shape[0], :m.shape[1]] = m
    return out


# ---------------------------------------------------------------------------
# numpy reference path
# ---------------------------------------------------------------------------
def numpy_gram_sum(A, F, w):
    """Return ``sum_j w[j] (A[j] F[j]) (A[j] F[j])^H``."""
    X = A @ F
    return np.einsum("j,jik,jlk->il", w, X, X.conj())


def numpy_link_rates(H, F, cross_weight, noise, include_cross):
    """Per-receiver ``log2 det(I + X X^H Q^{-1})`` with ``X = H[b,b] F[b]``.

    ``Q = cross_weight * sum_{l != b} H[b,l] F[l] F[l]^H H[b,l]^H + noise[b] I``;
    the cross term is skipped entirely when ``include_cross`` is false.
    """
    B, _, n, _ = H.shape
    rates = np.empty(B)
    eye = np.eye(n)
    for b in range(B):
        w = np.full(B, cross_weight if include_cross else 0.0)
        w[b] = 0.0
        Q = numpy_gram_sum(H[b], F, w) + noise[b] * eye
        X = H[b, b] @ F[b]
        _, ld_q = np.linalg.slogdet(Q)
        _, ld_t = np.linalg.slogdet(Q + X @ X.conj().T)
        rates[b] = (ld_t - ld_q) / np.log(2.0)
    return rates


# ---------------------------------------------------------------------------
# numba path
# ---------------------------------------------------------------------------
if BACKEND == "numba":
    from numba import njit

    @njit(cache=True, nogil=True)
    def _nb_gram_sum(A, F, w):
        L, n, m = A.shape
        d = F.shape[2]
        out = np.zeros((n, n), dtype=np.complex128)
        X = np.empty((n, d), dtype=np.complex128)
        for j in range(L):
            wj = w[j]
            if wj == 0.0:
                continue
            for i in range(n):
                for k in range(d):
                    acc = 0j
                    for t in range(m):
                        acc += A[j, i, t] * F[j, t, k]
                    X[i, k] = acc
            for i in range(n):
                for l in range(i, n):
                    acc = 0j
                    for k in range(d):
                        acc += X[i, k] * np.conj(X[l, k])
                    out[i, l] += wj * acc
        for i in range(n):
            out[i, i] = out[i, i].real
            for l in range(i + 1, n):
                out[l, i] = np.conj(out[i, l])
        return out

    @njit(cache=True, nogil=True)
    def _nb_link_rates(H, F, cross_weight, noise, include_cross):
        B = H.shape[0]
        n = H.shape[2]
        rates = np.empty(B)
        w = np.empty(B)
        own = np.empty((1, n, H.shape[3]), dtype=np.complex128)
        own_f = np.empty((1, F.shape[1], F.shape[2]), dtype=np.complex128)
        one = np.ones(1)
        for b in range(B):
            for l in range(B):
                w[l] = cross_weight if (include_cross and l != b) else 0.0
            Q = _nb_gram_sum(H[b], F, w)
            for i in range(n):
                Q[i, i] += noise[b]
            own[0] = H[b, b]
            own_f[0] = F[b]
            T = Q + _nb_gram_sum(own, own_f, one)
            _, ld_q = np.linalg.slogdet(Q)
            _, ld_t = np.linalg.slogdet(T)
            rates[b] = (ld_t - ld_q).real / np.log(2.0)
        return rates

    def gram_sum(A, F, w):
        return _nb_gram_sum(np.ascontiguousarray(A, dtype=np.complex128),
                            np.ascontiguousarray(F, dtype=np.complex128),
                            np.ascontiguousarray(w, dtype=np.float64))

    def link_rates(H, F, cross_weight, noise, include_cross):
        return _nb_link_rates(np.ascontiguousarray(H, dtype=np.complex128),
                              np.ascontiguousarray(F, dtype=np.complex128),
                              float(cross_weight),
                              np.ascontiguousarray(noise, dtype=np.float64),
                              bool(include_cross))
else:
    gram_sum = numpy_gram_sum
    link_rates = numpy_link_rates

gram_sum.__doc__ = numpy_gram_sum.__doc__
link_rates.__doc__ = numpy_link_rates.__doc__
