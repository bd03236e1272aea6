"""Rates, per-stream SINR and closed-form coordination bounds."""

from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError, NumericalFailureError
from .kernels import link_rates, pad_stack
from .model import estimation_error_variance

__all__ = ["RateBounds", "SumRateSample", "theory_bounds", "cluster_sum_rate",
           "stream_sinr", "relative_oci_power", "oci_noise_floor"]


@dataclass(frozen=True)
class RateBounds:
    """Two-cell sum rates (bits/s/Hz) of the four reference strategies."""

    full_reuse: float
    orthogonal: float
    ia: float
    jt: float


@dataclass(frozen=True)
class SumRateSample:
    value: float
    per_mt: tuple


def theory_bounds(snr, alpha, beta, B=2):
    """Closed-form cluster sum rates for a two-cell MISO interference channel.

    Works elementwise on array-valued ``snr``.
    """
    if B != 2:
        raise InvalidArgumentError("closed-form bounds are only defined for B = 2")
    snr = np.asarray(snr, dtype=float)
    if np.any(snr < 0):
        raise InvalidArgumentError("snr must be >= 0")
    oci = beta * snr + 1.0
    full = np.log2(1.0 + snr / (alpha * snr + oci))
    ia = np.log2(1.0 + snr / oci)
    jt = np.log2(1.0 + (1.0 + alpha) * snr / oci)

    def out(x):
        x = B * x
        return float(x) if x.ndim == 0 else x

    return RateBounds(out(full), out(0.5 * ia), out(ia), out(jt))


def oci_noise_floor(cfg, beta):
    """Expected OCI plus noise power per receive antenna at each MT."""
    return np.array([beta * cfg.P / n + cfg.N0 for n in cfg.nR])


def cluster_sum_rate(cfg, scenario, actual, solution):
    """Sum over MTs of ``log2 det(I + H_bb S_b H_bb^H Q_b^-1)`` on actual channels.

    ``Q_b`` holds the ``alpha/(B-1)``-scaled ICI and the white OCI+noise floor.
    Combiners are not used.  Orthogonal solutions drop the ICI term and
    scale each MT rate by ``1/B``.
    """
    B = cfg.B
    noise = oci_noise_floor(cfg, scenario.beta)
    if np.any(noise <= 0):
        raise NumericalFailureError("interference-plus-noise covariance is not positive definite")
    rows, cols = max(cfg.nR), max(cfg.nT)
    H = np.stack([pad_stack(actual[b], rows, cols) for b in range(B)])
    F = pad_stack([solution.precoder(l) for l in range(B)], cols)
    cross = scenario.alpha / (B - 1) if B > 1 else 0.0
    per_mt = link_rates(H, F, cross, noise, not solution.orthogonal) * solution.prelog
    per_mt = np.maximum(per_mt, 0.0)
    return SumRateSample(float(per_mt.sum()), tuple(float(r) for r in per_mt))


def stream_sinr(cfg, scenario, actual, solution, b, k, noise=None):
    """SINR of stream ``k`` (0-based) at MT ``b`` after its combiner.

    The OCI+noise term is its expectation ``(beta P/nR + N0) ||u||^2`` unless
    a :class:`~cbsim.model.ReceptionNoise` is given, in which case the
    realized ``|u^H (g_b + n_b)|^2`` is used.
    """
    if not 0 <= k < len(solution.p[b]):
        raise InvalidArgumentError(f"stream index {k} out of range for MT {b}")
    B = cfg.B
    u = solution.U[b][:, k]
    own = np.abs(u.conj() @ actual[b][b] @ solution.V[b]) ** 2 * solution.p[b]
    signal = own[k]
    inter_stream = own.sum() - signal
    ici = 0.0
    if B > 1 and not solution.orthogonal:
        scale = scenario.alpha / (B - 1)
        for l in range(B):
            if l != b:
                ici += scale * float(np.sum(
                    np.abs(u.conj() @ actual[b][l] @ solution.V[l]) ** 2 * solution.p[l]))
    if noise is None:
        floor = (scenario.beta * cfg.P / cfg.nR[b] + cfg.N0) * float(np.real(np.vdot(u, u)))
    else:
        floor = float(np.abs(np.vdot(u, noise.g[b] + noise.n[b])) ** 2)
    return float(signal / (inter_stream + ici + floor))


def relative_oci_power(beta, nT, nR, Np, snr):
    """Aggregate OCI power relative to the estimated intended-channel power."""
    return beta / (nT * nR * estimation_error_variance(Np, nT, snr) + 1.0)

