"""Random quantities of the cluster model: channels, CSI errors, OCI and noise.

All samplers take an explicit ``numpy.random.Generator``; identical generator
states produce bit-identical outputs.
"""

import math
from dataclasses import dataclass, field, replace
from functools import cached_property

import numpy as np

from .errors import InvalidArgumentError
from .kernels import pad_stack

__all__ = ["PERFECT_CSI", "ClusterConfig", "Scenario", "ChannelRealization",
           "ReceptionNoise", "sample_channel", "sample_cluster_channels",
           "estimation_error_variance", "estimate_channels", "draw_realization",
           "sample_oci", "sample_awgn", "sample_reception_noise",
           "simulate_reception", "db_to_linear"]

#: Pilot-count sentinel meaning the estimated channels equal the actual ones.
PERFECT_CSI = math.inf


def db_to_linear(db):
    return 10.0 ** (np.asarray(db, dtype=float) / 10.0)


def _per_bs(value, B, name):
    if np.isscalar(value):
        value = (value,) * B
    value = tuple(int(v) for v in value)
    if len(value) != B:
        raise InvalidArgumentError(f"{name} needs {B} entries, got {len(value)}")
    if any(v < 1 for v in value):
        raise InvalidArgumentError(f"{name} entries must be >= 1")
    return value


@dataclass(frozen=True)
class ClusterConfig:
    """Cluster topology: one scheduled MT per BS, MT ``b`` served by BS ``b``.

    ``nT``/``nR`` accept a single int (homogeneous cluster) or one entry per BS.
    """

    B: int
    nT: tuple
    nR: tuple
    P: float = 1.0
    N0: float = 1.0

    def __post_init__(self):
        if int(self.B) < 1:
            raise InvalidArgumentError("B must be >= 1")
        object.__setattr__(self, "B", int(self.B))
        object.__setattr__(self, "nT", _per_bs(self.nT, self.B, "nT"))
        object.__setattr__(self, "nR", _per_bs(self.nR, self.B, "nR"))
        if not self.P > 0:
            raise InvalidArgumentError("P must be > 0")
        if not self.N0 > 0:
            raise InvalidArgumentError("N0 must be > 0")

    @property
    def snr(self):
        return self.P / self.N0

    def at_snr_db(self, snr_db):
        """Copy with ``N0 = P / SNR``; the transmit power stays fixed."""
        return replace(self, N0=self.P / float(db_to_linear(snr_db)))


@dataclass(frozen=True)
class Scenario:
    """Experiment knobs shared by every point of a sweep.

    ``streams`` is the preset per-BS stream count for IA and max-SINR; ``None``
    selects ``max(1, min(nT, nR) // 2)``.
    """

    alpha: float
    beta: float
    m: float = 1.0
    Np: float = PERFECT_CSI
    snr_grid: tuple = ()
    trials: int = 100
    master_seed: int = 0
    max_iters: int = 10
    tol: float = 1e-4
    lam: float = 0.5
    gamma_min_db: float = 0.0
    streams: object = None
    ia_max_iters: int = 500

    def __post_init__(self):
        for name in ("alpha", "beta"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise InvalidArgumentError(f"{name} must lie in [0, 1], got {v}")
        if not self.m >= 0.5:
            raise InvalidArgumentError(f"m must be >= 0.5, got {self.m}")
        if not (self.Np == PERFECT_CSI or (self.Np >= 1 and float(self.Np).is_integer())):
            raise InvalidArgumentError(f"Np must be a positive integer or inf, got {self.Np}")
        if int(self.trials) < 1:
            raise InvalidArgumentError("trials must be >= 1")
        if int(self.max_iters) < 1 or int(self.ia_max_iters) < 1:
            raise InvalidArgumentError("iteration caps must be >= 1")
        if not 0.0 <= self.lam <= 1.0:
            raise InvalidArgumentError("lam must lie in [0, 1]")
        if not 0 <= int(self.master_seed) < 2 ** 64:
            raise InvalidArgumentError("master_seed must be an unsigned 64-bit integer")
        object.__setattr__(self, "snr_grid", tuple(float(s) for s in self.snr_grid))

    @property
    def perfect_csi(self):
        return self.Np == PERFECT_CSI


@dataclass(frozen=True)
class ChannelRealization:
    """Actual and estimated channels; ``actual[b][l]`` links BS ``l`` to MT ``b``."""

    actual: tuple
    estimated: tuple
    nR: tuple = field(default=())
    nT: tuple = field(default=())

    def __post_init__(self):
        if not self.nR:
            object.__setattr__(self, "nR", tuple(row[0].shape[0] for row in self.actual))
        if not self.nT:
            object.__setattr__(self, "nT", tuple(h.shape[1] for h in self.actual[0]))

    @property
    def B(self):
        return len(self.actual)

    @cached_property
    def actual_stack(self):
        """Zero-padded array of shape ``(B, B, max nR, max nT)``."""
        return _stack_links(self.actual)

    @cached_property
    def estimated_stack(self):
        return _stack_links(self.estimated)


def _stack_links(links):
    B = len(links)
    rows = max(h.shape[0] for row in links for h in row)
    cols = max(h.shape[1] for row in links for h in row)
    return np.stack([pad_stack(links[b], rows, cols) for b in range(B)])


@dataclass(frozen=True)
class ReceptionNoise:
    """Per-MT OCI vectors ``g[b]`` and AWGN vectors ``n[b]``."""

    g: tuple
    n: tuple


def _check_dims(*dims):
    for d in dims:
        if int(d) != d or d < 1:
            raise InvalidArgumentError(f"dimensions must be positive integers, got {d}")


def _cn(rng, shape, var):
    """Circularly-symmetric complex Gaussian entries with variance ``var``."""
    scale = math.sqrt(var / 2.0)
    return scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))


def sample_channel(nR, nT, rng):
    """Draw an ``nR x nT`` channel with i.i.d. ``CN(0, 1/(nT nR))`` entries."""
    _check_dims(nR, nT)
    return _cn(rng, (nR, nT), 1.0 / (nT * nR))


def sample_cluster_channels(cfg, rng):
    """All ``B x B`` actual links of the cluster, drawn row by row."""
    return tuple(tuple(sample_channel(cfg.nR[b], cfg.nT[l], rng) for l in range(cfg.B))
                 for b in range(cfg.B))


def estimation_error_variance(Np, nT, snr):
    """Per-entry variance ``(1 + (Np/nT) snr)^-1`` of the MMSE estimation error."""
    if not (Np == PERFECT_CSI or Np >= 1):
        raise InvalidArgumentError(f"Np must be >= 1 or inf, got {Np}")
    _check_dims(nT)
    if snr < 0:
        raise InvalidArgumentError("snr must be >= 0")
    if Np == PERFECT_CSI:
        return 0.0
    return 1.0 / (1.0 + (Np / nT) * snr)


def estimate_channels(actual, Np, snr, rng):
    """Return ``actual + E`` with independent error matrices per link.

    The error variance on link ``(b, l)`` uses the transmitting BS's antenna
    count ``nT[l]``.  With ``Np = PERFECT_CSI`` the actual matrices are
    returned unchanged and ``rng`` is not consumed.
    """
    if Np == PERFECT_CSI:
        return tuple(tuple(h for h in row) for row in actual)
    out = []
    for row in actual:
        new_row = []
        for h in row:
            var = estimation_error_variance(Np, h.shape[1], snr)
            new_row.append(h + _cn(rng, h.shape, var))
        out.append(tuple(new_row))
    return tuple(out)


def draw_realization(cfg, scenario, channel_rng, error_rng):
    """Draw one ``ChannelRealization`` at the SNR implied by ``cfg.N0``."""
    actual = sample_cluster_channels(cfg, channel_rng)
    estimated = estimate_channels(actual, scenario.Np, cfg.snr, error_rng)
    return ChannelRealization(actual, estimated, cfg.nR, cfg.nT)


def sample_oci(nR, beta, P, m, rng):
    """Aggregate out-of-cluster interference vector of length ``nR``.

    Squared amplitudes are Gamma(m, beta P / (m nR)); phases are uniform.
    """
    _check_dims(nR)
    if not m >= 0.5:
        raise InvalidArgumentError(f"Nakagami shape m must be >= 0.5, got {m}")
    if not 0.0 <= beta <= 1.0:
        raise InvalidArgumentError(f"beta must lie in [0, 1], got {beta}")
    if not P > 0:
        raise InvalidArgumentError("P must be > 0")
    if beta == 0.0:
        return np.zeros(nR, dtype=np.complex128)
    power = rng.gamma(m, beta * P / (m * nR), size=nR)
    phase = rng.uniform(0.0, 2.0 * math.pi, size=nR)
    return np.sqrt(power) * np.exp(1j * phase)


def sample_awgn(nR, N0, rng):
    _check_dims(nR)
    if N0 < 0:
        raise InvalidArgumentError("N0 must be >= 0")
    if N0 == 0:
        return np.zeros(nR, dtype=np.complex128)
    return _cn(rng, nR, N0)


def sample_reception_noise(cfg, scenario, rng):
    g = tuple(sample_oci(n, scenario.beta, cfg.P, scenario.m, rng) for n in cfg.nR)
    n = tuple(sample_awgn(n, cfg.N0, rng) for n in cfg.nR)
    return ReceptionNoise(g, n)


def simulate_reception(cfg, scenario, actual, solution, symbols, noise):
    """Pass unit-power symbols through the cluster and apply the combiners.

    Returns
    -------
    y : tuple of ndarray
        Received vector at each MT.
    s_hat : tuple of ndarray
        ``U_b^H y_b`` for each MT.
    """
    B = cfg.B
    if len(actual) != B or len(symbols) != B or len(solution.V) != B:
        raise InvalidArgumentError("cluster size mismatch")
    x = []
    for l in range(B):
        V, p, s = solution.V[l], np.asarray(solution.p[l]), np.asarray(symbols[l])
        if V.shape != (cfg.nT[l], len(p)) or s.shape != (len(p),):
            raise InvalidArgumentError(f"precoder/symbol shape mismatch at BS {l}")
        x.append(V @ (np.sqrt(p) * s))
    cross = math.sqrt(scenario.alpha / (B - 1)) if B > 1 else 0.0
    ys, s_hat = [], []
    for b in range(B):
        if actual[b][b].shape != (cfg.nR[b], cfg.nT[b]):
            raise InvalidArgumentError(f"channel shape mismatch at MT {b}")
        y = actual[b][b] @ x[b]
        for l in range(B):
            if l != b:
                y = y + cross * (actual[b][l] @ x[l])
        y = y + noise.g[b] + noise.n[b]
        ys.append(y)
        s_hat.append(solution.U[b].conj().T @ y)
    return tuple(ys), tuple(s_hat)
