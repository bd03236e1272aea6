"""Seeded Monte Carlo sweeps over (scheme, SNR, trial).

Channel draws depend only on the trial index and CSI-error draws only on
(SNR index, trial index), so every scheme is evaluated on the same
realizations and neighbouring SNR points share their actual channels.
"""

import hashlib
import logging
import math
import struct
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidArgumentError, NumericalFailureError
from .metrics import cluster_sum_rate
from .model import draw_realization
from .schemes import OCI_AWARE, SCHEMES, SchemeOptions, build_problem

__all__ = ["TrialResult", "Aggregate", "ResultTable", "derive_trial_seed",
           "run_trial", "run_sweep", "trial_realization", "CHANNEL_SLOT", "ERROR_SLOT"]

log = logging.getLogger(__name__)

# scheme slots reserved for the shared random streams
CHANNEL_SLOT = 0xFFFF_FFFF
ERROR_SLOT = 0xFFFF_FFFE

_U64 = 2 ** 64


def derive_trial_seed(master, scheme_index, snr_index, trial_index):
    """Mix ``(master, scheme, snr, trial)`` into a 64-bit seed with BLAKE2b."""
    parts = (master, scheme_index, snr_index, trial_index)
    if any(int(x) != x or not 0 <= x < _U64 for x in parts):
        raise InvalidArgumentError("seed components must be unsigned 64-bit integers")
    data = struct.pack("<4Q", *(int(x) for x in parts))
    digest = hashlib.blake2b(data, digest_size=8, person=b"cbsim.trial").digest()
    return int.from_bytes(digest, "little")


@dataclass(frozen=True)
class TrialResult:
    scheme: str
    snr_db: float
    trial: int
    sum_rate: float
    d: tuple = ()
    iterations: int = 0
    residual_leakage: float = None
    failed: bool = False
    error: str = ""


@dataclass(frozen=True)
class Aggregate:
    mean: float
    stderr: float
    n: int
    excluded: int


@dataclass
class ResultTable:
    """Trial rows in canonical (scheme, SNR, trial) order plus per-point aggregates."""

    trials: list
    schemes: tuple = ()
    snr_grid: tuple = ()
    alpha: float = 0.0
    beta: float = 0.0
    m: float = 1.0
    Np: float = math.inf
    aggregates: dict = field(default_factory=dict)

    def __post_init__(self):
        self.aggregates = _aggregate(self.trials)

    def mean(self, scheme, snr_db):
        return self.aggregates[(scheme, float(snr_db))].mean

    def rates(self, scheme, snr_db):
        return np.array([t.sum_rate for t in self.trials
                         if t.scheme == scheme and t.snr_db == snr_db and not t.failed])

    @property
    def failure_rate(self):
        if not self.trials:
            return 0.0
        return sum(t.failed for t in self.trials) / len(self.trials)


def _aggregate(trials):
    groups = {}
    for t in trials:
        groups.setdefault((t.scheme, t.snr_db), []).append(t)
    out = {}
    for key, rows in groups.items():
        ok = np.array([t.sum_rate for t in rows if not t.failed])
        n = len(ok)
        mean = float(np.mean(ok)) if n else math.nan
        stderr = float(np.std(ok, ddof=1) / math.sqrt(n)) if n > 1 else (0.0 if n else math.nan)
        out[key] = Aggregate(mean, stderr, n, len(rows) - n)
    return out


def _scheme_options(scenario):
    return SchemeOptions(lam=scenario.lam, gamma_min_db=scenario.gamma_min_db,
                         ia_max_iters=scenario.ia_max_iters)


def trial_realization(cfg, scenario, snr_index, trial_index):
    """The channel draw shared by every scheme at one (SNR, trial) point.

    Returns the point's ``ClusterConfig`` (``N0`` set from the SNR) and the
    ``ChannelRealization``.
    """
    point = cfg.at_snr_db(scenario.snr_grid[snr_index])
    seed = scenario.master_seed
    channel_rng = np.random.default_rng(derive_trial_seed(seed, CHANNEL_SLOT, 0, trial_index))
    error_rng = np.random.default_rng(derive_trial_seed(seed, ERROR_SLOT, snr_index, trial_index))
    return point, draw_realization(point, scenario, channel_rng, error_rng)


def run_trial(cfg, scenario, scheme, snr_index, trial_index):
    """Design on estimated channels, evaluate the sum rate on actual ones."""
    if scheme not in SCHEMES:
        raise InvalidArgumentError(f"unknown scheme {scheme!r}")
    snr_db = scenario.snr_grid[snr_index]
    point, realization = trial_realization(cfg, scenario, snr_index, trial_index)
    problem = build_problem(realization.estimated, scenario.alpha, point.P, point.N0,
                            scenario.beta, scheme in OCI_AWARE,
                            scenario.max_iters, scenario.tol)
    design, takes_streams = SCHEMES[scheme]
    opts = _scheme_options(scenario)
    try:
        if takes_streams:
            solution = design(problem, scenario.streams, opts)
        else:
            solution = design(problem, opts)
        rate = cluster_sum_rate(point, scenario, realization.actual, solution).value
    except NumericalFailureError as exc:
        log.warning("%s failed at snr=%s dB, trial %d: %s", scheme, snr_db, trial_index, exc)
        return TrialResult(scheme, snr_db, trial_index, math.nan, failed=True, error=str(exc))
    return TrialResult(scheme, snr_db, trial_index, rate, solution.d, solution.iterations,
                       solution.residual_leakage)


def _run_task(args):
    cfg, scenario, scheme, snr_index, trial_index = args
    return run_trial(cfg, scenario, scheme, snr_index, trial_index)


def run_sweep(cfg, scenario, schemes, workers=1):
    """Run every (scheme, SNR, trial) combination and aggregate.

    The output does not depend on ``workers``.
    """
    schemes = tuple(schemes)
    if not schemes:
        raise InvalidArgumentError("no schemes requested")
    for s in schemes:
        if s not in SCHEMES:
            raise InvalidArgumentError(f"unknown scheme {s!r}")
    tasks = [(cfg, scenario, s, i, t)
             for s in schemes
             for i in range(len(scenario.snr_grid))
             for t in range(scenario.trials)]
    if workers > 1 and len(tasks) > 1:
        chunk = max(1, len(tasks) // (4 * workers))
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_task, tasks, chunksize=chunk))
    else:
        results = [_run_task(t) for t in tasks]
    order = {s: i for i, s in enumerate(schemes)}
    snr_order = {s: i for i, s in enumerate(scenario.snr_grid)}
    results.sort(key=lambda r: (order[r.scheme], snr_order[r.snr_db], r.trial))
    return ResultTable(results, schemes, scenario.snr_grid, scenario.alpha, scenario.beta,
                       scenario.m, scenario.Np)
