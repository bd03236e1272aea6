"""Transmit precoder / receive combiner design for the coordination cluster.

Every scheme sees only a :class:`DesignProblem`, which is built from the
*estimated* channels.  Precoders are stored as unit-norm columns ``V[b]`` and
per-stream powers ``p[b]``; ``F[b] = V[b] diag(sqrt(p[b]))`` is the full
precoder used internally.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidArgumentError, NumericalFailureError
from .kernels import gram_sum, link_rates, pad_stack
from .linalg import dominant_right_singular, fix_phase

__all__ = ["DesignProblem", "SchemeOptions", "BeamformerSolution", "build_problem",
           "ia_min_leakage", "max_sinr", "wmmse", "reconfigurable",
           "full_reuse_baseline", "orthogonal_baseline", "mmse_combiner",
           "interference_leakage", "design_sum_rate", "design_stream_sinrs",
           "default_streams", "SCHEMES", "OCI_AWARE"]

_PRUNE_FRACTION = 1e-6
_MAX_DOUBLINGS = 128
# eigenvalues below this fraction of the largest count as exact nulls
_NULL_TOL = 1e-10


@dataclass(frozen=True)
class DesignProblem:
    """Design-side view of one channel realization.

    ``G[b][l]`` is the effective (already ICI-scaled) channel from BS ``l`` to
    MT ``b``; ``sigma2[b]`` the white noise floor assumed at MT ``b``.
    """

    G: tuple
    P: float
    sigma2: tuple
    max_iters: int = 10
    tol: float = 1e-4

    def __post_init__(self):
        B = len(self.G)
        if B < 1 or any(len(row) != B for row in self.G):
            raise InvalidArgumentError("G must be a B x B nested sequence")
        nR = tuple(self.G[b][0].shape[0] for b in range(B))
        nT = tuple(self.G[0][l].shape[1] for l in range(B))
        for b in range(B):
            for l in range(B):
                if self.G[b][l].shape != (nR[b], nT[l]):
                    raise InvalidArgumentError(f"G[{b}][{l}] has inconsistent shape")
        sigma2 = tuple(float(s) for s in np.broadcast_to(self.sigma2, (B,)))
        if any(not s > 0 for s in sigma2):
            raise InvalidArgumentError("sigma2 must be > 0")
        if not self.P > 0:
            raise InvalidArgumentError("P must be > 0")
        object.__setattr__(self, "sigma2", sigma2)
        object.__setattr__(self, "nR", nR)
        object.__setattr__(self, "nT", nT)
        rows, cols = max(nR), max(nT)
        rx = np.stack([pad_stack(self.G[b], rows, cols) for b in range(B)])
        object.__setattr__(self, "rx", rx)
        # tx[l, k] = G[k][l]^H, the reciprocal link seen from BS l
        object.__setattr__(self, "tx", np.ascontiguousarray(rx.conj().transpose(1, 0, 3, 2)))

    @property
    def B(self):
        return len(self.G)


def build_problem(estimated, alpha, P, N0, beta=0.0, oci_aware=False, max_iters=10, tol=1e-4):
    """Scale the estimated cross links by ``sqrt(alpha/(B-1))`` and set the noise floor.

    OCI-aware designs use ``N0 + beta P / nR[b]``; the others use ``N0``.
    """
    B = len(estimated)
    cross = math.sqrt(alpha / (B - 1)) if B > 1 else 0.0
    G = tuple(tuple(estimated[b][l] if l == b else cross * estimated[b][l] for l in range(B))
              for b in range(B))
    nR = [estimated[b][0].shape[0] for b in range(B)]
    sigma2 = tuple(N0 + (beta * P / nR[b] if oci_aware else 0.0) for b in range(B))
    return DesignProblem(G, P, sigma2, max_iters, tol)


@dataclass(frozen=True)
class SchemeOptions:
    lam: float = 0.5
    gamma_min_db: float = 0.0
    ia_max_iters: int = 500
    ia_tol: float = 1e-10
    ia_signal_select: bool = True
    record_updates: bool = False


@dataclass
class BeamformerSolution:
    """Precoders, powers and combiners for every BS/MT pair.

    ``trace`` holds the per-iteration objective of the scheme that built it.
    ``orthogonal`` marks time/frequency-orthogonal transmission: ICI is
    absent and rates carry a ``1/B`` prelog.
    """

    scheme: str
    V: list
    p: list
    U: list
    trace: list = field(default_factory=list)
    iterations: int = 0
    orthogonal: bool = False
    residual_leakage: float = None
    U_align: list = None
    flags: list = field(default_factory=list)
    updates: list = field(default_factory=list)

    @property
    def d(self):
        return tuple(len(p) for p in self.p)

    @property
    def prelog(self):
        return 1.0 / len(self.V) if self.orthogonal else 1.0

    def precoder(self, b):
        return self.V[b] * np.sqrt(self.p[b])

    def covariance(self, b):
        """Transmit covariance ``S_b = V_b P_b V_b^H``."""
        F = self.precoder(b)
        return F @ F.conj().T

    def check(self, P, nR, nT):
        """Raise ``AssertionError`` if any structural invariant is violated."""
        for b, (V, p, U) in enumerate(zip(self.V, self.p, self.U)):
            d = len(p)
            if not 1 <= d <= min(nT[b], nR[b]):
                raise AssertionError(f"BS {b}: stream count {d} out of range")
            if V.shape != (nT[b], d) or U.shape != (nR[b], d):
                raise AssertionError(f"BS {b}: filter shapes {V.shape}, {U.shape}")
            if np.any(np.abs(np.linalg.norm(V, axis=0) - 1.0) > 1e-9):
                raise AssertionError(f"BS {b}: precoder columns are not unit norm")
            if np.any(p < 0) or p.sum() > P + 1e-9:
                raise AssertionError(f"BS {b}: power allocation {p} violates budget {P}")
            if np.any(np.linalg.norm(U, axis=0) == 0):
                raise AssertionError(f"MT {b}: zero combiner column")
        return self


def default_streams(nT, nR):
    """Half the spatial dimensions, at least one stream."""
    return max(1, min(nT, nR) // 2)


def _stream_counts(problem, d):
    if d is None:
        d = [default_streams(t, r) for t, r in zip(problem.nT, problem.nR)]
    elif np.isscalar(d):
        d = [int(d)] * problem.B
    d = [int(x) for x in d]
    if len(d) != problem.B:
        raise InvalidArgumentError("need one stream count per BS")
    for b, x in enumerate(d):
        if not 1 <= x <= min(problem.nT[b], problem.nR[b]):
            raise InvalidArgumentError(f"d[{b}]={x} outside [1, min(nT, nR)]")
    return d


def _eigen_init(problem, d):
    return [dominant_right_singular(problem.G[b][b], d[b]) for b in range(problem.B)]


def _pack(mats, rows):
    cols = max(m.shape[1] for m in mats)
    return pad_stack(mats, rows, cols)


def _others(B, b):
    w = np.ones(B)
    w[b] = 0.0
    return w


def _rx_cov(problem, F, b, weights=None):
    """``sum_l w_l G[b][l] F_l F_l^H G[b][l]^H`` at MT ``b`` (unpadded)."""
    B = problem.B
    w = np.ones(B) if weights is None else weights
    n = problem.nR[b]
    return gram_sum(problem.rx[b], _pack(F, problem.rx.shape[3]), w)[:n, :n]


def _tx_cov(problem, Uw, l, weights=None):
    """``sum_k w_k G[k][l]^H Uw_k Uw_k^H G[k][l]`` at BS ``l`` (unpadded)."""
    B = problem.B
    w = np.ones(B) if weights is None else weights
    n = problem.nT[l]
    return gram_sum(problem.tx[l], _pack(Uw, problem.tx.shape[3]), w)[:n, :n]


def mmse_combiner(problem, V, p, orthogonal=False):
    """Per-MT linear MMSE estimators of the unit-power symbol streams.

    ``U_b = R_b^{-1} G[b][b] V_b P_b^{1/2}`` with ``R_b`` the total received
    covariance (own streams, ICI unless ``orthogonal``, and ``sigma2 I``).
    """
    B = problem.B
    F = [V[b] * np.sqrt(p[b]) for b in range(B)]
    U = []
    for b in range(B):
        w = np.zeros(B) if orthogonal else np.ones(B)
        w[b] = 1.0
        R = _rx_cov(problem, F, b, w) + problem.sigma2[b] * np.eye(problem.nR[b])
        U.append(np.linalg.solve(R, problem.G[b][b] @ F[b]))
    return U


def interference_leakage(solution, problem, combiners=None):
    """Total interference power ``sum_b sum_{l!=b} ||U_b^H G[b][l] F_l||_F^2``."""
    U = solution.U if combiners is None else combiners
    B = problem.B
    total = 0.0
    for b in range(B):
        for l in range(B):
            if l != b:
                X = U[b].conj().T @ problem.G[b][l] @ solution.precoder(l)
                total += float(np.sum(np.abs(X) ** 2))
    return total


def design_sum_rate(problem, F):
    """Sum of ``log2 det(I + G_bb S_b G_bb^H Q_b^-1)`` over the design channels."""
    rows = problem.rx.shape[3]
    return float(np.sum(link_rates(problem.rx, _pack(F, rows), 1.0,
                                   np.asarray(problem.sigma2), True)))


def design_stream_sinrs(problem, V, p, U):
    """Per-stream SINR on the design channels with noise ``sigma2 ||u||^2``."""
    B = problem.B
    out = []
    for b in range(B):
        gains = []
        for k in range(len(p[b])):
            u = U[b][:, k]
            sig = 0.0
            interf = problem.sigma2[b] * np.real(np.vdot(u, u))
            for l in range(B):
                a = np.abs(u.conj() @ problem.G[b][l] @ V[l]) ** 2 * p[l]
                if l == b:
                    sig = a[k]
                    interf += a.sum() - a[k]
                else:
                    interf += a.sum()
            gains.append(sig / interf)
        out.append(np.array(gains))
    return out


def _finish(problem, scheme, V, p, U, **kw):
    V = [fix_phase(v / np.linalg.norm(v, axis=0)) for v in V]
    p = [np.asarray(x, dtype=float) for x in p]
    sol = BeamformerSolution(scheme, V, p, U, **kw)
    return sol.check(problem.P, problem.nR, problem.nT)


# ---------------------------------------------------------------------------
# IA
# ---------------------------------------------------------------------------
def _aligned_subspace(M, d, signal, side, select_signal=True):
    """Least-leakage ``d``-dimensional subspace of Hermitian ``M``.

    When the numerical null space of ``M`` has more than ``d`` dimensions,
    every choice inside it leaks nothing; the ``d`` directions carrying the
    most desired-signal energy are taken (``signal`` maps the subspace to
    the desired link; ``side`` says whether it multiplies on the left or
    the right).
    """
    w, vecs = np.linalg.eigh(M)
    null = int(np.sum(w <= _NULL_TOL * max(float(w[-1]), 1e-300)))
    if null <= d or not select_signal:
        return fix_phase(vecs[:, :d])
    N = vecs[:, :null]
    if side == "rx":
        # maximize ||x^H N^H signal||: left singular vectors of N^H signal
        left, _, _ = np.linalg.svd(N.conj().T @ signal)
        return fix_phase(N @ left[:, :d])
    _, _, vh = np.linalg.svd(signal @ N)
    return fix_phase(N @ vh[:d].conj().T)


def ia_min_leakage(problem, d=None, opts=None):
    """Interference alignment by alternating leakage minimization.

    Combiners span the ``d`` weakest eigen-directions of the interference
    covariance at each MT; precoders likewise on the reciprocal network.
    Whenever the zero-leakage subspace is larger than ``d``, the directions
    inside it that carry the most desired signal are used.  Runs until the
    leakage stalls or ``opts.ia_max_iters``.  The returned ``U`` are MMSE
    combiners for reception; the orthonormal aligning combiners are kept in
    ``U_align``.
    """
    opts = opts or SchemeOptions()
    d = _stream_counts(problem, d)
    B, P = problem.B, problem.P
    power = [np.full(d[b], P / d[b]) for b in range(B)]
    V = _eigen_init(problem, d)
    Ua = [np.eye(problem.nR[b], d[b], dtype=np.complex128) for b in range(B)]
    trace = []
    iters = 0
    if B > 1:
        scale = P * B
        for iters in range(1, opts.ia_max_iters + 1):
            F = [V[l] * np.sqrt(power[l]) for l in range(B)]
            Ua = [_aligned_subspace(_rx_cov(problem, F, k, _others(B, k)), d[k],
                                    problem.G[k][k] @ F[k], "rx", opts.ia_signal_select)
                  for k in range(B)]
            V = [_aligned_subspace(_tx_cov(problem, Ua, l, _others(B, l)), d[l],
                                   Ua[l].conj().T @ problem.G[l][l], "tx", opts.ia_signal_select)
                 for l in range(B)]
            F = [V[l] * np.sqrt(power[l]) for l in range(B)]
            leak = sum(float(np.real(np.trace(
                Ua[k].conj().T @ _rx_cov(problem, F, k, _others(B, k)) @ Ua[k])))
                for k in range(B))
            trace.append(max(leak, 0.0))
            if trace[-1] <= 1e-15 * scale:
                break
            if len(trace) > 1 and trace[-2] - trace[-1] <= opts.ia_tol * trace[-2]:
                break
    else:
        trace.append(0.0)
    U = mmse_combiner(problem, V, power)
    return _finish(problem, "ia", V, power, U, trace=trace, iterations=iters,
                   residual_leakage=trace[-1], U_align=Ua)


# ---------------------------------------------------------------------------
# max-SINR
# ---------------------------------------------------------------------------
def _max_sinr_columns(R, H, Fown):
    """Columns ``(R - h_k h_k^H)^{-1} h_k`` normalized, with ``h_k = H Fown[:, k]``.

    ``R`` is the total covariance seen by the receiving side.  A zero
    effective channel falls back to the first canonical vector.
    """
    cols, degenerate = [], False
    for k in range(Fown.shape[1]):
        h = H @ Fown[:, k]
        if not np.any(h):
            e = np.zeros(R.shape[0], dtype=np.complex128)
            e[0] = 1.0
            cols.append(e)
            degenerate = True
            continue
        x = np.linalg.solve(R - np.outer(h, h.conj()), h)
        cols.append(x / np.linalg.norm(x))
    return np.column_stack(cols), degenerate


def _sinr_of(R, h, u):
    """SINR of the stream with effective channel ``h`` under combiner ``u``."""
    sig = np.abs(np.vdot(u, h)) ** 2
    return float(sig / (np.real(np.vdot(u, R @ u)) - sig))


def _max_sinr_side(covs, chans, Fs, prev, kind, updates, flags):
    """One max-SINR half-step over all receivers of one direction."""
    out = []
    for i, (R, H, F) in enumerate(zip(covs, chans, Fs)):
        u, deg = _max_sinr_columns(R, H, F)
        if deg:
            flags.append(f"zero effective {kind} channel at node {i}")
        if updates is not None and prev is not None:
            for j in range(F.shape[1]):
                h = H @ F[:, j]
                updates.append((kind, _sinr_of(R, h, prev[i][:, j]), _sinr_of(R, h, u[:, j])))
        out.append(u)
    return out


def max_sinr(problem, d=None, opts=None):
    """Per-stream SINR maximization on the forward and reciprocal networks.

    Each combiner column maximizes its stream's SINR given all precoders;
    each precoder column does the same on the reciprocal network given all
    combiners.  Equal power ``P/d_b`` per stream.  The trace holds the
    minimum forward stream SINR after every iteration.
    """
    opts = opts or SchemeOptions()
    d = _stream_counts(problem, d)
    B, P = problem.B, problem.P
    power = [np.full(d[b], P / d[b]) for b in range(B)]
    updates = [] if opts.record_updates else None
    flags = []

    def forward(V, prev):
        F = [V[l] * np.sqrt(power[l]) for l in range(B)]
        covs = [_rx_cov(problem, F, k) + problem.sigma2[k] * np.eye(problem.nR[k])
                for k in range(B)]
        U = _max_sinr_side(covs, [problem.G[k][k] for k in range(B)], F, prev,
                           "combiner", updates, flags)
        sinr = min(_sinr_of(covs[k], problem.G[k][k] @ F[k][:, j], U[k][:, j])
                   for k in range(B) for j in range(d[k]))
        return U, sinr

    def reverse(U, prev):
        Uw = [U[k] * np.sqrt(power[k]) for k in range(B)]
        covs = [_tx_cov(problem, Uw, l) + problem.sigma2[l] * np.eye(problem.nT[l])
                for l in range(B)]
        return _max_sinr_side(covs, [problem.G[l][l].conj().T for l in range(B)], Uw, prev,
                              "precoder", updates, flags)

    V = _eigen_init(problem, d)
    U, _ = forward(V, None)
    trace = []
    iters = 0
    for iters in range(1, problem.max_iters + 1):
        V = reverse(U, V)
        U, sinr = forward(V, U)
        trace.append(sinr)
        if _converged(trace, problem.tol):
            break
    return _finish(problem, "max_sinr", V, power, U, trace=trace, iterations=iters,
                   flags=list(dict.fromkeys(flags)), updates=updates or [])


# ---------------------------------------------------------------------------
# WMMSE
# ---------------------------------------------------------------------------
def _mmse_weights(problem, F):
    """MMSE combiners and the Cholesky factors of the MSE-weight matrices."""
    B = problem.B
    U, L = [], []
    for k in range(B):
        R = _rx_cov(problem, F, k) + problem.sigma2[k] * np.eye(problem.nR[k])
        Hf = problem.G[k][k] @ F[k]
        u = np.linalg.solve(R, Hf)
        E = np.eye(F[k].shape[1]) - u.conj().T @ Hf
        E = 0.5 * (E + E.conj().T)
        W = np.linalg.inv(E)
        W = 0.5 * (W + W.conj().T)
        try:
            L.append(np.linalg.cholesky(W))
        except np.linalg.LinAlgError as exc:
            raise NumericalFailureError(f"MSE weight at MT {k} is not positive definite") from exc
        U.append(u)
    return U, L


def _power_constrained_solve(A, rhs, P):
    """Minimize ``tr(F^H A F) - 2 Re tr(rhs^H F)`` subject to ``||F||_F^2 <= P``.

    ``F = (A + mu I)^{-1} rhs`` with the multiplier ``mu >= 0`` found by
    bisection on the eigen-decomposition of ``A``.
    """
    lam, D = np.linalg.eigh(A)
    lam = np.clip(lam, 0.0, None)
    phi = D.conj().T @ rhs
    mass = np.sum(np.abs(phi) ** 2, axis=1)

    def norm2(mu):
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            terms = np.where(mass > 0, mass / (lam + mu) ** 2, 0.0)
        return float(np.sum(terms))

    tiny = 1e-12 * max(float(lam.max()), 1.0)
    if lam.min() > tiny and norm2(0.0) <= P:
        mu = 0.0
    else:
        hi = max(float(lam.max()), 1.0) * 1e-6
        for _ in range(_MAX_DOUBLINGS):
            if norm2(hi) <= P:
                break
            hi *= 2.0
        else:
            raise NumericalFailureError("no power multiplier bracket within 128 doublings")
        lo = 0.0
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if mid <= lo or mid >= hi:
                break
            if norm2(mid) <= P:
                hi = mid
            else:
                lo = mid
        mu = hi
    return D @ (phi / (lam + mu)[:, None])


def _wmmse_precoders(problem, U, L):
    B = problem.B
    UL = [U[k] @ L[k] for k in range(B)]
    F = []
    for l in range(B):
        A = _tx_cov(problem, UL, l)
        rhs = problem.G[l][l].conj().T @ (UL[l] @ L[l].conj().T)
        F.append(_power_constrained_solve(A, rhs, problem.P))
    return F


def _full_init(problem):
    d = [min(t, r) for t, r in zip(problem.nT, problem.nR)]
    V = _eigen_init(problem, d)
    return [V[b] * math.sqrt(problem.P / d[b]) for b in range(problem.B)]


def _converged(trace, tol):
    return len(trace) > 1 and abs(trace[-1] - trace[-2]) <= tol * max(abs(trace[-2]), 1e-300)


def _columns_to_streams(F):
    power = np.sum(np.abs(F) ** 2, axis=0)
    norms = np.sqrt(power)
    V = F / np.where(norms > 0, norms, 1.0)
    return V, power


def wmmse(problem, opts=None):
    """Weighted sum-MSE minimization with per-BS power constraints.

    Starts from ``min(nT, nR)`` eigen-beams per BS.  After the last
    iteration, streams whose power falls below ``1e-6 P`` are pruned.  The
    trace holds the design-channel sum rate after each iteration.
    """
    F = _full_init(problem)
    trace = []
    iters = 0
    for iters in range(1, problem.max_iters + 1):
        U, L = _mmse_weights(problem, F)
        F = _wmmse_precoders(problem, U, L)
        trace.append(design_sum_rate(problem, F))
        if _converged(trace, problem.tol):
            break
    V, p = [], []
    for b in range(problem.B):
        v, power = _columns_to_streams(F[b])
        keep = power >= _PRUNE_FRACTION * problem.P
        if not keep.any():
            keep[np.argmax(power)] = True
        V.append(v[:, keep])
        p.append(power[keep])
    U = mmse_combiner(problem, V, p)
    return _finish(problem, "wmmse", V, p, U, trace=trace, iterations=iters)


# ---------------------------------------------------------------------------
# Reconfigurable
# ---------------------------------------------------------------------------
def _mix(Fm, ego, lam):
    """Blend unit WMMSE columns with phase-aligned egoistic eigen-beams.

    Stream powers are those of the WMMSE columns.
    """
    V, power = _columns_to_streams(Fm)
    out = np.empty_like(Fm)
    for k in range(Fm.shape[1]):
        e = ego[:, k]
        if power[k] == 0:
            v = e
        else:
            inner = np.vdot(e, V[:, k])
            if inner != 0:
                e = e * (inner / abs(inner))
            v = lam * V[:, k] + (1.0 - lam) * e
            nv = np.linalg.norm(v)
            v = V[:, k] if nv == 0 else v / nv
        out[:, k] = v * math.sqrt(power[k])
    return out


def _reconfigurable_pass(problem, F, ego, lam):
    trace = []
    iters = 0
    for iters in range(1, problem.max_iters + 1):
        U, L = _mmse_weights(problem, F)
        Fm = _wmmse_precoders(problem, U, L)
        F = [_mix(Fm[b], ego[b][:, :Fm[b].shape[1]], lam) for b in range(problem.B)]
        trace.append(design_sum_rate(problem, F))
        if _converged(trace, problem.tol):
            break
    return F, trace, iters


def reconfigurable(problem, opts=None):
    """Two-part precoders with explicit stream adaptation.

    Combiners are system-wide MMSE.  Each precoder column blends the
    weighted-MMSE column (weight ``lam``) with the matching dominant
    right singular vector of the own link (weight ``1 - lam``).  After
    convergence, streams whose design SINR is below ``gamma_min_db`` are
    dropped and the iteration is re-run once from the surviving columns.
    """
    opts = opts or SchemeOptions()
    B = problem.B
    dmax = [min(t, r) for t, r in zip(problem.nT, problem.nR)]
    ego = [dominant_right_singular(problem.G[b][b], dmax[b]) for b in range(B)]
    F, trace, iters = _reconfigurable_pass(problem, _full_init(problem), ego, opts.lam)

    V, p = zip(*(_columns_to_streams(f) for f in F))
    U = mmse_combiner(problem, V, p)
    sinrs = design_stream_sinrs(problem, V, p, U)
    gamma = 10.0 ** (opts.gamma_min_db / 10.0)
    keep = []
    for b in range(B):
        k = sinrs[b] >= gamma
        if not k.any():
            k[np.argmax(sinrs[b])] = True
        keep.append(k)
    if any(not k.all() for k in keep):
        # ego columns follow the surviving streams so the pairing is kept
        F = [F[b][:, keep[b]] for b in range(B)]
        ego = [ego[b][:, keep[b]] for b in range(B)]
        F, trace2, iters2 = _reconfigurable_pass(problem, F, ego, opts.lam)
        trace = trace + trace2
        iters += iters2
    V, p = map(list, zip(*(_columns_to_streams(f) for f in F)))
    U = mmse_combiner(problem, V, p)
    return _finish(problem, "reconfigurable", V, p, U, trace=trace, iterations=iters)


# ---------------------------------------------------------------------------
# Non-coordinated baselines
# ---------------------------------------------------------------------------
def _eigen_beams(problem):
    d = [min(t, r) for t, r in zip(problem.nT, problem.nR)]
    V = _eigen_init(problem, d)
    p = [np.full(d[b], problem.P / d[b]) for b in range(problem.B)]
    return V, p


def full_reuse_baseline(problem, opts=None):
    """Interference-agnostic eigen-beamforming on every own link, equal power."""
    V, p = _eigen_beams(problem)
    U = mmse_combiner(problem, V, p)
    return _finish(problem, "full_reuse", V, p, U)


def orthogonal_baseline(problem, opts=None):
    """Eigen-beamforming on orthogonal resources: no ICI, prelog ``1/B``."""
    V, p = _eigen_beams(problem)
    U = mmse_combiner(problem, V, p, orthogonal=True)
    return _finish(problem, "orthogonal", V, p, U, orthogonal=True)


#: Scheme name -> (design function, takes preset stream counts)
SCHEMES = {
    "ia": (ia_min_leakage, True),
    "max_sinr": (max_sinr, True),
    "wmmse": (wmmse, False),
    "reconfigurable": (reconfigurable, False),
    "full_reuse": (full_reuse_baseline, False),
    "orthogonal": (orthogonal_baseline, False),
}

#: Schemes whose design noise floor includes the expected OCI power.
OCI_AWARE = frozenset({"max_sinr", "wmmse", "reconfigurable"})
