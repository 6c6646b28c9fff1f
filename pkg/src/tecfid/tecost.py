"""Time-energy cost of channels and uncertainty-bound calculators.

The cost of a unitary is the largest principal eigen-angle magnitude; the
cost of a channel with Kraus operators ``K_j`` is

    ||K|| = arccos( max_{|v| <= 1} lambda_min( (K_v + K_v^dag)/2 ) ),

with ``K_v = sum_j v_j K_j``.  The inner objective ``g(v)`` is concave and
positively homogeneous on the ball, so the maximum over the ball equals the
sphere maximum clamped at zero and a first-order ascent is globally
convergent.  Plain subgradient steps stall at the rate ``O(1/sqrt(k))``
whenever the optimal ``lambda_min`` is degenerate (which is the rule for
highly symmetric channels), so the solver ascends a Gibbs-smoothed
surrogate ``-mu log tr exp(-H(v)/mu)`` with ``mu`` driven from 1e-1 down to
1e-10.  The smoothed supergradient is ``conj(m(sigma))`` with
``m_j = tr(sigma K_j)`` for the Gibbs density ``sigma``; since
``g(u) <= Re <conj(m), u>`` for every density, ``|m(sigma)|`` is a rigorous
upper bound on the ball maximum and certifies global optimality even at
degenerate optima.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import matcore
from .channels import KrausChannel, unitary_channel
from .errors import (
    BadIntervalError,
    DimensionMismatchError,
    NotHermitianError,
    NotUnitVectorError,
    OutOfRangeError,
)
from .fidelity import depolarizing_fmin_closed_form

# Leading coefficient of the orthogonalization-time estimate for the
# time-energy uncertainty relation expressed through energy above the
# ground state (compare: pi*hbar/(2*E) through the spread).
MEAN_ENERGY_TIME_CONSTANT = 0.724611

# |g| at or below this threshold is classified as the boundary regime.
REGIME_EPS = 1e-9

_MU_SCHEDULE = (1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8, 1e-9, 1e-10)
_MU_SCHEDULE_SPHERE = (1e-2, 1e-4, 1e-6, 1e-8, 1e-10)


@dataclass(frozen=True)
class CostOptions:
    """Knobs for `channel_cost`.  ``iters`` caps accepted ascent steps across
    all smoothing stages, ``restarts`` is the sphere multistart count used
    when the ball maximum is not strictly positive, ``step_c`` scales the
    first trial step, ``tol`` is the certificate gap for convergence."""

    iters: int = 20_000
    restarts: int = 64
    step_c: float = 1.0
    tol: float = 1e-9
    seed: int | np.random.SeedSequence = 0
    hbar: float = 1.0


@dataclass(frozen=True)
class TECostResult:
    """Solver outcome.  ``cos_value`` is the best sphere value of the inner
    objective (its clamp at zero is the cosine of the cost), ``angle`` is
    ``arccos`` of it, ``optimal_v`` the best unit weight vector, ``witness``
    the matching minimal eigenvector, ``regime`` one of ``positive``,
    ``nonpositive``, ``boundary``."""

    cos_value: float
    angle: float
    optimal_v: np.ndarray
    witness: np.ndarray
    converged: bool
    regime: str
    certificate_gap: float


@dataclass(frozen=True)
class TeurReport:
    """Energies, time, cost and fidelity entering the uncertainty bound
    ``t * delta_e >= hbar * arccos(fidelity)``."""

    e_max: float
    e_min: float
    time: float
    hbar: float
    cost: float
    fidelity: float
    bound_satisfied: bool
    delta_e: float


def cost_objective(channel: KrausChannel, v) -> float:
    """Inner objective ``g(v) = lambda_min((K_v + K_v^dag)/2)`` (any ``v``)."""
    w = np.asarray(v, dtype=np.complex128).reshape(-1)
    if w.size != channel.d:
        raise DimensionMismatchError(
            f"weight vector has length {w.size}, channel has {channel.d} operators"
        )
    kv = np.einsum("j,jab->ab", w, channel.kraus)
    return float(np.linalg.eigvalsh((kv + kv.conj().T) / 2.0)[0])


def _herm_combination(kraus: np.ndarray, v: np.ndarray) -> np.ndarray:
    kv = np.einsum("j,jab->ab", v, kraus)
    return (kv + kv.conj().T) / 2.0


def _smoothed_full(kraus, v, mu):
    """g_mu, exact lambda_min, Gibbs trace vector m, eigenvectors at v."""
    lam, vecs = np.linalg.eigh(_herm_combination(kraus, v))
    w = np.exp(-(lam - lam[0]) / mu)
    z = float(w.sum())
    g_mu = float(lam[0] - mu * np.log(z))
    sigma = (vecs * (w / z)) @ vecs.conj().T
    mvec = np.einsum("ab,jba->j", sigma, kraus)
    return g_mu, float(lam[0]), mvec, vecs


def _smoothed_value(kraus, v, mu):
    lam = np.linalg.eigvalsh(_herm_combination(kraus, v))
    w = np.exp(-(lam - lam[0]) / mu)
    return float(lam[0] - mu * np.log(float(w.sum()))), float(lam[0])


def _project(v: np.ndarray, sphere: bool) -> np.ndarray:
    nrm = float(np.linalg.norm(v))
    if sphere:
        return v / nrm if nrm > 1e-14 else v
    return v / nrm if nrm > 1.0 else v


class _Aggregate:
    """Best sphere value / argument and the running duality upper bound."""

    def __init__(self):
        self.g_best = -np.inf
        self.v_best = None
        self.ub = np.inf

    def observe(self, v: np.ndarray, lam0: float):
        nv = float(np.linalg.norm(v))
        if nv > 1e-12:
            cand = lam0 / nv  # lambda_min is linear in the scale of v
            if cand > self.g_best:
                self.g_best = cand
                self.v_best = v / nv

    def observe_ub(self, mvec: np.ndarray):
        self.ub = min(self.ub, float(np.linalg.norm(mvec)))

    def gap(self) -> float:
        return self.ub - max(self.g_best, 0.0)


def _stage(kraus, v, mu, cap, trial, agg: _Aggregate, sphere: bool):
    """One smoothing stage of projected gradient ascent with Armijo
    backtracking; Barzilai-Borwein corrected trial steps.  Returns the final
    iterate, the next trial step and the accepted-step count."""
    g_mu, lam0, mvec, _ = _smoothed_full(kraus, v, mu)
    agg.observe(v, lam0)
    agg.observe_ub(mvec)
    it = 0
    while it < cap:
        grad = mvec.conj()
        t = trial
        accepted = False
        w = v
        for _ in range(48):
            w = _project(v + t * grad, sphere)
            diff = w - v
            pred = float(np.real(np.vdot(grad, diff)))
            if pred <= 1e-17:
                break
            g_new, _ = _smoothed_value(kraus, w, mu)
            if g_new >= g_mu + 1e-4 * pred:
                accepted = True
                break
            t *= 0.5
        it += 1
        if not accepted:
            break
        g_mu, lam0, mvec_new, _ = _smoothed_full(kraus, w, mu)
        agg.observe(w, lam0)
        agg.observe_ub(mvec_new)
        s = w - v
        y = mvec_new.conj() - grad
        sy = float(np.real(np.vdot(s, y)))
        ss = float(np.real(np.vdot(s, s)))
        trial = min(max(ss / abs(sy), 1e-8), 1e3) if abs(sy) > 1e-300 else min(2.0 * t, 1e3)
        v, mvec = w, mvec_new
        if np.linalg.norm(s) <= 1e-14:
            break
    return v, trial, it


def _alternating_polish(kraus, v0, agg: _Aggregate, rounds: int = 200):
    """Fixed-point iteration v -> +-conj(c(psi))/|c| with psi the minimal
    eigenvector at v; the sign keeps the iterate in its basin (stationary
    points satisfy conj(c) = lambda_min v, and lambda_min may be negative).
    Converges fast when the optimal lambda_min is simple; under degeneracy
    it may cycle, which is harmless since only improvements are kept by the
    aggregate."""
    v = v0
    for _ in range(rounds):
        lam, vecs = np.linalg.eigh(_herm_combination(kraus, v))
        agg.observe(v, float(lam[0]))
        psi = vecs[:, 0]
        c = np.einsum("a,jab,b->j", psi.conj(), kraus, psi)
        agg.observe_ub(c)
        nc = float(np.linalg.norm(c))
        if nc < 1e-14:
            break
        v_new = c.conj() / nc
        if float(np.real(np.vdot(v_new, v))) < 0.0:
            v_new = -v_new
        if np.linalg.norm(v_new - v) < 1e-15:
            break
        v = v_new


def _min_mvec_on_subspace(kraus, basis, iters: int = 300):
    """Density on the given isometry columns minimizing ||m(sigma)||; any
    such sigma upper-bounds the ball maximum of g.  The squared norm is
    convex in sigma and the factorization below is full size on the
    subspace, so plain Barzilai-Borwein descent suffices.  Returns
    (norm, m, S) with S the minimizing density in subspace coordinates."""
    k = basis.shape[1]
    bj = np.einsum("ap,jab,bq->jpq", basis.conj(), kraus, basis)

    def eval_all(w):
        t = float(np.real(np.vdot(w, w)))
        sigma = (w @ w.conj().T) / t
        m = np.einsum("pq,jqp->j", sigma, bj)
        h = float(np.real(np.vdot(m, m)))
        cmat = np.einsum("j,jpq->pq", m.conj(), bj)
        cmat = cmat + cmat.conj().T
        # Tr(sigma C) = 2h, which sets the normalization part of the chain
        # rule through sigma = W W^dag / tr.
        grad = 2.0 * (cmat @ w - 2.0 * h * w) / t
        return h, sigma, m, grad

    w = np.eye(k, dtype=np.complex128) / np.sqrt(k)
    h, sig, m, g = eval_all(w)
    best = (float(np.linalg.norm(m)), m, sig)
    trial = 1.0
    for _ in range(iters):
        gn2 = float(np.real(np.vdot(g, g)))
        if gn2 <= 1e-30:
            break
        t = trial
        accepted = False
        for _ in range(40):
            w2 = w - t * g
            h2, sig2, m2, g2 = eval_all(w2)
            if h2 <= h - 1e-4 * t * gn2:
                accepted = True
                break
            t *= 0.5
        if not accepted:
            break
        s = (w2 - w).reshape(-1)
        y = (g2 - g).reshape(-1)
        sy = float(np.real(np.vdot(s, y)))
        ss = float(np.real(np.vdot(s, s)))
        trial = min(max(ss / sy, 1e-10), 1e6) if sy > 1e-300 else min(2.0 * t, 1e6)
        w, h, sig, m, g = w2, h2, sig2, m2, g2
        nm = float(np.linalg.norm(m))
        if nm < best[0]:
            best = (nm, m, sig)
    return best


def _herm_kernel_candidate(kraus) -> np.ndarray:
    """Unit v minimizing ||(K_v + K_v^dag)/2||_F (exact, via the real Gram
    matrix of the Hermitian parts).  When the sphere maximum of g is zero
    this often lands on an optimizer directly."""
    d = kraus.shape[0]
    herm = (kraus + kraus.conj().transpose(0, 2, 1)) / 2.0
    skew = 1j * (kraus - kraus.conj().transpose(0, 2, 1)) / 2.0
    c = np.concatenate([herm, skew])
    gram = np.einsum("pab,qba->pq", c, c).real
    _, vecs = np.linalg.eigh((gram + gram.T) / 2.0)
    x = vecs[:, 0]
    v = x[:d] + 1j * x[d:]
    nrm = float(np.linalg.norm(v))
    return v / nrm if nrm > 1e-14 else np.ones(d, dtype=np.complex128) / np.sqrt(d)


def _kkt_refine(kraus, v0, agg: _Aggregate, window: float = 1e-5, rounds: int = 40, k_override: int | None = None):
    """Damped Gauss-Newton solve of the stationarity system at a (possibly
    degenerate) sphere optimum:

        H(v) Y = t Y,  Y^dag Y = I_k,  conj(m(Y S Y^dag)) = t v,
        tr S = 1,  ||v|| = 1,

    with k the near-ground multiplicity at the seed.  First-order ascent is
    sublinear exactly when the ground eigenvalue coalesces, while this
    system is smooth there, so a few steps recover machine precision.  The
    seed stalls before its coalescing eigenvalues close completely, so the
    narrow spectral window can undercount k; candidate multiplicities are
    tried in turn and an attempt only counts when it converges without
    dropping below the seed value (a drop means the iteration left the
    seed's basin for a different stationary point).  Updates the aggregate
    with the refined sphere value and with the duality bound from the
    subspace witness density.  Returns (residual norm, refined sphere
    value or None)."""
    d, n, _ = kraus.shape
    lam, vecs = np.linalg.eigh(_herm_combination(kraus, v0))
    if k_override is not None:
        k_list = [int(k_override)]
    else:
        k_narrow = int(np.sum(lam - lam[0] <= window))
        k_wide = int(np.sum(lam - lam[0] <= 1e-3))
        k_list = list(dict.fromkeys([k_narrow, k_wide, 1]))
    t0 = float(lam[0])

    def attempt(k):
        y0 = vecs[:, :k]
        _, _, s0 = _min_mvec_on_subspace(kraus, y0)
        nu = k * (k - 1) // 2
        idx = np.triu_indices(k, 1)
        off_v = 2 * d
        off_y = off_v + 2 * n * k
        off_s = off_y + k * k

        def pack(v, y, s, t):
            parts = [
                v.real,
                v.imag,
                y.real.reshape(-1),
                y.imag.reshape(-1),
                np.diag(s).real,
                s[idx].real,
                s[idx].imag,
                [t],
            ]
            return np.concatenate([np.asarray(p, dtype=np.float64).reshape(-1) for p in parts])

        def unpack(x):
            v = x[:d] + 1j * x[d:off_v]
            y = (x[off_v : off_v + n * k] + 1j * x[off_v + n * k : off_y]).reshape(n, k)
            s = np.zeros((k, k), dtype=np.complex128)
            s[np.diag_indices(k)] = x[off_y : off_y + k]
            s[idx] = x[off_y + k : off_y + k + nu] + 1j * x[off_y + k + nu : off_s]
            s = s + np.triu(s, 1).conj().T
            return v, y, s, float(x[off_s])

        def residual(x):
            v, y, s, t = unpack(x)
            h = _herm_combination(kraus, v)
            r1 = h @ y - t * y
            r2 = y.conj().T @ y - np.eye(k)
            sigma = y @ s @ y.conj().T
            m = np.einsum("ab,jba->j", sigma, kraus)
            r3 = m.conj() - t * v
            r4 = float(np.real(np.trace(s))) - 1.0
            r5 = float(np.real(np.vdot(v, v))) - 1.0
            return np.concatenate(
                [
                    r1.real.reshape(-1),
                    r1.imag.reshape(-1),
                    r2.real.reshape(-1),
                    r2.imag.reshape(-1),
                    r3.real,
                    r3.imag,
                    [r4, r5],
                ]
            )

        x = pack(v0 / np.linalg.norm(v0), y0, s0, t0)
        r = residual(x)
        rn = float(np.linalg.norm(r))
        eps = 1e-7
        for _ in range(rounds):
            if rn <= 1e-13:
                break
            cols = []
            for i in range(x.size):
                xp = x.copy()
                xp[i] += eps
                xm = x.copy()
                xm[i] -= eps
                cols.append((residual(xp) - residual(xm)) / (2.0 * eps))
            jac = np.stack(cols, axis=1)
            # Gauge freedom makes the system rank deficient; truncate
            # singular values down at the finite-difference noise floor or
            # the step blows up along noise directions.
            step, *_ = np.linalg.lstsq(jac, -r, rcond=1e-8)
            improved = False
            for _ in range(25):
                x2 = x + step
                r2 = residual(x2)
                rn2 = float(np.linalg.norm(r2))
                if rn2 < rn:
                    x, r, rn = x2, r2, rn2
                    improved = True
                    break
                step *= 0.5
            if not improved:
                break

        v, _, _, _ = unpack(x)
        nv = float(np.linalg.norm(v))
        if nv <= 1e-12:
            return rn, None, None
        v = v / nv
        lam2, vecs2 = np.linalg.eigh(_herm_combination(kraus, v))
        return rn, v, (float(lam2[0]), lam2, vecs2)

    fallback = (np.inf, None)
    for k in k_list:
        if not 1 <= k <= n:
            continue
        rn, v, out = attempt(k)
        if out is None or out[0] < t0 - 1e-7:
            continue
        value, lam2, vecs2 = out
        agg.observe(v, value)
        # The unconstrained stationary S need not be PSD, so take the
        # duality bound from the convex subspace problem at the refined
        # point instead.
        span = vecs2[:, lam2 - lam2[0] <= window]
        ubn, _, _ = _min_mvec_on_subspace(kraus, span)
        agg.ub = min(agg.ub, ubn)
        if rn <= 1e-9:
            return rn, value
        if rn < fallback[0]:
            fallback = (rn, value)
    return fallback


def channel_cost(channel: KrausChannel, options: CostOptions | None = None) -> TECostResult:
    """Time-energy cost solver.

    Phase A ascends the smoothed objective over the unit ball from the
    uniform weight vector and terminates early once the duality gap closes.
    An alternating polish sharpens simple-eigenvalue optima.  If the best
    sphere value is not strictly positive the ball maximum is the clamp at
    zero and a sphere multistart (basis vectors, the Hermitian-part kernel
    direction and seeded random starts) recovers the best-effort raw value.
    """
    opts = options or CostOptions()
    kraus = channel.kraus
    d = channel.d
    agg = _Aggregate()

    stage_cap = max(60, opts.iters // (2 * len(_MU_SCHEDULE)))
    v = np.ones(d, dtype=np.complex128) / np.sqrt(d)
    trial = float(opts.step_c)
    used = 0
    for mu in _MU_SCHEDULE:
        v, trial, it = _stage(kraus, v, mu, stage_cap, trial, agg, sphere=False)
        used += it
        if agg.gap() <= opts.tol:
            break
    if agg.v_best is not None:
        _alternating_polish(kraus, agg.v_best, agg)
        if agg.gap() > opts.tol and agg.g_best > REGIME_EPS:
            # First-order ascent stalls at coalescing ground eigenvalues,
            # leaving the duality gap open; the stationarity solve closes it.
            _kkt_refine(kraus, agg.v_best, agg)

    kkt_res = np.inf
    refined: list[float] = []
    if agg.g_best <= REGIME_EPS:
        seed = opts.seed
        ss = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
        starts = [_herm_kernel_candidate(kraus)]
        eye = np.eye(d, dtype=np.complex128)
        starts.extend(eye[j] for j in range(d))
        if agg.v_best is not None:
            starts.append(agg.v_best)
        total = max(int(opts.restarts), len(starts))
        for child in ss.spawn(total - len(starts)):
            rng = np.random.default_rng(child)
            r = rng.standard_normal(d) + 1j * rng.standard_normal(d)
            starts.append(r / np.linalg.norm(r))
        remaining = max(opts.iters - used, 50 * len(starts))
        cand_cap = max(50, remaining // (len(starts) * len(_MU_SCHEDULE_SPHERE)))
        records = []
        for v0 in starts:
            local = _Aggregate()
            vv, tr = v0, float(opts.step_c)
            for mu in _MU_SCHEDULE_SPHERE:
                vv, tr, _ = _stage(kraus, vv, mu, cand_cap, tr, local, sphere=True)
            if local.v_best is not None:
                _alternating_polish(kraus, local.v_best, local)
                records.append((local.g_best, local.v_best))
            agg.ub = min(agg.ub, local.ub)
        # Refine the leading candidates to their exact stationary values;
        # same-basin candidates then agree to machine precision while
        # distinct basins stay separated, which is what the consensus test
        # below relies on.  A refinement that degrades the raw value left
        # its basin, so keep the raw value in that case.
        records.sort(key=lambda rec: -rec[0])
        for val, vb in records[:3]:
            loc = _Aggregate()
            rn, rv = _kkt_refine(kraus, vb, loc)
            if rv is None or rv < val - 1e-7:
                refined.append(val)
                continue
            kkt_res = min(kkt_res, rn)
            refined.append(rv)
            if rv > agg.g_best:
                agg.g_best, agg.v_best = rv, loc.v_best
            agg.ub = min(agg.ub, loc.ub)
        for val, _ in records[3:]:
            refined.append(val)
        if records and records[0][0] > agg.g_best:
            agg.g_best, agg.v_best = records[0]

    v_opt = agg.v_best
    lam, vecs = np.linalg.eigh(_herm_combination(kraus, v_opt))
    cos_value = agg.g_best
    certificate_gap = abs(cos_value - float(lam[0]))
    witness = matcore.fix_phase(vecs[:, 0])
    angle = float(np.arccos(np.clip(cos_value, -1.0, 1.0)))

    if cos_value > REGIME_EPS:
        regime = "positive"
        converged = agg.gap() <= max(opts.tol, 1e-9)
    else:
        regime = "boundary" if cos_value >= -REGIME_EPS else "nonpositive"
        gap_ok = agg.gap() <= max(opts.tol, 1e-9)
        top = sorted(refined, reverse=True)
        # Refined same-basin values agree to ~1e-12 while distinct basins
        # differ at the 1e-3 scale, so the agreement test separates them.
        consensus = len(top) >= 2 and top[0] - top[1] <= 1e-8
        if regime == "boundary":
            converged = gap_ok or consensus or kkt_res <= 1e-9
        else:
            converged = consensus and kkt_res <= 1e-9

    return TECostResult(
        cos_value=float(cos_value),
        angle=angle,
        optimal_v=v_opt,
        witness=witness,
        converged=bool(converged),
        regime=regime,
        certificate_gap=float(certificate_gap),
    )


def unitary_cost(u, tol: float = 1e-10) -> float:
    """Cost of a unitary: largest magnitude among its principal eigen-angles."""
    theta = matcore.unitary_eigenangles(u, tol)
    return float(np.max(np.abs(theta)))


def unitary_channel_cost(u, tol: float = 1e-10, options: CostOptions | None = None) -> float:
    """Cost of the channel ``rho -> U rho U^dag``.

    When every eigen-angle satisfies ``|theta| <= pi/2`` the cost reduces to
    half the angular spread ``(theta_max - theta_min)/2``; otherwise the
    general channel solver takes over.
    """
    theta = matcore.unitary_eigenangles(u, tol)
    if float(np.max(np.abs(theta))) <= np.pi / 2.0 + 1e-12:
        return float((theta[-1] - theta[0]) / 2.0)
    return channel_cost(unitary_channel(u, tol), options).angle


def depolarizing_cost_closed_form(n: int, q: float) -> float:
    """``arccos(sqrt(q + (1 - q)/n^2))``."""
    return float(np.arccos(np.clip(depolarizing_fmin_closed_form(n, q), 0.0, 1.0)))


def hamiltonian_energies_from_unitary(u, t: float, hbar: float = 1.0) -> np.ndarray:
    """Energies ``hbar * theta_j / t`` of a Hamiltonian generating ``U`` in
    time ``t`` (principal branch), ascending."""
    if t <= 0.0:
        raise BadIntervalError(f"time must be positive, got {t}")
    theta = matcore.unitary_eigenangles(u)
    return hbar * theta / t


def cost_energy_product(e_max: float, e_min: float, t: float, hbar: float = 1.0) -> float:
    """Cost of evolving for time ``t`` under a Hamiltonian with spectral
    extremes ``e_max, e_min``: ``(e_max - e_min) * t / (2 hbar)``."""
    if e_max < e_min:
        raise BadIntervalError(f"e_max {e_max} < e_min {e_min}")
    if t <= 0.0:
        raise BadIntervalError(f"time must be positive, got {t}")
    return (e_max - e_min) * t / (2.0 * hbar)


def fastest_state_time(fidelity: float, e_max: float, e_min: float, hbar: float = 1.0) -> float:
    """Shortest time to reach entanglement fidelity ``F``:
    ``2 hbar arccos(F) / (e_max - e_min)``."""
    if not 0.0 <= fidelity <= 1.0:
        raise OutOfRangeError(f"fidelity must lie in [0, 1], got {fidelity}")
    if e_max <= e_min:
        raise BadIntervalError(f"e_max {e_max} must exceed e_min {e_min}")
    return 2.0 * hbar * float(np.arccos(fidelity)) / (e_max - e_min)


def orthogonalization_time(e_max: float, e_min: float, hbar: float = 1.0) -> float:
    """Shortest time to reach zero fidelity: ``pi hbar / (e_max - e_min)``."""
    if e_max <= e_min:
        raise BadIntervalError(f"e_max {e_max} must exceed e_min {e_min}")
    return np.pi * hbar / (e_max - e_min)


def orthogonalization_estimates(epsilon: float, hbar: float = 1.0) -> tuple[float, float]:
    """Orthogonalization-time estimates from mean energy above the ground
    state (``hbar/(A*epsilon)``) and from the spread bound
    (``pi*hbar/(2*epsilon)``); the latter is larger."""
    if epsilon <= 0.0:
        raise OutOfRangeError(f"energy scale must be positive, got {epsilon}")
    return hbar / (MEAN_ENERGY_TIME_CONSTANT * epsilon), np.pi * hbar / (2.0 * epsilon)


def energy_spread(h, rho) -> float:
    """Standard deviation ``sqrt(tr(H^2 rho) - tr(H rho)^2)``; radicands in
    ``(-1e-12, 0)`` clamp to zero."""
    hm = matcore.as_square_matrix(h)
    defect = matcore.hermiticity_defect(hm)
    if not defect <= 1e-10:
        raise NotHermitianError(defect, 1e-10)
    r = matcore.as_square_matrix(rho)
    if r.shape != hm.shape:
        raise DimensionMismatchError(f"shape mismatch: {hm.shape} vs {r.shape}")
    mean = float(np.real(np.trace(hm @ r)))
    second = float(np.real(np.trace(hm @ hm @ r)))
    var = second - mean * mean
    if var < -1e-12:
        raise OutOfRangeError(f"negative energy variance {var}; rho is not a density matrix")
    return float(np.sqrt(max(var, 0.0)))


def bures_angle(psi1, psi2) -> float:
    """``arccos |<psi1|psi2>|`` for unit vectors."""
    a = np.asarray(psi1, dtype=np.complex128).reshape(-1)
    b = np.asarray(psi2, dtype=np.complex128).reshape(-1)
    if a.size != b.size:
        raise DimensionMismatchError(f"state dimensions differ: {a.size} vs {b.size}")
    for v in (a, b):
        if abs(np.linalg.norm(v) - 1.0) > 1e-8:
            raise NotUnitVectorError("states must be normalized")
    return float(np.arccos(np.clip(abs(np.vdot(a, b)), 0.0, 1.0)))


def teur_bound_check(h, psi, t: float, hbar: float = 1.0) -> TeurReport:
    """Evolve ``psi`` under ``H`` for time ``t`` and check the uncertainty
    bound ``t * delta_e >= hbar * arccos(F)`` (slack 1e-9)."""
    if t <= 0.0:
        raise BadIntervalError(f"time must be positive, got {t}")
    lam, vecs = matcore.hermitian_eigen(h)
    v = np.asarray(psi, dtype=np.complex128).reshape(-1)
    if v.size != lam.size:
        raise DimensionMismatchError(
            f"state dimension {v.size} does not match Hamiltonian dimension {lam.size}"
        )
    if abs(np.linalg.norm(v) - 1.0) > 1e-10:
        raise NotUnitVectorError("state must be normalized")
    psi_t = vecs @ (np.exp(-1j * lam * t / hbar) * (vecs.conj().T @ v))
    fid = float(np.clip(abs(np.vdot(v, psi_t)), 0.0, 1.0))
    de = energy_spread((vecs * lam) @ vecs.conj().T, np.outer(v, v.conj()))
    return TeurReport(
        e_max=float(lam[-1]),
        e_min=float(lam[0]),
        time=float(t),
        hbar=float(hbar),
        cost=(float(lam[-1]) - float(lam[0])) * t / (2.0 * hbar),
        fidelity=fid,
        bound_satisfied=bool(t * de >= hbar * np.arccos(fid) - 1e-9),
        delta_e=de,
    )
