"""Entanglement fidelity and the worst-case (minimum) fidelity solver.

For a channel with Kraus operators ``K_j`` and input ``rho`` the
entanglement fidelity is

    F_e(rho) = sqrt( sum_j |tr(rho K_j)|^2 ).

Its minimum over all inputs is the worst-case fidelity ``F_min``.  Since
``F_e^2`` is convex in ``rho`` the minimizer is generally a mixed state, so
the descent runs over joint pure states ``Psi`` on system x ancilla (the
ancilla dimension ``n`` suffices to purify anything): with
``c_j = <Psi|(I (x) K_j)|Psi> = tr(rho_B K_j)`` the objective is
``f(Psi) = sum_j |c_j|^2`` and ``F_min = sqrt(min f)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import matcore
from .channels import KrausChannel, maximally_entangled, reduced_state
from .errors import (
    DimensionMismatchError,
    OutOfRangeError,
    UnsupportedDimensionError,
    ZeroFidelityError,
)

# Below this value the solver reports the fidelity as possibly exactly zero
# and leaves the optimal weight vector undefined.
ZERO_FIDELITY_CUTOFF = 1e-7

# Gradient norm at which a stalled line search still counts as converged.
_STALL_GRAD_NORM = 1e-7


@dataclass(frozen=True)
class SolverOptions:
    """Knobs for `fmin_descent`; the defaults are tuned for dimensions up to
    about twelve and favor certainty over speed."""

    restarts: int = 32
    max_iters: int = 10_000
    grad_tol: float = 1e-10
    seed: int | np.random.SeedSequence = 0


@dataclass(frozen=True)
class FidelityResult:
    """Outcome of the worst-case fidelity search.

    ``minimizer`` is a joint pure state of length ``n*n`` (ancilla major,
    index ``a*n + b``) with its global phase fixed; the worst-case input
    density is its B-reduction.  ``optimal_w`` is None when the value is
    flagged as possibly zero.
    """

    value: float
    minimizer: np.ndarray
    optimal_w: np.ndarray | None
    iterations: int
    restarts_used: int
    converged: bool
    gradient_norm: float
    possibly_zero: bool

    def minimizer_density(self) -> np.ndarray:
        n = int(round(np.sqrt(self.minimizer.size)))
        return reduced_state(self.minimizer, n, n)


def _trace_coeffs(rho: np.ndarray, kraus: np.ndarray) -> np.ndarray:
    """Vector of tr(rho K_j)."""
    return np.einsum("bc,icb->i", rho, kraus)


def entanglement_fidelity(rho, channel: KrausChannel) -> float:
    """``sqrt(sum_j |tr(rho K_j)|^2)`` for a density matrix input."""
    r = matcore.as_square_matrix(rho)
    if r.shape[0] != channel.n:
        raise DimensionMismatchError(
            f"state dimension {r.shape[0]} does not match channel dimension {channel.n}"
        )
    c = _trace_coeffs(r, channel.kraus)
    return float(np.sqrt(np.sum(np.abs(c) ** 2)))


def entanglement_fidelity_direct(psi_ab, channel: KrausChannel) -> float:
    """Entanglement fidelity evaluated on a joint pure state without forming
    the reduced density matrix: ``sqrt(sum_j |<Psi|(I (x) K_j)|Psi>|^2)``."""
    v = np.asarray(psi_ab, dtype=np.complex128).reshape(-1)
    n = channel.n
    if v.size % n != 0 or v.size == 0:
        raise DimensionMismatchError(
            f"joint state length {v.size} is not a multiple of the channel dimension {n}"
        )
    m = v.reshape(-1, n)
    c = np.einsum("ac,ab,icb->i", m.conj(), m, channel.kraus)
    return float(np.sqrt(np.sum(np.abs(c) ** 2)))


def optimal_w(rho, channel: KrausChannel) -> np.ndarray:
    """Weight vector maximizing ``|sum_j w_j tr(rho K_j)|`` over unit ``w``:
    the phase-conjugated, normalized trace vector (Cauchy-Schwarz)."""
    r = matcore.as_square_matrix(rho)
    if r.shape[0] != channel.n:
        raise DimensionMismatchError(
            f"state dimension {r.shape[0]} does not match channel dimension {channel.n}"
        )
    t = _trace_coeffs(r, channel.kraus)
    nrm = np.linalg.norm(t)
    if nrm < 1e-14:
        raise ZeroFidelityError("all trace coefficients vanish; weight undefined")
    return t.conj() / nrm


def fidelity_objective(psi_ab, channel: KrausChannel) -> float:
    """Squared entanglement fidelity of the joint state's B-reduction."""
    return entanglement_fidelity_direct(psi_ab, channel) ** 2


def fidelity_gradient(psi_ab, channel: KrausChannel) -> np.ndarray:
    """Euclidean gradient of the squared-fidelity objective with respect to
    the conjugate coordinates: ``sum_j [conj(c_j) (I (x) K_j) Psi +
    c_j (I (x) K_j)^dag Psi]``.  The real gradient with respect to
    ``(Re Psi, Im Psi)`` is twice its real/imaginary parts."""
    v = np.asarray(psi_ab, dtype=np.complex128).reshape(-1)
    n = channel.n
    if v.size % n != 0 or v.size == 0:
        raise DimensionMismatchError(
            f"joint state length {v.size} is not a multiple of the channel dimension {n}"
        )
    m = v.reshape(-1, n)
    kraus = channel.kraus
    c = np.einsum("ac,ab,icb->i", m.conj(), m, kraus)
    b = np.einsum("i,iab->ab", c.conj(), kraus) + np.einsum("i,iba->ab", c, kraus.conj())
    return (m @ b.T).reshape(-1)


def _descend(kraus: np.ndarray, m0: np.ndarray, opts: SolverOptions):
    """Riemannian gradient descent on the unit sphere of joint states.

    Works on the (dim_a, n) matrix form; Armijo backtracking with the
    previous accepted step (Barzilai-Borwein corrected) as the next trial.
    Returns (f, M, iterations, gradient_norm, converged).
    """

    def evaluate(m):
        rho = np.einsum("ab,ac->bc", m, m.conj())
        c = np.einsum("bc,icb->i", rho, kraus)
        f = float(np.sum(np.abs(c) ** 2))
        return f, c

    def gradient(m, c):
        b = np.einsum("i,iab->ab", c.conj(), kraus) + np.einsum(
            "i,iba->ab", c, kraus.conj()
        )
        g = m @ b.T
        # Tangent projection: <M, grad>_F is real (= 2f), remove it.
        return g - np.real(np.vdot(m, g)) * m

    m = m0
    f, c = evaluate(m)
    g = gradient(m, c)
    gnorm = float(np.linalg.norm(g))
    trial = 1.0
    iters = 0
    while iters < opts.max_iters:
        if gnorm <= opts.grad_tol:
            return f, m, iters, gnorm, True
        t = trial
        accepted = False
        for _ in range(60):
            cand = m - t * g
            nrm = np.linalg.norm(cand)
            if nrm > 1e-12:
                cand = cand / nrm
                f_new, c_new = evaluate(cand)
                if f_new <= f - 1e-4 * t * gnorm * gnorm:
                    accepted = True
                    break
            t *= 0.5
        iters += 1
        if not accepted:
            break
        g_new = gradient(cand, c_new)
        s = (cand - m).reshape(-1)
        y = (g_new - g).reshape(-1)
        sy = float(np.real(np.vdot(s, y)))
        ss = float(np.real(np.vdot(s, s)))
        trial = min(max(ss / sy, 1e-8), 1e3) if sy > 1e-300 else min(t * 2.0, 1e3)
        m, f, c, g = cand, f_new, c_new, g_new
        gnorm = float(np.linalg.norm(g))
    # A failed line search at a tiny gradient is the float64 resolution
    # floor, not a saddle: the value error there is O(gnorm^2), far below
    # the 1e-7 reporting scale.
    return f, m, iters, gnorm, gnorm <= max(opts.grad_tol, _STALL_GRAD_NORM)


def fmin_descent(channel: KrausChannel, options: SolverOptions | None = None) -> FidelityResult:
    """Worst-case entanglement fidelity by multi-start Riemannian descent.

    Restart 0 starts from the maximally entangled joint state; the rest
    start from seeded random joint states (streams split from the master
    seed).  Ties between restarts within 1e-12 resolve to the lowest
    restart index.  If no restart reaches the gradient tolerance the best
    value found is returned with ``converged=False``.

    The squared fidelity is convex over joint density matrices and the
    factorization below is full size, so every converged restart lands on
    the global minimum.  The loop therefore stops early once three
    converged restarts agree within 1e-10 (or the value hits zero), and
    ``restarts`` acts as an upper bound.
    """
    opts = options or SolverOptions()
    n = channel.n
    kraus = channel.kraus
    restarts = max(1, int(opts.restarts))
    seed = opts.seed
    ss = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    children = ss.spawn(restarts)

    best = None
    agree = 0
    used = 0
    for r in range(restarts):
        if r == 0:
            m0 = np.eye(n, dtype=np.complex128) / np.sqrt(n)
        else:
            rng = np.random.default_rng(children[r])
            m0 = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
            m0 /= np.linalg.norm(m0)
        f, m, iters, gnorm, ok = _descend(kraus, m0, opts)
        used = r + 1
        if best is None or f < best[0] - 1e-12:
            best = (f, m, iters, gnorm, ok)
            agree = 1 if ok else 0
        elif abs(f - best[0]) <= 1e-10 and ok:
            agree += 1
        if best[0] <= 1e-16 or (best[4] and agree >= 3):
            break

    f, m, iters, gnorm, ok = best
    psi = matcore.fix_phase(m.reshape(-1))
    value = float(np.sqrt(max(f, 0.0)))
    possibly_zero = value <= ZERO_FIDELITY_CUTOFF
    w = None
    if not possibly_zero:
        w = optimal_w(reduced_state(psi, n, n), channel)
    return FidelityResult(
        value=value,
        minimizer=psi,
        optimal_w=w,
        iterations=iters,
        restarts_used=used,
        converged=ok,
        gradient_norm=gnorm,
        possibly_zero=possibly_zero,
    )


_PAULI = np.array(
    [
        [[0.0, 1.0], [1.0, 0.0]],
        [[0.0, -1.0j], [1.0j, 0.0]],
        [[1.0, 0.0], [0.0, -1.0]],
    ],
    dtype=np.complex128,
)


def fmin_bruteforce(
    channel: KrausChannel,
    resolution: int = 400,
    samples: int = 100_000,
    seed: int | np.random.SeedSequence = 0,
) -> float:
    """Independent sampling bound on the worst-case fidelity.

    ``n = 2``: Bloch-ball search on a ``resolution x resolution``
    polar/azimuthal direction grid.  Along each direction the squared
    fidelity is a convex quadratic in the radius, so the radial minimum is
    solved exactly; only the angular grid limits accuracy.

    ``n in {3, 4}``: minimum over ``samples`` seeded random joint pure
    states (equivalently random input densities).

    The result always upper-bounds the true minimum.
    """
    n = channel.n
    kraus = channel.kraus
    if n == 2:
        if resolution < 2:
            raise OutOfRangeError(f"resolution must be >= 2, got {resolution}")
        t = np.trace(kraus, axis1=1, axis2=2) / 2.0
        s_basis = np.einsum("pab,iba->pi", _PAULI, kraus) / 2.0  # (3, d)
        theta = np.linspace(0.0, np.pi, resolution)
        phi = np.linspace(0.0, 2.0 * np.pi, resolution, endpoint=False)
        st, ct = np.sin(theta), np.cos(theta)
        dirs = np.empty((resolution * resolution, 3))
        dirs[:, 0] = np.outer(st, np.cos(phi)).reshape(-1)
        dirs[:, 1] = np.outer(st, np.sin(phi)).reshape(-1)
        dirs[:, 2] = np.outer(ct, np.ones_like(phi)).reshape(-1)
        s = dirs @ s_basis  # (grid, d) complex
        a = np.sum(np.abs(s) ** 2, axis=1)
        b = 2.0 * np.real(s @ t.conj())
        const = float(np.sum(np.abs(t) ** 2))
        r = np.where(a > 1e-300, -b / (2.0 * np.maximum(a, 1e-300)), 0.0)
        r = np.clip(r, -1.0, 1.0)
        f = a * r * r + b * r + const
        return float(np.sqrt(max(float(f.min()), 0.0)))

    if n > 4:
        raise UnsupportedDimensionError(
            f"brute force supports n <= 4, got n = {n}"
        )

    rng = np.random.default_rng(seed)
    best = np.inf
    left = int(samples)
    while left > 0:
        chunk = min(left, 20_000)
        m = rng.standard_normal((chunk, n, n)) + 1j * rng.standard_normal((chunk, n, n))
        m /= np.linalg.norm(m.reshape(chunk, -1), axis=1)[:, None]
        rho = np.einsum("mab,mac->mbc", m, m.conj())
        c = np.einsum("mbc,icb->mi", rho, kraus)
        f = np.sum(np.abs(c) ** 2, axis=1)
        best = min(best, float(f.min()))
        left -= chunk
    return float(np.sqrt(max(best, 0.0)))


def numerical_range_sample(
    a, m: int, seed: int | np.random.SeedSequence = 0
) -> np.ndarray:
    """Sample the numerical range ``{<psi|A|psi> : |psi| = 1}``.

    Returns ``3*m`` complex points: ``m`` from random unit vectors plus, for
    each of ``m`` equally spaced rotations ``exp(i phi) A``, the two extreme
    eigenvectors of the rotated Hermitian part (boundary probes).
    """
    mat = matcore.as_square_matrix(a)
    if m < 1:
        raise OutOfRangeError(f"sample count must be >= 1, got {m}")
    rng = np.random.default_rng(seed)
    n = mat.shape[0]
    psi = rng.standard_normal((m, n)) + 1j * rng.standard_normal((m, n))
    psi /= np.linalg.norm(psi, axis=1)[:, None]
    pts = [np.einsum("ma,ab,mb->m", psi.conj(), mat, psi)]
    bnd = np.empty(2 * m, dtype=np.complex128)
    for k in range(m):
        rot = np.exp(1j * (2.0 * np.pi * k / m)) * mat
        _, vecs = matcore.hermitian_eigen((rot + rot.conj().T) / 2.0)
        lo, hi = vecs[:, 0], vecs[:, -1]
        bnd[2 * k] = lo.conj() @ mat @ lo
        bnd[2 * k + 1] = hi.conj() @ mat @ hi
    pts.append(bnd)
    return np.concatenate(pts)


def _check_depolarizing_q(n: int, q: float) -> float:
    lo = -1.0 / (n * n - 1)
    if q < lo - 1e-12 or q > 1.0 + 1e-12:
        raise OutOfRangeError(f"q={q} outside the admissible range [{lo}, 1]")
    return min(max(float(q), lo), 1.0)


def depolarizing_fmin_closed_form(n: int, q: float) -> float:
    """Worst-case fidelity of the depolarizing channel:
    ``sqrt(q + (1 - q)/n^2)``."""
    if n < 2:
        raise OutOfRangeError(f"dimension must be >= 2, got {n}")
    q = _check_depolarizing_q(n, q)
    return float(np.sqrt(max(q + (1.0 - q) / (n * n), 0.0)))


def depolarizing_no_ancilla_fidelity(n: int, q: float) -> float:
    """Worst-case input-output fidelity without an ancilla:
    ``sqrt(q + (1 - q)/n)``; strictly above the entangled-input value except
    at ``q = 1``."""
    if n < 2:
        raise OutOfRangeError(f"dimension must be >= 2, got {n}")
    q = _check_depolarizing_q(n, q)
    return float(np.sqrt(max(q + (1.0 - q) / n, 0.0)))
