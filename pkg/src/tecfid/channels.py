"""Kraus channels, standard families, purification helpers and file I/O.

A channel on an ``n``-dimensional system is held as a stack of ``d`` Kraus
operators with shape ``(d, n, n)`` satisfying ``sum_j K_j^dag K_j = I``.
Channel equality is representation-independent and should be checked
through Choi matrices (`choi_distance`), never by comparing Kraus stacks.
"""

from __future__ import annotations

import json

import numpy as np

from . import matcore
from .errors import (
    ChannelParseError,
    DimensionMismatchError,
    InvalidChannelError,
    NotUnitaryError,
    NotUnitVectorError,
    OutOfRangeError,
)


class KrausChannel:
    """Immutable stack of Kraus operators.

    Parameters
    ----------
    kraus : array_like
        Shape ``(d, n, n)`` complex array (or a sequence of ``d`` square
        matrices).  ``n >= 2`` and every entry must be finite.
    atol : float, optional
        Completeness gate on ``max |sum_j K_j^dag K_j - I|``; defaults to
        ``1e-9 * n``.
    validate : bool
        Skip the completeness check when False (used by the file reader's
        explicit override).
    """

    def __init__(self, kraus, *, atol: float | None = None, validate: bool = True):
        arr = np.asarray(kraus, dtype=np.complex128)
        if arr.ndim == 2:
            arr = arr[None, :, :]
        if arr.ndim != 3 or arr.shape[1] != arr.shape[2]:
            raise DimensionMismatchError(
                f"expected a (d, n, n) Kraus stack, got shape {arr.shape}"
            )
        if arr.shape[1] < 2:
            raise DimensionMismatchError("system dimension must be at least 2")
        if not (np.isfinite(arr.real).all() and np.isfinite(arr.imag).all()):
            raise InvalidChannelError("Kraus entries must be finite")
        self._kraus = np.ascontiguousarray(arr)
        self._kraus.flags.writeable = False
        if validate:
            gate = 1e-9 * self.n if atol is None else float(atol)
            defect = self.completeness_defect()
            if defect > gate:
                raise InvalidChannelError(
                    f"Kraus set is not trace preserving: residual {defect:.3e} > {gate:.3e}"
                )

    @property
    def kraus(self) -> np.ndarray:
        """Read-only ``(d, n, n)`` operator stack."""
        return self._kraus

    @property
    def n(self) -> int:
        return self._kraus.shape[1]

    @property
    def d(self) -> int:
        return self._kraus.shape[0]

    def completeness_defect(self) -> float:
        k = self._kraus
        s = np.einsum("iba,ibc->ac", k.conj(), k)
        return float(np.max(np.abs(s - np.eye(self.n))))

    def apply(self, rho) -> np.ndarray:
        """Channel action ``sum_j K_j rho K_j^dag``."""
        r = matcore.as_square_matrix(rho)
        if r.shape[0] != self.n:
            raise DimensionMismatchError(
                f"state dimension {r.shape[0]} does not match channel dimension {self.n}"
            )
        return np.einsum("iab,bc,idc->ad", self._kraus, r, self._kraus.conj())

    def choi(self) -> np.ndarray:
        """Choi matrix ``(I (x) K)(|Phi><Phi|)`` with the normalized maximally
        entangled ``|Phi>``; PSD with unit trace, joint index ``a*n + b``."""
        n = self.n
        # (I (x) K_j)|Phi> as an (n, n) block: column a holds K_j|a> / sqrt(n).
        vecs = self._kraus.transpose(0, 2, 1).reshape(self.d, n * n) / np.sqrt(n)
        return np.einsum("ia,ib->ab", vecs, vecs.conj())

    def __repr__(self) -> str:  # pragma: no cover - debug aid
        return f"KrausChannel(n={self.n}, d={self.d})"


def identity_channel(n: int) -> KrausChannel:
    """The trivial channel ``rho -> rho``."""
    if n < 2:
        raise DimensionMismatchError("system dimension must be at least 2")
    return KrausChannel(np.eye(n, dtype=np.complex128)[None, :, :])


def unitary_channel(u, tol: float = 1e-10) -> KrausChannel:
    """Single-Kraus channel ``rho -> U rho U^dag``."""
    m = matcore.as_square_matrix(u)
    defect = matcore.unitarity_defect(m)
    if not defect <= tol:
        raise NotUnitaryError(defect, tol)
    return KrausChannel(m[None, :, :])


def dephasing(n: int) -> KrausChannel:
    """Projectors onto the computational basis: kills all off-diagonals."""
    if n < 2:
        raise DimensionMismatchError("system dimension must be at least 2")
    k = np.zeros((n, n, n), dtype=np.complex128)
    for j in range(n):
        k[j, j, j] = 1.0
    return KrausChannel(k)


def _weyl_operators(n: int) -> np.ndarray:
    """All ``n^2`` shift-and-clock unitaries ``X^j Z^k``, identity first."""
    omega = np.exp(2j * np.pi / n)
    x = np.zeros((n, n), dtype=np.complex128)
    for m in range(n):
        x[(m + 1) % n, m] = 1.0
    z = np.diag(omega ** np.arange(n))
    out = np.empty((n * n, n, n), dtype=np.complex128)
    xj = np.eye(n, dtype=np.complex128)
    for j in range(n):
        zk = np.eye(n, dtype=np.complex128)
        for k in range(n):
            out[j * n + k] = xj @ zk
            zk = zk @ z
        xj = xj @ x
    return out


def depolarizing(n: int, q: float) -> KrausChannel:
    """Channel ``rho -> q rho + (1 - q) I/n``.

    Complete positivity bounds the noise parameter to
    ``-1/(n^2 - 1) <= q <= 1``.  For ``q >= 0`` the Kraus set is the
    weighted shift-and-clock family; for ``q < 0`` the operators come from
    the eigendecomposition of the (still PSD) Choi matrix.  Zero-weight
    operators are dropped.
    """
    if n < 2:
        raise DimensionMismatchError("system dimension must be at least 2")
    q = float(q)
    lo = -1.0 / (n * n - 1)
    if q < lo - 1e-12 or q > 1.0 + 1e-12:
        raise OutOfRangeError(f"q={q} outside the admissible range [{lo}, 1]")
    q = min(max(q, lo), 1.0)

    if q >= 0.0:
        w = _weyl_operators(n)
        coeff = np.full(n * n, np.sqrt((1.0 - q) / (n * n)))
        coeff[0] = np.sqrt(q + (1.0 - q) / (n * n))
        ops = coeff[:, None, None] * w
        return KrausChannel(ops[coeff > 1e-14])

    # Negative q: J = q |Phi><Phi| + (1-q) I/n^2 stays PSD down to q = lo.
    phi = maximally_entangled(n)
    choi = q * np.outer(phi, phi.conj()) + (1.0 - q) * np.eye(n * n) / (n * n)
    lam, vecs = matcore.hermitian_eigen(choi)
    lam = np.clip(lam, 0.0, None)
    keep = lam > 1e-14
    # Invert the Choi construction: eigenvector u -> sqrt(n*lam) * mat(u)^T.
    ops = np.sqrt(n * lam[keep])[:, None, None] * vecs[:, keep].T.reshape(-1, n, n).transpose(0, 2, 1)
    return KrausChannel(ops)


def random_channel(n: int, d: int, seed=None) -> KrausChannel:
    """Random channel with ``d`` Kraus operators from a Haar isometry.

    The first ``n`` columns of a Haar-random ``(n*d) x (n*d)`` unitary form
    an isometry whose ``d`` row blocks are the Kraus operators; trace
    preservation holds to machine precision by construction.
    """
    if n < 2:
        raise DimensionMismatchError("system dimension must be at least 2")
    if d < 1:
        raise OutOfRangeError(f"number of Kraus operators must be >= 1, got {d}")
    u = matcore.random_unitary(n * d, seed)
    iso = u[:, :n]
    return KrausChannel(iso.reshape(d, n, n))


def kraus_combination(channel: KrausChannel, v, tol: float = 1e-10) -> np.ndarray:
    """Weighted operator ``K_v = sum_j v_j K_j`` for a unit weight vector."""
    w = np.asarray(v, dtype=np.complex128).reshape(-1)
    if w.size != channel.d:
        raise DimensionMismatchError(
            f"weight vector has length {w.size}, channel has {channel.d} operators"
        )
    nrm = np.linalg.norm(w)
    if abs(nrm - 1.0) > tol:
        raise NotUnitVectorError(f"weight vector norm {nrm} differs from 1 beyond {tol}")
    return np.einsum("i,iab->ab", w, channel.kraus)


def maximally_entangled(n: int) -> np.ndarray:
    """Joint state ``sum_i |ii> / sqrt(n)`` with index layout ``a*n + b``."""
    if n < 1:
        raise OutOfRangeError(f"dimension must be >= 1, got {n}")
    psi = np.zeros(n * n, dtype=np.complex128)
    psi[:: n + 1] = 1.0 / np.sqrt(n)
    return psi


def reduced_state(psi_ab, dim_a: int, dim_b: int) -> np.ndarray:
    """Trace out subsystem A of a joint pure state (index layout ``a*dim_b + b``)."""
    v = np.asarray(psi_ab, dtype=np.complex128).reshape(-1)
    if v.size != dim_a * dim_b:
        raise DimensionMismatchError(
            f"joint state of length {v.size} is not {dim_a} x {dim_b}"
        )
    m = v.reshape(dim_a, dim_b)
    return np.einsum("ab,ac->bc", m, m.conj())


def purify(rho, tol: float = 1e-9, rank_cut: float = 1e-12) -> tuple[np.ndarray, int]:
    """Pure joint state whose B-reduction is ``rho``.

    Returns ``(psi_ab, dim_a)`` where ``dim_a`` equals the numerical rank of
    ``rho`` (eigenvalues above ``rank_cut``) and the joint index layout is
    ``a*n + b``.  The global phase is fixed so the first nonzero amplitude
    is positive real.
    """
    r = matcore.as_square_matrix(rho)
    if not matcore.validate_density(r, tol):
        raise OutOfRangeError("input is not a density matrix within tolerance")
    lam, vecs = matcore.hermitian_eigen(r, tol)
    keep = np.flatnonzero(lam > rank_cut)[::-1]  # largest weight first
    dim_a = keep.size
    n = r.shape[0]
    psi = np.zeros(dim_a * n, dtype=np.complex128)
    for a, idx in enumerate(keep):
        psi[a * n : (a + 1) * n] = np.sqrt(lam[idx]) * vecs[:, idx]
    return matcore.fix_phase(psi), dim_a


def choi_distance(ch1: KrausChannel, ch2: KrausChannel) -> float:
    """Max-norm distance between Choi matrices (0 iff the channels are equal)."""
    if ch1.n != ch2.n:
        raise DimensionMismatchError(
            f"channels act on different dimensions: {ch1.n} vs {ch2.n}"
        )
    return float(np.max(np.abs(ch1.choi() - ch2.choi())))


# ---------------------------------------------------------------------------
# Channel file format: {"n": int, "d": int, "kraus": [[[[re, im], ...]]]}
# with kraus[j][r][c] the entry of operator j at row r, column c.
# ---------------------------------------------------------------------------


def _parse_entry(entry, path: str) -> complex:
    if (
        not isinstance(entry, (list, tuple))
        or len(entry) != 2
        or not all(isinstance(x, (int, float)) for x in entry)
    ):
        raise ChannelParseError(
            f"{path}: expected a [re, im] pair of numbers, got {entry!r}"
        )
    return complex(float(entry[0]), float(entry[1]))


def read_channel_file(
    path,
    *,
    completeness_tol: float = 1e-6,
    allow_incomplete: bool = False,
) -> KrausChannel:
    """Parse a channel description file.

    Rejects Kraus sets whose completeness residual exceeds
    ``completeness_tol`` unless ``allow_incomplete`` is set.

    Raises
    ------
    ChannelParseError
        Malformed JSON (with line/column) or wrong structure (with the
        offending path such as ``kraus[1][0][2]``).
    InvalidChannelError
        Structurally valid but not trace preserving.
    """
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ChannelParseError(
            f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc

    if not isinstance(doc, dict):
        raise ChannelParseError(f"{path}: top level must be an object")
    for key in ("n", "d", "kraus"):
        if key not in doc:
            raise ChannelParseError(f"{path}: missing required key {key!r}")
    n, d = doc["n"], doc["d"]
    if not isinstance(n, int) or n < 2:
        raise ChannelParseError(f"{path}: n must be an integer >= 2, got {n!r}")
    if not isinstance(d, int) or d < 1:
        raise ChannelParseError(f"{path}: d must be an integer >= 1, got {d!r}")

    kraus_doc = doc["kraus"]
    if not isinstance(kraus_doc, list) or len(kraus_doc) != d:
        raise ChannelParseError(f"{path}: kraus must be a list of {d} operators")
    arr = np.zeros((d, n, n), dtype=np.complex128)
    for j, op in enumerate(kraus_doc):
        if not isinstance(op, list) or len(op) != n:
            raise ChannelParseError(f"{path}: kraus[{j}] must have {n} rows")
        for r, row in enumerate(op):
            if not isinstance(row, list) or len(row) != n:
                raise ChannelParseError(f"{path}: kraus[{j}][{r}] must have {n} entries")
            for c, entry in enumerate(row):
                arr[j, r, c] = _parse_entry(entry, f"{path}: kraus[{j}][{r}][{c}]")

    if allow_incomplete:
        return KrausChannel(arr, validate=False)
    return KrausChannel(arr, atol=completeness_tol)


def write_channel_file(path, channel: KrausChannel) -> None:
    """Serialize a channel in the JSON format accepted by `read_channel_file`."""
    k = channel.kraus
    doc = {
        "n": channel.n,
        "d": channel.d,
        "kraus": [
            [[[float(z.real), float(z.imag)] for z in row] for row in op]
            for op in k
        ],
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")
