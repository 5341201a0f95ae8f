"""Dense Hermitian operator algebra.

Observables are stored as exactly Hermitian ``complex128`` matrices. Their
spectra come from a cyclic Jacobi eigensolver (parallel round-robin ordering,
so each round of disjoint rotations is applied as one vectorized update),
grouped into degenerate eigenspaces from which spectral projectors, unitary
propagators and outcome probabilities are built.
"""

from dataclasses import dataclass, field
from functools import cached_property, lru_cache

import numpy as np

from ._validation import as_square_matrix, check_positive, check_same_dim, readonly
from .exceptions import ConvergenceFailure, IndexOutOfRange, NotHermitian

__all__ = [
    "HermitianOperator",
    "EigenGroup",
    "SpectralDecomposition",
    "UnitaryMatrix",
    "hermitian_from_matrix",
    "spectral_decompose",
    "spectral_projector",
    "c_operator",
    "unitary_exp",
    "jacobi_eigh",
    "default_group_tol",
    "HERMITIAN_TOL",
    "MAX_SWEEPS",
    "JACOBI_MAX_DIM",
]

HERMITIAN_TOL = 1e-10
MAX_SWEEPS = 50
# Python-level Jacobi costs O(n^3) per sweep with a large constant
JACOBI_MAX_DIM = 64


@dataclass(frozen=True, eq=False)
class HermitianOperator:
    """A validated observable. Build it with :func:`hermitian_from_matrix`."""

    matrix: np.ndarray
    label: str = ""
    residual: float = 0.0

    @property
    def dim(self):
        return self.matrix.shape[0]

    @cached_property
    def spectrum(self):
        """Spectral decomposition at the default grouping tolerance (cached)."""
        return spectral_decompose(self)

    def shifted(self, shift, label=None):
        """Return ``A - shift*I``; stays exactly Hermitian for real ``shift``."""
        M = self.matrix - float(shift) * np.eye(self.dim)
        return HermitianOperator(readonly(M), label if label is not None else self.label)

    def __repr__(self):
        return f"HermitianOperator(dim={self.dim}, label={self.label!r})"


@dataclass(frozen=True)
class EigenGroup:
    value: float
    indices: tuple
    degeneracy: int


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    groups: tuple
    group_tol: float
    sweeps: int = 0

    @property
    def dim(self):
        return self.eigenvalues.shape[0]

    def reconstruct(self):
        V = self.eigenvectors
        return (V * self.eigenvalues) @ V.conj().T

    def group_of(self, value):
        """Index of the group whose representative eigenvalue is closest to ``value``."""
        reps = np.array([g.value for g in self.groups])
        return int(np.argmin(np.abs(reps - value)))


@dataclass(frozen=True, eq=False)
class UnitaryMatrix:
    matrix: np.ndarray
    residual: float = field(default=0.0)

    @property
    def dim(self):
        return self.matrix.shape[0]


def hermitian_from_matrix(M, tol=HERMITIAN_TOL, label=""):
    """Validate ``M`` as an observable and return its symmetrized form.

    ``M`` is accepted when ``||M - M^H||_inf <= tol * ||M||_inf`` (infinity
    norm = max absolute row sum). The recorded ``residual`` is the absolute
    distance ``||M - (M + M^H)/2||_inf`` removed by symmetrization.

    Raises
    ------
    NonFinite
        Any entry is NaN or Inf.
    NotHermitian
        The anti-Hermitian part exceeds the tolerance.
    """
    M = as_square_matrix(M)
    diff = M - M.conj().T
    scale = np.abs(M).sum(axis=1).max()
    skew = np.abs(diff).sum(axis=1).max()
    if skew > tol * scale:
        raise NotHermitian(
            f"||M - M^H||_inf = {skew:.3e} exceeds {tol:.1e} * ||M||_inf = {tol * scale:.3e}"
        )
    H = 0.5 * (M + M.conj().T)
    return HermitianOperator(readonly(H), str(label), float(0.5 * skew))


@lru_cache(maxsize=64)
def _round_robin(n):
    """Rounds of disjoint index pairs covering every pair exactly once."""
    m = n + (n % 2)
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        ps, qs = [], []
        for i in range(m // 2):
            a, b = players[i], players[m - 1 - i]
            if a < n and b < n:
                ps.append(min(a, b))
                qs.append(max(a, b))
        rounds.append((np.array(ps, dtype=np.intp), np.array(qs, dtype=np.intp)))
        players = [players[0], players[-1]] + players[1:-1]
    return tuple(rounds)


def _off_norm(A):
    # direct sum; total minus diagonal cancels catastrophically near convergence
    off = A.copy()
    np.fill_diagonal(off, 0.0)
    return np.linalg.norm(off)


def jacobi_eigh(M, max_sweeps=MAX_SWEEPS):
    """Eigen-decompose a Hermitian matrix by cyclic Jacobi rotations.

    Returns ``(eigenvalues, eigenvectors, sweeps)`` with unsorted eigenvalues.
    Real symmetric input is processed in real arithmetic.
    """
    A = np.array(M)
    if np.iscomplexobj(A) and not np.any(A.imag):
        A = A.real.copy()
    n = A.shape[0]
    V = np.eye(n, dtype=A.dtype)
    if n == 1:
        return np.real(np.diagonal(A)).copy(), V, 0

    fro = np.linalg.norm(A)
    target = 4.0 * n * np.finfo(float).eps * fro
    rounds = _round_robin(n)
    for sweep in range(max_sweeps + 1):
        if _off_norm(A) <= target:
            return np.real(np.diagonal(A)).copy(), V, sweep
        if sweep == max_sweeps:
            break
        for p, q in rounds:
            z = A[p, q]
            b = np.abs(z)
            active = b > 0.0
            if not np.any(active):
                continue
            alpha = np.real(A[p, p])
            beta = np.real(A[q, q])
            bsafe = np.where(active, b, 1.0)
            theta = (beta - alpha) / (2.0 * bsafe)
            t = np.where(theta >= 0, 1.0, -1.0) / (np.abs(theta) + np.hypot(theta, 1.0))
            t = np.where(active, t, 0.0)
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = t * c
            phase = np.where(active, z / bsafe, 1.0)
            # J restricted to (p, q): [[c, s], [-s conj(phase), c conj(phase)]]
            j_pp, j_pq = c, s
            j_qp, j_qq = -s * np.conj(phase), c * np.conj(phase)

            Ap, Aq = A[:, p], A[:, q]
            A[:, p], A[:, q] = Ap * j_pp + Aq * j_qp, Ap * j_pq + Aq * j_qq
            Rp, Rq = A[p, :], A[q, :]
            A[p, :] = np.conj(j_pp)[:, None] * Rp + np.conj(j_qp)[:, None] * Rq
            A[q, :] = np.conj(j_pq)[:, None] * Rp + np.conj(j_qq)[:, None] * Rq
            A[p, q] = 0.0
            A[q, p] = 0.0
            Vp, Vq = V[:, p], V[:, q]
            V[:, p], V[:, q] = Vp * j_pp + Vq * j_qp, Vp * j_pq + Vq * j_qq
    raise ConvergenceFailure(
        f"Jacobi eigensolver did not converge in {max_sweeps} sweeps "
        f"(off-diagonal norm {_off_norm(A):.3e}, target {target:.3e})"
    )


def default_group_tol(eigenvalues):
    return 1e-8 * max(1.0, float(np.max(np.abs(eigenvalues))))


def _fix_phases(V):
    idx = np.argmax(np.abs(V), axis=0)
    lead = V[idx, np.arange(V.shape[1])]
    return V * (np.conj(lead) / np.abs(lead))


def _group(eigenvalues, tol):
    groups = []
    start = 0
    for i in range(1, len(eigenvalues) + 1):
        if i == len(eigenvalues) or eigenvalues[i] - eigenvalues[i - 1] > tol:
            idx = tuple(range(start, i))
            groups.append(EigenGroup(float(np.mean(eigenvalues[start:i])), idx, len(idx)))
            start = i
    return tuple(groups)


def spectral_decompose(A, group_tol=None, method="auto", max_sweeps=MAX_SWEEPS):
    """Spectral decomposition of ``A`` with degeneracy grouping.

    Eigenvalues are ascending. Adjacent eigenvalues closer than ``group_tol``
    chain into one degenerate group (default ``1e-8 * max(1, |a|_max)``).
    Each eigenvector is rotated so its largest-magnitude component is real
    and positive.

    ``method`` is ``"jacobi"``, ``"lapack"`` (``numpy.linalg.eigh``) or
    ``"auto"``, which uses Jacobi up to ``JACOBI_MAX_DIM`` and LAPACK above.
    """
    if method == "auto":
        method = "jacobi" if A.dim <= JACOBI_MAX_DIM else "lapack"
    if method == "jacobi":
        w, V, sweeps = jacobi_eigh(A.matrix, max_sweeps=max_sweeps)
    elif method == "lapack":
        try:
            w, V = np.linalg.eigh(A.matrix)
        except np.linalg.LinAlgError as exc:
            raise ConvergenceFailure(str(exc)) from exc
        sweeps = 0
    else:
        raise ValueError(f"unknown eigensolver method {method!r}")
    order = np.argsort(w, kind="stable")
    w = w[order]
    V = _fix_phases(V[:, order].astype(np.complex128))
    tol = default_group_tol(w) if group_tol is None else float(group_tol)
    return SpectralDecomposition(readonly(w), readonly(V), _group(w, tol), tol, sweeps)


def _group_vectors(D, group_index):
    if not 0 <= group_index < len(D.groups):
        raise IndexOutOfRange(f"group index {group_index} outside 0..{len(D.groups) - 1}")
    return D.eigenvectors[:, list(D.groups[group_index].indices)]


def spectral_projector(D, group_index):
    """Projector onto the eigenspace of group ``group_index``."""
    W = _group_vectors(D, group_index)
    P = W @ W.conj().T
    g = D.groups[group_index]
    return HermitianOperator(readonly(0.5 * (P + P.conj().T)), f"P[{g.value:.6g}]")


def c_operator(A, B):
    """Hermitian ``C`` defined by ``AB - BA = iC``."""
    check_same_dim(A, B)
    comm = A.matrix @ B.matrix - B.matrix @ A.matrix
    return hermitian_from_matrix(-1j * comm, label=f"C[{A.label},{B.label}]")


def unitary_exp(H, t, hbar=1.0):
    """Propagator ``exp(-i t H / hbar)`` through the spectral decomposition of H."""
    hbar = check_positive(hbar, "hbar")
    if t == 0:
        return UnitaryMatrix(readonly(np.eye(H.dim, dtype=np.complex128)), 0.0)
    D = H.spectrum
    V = D.eigenvectors
    U = (V * np.exp(-1j * (float(t) / hbar) * D.eigenvalues)) @ V.conj().T
    res = np.linalg.norm(U.conj().T @ U - np.eye(H.dim))
    return UnitaryMatrix(readonly(U), float(res))
