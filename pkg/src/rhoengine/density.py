"""Density operators: projectors, weighted mixtures and non-projector states."""

import enum
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from ._validation import as_vector, check_int, readonly
from .exceptions import (
    DimensionMismatch,
    InvalidRank,
    NotDensityOperator,
    NotNormalized,
    WeightsInvalid,
)
from .operators import hermitian_from_matrix, spectral_decompose

__all__ = [
    "Classification",
    "DensityOperator",
    "MixtureSpec",
    "projector_from_vector",
    "mixture",
    "random_density",
    "random_unitary",
    "decomposition_from_unitary",
    "alternative_decompositions",
    "PROJECTOR_TOL",
    "CLAMP_TOL",
]

PROJECTOR_TOL = 1e-10
CLAMP_TOL = 1e-10
TRACE_TOL = 1e-10


class Classification(enum.Enum):
    PROJECTOR = "Projector"
    NON_PROJECTOR = "NonProjector"


class DensityOperator:
    """Unit-trace, positive, Hermitian operator.

    Instances are immutable. Use :meth:`from_matrix`, :func:`projector_from_vector`,
    :func:`mixture` or :func:`random_density` rather than the constructor, which
    trusts its input. A projector built from a state vector keeps that vector and
    only materializes the dense matrix on demand.
    """

    def __init__(self, matrix=None, *, vector=None, label=""):
        if matrix is None and vector is None:
            raise ValueError("need a matrix or a vector")
        self._matrix = None if matrix is None else readonly(matrix)
        self._vector = None if vector is None else readonly(vector)
        self.label = label

    @classmethod
    def from_matrix(cls, M, label="", tol=CLAMP_TOL):
        """Validate ``M`` and return it as a density operator.

        Eigenvalues in ``(-tol, 0)`` are clamped to zero and the result
        renormalized; anything more negative, or a trace off by more than
        ``1e-10``, raises :class:`NotDensityOperator`.
        """
        H = hermitian_from_matrix(M)
        tr = np.trace(H.matrix).real
        if abs(tr - 1.0) > TRACE_TOL:
            raise NotDensityOperator(f"trace {tr!r} differs from 1")
        D = spectral_decompose(H)
        lam = D.eigenvalues
        if lam[0] < -tol:
            raise NotDensityOperator(f"negative eigenvalue {lam[0]:.3e}")
        if lam[0] < 0:
            lam = np.clip(lam, 0.0, None)
            lam = lam / lam.sum()
            V = D.eigenvectors
            R = (V * lam) @ V.conj().T
            return cls(0.5 * (R + R.conj().T), label=label)
        return cls(np.array(H.matrix), label=label)

    @property
    def matrix(self):
        if self._matrix is None:
            psi = self._vector
            self._matrix = readonly(np.outer(psi, psi.conj()))
        return self._matrix

    @property
    def vector(self):
        """State vector for projectors built from one, else ``None``."""
        return self._vector

    @property
    def dim(self):
        if self._vector is not None:
            return self._vector.shape[0]
        return self._matrix.shape[0]

    @cached_property
    def purity(self):
        if self._vector is not None:
            return float(np.vdot(self._vector, self._vector).real ** 2)
        return float(np.sum(np.abs(self._matrix) ** 2))

    @property
    def classification(self):
        if abs(self.purity - 1.0) <= PROJECTOR_TOL:
            return Classification.PROJECTOR
        return Classification.NON_PROJECTOR

    @property
    def is_projector(self):
        return self.classification is Classification.PROJECTOR

    @property
    def trace(self):
        if self._vector is not None:
            return float(np.vdot(self._vector, self._vector).real)
        return float(np.trace(self._matrix).real)

    @cached_property
    def spectrum(self):
        return spectral_decompose(hermitian_from_matrix(self.matrix))

    def __repr__(self):
        return (
            f"DensityOperator(dim={self.dim}, purity={self.purity:.6g}, "
            f"{self.classification.value}, label={self.label!r})"
        )


@dataclass(frozen=True)
class MixtureSpec:
    """Weighted density operators ``sum_i w_i rho_i`` with ``w_i >= 0, sum w_i = 1``."""

    components: tuple

    def __post_init__(self):
        comps = tuple((float(w), r) for w, r in self.components)
        if not comps:
            raise WeightsInvalid("a mixture needs at least one component")
        weights = np.array([w for w, _ in comps])
        if np.any(~np.isfinite(weights)) or np.any(weights < 0):
            raise WeightsInvalid(f"weights must be nonnegative, got {weights.tolist()}")
        if abs(weights.sum() - 1.0) > 1e-12:
            raise WeightsInvalid(f"weights sum to {weights.sum()!r}, not 1")
        if len({r.dim for _, r in comps}) > 1:
            raise DimensionMismatch("mixture components differ in dimension")
        object.__setattr__(self, "components", comps)

    @property
    def weights(self):
        return np.array([w for w, _ in self.components])

    @property
    def states(self):
        return [r for _, r in self.components]


def projector_from_vector(psi, tol=1e-10, label=""):
    """Projector ``|psi><psi|`` for a unit vector ``psi``."""
    psi = as_vector(psi, "psi")
    norm = np.linalg.norm(psi)
    if abs(norm - 1.0) > tol:
        raise NotNormalized(f"|psi| = {norm!r} is not 1 within {tol:g}")
    return DensityOperator(vector=psi / norm, label=label)


def mixture(spec):
    """Density operator of a statistical mixture."""
    if not isinstance(spec, MixtureSpec):
        spec = MixtureSpec(tuple(spec))
    (w0, r0), *rest = spec.components
    M = w0 * r0.matrix
    for w, r in rest:
        M = M + w * r.matrix
    return DensityOperator(M, label="mixture")


def random_unitary(dim, rng):
    """Haar-random unitary from the QR decomposition of a complex Ginibre matrix."""
    Z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    Q, R = np.linalg.qr(Z)
    d = np.diagonal(R)
    return Q * (d / np.abs(d))


def random_density(dim, rank, seed):
    """Deterministic random density operator with exactly ``rank`` nonzero eigenvalues."""
    dim = check_int(dim, "dim", 1, InvalidRank)
    rank = check_int(rank, "rank", 1, InvalidRank)
    if rank > dim:
        raise InvalidRank(f"rank {rank} exceeds dimension {dim}")
    rng = np.random.default_rng(seed)
    U = random_unitary(dim, rng)
    lam = rng.uniform(0.05, 1.0, rank)
    lam = lam / lam.sum()
    W = U[:, :rank]
    M = (W * lam) @ W.conj().T
    M = 0.5 * (M + M.conj().T)
    M = M / np.trace(M).real
    return DensityOperator(M, label=f"random(dim={dim}, rank={rank}, seed={seed})")


def _support(rho, cutoff=1e-14):
    D = rho.spectrum
    keep = D.eigenvalues > cutoff
    return D.eigenvalues[keep], D.eigenvectors[:, keep]


def _mix_from_columns(cols):
    weights = np.sum(np.abs(cols) ** 2, axis=0)
    keep = weights > 1e-300
    cols, weights = cols[:, keep], weights[keep]
    comps = [
        (w / weights.sum(), DensityOperator(vector=c / np.sqrt(w)))
        for w, c in zip(weights, cols.T)
    ]
    return MixtureSpec(tuple(comps))


def decomposition_from_unitary(rho, U):
    """Ensemble ``{(|v_j|^2, v_j/|v_j|)}`` with ``v_j = sum_i U_ji sqrt(lam_i) e_i``.

    ``e_i`` and ``lam_i`` are the eigenvectors and nonzero eigenvalues of ``rho``;
    ``U`` is any unitary of size ``rank(rho)``.
    """
    lam, E = _support(rho)
    U = np.asarray(U, dtype=np.complex128)
    if U.shape != (lam.size, lam.size):
        raise DimensionMismatch(f"unitary must be {lam.size}x{lam.size}, got {U.shape}")
    return _mix_from_columns((E * np.sqrt(lam)) @ U.T)


def alternative_decompositions(rho, count, seed):
    """``count`` mixtures of pure states that all reproduce ``rho``.

    The first is the spectral decomposition; the rest remix the weighted
    eigenvectors with seeded Haar-random unitaries.
    """
    count = check_int(count, "count", 1)
    lam, E = _support(rho)
    rng = np.random.default_rng(seed)
    out = [_mix_from_columns(E * np.sqrt(lam))]
    for _ in range(count - 1):
        out.append(decomposition_from_unitary(rho, random_unitary(lam.size, rng)))
    return out
