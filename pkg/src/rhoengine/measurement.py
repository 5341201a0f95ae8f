"""Measurement statistics of a density operator.

Expectation values, variances, outcome distributions over the eigenvalue
groups of an observable, uncertainty products, and the linear map between a
state and the expectation values of ``n^2 - 1`` traceless observables.
"""

from dataclasses import dataclass

import numpy as np

from ._validation import check_int, check_same_dim, readonly
from .density import DensityOperator
from .exceptions import (
    DimensionMismatch,
    InvalidDimension,
    NegativeVariance,
    NotDensityOperator,
    NotHermitian,
    NotPositive,
)
from .operators import HermitianOperator, c_operator, hermitian_from_matrix

__all__ = [
    "OutcomeDistribution",
    "UncertaintyReport",
    "ObservableBasis",
    "expectation",
    "variance",
    "outcome_distribution",
    "uncertainty_check",
    "observable_basis",
    "expectations_from_state",
    "state_from_expectations",
]

UNCERTAINTY_SLACK_TOL = 1e-9


def _trace_product(rho, A):
    """``Tr(rho A)`` as a complex number."""
    if rho.vector is not None:
        psi = rho.vector
        return np.vdot(psi, A @ psi)
    # Tr(rho A) = sum_ij rho_ij A_ji
    return np.sum(rho.matrix * A.T)


def expectation(rho, A):
    """``Tr(rho A)``; the imaginary part must vanish to within 1e-10."""
    check_same_dim(rho, A)
    val = _trace_product(rho, A.matrix)
    if abs(val.imag) > 1e-10 * max(1.0, abs(val.real)):
        raise NotHermitian(f"Tr(rho A) has imaginary part {val.imag:.3e}")
    return float(val.real)


def variance(rho, X):
    """Variance and standard deviation of ``X`` in state ``rho``.

    Evaluated in the centered form ``Tr(rho (X - <X>)^2)``, which equals
    ``<X^2> - <X>^2`` but does not cancel catastrophically when the spread is
    tiny compared with the mean. Values in ``[-1e-10, 0)`` are clamped to 0.
    """
    check_same_dim(rho, X)
    mean = expectation(rho, X)
    Y = X.matrix - mean * np.eye(X.dim)
    if rho.vector is not None:
        y = Y @ rho.vector
        var = float(np.vdot(y, y).real)
    else:
        var = float(np.sum((rho.matrix @ Y) * Y.T).real)
    if var < 0:
        if var < -1e-10:
            raise NegativeVariance(f"variance {var:.3e} is negative")
        var = 0.0
    return var, float(np.sqrt(var))


@dataclass(frozen=True)
class OutcomeDistribution:
    eigenvalues: np.ndarray
    probabilities: np.ndarray
    degeneracies: np.ndarray

    @property
    def entries(self):
        return list(
            zip(self.eigenvalues.tolist(), self.probabilities.tolist(), self.degeneracies.tolist())
        )

    def mean(self):
        return float(np.dot(self.eigenvalues, self.probabilities))

    def probability_of(self, value):
        """Probability of the eigenvalue group closest to ``value``."""
        return float(self.probabilities[np.argmin(np.abs(self.eigenvalues - value))])

    def __len__(self):
        return len(self.eigenvalues)


def outcome_distribution(rho, A):
    """Probabilities ``W(a_n) = Tr(rho A_n)`` over the eigenvalue groups of ``A``.

    Raises NotDensityOperator when a probability is below -1e-12.
    """
    check_same_dim(rho, A)
    D = A.spectrum
    V = D.eigenvectors
    # <v_k| rho |v_k> for every eigenvector; group sums give Tr(rho A_n)
    if rho.vector is not None:
        diag = np.abs(V.conj().T @ rho.vector) ** 2
    else:
        diag = np.einsum("ik,ij,jk->k", V.conj(), rho.matrix, V).real
    values, probs, degens = [], [], []
    for g in D.groups:
        values.append(g.value)
        probs.append(diag[list(g.indices)].sum())
        degens.append(g.degeneracy)
    probs = np.array(probs)
    if probs.min() < -1e-12:
        raise NotDensityOperator(f"negative outcome probability {probs.min():.3e}")
    probs = np.clip(probs, 0.0, None)
    probs = probs / probs.sum()
    return OutcomeDistribution(
        readonly(np.array(values)), readonly(probs), readonly(np.array(degens, dtype=int))
    )


@dataclass(frozen=True)
class UncertaintyReport:
    delta_a: float
    delta_b: float
    product: float
    bound: float
    satisfied: bool
    slack: float


def uncertainty_check(rho, A, B):
    """Compare ``dA dB`` with ``|<C>|/2`` where ``AB - BA = iC``."""
    check_same_dim(rho, A, B)
    _, da = variance(rho, A)
    _, db = variance(rho, B)
    C = c_operator(A, B)
    bound = abs(expectation(rho, C)) / 2.0
    product = da * db
    slack = product - bound
    return UncertaintyReport(da, db, product, bound, slack >= -UNCERTAINTY_SLACK_TOL, slack)


@dataclass(frozen=True, eq=False)
class ObservableBasis:
    """``n^2 - 1`` Hermitian, traceless operators with ``Tr(G_i G_j) = 2 delta_ij``."""

    dim: int
    operators: tuple

    def __post_init__(self):
        if len(self.operators) != self.dim**2 - 1:
            raise InvalidDimension(
                f"need {self.dim**2 - 1} operators for dimension {self.dim}, "
                f"got {len(self.operators)}"
            )
        for G in self.operators:
            if G.dim != self.dim:
                raise DimensionMismatch("basis operator dimension differs from basis dimension")

    @property
    def stack(self):
        return np.stack([G.matrix for G in self.operators])

    def __len__(self):
        return len(self.operators)

    def __iter__(self):
        return iter(self.operators)


def observable_basis(dim):
    """Generalized Gell-Mann basis: symmetric, antisymmetric, then diagonal operators.

    For ``dim == 2`` this is (sigma_x, sigma_y, sigma_z).
    """
    n = check_int(dim, "dim", 2, InvalidDimension)
    sym, anti, diag = [], [], []
    for j in range(n):
        for k in range(j + 1, n):
            S = np.zeros((n, n), dtype=np.complex128)
            S[j, k] = S[k, j] = 1.0
            sym.append(hermitian_from_matrix(S, label=f"S{j}{k}"))
            Am = np.zeros((n, n), dtype=np.complex128)
            Am[j, k] = -1j
            Am[k, j] = 1j
            anti.append(hermitian_from_matrix(Am, label=f"A{j}{k}"))
    for l in range(1, n):
        d = np.zeros(n)
        d[:l] = 1.0
        d[l] = -l
        d *= np.sqrt(2.0 / (l * (l + 1)))
        diag.append(hermitian_from_matrix(np.diag(d).astype(np.complex128), label=f"D{l}"))
    if n == 2:
        # Pauli names for the qubit case
        sym[0] = HermitianOperator(sym[0].matrix, "sigma_x")
        anti[0] = HermitianOperator(anti[0].matrix, "sigma_y")
        diag[0] = HermitianOperator(diag[0].matrix, "sigma_z")
    ops = []
    for s, a in zip(sym, anti):
        ops.extend((s, a))
    ops.extend(diag)
    return ObservableBasis(n, tuple(ops))


def expectations_from_state(rho, basis):
    """Vector of ``Tr(rho G_i)`` over the basis."""
    if rho.dim != basis.dim:
        raise DimensionMismatch(f"state dimension {rho.dim} != basis dimension {basis.dim}")
    return np.array([expectation(rho, G) for G in basis.operators])


def state_from_expectations(values, basis):
    """Unique density operator ``I/n + 1/2 sum_i v_i G_i`` with the given expectation values.

    Raises
    ------
    NotPositive
        The reconstructed operator has an eigenvalue below -1e-10.
    """
    v = np.asarray(values, dtype=float).ravel()
    if v.size != len(basis):
        raise DimensionMismatch(f"expected {len(basis)} values, got {v.size}")
    n = basis.dim
    M = np.eye(n, dtype=np.complex128) / n + 0.5 * np.tensordot(v, basis.stack, axes=1)
    try:
        return DensityOperator.from_matrix(M, label="tomography")
    except NotDensityOperator as exc:
        raise NotPositive(f"expectation values do not describe a state: {exc}") from exc
