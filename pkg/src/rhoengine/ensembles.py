"""Ensembles of identically or heterogeneously prepared members.

Members are sampled one measurement each, with outcome probabilities from the
member's density operator. Every member owns a counter-based random stream:
member ``i`` reads word ``i`` of the Philox stream keyed by the seed, which
``numpy.random.Philox`` can produce either in bulk or individually (counter
``i // 4``, lane ``i % 4``). Results therefore do not depend on the order in
which members are processed.

Homogeneity is tested by splitting the records (by preparation label or into
seeded random halves) and running a Pearson chi-square test of the outcome
frequencies across the parts. One measurement per member is the observable
proxy for a split, and only these two partition families are tried.
"""

from dataclasses import dataclass

import numpy as np
from scipy import stats

from ._validation import check_int
from .density import MixtureSpec, mixture
from .exceptions import DimensionMismatch, InsufficientData
from .measurement import outcome_distribution

__all__ = [
    "EnsembleSpec",
    "OutcomeRecord",
    "OutcomeRecords",
    "ByLabel",
    "RandomHalves",
    "HomogeneityVerdict",
    "effective_density",
    "member_uniforms",
    "member_uniform",
    "sample_measurements",
    "subdivision_test",
    "two_population_test",
]

_MASK64 = (1 << 64) - 1
MIN_EXPECTED = 5.0


@dataclass(frozen=True, eq=False)
class EnsembleSpec:
    """Labeled subpopulations ``(label, count, rho)``.

    A homogeneous ensemble is a single subpopulation; build it with
    :meth:`homogeneous`. :meth:`heterogeneous` takes several.
    """

    groups: tuple
    homogeneous_kind: bool = False

    def __post_init__(self):
        groups = tuple((str(lbl), int(n), rho) for lbl, n, rho in self.groups)
        if not groups:
            raise ValueError("an ensemble needs at least one subpopulation")
        for lbl, n, _ in groups:
            if n < 1:
                raise ValueError(f"count for {lbl!r} must be >= 1, got {n}")
        if len({rho.dim for _, _, rho in groups}) > 1:
            raise DimensionMismatch("ensemble members differ in dimension")
        object.__setattr__(self, "groups", groups)

    @classmethod
    def homogeneous(cls, n_members, rho, label="all"):
        n = check_int(n_members, "n_members", 1)
        return cls(((label, n, rho),), True)

    @classmethod
    def heterogeneous(cls, groups):
        return cls(tuple(groups), False)

    @property
    def kind(self):
        return "Homogeneous" if self.homogeneous_kind else "Heterogeneous"

    @property
    def size(self):
        return sum(n for _, n, _ in self.groups)

    @property
    def dim(self):
        return self.groups[0][2].dim


@dataclass(frozen=True)
class OutcomeRecord:
    member_index: int
    label: str
    eigenvalue: float


@dataclass(frozen=True, eq=False)
class OutcomeRecords:
    """Columnar sequence of :class:`OutcomeRecord`."""

    member_index: np.ndarray
    labels: np.ndarray
    eigenvalues: np.ndarray
    spectrum: np.ndarray

    def __len__(self):
        return len(self.member_index)

    def __getitem__(self, i):
        return OutcomeRecord(int(self.member_index[i]), str(self.labels[i]), float(self.eigenvalues[i]))

    def __iter__(self):
        for i in range(len(self)):
            yield self[i]

    def mean(self):
        return float(np.mean(self.eigenvalues))

    def frequencies(self):
        """Relative frequency of each eigenvalue in ``spectrum``."""
        idx = np.searchsorted(self.spectrum, self.eigenvalues)
        return np.bincount(idx, minlength=len(self.spectrum)) / len(self)


def effective_density(spec):
    """The ensemble's density operator, ``sum_i (n_i / N) rho_i``."""
    if spec.homogeneous_kind or len(spec.groups) == 1:
        return spec.groups[0][2]
    total = spec.size
    return mixture(MixtureSpec(tuple((n / total, rho) for _, n, rho in spec.groups)))


def _key(seed):
    return [int(seed) & _MASK64, 0]


def _to_unit(words):
    # top 53 bits -> [0, 1)
    return (words >> np.uint64(11)).astype(np.float64) * (1.0 / 9007199254740992.0)


def member_uniforms(seed, n_members):
    """Uniform draws of members ``0 .. n_members-1`` in one pass."""
    return _to_unit(np.random.Philox(key=_key(seed)).random_raw(int(n_members)))


def member_uniform(seed, member_index):
    """Uniform draw of a single member, computed from its counter alone."""
    i = int(member_index)
    block = np.random.Philox(key=_key(seed), counter=[i // 4, 0, 0, 0]).random_raw(4)
    return float(_to_unit(block[i % 4 : i % 4 + 1])[0])


def sample_measurements(spec, A, seed):
    """One ideal measurement of ``A`` per member.

    Members are numbered consecutively through the subpopulations in order.
    Each outcome is an eigenvalue of ``A`` drawn with probability
    ``Tr(rho A_n)`` for the member's ``rho``.
    """
    if spec.dim != A.dim:
        raise DimensionMismatch(f"ensemble dimension {spec.dim} != observable dimension {A.dim}")
    u = member_uniforms(seed, spec.size)
    spectrum = np.array([g.value for g in A.spectrum.groups])
    values = np.empty(spec.size)
    labels = np.empty(spec.size, dtype=object)
    start = 0
    for label, n, rho in spec.groups:
        dist = outcome_distribution(rho, A)
        cdf = np.cumsum(dist.probabilities)
        idx = np.searchsorted(cdf, u[start : start + n], side="right")
        idx = np.minimum(idx, len(cdf) - 1)
        # outcomes with zero probability are never selected
        idx = _skip_zero_bins(idx, dist.probabilities)
        values[start : start + n] = dist.eigenvalues[idx]
        labels[start : start + n] = label
        start += n
    return OutcomeRecords(np.arange(spec.size), labels, values, spectrum)


def _skip_zero_bins(idx, probs):
    if np.all(probs[idx] > 0):
        return idx
    nonzero = np.flatnonzero(probs > 0)
    pos = np.searchsorted(nonzero, idx)
    return nonzero[np.minimum(pos, len(nonzero) - 1)]


@dataclass(frozen=True)
class ByLabel:
    def assign(self, records):
        labels = records.labels
        names = list(dict.fromkeys(labels.tolist()))
        lookup = {name: k for k, name in enumerate(names)}
        return np.array([lookup[lbl] for lbl in labels]), names

    def describe(self):
        return "ByLabel"


@dataclass(frozen=True)
class RandomHalves:
    seed: int = 0

    def assign(self, records):
        n = len(records)
        perm = np.random.default_rng(self.seed).permutation(n)
        groups = np.empty(n, dtype=int)
        groups[perm[: n // 2]] = 0
        groups[perm[n // 2 :]] = 1
        return groups, ["half0", "half1"]

    def describe(self):
        return f"RandomHalves(seed={self.seed})"


@dataclass(frozen=True)
class HomogeneityVerdict:
    partition: str
    statistic: float
    p_value: float
    dof: int
    alpha: float
    table: tuple

    def homogeneous_at(self, alpha=None):
        return self.p_value >= (self.alpha if alpha is None else alpha)

    @property
    def homogeneous(self):
        return self.homogeneous_at()


def _merge_sparse_bins(table):
    """Merge outcome columns until every expected count is at least 5."""
    cols = [table[:, k].astype(float) for k in range(table.shape[1]) if table[:, k].sum() > 0]
    rows = table.sum(axis=1).astype(float)
    total = rows.sum()
    while len(cols) > 1:
        col_tot = np.array([c.sum() for c in cols])
        expected_min = rows.min() * col_tot / total
        k = int(np.argmin(col_tot))
        if expected_min[k] >= MIN_EXPECTED:
            break
        # fold the sparsest outcome into its smaller neighbour
        if k == 0:
            j = 1
        elif k == len(cols) - 1:
            j = k - 1
        else:
            j = k - 1 if col_tot[k - 1] <= col_tot[k + 1] else k + 1
        cols[j] = cols[j] + cols[k]
        del cols[k]
    return np.column_stack(cols) if cols else np.zeros((table.shape[0], 0))


def _contingency(groups, n_groups, records):
    idx = np.searchsorted(records.spectrum, records.eigenvalues)
    table = np.zeros((n_groups, len(records.spectrum)), dtype=np.int64)
    np.add.at(table, (groups, idx), 1)
    return table


def _chi_square(table, description, alpha):
    if table.shape[0] < 2:
        raise InsufficientData("need at least two subensembles")
    if np.any(table.sum(axis=1) < MIN_EXPECTED):
        raise InsufficientData(f"a subensemble has fewer than {MIN_EXPECTED:g} members")
    merged = _merge_sparse_bins(table)
    if merged.shape[1] <= 1:
        # a single outcome bin: every subensemble reproduces the whole trivially
        return HomogeneityVerdict(description, 0.0, 1.0, 0, alpha, tuple(map(tuple, table)))
    res = stats.chi2_contingency(merged, correction=False)
    return HomogeneityVerdict(
        description, float(res[0]), float(res[1]), int(res[2]), alpha, tuple(map(tuple, table))
    )


def subdivision_test(records, partition=None, alpha=0.01):
    """Chi-square test that every subensemble shows the same outcome frequencies.

    Raises
    ------
    InsufficientData
        Fewer than two subensembles, or a subensemble with fewer than 5 members.
    """
    partition = ByLabel() if partition is None else partition
    groups, names = partition.assign(records)
    table = _contingency(groups, len(names), records)
    return _chi_square(table, partition.describe(), float(alpha))


def two_population_test(records_a, records_b, alpha=0.01):
    """Chi-square test that two independent populations share one outcome distribution."""
    spectrum = np.union1d(records_a.spectrum, records_b.spectrum)
    table = np.zeros((2, len(spectrum)), dtype=np.int64)
    for row, rec in enumerate((records_a, records_b)):
        idx = np.searchsorted(spectrum, rec.eigenvalues)
        np.add.at(table[row], idx, 1)
    return _chi_square(table, "TwoPopulations", float(alpha))
