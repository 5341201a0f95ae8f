import numpy as np
import pytest

from conftest import SX, SZ
from rhoengine import (
    ByLabel,
    DensityOperator,
    DimensionMismatch,
    EnsembleSpec,
    InsufficientData,
    RandomHalves,
    effective_density,
    hermitian_from_matrix,
    member_uniform,
    member_uniforms,
    projector_from_vector,
    random_density,
    sample_measurements,
    subdivision_test,
    two_population_test,
)

S = 1 / np.sqrt(2)
KET = {k: projector_from_vector(v) for k, v in {"0": [1, 0], "1": [0, 1], "+": [S, S], "-": [S, -S]}.items()}
HALF = DensityOperator(np.eye(2) / 2)
SIGZ = hermitian_from_matrix(SZ)
SIGX = hermitian_from_matrix(SX)


def z_mix(n=5000):
    return EnsembleSpec.heterogeneous([("0", n, KET["0"]), ("1", n, KET["1"])])


def x_mix(n=5000):
    return EnsembleSpec.heterogeneous([("+", n, KET["+"]), ("-", n, KET["-"])])


def test_effective_densities_agree():
    a, b = effective_density(z_mix()).matrix, effective_density(x_mix()).matrix
    assert np.abs(a - np.eye(2) / 2).max() <= 1e-15
    assert np.linalg.norm(a - b) <= 1e-15


def test_effective_density_homogeneous_identity():
    rho = random_density(3, 2, 4)
    assert effective_density(EnsembleSpec.homogeneous(10, rho)) is rho


def test_effective_density_weights():
    spec = EnsembleSpec.heterogeneous([("0", 1, KET["0"]), ("1", 3, KET["1"])])
    assert np.allclose(effective_density(spec).matrix, np.diag([0.25, 0.75]))


def test_spec_validation():
    with pytest.raises(ValueError):
        EnsembleSpec.heterogeneous([("0", 0, KET["0"])])
    with pytest.raises(DimensionMismatch):
        EnsembleSpec.heterogeneous([("0", 1, KET["0"]), ("x", 1, projector_from_vector([1, 0, 0]))])
    assert z_mix().kind == "Heterogeneous" and z_mix().size == 10_000
    assert EnsembleSpec.homogeneous(5, HALF).kind == "Homogeneous"


def test_counter_streams_are_order_independent():
    bulk = member_uniforms(42, 1000)
    picks = [999, 0, 517, 3, 4, 250]
    assert [member_uniform(42, i) for i in picks] == [bulk[i] for i in picks]
    assert np.all((bulk >= 0) & (bulk < 1))
    assert not np.array_equal(bulk, member_uniforms(43, 1000))


def test_sampling_deterministic_branch():
    rec = sample_measurements(EnsembleSpec.homogeneous(500, KET["1"]), SIGZ, 1)
    assert np.all(rec.eigenvalues == -1.0)
    assert rec[3].label == "all" and rec[3].member_index == 3


def test_sampling_binomial_concentration():
    rec = sample_measurements(EnsembleSpec.homogeneous(10_000, HALF), SIGZ, 7)
    freq_plus = np.mean(rec.eigenvalues == 1.0)
    assert abs(freq_plus - 0.5) <= 3 * np.sqrt(0.25 / 10_000)


def test_sampling_reproducible():
    a = sample_measurements(z_mix(), SIGX, 3)
    b = sample_measurements(z_mix(), SIGX, 3)
    assert np.array_equal(a.eigenvalues, b.eigenvalues)
    assert list(a.labels) == list(b.labels)


def test_sampling_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        sample_measurements(z_mix(), hermitian_from_matrix(np.eye(3)), 0)


@pytest.mark.parametrize("seed", range(5))
def test_empirical_mean_converges(seed):
    rho = random_density(4, 3, seed)
    A = hermitian_from_matrix(np.diag([-1.0, 0.5, 2.0, 3.0]) + 0.3 * np.ones((4, 4)))
    rec = sample_measurements(EnsembleSpec.homogeneous(20_000, rho), A, seed)
    mean_true = np.real(np.trace(rho.matrix @ A.matrix))
    se = np.std(rec.eigenvalues) / np.sqrt(len(rec))
    assert abs(rec.mean() - mean_true) <= 4 * se


def test_bylabel_rejects_z_mixture():
    v = subdivision_test(sample_measurements(z_mix(), SIGZ, 0), ByLabel())
    assert v.p_value < 1e-6 and not v.homogeneous_at(0.01)
    assert v.partition == "ByLabel" and v.dof == 1


def test_bylabel_accepts_z_mixture_in_x_basis():
    v = subdivision_test(sample_measurements(z_mix(), SIGX, 0), ByLabel())
    assert v.homogeneous_at(0.01)


def test_random_halves_calibration():
    spec = EnsembleSpec.homogeneous(10_000, HALF)
    passed = sum(
        subdivision_test(sample_measurements(spec, SIGZ, s), RandomHalves(s)).homogeneous_at(0.01)
        for s in range(100)
    )
    assert passed >= 95


def test_effective_density_sufficiency():
    # equal effective densities: no observable separates the two populations
    passed = sum(
        two_population_test(sample_measurements(z_mix(), SIGX, s), sample_measurements(x_mix(), SIGX, 1000 + s))
        .homogeneous_at(0.01)
        for s in range(100)
    )
    assert passed >= 95


def test_insufficient_data():
    rec = sample_measurements(EnsembleSpec.homogeneous(50, HALF), SIGZ, 0)
    with pytest.raises(InsufficientData):
        subdivision_test(rec, ByLabel())
    tiny = sample_measurements(EnsembleSpec.heterogeneous([("a", 3, HALF), ("b", 50, HALF)]), SIGZ, 0)
    with pytest.raises(InsufficientData):
        subdivision_test(tiny)


def test_single_outcome_bin_is_homogeneous():
    rec = sample_measurements(EnsembleSpec.heterogeneous([("a", 20, KET["0"]), ("b", 20, KET["0"])]), SIGZ, 0)
    v = subdivision_test(rec)
    assert v.p_value == 1.0 and v.dof == 0


def test_sparse_bins_are_merged():
    # third outcome is rare; merging keeps the test well defined
    A = hermitian_from_matrix(np.diag([0.0, 1.0, 2.0]))
    rho = DensityOperator(np.diag([0.499, 0.499, 0.002]))
    rec = sample_measurements(EnsembleSpec.heterogeneous([("a", 400, rho), ("b", 400, rho)]), A, 5)
    v = subdivision_test(rec)
    assert v.dof == 1 and 0 <= v.p_value <= 1


def test_records_columnar_access():
    rec = sample_measurements(z_mix(10), SIGZ, 0)
    assert len(rec) == 20
    assert [r.eigenvalue for r in rec][:10] == [1.0] * 10
    assert np.allclose(rec.frequencies(), [0.5, 0.5])
