import numpy as np
import pytest

from conftest import SX, SZ, rand_herm
from rhoengine import (
    DensityOperator,
    DimensionMismatch,
    GridSystem,
    InvalidSchedule,
    InvalidStep,
    Schedule,
    evolve_const,
    evolve_timedep,
    grid_operators,
    hermitian_from_matrix,
    mixture,
    projector_from_vector,
    propagator,
    random_density,
    ring_cosine,
    ring_plane_wave,
    trajectory,
    von_neumann_rhs,
)
from rhoengine.demos import driven_qubit_schedule

S = 1 / np.sqrt(2)
H_LARMOR = hermitian_from_matrix(0.5 * SZ, label="H")
SIGMA_X = hermitian_from_matrix(SX, label="sx")
PLUS_X = projector_from_vector([S, S])


def _spectrum(rho):
    return np.linalg.eigvalsh(rho.matrix)


def test_zero_time_returns_input(rng):
    rho = random_density(3, 2, 1)
    assert evolve_const(rho, rand_herm(3, rng), 0.0) is rho


@pytest.mark.parametrize("t", [0.1, 1.0, np.pi])
def test_larmor_precession(t):
    rho = evolve_const(PLUS_X, H_LARMOR, t)
    assert abs(np.trace(rho.matrix @ SX).real - np.cos(t)) <= 1e-10


def test_stationary_eigenstate(rng):
    H = rand_herm(5, rng)
    rho0 = projector_from_vector(H.spectrum.eigenvectors[:, 3])
    for t in (0.3, 2.0, 17.0):
        assert np.abs(evolve_const(rho0, H, t).matrix - rho0.matrix).max() <= 1e-10


def test_unitary_invariants(rng):
    H = rand_herm(6, rng)
    rho0 = random_density(6, 4, 8)
    rho = evolve_const(rho0, H, 2.3, hbar=0.6)
    assert np.allclose(_spectrum(rho), _spectrum(rho0), atol=1e-9)
    assert rho.purity == pytest.approx(rho0.purity, abs=1e-12)


def test_composition(rng):
    H = rand_herm(4, rng)
    rho0 = random_density(4, 3, 2)
    a = evolve_const(evolve_const(rho0, H, 0.4), H, 1.1).matrix
    assert np.linalg.norm(a - evolve_const(rho0, H, 1.5).matrix) <= 1e-9


def test_dimension_mismatch(rng):
    with pytest.raises(DimensionMismatch):
        evolve_const(PLUS_X, rand_herm(3, rng), 1.0)
    with pytest.raises(DimensionMismatch):
        evolve_timedep(PLUS_X, Schedule.constant(rand_herm(3, rng)), 1.0)


def test_constant_schedule_matches_exact(rng):
    H = rand_herm(4, rng)
    rho0 = random_density(4, 2, 3)
    t = 2.0
    a = evolve_timedep(rho0, Schedule.constant(H), t, t / 1000).matrix
    assert np.linalg.norm(a - evolve_const(rho0, H, t).matrix) <= 1e-9


def test_invalid_steps():
    sched = Schedule.constant(H_LARMOR)
    with pytest.raises(InvalidStep):
        evolve_timedep(PLUS_X, sched, 1.0, 0.0)
    with pytest.raises(InvalidStep):
        evolve_timedep(PLUS_X, sched, 1.0, -0.1)
    with pytest.raises(InvalidStep):
        evolve_timedep(PLUS_X, sched, 1.0, 2.0)


def test_piecewise_schedule():
    H1 = hermitian_from_matrix(SZ)
    H2 = hermitian_from_matrix(SX)
    sched = Schedule.piecewise([(0.0, H1), (1.0, H2)])
    assert sched.at(0.5) is H1 and sched.at(1.0) is H2 and sched.at(-1.0) is H1
    # steps align with the switch, so the product is exact
    got = evolve_timedep(PLUS_X, sched, 2.0, 0.25)
    want = evolve_const(evolve_const(PLUS_X, H1, 1.0), H2, 1.0)
    assert np.allclose(got.matrix, want.matrix, atol=1e-12)
    with pytest.raises(InvalidSchedule):
        Schedule.piecewise([(1.0, H1), (0.5, H2)])
    with pytest.raises(InvalidSchedule):
        Schedule.piecewise([])


def test_sampled_schedule_contract():
    bad = Schedule.sampled(lambda t: np.eye(2), 2)
    with pytest.raises(InvalidSchedule):
        evolve_timedep(PLUS_X, bad, 1.0, 0.5)


def test_midpoint_second_order():
    sched = driven_qubit_schedule(1.0, 0.8)
    rho0 = mixture([(0.75, PLUS_X), (0.25, projector_from_vector([1, 0]))])
    T = 3.0
    ref = evolve_timedep(rho0, sched, T, T / 6400).matrix
    errs = [np.linalg.norm(evolve_timedep(rho0, sched, T, T / n).matrix - ref) for n in (50, 100, 200)]
    ratios = [errs[i] / errs[i + 1] for i in range(2)]
    assert all(3.5 <= r <= 4.5 for r in ratios), ratios


def test_long_run_conservation():
    sched = driven_qubit_schedule(1.0, 0.3)
    rho0 = mixture([(0.75, PLUS_X), (0.25, projector_from_vector([S, -S]))])
    rho = evolve_timedep(rho0, sched, 5.0, 5.0 / 10_000)
    assert abs(rho.trace - 1) <= 1e-10
    assert abs(rho.purity - rho0.purity) <= 1e-9
    assert np.allclose(_spectrum(rho), _spectrum(rho0), atol=1e-8)


def test_propagator_is_unitary():
    U = propagator(driven_qubit_schedule(), 2.0, 0.01)
    assert np.linalg.norm(U.conj().T @ U - np.eye(2)) <= 1e-10


def test_von_neumann_finite_difference(rng):
    H = rand_herm(4, rng)
    rho0 = random_density(4, 2, 5)
    t, hbar = 0.7, 0.8
    errs = []
    for h in (1e-2, 5e-3, 2.5e-3):
        fd = (evolve_const(rho0, H, t + h, hbar).matrix - evolve_const(rho0, H, t - h, hbar).matrix) / (2 * h)
        errs.append(np.linalg.norm(fd - von_neumann_rhs(evolve_const(rho0, H, t, hbar), H, hbar)))
    ratios = [errs[i] / errs[i + 1] for i in range(2)]
    assert all(3.5 <= r <= 4.5 for r in ratios), ratios


def test_trajectory_energy_and_purity():
    rho0 = mixture([(0.6, PLUS_X), (0.4, projector_from_vector([0, 1]))])
    times = np.linspace(0, 10, 51)
    rec = trajectory(rho0, Schedule.constant(H_LARMOR), times, [H_LARMOR, SIGMA_X])
    assert len(rec.states) == len(times) == len(rec.purity) == len(rec.trace_error)
    assert rec.drift("H") <= 1e-9
    assert np.abs(rec.purity - rec.purity[0]).max() <= 1e-9
    assert rec.trace_error.max() <= 1e-10
    assert rec.drift("sx") > 0.1


def test_trajectory_free_particle_momentum():
    g = GridSystem(1.0, 64)
    _, p, H = grid_operators(g)
    rho0 = mixture([(0.5, ring_cosine(g, 2).density()), (0.5, ring_plane_wave(g, 5).density())])
    rec = trajectory(rho0, Schedule.constant(H), [0.0, 0.01, 0.05], {"p": p, "H": H})
    assert rec.drift("p") <= 1e-9
    assert rec.drift("H") <= 1e-9 * abs(rec.expectations["H"][0])


def test_trajectory_timedep_matches_single_run():
    sched = driven_qubit_schedule()
    rec = trajectory(PLUS_X, sched, [0.0, 1.0, 2.0], [SIGMA_X], dt=0.01)
    direct = evolve_timedep(PLUS_X, sched, 2.0, 0.01)
    assert np.allclose(rec.states[-1].matrix, direct.matrix, atol=1e-12)


def test_trajectory_rejects_bad_times():
    with pytest.raises(InvalidStep):
        trajectory(PLUS_X, Schedule.constant(H_LARMOR), [1.0, 0.5], [SIGMA_X])
    with pytest.raises(InvalidStep):
        trajectory(PLUS_X, Schedule.constant(H_LARMOR), [-1.0], [SIGMA_X])


def test_mixed_state_evolution_keeps_matrix_form():
    rho0 = DensityOperator(np.eye(2) / 2)
    assert np.allclose(evolve_const(rho0, H_LARMOR, 1.0).matrix, np.eye(2) / 2)
