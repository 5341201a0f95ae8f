"""Unitary evolution of density operators.

Constant Hamiltonians use the exact propagator ``exp(-i t H / hbar)``.
Time-dependent ones are integrated with an ordered product of midpoint
exponentials, ``U <- exp(-i dt H(t + dt/2) / hbar) U``, which is unitary at
every step and second-order accurate in ``dt``.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from ._validation import check_positive, check_same_dim, readonly
from .density import DensityOperator
from .exceptions import DimensionMismatch, InvalidSchedule, InvalidStep
from .measurement import expectation
from .operators import HermitianOperator, unitary_exp

__all__ = [
    "Schedule",
    "TrajectoryRecord",
    "evolve_const",
    "evolve_timedep",
    "propagator",
    "trajectory",
    "von_neumann_rhs",
]


class Schedule:
    """Hamiltonian as a function of time.

    Build with :meth:`constant`, :meth:`piecewise` or :meth:`sampled`.
    """

    CONSTANT = "Constant"
    PIECEWISE = "Piecewise"
    SAMPLED = "Sampled"

    def __init__(self, kind, *, hamiltonian=None, segments=(), callback=None, dim=None):
        self.kind = kind
        self.hamiltonian = hamiltonian
        self.segments = tuple(segments)
        self.callback = callback
        self.dim = dim

    @classmethod
    def constant(cls, H):
        return cls(cls.CONSTANT, hamiltonian=H, dim=H.dim)

    @classmethod
    def piecewise(cls, segments):
        """``segments`` is a sequence of ``(t_start, H)``; H applies until the next start."""
        segs = [(float(t), H) for t, H in segments]
        if not segs:
            raise InvalidSchedule("piecewise schedule needs at least one segment")
        starts = [t for t, _ in segs]
        if any(b <= a for a, b in zip(starts, starts[1:])):
            raise InvalidSchedule(f"segment start times must increase strictly: {starts}")
        if len({H.dim for _, H in segs}) > 1:
            raise DimensionMismatch("piecewise Hamiltonians differ in dimension")
        return cls(cls.PIECEWISE, segments=segs, dim=segs[0][1].dim)

    @classmethod
    def sampled(cls, callback, dim):
        """``callback(t)`` must return a HermitianOperator of dimension ``dim``."""
        return cls(cls.SAMPLED, callback=callback, dim=int(dim))

    def at(self, t):
        if self.kind == self.CONSTANT:
            return self.hamiltonian
        if self.kind == self.PIECEWISE:
            H = self.segments[0][1]
            for start, Hs in self.segments:
                if t >= start:
                    H = Hs
                else:
                    break
            return H
        H = self.callback(t)
        if not isinstance(H, HermitianOperator) or H.dim != self.dim:
            raise InvalidSchedule(f"schedule callback returned an invalid operator at t={t}")
        return H

    def __repr__(self):
        return f"Schedule({self.kind}, dim={self.dim})"


def _conjugate(rho, U, label=""):
    if rho.vector is not None:
        return DensityOperator(vector=U @ rho.vector, label=label)
    R = U @ rho.matrix @ U.conj().T
    return DensityOperator(0.5 * (R + R.conj().T), label=label)


def evolve_const(rho0, H, t, hbar=1.0):
    """``U rho0 U^H`` with ``U = exp(-i t H / hbar)``."""
    check_same_dim(rho0, H)
    if t == 0:
        return rho0
    U = unitary_exp(H, t, hbar)
    return _conjugate(rho0, U.matrix, label=rho0.label)


def _step_count(duration, dt):
    n = duration / dt
    return max(1, int(round(n)) if abs(n - round(n)) < 1e-9 * max(1.0, n) else math.ceil(n))


def propagator(sched, t_final, dt, hbar=1.0, t0=0.0):
    """Midpoint-product propagator from ``t0`` to ``t_final``."""
    dt = float(dt)
    hbar = check_positive(hbar, "hbar")
    if not np.isfinite(dt) or dt <= 0:
        raise InvalidStep(f"dt must be positive, got {dt}")
    duration = float(t_final) - float(t0)
    if duration < 0:
        raise InvalidStep(f"t_final {t_final} precedes start {t0}")
    if duration == 0:
        return np.eye(sched.dim, dtype=np.complex128)
    if dt > duration * (1 + 1e-12):
        raise InvalidStep(f"dt = {dt} exceeds the evolution time {duration}")
    n = _step_count(duration, dt)
    h = duration / n
    U = np.eye(sched.dim, dtype=np.complex128)
    if sched.kind == Schedule.CONSTANT:
        step = unitary_exp(sched.hamiltonian, h, hbar).matrix
        for _ in range(n):
            U = step @ U
        return U
    for k in range(n):
        Hm = sched.at(t0 + (k + 0.5) * h)
        U = unitary_exp(Hm, h, hbar).matrix @ U
    return U


def evolve_timedep(rho0, sched, t_final, dt=None, hbar=1.0, t0=0.0):
    """Evolve ``rho0`` under a time-dependent Hamiltonian.

    ``dt`` defaults to ``(t_final - t0)/1000`` and is shrunk so an integer
    number of equal steps spans the interval.
    """
    if sched.dim != rho0.dim:
        raise DimensionMismatch(f"schedule dimension {sched.dim} != state dimension {rho0.dim}")
    if dt is None:
        dt = (float(t_final) - float(t0)) / 1000.0
        if dt <= 0:
            return rho0
    U = propagator(sched, t_final, dt, hbar, t0)
    return _conjugate(rho0, U, label=rho0.label)


def von_neumann_rhs(rho, H, hbar=1.0):
    """``d rho / dt = -(i/hbar) (H rho - rho H)`` as a matrix."""
    check_same_dim(rho, H)
    R = rho.matrix
    return (-1j / hbar) * (H.matrix @ R - R @ H.matrix)


@dataclass(frozen=True, eq=False)
class TrajectoryRecord:
    times: np.ndarray
    states: tuple
    expectations: dict = field(default_factory=dict)
    purity: np.ndarray = None
    trace_error: np.ndarray = None

    def drift(self, label):
        """Largest deviation of an expectation series from its initial value."""
        s = self.expectations[label]
        return float(np.max(np.abs(s - s[0])))


def trajectory(rho0, sched, times, observables, hbar=1.0, dt=None):
    """States and expectation-value series of ``observables`` at ``times``.

    ``observables`` is a mapping ``label -> HermitianOperator`` or a sequence of
    operators keyed by their labels. Non-constant schedules step between the
    requested times with steps no longer than ``dt`` (default ``times[-1]/1000``).
    """
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or times.size == 0:
        raise InvalidStep("times must be a non-empty 1-D sequence")
    if times[0] < 0 or np.any(np.diff(times) < 0):
        raise InvalidStep("times must be ascending and start at or after 0")
    if not isinstance(observables, dict):
        observables = {A.label: A for A in observables}
    for A in observables.values():
        check_same_dim(rho0, A)
    if dt is None:
        dt = times[-1] / 1000.0 if times[-1] > 0 else 1.0

    states = []
    if sched.kind == Schedule.CONSTANT:
        states = [evolve_const(rho0, sched.hamiltonian, t, hbar) for t in times]
    else:
        rho, t_prev = rho0, 0.0
        for t in times:
            if t > t_prev:
                rho = evolve_timedep(rho, sched, t, min(dt, t - t_prev), hbar, t0=t_prev)
            states.append(rho)
            t_prev = t

    series = {
        label: readonly(np.array([expectation(r, A) for r in states]))
        for label, A in observables.items()
    }
    purity = readonly(np.array([r.purity for r in states]))
    trace_error = readonly(np.array([abs(r.trace - 1.0) for r in states]))
    return TrajectoryRecord(readonly(times.copy()), tuple(states), series, purity, trace_error)
