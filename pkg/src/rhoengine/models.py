"""Concrete one-dimensional systems.

Two grids discretize a line segment of length ``L``:

* ``Boundary.RING`` - periodic, ``N`` points at ``x = -L/2 + i L/N``. Momentum is
  the spectral (Fourier) derivative, so plane waves are exact eigenvectors with
  eigenvalues ``hbar 2 pi j / L`` for ``j = -N/2+1 .. N/2``.
* ``Boundary.HARDWALL`` - infinite well on ``[-a, a]`` with ``a = L/2``, ``N``
  interior points at spacing ``L/(N+1)``. The free Hamiltonian is the
  second-difference Laplacian with zero boundary values; momentum is the
  central difference. Both are Hermitian matrices, which sidesteps the
  continuum fact that ``p`` is not self-adjoint on an interval with vanishing
  boundary values.

Spin multiplets and the closed-form momentum density of the well eigenstates
live here too.
"""

import enum
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ._validation import check_int, check_positive, readonly
from .density import projector_from_vector
from .exceptions import (
    InvalidGrid,
    InvalidMode,
    InvalidSpin,
    ModeOutOfRange,
    NotNormalized,
    PacketTooWide,
    PacketUnresolved,
    WrongBoundary,
)
from .operators import HermitianOperator, hermitian_from_matrix

__all__ = [
    "Boundary",
    "GridSystem",
    "WaveVector",
    "grid_operators",
    "p_squared_operator",
    "ring_wavenumbers",
    "ring_plane_wave",
    "ring_cosine",
    "well_eigenstate",
    "well_energy",
    "well_momentum_density",
    "spin_operators",
    "gaussian_packet",
]


class Boundary(enum.Enum):
    RING = "Ring"
    HARDWALL = "HardWall"


@dataclass(frozen=True)
class GridSystem:
    length: float
    points: int
    boundary: Boundary = Boundary.RING
    mass: float = 1.0
    hbar: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "boundary", Boundary(self.boundary))
        object.__setattr__(self, "length", check_positive(self.length, "length", InvalidGrid))
        object.__setattr__(self, "mass", check_positive(self.mass, "mass", InvalidGrid))
        object.__setattr__(self, "hbar", check_positive(self.hbar, "hbar", InvalidGrid))
        n = check_int(self.points, "points", 16, InvalidGrid)
        if self.boundary is Boundary.RING and n % 2:
            raise InvalidGrid(f"ring grids need an even number of points, got {n}")
        object.__setattr__(self, "points", n)

    @property
    def dx(self):
        if self.boundary is Boundary.RING:
            return self.length / self.points
        return self.length / (self.points + 1)

    @property
    def half_width(self):
        return self.length / 2.0

    @property
    def x_samples(self):
        i = np.arange(self.points)
        if self.boundary is Boundary.RING:
            return -self.length / 2.0 + i * self.dx
        return -self.length / 2.0 + (i + 1) * self.dx


@dataclass(frozen=True, eq=False)
class WaveVector:
    """Grid amplitudes normalized as ``sum |psi_i|^2 dx = 1``."""

    grid: GridSystem
    amplitudes: np.ndarray

    def __post_init__(self):
        amp = np.asarray(self.amplitudes, dtype=np.complex128)
        if amp.shape != (self.grid.points,):
            raise InvalidGrid(f"expected {self.grid.points} amplitudes, got shape {amp.shape}")
        norm = np.sum(np.abs(amp) ** 2) * self.grid.dx
        if abs(norm - 1.0) > 1e-10:
            raise NotNormalized(f"sum |psi|^2 dx = {norm!r}")
        object.__setattr__(self, "amplitudes", readonly(amp))

    def unit_vector(self):
        """Amplitudes rescaled to a unit vector in C^N."""
        return self.amplitudes * np.sqrt(self.grid.dx)

    def density(self, label=""):
        return projector_from_vector(self.unit_vector(), label=label)


def _normalized(grid, amp):
    return WaveVector(grid, amp / np.sqrt(np.sum(np.abs(amp) ** 2) * grid.dx))


def ring_wavenumbers(g):
    """Wavenumbers ``2 pi j / L`` in FFT order, with the Nyquist mode at ``+N/2``."""
    N = g.points
    j = np.fft.fftfreq(N, d=1.0 / N)
    j[N // 2] = N // 2
    return 2.0 * np.pi * j / g.length


def _circulant(spectrum):
    # C = F^H diag(spectrum) F  =>  C[m, n] = ifft(spectrum)[(m - n) mod N]
    N = spectrum.shape[0]
    col = np.fft.ifft(spectrum)
    i = np.arange(N)
    return col[(i[:, None] - i[None, :]) % N]


@lru_cache(maxsize=4)
def grid_operators(g):
    """Position, momentum and free Hamiltonian on the grid ``g``."""
    if not isinstance(g, GridSystem):
        raise InvalidGrid(f"expected a GridSystem, got {type(g).__name__}")
    N, dx, hbar, m = g.points, g.dx, g.hbar, g.mass
    X = np.diag(g.x_samples).astype(np.complex128)
    if g.boundary is Boundary.RING:
        pk = hbar * ring_wavenumbers(g)
        P = _circulant(pk)
        H = _circulant(pk**2 / (2.0 * m))
    else:
        up = np.eye(N, k=1)
        P = (-1j * hbar / (2.0 * dx)) * (up - up.T)
        H = (hbar**2 / (2.0 * m * dx**2)) * (2.0 * np.eye(N) - up - up.T)
    return (
        hermitian_from_matrix(X, label="x"),
        hermitian_from_matrix(P, label="p"),
        hermitian_from_matrix(H, label="H_free"),
    )


def p_squared_operator(g):
    """Discrete ``p^2`` observable, ``2 m0 H_free``.

    On a ring this equals ``p @ p`` exactly. On a hard wall it is the
    second-difference operator ``-hbar^2 d^2/dx^2``; the square of the
    central-difference ``p`` loses the wall rows and underestimates ``<p^2>``
    of the well eigenstates by a relative ``2/(N+1)``.
    """
    _, _, H = grid_operators(g)
    return HermitianOperator(readonly(2.0 * g.mass * H.matrix), "p^2")


def _require(g, boundary):
    if g.boundary is not boundary:
        raise WrongBoundary(f"needs a {boundary.value} grid, got {g.boundary.value}")


def _ring_mode(g, j):
    j = check_int(j, "j", exc=ModeOutOfRange)
    if abs(j) >= g.points // 2:
        raise ModeOutOfRange(f"|j| must be < N/2 = {g.points // 2}, got {j}")
    return j


def ring_plane_wave(g, j):
    """Plane wave ``exp(i k_j x)`` with ``k_j = 2 pi j / L`` on a ring."""
    _require(g, Boundary.RING)
    j = _ring_mode(g, j)
    k = 2.0 * np.pi * j / g.length
    return _normalized(g, np.exp(1j * k * g.x_samples))


def ring_cosine(g, j):
    """Standing wave ``exp(i k_j x) + exp(-i k_j x)`` on a ring."""
    _require(g, Boundary.RING)
    j = _ring_mode(g, j)
    k = 2.0 * np.pi * j / g.length
    x = g.x_samples
    return _normalized(g, np.exp(1j * k * x) + np.exp(-1j * k * x))


def well_energy(n, a, mass=1.0, hbar=1.0):
    """Energy ``n^2 pi^2 hbar^2 / (8 m a^2)`` of level ``n`` in a well of width ``2a``."""
    return n**2 * np.pi**2 * hbar**2 / (8.0 * mass * a**2)


def well_eigenstate(g, n):
    """Analytic well eigenfunction ``n`` sampled on a hard-wall grid, and its energy."""
    _require(g, Boundary.HARDWALL)
    n = check_int(n, "n", 1, InvalidMode)
    if n > g.points:
        raise InvalidMode(f"mode {n} is not resolvable on {g.points} points")
    a = g.half_width
    x = g.x_samples
    arg = n * np.pi * x / (2.0 * a)
    psi = (np.cos(arg) if n % 2 else np.sin(arg)) / np.sqrt(a)
    return WaveVector(g, psi.astype(np.complex128)), well_energy(n, a, g.mass, g.hbar)


def _sinc(z):
    z = np.asarray(z, dtype=float)
    out = np.empty_like(z)
    small = np.abs(z) < 1e-4
    zs = z[small]
    out[small] = 1.0 - zs**2 / 6.0 + zs**4 / 120.0
    zb = z[~small]
    out[~small] = np.sin(zb) / zb
    return out


def well_momentum_density(a, n, p_samples, hbar=1.0):
    """Closed-form ``|phi_n(p)|^2`` for the well eigenfunction ``n`` on ``[-a, a]``.

    ``phi_n(p) = (2 pi hbar)^(-1/2) int_{-a}^{a} psi_n(x) exp(-i p x / hbar) dx``
    reduces to ``sqrt(a / (2 pi hbar)) [S(k - q) +/- S(k + q)]`` with
    ``S(u) = sin(u a)/(u a)``, ``k = n pi / 2a`` and ``q = p / hbar``; the sign
    is ``+`` for odd ``n`` (cosine) and ``-`` for even ``n`` (sine).
    """
    n = check_int(n, "n", 1, InvalidMode)
    a = check_positive(a, "a")
    hbar = check_positive(hbar, "hbar")
    q = np.asarray(p_samples, dtype=float) / hbar
    if not np.all(np.isfinite(q)):
        raise ValueError("p_samples must be finite")
    k = n * np.pi / (2.0 * a)
    lo = _sinc((k - q) * a)
    hi = _sinc((k + q) * a)
    amp = lo + hi if n % 2 else lo - hi
    return a / (2.0 * np.pi * hbar) * amp**2


def spin_operators(two_j, hbar=1.0):
    """``(Jx, Jy, Jz)`` for spin ``j = two_j / 2`` in the ``|j, m>`` basis, ``m = j .. -j``."""
    two_j = check_int(two_j, "two_j", 1, InvalidSpin)
    hbar = check_positive(hbar, "hbar", InvalidSpin)
    j = two_j / 2.0
    m = j - np.arange(two_j + 1)
    # <m+1| J+ |m> = hbar sqrt(j(j+1) - m(m+1))
    raise_ = np.diag(hbar * np.sqrt(j * (j + 1) - m[1:] * (m[1:] + 1)), k=1)
    lower = raise_.T
    Jx = 0.5 * (raise_ + lower)
    Jy = -0.5j * (raise_ - lower)
    Jz = hbar * np.diag(m)
    return (
        hermitian_from_matrix(Jx, label="Jx"),
        hermitian_from_matrix(Jy, label="Jy"),
        hermitian_from_matrix(Jz.astype(np.complex128), label="Jz"),
    )


def gaussian_packet(g, x0, p0, sigma_x):
    """Gaussian packet ``exp(-d^2 / sigma_x^2) exp(i p0 d / hbar)`` on a ring.

    ``d`` is the periodic displacement from ``x0``. ``sigma_x`` is the 1/e
    half-width of the amplitude, so the position spread is ``sigma_x / 2`` and
    the momentum spread ``hbar / sigma_x``. The packet must fit
    (``4 sigma_x < L``) and be resolved (``sigma_x > 2 dx``).
    """
    _require(g, Boundary.RING)
    sigma = check_positive(sigma_x, "sigma_x")
    if 4.0 * sigma >= g.length:
        raise PacketTooWide(f"4 sigma_x = {4 * sigma:g} does not fit in L = {g.length:g}")
    if sigma <= 2.0 * g.dx:
        raise PacketUnresolved(f"sigma_x = {sigma:g} <= 2 dx = {2 * g.dx:g}")
    L = g.length
    d = np.mod(g.x_samples - float(x0) + L / 2.0, L) - L / 2.0
    amp = np.exp(-(d**2) / sigma**2) * np.exp(1j * float(p0) * d / g.hbar)
    return _normalized(g, amp)
