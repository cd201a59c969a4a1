"""Position-space densities of two-mode states on rectangular grids.

The fast mode (frequency 2) lives on the x axis and the slow mode
(frequency 1) on the y axis, so <x, y | n, m> = psi_n^(2)(x) psi_m^(1)(y)
with psi the unit-mass harmonic-oscillator eigenfunctions.  Eigenfunctions
are generated by the stable upward recurrence on the normalized functions

    psi_{n+1}(x) = sqrt(2 w/(n+1)) x psi_n(x) - sqrt(n/(n+1)) psi_{n-1}(x),

which avoids the overflow of raw Hermite polynomials; quantum numbers are
capped at RECURRENCE_MAX.

High principal-chain levels concentrate on the classical 2:1 Lissajous
curve x(t) = A cos(2t + phi), y(t) = B cos t with amplitudes fixed by the
mode occupations (A = sqrt(<n_a> + 1/2), B = sqrt(2 <n_b> + 1)); the tube
helpers here quantify how much probability mass falls within a given
distance of that curve.
"""

from __future__ import annotations

import math
import os
import struct
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import BinaryIO, TextIO

import numpy as np
from scipy.spatial import cKDTree

from .errors import DomainError
from .fock import FockVector
from .principal import mode_occupation

RECURRENCE_MAX = 500

GRID_MAGIC = b"ALGRID01"

# Rows of the x table are processed in fixed-size blocks so the assembled
# grid is bit-identical for any worker count.
_CHUNK_ROWS = 64


def _worker_count() -> int:
    raw = os.environ.get("ALADDERS_THREADS", "1")
    try:
        count = int(raw)
    except ValueError:
        raise DomainError(f"ALADDERS_THREADS must be an integer, got {raw!r}")
    return max(1, count)


@dataclass
class Grid2D:
    """Rectangular grid with optional cell values indexed [ix, iy]."""

    x_min: float
    x_max: float
    y_min: float
    y_max: float
    nx: int
    ny: int
    values: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.nx < 2 or self.ny < 2:
            raise DomainError("grids need at least 2 points per axis")
        if not (self.x_min < self.x_max and self.y_min < self.y_max):
            raise DomainError("grid bounds must be ordered")
        if self.values is not None:
            self.values = np.asarray(self.values)
            if self.values.shape != (self.nx, self.ny):
                raise DomainError(
                    f"values shape {self.values.shape} != ({self.nx}, {self.ny})"
                )

    def xs(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.nx)

    def ys(self) -> np.ndarray:
        return np.linspace(self.y_min, self.y_max, self.ny)

    def geometry(self) -> "Grid2D":
        return Grid2D(self.x_min, self.x_max, self.y_min, self.y_max, self.nx, self.ny)

    def integral(self) -> float:
        """Trapezoid integral of the values over the rectangle."""
        if self.values is None:
            raise DomainError("grid has no values")
        inner = np.trapezoid(self.values, self.ys(), axis=1)
        return float(np.trapezoid(inner, self.xs()))


# Default window: covers the classical turning points of the level-100
# principal states at alpha = 3, |beta| = 1/sqrt(2) with margin to spare.
DEFAULT_DENSITY_GEOMETRY = Grid2D(-8.0, 8.0, -16.0, 16.0, 600, 600)


def ho_eigenfunction(n: int, omega: float, x) -> np.ndarray:
    """Normalized harmonic-oscillator eigenfunction psi_n at frequency omega."""
    if n < 0:
        raise DomainError(f"quantum number must be >= 0, got {n}")
    if n > RECURRENCE_MAX:
        raise DomainError(
            f"quantum number {n} beyond recurrence stability cap {RECURRENCE_MAX}"
        )
    if omega <= 0:
        raise DomainError(f"frequency must be > 0, got {omega}")
    xs = np.asarray(x, dtype=float)
    return eigenfunction_table(n, omega, np.atleast_1d(xs))[n].reshape(xs.shape)


def eigenfunction_table(n_max: int, omega: float, xs: np.ndarray) -> np.ndarray:
    """psi_n(xs) for all n <= n_max, shape (n_max + 1, len(xs))."""
    if n_max < 0 or n_max > RECURRENCE_MAX:
        raise DomainError(f"need 0 <= n_max <= {RECURRENCE_MAX}, got {n_max}")
    if omega <= 0:
        raise DomainError(f"frequency must be > 0, got {omega}")
    xs = np.asarray(xs, dtype=float)
    table = np.zeros((n_max + 1, xs.size))
    table[0] = (omega / math.pi) ** 0.25 * np.exp(-0.5 * omega * xs**2)
    if n_max >= 1:
        table[1] = math.sqrt(2.0 * omega) * xs * table[0]
    for n in range(1, n_max):
        table[n + 1] = (
            math.sqrt(2.0 * omega / (n + 1)) * xs * table[n]
            - math.sqrt(n / (n + 1)) * table[n - 1]
        )
    return table


def amplitude_grid(
    v: FockVector, geom: Grid2D = DEFAULT_DENSITY_GEOMETRY, threads: int | None = None
) -> Grid2D:
    """<x, y | v> sampled on the grid (complex values).

    Work is split over fixed x-row blocks; ALADDERS_THREADS (or the explicit
    `threads` argument) sets how many blocks run concurrently.  Chunk
    boundaries never depend on the worker count, so output is bit-identical
    regardless of parallelism.
    """
    if threads is None:
        threads = _worker_count()
    if not v:
        raise DomainError("cannot sample the zero vector")
    n_max = max(n for n, _ in v)
    m_max = max(m for _, m in v)
    if n_max > RECURRENCE_MAX or m_max > RECURRENCE_MAX:
        raise DomainError(
            f"support reaches ({n_max}, {m_max}); quantum numbers beyond "
            f"{RECURRENCE_MAX} are outside the recurrence stability cap"
        )
    xs = geom.xs()
    ys = geom.ys()
    fast = eigenfunction_table(n_max, 2.0, xs)
    slow = eigenfunction_table(m_max, 1.0, ys)
    weights = np.zeros((n_max + 1, m_max + 1), dtype=complex)
    for (n, m), amp in v.items():
        weights[n, m] = amp
    # right factor shared by every block; (m_max+1, ny) -> (n_max+1, ny)
    right = weights @ slow.astype(complex)
    out = np.empty((geom.nx, geom.ny), dtype=complex)
    blocks = [
        (lo, min(lo + _CHUNK_ROWS, geom.nx)) for lo in range(0, geom.nx, _CHUNK_ROWS)
    ]

    def fill(block):
        lo, hi = block
        out[lo:hi] = fast[:, lo:hi].T @ right

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(fill, blocks))
    else:
        for block in blocks:
            fill(block)
    return Grid2D(geom.x_min, geom.x_max, geom.y_min, geom.y_max, geom.nx, geom.ny, out)


def density_grid(
    v: FockVector, geom: Grid2D = DEFAULT_DENSITY_GEOMETRY, threads: int | None = None
) -> Grid2D:
    """|<x, y | v>|^2 on the grid; grid.integral() gives the covered mass."""
    amp = amplitude_grid(v, geom, threads)
    dens = (amp.values.real**2 + amp.values.imag**2)
    return Grid2D(geom.x_min, geom.x_max, geom.y_min, geom.y_max, geom.nx, geom.ny, dens)


def write_grid_csv(grid: Grid2D, fh: TextIO) -> None:
    """x,y,density rows, x-major, full float precision."""
    if grid.values is None:
        raise DomainError("grid has no values")
    xs = [float(x) for x in grid.xs()]
    ys = [float(y) for y in grid.ys()]
    fh.write("x,y,density\n")
    for ix in range(grid.nx):
        x = xs[ix]
        row = grid.values[ix]
        for iy in range(grid.ny):
            fh.write(f"{x!r},{ys[iy]!r},{float(row[iy])!r}\n")


def write_grid_binary(grid: Grid2D, fh: BinaryIO) -> None:
    """32-byte header (magic, nx, ny, bounds as float32) then row-major
    float64 values, little-endian throughout."""
    if grid.values is None:
        raise DomainError("grid has no values")
    header = struct.pack(
        "<8sII4f",
        GRID_MAGIC,
        grid.nx,
        grid.ny,
        grid.x_min,
        grid.x_max,
        grid.y_min,
        grid.y_max,
    )
    fh.write(header)
    fh.write(np.ascontiguousarray(grid.values, dtype="<f8").tobytes())


def read_grid_binary(fh: BinaryIO) -> Grid2D:
    header = fh.read(32)
    if len(header) != 32:
        raise DomainError("truncated grid header")
    magic, nx, ny, x_min, x_max, y_min, y_max = struct.unpack("<8sII4f", header)
    if magic != GRID_MAGIC:
        raise DomainError(f"bad grid magic {magic!r}")
    data = np.frombuffer(fh.read(8 * nx * ny), dtype="<f8")
    if data.size != nx * ny:
        raise DomainError("truncated grid payload")
    return Grid2D(
        float(x_min), float(x_max), float(y_min), float(y_max),
        nx, ny, data.reshape(nx, ny).copy(),
    )


def lissajous_amplitudes(v: FockVector) -> tuple[float, float]:
    """Classical (A, B) for the tube: A = sqrt(<n_a> + 1/2) on x,
    B = sqrt(2 <n_b> + 1) on y, equating quantum and classical energies."""
    occ_a = mode_occupation(v, "a")
    occ_b = mode_occupation(v, "b")
    return math.sqrt(occ_a + 0.5), math.sqrt(2.0 * occ_b + 1.0)


def lissajous_curve(
    amp_x: float, amp_y: float, phase: float, samples: int = 2048
) -> np.ndarray:
    """Sampled 2:1 curve (x, y) = (A cos(2t + phase), B cos t), shape (samples, 2)."""
    if samples < 8:
        raise DomainError("need at least 8 curve samples")
    t = np.linspace(0.0, 2.0 * math.pi, samples, endpoint=False)
    return np.column_stack((amp_x * np.cos(2.0 * t + phase), amp_y * np.cos(t)))


def tube_mass_fraction(
    grid: Grid2D,
    amp_x: float,
    amp_y: float,
    phase: float,
    radius: float = 1.0,
    samples: int = 2048,
) -> float:
    """Fraction of the grid's mass within `radius` of the Lissajous curve."""
    if grid.values is None:
        raise DomainError("grid has no values")
    if radius <= 0:
        raise DomainError(f"tube radius must be > 0, got {radius}")
    tree = cKDTree(lissajous_curve(amp_x, amp_y, phase, samples))
    xg, yg = np.meshgrid(grid.xs(), grid.ys(), indexing="ij")
    pts = np.column_stack((xg.ravel(), yg.ravel()))
    dist, _ = tree.query(pts, k=1)
    inside = (dist <= radius).reshape(grid.nx, grid.ny)
    masked = Grid2D(
        grid.x_min, grid.x_max, grid.y_min, grid.y_max,
        grid.nx, grid.ny, grid.values * inside,
    )
    total = grid.integral()
    if total == 0.0:
        raise DomainError("grid carries no mass")
    return masked.integral() / total


def best_tube_phase(
    grid: Grid2D,
    amp_x: float,
    amp_y: float,
    radius: float = 1.0,
    coarse: int = 36,
    refine: int = 12,
) -> tuple[float, float]:
    """Fit the curve's relative phase by maximizing tube mass.

    A coarse scan on a subsampled copy of the grid picks the neighbourhood,
    a local scan at full resolution refines it.  Returns (fraction, phase).
    """
    if grid.values is None:
        raise DomainError("grid has no values")
    stride = max(1, min(grid.nx, grid.ny) // 150)
    rough = Grid2D(
        grid.x_min, float(grid.xs()[::stride][-1]),
        grid.y_min, float(grid.ys()[::stride][-1]),
        len(grid.xs()[::stride]), len(grid.ys()[::stride]),
        grid.values[::stride, ::stride],
    )
    phases = np.linspace(0.0, 2.0 * math.pi, coarse, endpoint=False)
    scores = [tube_mass_fraction(rough, amp_x, amp_y, ph, radius) for ph in phases]
    centre = phases[int(np.argmax(scores))]
    span = 2.0 * math.pi / coarse
    best = (-1.0, 0.0)
    for ph in np.linspace(centre - span, centre + span, refine):
        frac = tube_mass_fraction(grid, amp_x, amp_y, float(ph), radius)
        if frac > best[0]:
            best = (frac, float(ph))
    return best


def l1_distance(g1: Grid2D, g2: Grid2D) -> float:
    """Total-variation style distance in [0, 1]: half the integral of the
    absolute difference after normalizing each grid to unit mass."""
    if g1.values is None or g2.values is None:
        raise DomainError("grids have no values")
    if g1.geometry() != g2.geometry():
        raise DomainError("grids must share geometry")
    m1, m2 = g1.integral(), g2.integral()
    if m1 <= 0 or m2 <= 0:
        raise DomainError("grids must carry positive mass")
    diff = np.abs(g1.values / m1 - g2.values / m2)
    return 0.5 * Grid2D(
        g1.x_min, g1.x_max, g1.y_min, g1.y_max, g1.nx, g1.ny, diff
    ).integral()
