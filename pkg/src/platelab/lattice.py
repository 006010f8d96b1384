"""Periodic lattices, sampled fields and the 2*pi-normalized Fourier transform.

A function on R^d is modeled by its restriction to the torus [0, L)^d
sampled at ``x_j = j*h`` with ``h = L/N``.  The torus center ``c = L/2``
plays the role of the origin of R^d: weights, dilations and symbols all
measure positions relative to it.  Pick ``L >= 16`` for unit-width
Gaussians so that the periodization error stays below the sampling error.

The discrete transform approximates ``f^(xi) = int f(y) exp(-2 pi i y xi) dy``
by ``h^d * DFT(f)`` on the frequency lattice ``{k/L : -N/2 <= k_j < N/2}``.
Frequency-domain samples are stored in FFT order (as ``numpy.fft.fftfreq``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

#: Largest admissible ``d * log2(N)``, i.e. at most 2**22 grid points.
MAX_LOG2_POINTS = 22

MAX_DIM = 3


@dataclass(frozen=True)
class Lattice:
    """Uniform periodic grid on ``[0, L)^d`` with ``N`` points per axis."""

    dim: int
    points_per_axis: int
    side_length: float
    max_log2_points: int = field(default=MAX_LOG2_POINTS, compare=False, repr=False)

    def __post_init__(self):
        d, n, L = self.dim, self.points_per_axis, self.side_length
        if not isinstance(d, (int, np.integer)) or not 1 <= d <= MAX_DIM:
            raise ValueError(f"dim must be an integer in [1, {MAX_DIM}], got {d!r}")
        if not isinstance(n, (int, np.integer)) or n < 2 or n & (n - 1):
            raise ValueError(f"points_per_axis must be a power of two >= 2, got {n!r}")
        if not (math.isfinite(L) and L > 0):
            raise ValueError(f"side_length must be a positive finite real, got {L!r}")
        if d * int(math.log2(n)) > self.max_log2_points:
            raise ValueError(
                f"lattice with {n}^{d} points exceeds the memory budget "
                f"(d*log2(N) = {d * int(math.log2(n))} > {self.max_log2_points})"
            )
        object.__setattr__(self, "dim", int(d))
        object.__setattr__(self, "points_per_axis", int(n))
        object.__setattr__(self, "side_length", float(L))

    @property
    def N(self) -> int:
        return self.points_per_axis

    @property
    def L(self) -> float:
        return self.side_length

    @property
    def spacing(self) -> float:
        return self.side_length / self.points_per_axis

    @property
    def frequency_step(self) -> float:
        return 1.0 / self.side_length

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.points_per_axis,) * self.dim

    @property
    def size(self) -> int:
        return self.points_per_axis**self.dim

    @property
    def center(self) -> float:
        return self.side_length / 2

    @property
    def cell(self) -> float:
        """Volume ``h^d`` of a spatial cell."""
        return self.spacing**self.dim

    @property
    def dual_cell(self) -> float:
        """Volume ``(1/L)^d`` of a frequency cell."""
        return self.frequency_step**self.dim

    def axis_points(self) -> np.ndarray:
        return np.arange(self.points_per_axis) * self.spacing

    def axis_frequencies(self) -> np.ndarray:
        return np.fft.fftfreq(self.points_per_axis, d=self.spacing)

    def points(self) -> np.ndarray:
        """Grid coordinates, shape ``(d, N, ..., N)``."""
        ax = self.axis_points()
        return np.stack(np.meshgrid(*([ax] * self.dim), indexing="ij"))

    def centered_points(self) -> np.ndarray:
        """Coordinates relative to the torus center, each in ``[-L/2, L/2)``."""
        return self.points() - self.center

    def frequencies(self) -> np.ndarray:
        """Frequency lattice in FFT order, shape ``(d, N, ..., N)``."""
        ax = self.axis_frequencies()
        return np.stack(np.meshgrid(*([ax] * self.dim), indexing="ij"))

    def frequency_norm_sq(self) -> np.ndarray:
        return np.sum(self.frequencies() ** 2, axis=0)

    def dual(self) -> "Lattice":
        """Lattice carrying the frequency samples as a function of xi."""
        return Lattice(self.dim, self.points_per_axis, self.points_per_axis / self.side_length)

    def refined(self, factor: int = 2) -> "Lattice":
        """Same torus with ``factor`` times more points per axis."""
        return Lattice(self.dim, self.points_per_axis * factor, self.side_length)

    def describe(self) -> str:
        return f"Lattice(d={self.dim}, N={self.points_per_axis}, L={self.side_length:g})"


class Field:
    """Complex samples of a function on a :class:`Lattice`.

    The sample array is read-only; operations return new fields.
    """

    __slots__ = ("lattice", "samples")

    def __init__(self, lattice: Lattice, samples, *, check_finite: bool = True):
        arr = np.array(samples, dtype=np.complex128)
        if arr.size != lattice.size:
            raise ValueError(
                f"expected {lattice.size} samples for {lattice.describe()}, got {arr.size}"
            )
        arr = arr.reshape(lattice.shape)
        if check_finite and not np.all(np.isfinite(arr)):
            bad = np.argwhere(~np.isfinite(arr))[0]
            raise ValueError(f"non-finite sample at grid index {tuple(int(i) for i in bad)}")
        arr.setflags(write=False)
        self.lattice = lattice
        self.samples = arr

    @classmethod
    def zeros(cls, lattice: Lattice) -> "Field":
        return cls(lattice, np.zeros(lattice.shape, dtype=np.complex128))

    @classmethod
    def from_function(cls, lattice: Lattice, func, centered: bool = True) -> "Field":
        """Sample ``func`` at the grid points (relative to the center by default).

        ``func`` receives an array of shape ``(d, N, ..., N)``.
        """
        pts = lattice.centered_points() if centered else lattice.points()
        return cls(lattice, func(pts))

    @classmethod
    def gaussian(cls, lattice: Lattice, width: float = 1.0, shift=None, frequency=None,
                 amplitude: complex = 1.0) -> "Field":
        """``amplitude * M_frequency T_shift exp(-pi |x - c|^2 / width^2)``."""
        d = lattice.dim
        shift = np.zeros(d) if shift is None else np.broadcast_to(np.asarray(shift, float), (d,))
        frequency = (np.zeros(d) if frequency is None
                     else np.broadcast_to(np.asarray(frequency, float), (d,)))
        y = lattice.centered_points()
        r2 = sum((y[i] - shift[i]) ** 2 for i in range(d))
        phase = sum(frequency[i] * lattice.points()[i] for i in range(d))
        return cls(lattice, amplitude * np.exp(-np.pi * r2 / width**2) * np.exp(2j * np.pi * phase))

    @classmethod
    def plane_wave(cls, lattice: Lattice, k) -> "Field":
        """``exp(2 pi i k.x / L)`` for an integer frequency index ``k``."""
        k = np.broadcast_to(np.asarray(k, float), (lattice.dim,))
        x = lattice.points()
        phase = sum(k[i] * x[i] for i in range(lattice.dim)) / lattice.side_length
        return cls(lattice, np.exp(2j * np.pi * phase))

    def _same(self, other: "Field"):
        if other.lattice != self.lattice:
            raise ValueError(
                f"lattice mismatch: {self.lattice.describe()} vs {other.lattice.describe()}"
            )

    def __add__(self, other: "Field") -> "Field":
        self._same(other)
        return Field(self.lattice, self.samples + other.samples)

    def __sub__(self, other: "Field") -> "Field":
        self._same(other)
        return Field(self.lattice, self.samples - other.samples)

    def __mul__(self, other) -> "Field":
        if isinstance(other, Field):
            self._same(other)
            return Field(self.lattice, self.samples * other.samples)
        return Field(self.lattice, self.samples * complex(other))

    __rmul__ = __mul__

    def __neg__(self) -> "Field":
        return Field(self.lattice, -self.samples)

    def conj(self) -> "Field":
        return Field(self.lattice, np.conj(self.samples))

    def l2_norm(self) -> float:
        """Riemann-sum approximation of ``||f||_{L^2}``."""
        return float(np.sqrt(self.lattice.cell * np.sum(np.abs(self.samples) ** 2)))

    def sup_norm(self) -> float:
        return float(np.max(np.abs(self.samples)))

    def subsample(self, factor: int = 2) -> "Field":
        """Restriction to the coarser lattice with ``N/factor`` points per axis."""
        lat = Lattice(self.lattice.dim, self.lattice.N // factor, self.lattice.L)
        sl = (slice(None, None, factor),) * self.lattice.dim
        return Field(lat, self.samples[sl])

    def __repr__(self) -> str:
        return f"Field({self.lattice.describe()}, sup={self.sup_norm():.3g})"


def forward_transform(f: Field) -> Field:
    """Samples of ``f^`` on the frequency lattice (FFT order)."""
    return Field(f.lattice, f.lattice.cell * np.fft.fftn(f.samples))


def inverse_transform(F: Field) -> Field:
    """Exact discrete inverse of :func:`forward_transform`."""
    return Field(F.lattice, np.fft.ifftn(F.samples) / F.lattice.cell)


def spectrum_field(f: Field) -> Field:
    """The transform of ``f`` as a field in the variable xi on the dual lattice.

    Sample ``j`` of the result corresponds to ``xi = (j - N/2)/L``, so the
    zero frequency sits at the dual torus center.  The values are those of
    the transform of ``y -> f(c + y)``, i.e. with the origin at the center.
    """
    lat = f.lattice
    F = forward_transform(f).samples
    k = np.fft.fftfreq(lat.N, d=1.0 / lat.N).astype(int)
    # exp(2 pi i c xi) = (-1)^k with c = L/2 and xi = k/L
    sign = np.ones(lat.shape)
    for axis in range(lat.dim):
        shape = [1] * lat.dim
        shape[axis] = lat.N
        sign = sign * np.where(k % 2 == 0, 1.0, -1.0).reshape(shape)
    return Field(lat.dual(), np.fft.fftshift(F * sign))


def bracket_weight(v, s: float):
    """``<v>^s = (1 + |v|^2)^(s/2)``; ``v`` is a vector, or an array with
    the vector index first."""
    v = np.asarray(v, dtype=float)
    r2 = np.sum(v**2, axis=0) if v.ndim else v**2
    return (1.0 + r2) ** (s / 2.0)


# --- VPFIELD v1 text format -------------------------------------------------

def write_field(f: Field, path) -> None:
    """Write ``f`` as ``VPFIELD 1 <d> <N> <L>`` followed by ``<re> <im>`` lines."""
    lat = f.lattice
    lines = [f"VPFIELD 1 {lat.dim} {lat.N} {lat.L:.17g}"]
    flat = f.samples.reshape(-1)
    lines.extend(f"{z.real:.17g} {z.imag:.17g}" for z in flat)
    Path(path).write_text("\n".join(lines) + "\n")


def read_field(path) -> Field:
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"field file not found: {path}")
    with path.open() as fh:
        header = fh.readline().split()
        if len(header) != 5 or header[0] != "VPFIELD" or header[1] != "1":
            raise ValueError(f"{path}: not a VPFIELD v1 file (header {' '.join(header)!r})")
        lat = Lattice(int(header[2]), int(header[3]), float(header[4]))
        data = np.loadtxt(fh, ndmin=2)
    if data.shape != (lat.size, 2):
        raise ValueError(f"{path}: expected {lat.size} rows of '<re> <im>', got {data.shape[0]}")
    return Field(lat, data[:, 0] + 1j * data[:, 1])
