"""Short-time Fourier transform sampled on the full position x frequency grid.

``V_g f(x, w) = int exp(-2 pi i w y) f(y) conj(g(y - x)) dy``

Row ``m`` of the result holds the transform of ``f * conj(T_{x_m} g)``
where the window is translated so that it is centered on the grid point
``x_m`` (windows are stored centered on the torus center and shifted
circularly).  Columns follow the FFT frequency order of the lattice.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .lattice import Field, Lattice

#: Cap on the number of stored STFT entries (complex128), about 256 MB.
MAX_STFT_ENTRIES = 2**24


class Window:
    """Analysis window ``g``.

    The samples describe the window centered on the torus center.
    """

    def __init__(self, field: Field):
        norm = field.l2_norm()
        if not norm > 0:
            raise ValueError("window must be non-zero")
        self.field = field
        self.l2_norm = norm
        # origin-centered copy used for circular translation
        shift = (-(field.lattice.N // 2),) * field.lattice.dim
        self._origin = np.roll(field.samples, shift, axis=tuple(range(field.lattice.dim)))

    @classmethod
    def gaussian(cls, lattice: Lattice, width: float = 1.0) -> "Window":
        """L-periodized ``exp(-pi |x - c|^2 / width^2)``."""
        return cls(Field.gaussian(lattice, width=width))

    @property
    def lattice(self) -> Lattice:
        return self.field.lattice

    @property
    def samples(self) -> np.ndarray:
        return self.field.samples

    def normalized(self) -> "Window":
        return Window(self.field * (1.0 / self.l2_norm))


@dataclass(frozen=True)
class StftMatrix:
    """Sampled STFT values.

    ``values[i, k]`` is ``V_g f(x_{positions[i]}, w_k)`` where positions are
    flat (row-major) grid indices and ``k`` runs over the flat FFT-ordered
    frequency lattice.  ``position_cell`` is the measure attached to each
    retained position in position integrals (``h^d`` for the full grid).
    """

    lattice: Lattice
    values: np.ndarray
    positions: np.ndarray
    position_cell: float

    @property
    def is_full(self) -> bool:
        return self.values.shape[0] == self.lattice.size

    def energy(self) -> float:
        """``int int |V_g f|^2 dx dw`` as a Riemann sum."""
        return float(self.position_cell * self.lattice.dual_cell * np.sum(np.abs(self.values) ** 2))

    def position_coordinates(self) -> np.ndarray:
        """Coordinates of the retained positions relative to the torus
        center, shape ``(n_positions, d)``."""
        lat = self.lattice
        idx = np.array(np.unravel_index(self.positions, lat.shape)).T
        return idx * lat.spacing - lat.center

    def frequency_coordinates(self) -> np.ndarray:
        """Frequencies of the columns, shape ``(N^d, d)``."""
        lat = self.lattice
        return lat.frequencies().reshape(lat.dim, -1).T


def _check_pair(f: Field, g: Window):
    if f.lattice != g.lattice:
        raise ValueError(
            f"stft: signal lives on {f.lattice.describe()} but window on {g.lattice.describe()}"
        )


def _shift_indices(lattice: Lattice, positions: np.ndarray) -> np.ndarray:
    """Flat indices of ``(j - m) mod N`` for each position m and grid point j."""
    n, d = lattice.N, lattice.dim
    grid = np.indices(lattice.shape).reshape(d, -1)          # (d, N^d)
    pos = np.array(np.unravel_index(positions, lattice.shape))  # (d, P)
    shifted = (grid[:, None, :] - pos[:, :, None]) % n       # (d, P, N^d)
    return np.ravel_multi_index(tuple(shifted), lattice.shape)


def stft_rows(f: Field, g: Window, positions) -> np.ndarray:
    """STFT rows for the given flat position indices, shape ``(P, N^d)``."""
    _check_pair(f, g)
    lat = f.lattice
    positions = np.asarray(positions, dtype=np.int64)
    if positions.size * lat.size > MAX_STFT_ENTRIES:
        raise MemoryError(
            f"{positions.size} x {lat.size} STFT entries exceed the cap of {MAX_STFT_ENTRIES}"
        )
    idx = _shift_indices(lat, positions)
    prod = f.samples.reshape(-1)[None, :] * np.conj(g._origin.reshape(-1)[idx])
    prod = prod.reshape((positions.size,) + lat.shape)
    axes = tuple(range(1, lat.dim + 1))
    out = lat.cell * np.fft.fftn(prod, axes=axes)
    return out.reshape(positions.size, lat.size)


def stft(f: Field, g: Window | None = None, positions=None) -> StftMatrix:
    """Short-time Fourier transform of ``f`` with window ``g``.

    By default the full ``N^d x N^d`` product lattice is computed; a
    subset of positions may be requested, in which case each kept position
    stands for a cell of ``h^d`` in position integrals.
    """
    if g is None:
        g = Window.gaussian(f.lattice)
    lat = f.lattice
    if positions is None:
        positions = np.arange(lat.size)
    values = stft_rows(f, g, positions)
    values.setflags(write=False)
    return StftMatrix(lat, values, np.asarray(positions, dtype=np.int64), lat.cell)


def write_abs_csv(M: StftMatrix, path) -> None:
    """Dump ``|V_g f|`` as ``x_index,omega_index,abs_value`` rows (row-major)."""
    a = np.abs(M.values)
    n_cols = a.shape[1]
    with Path(path).open("w") as fh:
        fh.write("x_index,omega_index,abs_value\n")
        for i, pos in enumerate(M.positions):
            row = a[i]
            fh.write("".join(f"{pos},{k},{row[k]:.17g}\n" for k in range(n_cols)))
