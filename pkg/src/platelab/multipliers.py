"""Fourier multipliers, the plate-equation symbol library and dilations.

Symbols are functions of the frequency vector.  The library covers

* ``sigma0(t)``       ``cos(4 pi^2 t |xi|^2)``              (propagator K'(t))
* ``sigma1(t)``       ``sin(4 pi^2 t |xi|^2) / (4 pi^2 |xi|^2)`` (propagator K(t))
* ``tilde_sigma0``    ``cos |xi|^2``
* ``tilde_sigma1``    ``sin |xi|^2 / |xi|^2``
* ``chirp(t)``        ``exp(pi i t |xi|^2)``

together with custom callables and symbols read from CSV tables.  Every
symbol carries a dilation factor ``scale`` so that ``sigma.dilate(lam)``
is the exact re-evaluation ``xi -> sigma(lam * xi)``.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Callable

import numpy as np

from .gabor import MAX_STFT_ENTRIES, StftMatrix, Window, stft_rows
from .lattice import Field, Lattice, forward_transform, inverse_transform
from .mixed_norms import MixedNormSpec, Order, combine_outer, wiener_inner

FOUR_PI2 = 4.0 * math.pi**2

# below this |z| the series of sin(z)/z is used
_SINC_SERIES_CUTOFF = 1e-4

_KINDS = ("sigma0", "sigma1", "tilde_sigma0", "tilde_sigma1", "chirp", "custom")


def _sinc(z: np.ndarray) -> np.ndarray:
    """``sin(z)/z`` with the removable singularity filled in."""
    z = np.asarray(z, dtype=float)
    small = np.abs(z) < _SINC_SERIES_CUTOFF
    safe = np.where(small, 1.0, z)
    z2 = z * z
    series = 1.0 - z2 / 6.0 + z2 * z2 / 120.0
    return np.where(small, series, np.sin(safe) / safe)


@dataclass(frozen=True)
class Symbol:
    kind: str
    t: float = 0.0
    scale: float = 1.0
    func: Callable | None = None
    # quadratic phase rate alpha of exp(i alpha |xi|^2)-type oscillation
    # (before dilation); None when unknown
    phase_rate: float | None = None
    label: str = ""

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown symbol kind {self.kind!r}")
        if self.kind == "custom" and self.func is None:
            raise ValueError("custom symbols need a callable")
        if not self.scale > 0:
            raise ValueError("dilation factor must be positive")

    # constructors
    @classmethod
    def sigma0(cls, t: float) -> "Symbol":
        return cls("sigma0", t=float(t), phase_rate=FOUR_PI2 * abs(t), label=f"sigma0(t={t:g})")

    @classmethod
    def sigma1(cls, t: float) -> "Symbol":
        return cls("sigma1", t=float(t), phase_rate=FOUR_PI2 * abs(t), label=f"sigma1(t={t:g})")

    @classmethod
    def tilde_sigma0(cls) -> "Symbol":
        return cls("tilde_sigma0", phase_rate=1.0, label="tilde_sigma0")

    @classmethod
    def tilde_sigma1(cls) -> "Symbol":
        return cls("tilde_sigma1", phase_rate=1.0, label="tilde_sigma1")

    @classmethod
    def chirp(cls, t: float) -> "Symbol":
        return cls("chirp", t=float(t), phase_rate=math.pi * abs(t), label=f"chirp(t={t:g})")

    @classmethod
    def custom(cls, func: Callable, label: str = "custom", phase_rate: float | None = None) -> "Symbol":
        """``func`` maps an array of shape ``(d, ...)`` to complex values."""
        return cls("custom", func=func, phase_rate=phase_rate, label=label)

    @classmethod
    def constant(cls, value: complex = 1.0) -> "Symbol":
        c = complex(value)
        return cls.custom(lambda xi: np.full(np.shape(xi)[1:], c), label=f"const({value})",
                          phase_rate=0.0)

    def dilate(self, lam: float) -> "Symbol":
        """``xi -> sigma(lam * xi)``."""
        if not lam > 0:
            raise ValueError(f"dilation factor must be positive, got {lam!r}")
        return replace(self, scale=self.scale * lam, label=f"({self.label})_{lam:g}")

    def __mul__(self, other: "Symbol") -> "Symbol":
        rates = (self.phase_rate, other.phase_rate)
        rate = None
        if None not in rates:
            rate = self.phase_rate * self.scale**2 + other.phase_rate * other.scale**2
        return Symbol.custom(lambda xi: self(xi) * other(xi),
                             label=f"{self.label}*{other.label}", phase_rate=rate)

    def __call__(self, xi) -> np.ndarray:
        xi = np.asarray(xi, dtype=float)
        if xi.ndim == 0:
            xi = xi.reshape(1)
        y = self.scale * xi
        r2 = np.sum(y * y, axis=0)
        if self.kind == "sigma0":
            return np.cos(FOUR_PI2 * self.t * r2).astype(complex)
        if self.kind == "sigma1":
            return (self.t * _sinc(FOUR_PI2 * self.t * r2)).astype(complex)
        if self.kind == "tilde_sigma0":
            return np.cos(r2).astype(complex)
        if self.kind == "tilde_sigma1":
            return _sinc(r2).astype(complex)
        if self.kind == "chirp":
            return np.exp(1j * math.pi * self.t * r2)
        return np.asarray(self.func(y), dtype=complex)

    def local_frequency_bound(self, radius: float) -> float | None:
        """Largest instantaneous oscillation frequency (cycles per unit of
        xi) on the ball ``|xi| <= radius``; None if unknown."""
        if self.phase_rate is None:
            return None
        return self.phase_rate * self.scale**2 * radius / math.pi

    def on_lattice(self, lattice: Lattice) -> np.ndarray:
        """Symbol values on the frequency lattice (FFT order)."""
        return self(lattice.frequencies())

    def as_field(self, lattice: Lattice) -> Field:
        """The symbol sampled as a function on ``lattice`` (xi = x - c)."""
        vals = self(lattice.centered_points())
        _require_finite(vals, lattice.centered_points())
        return Field(lattice, vals)


def _require_finite(values: np.ndarray, xi: np.ndarray):
    if not np.all(np.isfinite(values)):
        bad = np.argwhere(~np.isfinite(values))[0]
        where = xi[(slice(None),) + tuple(bad)]
        raise ValueError(f"symbol is not finite at xi = {tuple(float(v) for v in where)}")


def apply_multiplier(sigma: Symbol, f: Field) -> Field:
    """``H_sigma f``: multiply the transform of ``f`` by ``sigma`` and invert."""
    xi = f.lattice.frequencies()
    values = sigma(xi)
    _require_finite(values, xi)
    if np.all(values == 1):
        return f
    F = forward_transform(f)
    return inverse_transform(Field(F.lattice, values * F.samples))


def dilate(f: Field, lam: float) -> Field:
    """Samples of ``x -> f(c + lam (x - c))`` by trigonometric interpolation.

    Points mapped outside the fundamental domain ``|lam (x - c)|_inf <= L/2``
    are set to zero (the field models a function that is negligible near
    the torus boundary).
    """
    if not lam > 0:
        raise ValueError(f"dilation factor must be positive, got {lam!r}")
    if lam == 1:
        return f
    lat = f.lattice
    n, L = lat.N, lat.L
    y = lat.axis_points() - lat.center
    target = lat.center + lam * y
    k = np.fft.fftfreq(n, d=1.0 / n)
    E = np.exp(2j * np.pi * np.outer(target, k) / L) / n
    E[np.abs(lam * y) > L / 2] = 0.0
    coeffs = np.fft.fftn(f.samples)
    out = coeffs
    for axis in range(lat.dim):
        out = np.moveaxis(np.tensordot(E, out, axes=([1], [axis])), 0, axis)
    return Field(lat, out)


def symbol_lattice(sigma: Symbol, side_length: float, dim: int = 1, margin: float = 4.0,
                   min_points: int = 256, max_log2_points: int = 22) -> Lattice:
    """Smallest power-of-two lattice of side ``side_length`` that resolves
    the windowed symbol on the whole torus.

    Raises ValueError if the required resolution exceeds the memory budget.
    """
    radius = math.sqrt(dim) * side_length / 2
    bound = sigma.local_frequency_bound(radius)
    if bound is None:
        raise ValueError(f"cannot size a lattice for {sigma.label}: unknown oscillation rate")
    # window bandwidth plus the spread produced by the chirp over a window
    needed = 2.0 * (bound + margin * (1.0 + sigma.local_frequency_bound(1.0)))
    n = max(min_points, 1 << math.ceil(math.log2(needed * side_length)))
    if dim * int(math.log2(n)) > max_log2_points:
        raise ValueError(
            f"{sigma.label} oscillates too fast to be represented on a torus of side "
            f"{side_length:g} (needs {n} points per axis)"
        )
    return Lattice(dim, n, side_length, max_log2_points=max_log2_points)


def interior_positions(lattice: Lattice, margin: float, stride: int = 1) -> np.ndarray:
    """Flat indices of grid points with ``|x - c|_inf <= L/2 - margin``."""
    y = lattice.axis_points() - lattice.center
    keep = np.nonzero(np.abs(y) <= lattice.L / 2 - margin)[0][::stride]
    if keep.size == 0:
        raise ValueError(f"margin {margin:g} leaves no interior points on {lattice.describe()}")
    grids = np.meshgrid(*([keep] * lattice.dim), indexing="ij")
    return np.ravel_multi_index(tuple(g.reshape(-1) for g in grids), lattice.shape)


def truncated_wiener_norm(field: Field, spec: MixedNormSpec, margin: float = 4.0,
                          stride: int = 1, window_width: float = 1.0) -> float:
    """Wiener amalgam norm with the position integral restricted to the
    interior of the torus, computed in row chunks.

    ``stride > 1`` keeps every ``stride``-th interior position; this is only
    allowed for ``q = inf``, where it under-approximates a maximum.
    """
    if spec.order is not Order.FREQUENCY_FIRST:
        raise ValueError("truncated_wiener_norm expects a frequency-first spec")
    if stride != 1 and not math.isinf(spec.q):
        raise ValueError("position strides are only meaningful for q = inf")
    lat = field.lattice
    g = Window.gaussian(lat, width=window_width)
    positions = interior_positions(lat, margin, stride)
    chunk = max(1, MAX_STFT_ENTRIES // (4 * lat.size))
    inner = []
    for start in range(0, positions.size, chunk):
        pos = positions[start:start + chunk]
        rows = stft_rows(field, g, pos)
        M = StftMatrix(lat, rows, pos, lat.cell)
        inner.append(wiener_inner(M, spec))
    return combine_outer(np.concatenate(inner), spec.q, lat.cell * stride**lat.dim)


def symbol_wiener_norm(sigma: Symbol, spec: MixedNormSpec, L_sym: float = 64.0,
                       N_sym: int = 2048, dim: int = 1, margin: float = 4.0,
                       stride: int = 1) -> tuple[float, float]:
    """Windowed-truncation estimate of ``||sigma||`` in a Wiener amalgam space.

    The symbol is sampled on tori of side ``L_sym/2`` (coarse) and ``L_sym``
    (fine) with the same spacing; each value integrates over positions at
    least ``margin`` away from the seam.  Stabilization of the pair, not
    the values themselves, is the meaningful output.
    """
    fine_lat = Lattice(dim, N_sym, L_sym, max_log2_points=22)
    coarse_lat = Lattice(dim, N_sym // 2, L_sym / 2, max_log2_points=22)
    out = []
    for lat in (coarse_lat, fine_lat):
        field = sigma.as_field(lat)
        out.append(truncated_wiener_norm(field, spec, margin=margin, stride=stride))
    return out[0], out[1]


# --- CSV symbol tables --------------------------------------------------------

def load_symbol_csv(path, tol: float = 1e-9) -> Symbol:
    """Read a table with columns ``xi_1..xi_d,re,im``.

    Evaluation only succeeds at frequencies present in the table (matched to
    ``tol``); there is no interpolation.
    """
    path = Path(path)
    with path.open() as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if len(header) < 3 or header[-2:] != ["re", "im"]:
            raise ValueError(f"{path}: header must end with 're,im', got {header}")
        rows = [[float(v) for v in row] for row in reader if row]
    d = len(header) - 2
    table = {}
    for row in rows:
        key = tuple(int(round(v / tol)) for v in row[:d])
        table[key] = complex(row[d], row[d + 1])

    def lookup(xi):
        xi = np.asarray(xi, dtype=float)
        if xi.shape[0] != d:
            raise ValueError(f"{path}: table is {d}-dimensional, got {xi.shape[0]}-dimensional xi")
        flat = xi.reshape(d, -1)
        out = np.empty(flat.shape[1], dtype=complex)
        for i in range(flat.shape[1]):
            key = tuple(int(round(v / tol)) for v in flat[:, i])
            try:
                out[i] = table[key]
            except KeyError:
                raise ValueError(
                    f"{path}: no table entry for xi = {tuple(flat[:, i])} (exact lattice match required)"
                ) from None
        return out.reshape(xi.shape[1:])

    return Symbol.custom(lookup, label=path.stem)


def write_symbol_csv(sigma: Symbol, lattice: Lattice, path) -> None:
    xi = lattice.frequencies().reshape(lattice.dim, -1)
    vals = sigma(xi)
    names = [f"xi_{i + 1}" for i in range(lattice.dim)] + ["re", "im"]
    with Path(path).open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(names)
        for i in range(xi.shape[1]):
            w.writerow([f"{v:.17g}" for v in xi[:, i]] + [f"{vals[i].real:.17g}", f"{vals[i].imag:.17g}"])
