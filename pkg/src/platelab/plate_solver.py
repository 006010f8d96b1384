"""Vibrating plate equation ``u_tt + Delta^2 u = F(u)`` on the periodic lattice.

The homogeneous flow is exact per Fourier mode,

    u^(t, xi) = cos(w t) u0^(xi) + sin(w t)/w u1^(xi),   w = 4 pi^2 |xi|^2,

and the nonlinear problem is solved as the fixed point of
``u = u_lin + B F(u)`` where ``B g(t) = int_0^t K(t - tau) g(tau) dtau`` is
discretized by the composite trapezoid rule on a uniform time grid.
"""

from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .gabor import Window, stft
from .lattice import Field, Lattice, forward_transform, write_field
from .mixed_norms import MixedNormSpec, modulation_norm
from .multipliers import FOUR_PI2, Symbol

log = logging.getLogger(__name__)


class BlowUpError(FloatingPointError):
    """Non-finite values appeared during the Picard iteration."""


# --- nonlinearities -----------------------------------------------------------

@dataclass(frozen=True)
class Nonlinearity:
    """Pointwise map ``u -> F(u)`` with ``F(0) = 0``.

    ``coefficients`` maps ``(j, k)`` to ``c_{j,k}`` of ``sum c_{j,k} u^j conj(u)^k``.
    """

    kind: str = "zero"
    lam: complex = 0.0
    k: int = 0
    coefficients: dict = field(default_factory=dict)
    degree: int = 8

    def __post_init__(self):
        if self.kind not in ("zero", "power", "series"):
            raise ValueError(f"unknown nonlinearity kind {self.kind!r}")
        if self.kind == "power" and (int(self.k) != self.k or self.k < 0):
            raise ValueError(f"power-law exponent k must be a non-negative integer, got {self.k!r}")
        if self.kind == "series":
            if complex(self.coefficients.get((0, 0), 0)) != 0:
                raise ValueError("entire series must vanish at 0 (c_{0,0} = 0)")
            dropped = [jk for jk in self.coefficients if sum(jk) > self.degree]
            if dropped:
                log.warning("ignoring %d coefficients beyond degree %d: %s",
                            len(dropped), self.degree, sorted(dropped))

    @classmethod
    def zero(cls) -> "Nonlinearity":
        return cls("zero")

    @classmethod
    def power_law(cls, lam: complex, k: int) -> "Nonlinearity":
        """``lam |u|^{2k} u``."""
        return cls("power", lam=complex(lam), k=int(k))

    @classmethod
    def entire_series(cls, coefficients: dict, degree: int = 8) -> "Nonlinearity":
        return cls("series", coefficients={tuple(jk): complex(c) for jk, c in coefficients.items()},
                   degree=degree)

    @property
    def is_zero(self) -> bool:
        if self.kind == "zero":
            return True
        if self.kind == "power":
            return self.lam == 0
        return all(c == 0 for jk, c in self.coefficients.items() if sum(jk) <= self.degree)

    def __call__(self, u: np.ndarray) -> np.ndarray:
        u = np.asarray(u, dtype=complex)
        if self.kind == "zero":
            return np.zeros_like(u)
        if self.kind == "power":
            return self.lam * np.abs(u) ** (2 * self.k) * u
        out = np.zeros_like(u)
        ub = np.conj(u)
        for (j, k), c in self.coefficients.items():
            if j + k <= self.degree and c != 0:
                out = out + c * u**j * ub**k
        return out

    def describe(self) -> str:
        if self.kind == "power":
            return f"power:{self.lam}:{self.k}"
        if self.kind == "series":
            terms = ",".join(f"{j}:{k}:{c.real!r}:{c.imag!r}" for (j, k), c in sorted(self.coefficients.items()))
            return f"series:{terms}"
        return "zero"


# --- configuration and results -----------------------------------------------

class Metric(enum.Enum):
    GRID_SUP = "sup"
    MODULATION_P1 = "modulation"


@dataclass(frozen=True)
class SolverConfig:
    horizon: float
    time_nodes: int = 65
    picard_tol: float = 1e-10
    picard_max_iter: int = 50
    metric: Metric = Metric.GRID_SUP
    metric_p: float = 2.0
    metric_s: float = 0.0

    def __post_init__(self):
        if not (self.horizon > 0 and math.isfinite(self.horizon)):
            raise ValueError(f"horizon must be positive, got {self.horizon!r}")
        if int(self.time_nodes) != self.time_nodes or self.time_nodes < 2:
            raise ValueError(f"time_nodes must be an integer >= 2, got {self.time_nodes!r}")
        if not self.picard_tol > 0:
            raise ValueError("picard_tol must be positive")
        if self.picard_max_iter < 0:
            raise ValueError("picard_max_iter must be non-negative")

    @property
    def dt(self) -> float:
        return self.horizon / (self.time_nodes - 1)

    def times(self) -> np.ndarray:
        return np.arange(self.time_nodes) * self.dt


@dataclass(frozen=True)
class Trajectory:
    config: SolverConfig
    states: tuple
    iterations_used: int
    converged: bool
    final_increment: float
    increments: tuple = ()
    residual: float = 0.0

    def times(self) -> np.ndarray:
        return self.config.times()


def _same_lattice(a: Field, b: Field):
    if a.lattice != b.lattice:
        raise ValueError(f"lattice mismatch: {a.lattice.describe()} vs {b.lattice.describe()}")


def _omega(lattice: Lattice) -> np.ndarray:
    return FOUR_PI2 * lattice.frequency_norm_sq()


# --- linear propagation -------------------------------------------------------

def propagate_linear(u0: Field, u1: Field, t: float) -> Field:
    """``K'(t) u0 + K(t) u1``, exact per Fourier mode."""
    _same_lattice(u0, u1)
    if t < 0:
        raise ValueError("t must be non-negative")
    if t == 0:
        return u0
    lat = u0.lattice
    xi = lat.frequencies()
    U0 = np.fft.fftn(u0.samples)
    U1 = np.fft.fftn(u1.samples)
    U = Symbol.sigma0(t)(xi) * U0 + Symbol.sigma1(t)(xi) * U1
    return Field(lat, np.fft.ifftn(U))


def time_derivative_linear(u0: Field, u1: Field, t: float) -> Field:
    """``d/dt (K'(t) u0 + K(t) u1)``."""
    _same_lattice(u0, u1)
    if t == 0:
        return u1
    lat = u0.lattice
    w = _omega(lat)
    U0 = np.fft.fftn(u0.samples)
    U1 = np.fft.fftn(u1.samples)
    U = -w * np.sin(w * t) * U0 + np.cos(w * t) * U1
    return Field(lat, np.fft.ifftn(U))


def energy(u: Field, ut: Field) -> float:
    """``||u_t||^2 + ||Delta u||^2`` evaluated on the spectrum."""
    _same_lattice(u, ut)
    lat = u.lattice
    U = forward_transform(u).samples
    Ut = forward_transform(ut).samples
    w = _omega(lat)
    return float(lat.dual_cell * np.sum(np.abs(Ut) ** 2 + (w * np.abs(U)) ** 2))


# --- Duhamel term ---------------------------------------------------------------

def _sigma1_table(lattice: Lattice, times: np.ndarray) -> np.ndarray:
    xi = lattice.frequencies()
    return np.stack([Symbol.sigma1(t)(xi) for t in times])


def _duhamel_node(G_hat: np.ndarray, S: np.ndarray, n: int, dt: float) -> np.ndarray:
    """Trapezoid sum for node ``n`` given spectra ``G_hat[m]`` and
    ``S[j] = sigma1(j dt)``."""
    if n == 0:
        return np.zeros_like(G_hat[0])
    k = S[n::-1] * G_hat[: n + 1]          # sigma1(t_n - t_m) G(t_m), m = 0..n
    total = k.sum(axis=0) - 0.5 * (k[0] + k[n])
    return dt * total


def duhamel(g: Sequence[Field], t_index: int, dt: float) -> Field:
    """``B g(t_n) = int_0^{t_n} K(t_n - tau) g(tau) dtau`` for ``t_n = n dt``,
    using the composite trapezoid rule over the nodes ``0..n``."""
    M = len(g)
    if not 0 <= t_index < M:
        raise IndexError(f"t_index {t_index} outside the time grid of {M} nodes")
    lat = g[0].lattice
    for gm in g:
        _same_lattice(g[0], gm)
    G_hat = np.stack([np.fft.fftn(gm.samples) for gm in g[: t_index + 1]])
    S = _sigma1_table(lat, np.arange(t_index + 1) * dt)
    return Field(lat, np.fft.ifftn(_duhamel_node(G_hat, S, t_index, dt)))


def _duhamel_all(G_hat: np.ndarray, S: np.ndarray, dt: float) -> np.ndarray:
    out = np.empty_like(G_hat)
    for n in range(G_hat.shape[0]):
        out[n] = _duhamel_node(G_hat, S, n, dt)
    return out


# --- Picard iteration -----------------------------------------------------------

def _spatial_axes(lat: Lattice) -> tuple:
    return tuple(range(1, lat.dim + 1))


def _increment(diff: np.ndarray, lat: Lattice, cfg: SolverConfig) -> float:
    if cfg.metric is Metric.GRID_SUP:
        return float(np.max(np.abs(diff)))
    spec = MixedNormSpec.modulation(cfg.metric_p, 1, cfg.metric_s)
    g = Window.gaussian(lat)
    return max(modulation_norm(stft(Field(lat, d), g), spec) for d in diff)


def linear_trajectory(u0: Field, u1: Field, cfg: SolverConfig) -> list[Field]:
    return [propagate_linear(u0, u1, t) for t in cfg.times()]


def picard_solve(u0: Field, u1: Field, F: Nonlinearity, cfg: SolverConfig) -> Trajectory:
    """Solve ``u = u_lin + B F(u)`` on ``[0, T]`` by fixed-point iteration.

    Iteration stops once the increment between successive iterates (in the
    configured metric, maximized over time nodes) drops below
    ``cfg.picard_tol``.
    """
    _same_lattice(u0, u1)
    lat = u0.lattice
    lin_fields = linear_trajectory(u0, u1, cfg)
    if F.is_zero:
        return Trajectory(cfg, tuple(lin_fields), 0, True, 0.0, (), 0.0)

    axes = _spatial_axes(lat)
    u_lin = np.stack([f.samples for f in lin_fields])
    S = _sigma1_table(lat, cfg.times())
    dt = cfg.dt

    def step(u):
        # overflow is detected below and reported as a blow-up
        with np.errstate(over="ignore", invalid="ignore"):
            Fu = F(u)
        if not np.all(np.isfinite(Fu)):
            node = int(np.argwhere(~np.all(np.isfinite(Fu), axis=axes))[0, 0])
            raise BlowUpError(f"blow-up suspected: non-finite F(u) at time node {node}")
        with np.errstate(over="ignore", invalid="ignore"):
            B = np.fft.ifftn(_duhamel_all(np.fft.fftn(Fu, axes=axes), S, dt), axes=axes)
            return u_lin + B

    u = u_lin.copy()
    u[0] = u0.samples
    increments = []
    converged = False
    for it in range(1, cfg.picard_max_iter + 1):
        new = step(u)
        new[0] = u0.samples
        if not np.all(np.isfinite(new)):
            node = int(np.argwhere(~np.all(np.isfinite(new), axis=axes))[0, 0])
            raise BlowUpError(f"blow-up suspected: non-finite iterate {it} at time node {node}")
        inc = _increment(new - u, lat, cfg)
        increments.append(inc)
        u = new
        log.debug("picard iteration %d: increment %.3e", it, inc)
        if inc < cfg.picard_tol:
            converged = True
            break
    residual = _increment(step(u) - u, lat, cfg)
    states = tuple([u0] + [Field(lat, u[m]) for m in range(1, cfg.time_nodes)])
    return Trajectory(cfg, states, len(increments), converged,
                      increments[-1] if increments else 0.0, tuple(increments), residual)


# --- index admissibility --------------------------------------------------------

@dataclass(frozen=True)
class Admissibility:
    admissible: bool
    q_conjugate: float
    r: float | None
    message: str

    def __bool__(self) -> bool:
        return self.admissible


def conjugate_exponent(q: float) -> float:
    if q == 1:
        return math.inf
    if math.isinf(q):
        return 1.0
    return q / (q - 1)


def check_t2_admissible(p: float, q: float, s: float, k: int, d: int) -> Admissibility:
    """Check ``q' > k d`` for the power nonlinearity ``lam |u|^{2k} u``.

    The diagnostic also reports ``r = q / (2k(1 - q) + 1)`` when its
    denominator is positive.
    """
    if not (1 <= p <= math.inf and 1 <= q <= math.inf):
        raise ValueError(f"exponents must lie in [1, inf], got p={p}, q={q}")
    if s < 2:
        raise ValueError(f"the power-law theory needs s >= 2, got {s}")
    if k < 0 or d < 1:
        raise ValueError("need k >= 0 and d >= 1")
    qc = conjugate_exponent(q)
    ok = qc > k * d
    if math.isinf(q):
        denom = 1.0 if k == 0 else -math.inf
    else:
        denom = 2 * k * (1 - q) + 1
    r = (q / denom) if denom > 0 else None
    qc_txt = "inf" if math.isinf(qc) else f"{qc:g}"
    verdict = "holds" if ok else "fails"
    r_txt = f"r = {r:g}" if r is not None else "r undefined at these indices"
    msg = f"q' = {qc_txt} > k*d = {k * d}: {verdict}; {r_txt}"
    return Admissibility(ok, qc, r, msg)


# --- export ---------------------------------------------------------------------

def export_trajectory(traj: Trajectory, out_dir, prefix: str = "node") -> list[Path]:
    """Write one VPFIELD file per node, ``trajectory.csv`` (``node,t,file``)
    and ``convergence.csv`` (``iteration,increment``)."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    lines = ["node,t,file"]
    for m, (t, state) in enumerate(zip(traj.times(), traj.states)):
        name = f"{prefix}_{m:04d}.vpf"
        write_field(state, out / name)
        paths.append(out / name)
        lines.append(f"{m},{t:.17g},{name}")
    (out / "trajectory.csv").write_text("\n".join(lines) + "\n")
    conv = ["iteration,increment"] + [f"{i + 1},{v:.17g}" for i, v in enumerate(traj.increments)]
    (out / "convergence.csv").write_text("\n".join(conv) + "\n")
    return paths
