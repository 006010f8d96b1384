"""Numerical studies that put the multiplier, dilation, growth, product and
chirp estimates to a falsifiable test on finite lattices.

Boundedness is read as stability of ratio maxima under grid refinement,
unboundedness as monotone super-constant growth along a designed family.
Each study returns an :class:`ExperimentReport` whose verdict is a
deterministic function of its rows and of thresholds stored in its
parameters.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from ._parallel import map_ordered
from .gabor import Window, stft
from .lattice import Field, Lattice
from .mixed_norms import (MixedNormSpec, Order, dilation_slope_bracket, mixed_norm,
                          modulation_norm)
from .multipliers import Symbol, apply_multiplier, dilate, symbol_lattice, truncated_wiener_norm
from .plate_solver import propagate_linear

# --- test families --------------------------------------------------------------


@dataclass(frozen=True)
class GaussianTerm:
    """``coef * exp(2 pi i freq.x) exp(-pi |x - c - shift|^2 / width^2)``."""

    coef: complex
    width: float
    shift: tuple
    frequency: tuple

    def realize(self, lattice: Lattice) -> Field:
        return Field.gaussian(lattice, self.width, shift=self.shift, frequency=self.frequency,
                              amplitude=self.coef)


def centered_mass(f: Field) -> float:
    """Fraction of ``||f||_2^2`` carried by ``[L/4, 3L/4]^d``."""
    lat = f.lattice
    y = lat.centered_points()
    inside = np.all(np.abs(y) <= lat.L / 4 + 1e-12, axis=0)
    a = np.abs(f.samples) ** 2
    total = a.sum()
    return float(a[inside].sum() / total) if total > 0 else 0.0


@dataclass
class TestFamily:
    """Reproducible family of Gaussian combinations.

    Members built by :meth:`random` are stored as analytic terms and can be
    realized on any lattice of the reference side length, which keeps
    refinement studies free of resampling error.
    """

    __test__ = False  # not a pytest class

    seed: int
    lattice: Lattice
    terms: list = field(default_factory=list)
    fields: list | None = None

    MIN_CENTERED_MASS = 0.999

    @classmethod
    def random(cls, lattice: Lattice, size: int = 10, seed: int = 0, max_terms: int = 3,
               max_frequency: float = 2.0) -> "TestFamily":
        """Members are sums of 1 to ``max_terms`` Gaussians with widths in
        ``[1/2, 2]``, grid-aligned shifts, integer-mode frequencies of
        modulus at most ``max_frequency`` and coefficients of modulus at
        most 1."""
        if size < 1:
            raise ValueError("family size must be positive")
        rng = np.random.default_rng(seed)
        d, h, L = lattice.dim, lattice.spacing, lattice.L
        k_max = int(math.floor(min(max_frequency, lattice.N / (8 * L)) * L))
        members = []
        for _ in range(size):
            n_terms = int(rng.integers(1, max_terms + 1))
            terms = []
            for _ in range(n_terms):
                width = float(rng.uniform(0.5, 2.0))
                reach = L / 4 - 1.2 * width
                if reach < 0:
                    raise ValueError(f"side length {L:g} is too small for Gaussians of width {width:.3g}")
                j_max = int(math.floor(reach / h))
                shift = tuple(float(h * j) for j in rng.integers(-j_max, j_max + 1, size=d))
                freq = tuple(float(k / L) for k in rng.integers(-k_max, k_max + 1, size=d))
                coef = complex(rng.uniform(0.1, 1.0) * np.exp(2j * np.pi * rng.uniform()))
                terms.append(GaussianTerm(coef, width, shift, freq))
            members.append(tuple(terms))
        fam = cls(seed, lattice, members)
        fam._check(fam.realize(lattice))
        return fam

    @classmethod
    def from_fields(cls, fields: Sequence[Field], seed: int = 0) -> "TestFamily":
        """Family of explicit fields; realizable on coarser lattices by
        subsampling only."""
        fields = list(fields)
        if not fields:
            raise ValueError("family must be nonempty")
        lat = fields[0].lattice
        for f in fields:
            if f.lattice != lat:
                raise ValueError("family members must share a lattice")
        fam = cls(seed, lat, [], fields)
        fam._check(fields)
        return fam

    @staticmethod
    def _check(fields):
        for i, f in enumerate(fields):
            if not f.sup_norm() > 0:
                raise ValueError(f"family member {i} vanishes")

    def centered(self, lattice: Lattice | None = None) -> bool:
        return all(centered_mass(f) >= self.MIN_CENTERED_MASS
                   for f in self.realize(lattice or self.lattice))

    def __len__(self) -> int:
        return len(self.fields) if self.fields is not None else len(self.terms)

    def realize(self, lattice: Lattice | None = None) -> list[Field]:
        lattice = lattice or self.lattice
        if self.fields is not None:
            if lattice == self.lattice:
                return list(self.fields)
            factor = self.lattice.N // lattice.N
            if (lattice.L != self.lattice.L or lattice.dim != self.lattice.dim or factor < 1
                    or factor * lattice.N != self.lattice.N):
                raise ValueError(f"explicit family on {self.lattice.describe()} cannot be "
                                 f"realized on {lattice.describe()}")
            return [f.subsample(factor) for f in self.fields]
        out = []
        for terms in self.terms:
            f = terms[0].realize(lattice)
            for term in terms[1:]:
                f = f + term.realize(lattice)
            out.append(f)
        return out

    def extended(self, extra: Sequence[Field]) -> list[Field]:
        """Realized members followed by ``extra``."""
        return self.realize(self.lattice) + list(extra)


# --- reports --------------------------------------------------------------------


class Verdict(enum.Enum):
    CONSISTENT = "Consistent"
    INCONSISTENT = "Inconsistent"
    INCONCLUSIVE = "Inconclusive"


def format_value(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v)).lower()
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return f"{v:.17g}"
    return str(v)


@dataclass
class ExperimentReport:
    name: str
    parameters: dict
    columns: tuple
    rows: list
    verdict: Verdict
    justification: str

    def csv_text(self) -> str:
        lines = [",".join(self.columns)]
        lines.extend(",".join(format_value(v) for v in row) for row in self.rows)
        return "\n".join(lines) + "\n"

    def verdict_text(self) -> str:
        lines = [f"verdict: {self.verdict.value}", f"justification: {self.justification}"]
        lines.extend(f"{k} = {format_value(v)}" for k, v in self.parameters.items())
        return "\n".join(lines) + "\n"

    def write(self, out_dir) -> tuple[Path, Path]:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        csv_path = out / f"{self.name}.csv"
        verdict_path = out / f"{self.name}.verdict.txt"
        csv_path.write_text(self.csv_text())
        verdict_path.write_text(self.verdict_text())
        return csv_path, verdict_path

    def column(self, name: str) -> list:
        i = self.columns.index(name)
        return [row[i] for row in self.rows]


# --- helpers --------------------------------------------------------------------


def _modulation_norm(f: Field, spec: MixedNormSpec, g: Window) -> float:
    return modulation_norm(stft(f, g), spec)


def _relative_change(a: float, b: float) -> float:
    return abs(a - b) / max(abs(b), np.finfo(float).tiny)


def loglog_slope(x: Sequence[float], y: Sequence[float], top_decade: bool = True) -> float:
    """Least-squares slope of ``log y`` against ``log x``, over
    ``x >= max(x)/10`` when ``top_decade`` is set."""
    x = np.asarray(x, float)
    y = np.asarray(y, float)
    keep = x >= x.max() / 10 if top_decade else np.ones_like(x, bool)
    if keep.sum() < 2:
        raise ValueError("need at least two points in the fitting range")
    return float(np.polyfit(np.log(x[keep]), np.log(y[keep]), 1)[0])


# --- multiplier boundedness -------------------------------------------------------


def run_multiplier_bound(p, q, s: float, j: int, family: TestFamily,
                         threshold: float = 0.10) -> ExperimentReport:
    """Ratios ``||H f||_{M^{p,q}_{s+2j}} / ||f||_{M^{p,q}_s}`` with the
    multiplier ``cos|xi|^2`` (j = 0) or ``sin|xi|^2/|xi|^2`` (j = 1), on the
    family lattice and on the lattice with half as many points."""
    if j not in (0, 1):
        raise ValueError(f"j must be 0 or 1, got {j!r}")
    if len(family) == 0:
        raise ValueError("family must be nonempty")
    sigma = Symbol.tilde_sigma0() if j == 0 else Symbol.tilde_sigma1()
    src = MixedNormSpec.modulation(p, q, s)
    dst = MixedNormSpec.modulation(p, q, s + 2 * j)
    fine = family.lattice
    coarse = Lattice(fine.dim, fine.N // 2, fine.L)
    rows = []
    maxima = {}
    for lat in (fine, coarse):
        g = Window.gaussian(lat)
        members = family.realize(lat)

        def ratio(f):
            return _modulation_norm(apply_multiplier(sigma, f), dst, g) / _modulation_norm(f, src, g)

        ratios = map_ordered(ratio, members)
        rows.extend((i, lat.N, r) for i, r in enumerate(ratios))
        maxima[lat.N] = max(ratios)
    change = _relative_change(maxima[fine.N], maxima[coarse.N])
    ok = change < threshold
    verdict = Verdict.CONSISTENT if ok else Verdict.INCONSISTENT
    why = (f"max ratio {maxima[fine.N]:.6g} at N={fine.N} vs {maxima[coarse.N]:.6g} at "
           f"N={coarse.N}: relative change {change:.3g} {'<' if ok else '>='} {threshold:g}")
    params = {"p": src.p, "q": src.q, "s": s, "j": j, "symbol": sigma.label,
              "dim": fine.dim, "grid": fine.N, "length": fine.L, "seed": family.seed,
              "members": len(family), "refinement_threshold": threshold}
    rows.sort(key=lambda r: (r[0], r[1]))
    return ExperimentReport("multiplier", params, ("member", "grid", "ratio"), rows, verdict, why)


# --- dilation scaling -------------------------------------------------------------


def _spectral_radius(f: Field, fraction: float = 1 - 1e-10) -> float:
    """Smallest ``R`` such that ``|xi|_inf <= R`` carries ``fraction`` of the
    spectral energy."""
    lat = f.lattice
    a = np.abs(np.fft.fftn(f.samples)) ** 2
    xi = np.max(np.abs(lat.frequencies()), axis=0)
    order = np.argsort(xi, axis=None)
    cum = np.cumsum(a.reshape(-1)[order])
    idx = int(np.searchsorted(cum, fraction * cum[-1]))
    return float(xi.reshape(-1)[order][min(idx, order.size - 1)])


def dilated_field_norm(f: Field, lam: float, spec: MixedNormSpec) -> float:
    """Norm of ``x -> f(lam x)`` (dilation about the torus center), with the
    dilated field required to stay below the Nyquist frequency."""
    lat = f.lattice
    nyquist = lat.N / (2 * lat.L)
    if lam * _spectral_radius(f) >= nyquist:
        raise ValueError(f"dilation {lam:g} pushes the field beyond the Nyquist frequency "
                         f"{nyquist:g} of {lat.describe()}")
    return mixed_norm(stft(dilate(f, lam)), spec)


def dilated_symbol_norm(sigma: Symbol, lam: float, spec: MixedNormSpec, side_length: float = 16.0,
                        dim: int = 1, margin: float = 4.0, position_spacing: float = 0.125,
                        max_log2_points: int = 22) -> tuple[float, Lattice]:
    """Truncated Wiener amalgam norm of ``sigma(lam .)`` on an adaptive
    lattice; for ``q = inf`` positions are visited every
    ``position_spacing``."""
    dil = sigma.dilate(lam)
    lat = symbol_lattice(dil, side_length, dim, max_log2_points=max_log2_points)
    stride = max(1, int(round(position_spacing / lat.spacing))) if math.isinf(spec.q) else 1
    return truncated_wiener_norm(dil.as_field(lat), spec, margin=margin, stride=stride), lat


def run_dilation_scaling(subject: Symbol | Field, spec: MixedNormSpec, lambdas: Sequence[float],
                         tolerance: float = 0.15, **symbol_options) -> ExperimentReport:
    """Norms of ``subject(lam .)`` and their log-log slope over the top decade,
    compared with the two-sided exponent bracket of the Wiener amalgam space."""
    if spec.order is not Order.FREQUENCY_FIRST:
        raise ValueError(f"dilation study expects a Wiener amalgam spec, got {spec.label()}")
    lambdas = [float(v) for v in lambdas]
    if len(lambdas) < 2 or any(b <= a for a, b in zip(lambdas, lambdas[1:])):
        raise ValueError("lambdas must be an increasing sequence of at least two values")
    if lambdas[0] < 1:
        raise ValueError(f"lambdas must be >= 1, got {lambdas[0]:g}")
    if isinstance(subject, Symbol):
        dim = int(symbol_options.get("dim", 1))

        def measure(lam):
            value, lat = dilated_symbol_norm(subject, lam, spec, **symbol_options)
            return value, lat.N, lat.L
        label = subject.label
    else:
        dim = subject.lattice.dim

        def measure(lam):
            return dilated_field_norm(subject, lam, spec), subject.lattice.N, subject.lattice.L
        label = "field"
    results = map_ordered(measure, lambdas)
    rows = [(lam, n, L, v) for lam, (v, n, L) in zip(lambdas, results)]
    norms = [r[3] for r in rows]
    slope = loglog_slope(lambdas, norms)
    lower, upper = dilation_slope_bracket(spec, dim)
    ok = lower - tolerance <= slope <= upper + tolerance
    verdict = Verdict.CONSISTENT if ok else Verdict.INCONSISTENT
    why = (f"slope {slope:.6g} over lambda in [{max(lambdas) / 10:g}, {max(lambdas):g}] "
           f"{'inside' if ok else 'outside'} [{lower:g} - {tolerance:g}, {upper:g} + {tolerance:g}]")
    params = {"subject": label, "space": spec.label(), "p": spec.p, "q": spec.q, "s": spec.s,
              "gamma": spec.gamma, "dim": dim, "slope": slope, "bracket_lower": lower,
              "bracket_upper": upper, "tolerance": tolerance}
    params.update({k: v for k, v in symbol_options.items()})
    return ExperimentReport("dilation", params, ("lambda", "grid", "length", "norm"), rows,
                            verdict, why)


# --- growth in time ---------------------------------------------------------------


def matched_width(t: float) -> float:
    """Width of the Gaussian matched to the propagator scale ``2 pi sqrt(t)``."""
    return 2 * math.pi * math.sqrt(t)


def run_growth_study(p, s: float, family: TestFamily, times: Sequence[float],
                     threshold: float = 50.0, matched: bool = True) -> ExperimentReport:
    """Sup over the family of ``||K'(t) u||_{M^{p,1}_s} / ||u||_{M^{p,1}_s}``
    and ``||K(t) u||_{M^{p,1}_s} / ||u||_{M^{p,1}_{s-2}}``, each divided by
    its envelope ``(1+t)^{d/2}`` resp. ``t (1+t)^{d/2+1}``.

    With ``matched`` set the family also contains one Gaussian of width
    ``2 pi sqrt(t)`` per requested time.
    """
    times = [float(t) for t in times]
    if not times or any(not 0 < t <= 10 for t in times):
        raise ValueError("times must lie in (0, 10]")
    lat = family.lattice
    d = lat.dim
    g = Window.gaussian(lat)
    extra = [Field.gaussian(lat, matched_width(t)) for t in times] if matched else []
    members = family.extended(extra)
    spec_s = MixedNormSpec.modulation(p, 1, s)
    spec_m2 = MixedNormSpec.modulation(p, 1, s - 2)
    zero = Field.zeros(lat)
    base = map_ordered(lambda f: (_modulation_norm(f, spec_s, g), _modulation_norm(f, spec_m2, g)),
                       members)

    def ratios(job):
        i, t = job
        f = members[i]
        r0 = _modulation_norm(propagate_linear(f, zero, t), spec_s, g) / base[i][0]
        r1 = _modulation_norm(propagate_linear(zero, f, t), spec_s, g) / base[i][1]
        return r0, r1

    jobs = [(i, t) for t in times for i in range(len(members))]
    values = dict(zip(jobs, map_ordered(ratios, jobs)))
    rows = []
    curve0, curve1 = [], []
    for t in times:
        e0 = (1 + t) ** (d / 2)
        e1 = t * (1 + t) ** (d / 2 + 1)
        sup0 = max(values[(i, t)][0] for i in range(len(members)))
        sup1 = max(values[(i, t)][1] for i in range(len(members)))
        curve0.append(sup0 / e0)
        curve1.append(sup1 / e1)
        rows.append((t, sup0, sup1, sup0 / e0, sup1 / e1))
    spread0 = max(curve0) / min(curve0)
    spread1 = max(curve1) / min(curve1)
    ok = spread0 < threshold and spread1 < threshold
    verdict = Verdict.CONSISTENT if ok else Verdict.INCONSISTENT
    why = (f"normalized max/min: K' {spread0:.6g}, K {spread1:.6g} "
           f"({'both below' if ok else 'not both below'} {threshold:g})")
    params = {"p": spec_s.p, "s": s, "dim": d, "grid": lat.N, "length": lat.L, "seed": family.seed,
              "members": len(members), "matched_members": len(extra), "spread_threshold": threshold,
              "spread_propagator_cos": spread0, "spread_propagator_sin": spread1}
    cols = ("t", "sup_ratio_cos", "sup_ratio_sin", "normalized_cos", "normalized_sin")
    return ExperimentReport("growth", params, cols, rows, verdict, why)


# --- product inequality -----------------------------------------------------------


def product_exponent(n_factors: int, q: float) -> float:
    """``r`` with ``n/q = n - 1 + 1/r``; raises ValueError if ``r`` is not in
    ``[1, inf]``."""
    inv = n_factors * (0.0 if math.isinf(q) else 1.0 / q) - n_factors + 1
    if not 0 <= inv <= 1 + 1e-15:
        raise ValueError(f"inadmissible indices: {n_factors}/q = {n_factors} - 1 + 1/r gives "
                         f"1/r = {inv:g} for q = {q:g}, outside [0, 1]")
    return math.inf if inv == 0 else 1.0 / min(inv, 1.0)


def run_product_inequality(n_factors: int, p, q, s: float, family: TestFamily,
                           tuples: int = 10, threshold: float = 0.10) -> ExperimentReport:
    """Ratios ``||u_1 ... u_n||_{M^{p,r}_s} / prod ||u_i||_{M^{p,q}_s}`` on
    the family lattice and on the lattice with twice as many points."""
    if n_factors < 1:
        raise ValueError("n_factors must be positive")
    if s < 0:
        raise ValueError("s must be non-negative")
    q_spec = MixedNormSpec.modulation(p, q, s)
    r = product_exponent(n_factors, q_spec.q)
    r_spec = MixedNormSpec.modulation(p, r, s)
    rng = np.random.default_rng(family.seed + 1)
    picks = [tuple(int(i) for i in rng.integers(0, len(family), size=n_factors)) for _ in range(tuples)]
    coarse = family.lattice
    fine = coarse if family.fields is not None else coarse.refined(2)
    rows = []
    maxima = {}
    for lat in (coarse, fine):
        g = Window.gaussian(lat)
        members = family.realize(lat)
        norms = map_ordered(lambda f: _modulation_norm(f, q_spec, g), members)

        def ratio(pick):
            prod = members[pick[0]]
            for i in pick[1:]:
                prod = prod * members[i]
            return _modulation_norm(prod, r_spec, g) / math.prod(norms[i] for i in pick)

        ratios = map_ordered(ratio, picks)
        rows.extend((k, lat.N, " ".join(map(str, pick)), v) for k, (pick, v) in enumerate(zip(picks, ratios)))
        maxima[lat.N] = max(ratios)
    change = _relative_change(maxima[fine.N], maxima[coarse.N])
    ok = change < threshold
    verdict = Verdict.CONSISTENT if ok else Verdict.INCONSISTENT
    why = (f"max ratio {maxima[coarse.N]:.6g} at N={coarse.N} vs {maxima[fine.N]:.6g} at "
           f"N={fine.N}: relative change {change:.3g} {'<' if ok else '>='} {threshold:g}")
    params = {"n_factors": n_factors, "p": q_spec.p, "q": q_spec.q, "r": r, "s": s,
              "dim": coarse.dim, "grid": coarse.N, "length": coarse.L, "seed": family.seed,
              "tuples": tuples, "refinement_threshold": threshold}
    rows.sort(key=lambda row: (row[0], row[1]))
    return ExperimentReport("product", params, ("tuple", "grid", "members", "ratio"), rows, verdict, why)


# --- chirp dichotomy --------------------------------------------------------------


def chirp_matched_members(lattice: Lattice, t_values: Sequence[float], base_width: float = 1.0) -> list[Field]:
    """Gaussians ``exp(-pi t |x|^2 / base_width^2)``, i.e. the dilation by
    ``sqrt(t)``, one per positive ``t``; widths are clipped at two grid
    spacings."""
    out = []
    for t in t_values:
        if t > 0:
            width = max(base_width / math.sqrt(t), 2 * lattice.spacing)
            out.append(Field.gaussian(lattice, width))
    return out


def _chirp_ratios(members, spec, t_values, g, cumulative_from: int):
    """``R(t)`` per t: max over members ``0..cumulative_from + (#t' <= t)``."""
    norms = map_ordered(lambda f: mixed_norm(stft(f, g), spec), members)
    out = []
    n_pos = 0
    for t in t_values:
        if t > 0:
            n_pos += 1
        pool = members[: cumulative_from + n_pos]
        sigma = Symbol.chirp(t)

        def ratio(i):
            if t == 0:
                return 1.0
            return mixed_norm(stft(apply_multiplier(sigma, pool[i]), g), spec) / norms[i]

        out.append(max(map_ordered(ratio, range(len(pool)))))
    return out


def run_chirp_unboundedness(p, q, t_values: Sequence[float], family: TestFamily,
                            control=(2, 2), growth_factor: float = 10.0,
                            control_factor: float = 2.0) -> ExperimentReport:
    """``R(t) = max_f ||exp(pi i t |xi|^2) f|| / ||f||`` in ``W(FL^p, L^q)``.

    The family is enriched cumulatively: at time ``t`` it also contains the
    Gaussians dilated by ``sqrt(t')`` for every ``t' <= t`` in ``t_values``.
    A control arm with ``p = q`` (``control``) runs on the same family.
    """
    t_values = [float(t) for t in t_values]
    if len(t_values) < 2 or any(b <= a for a, b in zip(t_values, t_values[1:])) or t_values[0] < 0:
        raise ValueError("t_values must be an increasing sequence of at least two non-negative values")
    lat = family.lattice
    g = Window.gaussian(lat)
    base = family.realize(lat)
    members = base + chirp_matched_members(lat, t_values)
    main_spec = MixedNormSpec.wiener(p, q)
    ctrl_spec = MixedNormSpec.wiener(*control)
    if ctrl_spec.p != ctrl_spec.q:
        raise ValueError("the control arm needs p = q")
    growth_arm = main_spec.p != main_spec.q
    main = _chirp_ratios(members, main_spec, t_values, g, len(base))
    ctrl = main if not growth_arm and ctrl_spec == main_spec else \
        _chirp_ratios(members, ctrl_spec, t_values, g, len(base))
    rows = [(t, a, b) for t, a, b in zip(t_values, main, ctrl)]

    ctrl_spread = max(ctrl) / min(ctrl)
    ctrl_ok = ctrl_spread < control_factor
    notes = [f"control {ctrl_spec.label()} max/min {ctrl_spread:.6g} "
             f"{'<' if ctrl_ok else '>='} {control_factor:g}"]
    ok = ctrl_ok
    params = {"p": main_spec.p, "q": main_spec.q, "control_p": ctrl_spec.p, "control_q": ctrl_spec.q,
              "dim": lat.dim, "grid": lat.N, "length": lat.L, "seed": family.seed,
              "members": len(members), "control_factor": control_factor}
    if growth_arm:
        ref_candidates = [i for i, t in enumerate(t_values) if t >= 1]
        ref = ref_candidates[0] if ref_candidates else 0
        growth = main[-1] / main[ref]
        monotone = all(b >= a for a, b in zip(main[ref:], main[ref + 1:]))
        grow_ok = growth >= growth_factor and monotone
        ok = ok and grow_ok
        notes.insert(0, f"R({t_values[-1]:g})/R({t_values[ref]:g}) = {growth:.6g} "
                        f"({'>=' if growth >= growth_factor else '<'} {growth_factor:g}), "
                        f"{'monotone' if monotone else 'not monotone'}")
        params.update({"growth_factor": growth_factor, "growth": growth, "monotone": monotone})
    params["control_spread"] = ctrl_spread
    verdict = Verdict.CONSISTENT if ok else Verdict.INCONSISTENT
    return ExperimentReport("chirp", params, ("t", "ratio", "control_ratio"), rows, verdict,
                            "; ".join(notes))
