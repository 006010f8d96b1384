"""Modulation and Wiener amalgam norms as weighted mixed Riemann sums.

Both norms reduce the same STFT samples.  Modulation norms take the
``L^p`` norm over position first and a ``<w>^s``-weighted ``L^q`` norm over
frequency afterwards; Wiener amalgam norms swap the order and weight the
frequency variable by ``<w>^s`` and the position by ``<z - c>^gamma``.

Infinite exponents are grid maxima.  A grid maximum under-approximates the
essential supremum by at most the modulus of continuity over one cell.

The second half of the module holds the index regions of the unit square
``(1/p, 1/q)`` and the dilation exponents ``mu1`` and ``mu2`` built on them.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .gabor import StftMatrix
from .lattice import bracket_weight


class Order(enum.Enum):
    POSITION_FIRST = "modulation"
    FREQUENCY_FIRST = "wiener"


def parse_exponent(value) -> float:
    """Accept ``inf``/``infinity`` spelled as text and check ``[1, inf]``."""
    if isinstance(value, str):
        text = value.strip().lower()
        value = math.inf if text in ("inf", "infinity", "+inf") else float(text)
    value = float(value)
    if not (value >= 1.0):
        raise ValueError(f"exponent must lie in [1, inf], got {value!r}")
    return value


@dataclass(frozen=True)
class MixedNormSpec:
    p: float
    q: float
    s: float = 0.0
    gamma: float = 0.0
    order: Order = Order.POSITION_FIRST

    def __post_init__(self):
        object.__setattr__(self, "p", parse_exponent(self.p))
        object.__setattr__(self, "q", parse_exponent(self.q))
        if not (math.isfinite(self.s) and math.isfinite(self.gamma)):
            raise ValueError("weight exponents must be finite")
        if self.order is Order.POSITION_FIRST and self.gamma != 0:
            raise ValueError("modulation norms carry no position weight (gamma must be 0)")

    @classmethod
    def modulation(cls, p, q, s: float = 0.0) -> "MixedNormSpec":
        return cls(p, q, s, 0.0, Order.POSITION_FIRST)

    @classmethod
    def wiener(cls, p, q, s: float = 0.0, gamma: float = 0.0) -> "MixedNormSpec":
        return cls(p, q, s, gamma, Order.FREQUENCY_FIRST)

    def label(self) -> str:
        fmt = lambda e: "inf" if math.isinf(e) else f"{e:g}"
        if self.order is Order.POSITION_FIRST:
            return f"M^{{{fmt(self.p)},{fmt(self.q)}}}_{self.s:g}"
        return f"W(FL^{fmt(self.p)}_{self.s:g}, L^{fmt(self.q)}_{self.gamma:g})"


def _lp(values: np.ndarray, p: float, cell: float, axis: int, weights=None) -> np.ndarray:
    """Weighted discrete ``L^p`` norm along ``axis`` with measure ``cell``."""
    if weights is not None:
        shape = [1] * values.ndim
        shape[axis] = -1
        values = values * weights.reshape(shape)
    if math.isinf(p):
        return values.max(axis=axis)
    if p == 1:
        return cell * values.sum(axis=axis)
    if p == 2:
        return np.sqrt(cell * np.square(values).sum(axis=axis))
    return (cell * (values**p).sum(axis=axis)) ** (1.0 / p)


def _frequency_weight(M: StftMatrix, s: float):
    if s == 0:
        return None
    return bracket_weight(M.frequency_coordinates().T, s)


def _position_weight(M: StftMatrix, gamma: float):
    if gamma == 0:
        return None
    return bracket_weight(M.position_coordinates().T, gamma)


def modulation_norm(M: StftMatrix, spec: MixedNormSpec) -> float:
    """``||f||_{M^{p,q}_s}`` from the STFT samples of ``f``."""
    if spec.order is not Order.POSITION_FIRST:
        raise ValueError(f"modulation_norm needs a position-first spec, got {spec.label()}")
    if not M.is_full:
        raise ValueError("modulation norms need the STFT at every grid position")
    a = np.abs(M.values)
    inner = _lp(a, spec.p, M.position_cell, axis=0)
    return float(_lp(inner, spec.q, M.lattice.dual_cell, axis=0, weights=_frequency_weight(M, spec.s)))


def wiener_inner(M: StftMatrix, spec: MixedNormSpec) -> np.ndarray:
    """Weighted ``FL^p_s`` norm of each STFT row, already multiplied by the
    position weight ``<z>^gamma``."""
    a = np.abs(M.values)
    inner = _lp(a, spec.p, M.lattice.dual_cell, axis=1, weights=_frequency_weight(M, spec.s))
    w = _position_weight(M, spec.gamma)
    return inner if w is None else inner * w


def combine_outer(inner: np.ndarray, q: float, cell: float) -> float:
    return float(_lp(np.asarray(inner), q, cell, axis=0))


def wiener_norm(M: StftMatrix, spec: MixedNormSpec) -> float:
    """``||f||_{W(FL^p_s, L^q_gamma)}`` from the STFT samples of ``f``.

    With a partial StftMatrix the outer integral runs over the retained
    positions only (a truncated norm).
    """
    if spec.order is not Order.FREQUENCY_FIRST:
        raise ValueError(f"wiener_norm needs a frequency-first spec, got {spec.label()}")
    return combine_outer(wiener_inner(M, spec), spec.q, M.position_cell)


def mixed_norm(M: StftMatrix, spec: MixedNormSpec) -> float:
    if spec.order is Order.POSITION_FIRST:
        return modulation_norm(M, spec)
    return wiener_norm(M, spec)


# --- index regions and dilation exponents ------------------------------------

_HALF = Fraction(1, 2)


@dataclass(frozen=True)
class IndexPoint:
    """The point ``(1/p, 1/q)`` of the unit square.

    Coordinates given as :class:`fractions.Fraction` (or ints) are
    classified exactly; floats use a comparison tolerance of ``1e-12``.
    """

    inv_p: Fraction | float
    inv_q: Fraction | float

    def __post_init__(self):
        for name in ("inv_p", "inv_q"):
            v = getattr(self, name)
            if isinstance(v, int):
                v = Fraction(v)
                object.__setattr__(self, name, v)
            if not 0 <= v <= 1:
                raise ValueError(f"{name} must lie in [0, 1], got {v!r}")

    @classmethod
    def from_exponents(cls, p, q) -> "IndexPoint":
        def inv(e):
            if isinstance(e, (int, Fraction)) and not isinstance(e, bool):
                return Fraction(1, 1) / Fraction(e)
            e = parse_exponent(e)
            if math.isinf(e):
                return Fraction(0)
            return Fraction(1) / Fraction(int(e)) if float(e).is_integer() else 1.0 / e
        return cls(inv(p), inv(q))

    @property
    def exact(self) -> bool:
        return isinstance(self.inv_p, Fraction) and isinstance(self.inv_q, Fraction)

    def conjugate(self) -> "IndexPoint":
        """``(1/p', 1/q')``."""
        return IndexPoint(1 - self.inv_p, 1 - self.inv_q)


def _le(a, b, exact: bool) -> bool:
    return a <= b if exact else a <= b + 1e-12


def regions(pt: IndexPoint) -> dict[str, bool]:
    """Membership of ``pt`` in the six index sets ``I1, I2, I3`` and their
    starred counterparts."""
    a, b, ex = pt.inv_p, pt.inv_q, pt.exact
    half = _HALF if ex else 0.5
    return {
        "I1": _le(max(a, 1 - a), b, ex),
        "I1*": _le(b, min(a, 1 - a), ex),
        "I2": _le(max(b, half), 1 - a, ex),
        "I2*": _le(1 - a, min(b, half), ex),
        "I3": _le(max(b, half), a, ex),
        "I3*": _le(a, min(b, half), ex),
    }


def _branch_values(pt: IndexPoint) -> dict[str, Fraction | float]:
    a, b = pt.inv_p, pt.inv_q
    return {"1": -a, "2": b - 1, "3": -2 * a + b}


def mu_branches(pt: IndexPoint) -> tuple[list, list]:
    """All applicable branch values ``(mu1 candidates, mu2 candidates)``."""
    member = regions(pt)
    vals = _branch_values(pt)
    mu1 = [vals[i] for i in "123" if member[f"I{i}*"]]
    mu2 = [vals[i] for i in "123" if member[f"I{i}"]]
    return mu1, mu2


def mu_exponents(pt: IndexPoint):
    """Return ``(mu1, mu2)`` at ``(1/p, 1/q)``.

    ``mu1`` is read off the starred regions and ``mu2`` off the unstarred
    ones; on shared boundaries the first applicable branch is used.
    """
    mu1, mu2 = mu_branches(pt)
    if not mu1 or not mu2:
        raise AssertionError(f"index point {pt} not covered by the index regions")
    return mu1[0], mu2[0]


def dilation_slope_bracket(spec: MixedNormSpec, dim: int) -> tuple[float, float]:
    """Log-log slope range allowed for ``lambda -> ||f_lambda||`` at large
    ``lambda`` in ``W(FL^p_s, L^q_t)``.

    The two-sided estimate reads ``lambda^{d mu2(p',q')} min{1,lambda^t}
    min{1,lambda^-s}`` from below and ``lambda^{d mu1(p',q')}
    max{1,lambda^t} max{1,lambda^-s}`` from above.
    """
    if spec.order is not Order.FREQUENCY_FIRST:
        raise ValueError("dilation brackets are stated for Wiener amalgam norms")
    mu1, mu2 = mu_exponents(IndexPoint.from_exponents(spec.p, spec.q).conjugate())
    t, s = spec.gamma, spec.s
    lower = dim * float(mu2) + min(0.0, t) + min(0.0, -s)
    upper = dim * float(mu1) + max(0.0, t) + max(0.0, -s)
    return lower, upper
