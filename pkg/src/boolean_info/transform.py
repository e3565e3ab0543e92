"""Boolean convolution, convolution powers, the CLT family and the heat/OU flows.

Every operation here is linear in the self-energy ``K(z) = z - 1/G(z)``.
For a finitely supported law, ``K`` has the pole-residue form

    K(z) = m1 + sum_k rho_k / (z - zeta_k),      rho_k > 0,

where the ``zeta_k`` are the zeros of ``G`` (one strictly between each pair
of consecutive atoms) and ``sum rho_k`` is the variance.  Sums, scalings
and argument dilations of such functions keep the same form, and the law
they describe has its atoms at the solutions of ``z - K(z) = 0``.  That
function is strictly increasing between consecutive poles, so each atom
sits alone in a known bracket; it is located there by a safeguarded
solver working in coordinates relative to the nearest pole.  The weight
of the atom is ``1 / (1 - K'(z))``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.optimize import brentq

from .errors import InputError, NotACauchyTransform, SymmetryError
from .measure import (
    AtomicMeasure,
    dilate,
    moment,
    square_pushforward,
    symmetric_sqrt_pullback,
)
from .rational import Polynomial, RationalFn

POLE_MERGE_TOL = 1e-12
MASS_TOL = 1e-8
NORMALIZATION_TOL = 1e-9
_EPS = np.finfo(float).eps


# -- secular-equation root finding ---------------------------------------------


def _solve_bracket(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    lo_open: bool,
    hi_open: bool,
) -> float:
    """Root of an increasing ``f`` on ``(lo, hi)``; open ends are poles."""
    width = hi - lo
    nudge = 4 * _EPS * max(width, 1e-300)
    a = lo + nudge if lo_open else lo
    b = hi - nudge if hi_open else hi
    fa, fb = f(a), f(b)
    if fa >= 0:
        return a
    if fb <= 0:
        return b
    return brentq(f, a, b, xtol=1e-300, rtol=4 * _EPS, maxiter=200)


def _pick_roots(
    linear: float,
    shift: float,
    poles: np.ndarray,
    weights: np.ndarray,
    tails: bool,
) -> np.ndarray:
    """Roots of ``linear*z - shift - sum w/(z - p)`` (increasing between poles).

    With ``linear == 0`` there are only the ``len(poles) - 1`` interior roots.
    Each root is returned as ``(origin, offset)`` pairs so callers can form
    ``z - p_j`` without cancellation.
    """
    roots = []
    n = len(poles)

    def make(origin: float) -> Callable[[float], float]:
        d = origin - poles

        def f(tau: float) -> float:
            return linear * (origin + tau) - shift - float(np.sum(weights / (tau + d)))

        return f

    for k in range(n - 1):
        left, right = poles[k], poles[k + 1]
        gap = right - left
        f_left = make(left)
        # anchor the solve at the nearer pole
        if f_left(gap / 2) > 0:
            tau = _solve_bracket(f_left, 0.0, gap / 2, True, False)
            roots.append((left, tau))
        else:
            tau = _solve_bracket(make(right), -gap / 2, 0.0, False, True)
            roots.append((right, tau))
    if tails and n:
        reach = math.sqrt(float(np.sum(weights))) + 1.0
        lo = min(shift, poles[0]) - reach
        roots.insert(0, (poles[0], _solve_bracket(make(poles[0]), lo - poles[0], 0.0, False, True)))
        hi = max(shift, poles[-1]) + reach
        roots.append((poles[-1], _solve_bracket(make(poles[-1]), 0.0, hi - poles[-1], True, False)))
    return np.array(roots, dtype=float).reshape(-1, 2)


# -- self-energy in pole-residue form ---------------------------------------------


@dataclass(frozen=True, eq=False)
class SelfEnergy:
    """``K(z) = shift + sum_k residues[k] / (z - poles[k])`` with positive residues.

    ``origin_atom`` records, exactly, that ``K(0) = 0``: the described law
    has an atom at the origin.  The property survives sums, scalings and
    argument dilations, and lets :meth:`law` place that atom at 0 exactly
    instead of at a rounding-error offset.
    """

    shift: float
    poles: np.ndarray
    residues: np.ndarray
    origin_atom: bool = False

    def __post_init__(self) -> None:
        poles = np.asarray(self.poles, dtype=float)
        res = np.asarray(self.residues, dtype=float)
        keep = res > 0
        poles, res = poles[keep], res[keep]
        order = np.argsort(poles, kind="stable")
        poles, res = poles[order], res[order]
        if len(poles) > 1:
            # coincident poles (e.g. K + K) are combined
            mp, mr = [poles[0]], [res[0]]
            for p, r in zip(poles[1:], res[1:]):
                if p - mp[-1] <= POLE_MERGE_TOL * max(1.0, abs(p)):
                    tot = mr[-1] + r
                    mp[-1] = (mp[-1] * mr[-1] + p * r) / tot
                    mr[-1] = tot
                else:
                    mp.append(p)
                    mr.append(r)
            poles, res = np.array(mp), np.array(mr)
        object.__setattr__(self, "poles", poles)
        object.__setattr__(self, "residues", res)
        object.__setattr__(self, "shift", float(self.shift))

    @classmethod
    def of(cls, mu: AtomicMeasure) -> "SelfEnergy":
        """Self-energy of an atomic law."""
        xs, ws = np.asarray(mu.xs), np.asarray(mu.ws)
        m1 = float(np.dot(ws, xs))
        if len(xs) == 1:
            return cls(m1, np.zeros(0), np.zeros(0), origin_atom=bool(xs[0] == 0.0))
        # zeros of G: -G is increasing between atoms, no roots in the tails
        pairs = _pick_roots(0.0, 0.0, xs, ws, tails=False)
        origins, taus = pairs[:, 0], pairs[:, 1]
        zetas = origins + taus
        res = np.empty(len(zetas))
        for i, (o, tau) in enumerate(pairs):
            diff = tau + (o - xs)
            res[i] = 1.0 / float(np.sum(ws / diff**2))
        return cls(m1, zetas, res, origin_atom=bool(np.any(xs == 0.0)))

    def __call__(self, z):
        z = np.asarray(z)
        out = self.shift + np.sum(self.residues / (z[..., None] - self.poles), axis=-1)
        return out if np.ndim(out) else out.item()

    def __add__(self, other: "SelfEnergy") -> "SelfEnergy":
        return SelfEnergy(
            self.shift + other.shift,
            np.concatenate([self.poles, other.poles]),
            np.concatenate([self.residues, other.residues]),
            origin_atom=self.origin_atom and other.origin_atom,
        )

    def scaled(self, s: float) -> "SelfEnergy":
        """``z -> s * K(z)`` for ``s > 0``."""
        return SelfEnergy(s * self.shift, self.poles, s * self.residues, self.origin_atom)

    def rescaled_argument(self, t: float) -> "SelfEnergy":
        """``z -> K(t * z)`` for ``t > 0``."""
        return SelfEnergy(self.shift, self.poles / t, self.residues / t, self.origin_atom)

    def plus_constant(self, c: float) -> "SelfEnergy":
        return SelfEnergy(self.shift + c, self.poles, self.residues, self.origin_atom and c == 0)

    @property
    def variance(self) -> float:
        return float(np.sum(self.residues))

    def to_rational(self) -> RationalFn:
        """The same function as a ratio of polynomials."""
        den = Polynomial.from_roots(self.poles)
        num = den * self.shift
        for j in range(len(self.poles)):
            num = num + Polynomial.from_roots(np.delete(self.poles, j)) * self.residues[j]
        return RationalFn(num, den)

    def law(self, merge_tol: float = 1e-9) -> AtomicMeasure:
        """The probability law whose self-energy this is."""
        if len(self.poles) == 0:
            return AtomicMeasure([self.shift], [1.0], merge_tol=merge_tol)
        pairs = _pick_roots(1.0, self.shift, self.poles, self.residues, tails=True)
        if self.origin_atom:
            k = int(np.searchsorted(self.poles, 0.0))
            pairs[k] = (0.0, 0.0)
        xs = pairs[:, 0] + pairs[:, 1]
        ws = np.empty(len(xs))
        for i, (o, tau) in enumerate(pairs):
            diff = tau + (o - self.poles)
            ws[i] = 1.0 / (1.0 + float(np.sum(self.residues / diff**2)))
        total = float(np.sum(ws))
        if not (np.all(ws > 0) and abs(total - 1.0) <= MASS_TOL):
            raise NotACauchyTransform(f"recovered weights {ws} do not form a probability vector")
        return AtomicMeasure(xs, ws / total, merge_tol=merge_tol)


def self_energy(mu: AtomicMeasure) -> SelfEnergy:
    return SelfEnergy.of(mu)


# -- operations -------------------------------------------------------------------


def _require_symmetric(mu: AtomicMeasure, what: str) -> None:
    if not mu.is_symmetric():
        raise SymmetryError(f"{what} needs a symmetric measure")


def _via_squares(k_sq: SelfEnergy, merge_tol: float) -> AtomicMeasure:
    nu = k_sq.law(merge_tol)
    if np.any(nu.xs < 0):
        raise NotACauchyTransform("squared law has negative atoms")
    return symmetric_sqrt_pullback(nu)


def boolean_convolve(mu: AtomicMeasure, nu: AtomicMeasure) -> AtomicMeasure:
    """The law with ``K = K_mu + K_nu``.

    Symmetric pairs are convolved through their square push-forwards,
    which halves the number of poles involved.
    """
    tol = mu.merge_tol
    if mu.is_symmetric() and nu.is_symmetric():
        k = SelfEnergy.of(square_pushforward(mu)) + SelfEnergy.of(square_pushforward(nu))
        return _via_squares(k, tol)
    return (SelfEnergy.of(mu) + SelfEnergy.of(nu)).law(tol)


def boolean_power(mu: AtomicMeasure, n: int) -> AtomicMeasure:
    """``mu`` convolved with itself ``n`` times, computed in one shot from ``n*K``."""
    if int(n) != n or n < 1:
        raise InputError("power must be an integer >= 1")
    n = int(n)
    if n == 1:
        return mu
    if mu.is_symmetric():
        return _via_squares(SelfEnergy.of(square_pushforward(mu)).scaled(n), mu.merge_tol)
    return SelfEnergy.of(mu).scaled(n).law(mu.merge_tol)


def _check_standardized(mu: AtomicMeasure) -> None:
    m1, m2 = moment(mu, 1), moment(mu, 2)
    if abs(m1) > NORMALIZATION_TOL or abs(m2 - 1.0) > NORMALIZATION_TOL:
        raise InputError(f"CLT needs mean 0 and variance 1 (got m1={m1:.3g}, m2={m2:.12g})")


def clt_measure(mu: AtomicMeasure, n: int) -> AtomicMeasure:
    """Law of ``(X_1 + ... + X_n) / sqrt(n)`` for Boolean-i.i.d. ``X_i ~ mu``."""
    if int(n) != n or n < 1:
        raise InputError("n must be an integer >= 1")
    _check_standardized(mu)
    return normalized_sum(mu, n)


def normalized_sum(mu: AtomicMeasure, n: int) -> AtomicMeasure:
    """``mu^{(+)n}`` dilated by ``1/sqrt(n)``, without the CLT normalization check."""
    if int(n) != n or n < 1:
        raise InputError("n must be an integer >= 1")
    n = int(n)
    if n == 1:
        return mu
    if mu.is_symmetric():
        # K of the squared CLT law is z -> K_{mu^(2)}(n z)
        k = SelfEnergy.of(square_pushforward(mu)).rescaled_argument(n)
        return _via_squares(k, mu.merge_tol)
    r = math.sqrt(n)
    return SelfEnergy.of(mu).rescaled_argument(r).scaled(r).law(mu.merge_tol)


def continuous_sq_power(mu: AtomicMeasure, t: float) -> AtomicMeasure:
    """The law on ``[0, inf)`` with Cauchy transform ``1 / (z - K_{mu^(2)}(t z))``."""
    _require_symmetric(mu, "continuous_sq_power")
    if not t >= 1:
        raise InputError("t must be >= 1")
    sq = square_pushforward(mu)
    if t == 1:
        return sq
    nu = SelfEnergy.of(sq).rescaled_argument(float(t)).law(mu.merge_tol)
    if np.any(nu.xs < 0):
        raise NotACauchyTransform("continuous power left the half-line")
    return nu


def heat_flow(mu: AtomicMeasure, t: float) -> AtomicMeasure:
    """Law of ``X + sqrt(t) B`` with ``B`` Rademacher and Boolean independent of ``X``."""
    _require_symmetric(mu, "heat_flow")
    if not t >= 0:
        raise InputError("flow time must be >= 0")
    if t == 0:
        return mu
    # squaring turns the flow into convolution with delta_t, whose K is t
    k = SelfEnergy.of(square_pushforward(mu)).plus_constant(float(t))
    return _via_squares(k, mu.merge_tol)


def ou_flow(mu: AtomicMeasure, t: float) -> AtomicMeasure:
    """Law of ``exp(-t) X + sqrt(1 - exp(-2t)) B``."""
    _require_symmetric(mu, "ou_flow")
    if not t >= 0:
        raise InputError("flow time must be >= 0")
    if t == 0:
        return mu
    return dilate(heat_flow(mu, math.expm1(2 * t)), math.exp(-t))
