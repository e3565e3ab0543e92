"""Entropy, Fisher information, Stein discrepancy and transport functionals.

Microstates quantities (``gamma``, ``psi``) are the logarithmic integrals;
non-microstates ones (``gamma_star``, ``psi_star``) are built from the
negative second moment.  ``*_rel`` variants are taken relative to the
Rademacher law and are non-negative.  Infinite values are plain
``math.inf`` floats; nothing here returns NaN.

Relative quantities are summed atom by atom in forms that are exactly
non-negative term by term (``(s - log1p(s))/2`` with ``s = x^2 - 1``,
``(x - 1/x)^2``), so values near equilibrium do not lose their sign to
cancellation.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from .errors import DomainError, InputError, SymmetryError
from .measure import RADEMACHER, AtomicMeasure, moment, square_pushforward

__all__ = [
    "FunctionalReport",
    "d_star",
    "entropy",
    "entropy_rel",
    "fisher",
    "fisher_asymmetric",
    "fisher_lower_bound",
    "fisher_rel",
    "fisher_squared",
    "nm_entropy",
    "nm_entropy_rel",
    "nm_fisher",
    "nm_fisher_heatflow",
    "nm_fisher_rel",
    "relative_report",
    "w2_to_b",
    "wasserstein",
]

_LEVEL_TOL = 1e-14


# -- entropy ------------------------------------------------------------------


def entropy(mu: AtomicMeasure) -> float:
    """``Gamma = sum w log|x|``; ``-inf`` with an atom at 0."""
    if mu.has_atom_at_zero():
        return -math.inf
    return float(np.dot(mu.ws, np.log(np.abs(mu.xs))))


def entropy_rel(mu: AtomicMeasure) -> float:
    """``Gamma(mu|b) = m2/2 - Gamma - 1/2``."""
    if mu.has_atom_at_zero():
        return math.inf
    s = mu.xs * mu.xs - 1.0
    return float(np.dot(mu.ws, 0.5 * (s - np.log1p(s))))


def nm_fisher(mu: AtomicMeasure) -> float:
    """``Psi* = m_{-2}``."""
    return moment(mu, -2)


def nm_fisher_rel(mu: AtomicMeasure) -> float:
    """``Psi*(mu|b) = m_{-2} + m2 - 2 = sum w (x - 1/x)^2``."""
    if mu.has_atom_at_zero():
        return math.inf
    return float(np.dot(mu.ws, (mu.xs - 1.0 / mu.xs) ** 2))


def nm_entropy(mu: AtomicMeasure) -> float:
    """``Gamma* = -log(Psi*)/2``."""
    psi_star = nm_fisher(mu)
    if math.isinf(psi_star):
        return -math.inf
    return -0.5 * math.log(psi_star) + 0.0


def nm_entropy_rel(mu: AtomicMeasure) -> float:
    """``Gamma*(mu|b) = m2/2 + log(Psi*)/2 - 1/2``."""
    psi_star = nm_fisher(mu)
    if math.isinf(psi_star):
        return math.inf
    m2 = moment(mu, 2)
    return 0.5 * ((m2 - 1.0) + math.log(psi_star))


def nm_fisher_heatflow(psi_star: float, t: float) -> float:
    """Closed form of ``Psi*`` after running the heat flow for time ``t``."""
    if not psi_star > 0:
        raise InputError("psi_star must be positive")
    if not t >= 0:
        raise InputError("t must be non-negative")
    if math.isinf(psi_star):
        return 1.0 / t if t > 0 else math.inf
    return psi_star / (1.0 + t * psi_star)


# -- Fisher information -------------------------------------------------------------


def _log_kernel(y: np.ndarray) -> np.ndarray:
    # (log a - log b)/(a - b) on positive points, diagonal 1/a
    a = y[:, None]
    b = y[None, :]
    u = (a - b) / b
    with np.errstate(divide="ignore", invalid="ignore"):
        k = np.log1p(u) / (u * b)
    return np.where(u == 0, 1.0 / b, k)


def fisher_squared(nu: AtomicMeasure) -> float:
    """``iint (log x - log y)/(x - y) dnu dnu`` for ``nu`` on ``[0, inf)``."""
    if np.any(nu.xs < 0):
        raise InputError("fisher_squared needs a measure on [0, inf)")
    if nu.has_atom_at_zero():
        return math.inf
    return float(nu.ws @ _log_kernel(nu.xs) @ nu.ws)


def fisher(mu: AtomicMeasure) -> float:
    """Microstates Fisher information ``Psi``, computed on the squared law."""
    if not mu.is_symmetric():
        raise SymmetryError("fisher needs a symmetric measure; symmetrize explicitly if intended")
    return fisher_squared(square_pushforward(mu))


def fisher_rel(mu: AtomicMeasure) -> float:
    """``Psi(mu|b) = Psi + m2 - 2``."""
    psi = fisher(mu)
    if math.isinf(psi):
        return math.inf
    return psi + moment(mu, 2) - 2.0


def fisher_asymmetric(mu: AtomicMeasure) -> float:
    """Double sum of ``(g(x) - g(y))/(x - y)`` with ``g(x) = log(x^2)/x``.

    Agrees with :func:`fisher` on symmetric laws; may be negative otherwise.
    """
    if mu.has_atom_at_zero():
        raise DomainError("fisher_asymmetric is undefined with an atom at 0")
    xs, ws = mu.xs, mu.ws
    x = xs[:, None]
    y = xs[None, :]
    log_y2 = np.log(y * y)
    with np.errstate(divide="ignore", invalid="ignore"):
        # same sign: expand around y so that the diagonal is a smooth limit
        u = (x - y) / y
        ratio = np.where(u == 0, 1.0, np.log1p(np.where(u > -1, u, 0.0)) / u)
        same = (2.0 * ratio - log_y2) / (x * y)
        g = np.log(xs * xs) / xs
        cross = (g[:, None] - g[None, :]) / (x - y)
    k = np.where(x * y > 0, same, cross)
    return float(ws @ k @ ws)


def fisher_lower_bound(mu: AtomicMeasure) -> float:
    """``iint 2/(x^2 + y^2) dmu dmu``."""
    sq = mu.xs * mu.xs
    s = sq[:, None] + sq[None, :]
    if np.any(s == 0):
        return math.inf
    return float(mu.ws @ (2.0 / s) @ mu.ws)


# -- Stein discrepancy and transport ----------------------------------------------


def d_star(mu: AtomicMeasure) -> float:
    """Stein discrepancy ``(sum w (x^2 - 1)^2)^(1/2)``."""
    return math.sqrt(float(np.dot(mu.ws, (mu.xs * mu.xs - 1.0) ** 2)))


def w2_to_b(mu: AtomicMeasure) -> float:
    """``(sum w (|x| - 1)^2)^(1/2)``: ``W2(mu, b)`` for symmetric ``mu``, ``W2(mu^s, b)`` in general."""
    return math.sqrt(float(np.dot(mu.ws, (np.abs(mu.xs) - 1.0) ** 2)))


def wasserstein(mu: AtomicMeasure, nu: AtomicMeasure, p: int = 2) -> float:
    """``W_p`` on the line through the quantile coupling, ``p`` in {1, 2}."""
    if p not in (1, 2):
        raise InputError("p must be 1 or 2")
    cm = np.cumsum(mu.ws)
    cn = np.cumsum(nu.ws)
    cm[-1] = cn[-1] = 1.0
    levels = np.unique(np.concatenate([[0.0], cm, cn]))
    # cumulative sums of equal masses can differ in the last bit; those
    # slivers are rounding, not transport
    keep = np.concatenate([[True], np.diff(levels) > _LEVEL_TOL])
    levels = levels[keep]
    levels[-1] = 1.0
    mids = 0.5 * (levels[:-1] + levels[1:])
    widths = np.diff(levels)
    qm = mu.xs[np.minimum(np.searchsorted(cm, mids), len(cm) - 1)]
    qn = nu.xs[np.minimum(np.searchsorted(cn, mids), len(cn) - 1)]
    cost = float(np.dot(widths, np.abs(qm - qn) ** p))
    return cost if p == 1 else math.sqrt(cost)


# -- report -------------------------------------------------------------------


@dataclass(frozen=True)
class FunctionalReport:
    """Every functional of one measure; ``psi`` fields are ``None`` when undefined."""

    gamma: float
    gamma_rel: float
    gamma_star: float
    gamma_star_rel: float
    psi: Optional[float]
    psi_rel: Optional[float]
    psi_star: float
    psi_star_rel: float
    d_star: float
    m2: float
    m4: float
    m_neg2: float
    w2_to_b_sym: float

    def as_dict(self) -> dict:
        return asdict(self)


def relative_report(mu: AtomicMeasure, strict: bool = True) -> FunctionalReport:
    """All functionals of ``mu``.

    With ``strict`` a non-symmetric measure raises :class:`SymmetryError`;
    otherwise its ``psi`` and ``psi_rel`` fields are left as ``None``.
    """
    symmetric = mu.is_symmetric()
    if strict and not symmetric:
        raise SymmetryError("psi fields need a symmetric measure")
    psi = psi_rel = None
    if symmetric:
        psi = fisher(mu)
        psi_rel = math.inf if math.isinf(psi) else psi + moment(mu, 2) - 2.0
    return FunctionalReport(
        gamma=entropy(mu),
        gamma_rel=entropy_rel(mu),
        gamma_star=nm_entropy(mu),
        gamma_star_rel=nm_entropy_rel(mu),
        psi=psi,
        psi_rel=psi_rel,
        psi_star=nm_fisher(mu),
        psi_star_rel=nm_fisher_rel(mu),
        d_star=d_star(mu),
        m2=moment(mu, 2),
        m4=moment(mu, 4),
        m_neg2=moment(mu, -2),
        w2_to_b_sym=w2_to_b(mu),
    )


def distance_to_b(mu: AtomicMeasure, p: int = 2) -> float:
    return wasserstein(mu, RADEMACHER, p)
