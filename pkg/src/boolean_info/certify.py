"""Numerical certificates for the functional inequalities and identities.

Each check is an :class:`InequalitySlack`.  Inequalities are written
``lhs <= rhs`` with ``slack = rhs - lhs``; identities carry
``slack = |lhs - rhs|``.  Extended values follow fixed rules:

* finite (or ``-inf``) ``lhs`` against ``rhs = +inf`` is satisfied with
  ``slack = +inf``, and symmetrically for ``lhs = -inf``;
* both sides equal and infinite is *indeterminate*: ``slack`` and
  ``satisfied`` are ``None`` and fuzz campaigns skip the entry.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import IndeterminateError, InputError, SymmetryError
from .functionals import (
    d_star,
    entropy,
    entropy_rel,
    fisher,
    fisher_lower_bound,
    fisher_rel,
    nm_entropy,
    nm_entropy_rel,
    nm_fisher,
    nm_fisher_rel,
    w2_to_b,
)
from .measure import AtomicMeasure, boolean_cumulants, dilate, moment
from .serialize import csv_text, dumps
from .transform import boolean_convolve

DEFAULT_TOL = 1e-9
EQUALITY_TOL = 1e-8
DEGENERATE_D = 1e-12

SINGLE_NAMES = (
    "talagrand",
    "lsi_micro",
    "lsi_nm",
    "lsi_cross",
    "hwi",
    "hsi",
    "wsh",
    "ws",
    "cramer_rao_micro",
    "cramer_rao_nm",
    "micro_le_nm_entropy",
    "micro_le_nm_fisher",
    "psi_rel_nonneg",
    "gamma_rel_nonneg",
    "fisher_lower_bdd",
    "fisher_upper_bdd",
    "fisher_entropy_product",
)

PAIR_NAMES = (
    "shannon_stam",
    "blachman_stam_micro",
    "blachman_stam_nm",
    "stam_micro",
    "stam_nm_equality",
    "entropy_power_micro",
    "entropy_power_nm_equality",
    "cumulant_additivity",
)

SLACK_COLUMNS = ("name", "lhs", "rhs", "slack", "satisfied")


@dataclass(frozen=True)
class InequalitySlack:
    name: str
    lhs: float
    rhs: float
    slack: Optional[float]
    satisfied: Optional[bool]
    equality: bool = False

    @property
    def indeterminate(self) -> bool:
        return self.satisfied is None

    @property
    def violated(self) -> bool:
        return self.satisfied is False

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "slack": self.slack,
            "satisfied": self.satisfied,
        }


def inequality(name: str, lhs: float, rhs: float, tol: float = DEFAULT_TOL) -> InequalitySlack:
    """Certificate for ``lhs <= rhs``."""
    lhs, rhs = float(lhs), float(rhs)
    if math.isnan(lhs) or math.isnan(rhs):
        raise IndeterminateError(f"{name}: NaN operand")
    if math.isinf(lhs) and lhs == rhs:
        return InequalitySlack(name, lhs, rhs, None, None)
    if lhs == -math.inf or rhs == math.inf:
        return InequalitySlack(name, lhs, rhs, math.inf, True)
    if lhs == math.inf or rhs == -math.inf:
        return InequalitySlack(name, lhs, rhs, -math.inf, False)
    slack = rhs - lhs
    return InequalitySlack(name, lhs, rhs, slack, slack >= -tol)


def equality(name: str, lhs: float, rhs: float, tol: float = EQUALITY_TOL) -> InequalitySlack:
    """Certificate for ``lhs == rhs`` with tolerance ``tol * max(1, |lhs|)``."""
    lhs, rhs = float(lhs), float(rhs)
    if math.isinf(lhs) or math.isinf(rhs):
        ok = lhs == rhs
        return InequalitySlack(name, lhs, rhs, 0.0 if ok else math.inf, ok, equality=True)
    residual = abs(lhs - rhs)
    return InequalitySlack(name, lhs, rhs, residual, residual <= tol * max(1.0, abs(lhs)), equality=True)


def _mul(a: float, b: float) -> float:
    # extended product with 0 * inf = 0 (a vanishing factor kills the term)
    if a == 0 or b == 0:
        return 0.0
    return a * b


def _require_symmetric(mu: AtomicMeasure) -> None:
    if not mu.is_symmetric():
        raise SymmetryError("certificates need symmetric measures")


# -- single measure -------------------------------------------------------------


def _degenerate(name: str, lhs: float, g_rel: float, tol: float) -> InequalitySlack:
    if g_rel <= DEGENERATE_D:
        return InequalitySlack(name, lhs, lhs, 0.0, True)
    raise IndeterminateError(f"{name}: vanishing Stein discrepancy with relative entropy {g_rel!r}")


def certify_single(mu: AtomicMeasure, tol: float = DEFAULT_TOL) -> list[InequalitySlack]:
    """The seventeen single-measure certificates, in :data:`SINGLE_NAMES` order."""
    _require_symmetric(mu)
    m2 = moment(mu, 2)
    m_neg2 = moment(mu, -2)
    g = entropy(mu)
    g_rel = entropy_rel(mu)
    gs_rel = nm_entropy_rel(mu)
    psi = fisher(mu)
    psi_rel = fisher_rel(mu)
    ps_rel = nm_fisher_rel(mu)
    w2 = w2_to_b(mu)
    d = d_star(mu)
    d2 = d * d

    out = [
        inequality("talagrand", w2 * w2, 2 * g_rel, tol),
        inequality("lsi_micro", g_rel, 0.5 * psi_rel, tol),
        inequality("lsi_nm", gs_rel, 0.5 * ps_rel, tol),
        inequality("lsi_cross", g_rel, 0.5 * ps_rel, tol),
        inequality("hwi", g_rel, _mul(w2, math.sqrt(ps_rel)) - 0.5 * w2 * w2, tol),
    ]
    if d <= DEGENERATE_D:
        out.append(_degenerate("hsi", g_rel, g_rel, tol))
        out.append(_degenerate("wsh", w2, g_rel, tol))
    else:
        hsi_rhs = math.inf if math.isinf(ps_rel) else 0.5 * d2 * math.log1p(ps_rel / d2)
        out.append(inequality("hsi", g_rel, hsi_rhs, tol))
        out.append(inequality("wsh", w2, d * math.acos(math.exp(-g_rel / d2)), tol))
    out += [
        inequality("ws", w2, d, tol),
        inequality("cramer_rao_micro", 1.0 / m2 if m2 > 0 else math.inf, psi, tol),
        inequality("cramer_rao_nm", 1.0 / m2 if m2 > 0 else math.inf, m_neg2, tol),
        inequality("micro_le_nm_entropy", g_rel, gs_rel, tol),
        inequality("micro_le_nm_fisher", psi_rel, ps_rel, tol),
        inequality("psi_rel_nonneg", 0.0, psi_rel, tol),
        inequality("gamma_rel_nonneg", 0.0, g_rel, tol),
        inequality("fisher_lower_bdd", fisher_lower_bound(mu), psi, tol),
        inequality("fisher_upper_bdd", psi, m_neg2, tol),
    ]
    if math.isinf(g) and math.isinf(psi):
        out.append(InequalitySlack("fisher_entropy_product", 1.0, math.inf, None, None))
    else:
        out.append(inequality("fisher_entropy_product", 1.0, math.exp(2 * g) * psi, tol))
    return out


# -- pairs --------------------------------------------------------------------


def mixture(mu: AtomicMeasure, nu: AtomicMeasure, theta: float) -> AtomicMeasure:
    """Law of ``sqrt(theta) X + sqrt(1 - theta) Y`` with Boolean independent ``X ~ mu``, ``Y ~ nu``."""
    if not 0.0 <= theta <= 1.0:
        raise InputError("theta must lie in [0, 1]")
    if theta == 0.0:
        return nu
    if theta == 1.0:
        return mu
    return boolean_convolve(dilate(mu, math.sqrt(theta)), dilate(nu, math.sqrt(1.0 - theta)))


def _weighted(theta: float, a: float, b: float) -> float:
    # theta*a + (1-theta)*b, dropping terms whose weight vanishes
    parts = [w * v for w, v in ((theta, a), (1.0 - theta, b)) if w > 0]
    return float(sum(parts))


def _inv(x: float) -> float:
    return 0.0 if math.isinf(x) else 1.0 / x


def certify_pair(
    mu: AtomicMeasure,
    nu: AtomicMeasure,
    theta: float = 0.5,
    tol: float = DEFAULT_TOL,
    eq_tol: float = EQUALITY_TOL,
) -> list[InequalitySlack]:
    """The eight two-measure certificates, in :data:`PAIR_NAMES` order."""
    _require_symmetric(mu)
    _require_symmetric(nu)
    mix = mixture(mu, nu, theta)
    both = boolean_convolve(mu, nu)

    g_mu, g_nu, g_mix, g_both = entropy(mu), entropy(nu), entropy(mix), entropy(both)
    p_mu, p_nu, p_mix, p_both = fisher(mu), fisher(nu), fisher(mix), fisher(both)
    ps_mu, ps_nu, ps_mix, ps_both = nm_fisher(mu), nm_fisher(nu), nm_fisher(mix), nm_fisher(both)
    gs_mu, gs_nu, gs_both = nm_entropy(mu), nm_entropy(nu), nm_entropy(both)

    r_mu = np.array(boolean_cumulants(mu).as_tuple())
    r_nu = np.array(boolean_cumulants(nu).as_tuple())
    r_both = np.array(boolean_cumulants(both).as_tuple())
    deviation = float(np.max(np.abs(r_both - (r_mu + r_nu))))
    scale = float(np.max(np.abs(r_both)))

    out = [
        inequality("shannon_stam", _weighted(theta, g_mu, g_nu), g_mix, tol),
        inequality("blachman_stam_micro", p_mix, _weighted(theta, p_mu, p_nu), tol),
        inequality("blachman_stam_nm", ps_mix, _weighted(theta, ps_mu, ps_nu), tol),
        inequality("stam_micro", _inv(p_mu) + _inv(p_nu), _inv(p_both), tol),
        equality("stam_nm_equality", _inv(ps_both), _inv(ps_mu) + _inv(ps_nu), eq_tol),
        inequality("entropy_power_micro", math.exp(2 * g_mu) + math.exp(2 * g_nu), math.exp(2 * g_both), tol),
        equality(
            "entropy_power_nm_equality",
            math.exp(2 * gs_both),
            math.exp(2 * gs_mu) + math.exp(2 * gs_nu),
            eq_tol,
        ),
    ]
    cum = InequalitySlack(
        "cumulant_additivity",
        deviation,
        0.0,
        deviation,
        deviation <= eq_tol * max(1.0, scale),
        equality=True,
    )
    out.append(cum)
    return out


# -- discrete lemma and random measures ------------------------------------------------


def lemma_discrete_slack(x: Sequence[float]) -> float:
    """``(1/n^2) sum_{i,j} 2/(x_i + x_j) - 1`` after rescaling ``x`` to unit geometric mean.

    The double sum over all ordered pairs equals the diagonal ``sum 1/x_i``
    plus twice the off-diagonal ``sum_{i<j} 2/(x_i + x_j)``.
    """
    x = np.asarray(x, dtype=float).ravel()
    if x.size == 0:
        raise InputError("need at least one entry")
    if not np.all(np.isfinite(x)) or np.any(x <= 0):
        raise InputError("entries must be finite and positive")
    x = x / math.exp(float(np.mean(np.log(x))))
    n = x.size
    return float(np.sum(2.0 / (x[:, None] + x[None, :])) / (n * n) - 1.0)


def random_symmetric_measure(
    seed: int,
    pairs: int = 3,
    radius_range: tuple[float, float] = (0.1, 3.0),
) -> AtomicMeasure:
    """Symmetric law with ``pairs`` atom pairs ``+-r``; radii uniform, pair weights Dirichlet(1)."""
    lo, hi = map(float, radius_range)
    if not (0 < lo <= hi < math.inf):
        raise InputError("radius_range must satisfy 0 < lo <= hi < inf")
    if not 1 <= pairs <= 6:
        raise InputError("pairs must lie in 1..6")
    rng = np.random.default_rng(seed)
    r = rng.uniform(lo, hi, size=pairs)
    p = rng.dirichlet(np.ones(pairs))
    return AtomicMeasure(np.concatenate([-r, r]), np.concatenate([p, p]) / 2.0)


# -- output -------------------------------------------------------------------


def slacks_to_json(slacks: Iterable[InequalitySlack]) -> str:
    return dumps([s.as_dict() for s in slacks])


def slacks_to_csv(slacks: Iterable[InequalitySlack]) -> str:
    return csv_text(SLACK_COLUMNS, [s.as_dict() for s in slacks])
