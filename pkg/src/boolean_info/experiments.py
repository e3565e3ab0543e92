"""CLT tables, de Bruijn quadrature checks, monotonicity and rate scans.

Every scan returns plain row objects ordered by ``n`` or ``t``; the
``*_COLUMNS`` tuples fix the CSV layout for each of them.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

from .errors import BooleanInfoError, DomainError, InputError, SymmetryError
from .functionals import (
    FunctionalReport,
    entropy,
    entropy_rel,
    fisher,
    fisher_rel,
    fisher_squared,
    nm_entropy,
    nm_entropy_rel,
    nm_fisher,
    nm_fisher_rel,
    relative_report,
    wasserstein,
)
from .measure import RADEMACHER, AtomicMeasure, boolean_cumulants, moment
from .transform import clt_measure, continuous_sq_power, heat_flow, normalized_sum, ou_flow

N_MAX_CAP = 500
IDENTITY_TOL = 1e-8
MONOTONE_TOL = 1e-10
SIMPSON_MAX_DEPTH = 30

CLT_COLUMNS = (
    "n",
    "gamma",
    "gamma_rel",
    "psi",
    "psi_rel",
    "gamma_star",
    "psi_star",
    "d_star",
    "w1",
    "w2",
    "d_star_identity_residual",
    "w1_bound_slack",
    "w2_bound_slack",
    "entropic_hsi_slack",
    "fisher_rate_slack",
    "failed",
)

RATE_COLUMNS = (
    "n",
    "gamma_rel",
    "hsi_bound",
    "entropic_hsi_slack",
    "psi_rel",
    "fisher_bound",
    "fisher_rate_slack",
    "psi_star_residual",
    "gamma_star_residual",
    "fisher_decay_exponent",
)

DECAY_COLUMNS = (
    "t",
    "gamma_rel",
    "gamma_rel_bound",
    "micro_slack",
    "gamma_star_rel",
    "gamma_star_rel_bound",
    "nm_slack",
)


def _sub(a: float, b: float) -> Optional[float]:
    # extended difference; inf - inf has no value
    if math.isinf(a) and a == b:
        return None
    return a - b


def _standardized_symmetric(mu: AtomicMeasure) -> None:
    if not mu.is_symmetric():
        raise SymmetryError("scan needs a symmetric measure")
    m1, m2 = moment(mu, 1), moment(mu, 2)
    if abs(m1) > 1e-9 or abs(m2 - 1.0) > 1e-9:
        raise InputError(f"scan needs mean 0 and variance 1 (got m2={m2:.12g})")


def _hsi_bound(r4: float, n: int, psi_star_rel: float) -> float:
    # HSI with the exact discrepancy D*^2 = r4/n
    if math.isinf(psi_star_rel):
        return math.inf
    if r4 <= 0:
        return 0.0
    d2 = r4 / n
    return 0.5 * d2 * math.log1p(psi_star_rel / d2)


def _parallel_map(fn: Callable, items: Sequence, jobs: int) -> list:
    if jobs <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


# -- CLT table ----------------------------------------------------------------


@dataclass(frozen=True)
class CltRow:
    n: int
    report: Optional[FunctionalReport]
    d_star_identity_residual: Optional[float]
    w1: Optional[float]
    w2: Optional[float]
    w1_bound_slack: Optional[float]
    w2_bound_slack: Optional[float]
    entropic_hsi_slack: Optional[float]
    fisher_rate_slack: Optional[float]
    failed: bool = False
    error: Optional[str] = None

    def as_dict(self) -> dict:
        out = {"n": self.n}
        rep = self.report
        for key in ("gamma", "gamma_rel", "psi", "psi_rel", "gamma_star", "psi_star", "d_star"):
            out[key] = getattr(rep, key) if rep else None
        out.update(
            w1=self.w1,
            w2=self.w2,
            d_star_identity_residual=self.d_star_identity_residual,
            w1_bound_slack=self.w1_bound_slack,
            w2_bound_slack=self.w2_bound_slack,
            entropic_hsi_slack=self.entropic_hsi_slack,
            fisher_rate_slack=self.fisher_rate_slack,
            failed=self.failed,
        )
        if self.error:
            out["error"] = self.error
        return out

    def violations(self, tol: float = 1e-9) -> list[str]:
        if self.failed:
            return ["failed"]
        bad = []
        if self.d_star_identity_residual > IDENTITY_TOL:
            bad.append("d_star_identity")
        for name in ("w1_bound_slack", "w2_bound_slack", "entropic_hsi_slack", "fisher_rate_slack"):
            if getattr(self, name) < -tol:
                bad.append(name)
        return bad


@dataclass(frozen=True)
class _CltJob:
    mu: AtomicMeasure
    n: int
    r4: float
    psi_star_rel: float
    rate_const: float

    def __call__(self) -> CltRow:
        try:
            mu_n = clt_measure(self.mu, self.n)
        except BooleanInfoError as exc:
            return CltRow(self.n, None, None, None, None, None, None, None, None, True, str(exc))
        rep = relative_report(mu_n)
        w1 = wasserstein(mu_n, RADEMACHER, 1)
        w2 = wasserstein(mu_n, RADEMACHER, 2)
        d = rep.d_star
        fisher_bound = self.rate_const / math.sqrt(self.n)
        return CltRow(
            n=self.n,
            report=rep,
            d_star_identity_residual=abs(self.n * d * d - self.r4),
            w1=w1,
            w2=w2,
            w1_bound_slack=d - w1,
            w2_bound_slack=d - w2,
            entropic_hsi_slack=_hsi_bound(self.r4, self.n, self.psi_star_rel) - rep.gamma_rel,
            fisher_rate_slack=fisher_bound - rep.psi_rel if not math.isinf(rep.psi_rel) else None,
        )


def _run(job: Callable[[], object]) -> object:
    return job()


def _rate_constant(mu: AtomicMeasure) -> float:
    m_neg2 = moment(mu, -2)
    spread = math.sqrt(max(moment(mu, 4) - 1.0, 0.0))
    if spread == 0:
        return 0.0
    return m_neg2 * spread


def clt_table(mu: AtomicMeasure, n_max: int, jobs: int = 1, n_cap: int = N_MAX_CAP) -> list[CltRow]:
    """One row per ``n = 1..n_max`` for the normalized sums of ``mu``.

    A row whose law cannot be recovered is marked ``failed`` instead of
    aborting the table.
    """
    _standardized_symmetric(mu)
    if int(n_max) != n_max or n_max < 1:
        raise InputError("n_max must be a positive integer")
    if n_max > n_cap:
        raise InputError(f"n_max {n_max} exceeds the cap of {n_cap}")
    r4 = boolean_cumulants(mu).r4
    jobs_list = [_CltJob(mu, n, r4, nm_fisher_rel(mu), _rate_constant(mu)) for n in range(1, int(n_max) + 1)]
    return _parallel_map(_run, jobs_list, jobs)


# -- de Bruijn ------------------------------------------------------------------


def adaptive_simpson(f: Callable[[float], float], a: float, b: float, tol: float, max_depth: int = SIMPSON_MAX_DEPTH) -> float:
    """Adaptive Simpson quadrature with absolute tolerance ``tol``."""
    cache: dict[float, float] = {}

    def g(x: float) -> float:
        if x not in cache:
            cache[x] = f(x)
        return cache[x]

    def step(a, b, fa, fm, fb, whole, eps, depth):
        m = 0.5 * (a + b)
        lm, rm = 0.5 * (a + m), 0.5 * (m + b)
        flm, frm = g(lm), g(rm)
        left = (m - a) / 6 * (fa + 4 * flm + fm)
        right = (b - m) / 6 * (fm + 4 * frm + fb)
        delta = left + right - whole
        if depth >= max_depth or abs(delta) <= 15 * eps:
            return left + right + delta / 15
        return step(a, m, fa, flm, fm, left, eps / 2, depth + 1) + step(m, b, fm, frm, fb, right, eps / 2, depth + 1)

    if a == b:
        return 0.0
    fa, fb, fm = g(a), g(b), g(0.5 * (a + b))
    whole = (b - a) / 6 * (fa + 4 * fm + fb)
    return step(a, b, fa, fm, fb, whole, tol, 0)


def de_bruijn_residual(mu: AtomicMeasure, t: float, quad_tol: float = 1e-8) -> tuple[float, float]:
    """Residuals of the microstates and non-microstates de Bruijn identities at time ``t``."""
    if not mu.is_symmetric():
        raise SymmetryError("de Bruijn identity needs a symmetric measure")
    if mu.has_atom_at_zero():
        raise DomainError("de Bruijn identity needs a measure without an atom at 0")
    if not t > 0:
        raise InputError("t must be positive")
    if not quad_tol > 0:
        raise InputError("quad_tol must be positive")
    end = heat_flow(mu, t)
    integral = adaptive_simpson(lambda s: 0.5 * fisher(heat_flow(mu, s)), 0.0, float(t), quad_tol)
    micro = abs(entropy(end) - entropy(mu) - integral)
    nm = abs(nm_entropy(end) - nm_entropy(mu) - 0.5 * math.log1p(t * nm_fisher(mu)))
    return micro, nm


# -- monotonicity ----------------------------------------------------------------


@dataclass(frozen=True)
class MonotonicityReport:
    ns: list[int]
    psi: list[float]
    gamma: list[float]
    t_grid: list[float]
    psi_t: list[float]
    psi_increases: list[int] = field(default_factory=list)
    gamma_decreases: list[int] = field(default_factory=list)
    psi_t_increases: list[float] = field(default_factory=list)
    constant: bool = False
    two_atom: bool = False

    @property
    def equality_case(self) -> Optional[str]:
        if not self.constant:
            return None
        return "rademacher_type" if self.two_atom else "violation"

    @property
    def ok(self) -> bool:
        return not (
            self.psi_increases or self.gamma_decreases or self.psi_t_increases or self.equality_case == "violation"
        )

    def as_dict(self) -> dict:
        return {
            "rows": [{"n": n, "psi": p, "gamma": g} for n, p, g in zip(self.ns, self.psi, self.gamma)],
            "t_rows": [{"t": t, "psi": p} for t, p in zip(self.t_grid, self.psi_t)],
            "psi_increases": self.psi_increases,
            "gamma_decreases": self.gamma_decreases,
            "psi_t_increases": self.psi_t_increases,
            "constant": self.constant,
            "two_atom": self.two_atom,
            "equality_case": self.equality_case,
            "ok": self.ok,
        }


def _increases(values: Sequence[float], tol: float) -> list[int]:
    return [i + 1 for i in range(len(values) - 1) if values[i + 1] > values[i] + tol]


def monotonicity_scan(
    mu: AtomicMeasure,
    n_max: int,
    t_grid: Sequence[float] = (),
    tol: float = MONOTONE_TOL,
) -> MonotonicityReport:
    """``Psi`` and ``Gamma`` along the normalized sums and the continuous family.

    Constancy is judged between the two ends of the scan (``n = 1`` and
    ``n = n_max``), where the decrease is largest.  It is the expected
    equality case for two-atom inputs and a violation otherwise.
    """
    if not mu.is_symmetric():
        raise SymmetryError("monotonicity scan needs a symmetric measure")
    if int(n_max) != n_max or n_max < 1:
        raise InputError("n_max must be a positive integer")
    t_grid = [float(t) for t in t_grid]
    if any(t < 1 for t in t_grid) or t_grid != sorted(t_grid):
        raise InputError("t_grid must be ascending with entries >= 1")
    ns = list(range(1, int(n_max) + 1))
    laws = [normalized_sum(mu, n) for n in ns]
    psi = [fisher(m) for m in laws]
    gamma = [entropy(m) for m in laws]
    psi_t = [fisher_squared(continuous_sq_power(mu, t)) for t in t_grid]
    gamma_dec = [i + 1 for i in range(len(gamma) - 1) if gamma[i + 1] < gamma[i] - tol]
    psi_inc = [n + 1 for n in _increases(psi, tol)]
    psi_t_inc = [t_grid[i] for i in _increases(psi_t, tol)]
    constant = len(ns) > 1 and all(math.isfinite(p) for p in psi) and abs(psi[-1] - psi[0]) <= tol
    return MonotonicityReport(
        ns=ns,
        psi=psi,
        gamma=gamma,
        t_grid=t_grid,
        psi_t=psi_t,
        psi_increases=psi_inc,
        gamma_decreases=[n + 1 for n in gamma_dec],
        psi_t_increases=psi_t_inc,
        constant=constant,
        two_atom=len(mu) == 2,
    )


# -- entropic and Fisher rates ------------------------------------------------------------


@dataclass(frozen=True)
class RateRow:
    n: int
    gamma_rel: float
    hsi_bound: float
    entropic_hsi_slack: float
    psi_rel: float
    fisher_bound: float
    fisher_rate_slack: float
    psi_star_residual: float
    gamma_star_residual: float
    fisher_decay_exponent: Optional[float] = None

    def as_dict(self) -> dict:
        return {c: getattr(self, c) for c in RATE_COLUMNS}


def entropic_rate_scan(mu: AtomicMeasure, n_list: Sequence[int]) -> list[RateRow]:
    """HSI-based entropy bound, Fisher rate bound and constancy residuals per ``n``."""
    _standardized_symmetric(mu)
    if mu.has_atom_at_zero():
        raise DomainError("rate scan needs a measure without an atom at 0")
    r4 = boolean_cumulants(mu).r4
    ps_rel = nm_fisher_rel(mu)
    ps, gs = nm_fisher(mu), nm_entropy(mu)
    const = _rate_constant(mu)
    rows: list[RateRow] = []
    prev: Optional[tuple[int, float]] = None
    for n in n_list:
        if int(n) != n or n < 1:
            raise InputError("n values must be positive integers")
        n = int(n)
        mu_n = clt_measure(mu, n)
        g_rel = entropy_rel(mu_n)
        p_rel = fisher_rel(mu_n)
        hsi = _hsi_bound(r4, n, ps_rel)
        fb = const / math.sqrt(n)
        exponent = None
        if prev is not None and prev[1] > 0 and p_rel > 0 and n != prev[0]:
            exponent = math.log(p_rel / prev[1]) / math.log(n / prev[0])
        rows.append(
            RateRow(
                n=n,
                gamma_rel=g_rel,
                hsi_bound=hsi,
                entropic_hsi_slack=hsi - g_rel,
                psi_rel=p_rel,
                fisher_bound=fb,
                fisher_rate_slack=fb - p_rel,
                psi_star_residual=abs(nm_fisher(mu_n) - ps),
                gamma_star_residual=abs(nm_entropy(mu_n) - gs),
                fisher_decay_exponent=exponent,
            )
        )
        prev = (n, p_rel)
    return rows


# -- exponential decay along OU --------------------------------------------------------------


@dataclass(frozen=True)
class DecayRow:
    t: float
    gamma_rel: float
    gamma_rel_bound: float
    micro_slack: Optional[float]
    gamma_star_rel: float
    gamma_star_rel_bound: float
    nm_slack: Optional[float]

    def as_dict(self) -> dict:
        return {c: getattr(self, c) for c in DECAY_COLUMNS}


def exp_decay_scan(mu: AtomicMeasure, t_grid: Sequence[float]) -> list[DecayRow]:
    """``e^{-2t} Gamma(mu|b) - Gamma(mu_t|b)`` and its non-microstates analogue along OU."""
    if not mu.is_symmetric():
        raise SymmetryError("decay scan needs a symmetric measure")
    g0, gs0 = entropy_rel(mu), nm_entropy_rel(mu)
    rows = []
    for t in t_grid:
        t = float(t)
        if not t >= 0:
            raise InputError("t values must be non-negative")
        mu_t = ou_flow(mu, t)
        decay = math.exp(-2 * t)
        g_t, gs_t = entropy_rel(mu_t), nm_entropy_rel(mu_t)
        gb, gsb = decay * g0, decay * gs0
        rows.append(DecayRow(t, g_t, gb, _sub(gb, g_t), gs_t, gsb, _sub(gsb, gs_t)))
    return rows
