"""Real polynomials and rational functions with extended-precision coefficients.

This is the coefficient-level bridge between an atomic measure and its
Cauchy transform ``G(z) = sum_i w_i / (z - x_i)`` or self-energy
``K(z) = z - 1/G(z)``.  Root finding uses companion-matrix eigenvalues
followed by Newton polishing; degrees above :data:`DEGREE_CAP` are refused.

Coefficients are held in ``numpy.longdouble``: expanding a product of a
dozen linear factors in plain doubles already perturbs clustered roots by
up to ~1e-7, while the extended mantissa keeps round trips near 1e-11.
On platforms where ``longdouble`` is a plain double the code still runs,
just with the lower accuracy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import CapacityError, NotACauchyTransform
from .measure import MERGE_TOL, AtomicMeasure

DTYPE = np.longdouble
CDTYPE = np.clongdouble
DEGREE_CAP = 64
NEWTON_STEPS = 4
COMMON_ROOT_TOL = 1e-8
WEIGHT_FLOOR = -1e-8
MASS_TOL = 1e-8


def _trim(c: np.ndarray) -> np.ndarray:
    nz = np.flatnonzero(c)
    if nz.size == 0:
        return np.zeros(1, dtype=c.dtype)
    return c[: nz[-1] + 1]


class Polynomial:
    """Polynomial with real coefficients stored in ascending degree."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence[float]):
        c = _trim(np.array(coeffs, dtype=DTYPE).ravel())
        if c.size - 1 > DEGREE_CAP:
            raise CapacityError(f"degree {c.size - 1} exceeds the cap of {DEGREE_CAP}")
        c.setflags(write=False)
        self.coeffs = c

    @classmethod
    def from_roots(cls, roots: Sequence[complex], lead: float = 1.0) -> "Polynomial":
        roots = np.asarray(roots)
        if np.iscomplexobj(roots) and np.any(roots.imag != 0):
            c = np.ones(1, dtype=CDTYPE)
            for r in roots.astype(CDTYPE):
                c = np.concatenate([[0], c]) - r * np.concatenate([c, [0]])
            c = c.real
        else:
            c = np.ones(1, dtype=DTYPE)
            for r in roots.real.astype(DTYPE):
                c = np.concatenate([[0], c]) - r * np.concatenate([c, [0]])
        return cls(DTYPE(lead) * c)

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    @property
    def lead(self) -> float:
        return float(self.coeffs[-1])

    def is_zero(self) -> bool:
        return self.coeffs.size == 1 and self.coeffs[0] == 0.0

    def evaluate(self, z):
        """Horner evaluation in extended precision (real or complex ``z``)."""
        z = np.asarray(z)
        dtype = CDTYPE if np.iscomplexobj(z) else DTYPE
        z = z.astype(dtype)
        acc = np.zeros_like(z) + self.coeffs[-1]
        for c in self.coeffs[-2::-1]:
            acc = acc * z + c
        return acc

    def __call__(self, z):
        out = self.evaluate(z)
        out = out.astype(complex if np.iscomplexobj(out) else float)
        return out if np.ndim(out) else out.item()

    def __add__(self, other: "Polynomial") -> "Polynomial":
        a, b = self.coeffs, other.coeffs
        n = max(a.size, b.size)
        return Polynomial(np.pad(a, (0, n - a.size)) + np.pad(b, (0, n - b.size)))

    def __neg__(self) -> "Polynomial":
        return Polynomial(-self.coeffs)

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __mul__(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            return Polynomial(np.convolve(self.coeffs, other.coeffs))
        return Polynomial(self.coeffs * DTYPE(other))

    __rmul__ = __mul__

    def shift_up(self, k: int = 1) -> "Polynomial":
        """Multiply by ``z**k``."""
        return Polynomial(np.concatenate([np.zeros(k, dtype=DTYPE), self.coeffs]))

    def derivative(self) -> "Polynomial":
        if self.degree == 0:
            return Polynomial([0.0])
        return Polynomial(self.coeffs[1:] * np.arange(1, self.coeffs.size, dtype=DTYPE))

    def scale_argument(self, t: float) -> "Polynomial":
        """The polynomial ``z -> p(t * z)``."""
        return Polynomial(self.coeffs * DTYPE(t) ** np.arange(self.coeffs.size))

    def roots(self) -> np.ndarray:
        """All complex roots: companion eigenvalues, then Newton-polished."""
        if self.degree < 1:
            return np.zeros(0, dtype=complex)
        c = np.asarray(self.coeffs / np.max(np.abs(self.coeffs)), dtype=float)
        n = self.degree
        comp = np.zeros((n, n))
        comp[1:, :-1] = np.eye(n - 1)
        comp[:, -1] = -c[:-1] / c[-1]
        r = np.linalg.eigvals(comp).astype(complex)
        # roots real to within eigensolver noise are snapped before polishing
        snap = np.abs(r.imag) <= 1e-9 * np.maximum(1.0, np.abs(r))
        r[snap] = r[snap].real
        dp = self.derivative()
        out = np.empty(n, dtype=complex)
        for i, x0 in enumerate(r):
            x = DTYPE(x0.real) if x0.imag == 0 else CDTYPE(x0)
            for _ in range(NEWTON_STEPS):
                d = dp.evaluate(x)
                if d == 0:
                    break
                step = self.evaluate(x) / d
                if not np.isfinite(step):
                    break
                x = x - step
                if abs(step) <= 1e-18 * max(1.0, abs(x)):
                    break
            out[i] = complex(x)
        return out

    def __repr__(self) -> str:
        return f"Polynomial({[float(c) for c in self.coeffs]})"


@dataclass(frozen=True, eq=False)
class RationalFn:
    """``num / den`` with ``den`` monic; common factors are not removed."""

    num: Polynomial
    den: Polynomial

    def __post_init__(self) -> None:
        if self.den.is_zero():
            raise ZeroDivisionError("denominator is the zero polynomial")
        lead = self.den.lead
        if lead != 1.0:
            object.__setattr__(self, "num", self.num * (1 / lead))
            object.__setattr__(self, "den", self.den * (1 / lead))

    def __call__(self, z):
        out = self.num.evaluate(z) / self.den.evaluate(z)
        out = out.astype(complex if np.iscomplexobj(out) else float)
        return out if np.ndim(out) else out.item()

    def __repr__(self) -> str:
        return f"RationalFn(num={self.num!r}, den={self.den!r})"

    def cancel_common_roots(self, tol: float = COMMON_ROOT_TOL) -> "RationalFn":
        """Remove numerator/denominator root pairs closer than ``tol``."""
        if self.num.degree < 1 or self.den.degree < 1:
            return self
        nr = list(self.num.roots())
        dr = list(self.den.roots())
        kept_n = []
        for r in nr:
            dists = [abs(r - s) for s in dr]
            j = int(np.argmin(dists)) if dists else -1
            if j >= 0 and dists[j] < tol * max(1.0, abs(r)):
                dr.pop(j)
            else:
                kept_n.append(r)
        if len(kept_n) == len(nr):
            return self
        return RationalFn(Polynomial.from_roots(kept_n, self.num.lead), Polynomial.from_roots(dr))


def cauchy_transform(mu: AtomicMeasure) -> RationalFn:
    """``G(z) = N(z) / D(z)`` with ``D = prod (z - x_i)``."""
    xs, ws = mu.xs, mu.ws
    if len(xs) > DEGREE_CAP:
        raise CapacityError(f"{len(xs)} atoms exceed the degree cap of {DEGREE_CAP}")
    den = Polynomial.from_roots(xs)
    num = Polynomial([0.0])
    for i in range(len(xs)):
        num = num + Polynomial.from_roots(np.delete(xs, i)) * ws[i]
    return RationalFn(num, den)


def k_transform(mu: AtomicMeasure) -> RationalFn:
    """``K(z) = z - 1/G(z) = (z N - D) / N``."""
    g = cauchy_transform(mu)
    n, d = g.num, g.den
    return RationalFn(n.shift_up() - d, n)


def recover_measure(g: RationalFn, merge_tol: float = MERGE_TOL) -> AtomicMeasure:
    """Invert the Cauchy transform of an atomic probability law.

    Atoms are the real roots of the denominator, weights the residues
    ``N(x) / D'(x)``.  Raises :class:`NotACauchyTransform` when the
    denominator has genuinely complex roots, a residue is clearly negative,
    or the total mass is off by more than ``1e-8``.
    """
    g = g.cancel_common_roots()
    num, den = g.num, g.den
    roots = den.roots()
    bad = np.abs(roots.imag) > 1e-7 * np.maximum(1.0, np.abs(roots))
    if np.any(bad):
        raise NotACauchyTransform(f"denominator has complex roots {roots[bad]}")
    if num.is_zero() or den.degree != num.degree + 1:
        raise NotACauchyTransform(f"degrees ({num.degree}, {den.degree}) do not describe a Cauchy transform")
    xs_ld = roots.real.astype(DTYPE)
    dden = den.derivative()
    ws = np.asarray(num.evaluate(xs_ld) / dden.evaluate(xs_ld), dtype=float)
    xs = roots.real
    if np.any(ws < WEIGHT_FLOOR):
        raise NotACauchyTransform(f"negative residue {ws.min()!r}")
    keep = ws > 0
    xs, ws = xs[keep], ws[keep]
    total = float(np.sum(ws))
    if not math.isfinite(total) or abs(total - 1.0) > MASS_TOL:
        raise NotACauchyTransform(f"residues sum to {total!r}")
    return AtomicMeasure(xs, ws / total, merge_tol=merge_tol)
