"""Finitely supported probability measures on the real line.

An :class:`AtomicMeasure` is immutable; every operation here returns a new
measure.  Infinite functional values are carried as ordinary IEEE floats
(``math.inf``), never NaN.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any, Iterable, Optional

import numpy as np

from .errors import DomainError, InputError
from .serialize import JSON_DIGITS, dumps

MERGE_TOL = 1e-9
RENORMALIZE_TOL = 1e-9


def _merge_sorted(xs: np.ndarray, ws: np.ndarray, merge_tol: float) -> tuple[np.ndarray, np.ndarray]:
    # chains of atoms closer than merge_tol collapse to their barycenter
    out_x: list[float] = []
    out_w: list[float] = []
    start = 0
    n = len(xs)
    for i in range(1, n + 1):
        if i == n or xs[i] - xs[i - 1] > merge_tol:
            w = float(np.sum(ws[start:i]))
            if i - start == 1:
                x = float(xs[start])
            else:
                x = float(np.dot(xs[start:i], ws[start:i]) / w)
            out_x.append(x)
            out_w.append(w)
            start = i
    return np.array(out_x, dtype=float), np.array(out_w, dtype=float)


@dataclass(frozen=True, eq=False)
class AtomicMeasure:
    """A probability measure ``sum_i w_i * delta_{x_i}``.

    Construction sorts the atoms, merges locations closer than
    ``merge_tol`` (weights summed) and renormalizes the total mass when it
    is within ``1e-9`` of one.  Anything further from a probability
    measure raises :class:`InputError`.
    """

    xs: np.ndarray
    ws: np.ndarray
    merge_tol: float = MERGE_TOL
    name: Optional[str] = field(default=None, compare=False)

    def __post_init__(self) -> None:
        xs = np.asarray(self.xs, dtype=float).ravel()
        ws = np.asarray(self.ws, dtype=float).ravel()
        if xs.shape != ws.shape:
            raise InputError("locations and weights differ in length")
        if xs.size == 0:
            raise InputError("a measure needs at least one atom")
        if not (np.all(np.isfinite(xs)) and np.all(np.isfinite(ws))):
            raise InputError("atom locations and weights must be finite")
        if np.any(ws <= 0):
            raise InputError("atom weights must be strictly positive")
        if not self.merge_tol >= 0:
            raise InputError("merge_tol must be non-negative")
        total = float(np.sum(ws))
        if abs(total - 1.0) > RENORMALIZE_TOL:
            raise InputError(f"total mass {total!r} is not 1")
        order = np.argsort(xs, kind="stable")
        xs, ws = _merge_sorted(xs[order], ws[order], self.merge_tol)
        ws = ws / np.sum(ws)
        xs.setflags(write=False)
        ws.setflags(write=False)
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "ws", ws)

    # -- construction helpers -------------------------------------------------

    @classmethod
    def dirac(cls, x: float) -> "AtomicMeasure":
        return cls([x], [1.0])

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[float, float]], merge_tol: float = MERGE_TOL) -> "AtomicMeasure":
        pairs = list(pairs)
        return cls([p[0] for p in pairs], [p[1] for p in pairs], merge_tol=merge_tol)

    def with_atoms(self, xs, ws) -> "AtomicMeasure":
        """New measure with the same ``merge_tol``."""
        return AtomicMeasure(xs, ws, merge_tol=self.merge_tol)

    # -- basic queries --------------------------------------------------------

    def __len__(self) -> int:
        return len(self.xs)

    def __iter__(self):
        return iter(zip(self.xs.tolist(), self.ws.tolist()))

    def __repr__(self) -> str:
        atoms = ", ".join(f"{x:.6g}@{w:.6g}" for x, w in self)
        return f"AtomicMeasure({atoms})"

    @property
    def atoms(self) -> list[tuple[float, float]]:
        return list(self)

    def has_atom_at_zero(self) -> bool:
        return bool(np.any(self.xs == 0.0))

    def is_symmetric(self, loc_tol: Optional[float] = None, weight_tol: float = 1e-9) -> bool:
        loc_tol = self.merge_tol if loc_tol is None else loc_tol
        xs, ws = self.xs, self.ws
        if not np.all(np.abs(xs + xs[::-1]) <= loc_tol + 1e-12 * np.abs(xs)):
            return False
        return bool(np.all(np.abs(ws - ws[::-1]) <= weight_tol))

    def allclose(self, other: "AtomicMeasure", atol: float = 1e-10) -> bool:
        if len(self) != len(other):
            return False
        return bool(np.all(np.abs(self.xs - other.xs) <= atol) and np.all(np.abs(self.ws - other.ws) <= atol))

    def distance(self, other: "AtomicMeasure") -> float:
        """Max deviation over matched atoms, ``inf`` when the atom counts differ."""
        if len(self) != len(other):
            return math.inf
        return float(max(np.max(np.abs(self.xs - other.xs)), np.max(np.abs(self.ws - other.ws))))


RADEMACHER = AtomicMeasure([-1.0, 1.0], [0.5, 0.5], name="rademacher")


def rademacher() -> AtomicMeasure:
    """The Rademacher law ``(delta_{-1} + delta_{+1}) / 2``."""
    return RADEMACHER


def symmetric_two_point(a: float) -> AtomicMeasure:
    """``(delta_{-a} + delta_{a}) / 2``."""
    a = abs(float(a))
    if a == 0:
        return AtomicMeasure.dirac(0.0)
    return AtomicMeasure([-a, a], [0.5, 0.5])


# -- push-forwards ------------------------------------------------------------


def symmetrize(mu: AtomicMeasure) -> AtomicMeasure:
    """``mu^s(B) = (mu(B) + mu(-B)) / 2``."""
    xs = np.concatenate([mu.xs, -mu.xs])
    ws = np.concatenate([mu.ws, mu.ws]) / 2.0
    return mu.with_atoms(xs, ws)


def dilate(mu: AtomicMeasure, a: float) -> AtomicMeasure:
    """Push-forward by ``x -> a * x``."""
    a = float(a)
    if a == 0.0 or not math.isfinite(a):
        raise InputError("dilation factor must be finite and non-zero")
    if a == 1.0:
        return mu
    return mu.with_atoms(a * mu.xs, mu.ws)


def square_pushforward(mu: AtomicMeasure) -> AtomicMeasure:
    """Push-forward by ``x -> x**2``; atoms at ``+-x`` collapse."""
    return mu.with_atoms(mu.xs * mu.xs, mu.ws)


def symmetric_sqrt_pullback(nu: AtomicMeasure) -> AtomicMeasure:
    """The unique symmetric measure whose square push-forward is ``nu``."""
    if np.any(nu.xs < 0):
        raise InputError("pull-back needs a measure on [0, inf)")
    roots = np.sqrt(nu.xs)
    positive = roots > 0
    xs = np.concatenate([-roots[positive][::-1], roots[~positive], roots[positive]])
    ws = np.concatenate([nu.ws[positive][::-1] / 2, nu.ws[~positive], nu.ws[positive] / 2])
    return nu.with_atoms(xs, ws)


def normalize_variance(mu: AtomicMeasure) -> AtomicMeasure:
    """Dilate ``mu`` so its second moment is one."""
    m2 = float(np.dot(mu.ws, mu.xs**2))
    if m2 <= 0:
        raise InputError("cannot normalize the point mass at 0")
    return dilate(mu, 1.0 / math.sqrt(m2))


# -- moments ------------------------------------------------------------------


def moment(mu: AtomicMeasure, k: int) -> float:
    """``sum_i w_i x_i**k``; negative ``k`` with an atom at 0 is ``+inf`` (even) or an error (odd)."""
    k = int(k)
    if k == 0:
        return 1.0
    if k < 0 and mu.has_atom_at_zero():
        if k % 2 == 0:
            return math.inf
        raise DomainError(f"moment of order {k} is undefined with an atom at 0")
    return float(np.dot(mu.ws, mu.xs ** float(k)))


@dataclass(frozen=True)
class CumulantVector:
    """The first four Boolean cumulants."""

    r1: float
    r2: float
    r3: float
    r4: float

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.r1, self.r2, self.r3, self.r4)

    def to_moments(self) -> tuple[float, float, float, float]:
        r1, r2, r3, r4 = self.as_tuple()
        m1 = r1
        m2 = r1**2 + r2
        m3 = r1**3 + 2 * r1 * r2 + r3
        m4 = r1**4 + 3 * r1**2 * r2 + r2**2 + 2 * r3 * r1 + r4
        return (m1, m2, m3, m4)

    @classmethod
    def from_moments(cls, m1: float, m2: float, m3: float, m4: float) -> "CumulantVector":
        r1 = m1
        r2 = m2 - r1**2
        r3 = m3 - r1**3 - 2 * r1 * r2
        r4 = m4 - r1**4 - 3 * r1**2 * r2 - r2**2 - 2 * r3 * r1
        return cls(r1, r2, r3, r4)


def boolean_cumulants(mu: AtomicMeasure) -> CumulantVector:
    return CumulantVector.from_moments(*(moment(mu, k) for k in (1, 2, 3, 4)))


# -- JSON ---------------------------------------------------------------------


def _is_number(v: Any) -> bool:
    return isinstance(v, (int, float)) and not isinstance(v, bool)


def measure_from_dict(doc: Any, merge_tol: float = MERGE_TOL) -> AtomicMeasure:
    if not isinstance(doc, dict):
        raise InputError("measure document must be a JSON object")
    unknown = set(doc) - {"name", "atoms"}
    if unknown:
        raise InputError(f"unknown keys in measure document: {sorted(unknown)}")
    name = doc.get("name")
    if name is not None and not isinstance(name, str):
        raise InputError('"name" must be a string')
    atoms = doc.get("atoms")
    if not isinstance(atoms, list) or not atoms:
        raise InputError('"atoms" must be a non-empty array')
    xs, ws = [], []
    for i, atom in enumerate(atoms):
        if not isinstance(atom, dict) or set(atom) != {"x", "w"}:
            raise InputError(f'atom {i} must be an object with exactly "x" and "w"')
        if not (_is_number(atom["x"]) and _is_number(atom["w"])):
            raise InputError(f"atom {i} has non-numeric fields")
        xs.append(float(atom["x"]))
        ws.append(float(atom["w"]))
    if any(w <= 0 for w in ws):
        raise InputError("atom weights must be strictly positive")
    return AtomicMeasure(xs, ws, merge_tol=merge_tol, name=name)


def parse_measure(text: str, merge_tol: float = MERGE_TOL) -> AtomicMeasure:
    """Parse a measure JSON document (see :func:`measure_to_json`)."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc}") from None
    return measure_from_dict(doc, merge_tol=merge_tol)


def measure_to_dict(mu: AtomicMeasure) -> dict:
    doc: dict = {}
    if mu.name is not None:
        doc["name"] = mu.name
    doc["atoms"] = [{"x": x, "w": w} for x, w in mu]
    return doc


def measure_to_json(mu: AtomicMeasure) -> str:
    return dumps(measure_to_dict(mu), digits=JSON_DIGITS)
