import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings

from boolean_info.errors import CapacityError, NotACauchyTransform
from boolean_info.measure import RADEMACHER, AtomicMeasure, moment, symmetric_two_point
from boolean_info.rational import (
    DEGREE_CAP,
    Polynomial,
    RationalFn,
    cauchy_transform,
    k_transform,
    recover_measure,
)

from conftest import atomic_measures, mp_cauchy

Z_PROBES = [2.5 + 0.3j, -1.2 + 1j, 0.4 + 2j, 5j, 0.1 - 0.7j]


def coeffs(p):
    return [float(c) for c in p.coeffs]


# -- polynomials --------------------------------------------------------------------


def test_polynomial_trims_and_arithmetic():
    p = Polynomial([1.0, 2.0, 0.0, 0.0])
    assert p.degree == 1
    q = Polynomial([-1.0, 1.0])
    assert coeffs(p * q) == [-1.0, -1.0, 2.0]
    assert coeffs(p + q) == [0.0, 3.0]
    assert (p - p).is_zero()
    assert coeffs(Polynomial([1, 2, 3]).derivative()) == [2.0, 6.0]


def test_polynomial_roots_wilkinson_like():
    roots = np.linspace(-3, 3, 13)
    p = Polynomial.from_roots(roots)
    np.testing.assert_allclose(np.sort(p.roots().real), roots, atol=1e-10)


def test_polynomial_degree_cap():
    with pytest.raises(CapacityError):
        Polynomial(np.ones(DEGREE_CAP + 2))


def test_scale_argument():
    p = Polynomial([1.0, 2.0, 3.0])
    assert p.scale_argument(2.0).evaluate(1.5) == pytest.approx(p.evaluate(3.0))


# -- transforms ---------------------------------------------------------------------


def test_cauchy_rademacher():
    g = cauchy_transform(RADEMACHER)
    assert coeffs(g.num) == pytest.approx([0.0, 1.0])
    assert coeffs(g.den) == pytest.approx([-1.0, 0.0, 1.0])


def test_cauchy_dirac():
    g = cauchy_transform(AtomicMeasure.dirac(2.5))
    assert coeffs(g.num) == [1.0]
    assert coeffs(g.den) == [-2.5, 1.0]


def test_cauchy_two_atoms_partial_fraction():
    # 1/3 (z - 1/2) + 2/3 (z - 2) = z - 3/2; residues N(x_i)/D'(x_i) give the weights back
    g = cauchy_transform(AtomicMeasure([2.0, 0.5], [1 / 3, 2 / 3]))
    assert coeffs(g.num) == pytest.approx([-1.5, 1.0], abs=1e-15)
    assert coeffs(g.den) == pytest.approx([1.0, -2.5, 1.0], abs=1e-15)
    dden = g.den.derivative()
    assert float(g.num.evaluate(2.0) / dden.evaluate(2.0)) == pytest.approx(1 / 3, abs=1e-15)
    assert float(g.num.evaluate(0.5) / dden.evaluate(0.5)) == pytest.approx(2 / 3, abs=1e-15)


def test_cauchy_matches_mpmath(measure_b):
    g = cauchy_transform(measure_b)
    for z in Z_PROBES:
        ref = complex(mp_cauchy(measure_b, mpmath.mpc(z)))
        assert abs(g(z) - ref) <= 1e-14 * abs(ref)


def test_k_transform_examples():
    k = k_transform(RADEMACHER)
    for z in Z_PROBES:
        assert abs(k(z) - 1 / z) <= 1e-12
    kc = k_transform(AtomicMeasure.dirac(-0.75))
    for z in Z_PROBES:
        assert abs(kc(z) - (-0.75)) <= 1e-14
    a = 1.7
    ka = k_transform(symmetric_two_point(a))
    for z in Z_PROBES:
        assert abs(ka(z) - a * a / z) <= 1e-12


def test_recover_examples():
    g = RationalFn(Polynomial([0.0, 1.0]), Polynomial([-1.0, 0.0, 1.0]))
    assert recover_measure(g).allclose(RADEMACHER, atol=1e-15)
    g2 = RationalFn(Polynomial([0.0, 1.0]), Polynomial([-2.0, 0.0, 1.0]))
    assert recover_measure(g2).allclose(symmetric_two_point(math.sqrt(2)), atol=1e-15)
    with pytest.raises(NotACauchyTransform):
        recover_measure(RationalFn(Polynomial([1.0]), Polynomial([1.0, 0.0, 1.0])))


def test_recover_rejects_negative_weights():
    # residues at +-1 are 3/2 and -1/2
    g = RationalFn(Polynomial([2.0, 1.0]), Polynomial([-1.0, 0.0, 1.0]))
    with pytest.raises(NotACauchyTransform):
        recover_measure(g)


def test_recover_rejects_wrong_mass():
    g = RationalFn(Polynomial([0.0, 2.0]), Polynomial([-1.0, 0.0, 1.0]))
    with pytest.raises(NotACauchyTransform):
        recover_measure(g)


def test_common_root_cancellation():
    # (z - 2) / ((z - 2)(z - 1)) -> 1/(z - 1)
    g = RationalFn(Polynomial.from_roots([2.0]), Polynomial.from_roots([2.0, 1.0]))
    assert recover_measure(g).allclose(AtomicMeasure.dirac(1.0), atol=1e-12)


# -- properties ---------------------------------------------------------------------


@settings(max_examples=60)
@given(atomic_measures(max_atoms=12))
def test_recover_inverts_cauchy(mu):
    back = recover_measure(cauchy_transform(mu))
    assert len(back) == len(mu)
    np.testing.assert_allclose(back.xs, mu.xs, atol=1e-10)
    np.testing.assert_allclose(back.ws, mu.ws, atol=1e-10)


@given(atomic_measures())
def test_cauchy_tail_bound(mu):
    # iy G(iy) - 1 = m1/(iy) + int x^2 / (iy (iy - x)) dmu
    g = cauchy_transform(mu)
    m1, m2 = moment(mu, 1), moment(mu, 2)
    assert abs(5j * g(5j) - 1) <= abs(m1) / 5 + m2 / 25 + 1e-9
    centered = AtomicMeasure(mu.xs - m1, mu.ws)
    gc = cauchy_transform(centered)
    assert abs(5j * gc(5j) - 1) <= moment(centered, 2) / 20 + 1e-9
    errs = [abs(1j * y * g(1j * y) - 1) for y in (1.0, 2.0, 5.0)]
    assert errs[2] <= errs[0] + 1e-12


@given(atomic_measures())
def test_k_transform_matches_mpmath(mu):
    k = k_transform(mu)
    for z in Z_PROBES:
        zz = mpmath.mpc(z)
        ref = complex(zz - 1 / mp_cauchy(mu, zz))
        assert abs(k(z) - ref) <= 1e-10 * max(1.0, abs(ref))
