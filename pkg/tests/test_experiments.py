import math

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from boolean_info.errors import DomainError, InputError, SymmetryError
from boolean_info.experiments import (
    adaptive_simpson,
    clt_table,
    de_bruijn_residual,
    entropic_rate_scan,
    exp_decay_scan,
    monotonicity_scan,
)
from boolean_info.functionals import entropy_rel, nm_entropy_rel
from boolean_info.measure import RADEMACHER, AtomicMeasure, boolean_cumulants, symmetric_two_point
from boolean_info.transform import ou_flow

from conftest import fuzz_measure, normalized_symmetric_measures

mpmath.mp.dps = 40


def mp_psi_b2():
    # squared law of mu_2 for B: poles of 2z^2 - 3.5z + 1, residues (2r - 1.5)/(4r - 3.5)
    roots = mpmath.polyroots([2, -3.5, 1])
    atoms = [(r, (2 * r - 1.5) / (4 * r - 3.5)) for r in roots]
    return mpmath.fsum(
        w * v * (1 / y if y == u else (mpmath.log(y) - mpmath.log(u)) / (y - u)) for y, w in atoms for u, v in atoms
    )


# -- quadrature -----------------------------------------------------------------------


def test_adaptive_simpson():
    assert adaptive_simpson(math.sin, 0, math.pi, 1e-12) == pytest.approx(2.0, abs=1e-11)
    assert adaptive_simpson(lambda x: 1 / (1 + x), 0, 3, 1e-12) == pytest.approx(math.log(4), abs=1e-11)
    assert adaptive_simpson(math.exp, 1, 1, 1e-9) == 0.0


# -- CLT table ------------------------------------------------------------------------


def test_clt_table_rademacher():
    for row in clt_table(RADEMACHER, 20):
        assert row.report.d_star == pytest.approx(0, abs=1e-12)
        assert row.w1 == pytest.approx(0, abs=1e-12) and row.w2 == pytest.approx(0, abs=1e-12)
        for key in ("gamma_rel", "gamma_star_rel", "psi_rel", "psi_star_rel"):
            assert getattr(row.report, key) == pytest.approx(0, abs=1e-12)


def test_clt_table_b(measure_b):
    rows = clt_table(measure_b, 8)
    assert [r.n for r in rows] == list(range(1, 9))
    assert rows[1].report.d_star ** 2 == pytest.approx(0.25, abs=1e-12)
    assert rows[7].report.d_star == pytest.approx(0.25, abs=1e-12)
    assert rows[7].w2 <= 0.25
    assert all(not r.violations() for r in rows)


def test_clt_table_parallel_matches_serial(measure_b):
    a = [r.as_dict() for r in clt_table(measure_b, 12, jobs=1)]
    b = [r.as_dict() for r in clt_table(measure_b, 12, jobs=3)]
    assert a == b


def test_clt_table_input_checks(measure_b):
    with pytest.raises(InputError):
        clt_table(symmetric_two_point(2.0), 4)
    with pytest.raises(InputError):
        clt_table(measure_b, 501)
    with pytest.raises(SymmetryError):
        clt_table(AtomicMeasure([-1 / math.sqrt(2), math.sqrt(2)], [2 / 3, 1 / 3]), 3)


@settings(max_examples=20, deadline=None)
@given(normalized_symmetric_measures())
def test_clt_table_property(mu):
    r4 = boolean_cumulants(mu).r4
    for row in clt_table(mu, 30):
        assert not row.failed
        assert row.d_star_identity_residual <= 1e-8
        assert row.report.m2 == pytest.approx(1.0, abs=1e-10)
        assert abs(row.n * row.report.d_star**2 - r4) <= 1e-8
        assert row.w1_bound_slack >= -1e-10 and row.w2_bound_slack >= -1e-10
        assert row.entropic_hsi_slack >= -1e-9 and row.fisher_rate_slack >= -1e-8


# -- de Bruijn -------------------------------------------------------------------------


def test_de_bruijn_rademacher():
    micro, nm = de_bruijn_residual(RADEMACHER, 1.0, 1e-10)
    assert micro <= 1e-10 and nm <= 1e-12


def test_de_bruijn_b(measure_b):
    micro, nm = de_bruijn_residual(measure_b, 2.0, 1e-8)
    assert micro <= 1e-6 and nm <= 1e-12


def test_de_bruijn_converges(measure_b):
    coarse, _ = de_bruijn_residual(measure_b, 1.0, 1e-4)
    fine, _ = de_bruijn_residual(measure_b, 1.0, 1e-9)
    assert fine <= coarse
    assert fine <= 1e-8


def test_de_bruijn_domain():
    with pytest.raises(DomainError):
        de_bruijn_residual(AtomicMeasure([-1.0, 0.0, 1.0], [0.25, 0.5, 0.25]), 1.0)
    with pytest.raises(InputError):
        de_bruijn_residual(RADEMACHER, 0.0)


# -- monotonicity ---------------------------------------------------------------------


def test_monotonicity_b(measure_b):
    rep = monotonicity_scan(measure_b, 10, [1.0, 1.5, 2.0, 3.5])
    assert rep.ok and rep.equality_case is None
    assert rep.psi[0] == pytest.approx(1.3551983292207083, abs=1e-13)
    assert rep.psi[1] == pytest.approx(float(mp_psi_b2()), abs=1e-13)
    assert rep.psi[1] < rep.psi[0]


def test_monotonicity_equality_case():
    for a in (0.5, 1.0, 2.0):
        rep = monotonicity_scan(symmetric_two_point(a), 12, [1.0, 2.0])
        assert rep.equality_case == "rademacher_type"
        assert rep.ok
        assert all(p == pytest.approx(1 / a**2, rel=1e-12) for p in rep.psi)


def test_monotonicity_trivial_grid(measure_b):
    rep = monotonicity_scan(measure_b, 1, [1.0, 1.0])
    assert rep.ok and rep.psi_t_increases == []


def test_monotonicity_fuzz():
    for seed in range(10):
        rep = monotonicity_scan(fuzz_measure(seed), 20, [1.0, 1.3, 2.0, 4.0])
        assert rep.ok, rep.as_dict()
        assert (rep.equality_case is not None) == (1 + seed % 6 == 1)


# -- rates and decay ------------------------------------------------------------------------


def test_rate_scan_b(measure_b):
    rows = entropic_rate_scan(measure_b, [1, 2, 4, 64])
    row4 = rows[2]
    assert row4.fisher_bound == pytest.approx(1.5 * math.sqrt(0.5) / 2, abs=1e-15)
    assert row4.fisher_bound >= row4.psi_rel
    for r in rows:
        assert r.psi_star_residual <= 1e-12 and r.gamma_star_residual <= 1e-12
        assert r.entropic_hsi_slack >= -1e-12
    assert rows[0].fisher_decay_exponent is None
    assert rows[-1].fisher_decay_exponent < 0


def test_rate_scan_rademacher():
    for r in entropic_rate_scan(RADEMACHER, [1, 3, 9]):
        assert r.gamma_rel == pytest.approx(0, abs=1e-12)
        assert r.psi_rel == pytest.approx(0, abs=1e-12)
        assert r.psi_star_residual == pytest.approx(0, abs=1e-12)


def test_decay_examples(measure_b):
    rows = exp_decay_scan(measure_b, [0.0, 0.5])
    assert rows[0].micro_slack == pytest.approx(0, abs=1e-15) and rows[0].nm_slack == pytest.approx(0, abs=1e-15)
    for r in exp_decay_scan(RADEMACHER, [0.1, 1.0, 3.0]):
        assert r.gamma_rel == pytest.approx(0, abs=1e-12) and r.gamma_rel_bound == 0


def test_decay_two_point_end_to_end():
    mu = symmetric_two_point(2.0)
    (row,) = exp_decay_scan(mu, [math.log(2)])
    law = ou_flow(mu, math.log(2))
    assert row.gamma_rel == pytest.approx(entropy_rel(law), abs=1e-15)
    assert row.gamma_rel_bound == pytest.approx(0.25 * (2 - math.log(2) - 0.5), abs=1e-14)
    assert row.gamma_star_rel == pytest.approx(nm_entropy_rel(law), abs=1e-15)
    assert row.micro_slack >= 0 and row.nm_slack >= 0


@settings(max_examples=20, deadline=None)
@given(normalized_symmetric_measures(), st.sampled_from([0.1, 0.5, 1.0, 2.0]))
def test_decay_property(mu, t):
    (row,) = exp_decay_scan(mu, [t])
    assert row.micro_slack >= -1e-9 and row.nm_slack >= -1e-9
