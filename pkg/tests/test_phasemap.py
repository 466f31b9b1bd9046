import math

import numpy as np
import pytest

from lambdadicke.errors import OutOfRange
from lambdadicke.meanfield import PhaseLabel, Stability, classify, energy_blue, energy_red
from lambdadicke.model import ModelParams, critical_couplings
from lambdadicke.phasemap import (
    BoundaryKind,
    TransitionOrder,
    boundary_blue_red,
    boundary_blue_red_bisection,
    boundary_curve,
    sweep_grid,
    transition_order,
    triple_point,
)

G2C2 = 0.4665063509461097


def test_boundary_at_triple_point(base):
    g2c2 = critical_couplings(base).g2c2
    assert boundary_blue_red(g2c2, base) == pytest.approx(0.5, abs=1e-10)
    assert boundary_blue_red_bisection(g2c2, base) == pytest.approx(0.5, abs=1e-10)
    # the curve leaves the triple point like sqrt(g2 - g2c2): one ulp moves g1 by ~1e-8
    assert boundary_blue_red(g2c2 + 1e-16, base) - 0.5 < 1e-7


def test_boundary_out_of_range(base):
    for fn in (boundary_blue_red, boundary_blue_red_bisection):
        with pytest.raises(OutOfRange):
            fn(0.4, base)


def test_boundary_matches_root_finding(base):
    g1 = boundary_blue_red(0.6, base)
    assert g1 == pytest.approx(boundary_blue_red_bisection(0.6, base), abs=1e-10)
    b, r = energy_blue(base.with_couplings(g1=g1)), energy_red(base.with_couplings(g2=0.6))
    assert b == pytest.approx(r, abs=1e-10)
    for g2 in np.linspace(G2C2, 3.0, 20):
        assert boundary_blue_red(g2, base) == pytest.approx(
            boundary_blue_red_bisection(g2, base), abs=1e-10)


@pytest.mark.parametrize("w1, w2", [(1.0, 0.25), (2.0, 0.5), (0.3, 1.7)])
def test_degenerate_limit_is_straight_line(w1, w2):
    p = ModelParams(delta=0.0, Delta=1.0, omega1=w1, omega2=w2)
    for g2 in (1.0, 2.5, 4.0):
        assert boundary_blue_red(g2, p) == pytest.approx(math.sqrt(w1 / w2) * g2, rel=1e-12)


def test_boundary_monotone_with_asymptotic_slope(base):
    g2 = np.linspace(G2C2, 10.0, 400)
    g1 = np.array([boundary_blue_red(x, base) for x in g2])
    assert np.all(np.diff(g1) >= 0.0)
    assert np.all(g1 >= 0.5 - 1e-12)
    slopes = [boundary_blue_red(x, base) / x for x in (10.0, 100.0, 1e4)]
    errs = [abs(s - 2.0) for s in slopes]
    assert errs[0] > errs[1] > errs[2] and errs[2] < 1e-4


def test_classify_flips_at_boundary(base):
    h = 1e-4
    for g2 in np.linspace(G2C2 + 0.01, 3.0, 20):
        b = boundary_blue_red(g2, base)
        assert classify(base.with_couplings(b - h, g2)).label is PhaseLabel.RED
        assert classify(base.with_couplings(b + h, g2)).label is PhaseLabel.BLUE


def test_boundary_curves(base):
    nb = boundary_curve(BoundaryKind.NORMAL_BLUE, base, n=5)
    assert nb.order is TransitionOrder.SECOND
    np.testing.assert_allclose(nb.samples[:, 1], 0.5)
    assert nb.samples[-1, 0] == pytest.approx(G2C2)
    nr = boundary_curve("NormalRed", base, n=5)
    assert nr.order is TransitionOrder.FIRST
    np.testing.assert_allclose(nr.samples[:, 0], G2C2)
    br = boundary_curve(BoundaryKind.BLUE_RED, base, n=7)
    assert br.samples[0, 1] == pytest.approx(0.5, abs=1e-10)
    assert br.samples[-1, 0] == pytest.approx(3 * G2C2)


def test_order_normal_blue(base):
    ev = transition_order(BoundaryKind.NORMAL_BLUE, base)
    assert ev.order is TransitionOrder.SECOND
    assert abs(ev.d1_jump) < 1e-6
    # blue curvature 2 (k1 - Delta)/k1 * dk1/dg1 ... analytic second-derivative jump is -8/omega1
    assert ev.d2_jump == pytest.approx(-8.0, rel=1e-3)


def test_order_normal_red(base):
    ev = transition_order(BoundaryKind.NORMAL_RED, base)
    assert ev.order is TransitionOrder.FIRST
    assert ev.coupling == "g2" and ev.boundary == pytest.approx(G2C2)
    assert ev.d1_left == pytest.approx(0.0, abs=1e-10)
    assert ev.d1_jump < 0.0


def test_order_blue_red(base):
    assert transition_order(BoundaryKind.BLUE_RED, base).order is TransitionOrder.FIRST


def _red_jump(delta):
    p = ModelParams(delta=delta, Delta=1.0, omega1=1.0, omega2=0.25)
    return abs(transition_order(BoundaryKind.NORMAL_RED, p).d1_jump)


def test_red_jump_scales_as_sqrt_delta():
    deltas = np.array([1e-2, 1e-4, 1e-6])
    jumps = np.array([_red_jump(d) for d in deltas])
    # exact jump of the red energy slope at g2c2
    exact = 4 * np.sqrt(deltas) / ((1 + np.sqrt(deltas)) * 0.5)
    np.testing.assert_allclose(jumps, exact, rtol=1e-3)
    slope = np.polyfit(np.log(deltas), np.log(jumps), 1)[0]
    assert abs(slope - 0.5) < 0.05


def test_red_jump_tiny_delta():
    assert _red_jump(1e-8) < 1e-3
    assert _red_jump(1e-8) < _red_jump(1e-6)


def test_order_undetermined_at_zero_length_boundary():
    p = ModelParams(delta=0.0, Delta=0.0, omega1=1.0, omega2=1.0)
    assert transition_order(BoundaryKind.NORMAL_BLUE, p).order is TransitionOrder.UNDETERMINED


def test_triple_point_examples(base, degenerate):
    tp = triple_point(base)
    assert tuple(tp) == pytest.approx((0.5, 0.4665064), abs=1e-7)
    assert tp.degeneracy < 1e-12
    tp = triple_point(degenerate)
    assert tuple(tp) == pytest.approx((0.5, 0.25), abs=1e-15)
    assert tp.degeneracy < 1e-12


def test_sweep_corners(base):
    cells = sweep_grid(base, (0.1, 0.9), (0.1, 0.9), 3, 3)
    assert [(c.g1, c.g2) for c in cells[:3]] == [(0.1, 0.1), (0.5, 0.1), (0.9, 0.1)]
    by = {(round(c.g1, 6), round(c.g2, 6)): c for c in cells}
    assert by[(0.1, 0.1)].phase is PhaseLabel.NORMAL
    assert by[(0.9, 0.1)].phase is PhaseLabel.BLUE
    assert by[(0.1, 0.9)].phase is PhaseLabel.RED
    for c in cells:
        assert c.phase is classify(base.with_couplings(c.g1, c.g2)).label


def test_sweep_blue_onset(base):
    cells = sweep_grid(base, (0.0, 1.0), (0.2, 0.3), 101, 2)[:101]
    g1 = np.array([c.g1 for c in cells])
    phi1 = np.array([c.order_params[2] for c in cells])
    assert np.all(phi1[g1 <= 0.5] == 0.0)
    above = g1 > 0.5
    ref = (1 - (0.5 / g1[above]) ** 4) * g1[above] ** 2
    np.testing.assert_allclose(phi1[above], ref, rtol=1e-12)
    assert phi1[51] < 0.03 and phi1[52] < 0.05  # continuous onset
    eps = np.array([c.eps[0] for c in cells])
    assert eps[50] == pytest.approx(0.0, abs=1e-10)


def test_sweep_red_jump(base):
    cells = sweep_grid(base, (0.2, 0.3), (0.0, 1.0), 2, 201)[::2]
    g2 = np.array([c.g2 for c in cells])
    ops = np.array([c.order_params for c in cells])
    below, above = g2 < G2C2, g2 > G2C2
    assert np.all(ops[below] == 0.0)
    first = ops[above][0]
    assert first[0] > 0.1 and first[3] > 0.1  # finite values straight past g2c2


def test_sweep_other_spectra(base):
    cell = sweep_grid(base, (0.2, 0.3), (0.8, 0.9), 2, 2, other_spectra=True)[0]
    assert cell.phase is PhaseLabel.RED
    assert PhaseLabel.NORMAL in cell.other_spectra
    assert sweep_grid(base, (0.2, 0.3), (0.8, 0.9), 2, 2)[0].other_spectra == {}


def test_sweep_validation(base):
    with pytest.raises(ValueError):
        sweep_grid(base, (0, 1), (0, 1), 1, 3)
    with pytest.raises(ValueError):
        sweep_grid(base, (-0.1, 1), (0, 1), 2, 2)


def test_normal_metastable_in_red(base):
    for g1, g2 in [(0.1, 0.6), (0.3, 0.9), (0.45, 1.5)]:
        res = classify(base.with_couplings(g1, g2))
        assert res.label is PhaseLabel.RED
        assert res.candidate(PhaseLabel.NORMAL).stability is Stability.MINIMUM


