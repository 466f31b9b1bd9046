import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lambdadicke import kernels
from lambdadicke.errors import DomainViolation
from lambdadicke.meanfield import (
    MeanFieldPoint,
    PhaseLabel,
    Stability,
    all_candidates,
    candidate_blue,
    candidate_coexisting,
    candidate_normal,
    candidate_red,
    classify,
    frame,
    gradient_h0,
    h0_full,
    h0_reduced,
    h0_reduced_m2,
    hessian_h0,
    linear_coefficients,
    minimize_numeric,
)
from lambdadicke.model import ModelParams, critical_couplings

# 0.75 - (2 + sqrt(3) - (2 - sqrt(3))/4)^2 / 4; the bracket is 3.66506350946...
RED_ENERGY_2G2C2 = -2.6081726320958225


def test_red_reference_energy_high_precision():
    # minimize the frame-2 surface along Psi2 = 0 in 50-digit arithmetic,
    # F(u) = E1 + delta + (Delta - delta - k2) u + k2 u^2 with u = Psi3^2
    with mpmath.workdps(50):
        delta, Delta, w2 = mpmath.mpf("0.75"), mpmath.mpf(1), mpmath.mpf("0.25")
        g2 = (mpmath.sqrt(Delta) + mpmath.sqrt(delta)) * mpmath.sqrt(w2)  # 2 g2c2
        k2 = 4 * g2**2 / w2
        f = lambda u: delta + (Delta - delta - k2) * u + k2 * u**2
        u = mpmath.findroot(lambda x: mpmath.diff(f, x), mpmath.mpf("0.4"))
        ref = f(u)
        bracket = 2 * g2 / mpmath.sqrt(w2) - (Delta - delta) * mpmath.sqrt(w2) / (2 * g2)
        assert abs(bracket - mpmath.mpf("3.6650635094610965")) < mpmath.mpf("1e-15")
    assert float(ref) == pytest.approx(RED_ENERGY_2G2C2, abs=1e-15)
    p = ModelParams(0.75, 1, 1, 0.25, g2=float(g2))
    assert candidate_red(p).energy_per_particle == pytest.approx(float(ref), abs=1e-14)


def test_point_invariants():
    pt = MeanFieldPoint.frame1(0.3, 0.4)
    assert pt.psi_m == pytest.approx(math.sqrt(0.75))
    assert sum(pt.occupations) == pytest.approx(1.0, abs=1e-12)
    assert pt.in_frame(2).psi_m == pytest.approx(0.3)
    with pytest.raises(DomainViolation):
        MeanFieldPoint.frame1(0.8, 0.8)


def test_h0_full_examples(base):
    assert h0_full(MeanFieldPoint.frame1(0, 0), base) == 0.0
    blue = MeanFieldPoint.frame1(0.0, math.sqrt(0.375), -0.9682458365518543, 0.0)
    assert h0_full(blue, base.with_couplings(1.0, 0.0)) == pytest.approx(-0.5625, abs=1e-12)
    # term-by-term mpmath evaluation: 0.282638438763306110089...
    pt = MeanFieldPoint.frame1(0.3, 0.4, 0.1, -0.2)
    assert h0_full(pt, base.with_couplings(0.6, 0.5)) == pytest.approx(0.28263843876330611, abs=1e-15)


def test_h0_full_is_frame_independent(base):
    p = base.with_couplings(0.6, 0.5)
    pt = MeanFieldPoint.frame1(0.3, 0.4, 0.1, -0.2)
    assert h0_full(pt.in_frame(2), p) == pytest.approx(h0_full(pt, p), abs=1e-15)


def test_h0_reduced_examples(base):
    assert h0_reduced(0, 0, base.with_couplings(0.7, 0.3)) == 0.0
    assert h0_reduced(0, math.sqrt(0.375), base.with_couplings(1, 0)) == pytest.approx(-0.5625, abs=1e-14)
    with pytest.raises(DomainViolation):
        h0_reduced(0.9, 0.9, base)


def test_degenerate_grid_minimum_on_rim(degenerate):
    p = degenerate.with_couplings(0.4, 0.6)
    xs = np.linspace(0, 1, 20)
    i, j, _ = kernels.reduced_surface_argmin(xs, xs, *frame(p, 1).args)
    assert xs[j] ** 2 + xs[i] ** 2 <= 1
    # both outward neighbours leave the disk, so the argmin is a rim cell
    assert xs[j + 1] ** 2 + xs[i] ** 2 > 1
    assert xs[j] ** 2 + xs[i + 1] ** 2 > 1


def test_gradient_examples(base):
    assert np.all(gradient_h0(0, 0, base.with_couplings(0.8, 0.9)) == 0)
    g = gradient_h0(0, math.sqrt(0.375), base.with_couplings(1, 0.2))
    assert np.max(np.abs(g)) < 1e-14
    with pytest.raises(DomainViolation):
        gradient_h0(0.6, 0.8, base)


def _fd_grad(f, a, b, h=1e-6):
    return np.array([(f(a + h, b) - f(a - h, b)) / (2 * h), (f(a, b + h) - f(a, b - h)) / (2 * h)])


def _fd_hess(grad, a, b, h=1e-6):
    cols = [(grad(a + h, b) - grad(a - h, b)) / (2 * h), (grad(a, b + h) - grad(a, b - h)) / (2 * h)]
    return np.column_stack(cols)


def test_gradient_and_hessian_against_finite_differences(base):
    rng = np.random.default_rng(7)
    for _ in range(100):
        r, t = 0.95 * math.sqrt(rng.random()), 2 * math.pi * rng.random()
        a, b = r * math.cos(t), r * math.sin(t)
        p = base.with_couplings(rng.uniform(0, 1.5), rng.uniform(0, 1.5))
        g = gradient_h0(a, b, p)
        fd = _fd_grad(lambda x, y: h0_reduced(x, y, p), a, b)
        scale = max(1.0, np.max(np.abs(g)))
        assert np.max(np.abs(g - fd)) <= 1e-6 * scale
        H = hessian_h0(a, b, p)
        fdh = _fd_hess(lambda x, y: gradient_h0(x, y, p), a, b)
        assert np.array_equal(H, H.T)
        assert np.max(np.abs(H - fdh)) <= 1e-5 * max(1.0, np.max(np.abs(H)))


def test_hessian_examples(base):
    assert np.all(np.linalg.eigvalsh(hessian_h0(0, 0, base.with_couplings(0.3, 0.2))) > 0)
    H = hessian_h0(0, 0, base.with_couplings(0.7, 0.2))
    assert H[1, 1] < 0


def test_candidate_normal(base):
    c = candidate_normal(base.with_couplings(0.3, 0.2))
    assert (c.energy_per_particle, c.stability, c.valid) == (0.0, Stability.MINIMUM, True)
    assert candidate_normal(base.with_couplings(0.7, 0.2)).stability is not Stability.MINIMUM
    # metastable inside the red phase while g1 < g1c
    assert candidate_normal(base.with_couplings(0.3, 0.6)).stability is Stability.MINIMUM


def test_candidate_blue(base):
    c = candidate_blue(base.with_couplings(1.0, 0.2))
    assert c.valid and c.stability is Stability.MINIMUM
    assert c.point.psi3 == pytest.approx(0.6123724356957945, abs=1e-12)
    assert c.point.phi1 == pytest.approx(-0.9682458365518543, abs=1e-12)
    assert c.point.psi2 == 0 and c.point.phi2 == 0
    assert c.energy_per_particle == pytest.approx(-0.5625, abs=1e-12)
    at = candidate_blue(base.with_couplings(0.5, 0.0))
    assert (at.point.psi3, at.point.phi1, at.energy_per_particle) == (0.0, 0.0, 0.0)
    assert not candidate_blue(base.with_couplings(0.4, 0.0)).valid


def test_candidate_red(base):
    cc = critical_couplings(base)
    c = candidate_red(base.with_couplings(0.2, 2 * cc.g2c2))
    assert c.energy_per_particle == pytest.approx(RED_ENERGY_2G2C2, abs=1e-12)
    assert c.stability is Stability.BOUNDARY_MINIMUM
    assert c.point.psi1 == 0 and c.point.phi1 == 0 and c.point.phi2 < 0
    assert candidate_red(base.with_couplings(0, cc.g2c2)).energy_per_particle == pytest.approx(0, abs=1e-12)
    r = candidate_red(base.with_couplings(0, 0.6))
    assert r.point.psi2**2 == pytest.approx(0.5217013888888889, abs=1e-12)
    assert r.point.psi3**2 == pytest.approx(0.4782986111111111, abs=1e-12)
    assert not candidate_red(base.with_couplings(0, 0.1)).valid


def test_candidate_coexisting(base, degenerate):
    assert not candidate_coexisting(degenerate.with_couplings(0.3, 0.8)).valid
    # the quoted example (0.6, 0.8) has Psi2^2 < 0, so no real solution there
    assert not candidate_coexisting(base.with_couplings(0.6, 0.8)).valid
    c = candidate_coexisting(base.with_couplings(0.3, 0.8))
    assert c.valid and c.stability is Stability.SADDLE
    # exact rationals: v = delta/(k2 - k1), u = (Delta - k1 (1 - 2 v))/(k2 - k1)
    assert c.point.psi2**2 == pytest.approx(0.07030929862807127, rel=1e-12)
    assert c.point.psi3**2 == pytest.approx(0.07591093117408906, rel=1e-12)
    same = ModelParams(delta=0.2, Delta=1, omega1=1, omega2=1, g1=0.7, g2=0.7)
    assert not candidate_coexisting(same).valid


def test_m2_frame(base):
    p = base.with_couplings(0.1, 0.6)
    red = candidate_red(p)
    assert h0_reduced_m2(0.0, red.point.psi3, p) == pytest.approx(red.energy_per_particle, abs=1e-14)
    assert h0_reduced_m2(0, 0, p) == pytest.approx(0.75)
    assert np.max(np.abs(gradient_h0(0.0, red.point.psi3, p, ref_state=2))) < 1e-9


@settings(max_examples=200, deadline=None)
@given(st.floats(0, 1), st.floats(0, 2 * math.pi), st.floats(0, 2), st.floats(0, 2))
def test_frames_describe_the_same_surface(r, t, g1, g2):
    p = ModelParams(delta=0.75, Delta=1, omega1=1, omega2=0.25, g1=g1, g2=g2)
    a, b = r * math.cos(t), r * math.sin(t)
    psi1 = math.sqrt(max(0.0, 1 - a * a - b * b))
    e1 = h0_reduced(a, b, p)
    assert h0_reduced_m2(psi1, b, p) == pytest.approx(e1, abs=1e-12 * max(1, p.k1, p.k2))
    # parity partners
    assert h0_reduced(-a, -b, p) == pytest.approx(e1, abs=1e-14 * max(1, p.k1, p.k2))


def test_classify_examples(base):
    assert classify(base.with_couplings(0.3, 0.2)).label is PhaseLabel.NORMAL
    assert classify(base.with_couplings(0.8, 0.2)).label is PhaseLabel.BLUE
    label, winner, cands = classify(base.with_couplings(0.1, 0.9))
    assert label is PhaseLabel.RED and winner.label is label and len(cands) == 4


def test_triple_point_degeneracy(base):
    cc = critical_couplings(base)
    res = classify(base.with_couplings(cc.g1c, cc.g2c2))
    assert set(res.degenerate) == {PhaseLabel.NORMAL, PhaseLabel.BLUE, PhaseLabel.RED}
    # the rounded value 0.4665064 is ~1.8e-7 away in energy, beyond the default tol
    res = classify(base.with_couplings(0.5, 0.4665064), tol=1e-6)
    assert len(res.degenerate) == 3 and res.on_boundary


def test_classify_rejects_bad_tol(base):
    with pytest.raises(ValueError):
        classify(base, tol=0)


def test_degenerate_levels_route_through_dark_state(degenerate):
    res = classify(degenerate.with_couplings(0.3, 0.2))
    assert res.label is PhaseLabel.DARK
    assert res.candidates[0].label is PhaseLabel.DARK


def test_minimize_numeric_examples(base):
    c = minimize_numeric(base.with_couplings(1.0, 0.2))
    assert c.label is PhaseLabel.BLUE and c.converged
    assert c.energy_per_particle == pytest.approx(-0.5625, abs=1e-9)
    c = minimize_numeric(base)
    assert c.label is PhaseLabel.NORMAL and c.energy_per_particle == pytest.approx(0.0, abs=1e-15)
    c = minimize_numeric(base.with_couplings(0.2, 0.9330127018922193))
    assert c.label is PhaseLabel.RED and c.point.psi1 < 1e-6
    assert c.energy_per_particle == pytest.approx(RED_ENERGY_2G2C2, abs=1e-9)
    with pytest.raises(ValueError):
        minimize_numeric(base, grid_n=16)


def _samples():
    for g1 in np.linspace(0.05, 1.5, 12):
        for g2 in np.linspace(0.05, 1.5, 12):
            yield g1, g2


def test_stationarity_and_linear_terms(base):
    for g1, g2 in _samples():
        p = base.with_couplings(g1, g2)
        for c in all_candidates(p):
            if not c.valid:
                continue
            pt = c.point
            a, b = pt.coords
            scale = max(1.0, p.k1, p.k2)
            assert np.max(np.abs(gradient_h0(a, b, p, pt.ref_state))) < 1e-10 * scale
            assert np.max(np.abs(linear_coefficients(pt, p))) < 1e-10 * scale


@settings(max_examples=200, deadline=None)
@given(st.floats(0.5, 5.0))
def test_blue_never_above_normal(g1):
    p = ModelParams(delta=0.75, Delta=1, omega1=1, omega2=0.25, g1=g1)
    e = candidate_blue(p).energy_per_particle
    assert e <= p.e1
    if g1 > 0.5 + 1e-6:
        assert e < p.e1
