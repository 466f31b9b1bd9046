"""Thermodynamic-limit energy landscape, its stationary points and phase classification.

The Holstein-Primakoff expansion around reference level ``m`` gives the energy
per particle as a function of the atomic amplitudes ``Psi_r`` (``r != m``) and
the photon amplitudes ``phi_n``.  Two reference frames are used:

* ``m = 1``: free coordinates ``(Psi2, Psi3)``, ``psi1 = sqrt(1 - Psi2^2 - Psi3^2)``.
* ``m = 2``: free coordinates ``(Psi1, Psi3)``, ``psi2 = sqrt(1 - Psi1^2 - Psi3^2)``.

Eliminating the photon amplitudes (``d h / d phi_n = 0``) leaves a reduced
surface that in either frame has the generic form::

    e0 + s * a^2 + (B - kA) * b^2 + (kA - kB) * a^2 b^2 + kA * b^4

with ``(a, b)`` the frame coordinates, ``kA``/``kB`` the effective couplings
``4 g^2 / omega`` of the mode that couples to the reference level and of the
other mode, and ``(e0, s, B)`` the frame's level energies.  Frame 2 follows from
frame 1 by ``e0 -> E1 + delta``, ``s -> -delta``, ``B -> Delta - delta`` and
swapping the two modes.
"""
from dataclasses import dataclass, field
from enum import Enum
import math
import warnings

import numpy as np

from . import kernels
from .errors import DomainViolation, FrameSingularity, NonConvergence
from .model import ModelParams, critical_couplings

DISK_TOL = kernels.DISK_TOL


class PhaseLabel(str, Enum):
    NORMAL = "Normal"
    BLUE = "BlueSuperradiant"
    RED = "RedSuperradiant"
    DARK = "Dark"
    COEXISTING = "UnphysicalCoexisting"

    def __str__(self):
        return self.value


class Stability(str, Enum):
    MINIMUM = "Minimum"
    SADDLE = "Saddle"
    UNSTABLE = "Unstable"
    BOUNDARY_MINIMUM = "BoundaryMinimum"
    MARGINAL_FLAT = "MarginalFlat"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class MeanFieldPoint:
    """Mean-field order parameters.

    All three level amplitudes are stored; the one belonging to the reference
    level (``psi_m``) is the derived square root.  Build instances with
    :meth:`frame1` or :meth:`frame2` rather than directly.
    """

    psi1: float
    psi2: float
    psi3: float
    phi1: float = 0.0
    phi2: float = 0.0
    ref_state: int = 1

    def __post_init__(self):
        if self.ref_state not in (1, 2):
            raise ValueError("only reference levels m = 1 and m = 2 are supported")
        total = self.psi1**2 + self.psi2**2 + self.psi3**2
        if abs(total - 1.0) > 1e-12:
            raise DomainViolation(f"level occupations sum to {total!r}, expected 1")
        if self.psi_m < 0.0:
            raise DomainViolation("reference amplitude must be non-negative")

    @classmethod
    def frame1(cls, psi2, psi3, phi1=0.0, phi2=0.0):
        return cls(_ref_amplitude(psi2, psi3), float(psi2), float(psi3),
                   float(phi1), float(phi2), 1)

    @classmethod
    def frame2(cls, psi1, psi3, phi1=0.0, phi2=0.0):
        return cls(float(psi1), _ref_amplitude(psi1, psi3), float(psi3),
                   float(phi1), float(phi2), 2)

    @property
    def psi_m(self) -> float:
        return self.psi1 if self.ref_state == 1 else self.psi2

    @property
    def coords(self):
        """Free coordinates ``(a, b)`` of the point in its own frame."""
        return (self.psi2, self.psi3) if self.ref_state == 1 else (self.psi1, self.psi3)

    @property
    def occupations(self):
        return (self.psi1**2, self.psi2**2, self.psi3**2)

    def in_frame(self, m):
        """Same physical point expressed with reference level ``m``."""
        if m == 1:
            return MeanFieldPoint.frame1(self.psi2, self.psi3, self.phi1, self.phi2)
        return MeanFieldPoint.frame2(self.psi1, self.psi3, self.phi1, self.phi2)


def _ref_amplitude(a, b):
    r2 = a * a + b * b
    if r2 > 1.0 + DISK_TOL:
        raise DomainViolation(f"point ({a}, {b}) lies outside the unit disk")
    return math.sqrt(max(0.0, 1.0 - r2))


@dataclass(frozen=True)
class CandidateSolution:
    label: PhaseLabel
    point: MeanFieldPoint | None
    energy_per_particle: float
    stability: Stability | None
    valid: bool
    converged: bool = True


@dataclass(frozen=True)
class Classification:
    """Outcome of :func:`classify`.

    ``degenerate`` lists every label whose energy lies within ``tol`` of the
    minimum, so more than one entry signals a phase boundary (three at the
    triple point).
    """

    label: PhaseLabel
    winner: CandidateSolution
    candidates: tuple
    degenerate: tuple = field(default=())

    @property
    def on_boundary(self) -> bool:
        return len(self.degenerate) > 1

    def candidate(self, label):
        for c in self.candidates:
            if c.label == label:
                return c
        raise KeyError(label)

    def __iter__(self):
        # allows ``label, winner, candidates = classify(...)``
        return iter((self.label, self.winner, self.candidates))


# -- frames -------------------------------------------------------------------

@dataclass(frozen=True)
class Frame:
    m: int
    e0: float
    small: float
    big: float
    ka: float
    kb: float

    @property
    def args(self):
        return (self.e0, self.small, self.big, self.ka, self.kb)


def frame(params: ModelParams, m: int) -> Frame:
    if m == 1:
        return Frame(1, params.e1, params.delta, params.Delta, params.k1, params.k2)
    if m == 2:
        return Frame(2, params.e1 + params.delta, -params.delta,
                     params.Delta - params.delta, params.k2, params.k1)
    raise ValueError("only reference levels m = 1 and m = 2 are supported")


def _surface(f, a, b):
    a2, b2 = a * a, b * b
    return f.e0 + f.small * a2 + (f.big - f.ka) * b2 + (f.ka - f.kb) * a2 * b2 + f.ka * b2 * b2


def _grad(f, a, b):
    a2, b2 = a * a, b * b
    return np.array([
        2.0 * a * (f.small + (f.ka - f.kb) * b2),
        2.0 * b * ((f.big - f.ka) + (f.ka - f.kb) * a2 + 2.0 * f.ka * b2),
    ])


def _hess(f, a, b):
    a2, b2 = a * a, b * b
    off = 4.0 * (f.ka - f.kb) * a * b
    return np.array([
        [2.0 * f.small + 2.0 * (f.ka - f.kb) * b2, off],
        [off, 2.0 * (f.big - f.ka) + 2.0 * (f.ka - f.kb) * a2 + 12.0 * f.ka * b2],
    ])


def _require_disk(a, b):
    if a * a + b * b > 1.0 + DISK_TOL:
        raise DomainViolation(f"point ({a}, {b}) lies outside the unit disk")


def _require_interior(a, b):
    if not a * a + b * b < 1.0:
        raise DomainViolation(
            f"point ({a}, {b}) is not interior; the frame is singular where its "
            "reference amplitude vanishes, use the other frame"
        )


# -- energy surfaces ----------------------------------------------------------

def h0_full(point: MeanFieldPoint, params: ModelParams) -> float:
    """Energy per particle with independent photon amplitudes.

    ``E1 + delta Psi2^2 + Delta Psi3^2 + omega1 phi1^2 + omega2 phi2^2
    + 4 g1 phi1 psi1 Psi3 + 4 g2 phi2 Psi2 Psi3``, written with level
    amplitudes so it holds in either frame.
    """
    p = params
    return (p.e1 + p.delta * point.psi2**2 + p.Delta * point.psi3**2
            + p.omega1 * point.phi1**2 + p.omega2 * point.phi2**2
            + 4.0 * p.g1 * point.phi1 * point.psi1 * point.psi3
            + 4.0 * p.g2 * point.phi2 * point.psi2 * point.psi3)


def phi_stationary(psi1, psi2, psi3, params: ModelParams):
    """Photon amplitudes that make ``h0_full`` stationary for given level amplitudes."""
    phi1 = -2.0 * params.g1 / params.omega1 * psi1 * psi3
    phi2 = -2.0 * params.g2 / params.omega2 * psi2 * psi3
    return phi1, phi2


def stationary_point(a, b, params: ModelParams, m: int = 1) -> MeanFieldPoint:
    """Frame point at coordinates ``(a, b)`` with photons at their stationary values."""
    pt = MeanFieldPoint.frame1(a, b) if m == 1 else MeanFieldPoint.frame2(a, b)
    phi1, phi2 = phi_stationary(pt.psi1, pt.psi2, pt.psi3, params)
    return MeanFieldPoint(pt.psi1, pt.psi2, pt.psi3, phi1, phi2, m)


def h0_reduced(psi2, psi3, params: ModelParams) -> float:
    """Reduced surface in the ``m = 1`` frame.

    Equal to ``E1 + delta Psi2^2 + Delta Psi3^2 - (4 g1^2/omega1) psi1^2 Psi3^2
    - (4 g2^2/omega2) Psi2^2 Psi3^2``.
    """
    _require_disk(psi2, psi3)
    return float(_surface(frame(params, 1), psi2, psi3))


def h0_reduced_m2(psi1, psi3, params: ModelParams) -> float:
    """Reduced surface in the ``m = 2`` frame; ``(0, 0)`` puts every particle in level 2."""
    _require_disk(psi1, psi3)
    return float(_surface(frame(params, 2), psi1, psi3))


def gradient_h0(a, b, params: ModelParams, ref_state: int = 1) -> np.ndarray:
    """Partial derivatives of the reduced surface in frame ``ref_state``."""
    _require_interior(a, b)
    return _grad(frame(params, ref_state), a, b)


def hessian_h0(a, b, params: ModelParams, ref_state: int = 1) -> np.ndarray:
    _require_interior(a, b)
    return _hess(frame(params, ref_state), a, b)


def linear_coefficients(point: MeanFieldPoint, params: ModelParams) -> np.ndarray:
    """Coefficients of the four fluctuation quadratures in the linear Hamiltonian.

    Order: atomic mode of the free level, atomic mode of level 3, photon mode
    coupled to the reference level, the other photon mode.  All four vanish
    exactly at stationary points with a finite reference amplitude.
    """
    p = params
    psi = point.psi_m
    if psi <= 1e-12:
        raise FrameSingularity("reference amplitude vanishes; use the other frame")
    a, b = point.coords
    if point.ref_state == 1:
        small, big = p.delta, p.Delta
        gt, wt, pt = p.g1, p.omega1, point.phi1
        gh, wh, ph = p.g2, p.omega2, point.phi2
    else:
        small, big = -p.delta, p.Delta - p.delta
        gt, wt, pt = p.g2, p.omega2, point.phi2
        gh, wh, ph = p.g1, p.omega1, point.phi1
    return np.array([
        small * a - 2.0 * gt * pt * a * b / psi + 2.0 * gh * ph * b,
        big * b + 2.0 * gt * pt * psi * (1.0 - b * b / psi**2) + 2.0 * gh * ph * a,
        wt * pt + 2.0 * gt * psi * b,
        wh * ph + 2.0 * gh * a * b,
    ])


def _energy_scale(params):
    return max(params.Delta, params.delta, params.k1, params.k2, params.omega1, params.omega2)


def hessian_verdict(hess, scale=1.0) -> Stability:
    """Classify a symmetric 2x2 Hessian by the signs of its eigenvalues."""
    lo, hi = np.linalg.eigvalsh(hess)
    tol = 1e-10 * scale
    if lo > tol:
        return Stability.MINIMUM
    if hi < -tol:
        return Stability.UNSTABLE
    if lo < -tol:
        return Stability.SADDLE
    return Stability.MARGINAL_FLAT


# -- named stationary points ----------------------------------------------------

def energy_blue(params: ModelParams) -> float:
    """Closed-form blue energy ``E1 - (k1 - Delta)^2 / (4 k1)``; meaningful for ``g1 >= g1c > 0``.

    Equal to ``E1 - (Delta/4)(g1/g1c)^2 [1 - (g1c/g1)^2]^2`` without the
    division by ``g1c``.
    """
    p = params
    return p.e1 - (p.k1 - p.Delta) ** 2 / (4.0 * p.k1)


def energy_red(params: ModelParams) -> float:
    """Closed-form red energy; meaningful for ``g2 >= g2c1``, ``g2 > 0``.

    ``E1 + delta - 1/4 [(sqrt(D)+sqrt(d)) g2/g2c2 - (sqrt(D)-sqrt(d)) g2c2/g2]^2``
    with the bracket simplified so that ``g2c2 = 0`` is harmless.
    """
    p = params
    bracket = 2.0 * p.g2 / math.sqrt(p.omega2) - (p.Delta - p.delta) * math.sqrt(p.omega2) / (2.0 * p.g2)
    return p.e1 + p.delta - 0.25 * bracket**2


def candidate_normal(params: ModelParams) -> CandidateSolution:
    """All particles in level 1, no photons.  Always a solution; stable for ``g1 < g1c``."""
    pt = MeanFieldPoint.frame1(0.0, 0.0)
    verdict = hessian_verdict(_hess(frame(params, 1), 0.0, 0.0), _energy_scale(params))
    return CandidateSolution(PhaseLabel.NORMAL, pt, params.e1, verdict, True)


def candidate_blue(params: ModelParams) -> CandidateSolution:
    """Superradiance on the 1<->3 branch; real for ``g1 >= g1c``.

    The energy is ``E1 - (Delta/4)(g1/g1c)^2 [1 - (g1c/g1)^2]^2``, evaluated
    as ``E1 - (k1 - Delta)^2 / (4 k1)`` with ``k1 = 4 g1^2/omega1`` so that
    ``Delta = 0`` needs no special case.
    """
    p = params
    g1c = critical_couplings(p).g1c
    if not (p.g1 > 0.0 and p.g1 >= g1c):
        return CandidateSolution(PhaseLabel.BLUE, None, math.nan, None, False)
    r2 = (g1c / p.g1) ** 2
    psi3 = math.sqrt(0.5 * (1.0 - r2))
    phi1 = -(p.g1 / p.omega1) * math.sqrt(1.0 - r2 * r2)
    pt = MeanFieldPoint.frame1(0.0, psi3, phi1, 0.0)
    energy = energy_blue(p)
    verdict = hessian_verdict(_hess(frame(p, 1), 0.0, psi3), _energy_scale(p))
    return CandidateSolution(PhaseLabel.BLUE, pt, energy, verdict, True)


def candidate_red(params: ModelParams) -> CandidateSolution:
    """Superradiance on the 2<->3 branch with level 1 empty.

    The point sits on the rim of the ``m = 1`` disk, so it is built and its
    stability judged in the ``m = 2`` frame, where it is interior.  A positive
    definite Hessian there is reported as ``BoundaryMinimum``.
    """
    p = params
    g2c1 = critical_couplings(p).g2c1
    if not (p.g2 > 0.0 and p.g2 >= g2c1):
        return CandidateSolution(PhaseLabel.RED, None, math.nan, None, False)
    r2 = (g2c1 / p.g2) ** 2
    psi3 = math.sqrt(0.5 * (1.0 - r2))
    phi2 = -(p.g2 / p.omega2) * math.sqrt(1.0 - r2 * r2)
    pt = MeanFieldPoint.frame2(0.0, psi3, 0.0, phi2)
    energy = energy_red(p)
    verdict = hessian_verdict(_hess(frame(p, 2), 0.0, psi3), _energy_scale(p))
    if verdict is Stability.MINIMUM:
        verdict = Stability.BOUNDARY_MINIMUM
    return CandidateSolution(PhaseLabel.RED, pt, energy, verdict, True)


def candidate_coexisting(params: ModelParams) -> CandidateSolution:
    """Interior stationary point with both ``Psi2`` and ``Psi3`` non-zero.

    Exists only for ``delta > 0`` and ``g2^2/omega2 > g1^2/omega1``; it is
    never a minimum (the reduced surface is indefinite in the occupations).
    """
    p = params
    den = p.k2 - p.k1
    if p.delta == 0.0 or den == 0.0:
        return CandidateSolution(PhaseLabel.COEXISTING, None, math.nan, None, False)
    v = p.delta / den
    u = (p.Delta - p.k1 * (1.0 - 2.0 * v)) / den
    if not (v > 0.0 and u > 0.0 and u + v < 1.0):
        return CandidateSolution(PhaseLabel.COEXISTING, None, math.nan, None, False)
    a, b = math.sqrt(u), math.sqrt(v)
    pt = stationary_point(a, b, p, 1)
    f = frame(p, 1)
    verdict = hessian_verdict(_hess(f, a, b), _energy_scale(p))
    return CandidateSolution(PhaseLabel.COEXISTING, pt, float(_surface(f, a, b)), verdict, True)


def candidate_dark(params: ModelParams, psi2: float = 0.0) -> CandidateSolution:
    """Representative of the ``delta = 0`` dark manifold (energy ``E1`` for every ``Psi2``)."""
    from .darkstate import dark_stability

    if params.delta != 0.0:
        return CandidateSolution(PhaseLabel.DARK, None, math.nan, None, False)
    st = dark_stability(psi2, params)
    pt = MeanFieldPoint.frame1(psi2, 0.0)
    verdict = Stability.MARGINAL_FLAT if st.stable else Stability.SADDLE
    return CandidateSolution(PhaseLabel.DARK, pt, params.e1, verdict, True)


def all_candidates(params: ModelParams):
    cands = [candidate_normal(params), candidate_blue(params),
             candidate_red(params), candidate_coexisting(params)]
    if params.delta == 0.0:
        cands.insert(0, candidate_dark(params))
    return tuple(cands)


def ground_energy(params: ModelParams) -> float:
    """Global minimum of the mean-field energy (closed forms only, no Hessians)."""
    p = params
    cc = critical_couplings(p)
    e = p.e1
    if p.g1 > 0.0 and p.g1 >= cc.g1c:
        e = min(e, energy_blue(p))
    if p.g2 > 0.0 and p.g2 >= cc.g2c1:
        e = min(e, energy_red(p))
    return e


def classify(params: ModelParams, tol: float = 1e-9) -> Classification:
    """Pick the lowest-energy valid stationary point.

    For ``delta = 0`` the dark manifold is included as a candidate and takes
    precedence over the (energetically identical) normal state.  Labels whose
    energies lie within ``tol`` of the minimum are reported in
    ``degenerate``.
    """
    if not tol > 0.0:
        raise ValueError("tol must be positive")
    cands = all_candidates(params)
    valid = [c for c in cands if c.valid]
    # stable sort keeps the candidate order as tie-breaker for equal energies
    ranked = sorted(valid, key=lambda c: c.energy_per_particle)
    winner = ranked[0]
    emin = winner.energy_per_particle
    degenerate = tuple(c.label for c in ranked if c.energy_per_particle - emin <= tol)
    return Classification(winner.label, winner, cands, degenerate)


# -- numeric oracle ---------------------------------------------------------------

def _newton(f, a, b, iters, scale):
    x = np.array([a, b], dtype=float)
    r = math.hypot(*x)
    if r >= 1.0:
        x *= (1.0 - 1e-9) / r
    fx = _surface(f, *x)
    gtol = 1e-13 * scale
    floor = 1e-9 * scale
    for _ in range(iters):
        g = _grad(f, *x)
        if np.linalg.norm(g) <= gtol:
            return x, True
        w, v = np.linalg.eigh(_hess(f, *x))
        w = np.maximum(np.abs(w), floor)
        step = v @ ((v.T @ g) / w)
        t = 1.0
        while t > 1e-12:
            xn = x - t * step
            if xn @ xn < 1.0:
                fn = _surface(f, *xn)
                if fn <= fx + 1e-15 * (1.0 + abs(fx)):
                    break
            t *= 0.5
        else:
            return x, False
        moved = np.linalg.norm(xn - x)
        x, fx = xn, fn
        if moved <= 1e-15:
            break
    return x, bool(np.linalg.norm(_grad(f, *x)) <= 1e-9 * scale)


def label_point(point: MeanFieldPoint, params: ModelParams, tol: float = 1e-7) -> PhaseLabel:
    """Phase label from occupations alone (used for numerically found minima)."""
    n1, n2, n3 = point.occupations
    if n3 < tol:
        if params.delta == 0.0:
            return PhaseLabel.DARK
        return PhaseLabel.NORMAL if n2 < tol else PhaseLabel.COEXISTING
    if n2 < tol:
        return PhaseLabel.BLUE
    if n1 < tol:
        return PhaseLabel.RED
    return PhaseLabel.COEXISTING


def minimize_numeric(params: ModelParams, grid_n: int = 64, polish_iters: int = 60) -> CandidateSolution:
    """Global minimum of the reduced surface found without any closed forms.

    Both frames are scanned on a ``grid_n x grid_n`` grid of the quadrant
    ``[0, 1]^2`` (masked to the disk) so that the rim of the ``m = 1`` disk is
    covered by the interior of the ``m = 2`` chart.  The best grid point of
    each frame is refined by a safeguarded Newton iteration and the lower of
    the two results is returned.  If no refinement converges, the best grid
    point is returned with ``converged=False`` and a warning is issued.
    """
    if grid_n < 32:
        raise ValueError("grid_n must be at least 32")
    xs = np.linspace(0.0, 1.0, grid_n)
    scale = _energy_scale(params)
    best = None
    fallback = None
    for m in (1, 2):
        f = frame(params, m)
        i, j, val = kernels.reduced_surface_argmin(xs, xs, *f.args)
        if fallback is None or val < fallback[0]:
            fallback = (val, m, xs[j], xs[i])
        x, ok = _newton(f, xs[j], xs[i], polish_iters, scale)
        if not ok:
            continue
        e = float(_surface(f, *x))
        if best is None or e < best[0]:
            best = (e, m, abs(x[0]), abs(x[1]))
    converged = best is not None
    if not converged:
        warnings.warn(str(NonConvergence("Newton polish failed in both frames; returning best grid point")),
                      RuntimeWarning, stacklevel=2)
        best = fallback
    e, m, a, b = best
    pt = stationary_point(a, b, params, m)
    f = frame(params, m)
    if a * a + b * b < 1.0:
        verdict = hessian_verdict(_hess(f, a, b), scale)
    else:
        verdict = None
    return CandidateSolution(label_point(pt, params), pt, float(e), verdict, True, converged)
