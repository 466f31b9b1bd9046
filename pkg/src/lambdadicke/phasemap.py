"""Phase boundaries, the triple point, transition orders and coupling-grid sweeps.

Three boundaries meet at the triple point ``(g1c, g2c2)``:

* normal / blue: the vertical line ``g1 = g1c`` below ``g2c2`` (second order),
* normal / red: the horizontal line ``g2 = g2c2`` left of ``g1c`` (first order),
* blue / red: the curve ``g1 = gbar(g2)`` for ``g2 >= g2c2`` where the two
  superradiant energies coincide.
"""
from dataclasses import dataclass, field
from enum import Enum
import math

import numpy as np
from scipy.optimize import brentq

from .darkstate import dark_spectrum_general
from .errors import OutOfRange, PhaseMismatch
from .meanfield import PhaseLabel, classify, energy_blue, energy_red, ground_energy
from .model import ModelParams, critical_couplings
from .spectra import spectrum_closed_form

FD_STEP = 1e-4
TOL_D1 = 1e-6
TOL_D2 = 1e-4


class BoundaryKind(str, Enum):
    NORMAL_BLUE = "NormalBlue"
    NORMAL_RED = "NormalRed"
    BLUE_RED = "BlueRed"

    def __str__(self):
        return self.value


class TransitionOrder(str, Enum):
    FIRST = "First"
    SECOND = "Second"
    # neither derivative jumps beyond tolerance, e.g. a boundary of zero length
    UNDETERMINED = "Undetermined"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class BoundaryCurve:
    """Sampled boundary, ``samples[:, 0] = g2`` and ``samples[:, 1] = g1``."""

    kind: BoundaryKind
    samples: np.ndarray
    order: TransitionOrder


@dataclass(frozen=True)
class TransitionEvidence:
    """One-sided finite-difference derivatives of the ground energy at a boundary.

    The transversal varies ``coupling`` (``"g1"`` or ``"g2"``) with the other
    coupling held at ``fixed``.  Jumps are right minus left.
    """

    kind: BoundaryKind
    order: TransitionOrder
    coupling: str
    fixed: float
    boundary: float
    step: float
    d1_left: float
    d1_right: float
    d2_left: float
    d2_right: float
    tol_d1: float
    tol_d2: float

    @property
    def d1_jump(self) -> float:
        return self.d1_right - self.d1_left

    @property
    def d2_jump(self) -> float:
        return self.d2_right - self.d2_left


@dataclass(frozen=True)
class TriplePoint:
    g1: float
    g2: float
    degeneracy: float

    def __iter__(self):
        return iter((self.g1, self.g2))


@dataclass(frozen=True)
class SweepCell:
    g1: float
    g2: float
    phase: PhaseLabel
    energy: float
    order_params: tuple
    spectrum: object
    degenerate: tuple = ()
    other_spectra: dict = field(default_factory=dict)

    @property
    def eps(self) -> np.ndarray:
        if self.spectrum is None:
            return np.full(4, np.nan)
        return self.spectrum.eps


# -- boundaries ------------------------------------------------------------------

def _g2_in_range(g2, g2c2):
    # accept g2c2 up to rounding so that the triple point itself is in range
    return g2 >= g2c2 * (1.0 - 1e-12)


def boundary_blue_red(g2, params: ModelParams) -> float:
    """Blue/red boundary ``gbar_{1,c}(g2)`` from its closed form.

    ``gbar^2 = g2^2 (omega1 / 2 omega2) {1 + r^4 - delta omega2 / (2 g2^2)
    + (1 + r^2) sqrt[(1 - r^2)^2 - delta omega2 / g2^2]}`` with
    ``r = g2c1 / g2``.

    Raises
    ------
    OutOfRange
        For ``g2 < g2c2``, where no blue/red boundary exists.
    """
    p = params
    cc = critical_couplings(p)
    if not _g2_in_range(g2, cc.g2c2):
        raise OutOfRange(f"g2 = {g2} is below g2c2 = {cc.g2c2}")
    if g2 == 0.0:
        return cc.g1c
    r2 = (cc.g2c1 / g2) ** 2
    t = p.delta * p.omega2 / (g2 * g2)
    # (1 - r^2)^2 - t factored so that it vanishes exactly at g2c2
    lo = (g2 - cc.g2c2) * (g2 + cc.g2c2) / (g2 * g2)
    hi = 1.0 - ((math.sqrt(p.Delta) - math.sqrt(p.delta)) * math.sqrt(p.omega2) / (2.0 * g2)) ** 2
    root = math.sqrt(max(0.0, lo * hi))
    val = g2 * g2 * 0.5 * (p.omega1 / p.omega2) * (1.0 + r2 * r2 - 0.5 * t + (1.0 + r2) * root)
    return math.sqrt(val)


def boundary_blue_red_bisection(g2, params: ModelParams, xtol: float = 1e-15) -> float:
    """Same boundary found by root-finding ``E_blue(g1) = E_red(g2)`` on the closed-form energies."""
    p = params
    cc = critical_couplings(p)
    if not _g2_in_range(g2, cc.g2c2):
        raise OutOfRange(f"g2 = {g2} is below g2c2 = {cc.g2c2}")
    if g2 == 0.0:
        return cc.g1c
    # compare energy gains below E1; both are written as products that vanish
    # exactly at their critical couplings, which keeps the root well conditioned
    # near the triple point where g1 depends on the square root of the gain
    sw, sd, sD = math.sqrt(p.omega2), math.sqrt(p.delta), math.sqrt(p.Delta)
    x_minus = 2.0 * (g2 - cc.g2c2) * (2.0 * g2 - sd * sw + sD * sw) / (4.0 * g2 * sw)
    target = x_minus * (x_minus + 2.0 * sd)
    if target <= 0.0:
        return cc.g1c

    def diff(g1):
        if g1 <= cc.g1c:
            return -target
        k_minus = 4.0 * (g1 - cc.g1c) * (g1 + cc.g1c) / p.omega1
        return k_minus * k_minus / (16.0 * g1 * g1 / p.omega1) - target

    lo, hi = cc.g1c, max(2.0 * cc.g1c, 1e-3)
    while diff(hi) < 0.0:
        lo, hi = hi, 2.0 * hi
    return brentq(diff, lo, hi, xtol=xtol, rtol=4 * np.finfo(float).eps, maxiter=500)


def boundary_curve(kind, params: ModelParams, n: int = 50, g2_max: float | None = None) -> BoundaryCurve:
    """Sample one boundary with ``n`` points.

    ``g2_max`` sets the upper end of the blue/red curve (default ``3 g2c2``).
    """
    kind = BoundaryKind(kind)
    cc = critical_couplings(params)
    if kind is BoundaryKind.NORMAL_BLUE:
        g2 = np.linspace(0.0, cc.g2c2, n)
        g1 = np.full(n, cc.g1c)
        order = TransitionOrder.SECOND
    elif kind is BoundaryKind.NORMAL_RED:
        g1 = np.linspace(0.0, cc.g1c, n)
        g2 = np.full(n, cc.g2c2)
        order = TransitionOrder.FIRST
    else:
        top = 3.0 * cc.g2c2 if g2_max is None else g2_max
        g2 = np.linspace(cc.g2c2, top, n)
        g1 = np.array([boundary_blue_red(x, params) for x in g2])
        order = TransitionOrder.FIRST
    return BoundaryCurve(kind, np.column_stack([g2, g1]), order)


def triple_point(params: ModelParams) -> TriplePoint:
    """``(g1c, g2c2)`` together with the three-way energy spread there."""
    cc = critical_couplings(params)
    p = params.with_couplings(cc.g1c, cc.g2c2)
    e_n = p.e1
    e_b = energy_blue(p) if cc.g1c > 0 else e_n
    e_r = energy_red(p) if cc.g2c2 > 0 else e_n
    return TriplePoint(cc.g1c, cc.g2c2, abs(e_n - e_b) + abs(e_n - e_r))


# -- transition order ----------------------------------------------------------------

def _one_sided(f, b, h):
    fb = f(b)
    fl = [f(b - i * h) for i in (1, 2, 3)]
    fr = [f(b + i * h) for i in (1, 2, 3)]
    # second-order accurate one-sided stencils, each side sees only its own phase
    d1l = (3.0 * fb - 4.0 * fl[0] + fl[1]) / (2.0 * h)
    d1r = (-3.0 * fb + 4.0 * fr[0] - fr[1]) / (2.0 * h)
    d2l = (2.0 * fb - 5.0 * fl[0] + 4.0 * fl[1] - fl[2]) / (h * h)
    d2r = (2.0 * fb - 5.0 * fr[0] + 4.0 * fr[1] - fr[2]) / (h * h)
    return d1l, d1r, d2l, d2r


def transition_order(kind, params: ModelParams, step: float = FD_STEP,
                     fixed: float | None = None) -> TransitionEvidence:
    """Decide the order of a boundary from derivative jumps of the ground energy.

    The ground energy is differentiated on either side of the boundary
    along a transversal with one-sided stencils of step ``step``.  First
    order means ``|d1 jump| >= tol_d1``; second order means a continuous first
    derivative but ``|d2 jump| >= tol_d2``.  Tolerances are ``1e-6`` and
    ``1e-4`` times the energy scale ``Delta``.

    ``fixed`` is the value of the coupling held constant; by default half the
    other critical coupling for the normal boundaries and ``2 g2c2`` for the
    blue/red curve.
    """
    kind = BoundaryKind(kind)
    p = params
    cc = critical_couplings(p)
    if kind is BoundaryKind.NORMAL_BLUE:
        coupling = "g1"
        fixed = 0.5 * cc.g2c2 if fixed is None else fixed
        b = cc.g1c
    elif kind is BoundaryKind.NORMAL_RED:
        coupling = "g2"
        fixed = 0.5 * cc.g1c if fixed is None else fixed
        b = cc.g2c2
    else:
        coupling = "g1"
        fixed = 2.0 * cc.g2c2 if fixed is None else fixed
        b = boundary_blue_red(fixed, p)

    if coupling == "g1":
        def f(x):
            return ground_energy(p.with_couplings(g1=x, g2=fixed))
    else:
        def f(x):
            return ground_energy(p.with_couplings(g1=fixed, g2=x))

    scale = p.Delta if p.Delta > 0.0 else 1.0
    tol1, tol2 = TOL_D1 * scale, TOL_D2 * scale
    h = min(step, b / 3.0)
    if h <= 0.0:
        nan = math.nan
        return TransitionEvidence(kind, TransitionOrder.UNDETERMINED, coupling, fixed, b, 0.0,
                                  nan, nan, nan, nan, tol1, tol2)
    d1l, d1r, d2l, d2r = _one_sided(f, b, h)
    if abs(d1r - d1l) >= tol1:
        order = TransitionOrder.FIRST
    elif abs(d2r - d2l) >= tol2:
        order = TransitionOrder.SECOND
    else:
        order = TransitionOrder.UNDETERMINED
    return TransitionEvidence(kind, order, coupling, fixed, b, h, d1l, d1r, d2l, d2r, tol1, tol2)


# -- sweeps ------------------------------------------------------------------------------

def phase_spectrum(label, params: ModelParams):
    """Spectrum object for ``label`` at ``params`` or ``None`` if it has no closed form."""
    label = PhaseLabel(label)
    if label is PhaseLabel.DARK:
        return dark_spectrum_general(0.0, params)
    if label in (PhaseLabel.NORMAL, PhaseLabel.BLUE, PhaseLabel.RED):
        try:
            return spectrum_closed_form(label, params)
        except PhaseMismatch:
            return None
    return None


def sweep_cell(params: ModelParams, tol: float = 1e-9, other_spectra: bool = False) -> SweepCell:
    res = classify(params, tol)
    pt = res.winner.point
    ops = (pt.psi2**2, pt.psi3**2, pt.phi1**2, pt.phi2**2)
    extra = {}
    if other_spectra:
        for c in res.candidates:
            if c.valid and c.label is not res.label:
                s = phase_spectrum(c.label, params)
                if s is not None:
                    extra[c.label] = s
    return SweepCell(params.g1, params.g2, res.label, res.winner.energy_per_particle, ops,
                     phase_spectrum(res.label, params), res.degenerate, extra)


def sweep_grid(params_base: ModelParams, g1_range, g2_range, n1: int, n2: int,
               tol: float = 1e-9, other_spectra: bool = False) -> list:
    """Classify every cell of an ``n1 x n2`` coupling grid.

    Rows are ordered with ``g2`` outer and ``g1`` inner.  Only the winning
    phase's spectrum is attached unless ``other_spectra`` is set.
    """
    if n1 < 2 or n2 < 2:
        raise ValueError("grid needs at least two points per axis")
    for lo, hi in (g1_range, g2_range):
        if lo < 0.0 or hi < lo:
            raise ValueError(f"invalid coupling range ({lo}, {hi})")
    g1s = np.linspace(g1_range[0], g1_range[1], n1)
    g2s = np.linspace(g2_range[0], g2_range[1], n2)
    return [sweep_cell(params_base.with_couplings(float(a), float(b)), tol, other_spectra)
            for b in g2s for a in g1s]
