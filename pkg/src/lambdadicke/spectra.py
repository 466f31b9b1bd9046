"""Excitation energies above a mean-field ground state.

Two independent routes are provided:

* :func:`spectrum_closed_form` evaluates the per-phase closed forms for the
  four Bogoliubov branches.
* :func:`build_h2` assembles the quadratic fluctuation Hamiltonian term by term
  and :func:`bogoliubov_frequencies` diagonalizes it generically.

Quadratic form convention
-------------------------
With ``X_i = b_i + b_i^dag`` the fluctuation Hamiltonian is::

    h2 = sum_i diag_i b_i^dag b_i + sum_ij xx_ij X_i X_j
         + sum_{i<j} hop_ij (b_i^dag b_j + b_j^dag b_i)

In canonical quadratures ``x = X/sqrt(2)``, ``p = P/sqrt(2)`` this is
``1/2 x.V.x + 1/2 p.T.p`` (up to a constant) with ``V = diag + 4 xx + hop`` and
``T = diag + hop``.  Hamilton's equations give ``x'' = -T V x``, so the
squared mode energies are the eigenvalues of ``T V``.
"""
from dataclasses import dataclass
import math

import numpy as np

from .errors import ComplexFrequency, FrameSingularity, PhaseMismatch
from .meanfield import MeanFieldPoint, PhaseLabel, candidate_blue, candidate_red
from .model import ModelParams

ZERO_CLAMP = 1e-12


@dataclass(frozen=True)
class BranchParams:
    """Abbreviations entering the closed-form branch energies.

    ``x`` is the photon mode whose branch hosts the coupled atomic mode and
    ``xp`` the other one.  ``k = Dbar * eta`` is carried alongside ``eta`` so
    that ``Dbar = 0`` stays finite.
    """

    x: int
    xp: int
    Dbar: float
    dbar: float
    eta: float
    k: float
    omega_x: float
    omega_xp: float
    omega1m: float
    omega2m: float
    lam: float
    gtilde_x: float
    gtilde_xp: float


@dataclass(frozen=True)
class ExcitationSpectrum:
    """Four branch energies in the fixed order (x,-), (x,+), (x',-), (x',+).

    ``eps`` is NaN wherever ``eps_squared`` is negative.
    """

    eps_squared: np.ndarray
    phase: PhaseLabel
    branch: BranchParams

    @property
    def eps(self) -> np.ndarray:
        e2 = self.eps_squared
        return np.where(e2 >= 0.0, np.sqrt(np.abs(e2)), np.nan)

    @property
    def stable(self) -> bool:
        return bool(np.all(self.eps_squared >= 0.0))


@dataclass(frozen=True)
class QuadraticForm:
    """Fluctuation Hamiltonian on four bosonic modes (see module docstring)."""

    labels: tuple
    diag: np.ndarray
    xx: np.ndarray
    hop: np.ndarray

    @property
    def n_modes(self) -> int:
        return len(self.labels)

    def dynamical_matrices(self):
        d = np.diag(self.diag)
        return d + 4.0 * self.xx + self.hop, d + self.hop

    def is_symmetric(self) -> bool:
        return bool(np.array_equal(self.xx, self.xx.T) and np.array_equal(self.hop, self.hop.T))


def _clamp(e2):
    e2 = np.asarray(e2, dtype=float)
    return np.where(np.abs(e2) <= ZERO_CLAMP, 0.0, e2)


def _pair(w, wm, lam4, g2x):
    """Squared energies (-, +) of one coupled oscillator pair.

    ``lam4`` is the shift added to ``wm^2``.  The lower root is computed from
    the product of roots to avoid cancellation near criticality.
    """
    a = w * w + wm * wm + lam4
    disc = (w * w - wm * wm - lam4) ** 2 + 16.0 * g2x * w * wm
    root = math.sqrt(max(disc, 0.0))
    plus = 0.5 * (a + root)
    prod = w * w * (wm * wm + lam4) - 4.0 * g2x * w * wm
    if plus > 0.0:
        minus = prod / plus
    else:
        minus = 0.5 * (a - root)
    return minus, plus


def branch_params(phase: PhaseLabel, params: ModelParams) -> BranchParams:
    p = PhaseLabel(phase)
    m = params
    if p in (PhaseLabel.NORMAL, PhaseLabel.BLUE):
        x, xp = 1, 2
        Dbar, dbar = m.Delta, m.delta
        wx, wxp, gx, gxp = m.omega1, m.omega2, m.g1, m.g2
    elif p is PhaseLabel.RED:
        x, xp = 2, 1
        Dbar, dbar = m.Delta - m.delta, -m.delta
        wx, wxp, gx, gxp = m.omega2, m.omega1, m.g2, m.g1
    else:
        raise PhaseMismatch(f"no closed-form spectrum for phase {p}")

    if p is PhaseLabel.NORMAL:
        k = Dbar
        gtx, gtxp, lam = gx, 0.0, 0.0
    else:
        k = 4.0 * gx * gx / wx
        # Dbar (1 - eta)(1 + 3 eta)/(1 + eta) rewritten with k = Dbar * eta
        lam = -(Dbar - k) * (Dbar + 3.0 * k) / (8.0 * (Dbar + k))
        gtx = gx * Dbar * math.sqrt(2.0 / (k * (Dbar + k)))
        gtxp = gxp * math.sqrt((k - Dbar) / (2.0 * k))
    eta = k / Dbar if Dbar != 0.0 else math.inf
    return BranchParams(
        x=x, xp=xp, Dbar=Dbar, dbar=dbar, eta=eta, k=k,
        omega_x=wx, omega_xp=wxp,
        omega1m=0.5 * (Dbar + k),
        omega2m=dbar - 0.5 * (Dbar - k),
        lam=lam, gtilde_x=gtx, gtilde_xp=gtxp,
    )


def spectrum_closed_form(phase, params: ModelParams, strict: bool = False) -> ExcitationSpectrum:
    """Closed-form excitation energies of ``phase`` at ``params``.

    Raises ``PhaseMismatch`` if the superradiant solution is not real at these
    couplings.  Negative squared energies are kept in the result (``eps`` is
    NaN there) unless ``strict`` is set, in which case ``ComplexFrequency`` is
    raised.

    The ``lambda`` shift enters the x-branch as ``4 lambda omega_{1,-}``; this
    is what the term-by-term quadratic form gives (see :func:`build_h2`) and it
    reproduces the ordinary Dicke superradiant spectrum for one branch.
    """
    phase = PhaseLabel(phase)
    if phase is PhaseLabel.BLUE and not candidate_blue(params).valid:
        raise PhaseMismatch("blue solution requires g1 >= g1c")
    if phase is PhaseLabel.RED and not candidate_red(params).valid:
        raise PhaseMismatch("red solution requires g2 >= g2c1")
    bp = branch_params(phase, params)
    xm, xpl = _pair(bp.omega_x, bp.omega1m, 4.0 * bp.lam * bp.omega1m, bp.gtilde_x**2)
    ym, ypl = _pair(bp.omega_xp, bp.omega2m, 0.0, bp.gtilde_xp**2)
    e2 = _clamp([xm, xpl, ym, ypl])
    spec = ExcitationSpectrum(e2, phase, bp)
    if strict and not spec.stable:
        raise ComplexFrequency(f"{phase} spectrum has negative squared energies", e2)
    return spec


def build_h2(point: MeanFieldPoint, params: ModelParams, tol: float = 1e-12) -> QuadraticForm:
    """Quadratic fluctuation Hamiltonian around ``point`` in its own frame.

    Modes are ordered (atomic mode of the free lower level, atomic mode of
    level 3, photon mode coupled to the reference level, other photon mode),
    i.e. ``(d2, d3, c1, c2)`` for ``m = 1`` and ``(d1, d3, c2, c1)`` for ``m = 2``.
    """
    p = params
    psi = point.psi_m
    if psi <= tol:
        raise FrameSingularity("reference amplitude vanishes; expand in the other frame")
    a, b = point.coords
    if point.ref_state == 1:
        labels = ("d2", "d3", "c1", "c2")
        small, big = p.delta, p.Delta
        gt, wt, pt = p.g1, p.omega1, point.phi1
        gh, wh, ph = p.g2, p.omega2, point.phi2
    else:
        labels = ("d1", "d3", "c2", "c1")
        small, big = -p.delta, p.Delta - p.delta
        gt, wt, pt = p.g2, p.omega2, point.phi2
        gh, wh, ph = p.g1, p.omega1, point.phi1

    shift = 2.0 * gt * pt * b / psi
    diag = np.array([small - shift, big - shift, wt, wh])

    xx = np.zeros((4, 4))
    xx[0, 0] = -0.5 * gt * pt * a * a * b / psi**3
    xx[1, 1] = -gt * pt * b / psi * (1.0 + 0.5 * b * b / psi**2)
    cross = {
        (0, 1): -gt * pt * a / psi * (1.0 + b * b / psi**2),
        (2, 0): -gt * a * b / psi,
        (2, 1): gt * psi * (1.0 - b * b / psi**2),
        (3, 0): gh * b,
        (3, 1): gh * a,
    }
    for (i, j), c in cross.items():
        # one product term X_i X_j in h2 is split over both orderings
        xx[i, j] += 0.5 * c
        xx[j, i] += 0.5 * c

    hop = np.zeros((4, 4))
    hop[0, 1] = hop[1, 0] = 2.0 * gh * ph
    return QuadraticForm(labels, diag, xx, hop)


def bogoliubov_squared(form: QuadraticForm) -> np.ndarray:
    """Squared mode energies, sorted ascending, small values clamped to 0.

    When ``T`` is positive semi-definite the symmetric matrix
    ``T^1/2 V T^1/2`` is diagonalized; otherwise the eigenvalues of ``T V``
    are used and a significant imaginary part raises ``ComplexFrequency``.
    """
    V, T = form.dynamical_matrices()
    wt, ut = np.linalg.eigh(T)
    scale = max(1.0, float(np.max(np.abs(wt))))
    if wt.min() >= -1e-14 * scale:
        s = ut @ np.diag(np.sqrt(np.clip(wt, 0.0, None))) @ ut.T
        e2 = np.linalg.eigvalsh(s @ V @ s)
    else:
        ev = np.linalg.eigvals(T @ V)
        if np.max(np.abs(ev.imag)) > 1e-10 * max(1.0, float(np.max(np.abs(ev)))):
            raise ComplexFrequency("dynamical matrix has complex eigenvalues", ev)
        e2 = np.sort(ev.real)
    return _clamp(np.sort(e2))


def bogoliubov_frequencies(form: QuadraticForm) -> np.ndarray:
    """Excitation energies of ``form``, ascending.

    Raises ``ComplexFrequency`` (carrying all squared energies) if any mode
    is unstable.
    """
    e2 = bogoliubov_squared(form)
    if np.any(e2 < 0.0):
        raise ComplexFrequency(f"{int(np.sum(e2 < 0))} unstable mode(s)", e2)
    return np.sqrt(e2)


def block_structure(form: QuadraticForm, tol: float = 0.0):
    """Connected components of the mode-coupling graph.

    Used to confirm that in each named phase the four-mode problem splits
    into two independent pairs.
    """
    V, T = form.dynamical_matrices()
    coupled = (np.abs(V - np.diag(np.diag(V))) > tol) | (np.abs(T - np.diag(np.diag(T))) > tol)
    n = form.n_modes
    seen, blocks = set(), []
    for start in range(n):
        if start in seen:
            continue
        stack, comp = [start], []
        seen.add(start)
        while stack:
            i = stack.pop()
            comp.append(i)
            for j in range(n):
                if coupled[i, j] and j not in seen:
                    seen.add(j)
                    stack.append(j)
        blocks.append(tuple(sorted(form.labels[i] for i in comp)))
    return blocks
