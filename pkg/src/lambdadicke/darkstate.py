"""Dark-state manifold of the degenerate (``delta = 0``) model.

For ``delta = 0`` every point with ``Psi3 = phi1 = phi2 = 0`` is stationary
with energy ``E1``: the particles share levels 1 and 2 coherently and no
photons are emitted.  ``Psi2`` is a free parameter along the manifold, which
shows up as a massless excitation.  The remaining three modes follow from
the 3x3 matrix::

    [[Delta^2,                   2 g1 psi1 sqrt(omega1 Delta), 2 g2 Psi2 sqrt(omega2 Delta)],
     [2 g1 psi1 sqrt(omega1 Delta), omega1^2,                  0                          ],
     [2 g2 Psi2 sqrt(omega2 Delta), 0,                         omega2^2                   ]]

whose eigenvalues are the squared excitation energies.  Its determinant is
non-negative iff ``(g1/g1c)^2 (1 - Psi2^2) <= 1 - (g2/g2c)^2 Psi2^2``.
"""
from dataclasses import dataclass
import math

import numpy as np

from .errors import ComplexFrequency, DeltaNotZero
from .model import ModelParams
from .spectra import ZERO_CLAMP

MARGINAL_TOL = 1e-12

FLAT_WARNING = "massless mode along Psi2: small perturbations move the state along the manifold"


@dataclass(frozen=True)
class DarkSpectrum:
    """Squared energies ``(0, three matrix eigenvalues ascending)``."""

    eps_squared: np.ndarray

    @property
    def eps(self) -> np.ndarray:
        e2 = self.eps_squared
        return np.where(e2 >= 0.0, np.sqrt(np.abs(e2)), np.nan)

    @property
    def stable(self) -> bool:
        return bool(np.all(self.eps_squared >= 0.0))


@dataclass(frozen=True)
class DarkStability:
    """Verdict of the stability inequality at one ``Psi2``.

    ``psi2_min``/``psi2_max`` delimit the stable interval of ``Psi2`` for the
    given couplings (``nan`` for both if no ``Psi2`` is stable).
    """

    stable: bool
    marginal: bool
    psi2_min: float
    psi2_max: float
    margin: float
    warning: str = ""


@dataclass(frozen=True)
class DarkStatePoint:
    psi2: float
    psi1: float
    coherence_density: float
    stable: bool
    marginal: bool
    psi2_max: float
    eps: np.ndarray

    psi3 = 0.0
    phi1 = 0.0
    phi2 = 0.0


def _require_degenerate(params: ModelParams):
    if params.delta != 0.0:
        raise DeltaNotZero(f"dark state requires delta == 0 exactly, got {params.delta}")


def _check_psi2(psi2):
    if not 0.0 <= psi2 <= 1.0:
        raise ValueError(f"Psi2 must lie in [0, 1], got {psi2}")


def _margin_coeffs(params):
    # Delta * [1 - r2^2 u - r1^2 (1 - u)] = (Delta - k1) + u (k1 - k2), no division by g_c
    return params.Delta - params.k1, params.k1 - params.k2


def _scale(params):
    return max(1.0, params.Delta, params.k1, params.k2)


def dark_matrix(psi2, params: ModelParams) -> np.ndarray:
    _require_degenerate(params)
    _check_psi2(psi2)
    p = params
    psi1 = math.sqrt(max(0.0, 1.0 - psi2 * psi2))
    c1 = 2.0 * p.g1 * psi1 * math.sqrt(p.omega1 * p.Delta)
    c2 = 2.0 * p.g2 * psi2 * math.sqrt(p.omega2 * p.Delta)
    return np.array([
        [p.Delta**2, c1, c2],
        [c1, p.omega1**2, 0.0],
        [c2, 0.0, p.omega2**2],
    ])


def dark_spectrum_general(psi2, params: ModelParams) -> DarkSpectrum:
    """Excitation energies on the dark manifold for arbitrary detunings.

    Raises
    ------
    DeltaNotZero
        If ``params.delta`` is not exactly zero.
    """
    e2 = np.linalg.eigvalsh(dark_matrix(psi2, params))
    e2 = np.concatenate(([0.0], np.sort(e2)))
    e2 = np.where(np.abs(e2) <= ZERO_CLAMP, 0.0, e2)
    return DarkSpectrum(e2)


def dark_spectrum_resonant(psi2, omega, g1, g2) -> np.ndarray:
    """Closed-form energies ``(0, omega, eps2+, eps2-)`` at ``omega1 = omega2 = Delta = omega``.

    Raises ``ComplexFrequency`` if ``eps2-`` is imaginary.
    """
    _check_psi2(psi2)
    geff = math.sqrt(g1 * g1 * (1.0 - psi2 * psi2) + g2 * g2 * psi2 * psi2)
    plus = omega * omega + 2.0 * omega * geff
    minus = omega * omega - 2.0 * omega * geff
    if abs(minus) <= ZERO_CLAMP:
        minus = 0.0
    e2 = np.array([0.0, omega * omega, plus, minus])
    if minus < 0.0:
        raise ComplexFrequency("eps2- is imaginary: 2 g_eff > omega", e2)
    return np.sqrt(e2)


def stable_interval(params: ModelParams):
    """Interval ``[psi2_min, psi2_max]`` of stable manifold points, or ``(nan, nan)``.

    The condition is linear in ``u = Psi2^2``, so the stable set is one
    interval.  With ``r_n = g_n / g_n,c`` and only ``r2 > 1`` it is
    ``u <= (1 - r1^2) / (r2^2 - r1^2)``.
    """
    _require_degenerate(params)
    a, slope = _margin_coeffs(params)
    tol = MARGINAL_TOL * _scale(params)
    lo, hi = 0.0, 1.0
    if slope > 0.0:
        lo = min(1.0, max(0.0, -a / slope))
    elif slope < 0.0:
        hi = max(0.0, min(1.0, a / -slope))
    if a + lo * slope < -tol or lo > hi:
        return math.nan, math.nan
    return math.sqrt(lo), math.sqrt(hi)


def dark_stability(psi2, params: ModelParams) -> DarkStability:
    """Evaluate ``(g1/g1c)^2 (1 - Psi2^2) <= 1 - (g2/g2c)^2 Psi2^2``.

    The inequality is tested multiplied through by ``Delta`` so that
    ``Delta = 0`` needs no special case; ``margin`` is that energy.  Equality
    (within ``MARGINAL_TOL`` relative) counts as stable and sets ``marginal``.
    """
    _require_degenerate(params)
    _check_psi2(psi2)
    a, slope = _margin_coeffs(params)
    margin = a + slope * psi2 * psi2
    marginal = abs(margin) <= MARGINAL_TOL * _scale(params)
    stable = margin >= 0.0 or marginal
    lo, hi = stable_interval(params)
    warning = ""
    if stable:
        warning = ("on the stability boundary; " if marginal else "") + FLAT_WARNING
    return DarkStability(stable, marginal, lo, hi, margin, warning)


def dark_residual(psi2, params: ModelParams) -> float:
    """Linear-term bracket ``delta * Psi2`` at a would-be dark point.

    Vanishes only for ``delta = 0``; for small ``delta > 0`` it measures how
    strongly the manifold is tilted toward ``Psi2 = 0``.
    """
    _check_psi2(psi2)
    return params.delta * psi2


def dark_manifold_scan(params: ModelParams, n_points: int) -> list:
    """Sample the manifold at ``Psi2 = sin(theta)``, ``theta`` uniform on ``[0, pi/2]``."""
    _require_degenerate(params)
    if n_points < 1:
        raise ValueError("n_points must be >= 1")
    thetas = np.linspace(0.0, 0.5 * math.pi, n_points) if n_points > 1 else np.array([0.0])
    out = []
    for t in thetas:
        psi2 = min(1.0, math.sin(t))
        psi1 = math.cos(t) if t < 0.5 * math.pi else 0.0
        st = dark_stability(psi2, params)
        spec = dark_spectrum_general(psi2, params)
        out.append(DarkStatePoint(
            psi2=psi2, psi1=psi1, coherence_density=psi1 * psi2,
            stable=st.stable, marginal=st.marginal, psi2_max=st.psi2_max, eps=spec.eps,
        ))
    return out
