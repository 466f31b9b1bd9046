"""Physical parameters of the three-level (Lambda) Dicke model and its critical couplings.

Energies are given through the gaps ``delta = E2 - E1`` and ``Delta = E3 - E1``
with ``E1`` a pure offset.  All quantities share one arbitrary energy unit
(hbar = 1).
"""
from dataclasses import dataclass, replace
import math

from .errors import NegativeCoupling, NonPositiveFrequency, OrderingViolation


@dataclass(frozen=True)
class ModelParams:
    """Validated model constants.

    Parameters
    ----------
    delta : float
        Splitting of the two lower levels, ``E2 - E1 >= 0``.
    Delta : float
        Splitting between the excited and the lowest level, ``E3 - E1 >= delta``.
    omega1, omega2 : float
        Frequencies of the bosonic modes (1 couples 1<->3, 2 couples 2<->3).
    g1, g2 : float
        Non-negative coupling strengths.
    e1 : float
        Energy of level 1.
    """

    delta: float
    Delta: float
    omega1: float
    omega2: float
    g1: float = 0.0
    g2: float = 0.0
    e1: float = 0.0

    def __post_init__(self):
        for name in ("delta", "Delta", "omega1", "omega2", "g1", "g2", "e1"):
            object.__setattr__(self, name, float(getattr(self, name)))
        _check(self)

    @property
    def e2(self) -> float:
        return self.e1 + self.delta

    @property
    def e3(self) -> float:
        return self.e1 + self.Delta

    @property
    def k1(self) -> float:
        """Effective quartic coupling ``4 g1^2 / omega1`` of the blue branch."""
        return 4.0 * self.g1**2 / self.omega1

    @property
    def k2(self) -> float:
        return 4.0 * self.g2**2 / self.omega2

    def with_couplings(self, g1=None, g2=None) -> "ModelParams":
        return replace(
            self,
            g1=self.g1 if g1 is None else g1,
            g2=self.g2 if g2 is None else g2,
        )


@dataclass(frozen=True)
class CriticalCouplings:
    g1c: float
    g2c1: float
    g2c2: float
    g2c: float


def _check(p):
    if not p.delta >= 0.0:
        raise OrderingViolation(f"delta must be >= 0, got {p.delta}")
    if not p.Delta >= p.delta:
        raise OrderingViolation(f"need Delta >= delta, got Delta={p.Delta}, delta={p.delta}")
    for name in ("omega1", "omega2"):
        w = getattr(p, name)
        if not (w > 0.0 and math.isfinite(w)):
            raise NonPositiveFrequency(f"{name} must be positive and finite, got {w}")
    for name in ("g1", "g2"):
        g = getattr(p, name)
        if not (g >= 0.0 and math.isfinite(g)):
            raise NegativeCoupling(f"{name} must be >= 0 and finite, got {g}")
    if not math.isfinite(p.e1) or not math.isfinite(p.Delta):
        raise OrderingViolation("energies must be finite")


def validate(params: ModelParams) -> ModelParams:
    """Return ``params`` unchanged if every invariant holds, else raise a ``ModelError``."""
    _check(params)
    return params


def critical_couplings(params: ModelParams) -> CriticalCouplings:
    """Closed-form critical coupling strengths.

    ``g1c`` is the normal/blue threshold, ``g2c1`` the point where the red
    solution becomes real, ``g2c2`` the normal/red energy crossing and ``g2c``
    the dark-state stability threshold.  ``g2c1 <= g2c <= g2c2``, with
    equality throughout iff ``delta == 0``.
    """
    D, d = params.Delta, params.delta
    return CriticalCouplings(
        g1c=math.sqrt(D * params.omega1) / 2.0,
        g2c1=math.sqrt((D - d) * params.omega2) / 2.0,
        g2c2=(math.sqrt(D) + math.sqrt(d)) * math.sqrt(params.omega2) / 2.0,
        g2c=math.sqrt(D * params.omega2) / 2.0,
    )
