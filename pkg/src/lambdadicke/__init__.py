"""Mean-field theory of the two-mode Lambda Dicke model with numeric and exact-diagonalization cross-checks."""
from .errors import (
    ComplexFrequency,
    DeltaNotZero,
    DimensionCap,
    DomainViolation,
    FrameSingularity,
    LambdaDickeError,
    ModelError,
    NegativeCoupling,
    NoConvergence,
    NonConvergence,
    NonPositiveFrequency,
    OrderingViolation,
    OutOfRange,
    PhaseMismatch,
)
from .kernels import BACKEND
from .model import CriticalCouplings, ModelParams, critical_couplings, validate
from .meanfield import (
    CandidateSolution,
    Classification,
    MeanFieldPoint,
    PhaseLabel,
    Stability,
    classify,
    minimize_numeric,
)
from .spectra import ExcitationSpectrum, bogoliubov_frequencies, build_h2, spectrum_closed_form
from .darkstate import dark_manifold_scan, dark_spectrum_general, dark_stability
from .phasemap import boundary_blue_red, sweep_grid, transition_order, triple_point
from .ed_oracle import EDConfig, EDResult, ground_state

__version__ = "0.1.0"
