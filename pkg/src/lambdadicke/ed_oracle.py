"""Exact diagonalization of the finite-N Hamiltonian in the symmetric subspace.

Basis states are ``|n1, n2, n3> |m1> |m2>`` with ``n1 + n2 + n3 = N`` level
occupations and photon numbers ``m_n <= cutoff_n``.  Atomic configurations are
ordered lexicographically (``n1`` outer, ``n2`` inner) and the full index is
``(atom * (cutoff1 + 1) + m1) * (cutoff2 + 1) + m2``.

The Hamiltonian is::

    sum_n E_n A_n^n + sum_n omega_n a_n^dag a_n
        + (g_n / sqrt(N)) (a_n^dag + a_n) (A_n^3 + A_3^n)

with ``A_3^n |.., n_n, .., n3> = sqrt(n_n (n3 + 1)) |.., n_n - 1, .., n3 + 1>``.
It conserves the parities of ``eta_n = -A_n^n + a_n^dag a_n``, so it is solved
separately in each of the four parity sectors.
"""
from dataclasses import dataclass, field, replace
import math

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import ArpackNoConvergence, eigsh

from . import kernels
from .errors import DimensionCap, NonConvergence
from .meanfield import classify
from .model import ModelParams

DIM_CAP = 200_000
DENSE_LIMIT = 2000
RESIDUAL_TOL = 1e-10
CUTOFF_RTOL = 1e-8

SECTORS = ((1, 1), (1, -1), (-1, 1), (-1, -1))


def default_cutoffs(n_particles: int, params: ModelParams):
    """``max(8, ceil(6 N phi_n^2))`` with ``phi_n`` from the mean-field ground state."""
    pt = classify(params).winner.point
    # ignore last-digit rounding so that an exact integer target is not bumped up
    return tuple(max(8, math.ceil(6.0 * n_particles * phi**2 * (1.0 - 1e-12))) for phi in (pt.phi1, pt.phi2))


@dataclass(frozen=True)
class EDConfig:
    """Finite-size problem definition.

    Cutoffs left as ``None`` are filled in by :func:`default_cutoffs`.
    ``parity_blocks`` optionally restricts the search to some of the sectors
    ``(Pi1, Pi2)`` with ``Pi_n = +-1``.
    """

    n_particles: int
    params: ModelParams
    cutoff1: int | None = None
    cutoff2: int | None = None
    parity_blocks: tuple | None = None
    dim_cap: int = DIM_CAP

    def __post_init__(self):
        if int(self.n_particles) != self.n_particles or self.n_particles < 1:
            raise ValueError("n_particles must be a positive integer")
        object.__setattr__(self, "n_particles", int(self.n_particles))
        if self.cutoff1 is None or self.cutoff2 is None:
            c1, c2 = default_cutoffs(self.n_particles, self.params)
            if self.cutoff1 is None:
                object.__setattr__(self, "cutoff1", c1)
            if self.cutoff2 is None:
                object.__setattr__(self, "cutoff2", c2)
        for name in ("cutoff1", "cutoff2"):
            c = getattr(self, name)
            if int(c) != c or c < 1:
                raise ValueError(f"{name} must be an integer >= 1")
            object.__setattr__(self, name, int(c))
        if self.parity_blocks is not None:
            blocks = tuple(tuple(int(x) for x in b) for b in self.parity_blocks)
            if not blocks or any(b not in SECTORS for b in blocks):
                raise ValueError("parity_blocks must be a non-empty subset of (+-1, +-1) pairs")
            object.__setattr__(self, "parity_blocks", blocks)

    @property
    def n_atomic(self) -> int:
        n = self.n_particles
        return (n + 1) * (n + 2) // 2

    @property
    def dim(self) -> int:
        return self.n_atomic * (self.cutoff1 + 1) * (self.cutoff2 + 1)

    def doubled(self) -> "EDConfig":
        return replace(self, cutoff1=2 * self.cutoff1, cutoff2=2 * self.cutoff2)


@dataclass(frozen=True)
class Basis:
    n_particles: int
    cutoff1: int
    cutoff2: int
    atoms: np.ndarray
    lookup: np.ndarray
    n1: np.ndarray
    n2: np.ndarray
    n3: np.ndarray
    m1: np.ndarray
    m2: np.ndarray

    @property
    def dim(self) -> int:
        return self.n1.shape[0]

    def index(self, n1, n2, m1, m2) -> int:
        a = int(self.lookup[n1, n2])
        if a < 0 or not (0 <= m1 <= self.cutoff1 and 0 <= m2 <= self.cutoff2):
            raise KeyError((n1, n2, m1, m2))
        return (a * (self.cutoff1 + 1) + m1) * (self.cutoff2 + 1) + m2

    def state(self, idx):
        """``(n1, n2, n3, m1, m2)`` of basis vector ``idx``."""
        return (int(self.n1[idx]), int(self.n2[idx]), int(self.n3[idx]),
                int(self.m1[idx]), int(self.m2[idx]))


@dataclass(frozen=True)
class EDResult:
    n_particles: int
    cutoff1: int
    cutoff2: int
    dim: int
    ground_energy: float
    energy_per_particle: float
    occupations: tuple
    photon_densities: tuple
    parities: tuple
    coherence12: float
    gap: float
    residual: float
    cutoff_converged: bool
    doubled_energy: float = math.nan
    state: np.ndarray = field(default=None, repr=False, compare=False)


def enumerate_basis(config: EDConfig) -> Basis:
    """Deterministic basis of the symmetric subspace times both Fock spaces.

    Raises ``DimensionCap`` if the dimension exceeds ``config.dim_cap``.
    """
    if config.dim > config.dim_cap:
        raise DimensionCap(f"basis dimension {config.dim} exceeds cap {config.dim_cap}")
    n = config.n_particles
    atoms = np.array([(a, b, n - a - b) for a in range(n + 1) for b in range(n - a + 1)],
                     dtype=np.int64)
    lookup = np.full((n + 1, n + 1), -1, dtype=np.int64)
    lookup[atoms[:, 0], atoms[:, 1]] = np.arange(atoms.shape[0])
    c1, c2 = config.cutoff1, config.cutoff2
    a_idx, m1, m2 = np.meshgrid(np.arange(atoms.shape[0]), np.arange(c1 + 1), np.arange(c2 + 1),
                                indexing="ij")
    a_idx = a_idx.ravel()
    return Basis(n, c1, c2, atoms, lookup,
                 atoms[a_idx, 0], atoms[a_idx, 1], atoms[a_idx, 2], m1.ravel(), m2.ravel())


def build_hamiltonian(config: EDConfig, basis: Basis | None = None) -> sp.csr_matrix:
    """Real symmetric sparse Hamiltonian.

    Couplings that raise ``n3`` are generated once and mirrored, so the
    matrix equals its transpose exactly.
    """
    b = enumerate_basis(config) if basis is None else basis
    p = config.params
    diag = (p.e1 * b.n1 + p.e2 * b.n2 + p.e3 * b.n3
            + p.omega1 * b.m1 + p.omega2 * b.m2).astype(float)
    scale = 1.0 / math.sqrt(config.n_particles)
    rows, cols, vals = kernels.ed_coupling_triplets(
        b.atoms, b.lookup, b.cutoff1, b.cutoff2, p.g1 * scale, p.g2 * scale)
    idx = np.arange(b.dim)
    r = np.concatenate([idx, rows, cols])
    c = np.concatenate([idx, cols, rows])
    v = np.concatenate([diag, vals, vals])
    h = sp.coo_matrix((v, (r, c)), shape=(b.dim, b.dim)).tocsr()
    h.sort_indices()
    return h


def parity_eta(basis: Basis):
    """Integer ``eta_n = -n_n + m_n`` on every basis state."""
    return -basis.n1 + basis.m1, -basis.n2 + basis.m2


def parity_operators(basis: Basis):
    """Diagonal sparse ``Pi_n = (-1)^eta_n``."""
    e1, e2 = parity_eta(basis)
    return (sp.diags(np.where(e1 % 2 == 0, 1.0, -1.0)).tocsr(),
            sp.diags(np.where(e2 % 2 == 0, 1.0, -1.0)).tocsr())


def commutator_nnz(h: sp.spmatrix, op: sp.spmatrix) -> int:
    """Number of structurally non-zero entries of ``[h, op]`` after dropping exact zeros."""
    c = (h @ op - op @ h).tocsr()
    c.eliminate_zeros()
    return int(c.nnz)


def parity_expectations(basis: Basis, state: np.ndarray):
    """``(<Pi1>, <Pi2>)`` of a normalized real or complex state vector."""
    w = np.abs(np.asarray(state)) ** 2
    w = w / w.sum()
    e1, e2 = parity_eta(basis)
    s1 = np.where(e1 % 2 == 0, 1.0, -1.0)
    s2 = np.where(e2 % 2 == 0, 1.0, -1.0)
    # clip rounding so that |<Pi>| <= 1 holds exactly
    return float(np.clip(w @ s1, -1.0, 1.0)), float(np.clip(w @ s2, -1.0, 1.0))


def coherence12(basis: Basis, state: np.ndarray) -> float:
    """``<A_1^2> / N`` with ``A_1^2 |n1, n2> = sqrt((n1 + 1) n2) |n1 + 1, n2 - 1>``."""
    v = np.asarray(state)
    src = np.nonzero(basis.n2 > 0)[0]
    if src.size == 0:
        return 0.0
    n1, n2 = basis.n1[src], basis.n2[src]
    atom = basis.lookup[n1 + 1, n2 - 1]
    dst = (atom * (basis.cutoff1 + 1) + basis.m1[src]) * (basis.cutoff2 + 1) + basis.m2[src]
    amp = np.sqrt((n1 + 1.0) * n2)
    return float(np.real(np.sum(np.conj(v[dst]) * amp * v[src]))) / basis.n_particles


def _lowest(h, k):
    """Lowest ``k`` eigenpairs of a symmetric sparse matrix."""
    n = h.shape[0]
    if n <= DENSE_LIMIT:
        w, v = np.linalg.eigh(h.toarray())
        return w[:k], v[:, :k]
    try:
        w, v = eigsh(h, k=k, which="SA", v0=np.ones(n), tol=0.0, maxiter=max(1000, 20 * n))
    except ArpackNoConvergence as exc:
        raise NonConvergence(f"eigsh did not converge for dimension {n}") from exc
    order = np.argsort(w)
    return w[order], v[:, order]


def _sector_masks(basis: Basis, blocks):
    e1, e2 = parity_eta(basis)
    s1 = np.where(e1 % 2 == 0, 1, -1)
    s2 = np.where(e2 % 2 == 0, 1, -1)
    for blk in blocks:
        mask = (s1 == blk[0]) & (s2 == blk[1])
        if mask.any():
            yield blk, np.nonzero(mask)[0]


def _solve(config: EDConfig):
    basis = enumerate_basis(config)
    h = build_hamiltonian(config, basis)
    blocks = SECTORS if config.parity_blocks is None else config.parity_blocks
    levels = []
    best = None
    for _, idx in _sector_masks(basis, blocks):
        sub = h[idx][:, idx]
        w, v = _lowest(sub, min(2, sub.shape[0]))
        levels.extend(w.tolist())
        if best is None or w[0] < best[0]:
            vec = np.zeros(basis.dim)
            vec[idx] = v[:, 0]
            best = (float(w[0]), vec)
    energy, vec = best
    vec /= np.linalg.norm(vec)
    hscale = max(1.0, float(abs(h).sum(axis=1).max()))
    residual = float(np.linalg.norm(h @ vec - energy * vec))
    if residual > RESIDUAL_TOL * hscale:
        raise NonConvergence(f"ground-state residual {residual:.3e} exceeds tolerance")
    levels.sort()
    gap = levels[1] - levels[0] if len(levels) > 1 else math.nan
    return basis, energy, vec, residual, gap


def ground_state(config: EDConfig, check_cutoff: bool = True) -> EDResult:
    """Ground state and observables.

    With ``check_cutoff`` the problem is solved again with both cutoffs
    doubled; ``cutoff_converged`` is true if the energy moves by less than
    ``1e-8`` relative.  If the doubled problem exceeds the dimension cap the
    flag is false.

    ``gap`` is the difference between the two lowest levels found (the
    lowest two of each searched parity sector), which in the superradiant
    regime is the splitting of the parity doublet.
    """
    basis, energy, vec, residual, gap = _solve(config)
    n = config.n_particles
    w = vec * vec
    occ = (float(w @ basis.n1) / n, float(w @ basis.n2) / n, float(w @ basis.n3) / n)
    photons = (float(w @ basis.m1) / n, float(w @ basis.m2) / n)
    converged = False
    e2 = math.nan
    if check_cutoff:
        big = config.doubled()
        if big.dim <= big.dim_cap:
            e2 = _solve(big)[1]
            converged = abs(e2 - energy) <= CUTOFF_RTOL * max(1.0, abs(energy))
    return EDResult(
        n_particles=n, cutoff1=config.cutoff1, cutoff2=config.cutoff2, dim=basis.dim,
        ground_energy=energy, energy_per_particle=energy / n,
        occupations=occ, photon_densities=photons,
        parities=parity_expectations(basis, vec), coherence12=coherence12(basis, vec),
        gap=gap, residual=residual, cutoff_converged=converged, doubled_energy=e2, state=vec,
    )
