"""Qubit-chain configuration, excitation-number bases, and effective Hamiltonian blocks.

A chain of N two-level qubits couples to a 1D waveguide; photon exchange
produces infinite-range coherent couplings J_mn and collective decay rates
Gamma_mn that depend only on the phase k1d*d*|m-n| between sites.  All rates
are expressed in units of the single-qubit waveguide decay rate Gamma_1D and
times in units of 1/Gamma_1D.  Excitation number is conserved by the coherent
part, so every operator in the package is represented sector by sector on
ordered occupation bases.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class ChainConfig:
    """Physical parameters of a regularly spaced qubit array.

    n_qubits   : number of qubits N (>= 1)
    k1d_d      : phase k1D*d accumulated between neighboring sites (radians)
    gamma_1d   : waveguide decay rate; sets the rate/time unit (default 1)
    gamma_prime: decay rate into non-waveguide channels
    gamma_deph : pure dephasing rate
    """

    n_qubits: int
    k1d_d: float
    gamma_1d: float = 1.0
    gamma_prime: float = 0.0
    gamma_deph: float = 0.0

    def __post_init__(self):
        if self.n_qubits < 1:
            raise ValueError(f"n_qubits must be >= 1, got {self.n_qubits}")
        if not math.isfinite(self.k1d_d) or self.k1d_d <= 0:
            raise ValueError(f"k1d_d must be finite and > 0, got {self.k1d_d}")
        for name in ("gamma_1d", "gamma_prime", "gamma_deph"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")

    def phases(self) -> np.ndarray:
        """Per-site propagation phases k1D*z_n; only differences enter the model."""
        return self.k1d_d * np.arange(self.n_qubits, dtype=float)

    def amplitudes(self) -> np.ndarray:
        """Per-site waveguide coupling amplitudes (uniform for a plain chain)."""
        return np.ones(self.n_qubits)


@dataclass(frozen=True)
class ExcitationBasis:
    """Lexicographically ordered m-excitation occupation basis.

    States are strictly increasing tuples of site indices 0..N-1; the basis
    order is the dense index used by every sector matrix in the package.
    """

    n_sites: int
    m_ex: int
    states: tuple = field(repr=False, default=())
    _index: dict = field(repr=False, default=None, compare=False)

    def __post_init__(self):
        if not (0 <= self.m_ex <= self.n_sites):
            raise ValueError(f"m_ex must be in 0..{self.n_sites}, got {self.m_ex}")
        if not self.states:
            states = tuple(itertools.combinations(range(self.n_sites), self.m_ex))
            object.__setattr__(self, "states", states)
        object.__setattr__(self, "_index", {s: i for i, s in enumerate(self.states)})

    @property
    def size(self) -> int:
        return len(self.states)

    def rank(self, state: tuple) -> int:
        """Dense index of an occupation tuple."""
        return self._index[tuple(state)]

    def unrank(self, index: int) -> tuple:
        """Occupation tuple at a dense index."""
        return self.states[index]


@dataclass(frozen=True)
class InteractionMatrices:
    """Coherent (J) and dissipative (Gamma) photon-mediated coupling matrices."""

    J: np.ndarray
    Gamma: np.ndarray
    gamma_1d: float


def interaction_matrices_from_phases(phases, amplitudes=None, gamma_1d=1.0) -> InteractionMatrices:
    """Build J and Gamma for arbitrary per-site phases and coupling amplitudes.

    J_mn = (Gamma_1D/2) a_m a_n sin(|phi_m - phi_n|), zero on the diagonal;
    Gamma_mn = Gamma_1D a_m a_n cos(|phi_m - phi_n|).  Gamma is positive
    semidefinite with rank <= 2: it equals Gamma_1D (c c^T + s s^T) for
    c_n = a_n cos(phi_n), s_n = a_n sin(phi_n).
    """
    phases = np.asarray(phases, dtype=float)
    if amplitudes is None:
        amplitudes = np.ones_like(phases)
    amplitudes = np.asarray(amplitudes, dtype=float)
    dist = np.abs(phases[:, None] - phases[None, :])
    amp = amplitudes[:, None] * amplitudes[None, :]
    J = 0.5 * gamma_1d * amp * np.sin(dist)
    np.fill_diagonal(J, 0.0)
    Gamma = gamma_1d * amp * np.cos(dist)
    return InteractionMatrices(J=J, Gamma=Gamma, gamma_1d=gamma_1d)


def interaction_matrices(config: ChainConfig) -> InteractionMatrices:
    """J and Gamma for a regular chain (phases k1D*d*n, unit amplitudes)."""
    return interaction_matrices_from_phases(
        config.phases(), config.amplitudes(), config.gamma_1d
    )


@dataclass(frozen=True)
class HeffBlock:
    """Effective non-Hermitian Hamiltonian restricted to one excitation sector.

    The matrix is complex symmetric (equal to its transpose): eigenvalues
    lambda = J_xi - i*Gamma_xi/2 give the collective shift and decay rate.
    """

    m_ex: int
    matrix: np.ndarray
    basis: ExcitationBasis


def heff_block(mats: InteractionMatrices, basis: ExcitationBasis) -> HeffBlock:
    """Restrict H_eff = sum_mn (J_mn - i Gamma_mn/2) sigma+_n sigma-_m to a sector.

    Matrix elements: the diagonal carries -i/2 * sum of Gamma_aa over occupied
    sites (J has zero diagonal); hopping an excitation from site a to empty
    site b contributes h_ba = J_ba - i Gamma_ba/2 between occupation sets that
    differ in exactly that one index.
    """
    n = len(mats.J)
    if basis.n_sites != n:
        raise ValueError(
            f"basis built for {basis.n_sites} sites, matrices for {n}"
        )
    h = mats.J - 0.5j * mats.Gamma
    dim = basis.size
    H = np.zeros((dim, dim), dtype=complex)
    gdiag = np.diag(mats.Gamma)
    rank = basis.rank
    for i, S in enumerate(basis.states):
        H[i, i] = -0.5j * gdiag[list(S)].sum() if S else 0.0
        occupied = set(S)
        for a in S:
            rest = occupied - {a}
            for b in range(n):
                if b in occupied:
                    continue
                j = rank(tuple(sorted(rest | {b})))
                H[j, i] += h[b, a]
    return HeffBlock(m_ex=basis.m_ex, matrix=H, basis=basis)


def fock_state(config: ChainConfig, k_d: float, m_ex: int) -> np.ndarray:
    """Spin-wave Fock state (S_k^dag)^m |g>^N as a vector in ExcitationBasis order.

    Coefficients are proportional to exp(i*k*(z_n1 + ... + z_nm)) over the
    occupied sites and normalized to unit l2 norm.  k is specified through
    the per-site phase k*d.
    """
    if m_ex > config.n_qubits:
        raise ValueError(f"m_ex={m_ex} exceeds n_qubits={config.n_qubits}")
    basis = ExcitationBasis(config.n_qubits, m_ex)
    site_phase = np.exp(1j * k_d * np.arange(config.n_qubits))
    amp = np.array([np.prod(site_phase[list(S)]) for S in basis.states])
    return amp / np.linalg.norm(amp)


def site_lowering(basis_hi: ExcitationBasis, basis_lo: ExcitationBasis, site: int) -> np.ndarray:
    """Matrix of sigma-_site mapping the m-excitation sector to m-1."""
    L = np.zeros((basis_lo.size, basis_hi.size))
    for j, S in enumerate(basis_hi.states):
        if site in S:
            L[basis_lo.rank(tuple(x for x in S if x != site)), j] = 1.0
    return L


def weighted_lowering(basis_hi: ExcitationBasis, basis_lo: ExcitationBasis, coeffs) -> np.ndarray:
    """Matrix of sum_n coeffs[n] sigma-_n mapping sector m to m-1."""
    coeffs = np.asarray(coeffs)
    L = np.zeros((basis_lo.size, basis_hi.size), dtype=coeffs.dtype)
    for j, S in enumerate(basis_hi.states):
        for site in S:
            L[basis_lo.rank(tuple(x for x in S if x != site)), j] += coeffs[site]
    return L
