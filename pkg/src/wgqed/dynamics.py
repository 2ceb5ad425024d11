"""Number-resolved master-equation dynamics with loss and dephasing.

The master equation couples excitation sectors only downward (every jump
removes one excitation) and the coherent part conserves excitation number, so
a state that starts block-diagonal in total excitation number stays exactly
block-diagonal.  Evolution is therefore carried on the stack of sector blocks
rho^(m), m = 0..m_max, rather than the full 2^N density matrix.

The collective dissipator factorizes: Gamma_mn = Gamma_1D (c_m c_n + s_m s_n)
with c_n = cos(phi_n), s_n = sin(phi_n), so collective recycling needs only
two weighted jump operators per sector boundary.  Local loss Gamma' adds the
per-site channels and a -i m Gamma'/2 broadening of the sector Hamiltonians;
pure dephasing acts elementwise, damping a coherence between occupation sets
S, S' at rate gamma_d |S xor S'|.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp

from .errors import NumericalFailure
from .model import (
    ChainConfig,
    ExcitationBasis,
    InteractionMatrices,
    fock_state,
    heff_block,
    interaction_matrices_from_phases,
    site_lowering,
    weighted_lowering,
)

RTOL = 1e-8
ATOL = 1e-12


@dataclass
class BlockDensityMatrix:
    """Density-matrix blocks per excitation number, with the vacuum at m = 0."""

    bases: tuple
    blocks: list
    time: float = 0.0

    @property
    def m_max(self) -> int:
        return len(self.blocks) - 1

    def sector_population(self, m: int) -> float:
        """Probability that exactly m excitations remain."""
        return float(self.blocks[m].trace().real)

    def total_trace(self) -> float:
        return float(sum(b.trace().real for b in self.blocks))

    def excitation_fraction(self) -> float:
        """Remaining excitations as a fraction of the initial maximum m_max."""
        total = sum(m * self.sector_population(m) for m in range(self.m_max + 1))
        return float(total / self.m_max) if self.m_max else 0.0

    def copy(self) -> "BlockDensityMatrix":
        return BlockDensityMatrix(self.bases, [b.copy() for b in self.blocks], self.time)

    def check_physical(self, trace_tol=1e-8, herm_tol=1e-10, psd_tol=1e-8):
        """Raise if trace, hermiticity, or positivity drift beyond tolerance."""
        if abs(self.total_trace() - 1.0) > trace_tol:
            raise NumericalFailure(f"trace drifted to {self.total_trace()}")
        for m, b in enumerate(self.blocks):
            if np.abs(b - b.conj().T).max() > herm_tol:
                raise NumericalFailure(f"block m={m} lost hermiticity")
            if b.size and np.linalg.eigvalsh(0.5 * (b + b.conj().T)).min() < -psd_tol:
                raise NumericalFailure(f"block m={m} lost positivity")


def pure_state_blocks(config_or_n, vector, m_ex: int) -> BlockDensityMatrix:
    """Blocks of a pure m_ex-excitation state given its sector vector."""
    n = config_or_n if isinstance(config_or_n, int) else config_or_n.n_qubits
    bases = tuple(ExcitationBasis(n, m) for m in range(m_ex + 1))
    blocks = [np.zeros((b.size, b.size), dtype=complex) for b in bases]
    v = np.asarray(vector, dtype=complex)
    blocks[m_ex] = np.outer(v, v.conj())
    return BlockDensityMatrix(bases=bases, blocks=blocks)


def fock_blocks(config: ChainConfig, k_d: float, m_ex: int) -> BlockDensityMatrix:
    """Pure spin-wave Fock state as a block density matrix."""
    return pure_state_blocks(config, fock_state(config, k_d, m_ex), m_ex)


class BlockEngine:
    """Precomputed sector operators for one geometry and one set of rates."""

    def __init__(self, phases, amplitudes, m_max: int, gamma_1d: float = 1.0,
                 gamma_prime: float = 0.0, gamma_deph: float = 0.0):
        phases = np.asarray(phases, dtype=float)
        amplitudes = np.asarray(amplitudes, dtype=float)
        n = len(phases)
        self.n_sites = n
        self.m_max = m_max
        self.gamma_1d = gamma_1d
        self.gamma_prime = gamma_prime
        self.gamma_deph = gamma_deph
        mats = interaction_matrices_from_phases(phases, amplitudes, gamma_1d)
        self.mats = mats
        self.bases = tuple(ExcitationBasis(n, m) for m in range(m_max + 1))
        self.dims = [b.size for b in self.bases]
        self.heff = []
        for m, basis in enumerate(self.bases):
            H = heff_block(mats, basis).matrix.copy()
            if gamma_prime:
                H -= 0.5j * gamma_prime * m * np.eye(basis.size)
            self.heff.append(H)
        c = amplitudes * np.cos(phases) * np.sqrt(gamma_1d)
        s = amplitudes * np.sin(phases) * np.sqrt(gamma_1d)
        self.collective_jumps = []
        self.site_jumps = []
        for m in range(m_max):
            hi, lo = self.bases[m + 1], self.bases[m]
            self.collective_jumps.append(
                (weighted_lowering(hi, lo, c), weighted_lowering(hi, lo, s))
            )
            if gamma_prime:
                self.site_jumps.append(
                    [site_lowering(hi, lo, a) for a in range(n)]
                )
            else:
                self.site_jumps.append(None)
        self.deph_weights = []
        for basis in self.bases:
            sets = [frozenset(S) for S in basis.states]
            W = np.array([[len(sa ^ sb) for sb in sets] for sa in sets], dtype=float)
            self.deph_weights.append(W)

    @classmethod
    def for_config(cls, config: ChainConfig, m_max: int) -> "BlockEngine":
        return cls(config.phases(), config.amplitudes(), m_max,
                   config.gamma_1d, config.gamma_prime, config.gamma_deph)

    def rhs_blocks(self, blocks):
        """Time derivative of every sector block."""
        out = []
        for m in range(self.m_max + 1):
            r = blocks[m]
            H = self.heff[m]
            d = -1j * (H @ r - r @ H.conj().T)
            if m < self.m_max:
                up = blocks[m + 1]
                C, S = self.collective_jumps[m]
                d = d + C @ up @ C.T + S @ up @ S.T
                if self.gamma_prime:
                    for L in self.site_jumps[m]:
                        d = d + self.gamma_prime * (L @ up @ L.T)
            if self.gamma_deph:
                d = d - self.gamma_deph * self.deph_weights[m] * r
            out.append(d)
        return out

    def pack(self, blocks) -> np.ndarray:
        return np.concatenate([b.ravel() for b in blocks])

    def unpack(self, vec):
        blocks, offset = [], 0
        for d in self.dims:
            blocks.append(vec[offset:offset + d * d].reshape(d, d))
            offset += d * d
        return blocks

    def propagate(self, blocks, t_span, t_eval=None):
        """Integrate the block master equation over t_span."""
        def f(_t, y):
            return self.pack(self.rhs_blocks(self.unpack(y)))

        sol = solve_ivp(f, t_span, self.pack(blocks), t_eval=t_eval,
                        method="DOP853", rtol=RTOL, atol=ATOL)
        if not sol.success:
            raise NumericalFailure(f"integrator failed: {sol.message}")
        return [self.unpack(sol.y[:, i]) for i in range(sol.y.shape[1])]


def lindblad_rhs(state: BlockDensityMatrix, config: ChainConfig):
    """Derivative blocks of the master equation at the given state."""
    engine = BlockEngine.for_config(config, state.m_max)
    if engine.dims != [b.size for b in state.bases]:
        raise ValueError("state blocks inconsistent with config dimensions")
    return engine.rhs_blocks(state.blocks)


@dataclass
class EvolutionRecord:
    """Trajectory of sector populations, optional fidelity, and stored states."""

    times: np.ndarray
    populations: np.ndarray  # shape (n_times, m_max+1)
    states: list = field(repr=False, default=None)
    target_fidelity: np.ndarray = None

    def population(self, m: int) -> np.ndarray:
        return self.populations[:, m]

    def excitation_fraction(self) -> np.ndarray:
        m_max = self.populations.shape[1] - 1
        weights = np.arange(m_max + 1) / m_max
        return self.populations @ weights


def conditional_fidelity(state: BlockDensityMatrix, target_vector, m: int) -> float:
    """F = <psi| rho^(m) |psi> / p^(m), the fidelity conditioned on m excitations."""
    p = state.sector_population(m)
    if p < 1e-12:
        raise ZeroDivisionError(f"sector m={m} population {p} too small to condition on")
    v = np.asarray(target_vector)
    return float((v.conj() @ state.blocks[m] @ v).real / p)


def evolve(initial: BlockDensityMatrix, config: ChainConfig, t_grid,
           target_vector=None, store_states: bool = True) -> EvolutionRecord:
    """Propagate a block state over an increasing time grid starting at 0.

    Records sector populations at each output time and, when a target sector
    vector is supplied, the conditional fidelity toward it.  Stored states
    allow snapshotting and two-time correlation post-processing.
    """
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid[0] != 0.0 or np.any(np.diff(t_grid) <= 0):
        raise ValueError("t_grid must increase from 0")
    engine = BlockEngine.for_config(config, initial.m_max)
    states_raw = engine.propagate(initial.blocks, (0.0, t_grid[-1]), t_eval=t_grid)
    n_t = len(t_grid)
    pops = np.empty((n_t, initial.m_max + 1))
    fids = np.empty(n_t) if target_vector is not None else None
    states = []
    for i in range(n_t):
        st = BlockDensityMatrix(initial.bases, states_raw[i], time=float(t_grid[i]))
        for m in range(initial.m_max + 1):
            pops[i, m] = st.sector_population(m)
        if target_vector is not None:
            m_top = initial.m_max
            fids[i] = (np.asarray(target_vector).conj()
                       @ st.blocks[m_top] @ np.asarray(target_vector)).real
            fids[i] = fids[i] / pops[i, m_top] if pops[i, m_top] > 1e-12 else np.nan
        if store_states:
            states.append(st)
    return EvolutionRecord(times=t_grid, populations=pops,
                           states=states if store_states else None,
                           target_fidelity=fids)


def pair_population_grid(state: BlockDensityMatrix) -> np.ndarray:
    """<e_n e_m| rho |e_n e_m> as a symmetric N x N grid (two-excitation sector)."""
    basis = state.bases[2]
    n = basis.n_sites
    grid = np.zeros((n, n))
    diag = np.real(np.diag(state.blocks[2]))
    for idx, (a, b) in enumerate(basis.states):
        grid[a, b] = diag[idx]
        grid[b, a] = diag[idx]
    return grid


def imperfection_sweep(config: ChainConfig, gamma_prime_list, gamma_deph_list,
                       target_vector=None, initial_factory=None,
                       p_floor: float = 0.2, t_max: float = 60.0,
                       n_t: int = 121, t_extend_limit: float = 400.0):
    """Best achievable conditional fidelity under loss and dephasing.

    For each (Gamma', gamma_d) grid point the trajectory is evolved until the
    two-excitation population falls below p_floor (extending the horizon when
    needed), and max_t F^(2)(t) subject to p^(2)(t) >= p_floor is recorded.
    NaN marks grid points where the constraint is never satisfiable.
    """
    from .multiexc import multi_excitation_modes

    if initial_factory is None:
        initial_factory = lambda gp, gd: fock_blocks(
            ChainConfig(config.n_qubits, config.k1d_d, config.gamma_1d, gp, gd), 0.0, 2
        )
    result = np.full((len(gamma_prime_list), len(gamma_deph_list)), np.nan)
    for i, gp in enumerate(gamma_prime_list):
        for j, gd in enumerate(gamma_deph_list):
            cfg = ChainConfig(config.n_qubits, config.k1d_d, config.gamma_1d, gp, gd)
            if target_vector is None:
                target = multi_excitation_modes(cfg, 2)[0].vector
            else:
                target = target_vector
            initial = initial_factory(gp, gd)
            horizon = t_max
            while True:
                t_grid = np.linspace(0.0, horizon, n_t)
                rec = evolve(initial, cfg, t_grid, target_vector=target,
                             store_states=False)
                p2 = rec.population(2)
                if p2[-1] < p_floor or horizon >= t_extend_limit:
                    break
                horizon *= 2
            ok = p2 >= p_floor
            if np.any(ok):
                result[i, j] = np.nanmax(rec.target_fidelity[ok])
    return result
