"""Emitted-field intensities and two-photon correlations of the decaying chain.

The field radiated past either end of the chain is a phased sum of the qubit
lowering operators, E^+ ~ sum_n exp(i k1D |z_det - z_n|) sigma^-_n (the vacuum
input contributes nothing to normally ordered moments and the global Gamma_1D/2
prefactor cancels in every normalized quantity reported here).  Detecting a
photon applies that operator to the state; the delayed coincidence surface
T2(t, tau) follows from the quantum regression procedure: propagate to t,
apply the detector operator on both sides, propagate the conditioned
(unnormalized) state over tau, and read out the intensity again.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .dynamics import BlockDensityMatrix, BlockEngine, evolve
from .model import ChainConfig, ExcitationBasis, weighted_lowering


@dataclass(frozen=True)
class CollectiveLoweringOp:
    """Detector-side collective lowering operator in sector-resolved form."""

    side: str
    beta: np.ndarray
    sector_matrices: tuple = field(repr=False)  # index m maps sector m -> m-1

    def intensity_matrix(self, m: int) -> np.ndarray:
        """O^dag O restricted to sector m (zero matrix for the vacuum)."""
        if m == 0:
            return np.zeros((1, 1))
        O = self.sector_matrices[m]
        return O.conj().T @ O


def detector_coefficients(config: ChainConfig, side: str) -> np.ndarray:
    """Unit-modulus phases exp(i k1D |z_det - z_n|) for a left/right detector.

    The left (right) field is measured just beyond the first (last) qubit, so
    the phase grows with the distance from that end.
    """
    n = config.n_qubits
    dist = np.arange(n) if side == "L" else (n - 1 - np.arange(n))
    return np.exp(1j * config.k1d_d * dist)


def collective_lowering(config: ChainConfig, side: str, m_max: int) -> CollectiveLoweringOp:
    if side not in ("L", "R"):
        raise ValueError("side must be 'L' or 'R'")
    beta = detector_coefficients(config, side)
    bases = [ExcitationBasis(config.n_qubits, m) for m in range(m_max + 1)]
    mats = [None]
    for m in range(1, m_max + 1):
        mats.append(weighted_lowering(bases[m], bases[m - 1], beta))
    return CollectiveLoweringOp(side=side, beta=beta, sector_matrices=tuple(mats))


def intensity(state: BlockDensityMatrix, op: CollectiveLoweringOp) -> float:
    """<E^- E^+> in operator-normalized units (a single excited qubit gives 1)."""
    total = 0.0
    for m in range(1, state.m_max + 1):
        total += float(np.trace(op.intensity_matrix(m) @ state.blocks[m]).real)
    return total


def apply_detection(state: BlockDensityMatrix, op: CollectiveLoweringOp) -> BlockDensityMatrix:
    """Unnormalized conditional state O rho O^dag after one detected photon."""
    blocks = [np.zeros_like(b) for b in state.blocks]
    for m in range(1, state.m_max + 1):
        O = op.sector_matrices[m]
        blocks[m - 1] = O @ state.blocks[m] @ O.conj().T
    return BlockDensityMatrix(bases=state.bases, blocks=blocks, time=state.time)


def conditional_state(psi2, config: ChainConfig, side: str = "L"):
    """Single-excitation state after one photon from a pure two-excitation state.

    Returns (psi_c, alpha, epsilon): the normalized conditional vector, the
    least-squares coefficients of its expansion in the two most subradiant
    single-excitation modes, and the weight epsilon outside that span.  The
    least-squares projection is used because eigenvectors of the non-Hermitian
    block are not orthogonal.
    """
    from .spectra import single_excitation_modes

    psi2 = np.asarray(psi2)
    op = collective_lowering(config, side, 2)
    psi_c = op.sector_matrices[2] @ psi2
    norm = np.linalg.norm(psi_c)
    if norm < 1e-12:
        raise ZeroDivisionError(f"input state is dark to the {side} detector")
    psi_c = psi_c / norm
    modes = single_excitation_modes(config)
    B = np.column_stack([modes[0].vector, modes[1].vector])
    alpha, *_ = np.linalg.lstsq(B, psi_c, rcond=None)
    eps = 1.0 - float(np.linalg.norm(B @ alpha) ** 2)
    return psi_c, alpha, eps


def conditional_weight_scaling(config_template: ChainConfig, n_list,
                               side: str = "L"):
    """epsilon(N) for the most subradiant two-excitation mode and its log-log slope."""
    from .fitting import loglog_fit
    from .multiexc import multi_excitation_modes

    eps_list = []
    for n in n_list:
        cfg = ChainConfig(n, config_template.k1d_d, config_template.gamma_1d)
        psi2 = multi_excitation_modes(cfg, 2)[0].vector
        _, _, eps = conditional_state(psi2, cfg, side)
        eps_list.append(eps)
    slope = loglog_fit(list(n_list), eps_list)[0]
    return slope, eps_list


@dataclass
class CorrelationRecord:
    """Sampled T2(t, tau) surface with the emission intensity trace."""

    t_grid: np.ndarray
    tau_grid: np.ndarray
    surface: np.ndarray       # shape (len(t_grid), len(tau_grid)), NaN where undefined
    intensity_t: np.ndarray
    side: str


DENOMINATOR_FLOOR = 1e-14


def t2_surface(initial: BlockDensityMatrix, config: ChainConfig, t_grid,
               tau_grid, side: str = "L") -> CorrelationRecord:
    """Normalized two-photon delay correlation from the regression procedure.

    T2(t, tau) = tr[O^dag O rho_c(tau)] / tr[O^dag O rho(t)]^2 with
    rho_c = O rho(t) O^dag; the detector prefactors cancel in the ratio.
    Points where the one-photon intensity underflows are masked as NaN.
    """
    t_grid = np.asarray(t_grid, dtype=float)
    tau_grid = np.asarray(tau_grid, dtype=float)
    op = collective_lowering(config, side, initial.m_max)
    record = evolve(initial, config, t_grid, store_states=True)
    engine = BlockEngine.for_config(config, initial.m_max)
    surface = np.full((len(t_grid), len(tau_grid)), np.nan)
    intensity_t = np.empty(len(t_grid))
    for i, state in enumerate(record.states):
        I_t = intensity(state, op)
        intensity_t[i] = I_t
        conditioned = apply_detection(state, op)
        if conditioned.total_trace() == 0.0:
            surface[i, :] = 0.0
            continue
        if I_t**2 < DENOMINATOR_FLOOR:
            continue
        tau_states = engine.propagate(conditioned.blocks, (0.0, tau_grid[-1]),
                                      t_eval=tau_grid)
        for j, blocks in enumerate(tau_states):
            st = BlockDensityMatrix(initial.bases, blocks)
            surface[i, j] = intensity(st, op) / I_t**2
    return CorrelationRecord(t_grid=t_grid, tau_grid=tau_grid, surface=surface,
                             intensity_t=intensity_t, side=side)


def t2_maxima(record: CorrelationRecord, t_index: int = -1,
              detrend: bool = True) -> np.ndarray:
    """Delay times of interior local maxima of T2 at one emission time.

    The oscillation rides on the overall decay of the conditioned state; the
    odd-n prediction n*pi/|J_1 - J_2| describes the interference phase, so by
    default the exponential envelope (least-squares fit of log T2 over the
    row) is divided out before peak detection.
    """
    row = np.array(record.surface[t_index], dtype=float)
    tau = record.tau_grid
    finite = np.isfinite(row)
    if detrend:
        pos = finite & (row > 0)
        if pos.sum() >= 3:
            slope, icept = np.polyfit(tau[pos], np.log(row[pos]), 1)
            row = np.where(finite, row * np.exp(-slope * tau), row)
    taus = []
    for j in range(1, len(row) - 1):
        if not (finite[j - 1] and finite[j] and finite[j + 1]):
            continue
        if row[j] > row[j - 1] and row[j] >= row[j + 1]:
            taus.append(tau[j])
    return np.asarray(taus)


def predicted_t2_maxima(config: ChainConfig, n_values=(1, 3, 5, 7)) -> np.ndarray:
    """tau_max = n pi / |J_1 - J_2| for odd n, from the two most subradiant modes."""
    from .spectra import single_excitation_modes

    modes = single_excitation_modes(config)
    dj = abs(modes[0].shift - modes[1].shift)
    if dj == 0:
        raise ZeroDivisionError("degenerate shifts: no beat frequency")
    return np.array([n * np.pi / dj for n in n_values])


def default_tau_grid(config: ChainConfig, periods: float = 4.0,
                     points_per_period: int = 50) -> np.ndarray:
    """Delay grid spanning several beat periods at fixed sampling density."""
    period = 2.0 * predicted_t2_maxima(config, (1,))[0]
    n_pts = int(periods * points_per_period) + 1
    return np.linspace(0.0, periods * period, n_pts)
