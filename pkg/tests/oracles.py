"""Independent brute-force references built in the full 2^N space.

Everything here is constructed from elementary Kronecker products and dense
linear algebra, deliberately sharing no sector machinery with the package.
"""

import numpy as np
import scipy.sparse as sps
from scipy.linalg import expm

SIGMA_GE = np.array([[0, 1], [0, 0]], dtype=complex)  # |g><e|
SIGMA_EE = np.array([[0, 0], [0, 1]], dtype=complex)


def site_operator(single, n_sites, site):
    mats = [np.eye(2, dtype=complex)] * n_sites
    mats[site] = single
    out = mats[0]
    for m in mats[1:]:
        out = np.kron(out, m)
    return out


def site_operator_sparse(single, n_sites, site):
    mats = [sps.identity(2, dtype=complex, format="csr")] * n_sites
    mats[site] = sps.csr_matrix(single)
    out = mats[0]
    for m in mats[1:]:
        out = sps.kron(out, m, format="csr")
    return out


def full_heff_sector(n, k1d_d, m, gamma_1d=1.0):
    """Projection of the full-space H_eff onto the m-excitation sector.

    Sparse construction, usable beyond the dense 2^N limit.
    """
    J, G = coupling_matrices(n, k1d_d, gamma_1d)
    lower = [site_operator_sparse(SIGMA_GE, n, i) for i in range(n)]
    H = None
    for a in range(n):
        for b in range(n):
            term = (J[a, b] - 0.5j * G[a, b]) * (lower[b].conj().T @ lower[a])
            H = term if H is None else H + term
    idx = sector_indices(n, m)
    return H.tocsr()[idx, :][:, idx].toarray()


def coupling_matrices(n, k1d_d, gamma_1d=1.0):
    d = np.abs(np.subtract.outer(np.arange(n), np.arange(n))) * k1d_d
    J = 0.5 * gamma_1d * np.sin(d)
    np.fill_diagonal(J, 0.0)
    G = gamma_1d * np.cos(d)
    return J, G


def full_heff(n, k1d_d, gamma_1d=1.0, gamma_prime=0.0):
    """H_eff on the full 2^N space, optionally with the local-loss broadening."""
    J, G = coupling_matrices(n, k1d_d, gamma_1d)
    lower = [site_operator(SIGMA_GE, n, i) for i in range(n)]
    raise_ = [op.conj().T for op in lower]
    H = np.zeros((2**n, 2**n), dtype=complex)
    for m in range(n):
        for nn in range(n):
            H += (J[m, nn] - 0.5j * G[m, nn]) * (raise_[nn] @ lower[m])
    if gamma_prime:
        for i in range(n):
            H -= 0.5j * gamma_prime * site_operator(SIGMA_EE, n, i)
    return H


def state_index(occupied, n):
    """Computational-basis index of an occupation set (site 0 = leading factor)."""
    return sum(1 << (n - 1 - s) for s in occupied)


def sector_indices(n, m):
    import itertools

    return [state_index(S, n) for S in itertools.combinations(range(n), m)]


def liouvillian_matrix(n, k1d_d, gamma_1d=1.0, gamma_prime=0.0, gamma_deph=0.0):
    """Dense matrix of the full master equation acting on vec(rho)."""
    J, G = coupling_matrices(n, k1d_d, gamma_1d)
    lower = [site_operator(SIGMA_GE, n, i) for i in range(n)]
    raise_ = [op.conj().T for op in lower]
    number = [site_operator(SIGMA_EE, n, i) for i in range(n)]
    H = full_heff(n, k1d_d, gamma_1d, gamma_prime)
    dim = 2**n
    ident = np.eye(dim)

    def sandwich(A, B):
        # vec(A rho B) = (A kron B^T) vec(rho)
        return np.kron(A, B.T)

    L = -1j * (sandwich(H, ident) - sandwich(ident, H.conj().T))
    for m in range(n):
        for nn in range(n):
            L += G[m, nn] * sandwich(lower[m], raise_[nn])
    for i in range(n):
        L += gamma_prime * sandwich(lower[i], raise_[i])
        L += gamma_deph * (2 * sandwich(number[i], number[i])
                           - sandwich(number[i], ident) - sandwich(ident, number[i]))
    return L


def evolve_full(rho0, L, t):
    dim = rho0.shape[0]
    return (expm(L * t) @ rho0.reshape(-1)).reshape(dim, dim)


def detector_operator(n, k1d_d, side):
    dist = np.arange(n) if side == "L" else (n - 1 - np.arange(n))
    beta = np.exp(1j * k1d_d * dist)
    O = np.zeros((2**n, 2**n), dtype=complex)
    for i in range(n):
        O += beta[i] * site_operator(SIGMA_GE, n, i)
    return O


def t2_brute(rho0, n, k1d_d, t, tau, side="L", gamma_prime=0.0, gamma_deph=0.0):
    """T2(t, tau) by direct two-jump evaluation on the full Liouvillian."""
    L = liouvillian_matrix(n, k1d_d, 1.0, gamma_prime, gamma_deph)
    O = detector_operator(n, k1d_d, side)
    OdO = O.conj().T @ O
    rho_t = evolve_full(rho0, L, t)
    denom = np.trace(OdO @ rho_t).real
    cond = O @ rho_t @ O.conj().T
    cond_tau = evolve_full(cond, L, tau)
    num = np.trace(OdO @ cond_tau).real
    return num / denom**2
