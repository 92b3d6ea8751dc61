"""Constant 4x4 matrices of the (1/2,0)+(0,1/2) representation.

The chiral basis, with the bispinor written as column(phi_R, phi_L), is the
canonical base.  Dirac-standard and Majorana matrices are obtained from it by
fixed unitaries.

Index conventions
-----------------
Minkowski: ``gammas[mu]`` is gamma^mu (upper index), mu = 0..3, metric
diag(+1, -1, -1, -1).

Euclidean: ``gammas[k]`` for k = 0, 1, 2 is gamma_1, gamma_2, gamma_3 and
``gammas[3]`` is gamma_4, with gamma_4 = gamma^0 and gamma_k = -i gamma^k.
All four are Hermitian and {gamma_mu, gamma_nu} = 2 delta_mu_nu.

gamma5 is the same matrix in both metrics, i gamma^0 gamma^1 gamma^2 gamma^3.
"""

from __future__ import annotations

from enum import Enum
from itertools import combinations
from typing import NamedTuple

import numpy as np

CLOSE_TOL = 1e-12
SOLVE_TOL = 1e-10

I2 = np.eye(2, dtype=complex)
I4 = np.eye(4, dtype=complex)
PAULI = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)
_Z2 = np.zeros((2, 2), dtype=complex)


class Representation(str, Enum):
    CHIRAL = "chiral"
    DIRAC = "dirac"
    MAJORANA = "majorana"


class Metric(str, Enum):
    MINKOWSKI = "minkowski"
    EUCLIDEAN = "euclidean"


MINKOWSKI_METRIC = np.diag([1.0, -1.0, -1.0, -1.0])


def blocks(a, b, c, d) -> np.ndarray:
    """Assemble a 4x4 matrix from four 2x2 blocks."""
    return np.block([[a, b], [c, d]]).astype(complex)


def max_norm(m) -> float:
    return float(np.max(np.abs(m))) if np.size(m) else 0.0


def commutator(a, b):
    return a @ b - b @ a


def anticommutator(a, b):
    return a @ b + b @ a


# ---------------------------------------------------------------- Wigner pair

class WignerPair(NamedTuple):
    theta: np.ndarray
    xi: np.ndarray
    phi: float


def wigner_theta() -> np.ndarray:
    """Spin-1/2 Wigner operator, -i sigma_2."""
    return np.array([[0, -1], [1, 0]], dtype=complex)


def wigner_xi(phi: float) -> np.ndarray:
    return np.diag([np.exp(1j * phi), np.exp(-1j * phi)])


def wigner_pair(phi: float = 0.0) -> WignerPair:
    return WignerPair(wigner_theta(), wigner_xi(phi), float(phi))


# ------------------------------------------------------------ representations

def majorana_unitary(normalize: bool = True) -> np.ndarray:
    """Chiral -> Majorana change of basis.

    Built literally from 2x2 blocks 1 -/+ i Theta with prefactor 1/2.  The
    printed prefactor already gives a unitary matrix; ``normalize`` only
    rescales by the common singular value if that ever stops being true.
    """
    th = wigner_theta()
    u = 0.5 * blocks(I2 - 1j * th, I2 + 1j * th, -I2 - 1j * th, I2 - 1j * th)
    if normalize:
        s = np.linalg.svd(u, compute_uv=False)
        if np.ptp(s) > CLOSE_TOL:
            raise ValueError("Majorana transform is not proportional to a unitary")
        u = u / s[0]
    return u


def dirac_unitary() -> np.ndarray:
    """Chiral -> Dirac-standard change of basis."""
    return blocks(I2, I2, I2, -I2) / np.sqrt(2.0)


def basis_change(rep: Representation | str) -> np.ndarray:
    rep = Representation(rep)
    if rep is Representation.CHIRAL:
        return I4.copy()
    if rep is Representation.DIRAC:
        return dirac_unitary()
    return majorana_unitary()


def _chiral_minkowski() -> list[np.ndarray]:
    g0 = blocks(_Z2, I2, I2, _Z2)
    return [g0] + [blocks(_Z2, -s, s, _Z2) for s in PAULI]


class GammaSet(NamedTuple):
    gammas: tuple[np.ndarray, ...]
    gamma5: np.ndarray
    rep: Representation
    metric: Metric


def build_gammas(rep: Representation | str = Representation.CHIRAL,
                 metric: Metric | str = Metric.MINKOWSKI) -> GammaSet:
    """Gamma matrices for a representation and metric (see module docstring)."""
    rep, metric = Representation(rep), Metric(metric)
    v = basis_change(rep)
    vinv = v.conj().T
    mink = [v @ g @ vinv for g in _chiral_minkowski()]
    g5 = 1j * mink[0] @ mink[1] @ mink[2] @ mink[3]
    if metric is Metric.MINKOWSKI:
        gs = tuple(mink)
    else:
        gs = tuple([-1j * mink[k] for k in (1, 2, 3)] + [mink[0]])
    return GammaSet(gs, g5, rep, metric)


def metric_tensor(metric: Metric | str) -> np.ndarray:
    if Metric(metric) is Metric.MINKOWSKI:
        return MINKOWSKI_METRIC.copy()
    return np.eye(4)


def clifford_residual(gs: GammaSet) -> float:
    g = metric_tensor(gs.metric)
    worst = 0.0
    for mu in range(4):
        for nu in range(4):
            r = anticommutator(gs.gammas[mu], gs.gammas[nu]) - 2 * g[mu, nu] * I4
            worst = max(worst, max_norm(r))
    return worst


def gamma5_residual(gs: GammaSet) -> float:
    """Anticommutation with every gamma plus gamma5^2 = 1."""
    worst = max_norm(gs.gamma5 @ gs.gamma5 - I4)
    for g in gs.gammas:
        worst = max(worst, max_norm(anticommutator(g, gs.gamma5)))
    return worst


def sigma_tensor(gs: GammaSet | tuple) -> np.ndarray:
    """sigma_{mu nu} = (i/2)[gamma_mu, gamma_nu] as a (4, 4, 4, 4) array.

    Indices follow the gamma set: upper for Minkowski, Euclidean labels
    (1, 2, 3, 4) -> (0, 1, 2, 3) otherwise.
    """
    gammas = gs.gammas if isinstance(gs, GammaSet) else gs
    out = np.zeros((4, 4, 4, 4), dtype=complex)
    for mu in range(4):
        for nu in range(4):
            out[mu, nu] = 0.5j * commutator(gammas[mu], gammas[nu])
    return out


def lower_sigma(sig: np.ndarray) -> np.ndarray:
    """Lower both Minkowski indices of sigma^{mu nu}."""
    g = np.diag(MINKOWSKI_METRIC)
    return sig * g[:, None, None, None] * g[None, :, None, None]


def slash(gs: GammaSet, p) -> np.ndarray:
    """gamma^mu p_mu for contravariant Minkowski components p = (p^0, p^1, p^2, p^3).

    In the Euclidean metric p is (p_1, p_2, p_3, p_4) and the contraction is
    plain gamma_mu p_mu.
    """
    p = np.asarray(p)
    if gs.metric is Metric.MINKOWSKI:
        lowered = p * np.diag(MINKOWSKI_METRIC)
        return np.einsum("m,mij->ij", lowered, np.array(gs.gammas))
    return np.einsum("m,mij->ij", p, np.array(gs.gammas))


# ------------------------------------------------------- charge conjugation

def charge_conjugation_chiral() -> np.ndarray:
    """Block form with off-diagonal blocks i Theta and -i Theta."""
    th = wigner_theta()
    return blocks(_Z2, 1j * th, -1j * th, _Z2)


def charge_conjugation_matrix(rep: Representation | str = Representation.CHIRAL) -> np.ndarray:
    """Matrix C with psi^c = C psi*.

    C is the matrix of an antilinear operator, so under psi -> V psi it goes
    to V C V^T rather than V C V^-1.  In the Majorana basis this gives -1.
    """
    v = basis_change(rep)
    return v @ charge_conjugation_chiral() @ v.T


def conjugation_identities(rep: Representation | str = Representation.CHIRAL) -> dict[str, float]:
    """Residuals of the candidate identities for C in a representation.

    Reported rather than asserted: only ``C gamma* C^-1 = -gamma`` is a
    convention-independent statement for this C.
    """
    gs = build_gammas(rep)
    c = charge_conjugation_matrix(rep)
    cinv = np.linalg.inv(c)
    out = {
        "C gamma* C^-1 = -gamma": max(max_norm(c @ g.conj() @ cinv + g) for g in gs.gammas),
        "C gamma C^-1 = -gamma^T": max(max_norm(c @ g @ cinv + g.T) for g in gs.gammas),
        "C^2 = -1": max_norm(c @ c + I4),
        "C^2 = +1": max_norm(c @ c - I4),
        "C C^dagger = 1": max_norm(c @ c.conj().T - I4),
    }
    return out


# --------------------------------------------------------- O(4,2) generators

def conformal_generator(gs: GammaSet, a: int, b: int) -> np.ndarray:
    """N_ab = (i/2) gamma_a gamma_b with gamma_a over (gamma_0..3, gamma5, i).

    Slot 5 is the scalar i*1, so N_a5 = (i/2) gamma_a (i 1) = -gamma_a / 2.
    """
    if a == b:
        raise ValueError("conformal generator needs a != b")
    labels = list(gs.gammas) + [gs.gamma5, 1j * I4]
    return 0.5j * labels[a] @ labels[b]


def conformal_generators(gs: GammaSet) -> dict[tuple[int, int], np.ndarray]:
    return {(a, b): conformal_generator(gs, a, b) for a, b in combinations(range(6), 2)}


def generator_rank(gens) -> int:
    mat = np.array([g.ravel() for g in gens])
    return int(np.linalg.matrix_rank(mat, tol=SOLVE_TOL))


def closure_residual(gens) -> float:
    """Worst least-squares residual of [N_i, N_j] expanded over {N} + identity."""
    gens = list(gens)
    basis = np.array([g.ravel() for g in gens] + [I4.ravel()]).T
    worst = 0.0
    for x, y in combinations(gens, 2):
        target = commutator(x, y).ravel()
        coef, *_ = np.linalg.lstsq(basis, target, rcond=None)
        worst = max(worst, float(np.max(np.abs(basis @ coef - target))))
    return worst


def is_unitary(m, tol: float = CLOSE_TOL) -> bool:
    m = np.asarray(m)
    return max_norm(m @ m.conj().T - np.eye(m.shape[0])) < tol


def is_hermitian(m, tol: float = CLOSE_TOL) -> bool:
    m = np.asarray(m)
    return max_norm(m - m.conj().T) < tol
