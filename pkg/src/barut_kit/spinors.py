"""Rest-frame relations, boosts and helicity 4-spinors in the chiral basis.

Two-spinor basis (theta, phi are the polar and azimuthal angles of p):

    xi_+ = ( e^{-i phi/2} cos(theta/2),  e^{i phi/2} sin(theta/2))
    xi_- = ( e^{-i phi/2} sin(theta/2), -e^{i phi/2} cos(theta/2))

These phases give Xi^-1 xi_h* = xi_h and Theta xi_{-h}* = (-1)^{1/2-h} xi_h,
so the a-term of the rest relation maps phi_R^{-h} onto +phi_R^h and the
case a = 1, b = 0 reproduces phi_L(0) = phi_R(0).  At p = 0 the angles are
taken as theta = phi = 0.

With phi_R^h = r_h xi_h and phi_L^h = l_h xi_h the boosted relations become
a real 4x4 linear system for (r_+, r_-, l_+, l_-):

    l_h = a (p0 - 2h|p|)/m r_h - b r_{-h}
    r_h = a (p0 + 2h|p|)/m l_h - b l_{-h}
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .algebra import (
    I2,
    PAULI,
    build_gammas,
    charge_conjugation_chiral,
    max_norm,
    slash,
    wigner_theta,
    wigner_xi,
)

HELICITIES = (0.5, -0.5)
SOLVE_TOL = 1e-10

_GS = build_gammas("chiral")
_G0 = _GS.gammas[0]
_C = charge_conjugation_chiral()


def _check_h(h: float) -> float:
    if h not in HELICITIES:
        raise ValueError(f"helicity must be +1/2 or -1/2, got {h!r}")
    return float(h)


def sign_power(exponent: float) -> int:
    """(-1)^k for integer-valued k."""
    k = round(exponent)
    if abs(k - exponent) > 1e-12:
        raise ValueError(f"non-integer exponent {exponent}")
    return -1 if k % 2 else 1


def four_momentum(pvec, m: float) -> np.ndarray:
    """(E, px, py, pz) on shell."""
    if not m > 0:
        raise ValueError("mass must be positive")
    pvec = np.asarray(pvec, dtype=float).reshape(3)
    return np.concatenate([[math.sqrt(float(pvec @ pvec) + m * m)], pvec])


def angles(pvec) -> tuple[float, float]:
    """(theta, phi) of a 3-vector, zero at the origin."""
    px, py, pz = (float(x) for x in pvec)
    if px == py == pz == 0:
        return 0.0, 0.0
    # atan2 keeps full precision near the poles, where acos(pz/r) rounds to 0 or pi
    return math.atan2(math.hypot(px, py), pz), math.atan2(py, px)


def helicity_basis(pvec, h: float) -> np.ndarray:
    """Two-spinor with sigma.p_hat xi = 2h xi."""
    h = _check_h(h)
    theta, phi = angles(pvec)
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    em, ep = np.exp(-0.5j * phi), np.exp(0.5j * phi)
    if h > 0:
        return np.array([em * c, ep * s])
    return np.array([em * s, -ep * c])


def sigma_dot(v) -> np.ndarray:
    return sum(float(x) * s for x, s in zip(v, PAULI))


# ------------------------------------------------------------------ boosts

@dataclass(frozen=True)
class BoostPair:
    lambda_r: np.ndarray
    lambda_l: np.ndarray


def boost_pair(pvec, m: float) -> BoostPair:
    """Lambda_{R,L} = exp(+/- sigma.phi/2) for a boost to 3-momentum ``pvec``.

    Uses the closed form (E + m +/- sigma.p) / sqrt(2m(E + m)), which has no
    cancellation as |p| -> 0 and returns the identity exactly at p = 0.
    """
    if not m > 0:
        raise ValueError("mass must be positive")
    e = four_momentum(pvec, m)[0]
    sp = sigma_dot(pvec)
    norm = math.sqrt(2 * m * (e + m))
    return BoostPair(((e + m) * I2 + sp) / norm, ((e + m) * I2 - sp) / norm)


# ------------------------------------------------------------ rest relation

@dataclass(frozen=True)
class RestRelationParams:
    a: complex = 1.0
    b: complex = 0.0
    theta1: float = 0.0
    theta2: float = 0.0
    phi: float = 0.0

    def theta_h(self, h: float) -> float:
        return self.theta1 if _check_h(h) > 0 else self.theta2


def rest_relation(params: RestRelationParams, phi_r_h, phi_r_minus_h, h: float) -> np.ndarray:
    """phi_L^h(0) from the right-handed rest spinors of both helicities.

    a (-1)^{1/2-h} e^{i(theta1+theta2)} Theta [phi_R^{-h}]* + b e^{2i theta_h} Xi^-1 [phi_R^h]*
    """
    h = _check_h(h)
    phi_r_h = np.asarray(phi_r_h, dtype=complex)
    phi_r_minus_h = np.asarray(phi_r_minus_h, dtype=complex)
    th = wigner_theta()
    xi_inv = np.linalg.inv(wigner_xi(params.phi))
    first = params.a * sign_power(0.5 - h) * np.exp(1j * (params.theta1 + params.theta2)) \
        * (th @ phi_r_minus_h.conj())
    second = params.b * np.exp(2j * params.theta_h(h)) * (xi_inv @ phi_r_h.conj())
    return first + second


# ---------------------------------------------------------------- 4-spinors

@dataclass(frozen=True)
class SpinorState:
    components: np.ndarray
    momentum: np.ndarray
    h: float
    kind: str = "u"
    mass: float = 1.0
    amplitudes: tuple[float, float] = field(default=(0.0, 0.0), compare=False)

    @property
    def phi_r(self) -> np.ndarray:
        return self.components[:2]

    @property
    def phi_l(self) -> np.ndarray:
        return self.components[2:]

    def bar(self) -> np.ndarray:
        return self.components.conj() @ _G0


def bilinear(left: SpinorState | np.ndarray, mat, right: SpinorState | np.ndarray) -> complex:
    """psibar_left M psi_right."""
    lv = left.components if isinstance(left, SpinorState) else np.asarray(left)
    rv = right.components if isinstance(right, SpinorState) else np.asarray(right)
    return complex(lv.conj() @ _G0 @ np.asarray(mat) @ rv)


def helicity_system(p0: float, k: float, a: float, b: float, m: float) -> np.ndarray:
    """Real matrix of the boosted relations acting on (r_+, r_-, l_+, l_-)."""
    out = np.zeros((4, 4))
    for i, h in enumerate(HELICITIES):
        j = 1 - i
        out[i, 2 + i] = 1.0
        out[i, i] = -a * (p0 - 2 * h * k) / m
        out[i, j] = b
        out[2 + i, i] = 1.0
        out[2 + i, 2 + i] = -a * (p0 + 2 * h * k) / m
        out[2 + i, 2 + j] = b
    return out


def dispersion_determinant(p0: float, k: float, a: float, b: float, m: float) -> float:
    return float(np.linalg.det(helicity_system(p0, k, a, b, m)))


def _assemble(r: float, l: float, pvec, h: float) -> np.ndarray:
    xi = helicity_basis(pvec, h)
    return np.concatenate([r * xi, l * xi]).astype(complex)


def build_u_pair(pvec, a: float, b: float, m: float) -> dict[float, SpinorState]:
    """Both helicity u-spinors at p0 = E(m), scaled together.

    For b != 0 the boosted relations couple the two helicities and have a
    one-dimensional real solution space; the pair is scaled by one common
    factor so that ubar_h u_h = 1 (the two products r_h l_h coincide).
    For b = 0 each helicity is solved on its own.
    """
    if not m > 0:
        raise ValueError("mass must be positive")
    p = four_momentum(pvec, m)
    k = float(np.linalg.norm(p[1:]))
    mat = helicity_system(p[0], k, a, b, m)
    _, s, vt = np.linalg.svd(mat)
    if s[-1] > SOLVE_TOL * max(1.0, s[0]):
        raise ValueError(
            f"parameters (a={a}, b={b}) admit no solution at mass {m}: "
            f"relative residual {s[-1] / s[0]:.3e}")
    out = {}
    if b == 0:
        for i, h in enumerate(HELICITIES):
            sub = mat[np.ix_([i, 2 + i], [i, 2 + i])]
            _, _, svt = np.linalg.svd(sub)
            r, l = svt[-1]
            out[h] = _normalized(r, l, p, h, m)
        return out
    vec = vt[-1]
    prods = [vec[0] * vec[2], vec[1] * vec[3]]
    if min(prods) <= 0 or abs(prods[0] - prods[1]) > SOLVE_TOL * max(prods):
        raise ValueError("coupled solution cannot be normalized to ubar u = 1")
    scale = math.sqrt(2 * prods[0])
    if vec[0] < 0:
        scale = -scale
    vec = vec / scale
    for i, h in enumerate(HELICITIES):
        out[h] = SpinorState(_assemble(vec[i], vec[2 + i], p[1:], h), p, h, "u", m,
                             (float(vec[i]), float(vec[2 + i])))
    return out


def _normalized(r: float, l: float, p, h: float, m: float) -> SpinorState:
    prod = r * l
    if prod <= 0:
        raise ValueError("solution cannot be normalized to ubar u = 1")
    scale = math.sqrt(2 * prod) * (1 if r > 0 else -1)
    r, l = r / scale, l / scale
    return SpinorState(_assemble(r, l, p[1:], h), p, h, "u", m, (float(r), float(l)))


def build_u_spinor(pvec, h: float, a: float = 1.0, b: float = 0.0, m: float = 1.0) -> SpinorState:
    """u_h(p) solving the boosted relations with ubar u = 1."""
    return build_u_pair(pvec, a, b, m)[_check_h(h)]


def dirac_u(pvec, h: float, m: float = 1.0) -> SpinorState:
    return build_u_spinor(pvec, h, 1.0, 0.0, m)


def v_from_u(u: SpinorState) -> SpinorState:
    """v_h = C u_h*, so that vbar v = -ubar u."""
    return SpinorState(_C @ u.components.conj(), u.momentum, u.h, "v", u.mass, u.amplitudes)


def dirac_v(pvec, h: float, m: float = 1.0) -> SpinorState:
    return v_from_u(dirac_u(pvec, h, m))


def eq7_residual(u_h: SpinorState, u_minus_h: SpinorState, a: float, b: float, m: float) -> float:
    """|| [a pslash/m - 1] u_h + i b (-1)^{1/2-h} g5 C u_{-h}* ||."""
    if max_norm(np.asarray(u_h.momentum) - np.asarray(u_minus_h.momentum)) > 1e-14:
        raise ValueError("spinors must share one momentum")
    if u_h.h != -u_minus_h.h:
        raise ValueError("spinors must carry opposite helicities")
    lhs = (a / m * slash(_GS, u_h.momentum) - np.eye(4)) @ u_h.components
    lhs = lhs + 1j * b * sign_power(0.5 - u_h.h) * (_GS.gamma5 @ _C @ u_minus_h.components.conj())
    return float(np.linalg.norm(lhs))


def normalization_check(states: list[SpinorState]) -> np.ndarray:
    """Gram matrix of psibar_i psi_j."""
    if states:
        p0 = np.asarray(states[0].momentum)
        for s in states[1:]:
            if max_norm(np.asarray(s.momentum) - p0) > 1e-14:
                raise ValueError("states must share one momentum")
    return np.array([[bilinear(x, np.eye(4), y) for y in states] for x in states])


def spinor_table(momenta, a: float = 1.0, b: float = 0.0, m: float = 1.0) -> list[dict]:
    """Rows of (p, h, kind, 8 real components) for tabular export."""
    rows = []
    for pvec in momenta:
        pair = build_u_pair(pvec, a, b, m)
        for h in HELICITIES:
            for st in (pair[h], v_from_u(pair[h])):
                rows.append({"p": [float(x) for x in st.momentum], "h": h, "kind": st.kind,
                             "components": [c for z in st.components for c in (z.real, z.imag)]})
    return rows
