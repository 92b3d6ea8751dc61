"""Majorana basis, the real first-order split and its second-order recombination.

In the Majorana basis i gamma^mu is a real matrix, so the first-order
operators a i dslash/m -/+ b - 1 map real fields to real fields.  A real
solution of mass M is Re(w exp(-i p.x)) with w in the null space of the
momentum-space operator at p^2 = M^2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .algebra import (
    CLOSE_TOL,
    GammaSet,
    Representation,
    build_gammas,
    charge_conjugation_chiral,
    is_unitary,
    majorana_unitary,
    max_norm,
)
from .barut import BarutParams, second_order_operator
from .polyop import PolyOperator


def _require_unitary(u) -> np.ndarray:
    u = np.asarray(u, dtype=complex)
    if not is_unitary(u):
        raise ValueError("transform must be unitary")
    return u


def to_majorana(psi, u=None) -> np.ndarray:
    """Chiral-basis spinor(s) -> Majorana basis.  Accepts (..., 4) arrays."""
    u = _require_unitary(majorana_unitary() if u is None else u)
    return np.asarray(psi) @ u.T


def from_majorana(psi, u=None) -> np.ndarray:
    u = _require_unitary(majorana_unitary() if u is None else u)
    return np.asarray(psi) @ u.conj()


def transform_operator(op, u=None):
    """O -> U O U^-1 for a matrix or a PolyOperator."""
    u = _require_unitary(majorana_unitary() if u is None else u)
    if isinstance(op, PolyOperator):
        return op.conjugate_by(u)
    return u @ np.asarray(op) @ u.conj().T


def majorana_report(u=None) -> dict[str, float]:
    """Residuals of the basis-change statements for a candidate U.

    ``U C U^-1 = -C`` is the literal similarity statement; for the printed
    block family U commutes with C, so that residual is 2 max|C| rather than
    zero.  ``U C U^T = -1`` is the transformation law of the antilinear
    operator C K and does hold.
    """
    u = majorana_unitary() if u is None else np.asarray(u, dtype=complex)
    c = charge_conjugation_chiral()
    uinv = np.linalg.inv(u)
    gs = build_gammas(Representation.CHIRAL)
    transformed = [u @ g @ uinv for g in gs.gammas]
    return {
        "unitarity": max_norm(u @ u.conj().T - np.eye(4)),
        "U C U^-1 = -C": max_norm(u @ c @ uinv + c),
        "U C U^-1 = C": max_norm(u @ c @ uinv - c),
        "U C U^T = -1": max_norm(u @ c @ u.T + np.eye(4)),
        "max |Re gamma|": max(float(np.max(np.abs(g.real))) for g in transformed),
    }


# ------------------------------------------------------------ plane-wave fields

@dataclass
class PlaneWaveField:
    """Finite sum of w_j exp(-i p_j.x) with Minkowski p.x = p0 t - p.x."""
    waves: list[tuple[np.ndarray, np.ndarray]] = field(default_factory=list)

    def __add__(self, other: "PlaneWaveField") -> "PlaneWaveField":
        return PlaneWaveField(self.waves + other.waves)

    def __sub__(self, other: "PlaneWaveField") -> "PlaneWaveField":
        return PlaneWaveField(self.waves + [(-w, p) for w, p in other.waves])

    def scaled(self, c: complex) -> "PlaneWaveField":
        return PlaneWaveField([(c * w, p) for w, p in self.waves])

    def __call__(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        out = np.zeros(4, dtype=complex)
        for w, p in self.waves:
            phase = p[0] * x[0] - p[1:] @ x[1:]
            out += w * np.exp(-1j * phase)
        return out

    def apply(self, op: PolyOperator) -> "PlaneWaveField":
        return PlaneWaveField([(op(p) @ w, p) for w, p in self.waves])

    def norm(self) -> float:
        """Sum of amplitude norms; zero iff every component vanishes."""
        return float(sum(np.linalg.norm(w) for w, _ in self.waves))

    def realness(self, points) -> float:
        return max((float(np.max(np.abs(self(x).imag))) for x in points), default=0.0)


def real_plane_wave(w, p) -> PlaneWaveField:
    """Re(w exp(-i p.x)) = (w e^{-ipx} + w* e^{ipx}) / 2."""
    w = np.asarray(w, dtype=complex)
    p = np.asarray(p, dtype=float)
    return PlaneWaveField([(w / 2, p), (w.conj() / 2, -p)])


# ------------------------------------------------------------ split equations

def _majorana_gammas(gs: GammaSet | None) -> GammaSet:
    return gs if gs is not None else build_gammas(Representation.MAJORANA)


def split_equations(params: BarutParams, gs: GammaSet | None = None) -> tuple[PolyOperator, PolyOperator]:
    """Momentum-space a pslash/m - b - 1 and a pslash/m + b - 1."""
    gs = _majorana_gammas(gs)
    d = (params.a / params.m) * PolyOperator.slash(gs)
    return d - params.b - 1.0, d + params.b - 1.0


def split_masses(params: BarutParams) -> tuple[float, float]:
    return (abs(params.m * (1 + params.b) / params.a), abs(params.m * (1 - params.b) / params.a))


def position_coefficients(params: BarutParams, sign: int, gs: GammaSet | None = None) -> dict[str, np.ndarray]:
    """Coefficients of d_mu and of the constant in a i gamma^mu d_mu/m - sign*b - 1."""
    gs = _majorana_gammas(gs)
    out = {f"d{mu}": 1j * params.a / params.m * gs.gammas[mu] for mu in range(4)}
    out["const"] = (-sign * params.b - 1.0) * np.eye(4, dtype=complex)
    return out


def realness_residual(params: BarutParams, gs: GammaSet | None = None) -> float:
    """Largest imaginary part among the position-space coefficients of both split operators."""
    return max(float(np.max(np.abs(c.imag)))
               for sign in (1, -1) for c in position_coefficients(params, sign, gs).values())


def apply_to_real_wave(params: BarutParams, sign: int, wc, ws, p, x, gs: GammaSet | None = None) -> np.ndarray:
    """Apply a split operator to wc cos(p.x) + ws sin(p.x) with real wc, ws.

    Derivatives are taken analytically; the result is real exactly when the
    operator is real-linear.
    """
    coeffs = position_coefficients(params, sign, gs)
    wc, ws = np.asarray(wc, dtype=float), np.asarray(ws, dtype=float)
    p = np.asarray(p, dtype=float)
    x = np.asarray(x, dtype=float)
    g = np.array([1.0, -1.0, -1.0, -1.0])
    phase = p @ (g * x)
    c, s = math.cos(phase), math.sin(phase)
    val = wc * c + ws * s
    out = coeffs["const"] @ val
    for mu in range(4):
        dval = g[mu] * p[mu] * (-wc * s + ws * c)
        out = out + coeffs[f"d{mu}"] @ dval
    return out


def split_solution(params: BarutParams, which: int, pvec, rng=None, gs: GammaSet | None = None) -> PlaneWaveField:
    """Real plane-wave solution of the first (which=1) or second (which=2) split equation."""
    gs = _majorana_gammas(gs)
    ops = split_equations(params, gs)
    mass = split_masses(params)[which - 1]
    pvec = np.asarray(pvec, dtype=float)
    p = np.concatenate([[math.sqrt(pvec @ pvec + mass * mass)], pvec])
    _, s, vh = np.linalg.svd(ops[which - 1](p))
    null = vh[s < 1e-9 * s[0]].conj()
    if len(null) == 0:
        raise ValueError("no on-shell null vector found")
    rng = np.random.default_rng(rng)
    coef = rng.normal(size=len(null)) + 1j * rng.normal(size=len(null))
    return real_plane_wave(coef @ null, p)


@dataclass
class MajoranaSplit:
    psi1: PlaneWaveField
    psi2: PlaneWaveField

    @property
    def phi(self) -> PlaneWaveField:
        return self.psi1 + self.psi2

    @property
    def chi(self) -> PlaneWaveField:
        return self.psi1 - self.psi2


@dataclass(frozen=True)
class RecombineReport:
    phi_residual: float
    chi_residual: float
    psi1_residual: float
    psi2_residual: float

    @property
    def residual(self) -> float:
        return max(self.phi_residual, self.chi_residual)


def recombine(split: MajoranaSplit, params: BarutParams, gs: GammaSet | None = None) -> RecombineReport:
    """Residuals of the second-order equation on phi and chi.

    Also reports how well psi1 and psi2 solve their own first-order
    equations, so a failure can be traced to its input.
    """
    if params.b == 0:
        raise ValueError("recombination needs b != 0")
    gs = _majorana_gammas(gs)
    op = second_order_operator(params, gs)
    first, second = split_equations(params, gs)
    return RecombineReport(
        phi_residual=split.phi.apply(op).norm(),
        chi_residual=split.chi.apply(op).norm(),
        psi1_residual=split.psi1.apply(first).norm(),
        psi2_residual=split.psi2.apply(second).norm(),
    )


def is_real_field(f: PlaneWaveField, points, tol: float = CLOSE_TOL) -> bool:
    return f.realness(points) < tol
