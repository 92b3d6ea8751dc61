"""Second-order operator with minimal coupling, its free Lagrangian and currents.

Test functions are polynomials times one plane wave,

    psi(x) = sum_alpha c_alpha x^alpha exp(-i p.x),

with x^alpha a monomial in the contravariant coordinates.  Derivatives and
multiplication by linear potentials keep this form, so every operator
identity becomes a finite comparison of coefficient vectors.

Supported potentials (lower index): A_mu(x) = c_mu - F_mu_nu x^nu / 2, which
covers A = 0, constant A (F = 0) and constant field strength.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import NamedTuple

import numpy as np

from .algebra import (
    MINKOWSKI_METRIC,
    GammaSet,
    Representation,
    build_gammas,
    commutator,
    max_norm,
    sigma_tensor,
)
from .barut import CanonicalParams, barut_operator
from .polyop import PolyOperator

G = np.diag(MINKOWSKI_METRIC)
Exp = tuple[int, int, int, int]


def _unit(mu: int) -> Exp:
    e = [0, 0, 0, 0]
    e[mu] = 1
    return tuple(e)


# ------------------------------------------------------------ test functions

@dataclass
class PolyWave:
    """sum_alpha coeffs[alpha] x^alpha exp(-i p.x); p contravariant."""
    p: np.ndarray
    coeffs: dict[Exp, np.ndarray] = field(default_factory=dict)

    def __post_init__(self):
        self.p = np.asarray(self.p, dtype=float)
        self.coeffs = {tuple(k): np.asarray(v, dtype=complex) for k, v in self.coeffs.items()}

    @classmethod
    def monomial(cls, p, alpha: Exp, spinor) -> "PolyWave":
        return cls(p, {tuple(alpha): np.asarray(spinor, dtype=complex)})

    def _same_wave(self, other: "PolyWave"):
        if not np.array_equal(self.p, other.p):
            raise ValueError("test functions carry different plane waves")

    def __add__(self, other: "PolyWave") -> "PolyWave":
        self._same_wave(other)
        out = {k: v.copy() for k, v in self.coeffs.items()}
        for k, v in other.coeffs.items():
            out[k] = out.get(k, 0) + v
        return PolyWave(self.p, out)

    def __neg__(self) -> "PolyWave":
        return PolyWave(self.p, {k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other: "PolyWave") -> "PolyWave":
        return self + (-other)

    def scale(self, c: complex) -> "PolyWave":
        return PolyWave(self.p, {k: c * v for k, v in self.coeffs.items()})

    def left(self, mat) -> "PolyWave":
        mat = np.asarray(mat)
        return PolyWave(self.p, {k: mat @ v for k, v in self.coeffs.items()})

    def times_x(self, nu: int) -> "PolyWave":
        out = {}
        for k, v in self.coeffs.items():
            kk = tuple(a + b for a, b in zip(k, _unit(nu)))
            out[kk] = out.get(kk, 0) + v
        return PolyWave(self.p, out)

    def d(self, mu: int) -> "PolyWave":
        """Partial derivative with respect to x^mu."""
        p_low = G[mu] * self.p[mu]
        out: dict[Exp, np.ndarray] = {}
        for k, v in self.coeffs.items():
            out[k] = out.get(k, 0) + (-1j * p_low) * v
            if k[mu]:
                kk = tuple(a - b for a, b in zip(k, _unit(mu)))
                out[kk] = out.get(kk, 0) + k[mu] * v
        return PolyWave(self.p, out)

    def __call__(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        phase = np.exp(-1j * (self.p * G) @ x)
        out = np.zeros(4, dtype=complex)
        for k, v in self.coeffs.items():
            out += np.prod(x ** np.array(k)) * v
        return out * phase

    def distance(self, other: "PolyWave") -> float:
        self._same_wave(other)
        keys = set(self.coeffs) | set(other.coeffs)
        zero = np.zeros(4)
        return max((max_norm(self.coeffs.get(k, zero) - other.coeffs.get(k, zero)) for k in keys), default=0.0)

    def norm(self) -> float:
        return max((max_norm(v) for v in self.coeffs.values()), default=0.0)


def monomial_basis(max_degree: int = 2) -> list[Exp]:
    return [e for e in product(range(max_degree + 1), repeat=4) if sum(e) <= max_degree]


def function_basis(momenta, max_degree: int = 2) -> list[PolyWave]:
    """x^alpha e_i exp(-i p.x) for |alpha| <= max_degree, i = 0..3 and each momentum."""
    out = []
    for p in momenta:
        for alpha in monomial_basis(max_degree):
            for i in range(4):
                out.append(PolyWave.monomial(p, alpha, np.eye(4)[i]))
    return out


DEFAULT_MOMENTA = ((1.3, 0.2, -0.5, 0.7), (0.9, -0.4, 0.1, 0.3))


# ------------------------------------------------------------ fields

FAMILIES = ("zero", "constant", "constant_f")


@dataclass(frozen=True)
class EMField:
    family: str = "zero"
    c: tuple[float, float, float, float] = (0.0, 0.0, 0.0, 0.0)
    F: np.ndarray = field(default_factory=lambda: np.zeros((4, 4)))
    e: float = 1.0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unsupported field family {self.family!r}; choose from {FAMILIES}")
        f = np.asarray(self.F, dtype=float)
        if f.shape != (4, 4) or max_norm(f + f.T) > 0:
            raise ValueError("F must be an antisymmetric 4x4 array")
        object.__setattr__(self, "F", f)
        object.__setattr__(self, "c", tuple(float(x) for x in self.c))
        if self.family == "zero" and (any(self.c) or f.any()):
            raise ValueError("family 'zero' takes no potential")
        if self.family == "constant" and f.any():
            raise ValueError("family 'constant' has F = 0")

    @classmethod
    def constant_field(cls, F, c=(0.0, 0.0, 0.0, 0.0), e: float = 1.0) -> "EMField":
        return cls("constant_f", tuple(c), np.asarray(F, dtype=float), e)

    @classmethod
    def magnetic(cls, B: float, e: float = 1.0) -> "EMField":
        """Constant F_12 = B (and F_21 = -B)."""
        f = np.zeros((4, 4))
        f[1, 2], f[2, 1] = B, -B
        return cls.constant_field(f, e=e)

    def potential(self, x) -> np.ndarray:
        return np.asarray(self.c) - 0.5 * self.F @ np.asarray(x, dtype=float)

    def field_strength_residual(self, x, h: float = 1e-4) -> float:
        """|d_mu A_nu - d_nu A_mu - F_mu_nu| by central differences (exact for linear A)."""
        grad = np.zeros((4, 4))
        for mu in range(4):
            dx = np.zeros(4)
            dx[mu] = h
            grad[mu] = (self.potential(np.asarray(x) + dx) - self.potential(np.asarray(x) - dx)) / (2 * h)
        return max_norm(grad - grad.T - self.F)


def _gs(gs: GammaSet | None) -> GammaSet:
    return gs if gs is not None else build_gammas(Representation.CHIRAL)


def covariant(field_: EMField, psi: PolyWave, mu: int) -> PolyWave:
    """(i d_mu - e A_mu) psi with lower index mu."""
    out = psi.d(mu).scale(1j) - psi.scale(field_.e * field_.c[mu])
    for nu in range(4):
        if field_.F[mu, nu]:
            out = out + psi.times_x(nu).scale(0.5 * field_.e * field_.F[mu, nu])
    return out


def covariant_slash(field_: EMField, psi: PolyWave, gs: GammaSet | None = None) -> PolyWave:
    gs = _gs(gs)
    out = PolyWave(psi.p)
    for mu in range(4):
        out = out + covariant(field_, psi, mu).left(gs.gammas[mu])
    return out


def covariant_square(field_: EMField, psi: PolyWave) -> PolyWave:
    """(i d_mu - e A_mu)(i d^mu - e A^mu) psi."""
    out = PolyWave(psi.p)
    for mu in range(4):
        out = out + covariant(field_, covariant(field_, psi, mu), mu).scale(G[mu])
    return out


def sigma_f(field_: EMField, gs: GammaSet | None = None) -> np.ndarray:
    """sigma^{mu nu} F_mu_nu."""
    gs = _gs(gs)
    return np.einsum("mnij,mn->ij", sigma_tensor(gs), field_.F)


def fgm_apply(field_: EMField, m: float, psi: PolyWave, gs: GammaSet | None = None) -> PolyWave:
    """[(i d - e A)^2 - (e/2) sigma^{mu nu} F_mu_nu - m^2] psi."""
    return covariant_square(field_, psi) - psi.left(0.5 * field_.e * sigma_f(field_, gs)) - psi.scale(m * m)


def squared_dirac_identity(field_: EMField, basis=None, gs: GammaSet | None = None) -> float:
    """Worst coefficient mismatch of the two forms of the squared operator over ``basis``."""
    basis = function_basis(DEFAULT_MOMENTA) if basis is None else basis
    worst = 0.0
    for psi in basis:
        lhs = covariant_slash(field_, covariant_slash(field_, psi, gs), gs)
        rhs = covariant_square(field_, psi) - psi.left(0.5 * field_.e * sigma_f(field_, gs))
        worst = max(worst, lhs.distance(rhs))
    return worst


def symbolic_squared_dirac(field_: EMField, alpha: Exp, spinor, p, points) -> float:
    """Independent oracle: expand (i dslash - e Aslash)^2 psi with sympy and compare pointwise.

    Returns the largest deviation from the PolyWave result at ``points``.
    """
    import sympy as sp

    xs = sp.symbols("x0:4", real=True)
    gs = build_gammas(Representation.CHIRAL)
    gam = [sp.Matrix(g.tolist()).applyfunc(sp.nsimplify) for g in gs.gammas]
    g = [1, -1, -1, -1]
    pl = [sp.nsimplify(g[mu] * p[mu]) for mu in range(4)]
    wave = sp.exp(-sp.I * sum(pl[mu] * xs[mu] for mu in range(4)))
    mono = sp.Mul(*[xs[mu] ** alpha[mu] for mu in range(4)])
    psi = sp.Matrix([sp.nsimplify(complex(s).real) + sp.I * sp.nsimplify(complex(s).imag) for s in spinor]) \
        * mono * wave
    e = sp.nsimplify(field_.e)
    a_low = [sp.nsimplify(field_.c[mu]) - sp.Rational(1, 2) * sum(
        sp.nsimplify(field_.F[mu, nu]) * xs[nu] for nu in range(4)) for mu in range(4)]

    def dslash(v):
        out = sp.zeros(4, 1)
        for mu in range(4):
            out += gam[mu] * (sp.I * v.diff(xs[mu]) - e * a_low[mu] * v)
        return out

    expr = dslash(dslash(psi))
    fn = sp.lambdify(xs, expr, "numpy")
    pw = PolyWave.monomial(p, alpha, spinor)
    target = covariant_slash(field_, covariant_slash(field_, pw))
    worst = 0.0
    for x in points:
        val = np.asarray(fn(*x), dtype=complex).reshape(4)
        worst = max(worst, float(np.max(np.abs(val - target(x)))))
    return worst


# ------------------------------------------------------------ gamma5 structure

@dataclass
class Gamma5Report:
    commutator: float
    projected_residual: float
    matrix_terms: int


def fgm_matrix_terms(field_: EMField, m: float, gs: GammaSet | None = None) -> list[np.ndarray]:
    """Distinct matrix structures in the operator: the identity and sigma F."""
    return [np.eye(4, dtype=complex), 0.5 * field_.e * sigma_f(field_, gs)]


def free_fgm_operator(m: float, gs: GammaSet | None = None) -> PolyOperator:
    """Momentum-space free operator p^2 - m^2 (pslash pslash - m^2)."""
    ps = PolyOperator.slash(_gs(gs))
    return ps @ ps - m * m


def gamma5_structure(field_: EMField, m: float, basis=None, gs: GammaSet | None = None) -> Gamma5Report:
    """Commutation of the operator with gamma5 and chiral projection of solutions.

    ``projected_residual`` is the worst |Op(P psi) - P Op(psi)| over the basis
    for both chiral projectors, so projected solutions remain solutions.
    """
    gs = _gs(gs)
    g5 = gs.gamma5
    comm = max(max_norm(commutator(t, g5)) for t in fgm_matrix_terms(field_, m, gs))
    if field_.family != "constant_f":
        free = free_fgm_operator(m, gs)
        comm = max(comm, free.distance(free.conjugate_by(g5)))
    basis = function_basis(DEFAULT_MOMENTA[:1], 1) if basis is None else basis
    worst = 0.0
    for proj in ((np.eye(4) + g5) / 2, (np.eye(4) - g5) / 2):
        for psi in basis:
            a = fgm_apply(field_, m, psi.left(proj), gs)
            b = fgm_apply(field_, m, psi, gs).left(proj)
            worst = max(worst, a.distance(b))
    return Gamma5Report(comm, worst, 2)


# ------------------------------------------------------------ free Lagrangian

def free_fgm_lagrangian(psi: PolyWave, m: float, x, gs: GammaSet | None = None) -> complex:
    """bar(i dslash psi)(i dslash psi) - m^2 psibar psi at x."""
    gs = _gs(gs)
    g0 = gs.gammas[0]
    chi = PolyWave(psi.p)
    for mu in range(4):
        chi = chi + psi.d(mu).scale(1j).left(gs.gammas[mu])
    cv, pv = chi(x), psi(x)
    return complex(cv.conj() @ g0 @ cv - m * m * (pv.conj() @ g0 @ pv))


# ------------------------------------------------------------ decomposition

class SlashPolynomial(NamedTuple):
    """c0 + c1 pslash + c2 p^2 + c5 gamma5 with exact rational coefficients."""
    const: Fraction
    slash: Fraction
    psq: Fraction
    gamma5: Fraction = Fraction(0)

    def __sub__(self, other):
        return SlashPolynomial(*(a - b for a, b in zip(self, other)))

    def scale(self, c: Fraction):
        return SlashPolynomial(*(c * a for a in self))

    def to_operator(self, gs: GammaSet | None = None) -> PolyOperator:
        gs = _gs(gs)
        return (float(self.slash) * PolyOperator.slash(gs) + float(self.psq) * PolyOperator.p_squared()
                + PolyOperator.constant(float(self.const) * np.eye(4) + float(self.gamma5) * gs.gamma5))


@dataclass
class Decomposition:
    lambda1: Fraction
    lambda2: Fraction
    kappa_d: Fraction
    dirac_part: SlashPolynomial
    fgm_part: SlashPolynomial
    residual: Fraction

    def as_dict(self) -> dict:
        return {"lambda1": float(self.lambda1), "lambda2": float(self.lambda2),
                "kappa_dirac": float(self.kappa_d), "residual": float(self.residual)}


def barut_polynomial(canon: CanonicalParams) -> SlashPolynomial:
    """pslash - alpha2 p^2 - kappa as exact coefficients."""
    return SlashPolynomial(-Fraction(canon.kappa), Fraction(1), -Fraction(canon.alpha2))


def decompose(target: SlashPolynomial, m: float) -> Decomposition:
    """target = lambda1 (pslash - kappa_D) + lambda2 (p^2 - m^2)/m, solved exactly.

    Anything outside that span (a gamma5 term) is left in the residual.
    """
    mm = Fraction(m)
    lam1 = target.slash
    lam2 = target.psq * mm
    fgm = SlashPolynomial(-mm, Fraction(0), 1 / mm)
    if lam1 != 0:
        kappa_d = -(target.const - lam2 * fgm.const) / lam1
    else:
        kappa_d = Fraction(0)
    dirac = SlashPolynomial(-kappa_d, Fraction(1), Fraction(0))
    rest = target - dirac.scale(lam1) - fgm.scale(lam2)
    return Decomposition(lam1, lam2, kappa_d, dirac, fgm, max(abs(c) for c in rest))


def barut_decomposition(canon: CanonicalParams, m: float) -> Decomposition:
    """Barut operator as Dirac part plus free second-order part; lambda1 = 1, lambda2 = -alpha2 m."""
    return decompose(barut_polynomial(canon), m)


def decomposition_operator_residual(canon: CanonicalParams, m: float, gs: GammaSet | None = None) -> float:
    """Floating-point check of the same identity on matrix polynomials."""
    dec = barut_decomposition(canon, m)
    rebuilt = float(dec.lambda1) * dec.dirac_part.to_operator(gs) + float(dec.lambda2) * dec.fgm_part.to_operator(gs)
    return barut_operator(canon, gs).distance(rebuilt)


# ------------------------------------------------------------ general current

@dataclass(frozen=True)
class GeneralCurrentParams:
    alpha1: complex = 1.0
    alpha2: complex = 0.0
    alpha3: complex = 0.0


def general_current(params: GeneralCurrentParams, p_in, p_out, u_in, u_out, gs: GammaSet | None = None) -> np.ndarray:
    """J^mu = a1 ubar' g^mu u + a2 P^mu ubar' u + a3 ubar' sigma^{mu nu} q_nu u.

    P = p_in + p_out and q = p_out - p_in, both contravariant.
    """
    gs = _gs(gs)
    p_in, p_out = np.asarray(p_in, dtype=float), np.asarray(p_out, dtype=float)
    big_p = p_in + p_out
    q_low = (p_out - p_in) * G
    ubar = np.asarray(u_out).conj() @ gs.gammas[0]
    u = np.asarray(u_in)
    sig = sigma_tensor(gs)
    out = np.zeros(4, dtype=complex)
    for mu in range(4):
        out[mu] = (params.alpha1 * ubar @ gs.gammas[mu] @ u
                   + params.alpha2 * big_p[mu] * (ubar @ u)
                   + params.alpha3 * ubar @ np.einsum("nij,n->ij", sig[mu], q_low) @ u)
    return out


def gordon_params(m: float) -> GeneralCurrentParams:
    """Weights reproducing ubar' gamma^mu u for on-shell Dirac spinors of mass m."""
    return GeneralCurrentParams(0.0, 1 / (2 * m), 1j / (2 * m))


def continuity(current: np.ndarray, q) -> complex:
    """q_mu J^mu."""
    return complex(np.asarray(q) * G @ current)
