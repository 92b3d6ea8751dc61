"""Second- and third-order Barut operators, their spectra and the lepton masses.

Momentum-space convention: plane waves exp(-i p.x) in the Minkowski metric,
so i d_mu -> p_mu and d_mu d^mu -> -p^2.  Under this rule the real-field
superposition equation becomes

    2a pslash/m - a^2 p^2/m^2 + b^2 - 1 = -(a pslash/m - (1+b)) (a pslash/m - (1-b))

and dividing by 2a/m gives the canonical form pslash - alpha2 p^2 - kappa
with alpha2 = a/2m and kappa = (1 - b^2) m / 2a.  That fixes the sign of
kappa so the Dirac limit (alpha2 = 0, kappa = m) and the two-mass spectrum
m(1 +/- b)/a hold together.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .algebra import GammaSet, Representation, build_gammas, max_norm
from .polyop import (
    PolyOperator,
    companion_eigenvalues,
    null_dimension,
    smallest_singular_ratio,
)

ROOT_TOL = 1e-10


@dataclass(frozen=True)
class BarutParams:
    a: float
    b: float = 0.0
    m: float = 1.0
    b1: float = 0.0
    b2: float = 0.0

    def __post_init__(self):
        if self.a == 0:
            raise ValueError("coupling a must be nonzero")
        if not self.m > 0:
            raise ValueError("reference mass m must be positive")


@dataclass(frozen=True)
class CanonicalParams:
    alpha2: float
    kappa: float


@dataclass(frozen=True)
class MassState:
    mass: float
    multiplicity: int
    branch: str
    warning: str | None = None

    def as_dict(self) -> dict:
        out = {"mass": self.mass, "multiplicity": self.multiplicity, "branch": self.branch}
        if self.warning:
            out["warning"] = self.warning
        return out


def _gammas(gs: GammaSet | None) -> GammaSet:
    return gs if gs is not None else build_gammas(Representation.CHIRAL)


# ------------------------------------------------------------ parameter maps

def param_map(params: BarutParams) -> CanonicalParams:
    """(a, b, m) -> (alpha2, kappa) = (a/2m, (1 - b^2) m / 2a)."""
    a, b, m = params.a, params.b, params.m
    return CanonicalParams(alpha2=a / (2 * m), kappa=(1 - b * b) * m / (2 * a))


def inverse_param_map(canon: CanonicalParams, m: float) -> BarutParams:
    """Inverse of :func:`param_map` at fixed m, on the b >= 0 branch."""
    if canon.alpha2 == 0:
        raise ValueError("alpha2 = 0 corresponds to a = 0, outside the two-parameter family")
    a = 2 * m * canon.alpha2
    b_sq = 1 - 2 * a * canon.kappa / m
    if -1e-12 < b_sq < 0:  # rounding at the Dirac point
        b_sq = 0.0
    if b_sq < 0:
        raise ValueError("no real b for these canonical parameters")
    return BarutParams(a=a, b=math.sqrt(b_sq), m=m)


# ------------------------------------------------------------ operators

def barut_operator(canon: CanonicalParams, gs: GammaSet | None = None) -> PolyOperator:
    """pslash - alpha2 p^2 - kappa."""
    gs = _gammas(gs)
    return PolyOperator.slash(gs) - canon.alpha2 * PolyOperator.p_squared() - canon.kappa


def dirac_factor(params: BarutParams, gs: GammaSet | None = None) -> PolyOperator:
    """a pslash/m - 1, the first-order building block of the real-form equations."""
    gs = _gammas(gs)
    return (params.a / params.m) * PolyOperator.slash(gs) - 1.0


def second_order_operator(params: BarutParams, gs: GammaSet | None = None) -> PolyOperator:
    """2a pslash/m - a^2 p^2/m^2 + b^2 - 1."""
    gs = _gammas(gs)
    a, b, m = params.a, params.b, params.m
    return (2 * a / m) * PolyOperator.slash(gs) - (a * a / (m * m)) * PolyOperator.p_squared() + (b * b - 1)


def factorized_second_order(params: BarutParams, gs: GammaSet | None = None) -> PolyOperator:
    """(a pslash/m - (1+b)) (a pslash/m - (1-b)); equals minus the second-order operator."""
    d = dirac_factor(params, gs) + 1.0
    return (d - (1 + params.b)) @ (d - (1 - params.b))


# ------------------------------------------------------------ spectra

def _merge(states: list[MassState], rel_tol: float = 1e-9) -> list[MassState]:
    out: list[MassState] = []
    for s in sorted(states, key=lambda s: s.mass):
        if out and abs(out[-1].mass - s.mass) <= rel_tol * max(1.0, abs(s.mass)):
            last = out[-1]
            branch = last.branch if s.branch == last.branch else f"{last.branch},{s.branch}"
            out[-1] = MassState(last.mass, last.multiplicity + s.multiplicity, branch,
                                last.warning or s.warning)
        else:
            out.append(s)
    return out


def _state(mass: float, mult: int, branch: str) -> MassState:
    warn = "massless root" if abs(mass) < 1e-12 else None
    return MassState(abs(mass), mult, branch, warn)


def second_order_spectrum(params: BarutParams) -> list[MassState]:
    """Closed form {m(1+b)/a, m(1-b)/a}, four solutions per mass.

    Degenerate masses are merged and their multiplicities added, so the
    Dirac point b = 0 reports a single mass with multiplicity 8.
    """
    a, b, m = params.a, params.b, params.m
    states = [_state(m * (1 + b) / a, 4, "+"), _state(m * (1 - b) / a, 4, "-")]
    return _merge(states)


def rest_frame_roots(op: PolyOperator) -> np.ndarray:
    """Finite roots mu of det op(mu, 0, 0, 0) = 0 from the companion pencil (complex)."""
    vals = companion_eigenvalues(op.rest_frame_coefficients())
    return vals[np.abs(vals) < 1e12]


def _linkage(values: np.ndarray, tol: float) -> list[np.ndarray]:
    """Single-linkage groups of complex values closer than ``tol``."""
    order = np.argsort(values.real)
    groups: list[list[complex]] = []
    for z in values[order]:
        for g in groups:
            if min(abs(z - w) for w in g) <= tol:
                g.append(z)
                break
        else:
            groups.append([z])
    return [np.array(g) for g in groups]


def numeric_spectrum(op: PolyOperator, cluster_tol: float = 1e-6, loose_tol: float = 1e-3) -> list[MassState]:
    """Masses from the companion eigenvalues, verified by rank deficiency.

    Eigenvalues are folded onto Re mu >= 0 and grouped at ``cluster_tol``.
    A group's mass is the real part of its mean, which stays accurate for
    repeated roots, and it is kept if op(+/-mass) is singular to
    ``ROOT_TOL``.  A root of multiplicity k >= 3 scatters by about eps^(1/k),
    so eigenvalues left over are regrouped at ``loose_tol`` and checked
    again.  Masses closer than about ``cluster_tol`` (relative) are not
    resolved and come out as one group.  The multiplicity is the number of
    eigenvalues in the group (algebraic count over both energy signs).
    """
    roots = rest_frame_roots(op)
    if roots.size == 0:
        return []
    folded = np.where(roots.real < 0, -roots, roots)
    scale = max(1.0, float(np.max(np.abs(folded))))

    def accept(group: np.ndarray) -> MassState | None:
        mean = complex(np.mean(group))
        if abs(mean.imag) > 1e-9 * scale:
            return None
        mass = abs(mean.real)
        if min(smallest_singular_ratio(op([s * mass, 0, 0, 0])) for s in (1, -1)) > ROOT_TOL:
            return None
        return _state(mass, len(group), "numeric")

    out, rest = [], []
    for group in _linkage(folded, cluster_tol * scale):
        state = accept(group)
        if state is None:
            rest.extend(group)
        else:
            out.append(state)
    for group in _linkage(np.array(rest), loose_tol * scale) if rest else []:
        state = accept(group)
        if state is not None:
            out.append(state)
    return sorted(out, key=lambda s: s.mass)


def on_shell_null_count(op: PolyOperator, mass: float, pvec) -> int:
    """Null-space dimension of op summed over p0 = +/- sqrt(p^2 + mass^2)."""
    pvec = np.asarray(pvec, dtype=float)
    e = math.sqrt(float(pvec @ pvec) + mass * mass)
    return sum(null_dimension(op([s * e, *pvec])) for s in (1, -1))


# ------------------------------------------------------------ physical masses

def alpha2_physical(m: float, alpha: float) -> float:
    """(1/m) (2 alpha/3) / (1 + 4 alpha/3); anomalous moment fixed at 4 alpha/3."""
    if not m > 0 or not alpha > 0:
        raise ValueError("need m > 0 and alpha > 0")
    return (2 * alpha / 3) / (1 + 4 * alpha / 3) / m


def muon_mass(m_e: float, alpha: float) -> float:
    if not m_e > 0:
        raise ValueError("electron mass must be positive")
    return m_e * (1 + 3 / (2 * alpha))


def tau_mass(m_e: float, alpha: float, levels=(1, 2)) -> float:
    """m_e (1 + (3/2) alpha^-1 sum n^4) over the Bohr-Sommerfeld levels n."""
    if not m_e > 0:
        raise ValueError("electron mass must be positive")
    return m_e * (1 + 1.5 / alpha * sum(n ** 4 for n in levels))


def lepton_table(alpha_inverse: float, electron_mass: float) -> dict[str, float]:
    """Electron, muon and tau masses in the units of ``electron_mass``."""
    if not alpha_inverse > 0:
        raise ValueError("alpha_inverse must be positive")
    alpha = 1.0 / alpha_inverse
    return {
        "electron": electron_mass,
        "muon": muon_mass(electron_mass, alpha),
        "tau": tau_mass(electron_mass, alpha),
    }


# ------------------------------------------------------------ third order

BRANCHES = {"++": (1, 1), "+-": (1, -1), "-+": (-1, 1), "--": (-1, -1)}


def parse_branch(branch: str | tuple[int, int]) -> tuple[int, int]:
    if isinstance(branch, tuple):
        if set(branch) - {1, -1} or len(branch) != 2:
            raise ValueError(f"bad branch {branch!r}")
        return branch
    try:
        return BRANCHES[branch]
    except KeyError:
        raise ValueError(f"branch must be one of {sorted(BRANCHES)}") from None


def branch_label(signs: tuple[int, int]) -> str:
    return "".join("+" if s > 0 else "-" for s in signs)


@dataclass
class ThirdOrderResult:
    branch: str
    first_factor: PolyOperator
    second_factor: PolyOperator
    product: PolyOperator
    expanded: PolyOperator
    spectrum: list[MassState]
    expansion_residual: float = field(default=0.0)


def first_factor_mass(params: BarutParams, signs: tuple[int, int]) -> float:
    s1, s2 = signs
    return params.m * (1 + s1 * params.b1 + s2 * params.b2) / params.a


def third_order_operator(params: BarutParams, branch="++", gs: GammaSet | None = None) -> ThirdOrderResult:
    """Factored and expanded third-order operator for one (+/-, +/-) branch.

    factors:  [pslash - M1] [pslash - (a/2m) p^2 + m (b1^2 - 1)/2a]
    expanded: p^2 (1 + M1 alpha2) - alpha2 p^2 pslash - (kappa + M1) pslash + M1 kappa,
    with alpha2 = a/2m, kappa = m (1 - b1^2)/2a and M1 = m (1 +/- b1 +/- b2)/a.
    The expanded form uses pslash pslash = p^2, so its agreement with the
    polynomial product is a Clifford-algebra check.
    """
    gs = _gammas(gs)
    signs = parse_branch(branch)
    a, m, b1 = params.a, params.m, params.b1
    m1 = first_factor_mass(params, signs)
    alpha2 = a / (2 * m)
    kappa = m * (1 - b1 * b1) / (2 * a)
    ps = PolyOperator.slash(gs)
    p2 = PolyOperator.p_squared()
    first = ps - m1
    second = ps - alpha2 * p2 - kappa
    prod = first @ second
    expanded = (1 + m1 * alpha2) * p2 - alpha2 * (p2 @ ps) - (kappa + m1) * ps + m1 * kappa
    label = branch_label(signs)
    states = [_state(m1, 4, f"first{label}"),
              _state(m * (1 + b1) / a, 4, "second+"),
              _state(m * (1 - b1) / a, 4, "second-")]
    return ThirdOrderResult(label, first, second, prod, expanded, _merge(states),
                            prod.distance(expanded))


# ------------------------------------------------------------ coupled system

@dataclass
class CoupledSystem:
    """Equations for (phi, chi, phi~, chi~) plus the linear-dependence constraint rows."""
    params: BarutParams
    sign: int
    operator: PolyOperator          # 16 x 16, block order (phi, chi, phi~, chi~)
    reduced: PolyOperator           # 8 x 8 on (phi, chi) after eliminating phi~, chi~
    psi1_operator: PolyOperator     # first-order operator on Psi_1 = (phi + chi)/2
    psi2_operator: PolyOperator     # first-order operator on Psi_2 = (phi - chi)/2
    decoupling_residual: float
    elimination_operator: PolyOperator  # D^2 - b1^2 from eliminating chi at b2 = 0
    third_order: dict[str, PolyOperator]
    branches: dict[str, str]


def coupled_system(params: BarutParams, sign: int = 1, gs: GammaSet | None = None) -> CoupledSystem:
    """Coupled first-order system with a gamma5 cross term, and its reduction.

    Rows 1-2 are the real-form equations
        D phi - b1 chi + i b2 g5 phi~ = 0,   D chi - b1 phi - i b2 g5 chi~ = 0,
    with D = a pslash/m - 1.  Rows 3-4 impose Psi_1 = -s i g5 Psi_4 and
    Psi_2 = s i g5 Psi_3 (s = ``sign``), i.e. phi~ = s i g5 chi and
    chi~ = -s i g5 phi.  Eliminating the tilde fields is a Schur complement
    with an identity pivot, so it stays exact at the polynomial level.

    The constrained components obey first-order equations with masses
    m(1 + b1 + s b2)/a and m(1 - b1 - s b2)/a.  The third-order operator of
    the same branch is recovered by composing each with the operator
    D^2 - b1^2 obtained by eliminating chi from the b2-free system.
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    gs = _gammas(gs)
    b1, b2 = params.b1, params.b2
    g5 = gs.gamma5
    eye = np.eye(4)
    d = dirac_factor(params, gs)
    c = PolyOperator.constant
    op = PolyOperator.block([
        [d, c(-b1 * eye), c(1j * b2 * g5), None],
        [c(-b1 * eye), d, None, c(-1j * b2 * g5)],
        [None, c(-sign * 1j * g5), c(eye), None],
        [c(sign * 1j * g5), None, None, c(eye)],
    ])
    a_blk = PolyOperator.block([[op.sub_block(0, 0, 4), op.sub_block(0, 1, 4)],
                                [op.sub_block(1, 0, 4), op.sub_block(1, 1, 4)]])
    b_blk = PolyOperator.block([[op.sub_block(0, 2, 4), op.sub_block(0, 3, 4)],
                                [op.sub_block(1, 2, 4), op.sub_block(1, 3, 4)]])
    c_blk = PolyOperator.block([[op.sub_block(2, 0, 4), op.sub_block(2, 1, 4)],
                                [op.sub_block(3, 0, 4), op.sub_block(3, 1, 4)]])
    pivot = PolyOperator.block([[op.sub_block(2, 2, 4), op.sub_block(2, 3, 4)],
                                [op.sub_block(3, 2, 4), op.sub_block(3, 3, 4)]])
    if pivot.degree != 0 or max_norm(pivot.coefficient((0, 0, 0, 0)) - np.eye(8)) > 0:
        raise RuntimeError("constraint pivot is expected to be the identity")
    reduced = a_blk - b_blk @ c_blk

    # phi = Psi1 + Psi2, chi = Psi1 - Psi2
    t = np.kron(np.array([[1, 1], [1, -1]]), eye)
    diag = (0.5 * t) @ reduced @ t
    psi1 = diag.sub_block(0, 0, 4)
    psi2 = diag.sub_block(1, 1, 4)
    off = max(diag.sub_block(0, 1, 4).distance(PolyOperator()),
              diag.sub_block(1, 0, 4).distance(PolyOperator()))

    elim = d @ d - b1 * b1
    label1 = branch_label((1, sign))
    label2 = branch_label((-1, -sign))
    return CoupledSystem(
        params=params, sign=sign, operator=op, reduced=reduced,
        psi1_operator=psi1, psi2_operator=psi2, decoupling_residual=off,
        elimination_operator=elim,
        third_order={label1: elim @ psi1, label2: elim @ psi2},
        branches={"psi1": label1, "psi2": label2},
    )


def determinant_ratio_spread(op_a: PolyOperator, op_b: PolyOperator, momenta) -> tuple[complex, float]:
    """Mean of det(op_a)/det(op_b) over momenta and its worst relative deviation."""
    ratios = np.array([np.linalg.det(op_a(p)) / np.linalg.det(op_b(p)) for p in momenta])
    mean = ratios.mean()
    return complex(mean), float(np.max(np.abs(ratios - mean)) / abs(mean))


# ------------------------------------------------------------ field equation pair

@dataclass(frozen=True)
class LagrangianParams:
    """Couplings of L = alpha1 [psibar g.d psi - d psibar g psi] + alpha2 d psibar d psi
    + alpha3 d psibar sigma d psi -/+ alpha4 psibar psi."""
    alpha1: complex = 0.5j
    alpha2: complex = 0.0
    alpha3: complex = 0.0
    alpha4: complex = 1.0

    @classmethod
    def dirac(cls, m: float) -> "LagrangianParams":
        return cls(0.5j, 0.0, 0.0, m)


@dataclass(frozen=True)
class FieldOperator:
    """c_slash gamma^mu d_mu + c_box d_mu d^mu + c_const, in position space."""
    c_slash: complex
    c_box: complex
    c_const: complex

    def momentum(self, gs: GammaSet | None = None, wave_sign: int = -1) -> PolyOperator:
        """Substitute d_mu -> i wave_sign p_mu for plane waves exp(i wave_sign p.x)."""
        gs = _gammas(gs)
        k = 1j * wave_sign
        return (self.c_slash * k) * PolyOperator.slash(gs) + (self.c_box * k * k) * PolyOperator.p_squared() \
            + self.c_const

    def as_tuple(self) -> tuple[complex, complex, complex]:
        return (self.c_slash, self.c_box, self.c_const)


def field_equation_pair(lagr: LagrangianParams) -> tuple[FieldOperator, FieldOperator]:
    """[2 a1 g.d - a2 d.d - a4] psi = 0 and psibar [2 a1 g.d + a2 d.d + a4] = 0.

    In the conjugate equation the derivatives act to the left, on psibar.
    """
    a1, a2, a4 = lagr.alpha1, lagr.alpha2, lagr.alpha4
    return FieldOperator(2 * a1, -a2, -a4), FieldOperator(2 * a1, a2, a4)
