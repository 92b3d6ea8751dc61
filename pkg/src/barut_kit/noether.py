"""Lagrangian, Noether invariants and mode sums in a periodic box.

Euclidean conventions: x4 = i t, gamma_4 = gamma^0, gamma_k = -i gamma^k,
psibar = psi^dagger gamma_4, sigma_mn = (i/2)[gamma_m, gamma_n].  The
Lagrangian is

    L = a1 (psibar g_m d_m psi - d_m psibar g_m psi) + a2 d_m psibar d_m psi
        + a3 d_a psibar sigma_ab d_b psi + a4 psibar psi

and a plane wave exp(i(k.x - w t)) has d_j -> i k_j, d_4 = -i d_t -> -w.

Field expansion in a box of side L (integrals over d^3p/(2 pi)^3 become
sums divided by L^3):

    psi = L^-3 sum [u_h(p) a e^{i(p.x - E t)} + v_h(p) b* e^{-i(p.x - E t)}]

with v_h = C u_h*, ubar u = 1 and vbar v = -1.  A mode of mass M is on
shell when a4 = 2 a1 M + a2 M^2; two masses M1, M2 share one Lagrangian when
a2 = -2 a1/(M1 + M2).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .algebra import Metric, Representation, build_gammas, sigma_tensor
from .barut import FieldOperator, LagrangianParams, field_equation_pair
from .spinors import build_u_spinor, v_from_u

_GS = build_gammas(Representation.CHIRAL, Metric.EUCLIDEAN)
GAMMA = np.array(_GS.gammas)
SIGMA = sigma_tensor(_GS)
G4 = GAMMA[3]
TERMS = ("alpha1", "alpha2", "alpha3", "alpha4")


def _only(lagr: LagrangianParams, name: str) -> LagrangianParams:
    zero = dict.fromkeys(TERMS, 0.0)
    zero[name] = getattr(lagr, name)
    return LagrangianParams(**zero)


def on_shell_alpha4(lagr: LagrangianParams, mass: float) -> complex:
    return 2 * lagr.alpha1 * mass + lagr.alpha2 * mass * mass


def on_shell(lagr: LagrangianParams, mass: float) -> LagrangianParams:
    """Same couplings with alpha4 fixed so modes of ``mass`` solve the field equation."""
    return replace(lagr, alpha4=on_shell_alpha4(lagr, mass))


def two_mass_params(alpha1: complex, m1: float, m2: float, alpha3: complex = 0.0) -> LagrangianParams:
    """Couplings whose field equation admits both masses m1 and m2."""
    alpha2 = -2 * alpha1 / (m1 + m2)
    return LagrangianParams(alpha1, alpha2, alpha3, -alpha2 * m1 * m2)


# ------------------------------------------------------------------ modes

@dataclass(frozen=True)
class Mode:
    n: tuple[int, int, int]
    h: float
    a: complex = 0.0
    b: complex = 0.0
    mass: float | None = None


@dataclass(frozen=True)
class ModeSet:
    L: float
    m: float
    modes: tuple[Mode, ...] = ()

    def __post_init__(self):
        if not self.L > 0 or not self.m > 0:
            raise ValueError("box length and mass must be positive")

    def mass_of(self, mode: Mode) -> float:
        return self.m if mode.mass is None else mode.mass

    def momentum(self, mode: Mode) -> np.ndarray:
        return 2 * np.pi * np.asarray(mode.n, dtype=float) / self.L

    def energy(self, mode: Mode) -> float:
        k = self.momentum(mode)
        mass = self.mass_of(mode)
        return math.sqrt(float(k @ k) + mass * mass)

    def scaled(self, c: complex) -> "ModeSet":
        return replace(self, modes=tuple(replace(md, a=c * md.a, b=c * md.b) for md in self.modes))

    @classmethod
    def from_dict(cls, data: dict) -> "ModeSet":
        def cplx(v):
            if v is None:
                return 0.0
            if isinstance(v, (list, tuple)):
                return complex(v[0], v[1])
            return complex(v)

        m = float(data["m"])
        modes = []
        for md in data.get("modes", []):
            n = tuple(int(x) for x in md["n"])
            if len(n) != 3:
                raise ValueError("mode index n needs three integers")
            h = float(md["h"])
            if h not in (0.5, -0.5):
                raise ValueError("helicity must be +/-0.5")
            modes.append(Mode(n, h, cplx(md.get("a")), cplx(md.get("b")),
                              None if md.get("mass") is None else float(md["mass"])))
        return cls(float(data.get("L", 16.0 / m)), m, tuple(modes))

    @classmethod
    def from_json(cls, text: str) -> "ModeSet":
        return cls.from_dict(json.loads(text))

    def to_dict(self) -> dict:
        out = {"L": self.L, "m": self.m, "modes": []}
        for md in self.modes:
            a, b = complex(md.a), complex(md.b)
            row = {"n": list(md.n), "h": md.h, "a": [a.real, a.imag], "b": [b.real, b.imag]}
            if md.mass is not None:
                row["mass"] = md.mass
            out["modes"].append(row)
        return out


def default_box_length(m: float) -> float:
    return 16.0 / m


@dataclass(frozen=True)
class Component:
    """w exp(i(q.x - omega t)); ``key`` identifies q on the integer lattice."""
    w: np.ndarray
    q: np.ndarray
    omega: float
    key: tuple[int, int, int]

    @property
    def d(self) -> np.ndarray:
        """Euclidean derivative factors acting on psi."""
        return np.concatenate([1j * self.q, [-self.omega]])

    @property
    def dbar(self) -> np.ndarray:
        """Derivative factors acting on psibar = w^dagger gamma_4 exp(-i(q.x - omega t))."""
        return np.concatenate([-1j * self.q, [self.omega]])


def components(ms: ModeSet) -> list[Component]:
    out = []
    vol = ms.L ** 3
    for md in ms.modes:
        k = ms.momentum(md)
        mass = ms.mass_of(md)
        e = ms.energy(md)
        u = build_u_spinor(k, md.h, 1.0, 0.0, mass)
        v = v_from_u(u)
        if md.a != 0:
            out.append(Component(u.components * md.a / vol, k, e, tuple(md.n)))
        if md.b != 0:
            out.append(Component(v.components * np.conj(md.b) / vol, -k, -e, tuple(-x for x in md.n)))
    return out


# ------------------------------------------------------------ field samples

@dataclass
class FieldSample:
    """Batched field values: psi (P,4), dpsi (P,4,4) [point, mu, spinor] and the barred pair."""
    psi: np.ndarray
    dpsi: np.ndarray
    psibar: np.ndarray
    dpsibar: np.ndarray


def sample_field(ms: ModeSet, points, t: float = 0.0) -> FieldSample:
    """Pointwise field and first derivatives at spatial ``points`` (P,3)."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    npts = len(pts)
    psi = np.zeros((npts, 4), dtype=complex)
    dpsi = np.zeros((npts, 4, 4), dtype=complex)
    for c in components(ms):
        phase = np.exp(1j * (pts @ c.q - c.omega * t))
        val = phase[:, None] * c.w[None, :]
        psi += val
        dpsi += c.d[None, :, None] * val[:, None, :]
    psibar = psi.conj() @ G4
    # d_4 = -i d_t is not real, so d_4 psibar = -(d_4 psi)^dagger gamma_4
    dpsibar = dpsi.conj() @ G4
    dpsibar[:, 3] *= -1
    return FieldSample(psi, dpsi, psibar, dpsibar)


def pair_samples(ms: ModeSet, t: float = 0.0) -> tuple[FieldSample, np.ndarray]:
    """Box-integrated bilinear pairs: (barred component, component) with equal q.

    Returns a batch whose densities, summed and multiplied by L^3, give the
    exact box integral of any bilinear density.
    """
    comps = components(ms)
    bars, kets = [], []
    for cb in comps:
        for ck in comps:
            if cb.key == ck.key:
                bars.append(cb)
                kets.append(ck)
    if not bars:
        z = np.zeros((0, 4), dtype=complex)
        return FieldSample(z, np.zeros((0, 4, 4), complex), z, np.zeros((0, 4, 4), complex)), np.zeros(0)
    tphase = np.array([np.exp(-1j * (ck.omega - cb.omega) * t) for cb, ck in zip(bars, kets)])
    psi = np.array([ck.w for ck in kets]) * tphase[:, None]
    dpsi = np.array([np.outer(ck.d, ck.w) for ck in kets]) * tphase[:, None, None]
    psibar = np.array([cb.w.conj() @ G4 for cb in bars])
    dpsibar = np.array([np.outer(cb.dbar, cb.w.conj() @ G4) for cb in bars])
    return FieldSample(psi, dpsi, psibar, dpsibar), np.full(len(bars), ms.L ** 3)


# ---------------------------------------------------------- canonical pieces

def momentum_psi(lagr: LagrangianParams, f: FieldSample) -> np.ndarray:
    """dL/d(d_mu psi) as row spinors, shape (P, 4, 4) [point, mu, spinor]."""
    out = lagr.alpha1 * np.einsum("pi,mij->pmj", f.psibar, GAMMA)
    out = out + lagr.alpha2 * f.dpsibar
    out = out + lagr.alpha3 * np.einsum("pai,amij->pmj", f.dpsibar, SIGMA)
    return out


def momentum_psibar(lagr: LagrangianParams, f: FieldSample) -> np.ndarray:
    """dL/d(d_mu psibar) as column spinors, shape (P, 4, 4) [point, mu, spinor]."""
    out = -lagr.alpha1 * np.einsum("mij,pj->pmi", GAMMA, f.psi)
    out = out + lagr.alpha2 * f.dpsi
    out = out + lagr.alpha3 * np.einsum("mbij,pbj->pmi", SIGMA, f.dpsi)
    return out


def lagrangian_values(lagr: LagrangianParams, f: FieldSample) -> np.ndarray:
    l1 = np.einsum("pi,mij,pmj->p", f.psibar, GAMMA, f.dpsi) - np.einsum("pmi,mij,pj->p", f.dpsibar, GAMMA, f.psi)
    l2 = np.einsum("pmi,pmi->p", f.dpsibar, f.dpsi)
    l3 = np.einsum("pai,abij,pbj->p", f.dpsibar, SIGMA, f.dpsi)
    l4 = np.einsum("pi,pi->p", f.psibar, f.psi)
    return lagr.alpha1 * l1 + lagr.alpha2 * l2 + lagr.alpha3 * l3 + lagr.alpha4 * l4


def current_values(lagr: LagrangianParams, f: FieldSample) -> np.ndarray:
    """J_mu = -i [dL/d(d_mu psi) psi - psibar dL/d(d_mu psibar)], shape (P, 4)."""
    pp = momentum_psi(lagr, f)
    pb = momentum_psibar(lagr, f)
    return -1j * (np.einsum("pmi,pi->pm", pp, f.psi) - np.einsum("pi,pmi->pm", f.psibar, pb))


def stress_values(lagr: LagrangianParams, f: FieldSample) -> np.ndarray:
    """T_mu_nu, shape (P, 4, 4)."""
    pp = momentum_psi(lagr, f)
    pb = momentum_psibar(lagr, f)
    t = -(np.einsum("pmi,pni->pmn", pp, f.dpsi) + np.einsum("pni,pmi->pmn", f.dpsibar, pb))
    lag = lagrangian_values(lagr, f)
    return t + lag[:, None, None] * np.eye(4)[None]


def spin_values(lagr: LagrangianParams, f: FieldSample) -> np.ndarray:
    """S_{mu nu, lambda} with generators sigma/2 on psi and -sigma/2 on psibar, shape (P,4,4,4)."""
    pp = momentum_psi(lagr, f)
    pb = momentum_psibar(lagr, f)
    first = np.einsum("pli,mnij,pj->pmnl", pp, SIGMA / 2, f.psi)
    second = np.einsum("pi,mnij,plj->pmnl", f.psibar, -SIGMA / 2, pb)
    return -1j * (first + second)


def _hamiltonian_density(lagr, f):
    return -stress_values(lagr, f)[:, 3, 3]


def _charge_density(lagr, f):
    return -1j * current_values(lagr, f)[:, 3]


# ------------------------------------------------------------ invariants

@dataclass
class InvariantReport:
    hamiltonian: complex
    charge: complex
    hamiltonian_terms: dict[str, complex]
    charge_terms: dict[str, complex]
    time: float
    current_samples: np.ndarray = field(default_factory=lambda: np.zeros((0, 4), complex))
    stress_samples: np.ndarray = field(default_factory=lambda: np.zeros((0, 4, 4), complex))
    spin_samples: np.ndarray = field(default_factory=lambda: np.zeros((0, 4, 4, 4), complex))

    def as_dict(self) -> dict:
        return {
            "hamiltonian": self.hamiltonian,
            "charge": self.charge,
            "hamiltonian_terms": self.hamiltonian_terms,
            "charge_terms": self.charge_terms,
            "time": self.time,
            "current_samples": self.current_samples.tolist(),
            "stress_samples": self.stress_samples.tolist(),
            "spin_samples": self.spin_samples.tolist(),
        }


def _box_integral(density, lagr, ms: ModeSet, t: float) -> complex:
    pairs, weights = pair_samples(ms, t)
    if len(weights) == 0:
        return 0j
    return complex(np.sum(density(lagr, pairs) * weights))


def invariants(lagr: LagrangianParams, ms: ModeSet, t: float = 0.0, sample_points=None) -> InvariantReport:
    """H = -int T_44 d^3x and Q = -i int J_4 d^3x from orthogonality-collapsed mode sums.

    Per-coupling contributions are reported separately (the densities are
    linear in the couplings).
    """
    h_terms = {name: _box_integral(_hamiltonian_density, _only(lagr, name), ms, t) for name in TERMS}
    q_terms = {name: _box_integral(_charge_density, _only(lagr, name), ms, t) for name in TERMS}
    report = InvariantReport(sum(h_terms.values()), sum(q_terms.values()), h_terms, q_terms, t)
    if sample_points is not None:
        f = sample_field(ms, sample_points, t)
        report.current_samples = current_values(lagr, f)
        report.stress_samples = stress_values(lagr, f)
        report.spin_samples = spin_values(lagr, f)
    return report


def box_grid(L: float, n: int) -> np.ndarray:
    axis = np.arange(n) * (L / n)
    return np.stack(np.meshgrid(axis, axis, axis, indexing="ij"), axis=-1).reshape(-1, 3)


def _fsum_complex(values) -> complex:
    values = np.asarray(values)
    return complex(math.fsum(values.real), math.fsum(values.imag))


def quadrature_invariants(lagr: LagrangianParams, ms: ModeSet, t: float = 0.0, n: int = 32) -> tuple[complex, complex]:
    """(H, Q) from pointwise densities on an n^3 grid with compensated summation."""
    if not ms.modes:
        return 0j, 0j
    f = sample_field(ms, box_grid(ms.L, n), t)
    cell = (ms.L / n) ** 3
    return (_fsum_complex(_hamiltonian_density(lagr, f)) * cell,
            _fsum_complex(_charge_density(lagr, f)) * cell)


def charge_density_samples(lagr: LagrangianParams, ms: ModeSet, points, t: float = 0.0) -> np.ndarray:
    """-i J_4 at the given points; its box integral is the charge."""
    return _charge_density(lagr, sample_field(ms, points, t))


# ------------------------------------------------------- second quantization

def _energy(p, m: float) -> float:
    p = np.asarray(p, dtype=float)
    return math.sqrt(float(p @ p) + m * m)


def mode_hamiltonian_coefficient(lagr: LagrangianParams, p, m: float) -> complex:
    """-(2 E^2/m)(alpha1 + m alpha2)."""
    e = _energy(p, m)
    return -(2 * e * e / m) * (lagr.alpha1 + m * lagr.alpha2)


def alpha3_bilinear(p, h: float, h_prime: float, m: float) -> complex:
    """ubar_h sigma_{i4} p_i u_h'."""
    p = np.asarray(p, dtype=float)
    uh = build_u_spinor(p, h, 1.0, 0.0, m)
    uhp = build_u_spinor(p, h_prime, 1.0, 0.0, m)
    mat = np.einsum("i,ijk->jk", p, SIGMA[:3, 3])
    return complex(uh.components.conj() @ G4 @ mat @ uhp.components)


def mode_charge_coefficient(lagr: LagrangianParams, p, h: float, h_prime: float, m: float) -> complex:
    """-(2E/m)[(alpha1 + m alpha2) delta_hh' - i alpha3 ubar_h sigma_i4 p_i u_h']."""
    e = _energy(p, m)
    delta = 1.0 if h == h_prime else 0.0
    return -(2 * e / m) * ((lagr.alpha1 + m * lagr.alpha2) * delta
                           - 1j * lagr.alpha3 * alpha3_bilinear(p, h, h_prime, m))


def anticommutator_normalization(p_index, k_index, h: float, h_prime: float, L: float, m: float) -> float:
    """Box form L^3 (m/E_p) delta_pk delta_hh' of the anticommutator weight."""
    if tuple(p_index) != tuple(k_index) or h != h_prime:
        return 0.0
    p = 2 * np.pi * np.asarray(p_index, dtype=float) / L
    return L ** 3 * m / _energy(p, m)


def factorized_invariants(lagr: LagrangianParams, ms: ModeSet) -> tuple[complex, complex]:
    """(H, Q) rebuilt from the per-mode coefficients and |a|^2 -/+ |b|^2.

    Entries sharing (n, h, mass) are one mode, so their amplitudes add first.
    """
    merged: dict[tuple, list[complex]] = {}
    for md in ms.modes:
        key = (tuple(md.n), md.h, ms.mass_of(md))
        amp = merged.setdefault(key, [0j, 0j])
        amp[0] += md.a
        amp[1] += md.b
    h_sum, q_sum = 0j, 0j
    for (n, h, mass), (a, b) in merged.items():
        k = 2 * np.pi * np.asarray(n, dtype=float) / ms.L
        na, nb = abs(a) ** 2, abs(b) ** 2
        h_sum += mode_hamiltonian_coefficient(lagr, k, mass) * (na - nb)
        q_sum += mode_charge_coefficient(lagr, k, h, h, mass) * (na + nb)
    vol = ms.L ** 3
    return h_sum / vol, q_sum / vol


def single_quantum_energy(lagr: LagrangianParams, p, m: float) -> complex:
    """Coefficient times the anticommutator weight L^3 m/E over L^3: -2E(alpha1 + m alpha2)."""
    return mode_hamiltonian_coefficient(lagr, p, m) * m / _energy(p, m)


# ------------------------------------------------------------ spin tensor

def spin_tensor_sample(lagr: LagrangianParams, ms: ModeSet, x, t: float = 0.0) -> np.ndarray:
    """S_{mu nu, lambda} at one spatial point, shape (4, 4, 4)."""
    return spin_values(lagr, sample_field(ms, [x], t))[0]


def lagrangian_density(lagr: LagrangianParams, ms: ModeSet, x, t: float = 0.0) -> complex:
    return complex(lagrangian_values(lagr, sample_field(ms, [x], t))[0])


def field_equation_residual(lagr: LagrangianParams, ms: ModeSet) -> float:
    """Sum over components of || (2 a1 g.d - a2 d.d + a4) w || in the Euclidean convention."""
    total = 0.0
    for c in components(ms):
        d = c.d
        op = 2 * lagr.alpha1 * np.einsum("m,mij->ij", d, GAMMA) \
            + (-lagr.alpha2 * (d @ d) + lagr.alpha4) * np.eye(4)
        total += float(np.linalg.norm(op @ c.w))
    return total


# ------------------------------------------------ Minkowski field equations

def euler_lagrange_residual(lagr: LagrangianParams, field_waves) -> float:
    """Residual of [2 a1 g.d - a2 d.d - a4] on a Minkowski plane-wave field.

    ``field_waves`` is any object with ``apply(PolyOperator)`` and ``norm()``,
    such as a majorana.PlaneWaveField built from exp(-i p.x) waves.
    """
    op, _ = field_equation_pair(lagr)
    return field_waves.apply(op.momentum()).norm()


def symbolic_field_equation() -> dict[str, object]:
    """Vary the Minkowski Lagrangian symbolically with respect to psibar.

    Returns the coefficients (of gamma^mu d_mu, d_mu d^mu and 1) read off the
    Euler-Lagrange expressions, the residual against the printed operator,
    and the part contributed by alpha3.
    """
    import sympy as sp
    from sympy.calculus.euler import euler_equations

    a1, a2, a3, a4 = sp.symbols("alpha1:5")
    xs = sp.symbols("x0:4", real=True)
    psi = [sp.Function(f"psi{i}")(*xs) for i in range(4)]
    psib = [sp.Function(f"psibar{i}")(*xs) for i in range(4)]
    mink = build_gammas(Representation.CHIRAL, Metric.MINKOWSKI)
    gam = [sp.Matrix(4, 4, lambda i, j: sp.nsimplify(complex(g[i, j]).real) + sp.I * sp.nsimplify(complex(g[i, j]).imag))
           for g in mink.gammas]
    metric = [1, -1, -1, -1]
    sig = [[sp.I / 2 * (gam[m] * gam[n] - gam[n] * gam[m]) for n in range(4)] for m in range(4)]
    pv = sp.Matrix(psi)
    pb = sp.Matrix([psib])
    d = lambda f, mu: f.diff(xs[mu])  # noqa: E731

    def lag(c1, c2, c3, c4):
        dirac = sum((pb * gam[m] * pv.applyfunc(lambda f: d(f, m)))[0]
                    - (pb.applyfunc(lambda f: d(f, m)) * gam[m] * pv)[0] for m in range(4))
        add2 = sum(metric[m] * (pb.applyfunc(lambda f: d(f, m)) * pv.applyfunc(lambda f: d(f, m)))[0]
                   for m in range(4))
        add3 = sum(metric[m] * metric[n] * (pb.applyfunc(lambda f: d(f, m)) * sig[m][n]
                                            * pv.applyfunc(lambda f: d(f, n)))[0]
                   for m in range(4) for n in range(4))
        mass = (pb * pv)[0]
        return c1 * dirac - c4 * mass + c2 * add2 + c3 * add3

    def variation(lagrangian):
        eqs = euler_equations(lagrangian, psib, xs)
        return [sp.expand(e.lhs) for e in eqs]

    full = variation(lag(a1, a2, a3, a4))
    alpha3_only = variation(lag(0, 0, a3, 0))

    expected = []
    for i in range(4):
        row = 0
        for j in range(4):
            row += sum(2 * a1 * gam[m][i, j] * d(psi[j], m) for m in range(4))
        row += -a2 * sum(metric[m] * psi[i].diff(xs[m], 2) for m in range(4)) - a4 * psi[i]
        expected.append(sp.expand(row))

    residual = [sp.simplify(f - e) for f, e in zip(full, expected)]
    slash_coef = sp.simplify(full[0].coeff(d(psi[2], 0)) / gam[0][0, 2])
    box_coef = sp.simplify(full[0].coeff(psi[0].diff(xs[0], 2)))
    const_coef = sp.simplify(full[0].coeff(psi[0]))
    return {
        "coefficients": (slash_coef, box_coef, const_coef),
        "expected": (2 * a1, -a2, -a4),
        "residual_zero": all(r == 0 for r in residual),
        "alpha3_contribution": [sp.simplify(e) for e in alpha3_only],
    }


def field_operator_from_symbols(result: dict) -> FieldOperator:
    """Numeric FieldOperator at alpha = (i/2, 0, 0, 1) from symbolic coefficients."""
    import sympy as sp

    a1, a2, a3, a4 = sp.symbols("alpha1:5")
    subs = {a1: sp.I / 2, a2: 0, a3: 0, a4: 1}
    vals = [complex(sp.N(c.subs(subs))) for c in result["coefficients"]]
    return FieldOperator(*vals)
