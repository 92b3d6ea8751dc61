"""Matrix-valued polynomials in the four momentum components.

A ``PolyOperator`` stores ``{exponents: matrix}`` where ``exponents`` is a
4-tuple of powers of (p^0, p^1, p^2, p^3).  Plane-wave substitution
i d_mu -> p_mu turns every differential operator of this package into one
of these.
"""

from __future__ import annotations

from itertools import product

import numpy as np
import scipy.linalg

from .algebra import MINKOWSKI_METRIC, GammaSet, max_norm

Exponent = tuple[int, int, int, int]
ZERO_EXP: Exponent = (0, 0, 0, 0)


def _unit(mu: int) -> Exponent:
    e = [0, 0, 0, 0]
    e[mu] = 1
    return tuple(e)


class PolyOperator:
    __slots__ = ("terms", "size")
    __array_ufunc__ = None

    def __init__(self, terms: dict[Exponent, np.ndarray] | None = None, size: int = 4):
        self.size = size
        self.terms: dict[Exponent, np.ndarray] = {}
        for exp, mat in (terms or {}).items():
            mat = np.asarray(mat, dtype=complex)
            if mat.shape != (size, size):
                raise ValueError(f"coefficient shape {mat.shape} does not match size {size}")
            self.terms[tuple(exp)] = mat

    # -- constructors
    @classmethod
    def constant(cls, mat) -> "PolyOperator":
        mat = np.asarray(mat, dtype=complex)
        return cls({ZERO_EXP: mat}, size=mat.shape[0])

    @classmethod
    def scalar(cls, value: complex, size: int = 4) -> "PolyOperator":
        return cls.constant(value * np.eye(size))

    @classmethod
    def slash(cls, gs: GammaSet) -> "PolyOperator":
        """gamma^mu p_mu with p_mu = g_mu_nu p^nu."""
        g = np.diag(MINKOWSKI_METRIC)
        return cls({_unit(mu): g[mu] * gs.gammas[mu] for mu in range(4)})

    @classmethod
    def p_squared(cls, size: int = 4) -> "PolyOperator":
        g = np.diag(MINKOWSKI_METRIC)
        eye = np.eye(size)
        return cls({tuple(2 * e for e in _unit(mu)): g[mu] * eye for mu in range(4)}, size=size)

    @classmethod
    def block(cls, grid: list[list["PolyOperator | None"]]) -> "PolyOperator":
        """Assemble a block operator; ``None`` entries are zero blocks."""
        n = len(grid)
        sub = next(op.size for row in grid for op in row if op is not None)
        size = n * sub
        terms: dict[Exponent, np.ndarray] = {}
        for i, row in enumerate(grid):
            for j, op in enumerate(row):
                if op is None:
                    continue
                for exp, mat in op.terms.items():
                    big = terms.setdefault(exp, np.zeros((size, size), dtype=complex))
                    big[i * sub:(i + 1) * sub, j * sub:(j + 1) * sub] += mat
        return cls(terms, size=size)

    # -- algebra
    def copy(self) -> "PolyOperator":
        return PolyOperator({k: v.copy() for k, v in self.terms.items()}, self.size)

    def __add__(self, other):
        if not isinstance(other, PolyOperator):
            other = PolyOperator.scalar(other, self.size)
        out = self.copy()
        for exp, mat in other.terms.items():
            out.terms[exp] = out.terms.get(exp, 0) + mat
        return out

    __radd__ = __add__

    def __neg__(self):
        return PolyOperator({k: -v for k, v in self.terms.items()}, self.size)

    def __sub__(self, other):
        return self + (-other if isinstance(other, PolyOperator) else -other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, c):
        if isinstance(c, PolyOperator):
            return self @ c
        return PolyOperator({k: c * v for k, v in self.terms.items()}, self.size)

    __rmul__ = __mul__

    def __truediv__(self, c):
        return self * (1.0 / c)

    def __matmul__(self, other):
        if not isinstance(other, PolyOperator):
            other = PolyOperator.constant(other)
        terms: dict[Exponent, np.ndarray] = {}
        for (e1, m1), (e2, m2) in product(self.terms.items(), other.terms.items()):
            exp = tuple(a + b for a, b in zip(e1, e2))
            terms[exp] = terms.get(exp, 0) + m1 @ m2
        return PolyOperator(terms, self.size)

    def __rmatmul__(self, mat):
        return PolyOperator.constant(mat) @ self

    def conjugate_by(self, v) -> "PolyOperator":
        """v O v^-1, coefficientwise."""
        vinv = np.linalg.inv(v)
        return PolyOperator({k: v @ m @ vinv for k, m in self.terms.items()}, self.size)

    # -- inspection
    @property
    def degree(self) -> int:
        live = [sum(e) for e, m in self.terms.items() if max_norm(m) > 0]
        return max(live, default=0)

    def coefficient(self, exp: Exponent) -> np.ndarray:
        return self.terms.get(tuple(exp), np.zeros((self.size, self.size), dtype=complex))

    def distance(self, other: "PolyOperator") -> float:
        """Max-norm coefficientwise difference."""
        keys = set(self.terms) | set(other.terms)
        return max((max_norm(self.coefficient(k) - other.coefficient(k)) for k in keys), default=0.0)

    def evaluate(self, p) -> np.ndarray:
        p = np.asarray(p, dtype=complex)
        out = np.zeros((self.size, self.size), dtype=complex)
        for exp, mat in self.terms.items():
            out += np.prod(p ** np.array(exp)) * mat
        return out

    def __call__(self, p) -> np.ndarray:
        return self.evaluate(p)

    def rest_frame_coefficients(self) -> list[np.ndarray]:
        """Matrix coefficients C_k of mu^k after substituting p = (mu, 0, 0, 0)."""
        rest = {e[0]: m for e, m in self.terms.items() if e[1] == e[2] == e[3] == 0 and max_norm(m) > 0}
        coeffs = [np.zeros((self.size, self.size), dtype=complex) for _ in range(max(rest, default=0) + 1)]
        for e0, mat in rest.items():
            coeffs[e0] = coeffs[e0] + mat
        return coeffs

    def sub_block(self, i: int, j: int, sub: int) -> "PolyOperator":
        """Block (i, j) of a block operator with ``sub`` x ``sub`` blocks."""
        return PolyOperator(
            {k: m[i * sub:(i + 1) * sub, j * sub:(j + 1) * sub] for k, m in self.terms.items()}, sub)

    def __repr__(self) -> str:
        return f"PolyOperator(size={self.size}, degree={self.degree}, terms={len(self.terms)})"


def companion_eigenvalues(coeffs: list[np.ndarray]) -> np.ndarray:
    """Finite eigenvalues of sum_k C_k mu^k via block companion linearization.

    Solves the generalized problem A z = mu B z of size n*d.  A singular
    leading coefficient produces infinite eigenvalues, which are dropped.
    """
    d = len(coeffs) - 1
    while d > 0 and max_norm(coeffs[d]) == 0:
        d -= 1
    if d == 0:
        return np.array([], dtype=complex)
    n = coeffs[0].shape[0]
    a = np.zeros((n * d, n * d), dtype=complex)
    b = np.eye(n * d, dtype=complex)
    for k in range(d - 1):
        a[k * n:(k + 1) * n, (k + 1) * n:(k + 2) * n] = np.eye(n)
    for k in range(d):
        a[(d - 1) * n:, k * n:(k + 1) * n] = -coeffs[k]
    b[(d - 1) * n:, (d - 1) * n:] = coeffs[d]
    vals = scipy.linalg.eigvals(a, b)
    return vals[np.isfinite(vals)]


def null_dimension(mat, rel_tol: float = 1e-9) -> int:
    s = np.linalg.svd(np.asarray(mat), compute_uv=False)
    if s[0] == 0:
        return len(s)
    return int(np.sum(s < rel_tol * s[0]))


def smallest_singular_ratio(mat) -> float:
    s = np.linalg.svd(np.asarray(mat), compute_uv=False)
    return float(s[-1] / s[0]) if s[0] else 0.0
