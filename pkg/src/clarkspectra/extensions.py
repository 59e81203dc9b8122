"""Quasi-derivatives, Lagrange brackets, and the boundary-condition maps.

Self-adjoint extensions of the symmetric models are parameterized two ways:
by boundary matrices (beta_a | beta_b) acting on quasi-derivative vectors at
the endpoints, and by a unitary n x n matrix alpha pairing the defect bases
at -i and +i. The maps between the two run through the extension generators

    g_i = -phi_i(+i) + sum_j alpha_ij phi_j(-i),

which must satisfy the boundary conditions; that is a linear system in
alpha (one direction) or an annihilator computation (the other).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .defect import defect_basis, orthonormalize
from .errors import (DimensionError, DomainError, NonUnitaryError, RankError,
                     UnsupportedError)

__all__ = [
    "QuasiDiffSpec",
    "canonical_q0",
    "canonical_c",
    "quasi_derivative",
    "hat_vector",
    "check_vector",
    "lagrange_bracket",
    "BoundaryMatrices",
    "validate_sa_matrices",
    "alpha_from_bc_k1",
    "bc_from_alpha_k1",
    "alpha_from_bc_l1",
    "bc_from_alpha_l1",
    "alpha_from_bc_regular",
    "bc_from_alpha_regular",
    "alpha_from_bc_singular_template",
]

_E14 = np.exp(1j * math.pi / 4)
_E34 = np.exp(3j * math.pi / 4)


@dataclass(frozen=True)
class QuasiDiffSpec:
    """Coefficient table of a quasi-derivative stack of order n.

    q is the n x n coefficient matrix with the Z_n shape: entries above the
    superdiagonal vanish, the superdiagonal is nonvanishing, and the implied
    entry q_{n, n+1} = 1 closes the stack. The r-th quasi-derivative is

        f^[0] = f,
        f^[r] = (1/q_{r,r+1}) ( (f^[r-1])' - sum_{s<=r} q_{r,s} f^[s-1] ).
    """

    n: int
    q: tuple

    def __post_init__(self):
        q = np.asarray(self.q, dtype=complex)
        if q.shape != (self.n, self.n):
            raise DimensionError(f"coefficient table must be {self.n} x {self.n}, got {q.shape}")
        for i in range(self.n):
            for j in range(self.n):
                if j > i + 1 and q[i, j] != 0:
                    raise DomainError("entries above the superdiagonal must vanish")
                if j == i + 1 and q[i, j] == 0:
                    raise DomainError("superdiagonal entries must be nonzero")
        object.__setattr__(self, "q", tuple(map(tuple, q)))

    def qmat(self):
        return np.asarray(self.q, dtype=complex)

    def super_entry(self, r):
        """q_{r, r+1} with the closing convention q_{n, n+1} = 1 (1-based r)."""
        return 1.0 + 0.0j if r == self.n else complex(self.q[r - 1][r])


def canonical_q0(n):
    """The trivial table: superdiagonal ones, zeros elsewhere, so that the
    quasi-derivatives are the ordinary derivatives."""
    q = np.zeros((n, n), dtype=complex)
    for i in range(n - 1):
        q[i, i + 1] = 1.0
    return QuasiDiffSpec(n=n, q=tuple(map(tuple, q)))


def canonical_c(n):
    """Antidiagonal bracket matrix C_{k,l} = (-1)^{l+1} delta_{k, n+1-l}."""
    c = np.zeros((n, n), dtype=complex)
    for ell in range(1, n + 1):
        c[n - ell, ell - 1] = (-1.0) ** (ell + 1)
    return c


def quasi_derivative(f, spec, r):
    """The r-th quasi-derivative of an exponential sum, 0 <= r <= n."""
    if not 0 <= r <= spec.n:
        raise DomainError(f"quasi-derivative order {r} outside 0..{spec.n}")
    qm = spec.qmat()
    stack = [f]
    for k in range(1, r + 1):
        v = stack[k - 1].derivative()
        for s in range(1, k + 1):
            coeff = qm[k - 1, s - 1]
            if coeff != 0:
                v = v - stack[s - 1].scale(coeff)
        stack.append(v.scale(1.0 / spec.super_entry(k)))
    return stack[r]


def hat_vector(f, spec, x):
    """(f^[0](x), ..., f^[n-1](x)) as a complex n-vector."""
    return np.array([quasi_derivative(f, spec, r)(x) for r in range(spec.n)],
                    dtype=complex)


def check_vector(f, spec, x):
    """conj(C hat(f)(x)): the boundary vector of the conjugated element."""
    return np.conj(canonical_c(spec.n) @ hat_vector(f, spec, x))


def lagrange_bracket(f, g, x, spec):
    """Sesquilinear boundary form [f, g](x) of an even-order expression:

        (-1)^{n/2} sum_{r=0}^{n-1} (-1)^{n+1-r}
            conj(g^[n-r-1](x)) f^[r](x).

    UnsupportedError for odd n (the alternating form above pairs the
    quasi-derivatives only when n is even).
    """
    n = spec.n
    if n % 2:
        raise UnsupportedError("boundary form implemented for even order only")
    total = 0.0 + 0.0j
    for r in range(n):
        total += ((-1.0) ** (n + 1 - r)
                  * np.conj(quasi_derivative(g, spec, n - r - 1)(x))
                  * quasi_derivative(f, spec, r)(x))
    return (-1.0) ** (n // 2) * total


@dataclass
class BoundaryMatrices:
    """Boundary-condition data (beta_a | beta_b) with its bracket matrix C.

    For regular problems both blocks are n x n, acting on hat vectors at the
    left resp. right endpoint. c defaults to the canonical bracket matrix of
    the block width.
    """

    beta_a: np.ndarray
    beta_b: np.ndarray
    c: np.ndarray = None

    def __post_init__(self):
        self.beta_a = np.atleast_2d(np.asarray(self.beta_a, dtype=complex))
        self.beta_b = np.atleast_2d(np.asarray(self.beta_b, dtype=complex))
        if self.c is None:
            self.c = canonical_c(self.beta_a.shape[1])
        else:
            self.c = np.atleast_2d(np.asarray(self.c, dtype=complex))


def validate_sa_matrices(bm, tol=1e-10):
    """True when (beta_a | beta_b) defines a self-adjoint restriction:

    rank (beta_a | beta_b) = n  and  beta_a C beta_a* = beta_b C beta_b*.

    Returns a bool; only genuinely malformed shapes raise DimensionError.
    """
    ba, bb, c = bm.beta_a, bm.beta_b, bm.c
    n = ba.shape[0]
    if ba.shape != (n, n) or bb.shape != (n, n) or c.shape != (n, n):
        raise DimensionError(
            f"expected three n x n blocks, got {ba.shape}, {bb.shape}, {c.shape}"
        )
    stacked = np.hstack([ba, bb])
    sv = np.linalg.svd(stacked, compute_uv=False)
    if np.sum(sv > 1e-10 * sv[0]) < n:
        return False
    lhs = ba @ c @ ba.conj().T
    rhs = bb @ c @ bb.conj().T
    return bool(np.max(np.abs(lhs - rhs)) <= tol)


# ---------------------------------------------------------------------------
# closed-form maps for the rank-one models
# ---------------------------------------------------------------------------

def alpha_from_bc_k1(b, c):
    """Unitary parameter of the half-line Robin condition b f(0) + c f'(0) = 0.

        alpha = (b + c e^{3 i pi/4}) / (b - c e^{i pi/4})

    (b : c) is projective; admissibility means b conj(c) real, which is the
    self-adjointness condition of the boundary form. c = 0 is the Dirichlet
    ray with alpha = 1.
    """
    b, c = complex(b), complex(c)
    scale = max(abs(b), abs(c))
    if scale == 0:
        raise DomainError("boundary ray (0, 0) is empty")
    if abs((b * c.conjugate()).imag) > 1e-10 * scale * scale:
        raise DomainError("b conj(c) must be real for a self-adjoint condition")
    den = b - c * _E14
    if abs(den) < 1e-14 * scale:
        raise DomainError("boundary ray degenerates (denominator vanished)")
    return (b + c * _E34) / den


def bc_from_alpha_k1(alpha):
    """Inverse of alpha_from_bc_k1, as a normalized representative of (b : c).

    The returned pair has its largest component positive real; b conj(c) is
    real automatically for unimodular alpha.
    """
    alpha = complex(alpha)
    if abs(abs(alpha) - 1.0) > 1e-10:
        raise NonUnitaryError(f"parameter must be unimodular, |alpha| = {abs(alpha):.6f}")
    if abs(alpha - 1.0) < 1e-14:
        return (1.0 + 0.0j, 0.0 + 0.0j)
    b = _E34 + alpha * _E14
    c = alpha - 1.0
    u = b if abs(b) >= abs(c) else c
    phase = u.conjugate() / abs(u)
    norm = math.hypot(abs(b), abs(c))
    return (b * phase / norm, c * phase / norm)


def alpha_from_bc_l1(beta, a):
    """Parameter of the interval condition f(a) = beta f(-a) for i d/dx:

        alpha = (beta q - 1) / (beta - q),   q = e^{-2a}.

    The map is a Moebius involution, so the inverse has the same form.
    """
    beta = complex(beta)
    if abs(abs(beta) - 1.0) > 1e-10:
        raise NonUnitaryError(f"coupling must be unimodular, |beta| = {abs(beta):.6f}")
    q = math.exp(-2.0 * float(a))
    return (beta * q - 1.0) / (beta - q)


def bc_from_alpha_l1(alpha, a):
    """Inverse map; identical Moebius formula by involutivity."""
    alpha = complex(alpha)
    if abs(abs(alpha) - 1.0) > 1e-10:
        raise NonUnitaryError(f"parameter must be unimodular, |alpha| = {abs(alpha):.6f}")
    q = math.exp(-2.0 * float(a))
    return (alpha * q - 1.0) / (alpha - q)


# ---------------------------------------------------------------------------
# generic maps through the extension generators
# ---------------------------------------------------------------------------

def _onb_functions(model, z):
    return orthonormalize(defect_basis(model, z)).functions


def _solve_alpha_system(nmat, pmat, rank_tol=1e-12, unitary_tol=1e-8):
    sv = np.linalg.svd(nmat, compute_uv=False)
    if sv[-1] < rank_tol * max(sv[0], 1.0):
        raise RankError("boundary system is rank deficient")
    alpha = np.linalg.solve(nmat, pmat).T
    n = alpha.shape[0]
    if np.max(np.abs(alpha.conj().T @ alpha - np.eye(n))) > unitary_tol:
        raise NonUnitaryError(
            "solved parameter is not unitary; boundary data is inconsistent"
        )
    return alpha


def alpha_from_bc_regular(model, bm):
    """Unitary parameter of the regular boundary conditions
    beta_a hat(f)(-a) + beta_b hat(f)(a) = 0 on the interval model."""
    if model.halfline:
        raise DomainError("regular map applies to interval models")
    n = model.order
    spec = canonical_q0(n)
    a = model.a
    minus = _onb_functions(model, -1j)
    plus = _onb_functions(model, 1j)
    if len(minus) != n:
        raise DimensionError(
            f"model deficiency {len(minus)} does not match expression order {n}"
        )
    nmat = np.empty((n, n), dtype=complex)
    pmat = np.empty((n, n), dtype=complex)
    for j in range(n):
        nmat[:, j] = (bm.beta_a @ hat_vector(minus[j], spec, -a)
                      + bm.beta_b @ hat_vector(minus[j], spec, a))
        pmat[:, j] = (bm.beta_a @ hat_vector(plus[j], spec, -a)
                      + bm.beta_b @ hat_vector(plus[j], spec, a))
    return _solve_alpha_system(nmat, pmat)


def bc_from_alpha_regular(model, alpha):
    """Boundary matrices of the extension generated by alpha.

    Builds the generators g_i = -phi_i(+i) + sum_j alpha_ij phi_j(-i),
    stacks their endpoint hat vectors into an n x 2n matrix and returns an
    orthonormal basis of its (bilinear) annihilator as condition rows, each
    row phase-normalized so its largest entry is positive real.
    """
    if model.halfline:
        raise DomainError("regular map applies to interval models")
    n = model.order
    alpha = np.atleast_2d(np.asarray(alpha, dtype=complex))
    if alpha.shape != (n, n):
        raise DimensionError(f"parameter must be {n} x {n}, got {alpha.shape}")
    if np.max(np.abs(alpha.conj().T @ alpha - np.eye(n))) > 1e-8:
        raise NonUnitaryError("parameter must be unitary")
    spec = canonical_q0(n)
    a = model.a
    minus = _onb_functions(model, -1j)
    plus = _onb_functions(model, 1j)
    gmat = np.empty((n, 2 * n), dtype=complex)
    for i in range(n):
        g = plus[i].scale(-1.0)
        for j in range(n):
            g = g + minus[j].scale(alpha[i, j])
        gmat[i, :n] = hat_vector(g, spec, -a)
        gmat[i, n:] = hat_vector(g, spec, a)
    u, sv, vh = np.linalg.svd(gmat)
    rank = int(np.sum(sv > 1e-10 * max(sv[0], 1.0)))
    if rank != n:
        raise RankError(f"generator matrix has rank {rank}, expected {n}")
    rows = np.conj(vh[rank:, :])
    out = np.empty_like(rows)
    for i, row in enumerate(rows):
        k = int(np.argmax(np.abs(row)))
        out[i] = row * (row[k].conjugate() / abs(row[k]))
    return BoundaryMatrices(beta_a=out[:, :n], beta_b=out[:, n:])


def alpha_from_bc_singular_template(model, bm, bracket_data=None, e=None):
    """Template for singular-endpoint boundary conditions on the half-line.

    bm.beta_a (shape n x order) acts on the ordinary-derivative hat vector
    at the regular endpoint 0. When the singular endpoint contributes,
    bracket_data = (bracket_plus, bracket_minus) holds the boundary-form
    values [phi_j(+-i), u_k] against a chosen bracket basis u_k (each n x m)
    and e (n x m, defaulting to bm.beta_b) weighs them into the conditions.
    With empty bracket data the system decouples to the regular-endpoint
    block, which for the rank-one model reproduces alpha_from_bc_k1.
    """
    if not model.halfline:
        raise DomainError("singular template applies to half-line models")
    n = model.rank
    order = model.order
    spec = canonical_q0(order)
    beta_a = np.atleast_2d(np.asarray(bm.beta_a, dtype=complex))
    if beta_a.shape != (n, order):
        raise DimensionError(
            f"regular-endpoint block must be {n} x {order}, got {beta_a.shape}"
        )
    minus = _onb_functions(model, -1j)
    plus = _onb_functions(model, 1j)
    nmat = np.empty((n, n), dtype=complex)
    pmat = np.empty((n, n), dtype=complex)
    for j in range(n):
        nmat[:, j] = beta_a @ hat_vector(minus[j], spec, 0.0)
        pmat[:, j] = beta_a @ hat_vector(plus[j], spec, 0.0)
    if bracket_data is not None:
        bracket_plus, bracket_minus = bracket_data
        bracket_plus = np.atleast_2d(np.asarray(bracket_plus, dtype=complex))
        bracket_minus = np.atleast_2d(np.asarray(bracket_minus, dtype=complex))
        weights = bm.beta_b if e is None else e
        weights = np.atleast_2d(np.asarray(weights, dtype=complex))
        if weights.shape[0] != n or bracket_plus.shape != (n, weights.shape[1]):
            raise DimensionError("bracket data and weight shapes are inconsistent")
        for j in range(n):
            nmat[:, j] += np.conj(weights) @ bracket_minus[j]
            pmat[:, j] += np.conj(weights) @ bracket_plus[j]
    return _solve_alpha_system(nmat, pmat)
