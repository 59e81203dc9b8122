"""Characteristic (Schur-class) matrix functions of the derivative models.

For a model of deficiency rank n the characteristic function is

    B(w) = gamma(w) * A(w, +)^{-1} A(w, -),

where A(w, sign)[j, k] pairs the raw defect exponentials at w against the
orthonormalized defect basis at sign * i. B is an n x n Schur-class function
on the upper half-plane with B(i) = 0. Real-axis values are understood as
upper continuations: the raw rates carry their Im w >= 0 branch down to the
boundary, so B extends continuously to R minus the branch points.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .cplane import cayley, is_unitary
from .defect import defect_basis, orthonormalize
from .errors import DimensionError, DomainError, NonUnitaryError, SingularError

__all__ = [
    "SchurFunction",
    "gram_matrix",
    "livsic_eval",
    "livsic_function",
    "equivalent_under",
    "conjugated_schur",
    "transform_alpha",
]


@dataclass
class SchurFunction:
    """A contractive analytic matrix function on the upper half-plane.

    Calling it at w with Im w < 0 raises DomainError; real w is allowed and
    means the boundary continuation from above.
    """

    n: int
    fn: object
    label: str = ""

    def __call__(self, w):
        w = complex(w)
        if w.imag < 0:
            raise DomainError("Schur function evaluated below the real axis")
        return self.fn(w)


@lru_cache(maxsize=64)
def _onb_terms(model, sign):
    """Coefficient/rate pairs of the orthonormalized defect basis at sign*i."""
    basis = orthonormalize(defect_basis(model, 1j if sign == "+" else -1j))
    return tuple(f.terms for f in basis.functions)


def gram_matrix(model, w, sign):
    """A(w, sign)[j, k] = <exp(rho_j(w) x), phi_k(sign * i)> in the model's L2.

    rho_j are the raw defect rates at w (upper branch on the real axis) and
    phi_k the orthonormal defect basis at +i or -i. sign is '+' or '-'.
    """
    if sign not in ("+", "-"):
        raise DomainError(f"sign must be '+' or '-', got {sign!r}")
    w = complex(w)
    rates = model.raw_rates(w)
    onb = _onb_terms(model, sign)
    n = len(rates)
    a = np.empty((n, n), dtype=complex)
    for j, rho in enumerate(rates):
        for k, terms in enumerate(onb):
            a[j, k] = sum(c.conjugate() * model.inner(rho, r) for c, r in terms)
    return a


def _solve_small(a, b, tol=1e-14):
    """a^{-1} b for n in {1, 2} via explicit formulas, keeping the
    singularity check independent of LAPACK behaviour."""
    n = a.shape[0]
    scale = max(1.0, float(np.max(np.abs(a)))) ** n
    if n == 1:
        det = a[0, 0]
        if abs(det) < tol * scale:
            raise SingularError(f"pairing matrix is singular, |det| = {abs(det):.3e}")
        return b / det
    if n == 2:
        det = a[0, 0] * a[1, 1] - a[0, 1] * a[1, 0]
        if abs(det) < tol * scale:
            raise SingularError(f"pairing matrix is singular, |det| = {abs(det):.3e}")
        adj = np.array([[a[1, 1], -a[0, 1]], [-a[1, 0], a[0, 0]]], dtype=complex)
        return adj @ b / det
    return np.linalg.solve(a, b)


def livsic_eval(model, w):
    """Characteristic function value B(w) = gamma(w) A(w,+)^{-1} A(w,-).

    Defined for Im w >= 0; real w gives the boundary continuation. Returns an
    n x n ndarray (also for n = 1).
    """
    w = complex(w)
    if w.imag < 0:
        raise DomainError("characteristic function is defined on the closed upper half-plane")
    a_plus = gram_matrix(model, w, "+")
    a_minus = gram_matrix(model, w, "-")
    return cayley(w) * _solve_small(a_plus, a_minus)


def livsic_function(model):
    """Package livsic_eval as a SchurFunction."""
    return SchurFunction(n=model.rank, fn=lambda w: livsic_eval(model, w),
                         label=model.name)


def _check_pair(b1, b2, r, q):
    r = np.atleast_2d(np.asarray(r, dtype=complex))
    q = np.atleast_2d(np.asarray(q, dtype=complex))
    if b1.n != b2.n:
        raise DimensionError(f"rank mismatch: {b1.n} vs {b2.n}")
    if r.shape != (b1.n, b1.n) or q.shape != (b1.n, b1.n):
        raise DimensionError(
            f"conjugating matrices must be {b1.n} x {b1.n}, got {r.shape} and {q.shape}"
        )
    if not (is_unitary(r) and is_unitary(q)):
        raise NonUnitaryError("conjugating matrices must be unitary")
    return r, q


def equivalent_under(b1, b2, r, q, samples, tol=1e-8):
    """True when B1(w) = R B2(w) Q holds at every sample point to tol."""
    r, q = _check_pair(b1, b2, r, q)
    for w in samples:
        d = np.atleast_2d(b1(w)) - r @ np.atleast_2d(b2(w)) @ q
        if np.max(np.abs(d)) > tol:
            return False
    return True


def conjugated_schur(b, r, q):
    """The Schur function w -> R b(w) Q for unitary R, Q."""
    r = np.atleast_2d(np.asarray(r, dtype=complex))
    q = np.atleast_2d(np.asarray(q, dtype=complex))
    if r.shape != (b.n, b.n) or q.shape != (b.n, b.n):
        raise DimensionError(
            f"conjugating matrices must be {b.n} x {b.n}, got {r.shape} and {q.shape}"
        )
    if not (is_unitary(r) and is_unitary(q)):
        raise NonUnitaryError("conjugating matrices must be unitary")
    return SchurFunction(n=b.n, fn=lambda w: r @ np.atleast_2d(b(w)) @ q,
                         label=(b.label + "~conj") if b.label else "conj")


def transform_alpha(alpha, r, q):
    """Perturbation parameter for B2 matching alpha for B1 = R B2 Q.

    If B1 = R B2 Q then I - B1 alpha* = R (I - B2 (R* alpha Q*)*) R*, so the
    measures satisfy measure(B1, alpha) = R measure(B2, R* alpha Q*) R*.
    """
    alpha = np.atleast_2d(np.asarray(alpha, dtype=complex))
    r = np.atleast_2d(np.asarray(r, dtype=complex))
    q = np.atleast_2d(np.asarray(q, dtype=complex))
    return r.conj().T @ alpha @ q.conj().T
